"""Dimer quivers on the torus: matchings, path equality, monomial semigroups
and cancellativity checks."""

__version__ = "0.1.0"
