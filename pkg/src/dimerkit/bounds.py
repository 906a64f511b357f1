"""Search bounds shared by the enumeration-heavy operations."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .model import DimerQuiver

ENV_VAR = "DIMERKIT_DEFAULT_BOUNDS"

PROFILES = {
    "desk": {},
    "quick": {"pair_len": 3, "multiplier_len": 2, "class_cap": 50_000},
    "deep": {"max_winding": 3, "pair_len": 5, "multiplier_len": 4},
}


@dataclass(frozen=True)
class Bounds:
    """``None`` fields are resolved per quiver by :meth:`resolve`.

    max_len        path length for enumeration (default 2 * longest face * |Q0|);
                   semigroup searches ignore it unless it is set explicitly
    max_winding    infinity-norm bound on windings searched for reduced cycles
    degree         total degree bound for monomial semigroups
                   (default 3 * number of variables)
    class_cap      largest equivalence class computed before giving up
    matching_cap   largest number of perfect matchings enumerated
    pair_len       path length searched for non-cancellative pairs
    multiplier_len length of the multiplier r searched with a pair
    """

    max_len: int | None = None
    max_winding: int = 2
    degree: int | None = None
    class_cap: int = 200_000
    matching_cap: int = 100_000
    pair_len: int = 4
    multiplier_len: int = 3

    def resolve(self, q: DimerQuiver, nvars: int | None = None) -> "Bounds":
        b = self
        if b.max_len is None:
            b = replace(b, max_len=2 * q.longest_face * q.num_vertices)
        if b.degree is None and nvars is not None:
            b = replace(b, degree=3 * nvars)
        return b

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def parse_bounds(spec: str) -> Bounds:
    """``"deep"`` or ``"degree=8,max_len=10"`` or ``"quick,degree=6"``."""
    kwargs: dict = {}
    names = {f.name for f in fields(Bounds)}
    for item in filter(None, (s.strip() for s in spec.split(","))):
        if "=" in item:
            key, value = (s.strip() for s in item.split("=", 1))
            if key not in names:
                raise ValueError(f"unknown bound {key!r}")
            kwargs[key] = None if value.lower() == "none" else int(value)
        elif item in PROFILES:
            kwargs.update(PROFILES[item])
        else:
            raise ValueError(f"unknown bounds profile {item!r}")
    return Bounds(**kwargs)


def default_bounds() -> Bounds:
    spec = os.environ.get(ENV_VAR)
    return parse_bounds(spec) if spec else Bounds()
