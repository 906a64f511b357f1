"""Cancellativity, its witnesses, and the combined equivalence report."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .bounds import Bounds, default_bounds
from .matchings import (
    enumerate_perfect_matchings,
    nondegenerate,
    simple_matchings,
    simple_module_from_matching,
)
from .model import DimerQuiver
from .paths import (
    PathWord,
    Weight,
    degree,
    enumerate_paths,
    eq_class,
    equal_mod_I,
    eta_weight,
    sigma_divides,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = "dimerkit.criteria/1"


class Degenerate(ValueError):
    """Some arrow lies in no perfect matching."""


class PreconditionError(ValueError):
    pass


class InconsistentReport(AssertionError):
    """Decided conditions disagree; this signals a bug, never a property of the input."""


def require_nondegenerate(q: DimerQuiver) -> None:
    ok, uncovered = nondegenerate(q)
    if not ok:
        raise Degenerate("arrows in no perfect matching: " + ", ".join(q.names(uncovered)))


# ----------------------------------------------------------------------------
# cancellativity


@dataclass(frozen=True)
class CancellativeCertificate:
    cancellative: bool
    covering: dict  # arrow id -> id of a simple matching containing it
    offending: frozenset[int]
    no_simple_matchings: bool = False

    def to_dict(self, q: DimerQuiver) -> dict:
        names = {d.id: d.name(q) for d in enumerate_perfect_matchings(q)}
        return {
            "cancellative": self.cancellative,
            "covering": {q.arrows[a].name: names[m] for a, m in sorted(self.covering.items())},
            "uncovered_arrows": q.names(sorted(self.offending)),
            "no_simple_matchings": self.no_simple_matchings,
        }


def check_cancellative(q: DimerQuiver) -> CancellativeCertificate:
    """Decide cancellativity: every arrow must lie in some simple matching."""
    require_nondegenerate(q)
    covering: dict[int, int] = {}
    sm = simple_matchings(q)
    for d in sm:
        for a in sorted(d.arrows):
            covering.setdefault(a, d.id)
    offending = frozenset(a.id for a in q.arrows if a.id not in covering)
    return CancellativeCertificate(not offending, covering, offending, not sm)


# ----------------------------------------------------------------------------
# non-cancellative pairs


@dataclass(frozen=True)
class NoncancellativeWitness:
    p: PathWord
    q: PathWord
    eta: Weight
    class_size: int  # size of the class of p, which excludes q
    r: PathWord | None = None
    side: str | None = None  # "left": r p = r q, "right": p r = q r
    chain: tuple = ()  # substitution chain between the two products

    def products(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        if self.r is None:
            return None
        if self.side == "left":
            return self.p.arrows + self.r.arrows, self.q.arrows + self.r.arrows
        return self.r.arrows + self.p.arrows, self.r.arrows + self.q.arrows

    def to_dict(self, qv: DimerQuiver) -> dict:
        d = {
            "p": self.p.names(qv),
            "q": self.q.names(qv),
            "eta": list(self.eta),
            "class_size_of_p": self.class_size,
            "multiplier": None if self.r is None else self.r.names(qv),
            "side": self.side,
        }
        if self.chain:
            d["chain"] = [qv.names(w) for w in self.chain]
        return d


def _distinct_class_pairs(q: DimerQuiver, max_len: int, cap: int):
    """Pairs of paths with equal endpoints, winding and perfect-matching weight,
    lying in different classes; canonical order."""
    groups: dict[tuple, list[PathWord]] = {}
    for p in enumerate_paths(q, max_len):
        groups.setdefault((p.tail, p.head, p.winding, eta_weight(q, p)), []).append(p)
    keys = sorted(groups, key=lambda k: (degree(k[3]), k))
    for key in keys:
        members = sorted(groups[key], key=lambda p: (len(p), p.arrows))
        if len(members) < 2:
            continue
        reps: list[tuple[PathWord, frozenset]] = []
        for p in members:
            if any(p.arrows in cls for _, cls in reps):
                continue
            reps.append((p, eq_class(q, p, cap).members))
        for (p, cp), (r, _) in itertools.combinations(reps, 2):
            yield p, r, len(cp)


def _multipliers(q: DimerQuiver, vertex: int, length: int, forward: bool):
    """Paths of exactly ``length`` leaving (forward) or entering ``vertex``."""
    out = []
    for r in enumerate_paths(q, length, start=vertex if forward else None):
        if len(r) == length and (forward or r.head == vertex):
            out.append(r)
    return out


def find_noncancellative_pair(q: DimerQuiver, max_len: int | None = None,
                              bounds: Bounds | None = None) -> NoncancellativeWitness | None:
    """Search for distinct paths with equal perfect-matching weight.

    Such a pair is already non-cancellative; a short multiplier r with
    ``r p = r q`` (or ``p r = q r``) is searched as an explicit certificate,
    shortest multipliers first.  Returns None when nothing is found within
    the bounds, which says nothing about cancellativity.
    """
    require_nondegenerate(q)
    b = bounds or default_bounds()
    max_len = b.pair_len if max_len is None else max_len
    pairs = list(_distinct_class_pairs(q, max_len, b.class_cap))
    if not pairs:
        return None
    for length in range(1, b.multiplier_len + 1):
        for p, r, size in pairs:
            for side in ("left", "right"):
                cands = _multipliers(q, p.head if side == "left" else p.tail, length, side == "left")
                for m in cands:
                    lp, lr = (p.then(m), r.then(m)) if side == "left" else (m.then(p), m.then(r))
                    eq = equal_mod_I(q, lp, lr, b.class_cap)
                    if eq.equal:
                        return NoncancellativeWitness(p, r, eta_weight(q, p), size, m, side, eq.chain)
    p, r, size = pairs[0]
    return NoncancellativeWitness(p, r, eta_weight(q, p), size)


# ----------------------------------------------------------------------------
# nonnoetherian witnesses


@dataclass(frozen=True)
class NonnoetherianWitness:
    cycle: PathWord  # sigma-reduced cycle at vertex i
    vertex: int  # j, whose corner semigroup misses every power of the cycle's weight
    weight: Weight
    powers_checked: int
    N: int | None = None  # least N with weight + N*sigma in the corner at j, if found

    def to_dict(self, q: DimerQuiver) -> dict:
        return {
            "cycle": self.cycle.names(q),
            "at_vertex": self.cycle.tail,
            "missing_at_vertex": self.vertex,
            "weight": list(self.weight),
            "powers_checked": self.powers_checked,
            "N": self.N if self.N is not None else "exists, not computed within bounds",
        }


def nonnoetherian_witness(q: DimerQuiver, psi, bounds: Bounds | None = None) -> NonnoetherianWitness | None:
    """A sigma-reduced cycle whose weight (and its powers) miss another corner semigroup."""
    from .algebras import corner_semigroups

    if check_cancellative(q).cancellative:
        raise PreconditionError("a cancellative quiver has no nonnoetherian witness")
    if psi is None:
        raise PreconditionError("a cyclic contraction is required")
    corners = corner_semigroups(q, psi, bounds)
    bound = min(c.degree_bound for c in corners)
    sigma = corners[0].sigma
    for i, ci in enumerate(corners):
        for g in sorted(ci.generators, key=lambda w: (degree(w), w)):
            if sigma_divides(g):
                continue
            for j, cj in enumerate(corners):
                if g in cj:
                    continue
                n = 1
                while degree(g) * (n + 1) <= bound and tuple(x * (n + 1) for x in g) not in cj:
                    n += 1
                N = None
                for m in range(1, bound + 1):
                    w = tuple(x + m * s for x, s in zip(g, sigma))
                    if degree(w) > bound:
                        break
                    if w in cj:
                        N = m
                        break
                cycle = PathWord.from_arrows(q, ci.witnesses[g], start=i)
                return NonnoetherianWitness(cycle, j, g, n, N)
    return None


# ----------------------------------------------------------------------------
# free subalgebras


@dataclass(frozen=True)
class PIReport:
    status: str  # "vacuous", "condition-not-met", "condition-met-located", "condition-met-not-located"
    condition: dict  # contracted arrow name -> which endpoint has degree one, or None
    free_pair: tuple | None = None  # (cycle x, cycle y) as arrow-name lists
    depth: int = 0  # word length up to which freeness was verified

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "condition": self.condition,
            "free_pair": None if self.free_pair is None else [list(x) for x in self.free_pair],
            "verified_word_length": self.depth,
        }


def free_at_depth(q: DimerQuiver, x: PathWord, y: PathWord, depth: int, cap: int) -> bool:
    """Are all words of length <= depth in the cycles x, y pairwise distinct?

    Words with different letter counts have different perfect-matching
    weights unless x and y do, so only same-composition words are compared
    when the weights differ.
    """
    if x.tail != y.tail or not x.is_cycle or not y.is_cycle:
        return False
    for n in range(1, depth + 1):
        words = [tuple(itertools.chain.from_iterable((x if c == 0 else y).arrows for c in combo))
                 for combo in itertools.product((0, 1), repeat=n)]
        if len(set(words)) < len(words):
            return False
        by_eta: dict[Weight, list] = {}
        for w in words:
            by_eta.setdefault(eta_weight(q, PathWord.from_arrows(q, w, start=x.tail)), []).append(w)
        for group in by_eta.values():
            for k, w in enumerate(group[:-1]):
                try:
                    cls = eq_class(q, PathWord.from_arrows(q, w, start=x.tail), cap)
                except RuntimeError:
                    return False
                if any(v in cls for v in group[k + 1:]):
                    return False
    return True


def pi_obstruction(q: DimerQuiver, psi, bounds: Bounds | None = None, depth: int = 3) -> PIReport:
    """Degree-one condition on contracted arrows, and a bounded search for a free pair."""
    b = bounds or default_bounds()
    if psi is None or psi.trivial:
        return PIReport("vacuous", {})
    condition = {}
    for a in sorted(psi.contracted):
        arr = q.arrows[a]
        if len(q.in_arrows[arr.head]) == 1:
            condition[arr.name] = "head"
        elif len(q.out_arrows[arr.tail]) == 1:
            condition[arr.name] = "tail"
        else:
            condition[arr.name] = None
    met = all(v is not None for v in condition.values())
    pair = None
    wit = find_noncancellative_pair(q, bounds=b)
    if wit is not None:
        p, r = wit.p, wit.q
        for length in range(0, b.multiplier_len + 1):
            for s in ([PathWord.trivial(p.head)] if length == 0 else _multipliers(q, p.head, length, True)):
                if s.head != p.tail:
                    continue
                x, y = p.then(s), r.then(s)
                if free_at_depth(q, x, y, depth, b.class_cap):
                    pair = (tuple(x.names(q)), tuple(y.names(q)))
                    break
            if pair:
                break
    if not met:
        return PIReport("condition-not-met", condition, pair, depth if pair else 0)
    status = "condition-met-located" if pair else "condition-met-not-located"
    return PIReport(status, condition, pair, depth if pair else 0)


# ----------------------------------------------------------------------------
# the combined report

CONDITIONS = {
    1: "A is cancellative",
    2: "A is noetherian",
    3: "Z is noetherian",
    4: "A is a finitely generated Z-module",
    5: "the vertex corner rings are pairwise isomorphic",
    6: "each vertex corner ring is isomorphic to Z",
    7: "each arrow annihilates a simple module of dimension 1 at every vertex",
    8: "each arrow is contained in a simple matching",
    9: "S = R for a cyclic contraction",
    10: "a cyclic contraction is trivial",
}

DECIDED = ("holds", "fails")


@dataclass(frozen=True)
class ConditionVerdict:
    number: int
    verdict: str  # "holds", "fails", "holds-at-bound", "not-evaluated"
    method: str
    certificate: object = None

    def to_dict(self) -> dict:
        return {
            "condition": CONDITIONS[self.number],
            "verdict": self.verdict,
            "method": self.method,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class CriteriaReport:
    conditions: tuple[ConditionVerdict, ...]
    bounds: dict
    contraction: dict | None
    flags: tuple[str, ...] = ()
    witnesses: dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> ConditionVerdict:
        return self.conditions[n - 1]

    @property
    def cancellative(self) -> bool:
        return self[1].verdict == "holds"

    @property
    def all_hold(self) -> bool:
        return all(c.verdict in ("holds", "holds-at-bound") for c in self.conditions)

    @property
    def all_fail(self) -> bool:
        return all(c.verdict in ("fails", "not-evaluated") for c in self.conditions)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "cancellative": self.cancellative,
            "conditions": {str(c.number): c.to_dict() for c in self.conditions},
            "bounds": self.bounds,
            "contraction": self.contraction,
            "flags": list(self.flags),
            "witnesses": self.witnesses,
        }


def check_consistency(conditions) -> None:
    """All decided verdicts agree, and no bounded 'holds' faces a decided 'fails'."""
    decided = {c.verdict for c in conditions if c.verdict in DECIDED}
    if len(decided) > 1:
        raise InconsistentReport(
            "decided conditions disagree: "
            + ", ".join(f"({c.number}) {c.verdict}" for c in conditions if c.verdict in DECIDED)
        )
    if "fails" in decided and any(c.verdict == "holds-at-bound" for c in conditions):
        bad = [c.number for c in conditions if c.verdict == "holds-at-bound"]
        raise InconsistentReport(f"conditions {bad} hold at the bound but the quiver is non-cancellative")


def _annihilation_check(q: DimerQuiver) -> tuple[bool, list[str]]:
    killed: set[int] = set()
    for d in simple_matchings(q):
        rep = simple_module_from_matching(q, d)
        killed |= {a.id for a in q.arrows if rep.annihilates(a.id)}
    missing = [a.name for a in q.arrows if a.id not in killed]
    return not missing, missing


def theorem_report(q: DimerQuiver, psi=None, bounds: Bounds | None = None,
                   search_contraction: bool = True) -> CriteriaReport:
    """Evaluate all ten equivalent conditions, each by its own route where one exists."""
    from .algebras import check_R_equals_S, compare_corner_rings
    from .contraction import find_cyclic_contraction, identity_contraction, verify_cyclic

    b = bounds or default_bounds()
    cert = check_cancellative(q)
    canc = cert.cancellative
    flags = []
    if cert.no_simple_matchings:
        flags.append("no simple matchings: cycle weights are constant")
    out: dict[int, ConditionVerdict] = {}
    witnesses: dict = {}
    out[1] = ConditionVerdict(1, "holds" if canc else "fails", "simple-matching coverage", cert.to_dict(q))
    out[8] = ConditionVerdict(8, "holds" if canc else "fails", "arrows in no simple matching",
                              q.names(sorted(cert.offending)))
    ok7, missing7 = _annihilation_check(q)
    out[7] = ConditionVerdict(7, "holds" if ok7 else "fails", "simple modules built from simple matchings",
                              missing7)

    if psi is None:
        if canc:
            psi = identity_contraction(q)
        elif search_contraction:
            psi = find_cyclic_contraction(q, b)
    psi_ok = False
    if psi is not None:
        verdict = verify_cyclic(psi, b)
        psi_ok = verdict.cyclic
        if not psi_ok:
            flags.append(f"contraction is not cyclic: {verdict.reason}")
    elif not canc:
        flags.append("no cyclic contraction found within bounds")

    if psi_ok:
        use = None if psi.trivial else psi
        cmp = compare_corner_rings(q, use, b)
        bound = cmp.semigroups[0].degree_bound
        diff = cmp.first_difference()
        if diff is None:
            out[5] = ConditionVerdict(5, "holds-at-bound", f"corner semigroups equal up to degree {bound}")
        else:
            i, j, w = diff
            out[5] = ConditionVerdict(5, "fails", "corner semigroups differ",
                                      {"in_corner": i, "missing_from_corner": j,
                                       "monomial": cmp.semigroups[i].monomial(w)})
        rs = check_R_equals_S(q, use, b)
        if rs.status == "equal-at-bound":
            out[9] = ConditionVerdict(9, "holds-at-bound", f"R and S agree up to degree {rs.S.degree_bound}")
        elif rs.status == "differ":
            out[9] = ConditionVerdict(9, "fails", "a generator of S misses a corner",
                                      {"monomial": rs.S.monomial(rs.witness), "vertex": rs.missing_vertex})
        else:
            out[9] = ConditionVerdict(9, "not-evaluated", "R versus S inconclusive at the bounds; raise them")
        # corners equal to R, which is Z in the cancellative case
        R = rs.R
        off = [i for i, c in enumerate(cmp.semigroups) if not c.equal_at_bound(R)]
        if off:
            out[6] = ConditionVerdict(6, "fails", "corner semigroups differ from their intersection",
                                      {"vertices": off})
        else:
            out[6] = ConditionVerdict(6, "holds-at-bound", f"every corner equals the intersection up to degree {bound}")
        out[10] = ConditionVerdict(10, "holds" if psi.trivial else "fails", "contracted arrow set",
                                   q.names(sorted(psi.contracted)))
    else:
        for n in (5, 6, 9, 10):
            out[n] = ConditionVerdict(n, "not-evaluated", "needs a verified cyclic contraction")

    implied = "holds" if canc else "fails"
    for n in (2, 3, 4):
        out[n] = ConditionVerdict(n, implied, "derived via the equivalence with condition 1")
    if not canc:
        pair = find_noncancellative_pair(q, bounds=b)
        if pair is not None:
            witnesses["noncancellative_pair"] = pair.to_dict(q)
        if psi_ok:
            nn = nonnoetherian_witness(q, psi, b)
            if nn is not None:
                witnesses["nonnoetherian"] = nn.to_dict(q)
            witnesses["free_subalgebra"] = pi_obstruction(q, psi, b).to_dict()

    conditions = tuple(out[n] for n in sorted(out))
    check_consistency(conditions)
    return CriteriaReport(
        conditions,
        b.resolve(q, len(simple_matchings(q))).to_dict(),
        None if psi is None else psi.to_dict(),
        tuple(flags),
        witnesses,
    )
