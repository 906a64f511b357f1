"""Arrow contractions between dimer quivers and the search for cyclic ones."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

from .bounds import Bounds, default_bounds
from .model import ZERO, Arrow, DimerQuiver, Face, Winding, validate, wadd, wsub
from .paths import NotComposable, PathWord, RewriteSystem, Weight, equal_mod_I, tau_table

log = logging.getLogger(__name__)


class ContractionError(ValueError):
    pass


@dataclass(frozen=True)
class Contraction:
    source: DimerQuiver
    contracted: frozenset[int]
    target: DimerQuiver
    vertex_map: tuple[int, ...]
    arrow_map: tuple[int | None, ...]  # None for contracted arrows
    status: str = "unverified"  # "unverified", "relations-ok", "cyclic-at-bound"
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def trivial(self) -> bool:
        return not self.contracted

    @property
    def variables(self) -> tuple[str, ...]:
        from .matchings import simple_matchings

        return tuple(d.name(self.target) for d in simple_matchings(self.target))

    def image(self, p: PathWord) -> PathWord:
        word = [self.arrow_map[a] for a in p.arrows if self.arrow_map[a] is not None]
        return PathWord.from_arrows(self.target, word, start=self.vertex_map[p.tail])

    def source_table(self) -> tuple[Weight, ...]:
        """Exponent vector of each source arrow's image over the target's simple matchings."""
        if "table" not in self._memo:
            tt = tau_table(self.target)
            zero = (0,) * len(self.variables)
            self._memo["table"] = tuple(zero if b is None else tt[b] for b in self.arrow_map)
        return self._memo["table"]

    def tau_psi(self, p: PathWord) -> Weight:
        table = self.source_table()
        acc = [0] * len(self.variables)
        for a in p.arrows:
            for k, x in enumerate(table[a]):
                acc[k] += x
        return tuple(acc)

    def to_dict(self) -> dict:
        s = self.source
        return {
            "contracted": s.names(sorted(self.contracted)),
            "vertex_map": {str(v): self.vertex_map[v] for v in s.vertices},
            "arrow_map": {
                s.arrows[a].name: (None if b is None else self.target.arrows[b].name)
                for a, b in enumerate(self.arrow_map)
            },
            "status": self.status,
        }


def contract(q: DimerQuiver, arrows: Iterable[int | str]) -> Contraction:
    """Collapse an undirected-acyclic arrow set to vertices.

    Each merged class takes its smallest source vertex as representative and
    classes are renumbered densely in that order.  Windings of the remaining
    arrows are shifted so that every cycle keeps its winding.
    """
    contracted = frozenset(q.ids(arrows))
    parent = list(q.vertices)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in sorted(contracted):
        arr = q.arrows[a]
        rt, rh = find(arr.tail), find(arr.head)
        if rt == rh:
            raise ContractionError(f"contracting {arr.name} would contract a cycle")
        parent[max(rt, rh)] = min(rt, rh)

    # offsets of each vertex relative to its class representative
    offset: dict[int, Winding] = {}
    adj: dict[int, list[Arrow]] = {}
    for a in contracted:
        arr = q.arrows[a]
        adj.setdefault(arr.tail, []).append(arr)
        adj.setdefault(arr.head, []).append(arr)
    for v in q.vertices:
        if find(v) != v:
            continue
        offset[v] = ZERO
        stack = [v]
        while stack:
            x = stack.pop()
            for arr in adj.get(x, ()):
                if arr.tail == x and arr.head not in offset:
                    offset[arr.head] = wsub(offset[x], arr.winding)
                    stack.append(arr.head)
                elif arr.head == x and arr.tail not in offset:
                    offset[arr.tail] = wadd(offset[x], arr.winding)
                    stack.append(arr.tail)

    reps = sorted({find(v) for v in q.vertices})
    new_id = {r: k for k, r in enumerate(reps)}
    vertex_map = tuple(new_id[find(v)] for v in q.vertices)

    arrow_map: list[int | None] = []
    new_arrows: list[Arrow] = []
    for arr in q.arrows:
        if arr.id in contracted:
            arrow_map.append(None)
            continue
        w = wsub(wadd(arr.winding, offset[arr.head]), offset[arr.tail])
        k = len(new_arrows)
        new_arrows.append(Arrow(k, arr.name, vertex_map[arr.tail], vertex_map[arr.head], w))
        arrow_map.append(k)

    new_faces = []
    for f in q.faces:
        bd = tuple(arrow_map[a] for a in f.boundary if arrow_map[a] is not None)
        if not bd:
            raise ContractionError(f"face {f.id} collapses to a point")
        new_faces.append(Face(f.id, f.sign, bd))

    pos = None
    if q.pos is not None:
        pos = tuple(q.pos[r] for r in reps)
    target = DimerQuiver(len(reps), tuple(new_arrows), tuple(new_faces), pos)
    return Contraction(q, contracted, target, vertex_map, tuple(arrow_map))


def identity_contraction(q: DimerQuiver) -> Contraction:
    return contract(q, ())


def relation_failures(psi: Contraction, cap: int = 200_000) -> list[tuple[str, str]]:
    """Source relations whose images are not equal in the target, with the reason."""
    rs = RewriteSystem.of(psi.source)
    out = []
    for arr in psi.source.arrows:
        start = arr.head
        try:
            lhs = psi.image(PathWord.from_arrows(psi.source, rs.plus[arr.id], start=start))
            rhs = psi.image(PathWord.from_arrows(psi.source, rs.minus[arr.id], start=start))
        except NotComposable as exc:
            out.append((arr.name, f"image not composable: {exc}"))
            continue
        eq = equal_mod_I(psi.target, lhs, rhs, cap)
        if not eq.equal:
            out.append((arr.name, eq.status + (f" ({eq.reason})" if eq.reason else "")))
    return out


def verify_relations(psi: Contraction) -> bool:
    """Does the map send every defining relation into the target ideal?"""
    return not relation_failures(psi)


@dataclass(frozen=True)
class CyclicVerdict:
    status: str  # "cyclic-at-bound", "not-cyclic", "inconclusive"
    reason: str = ""
    witness: object = None

    @property
    def cyclic(self) -> bool:
        return self.status == "cyclic-at-bound"


def verify_cyclic(psi: Contraction, bounds: Bounds | None = None) -> CyclicVerdict:
    """Check a contraction is cyclic, up to the semigroup degree bound.

    (a) contracted arrows lie in no simple matching of the source,
    (b) the target is cancellative,
    (c) every cycle-algebra generator of the target is realized by a source cycle.
    Source cycle weights are exact up to the degree bound, so a missing
    generator is a genuine failure.
    """
    from .algebras import corner_semigroups, target_cycle_algebra, union_semigroup
    from .criteria import Degenerate, check_cancellative
    from .matchings import qs_arrows

    bounds = bounds or default_bounds()
    bad = psi.contracted - qs_arrows(psi.source)
    if bad:
        names = psi.source.names(sorted(bad))
        return CyclicVerdict("not-cyclic", "contracted arrow lies in a simple matching", names)
    report = validate(psi.target)
    if not report.valid:
        return CyclicVerdict("not-cyclic", "target is not a dimer quiver", report.failed)
    if not verify_relations(psi):
        return CyclicVerdict("not-cyclic", "relations are not preserved", relation_failures(psi))
    try:
        cert = check_cancellative(psi.target)
    except Degenerate as exc:
        return CyclicVerdict("not-cyclic", f"target is degenerate: {exc}")
    if not cert.cancellative:
        return CyclicVerdict("not-cyclic", "target is not cancellative",
                             psi.target.names(sorted(cert.offending)))
    if psi.trivial:
        return CyclicVerdict("cyclic-at-bound", "identity contraction of a cancellative quiver")
    target_s = target_cycle_algebra(psi, bounds)
    source_s = union_semigroup(corner_semigroups(psi.source, psi, bounds), "cycle algebra")
    missing = [g for g in target_s.generators if g not in source_s]
    if missing:
        return CyclicVerdict("not-cyclic", "target cycle-algebra generator not realized by a source cycle",
                             target_s.monomial(missing[0]))
    return CyclicVerdict("cyclic-at-bound", f"cycle algebras agree up to degree {target_s.degree_bound}")


def candidate_sets(q: DimerQuiver) -> Iterator[tuple[int, ...]]:
    """Subsets of the arrows in no simple matching, largest first, then lexicographic."""
    from .matchings import qs_arrows

    qs = sorted(qs_arrows(q))
    for size in range(len(qs), 0, -1):
        yield from itertools.combinations(qs, size)


def cyclic_contractions(q: DimerQuiver, bounds: Bounds | None = None,
                        max_candidates: int | None = None) -> Iterator[Contraction]:
    """Every verified cyclic contraction in search order."""
    from .criteria import check_cancellative

    if check_cancellative(q).cancellative:
        psi = identity_contraction(q)
        yield replace(psi, status="cyclic-at-bound")
        return
    for n, subset in enumerate(candidate_sets(q)):
        if max_candidates is not None and n >= max_candidates:
            log.info("candidate limit %d reached", max_candidates)
            return
        try:
            psi = contract(q, subset)
        except ContractionError as exc:
            log.debug("skip %s: %s", q.names(subset), exc)
            continue
        verdict = verify_cyclic(psi, bounds)
        log.debug("candidate %s: %s (%s)", q.names(subset), verdict.status, verdict.reason)
        if verdict.cyclic:
            yield replace(psi, status="cyclic-at-bound")


def find_cyclic_contraction(q: DimerQuiver, bounds: Bounds | None = None,
                            max_candidates: int | None = None) -> Contraction | None:
    """First verified cyclic contraction, or None if the search finds none.

    None is not a proof of nonexistence; it only reflects the bounds.
    """
    return next(cyclic_contractions(q, bounds, max_candidates), None)


def reduce_2cycles(q: DimerQuiver) -> DimerQuiver:
    """Remove unit 2-cycles: delete both arrows and merge their other faces."""
    arrows = list(q.arrows)
    faces = {f.id: f for f in q.faces}
    removed: set[int] = set()
    while True:
        two = next(
            (f for f in sorted(faces.values(), key=lambda f: f.id)
             if len(f.boundary) == 2 and not set(f.boundary) & removed),
            None,
        )
        if two is None:
            break
        a, b = two.boundary
        other = {}
        for f in faces.values():
            if f.id != two.id:
                for x in (a, b):
                    if x in f.boundary:
                        other[x] = f
        fa, fb = other.get(a), other.get(b)
        if fa is None or fb is None or fa.id == fb.id:
            break
        ka, kb = fa.boundary.index(a), fb.boundary.index(b)
        rest_a = fa.boundary[ka + 1:] + fa.boundary[:ka]
        rest_b = fb.boundary[kb + 1:] + fb.boundary[:kb]
        merged = Face(min(fa.id, fb.id), fa.sign, rest_a + rest_b)
        for fid in (two.id, fa.id, fb.id):
            del faces[fid]
        faces[merged.id] = merged
        removed |= {a, b}
    keep = [arr for arr in arrows if arr.id not in removed]
    renum = {arr.id: k for k, arr in enumerate(keep)}
    new_arrows = tuple(Arrow(renum[x.id], x.name, x.tail, x.head, x.winding) for x in keep)
    new_faces = tuple(
        Face(k, f.sign, tuple(renum[a] for a in f.boundary))
        for k, f in enumerate(sorted(faces.values(), key=lambda f: f.id))
    )
    return DimerQuiver(q.num_vertices, new_arrows, new_faces, q.pos)


def contraction_from_dict(q: DimerQuiver, d: dict) -> Contraction:
    """Rebuild a contraction of ``q`` from its JSON form (only the arrow set is used)."""
    return contract(q, d["contracted"])
