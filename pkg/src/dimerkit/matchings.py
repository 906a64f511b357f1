"""Perfect and simple matchings.

Perfect matchings are found by exact-cover backtracking with the faces as
constraints: each face must receive exactly one arrow, and choosing an arrow
covers both faces it borders.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import DimerQuiver


class TooManyMatchings(RuntimeError):
    pass


DEFAULT_MATCHING_CAP = 100_000


@dataclass(frozen=True)
class PerfectMatching:
    id: int
    arrows: frozenset[int]
    simple: bool

    def name(self, q: DimerQuiver) -> str:
        return "D(" + ",".join(q.names(sorted(self.arrows))) + ")"


@dataclass(frozen=True)
class SimpleModuleWitness:
    support: frozenset[int]
    walk: tuple[int, ...]  # closed walk of support arrows visiting every vertex


def _exact_cover(q: DimerQuiver, cap: int) -> list[tuple[int, ...]]:
    nfaces = len(q.faces)
    faces_of = [[f for f in pm if f is not None] for pm in q.arrow_faces]
    covered = [False] * nfaces
    chosen: list[int] = []
    out: list[tuple[int, ...]] = []

    def candidates(f: int) -> list[int]:
        return [a for a in q.faces[f].boundary if not any(covered[g] for g in faces_of[a])]

    def search() -> None:
        best, best_c = None, None
        for f in range(nfaces):
            if covered[f]:
                continue
            c = candidates(f)
            if best_c is None or len(c) < len(best_c):
                best, best_c = f, c
                if not c:
                    return
        if best is None:
            out.append(tuple(sorted(chosen)))
            if len(out) > cap:
                raise TooManyMatchings(f"more than {cap} perfect matchings")
            return
        for a in best_c:
            for g in faces_of[a]:
                covered[g] = True
            chosen.append(a)
            search()
            chosen.pop()
            for g in faces_of[a]:
                covered[g] = False

    search()
    return sorted(set(out))


def _reach(q: DimerQuiver, allowed: frozenset[int] | set[int], start: int, reverse: bool = False) -> dict[int, int | None]:
    """BFS tree over allowed arrows: vertex -> arrow used to reach it."""
    seen: dict[int, int | None] = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        arrows = q.in_arrows[v] if reverse else q.out_arrows[v]
        for a in arrows:
            if a not in allowed:
                continue
            arr = q.arrows[a]
            w = arr.tail if reverse else arr.head
            if w not in seen:
                seen[w] = a
                queue.append(w)
    return seen


def separating_pair(q: DimerQuiver, arrows: frozenset[int]) -> tuple[int, int] | None:
    """A pair (i, j) with no path i -> j avoiding ``arrows``, or None."""
    support = frozenset(range(len(q.arrows))) - arrows
    fwd = _reach(q, support, 0)
    for j in q.vertices:
        if j not in fwd:
            return (0, j)
    back = _reach(q, support, 0, reverse=True)
    for j in q.vertices:
        if j not in back:
            return (j, 0)
    return None


def _shortest(q: DimerQuiver, support: frozenset[int], i: int, j: int) -> list[int]:
    tree = _reach(q, support, i)
    out: list[int] = []
    v = j
    while v != i:
        a = tree[v]
        out.append(a)
        v = q.arrows[a].tail
    return out[::-1]


def simple_witness(q: DimerQuiver, arrows: frozenset[int]) -> SimpleModuleWitness | None:
    """Closed walk in the complement of ``arrows`` through every vertex, if any."""
    if separating_pair(q, arrows) is not None:
        return None
    support = frozenset(range(len(q.arrows))) - arrows
    walk: list[int] = []
    order = list(q.vertices) + [0]
    for i, j in zip(order, order[1:]):
        if i != j:
            walk.extend(_shortest(q, support, i, j))
    return SimpleModuleWitness(support, tuple(walk))


def is_simple(q: DimerQuiver, D: PerfectMatching | frozenset[int]) -> bool:
    arrows = D.arrows if isinstance(D, PerfectMatching) else frozenset(D)
    return separating_pair(q, arrows) is None


def enumerate_perfect_matchings(q: DimerQuiver, cap: int = DEFAULT_MATCHING_CAP) -> list[PerfectMatching]:
    """All perfect matchings, ordered lexicographically by sorted arrow ids."""
    key = ("matchings", cap)
    if key not in q._memo:
        sets = _exact_cover(q, cap)
        q._memo[key] = [
            PerfectMatching(k, frozenset(s), is_simple(q, frozenset(s))) for k, s in enumerate(sets)
        ]
    return q._memo[key]


def simple_matchings(q: DimerQuiver) -> list[PerfectMatching]:
    return [d for d in enumerate_perfect_matchings(q) if d.simple]


def nondegenerate(q: DimerQuiver) -> tuple[bool, list[int]]:
    covered: set[int] = set()
    for d in enumerate_perfect_matchings(q):
        covered |= d.arrows
    uncovered = [a.id for a in q.arrows if a.id not in covered]
    return (not uncovered, uncovered)


def qs_arrows(q: DimerQuiver) -> frozenset[int]:
    """Arrows contained in no simple matching."""
    covered: set[int] = set()
    for d in simple_matchings(q):
        covered |= d.arrows
    return frozenset(a.id for a in q.arrows if a.id not in covered)


class RelationViolation(AssertionError):
    pass


@dataclass(frozen=True)
class Representation:
    """A representation with one-dimensional spaces at every vertex."""

    matching: PerfectMatching
    values: tuple[int, ...]  # scalar per arrow
    witness: SimpleModuleWitness

    def evaluate(self, arrows) -> int:
        out = 1
        for a in arrows:
            out *= self.values[a]
        return out

    def annihilates(self, a: int) -> bool:
        return self.values[a] == 0


def simple_module_from_matching(q: DimerQuiver, D: PerfectMatching) -> Representation:
    """Arrows off ``D`` act by 1, arrows in ``D`` by 0.

    Every relation is checked to hold, and simplicity is certified by a
    closed walk in the support through all vertices.
    """
    from .paths import RewriteSystem

    witness = simple_witness(q, D.arrows)
    if witness is None:
        raise ValueError(f"matching {sorted(D.arrows)} is not simple")
    values = tuple(0 if a.id in D.arrows else 1 for a in q.arrows)
    rep = Representation(D, values, witness)
    rs = RewriteSystem.of(q)
    for a in q.arrows:
        lhs, rhs = rs.plus[a.id], rs.minus[a.id]
        if rep.evaluate(lhs) != rep.evaluate(rhs):
            raise RelationViolation(f"relation of arrow {a.name} fails")
    if witness.walk and rep.evaluate(witness.walk) == 0:
        raise RelationViolation("witness walk is annihilated")
    return rep
