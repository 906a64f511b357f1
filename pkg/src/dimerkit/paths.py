"""Paths, weights and equality modulo the dimer ideal.

Words are stored first-applied-first.  The algebra product ``r p`` (read right
to left) therefore corresponds to the word ``p.arrows + r.arrows``.

Equality modulo the ideal is decided by closing a word under single
substitutions ``r+_a <-> r-_a`` (the two complements of an arrow in its two
faces).  Substitutions preserve the perfect-matching weight, and in a
nondegenerate quiver every arrow has positive weight degree, so every word in
a class is no longer than the degree of the seed's weight.  The closure is
therefore finite and exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .model import ZERO, DimerQuiver, Winding, wadd

Weight = tuple[int, ...]


class NotComposable(ValueError):
    pass


class ClassTooLarge(RuntimeError):
    """An equivalence-class closure exceeded its size cap."""


@dataclass(frozen=True)
class PathWord:
    arrows: tuple[int, ...]
    tail: int
    head: int
    winding: Winding

    @classmethod
    def from_arrows(cls, q: DimerQuiver, arrows: Sequence[int | str], start: int | None = None) -> "PathWord":
        ids = q.ids(arrows)
        if not ids:
            if start is None:
                raise NotComposable("an empty path needs an explicit vertex")
            return cls((), start, start, ZERO)
        first = q.arrows[ids[0]]
        if start is not None and start != first.tail:
            raise NotComposable(f"path starts at {first.tail}, not {start}")
        v, w = first.tail, ZERO
        for a in ids:
            arr = q.arrows[a]
            if arr.tail != v:
                raise NotComposable(f"arrow {arr.name} does not start at vertex {v}")
            v, w = arr.head, wadd(w, arr.winding)
        return cls(ids, first.tail, v, w)

    @classmethod
    def trivial(cls, i: int) -> "PathWord":
        return cls((), i, i, ZERO)

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def is_cycle(self) -> bool:
        return self.tail == self.head

    def then(self, other: "PathWord") -> "PathWord":
        """Follow ``self`` by ``other``, i.e. the product ``other * self``."""
        if self.head != other.tail:
            raise NotComposable(f"head {self.head} != tail {other.tail}")
        return PathWord(self.arrows + other.arrows, self.tail, other.head, wadd(self.winding, other.winding))

    def rotations(self, q: DimerQuiver) -> list["PathWord"]:
        if not self.is_cycle:
            raise NotComposable("only cycles can be rotated")
        n = len(self.arrows)
        return [PathWord.from_arrows(q, self.arrows[k:] + self.arrows[:k]) for k in range(n)] or [self]

    def names(self, q: DimerQuiver) -> list[str]:
        return q.names(self.arrows)

    def label(self, q: DimerQuiver) -> str:
        return " ".join(self.names(q)) if self.arrows else f"e{self.tail}"


def path(q: DimerQuiver, *arrows: int | str, start: int | None = None) -> PathWord:
    return PathWord.from_arrows(q, arrows, start)


# ----------------------------------------------------------------------------
# weights


def weight_table(q: DimerQuiver, matchings: Sequence[frozenset[int]]) -> tuple[Weight, ...]:
    return tuple(
        tuple(1 if a.id in d else 0 for d in matchings) for a in q.arrows
    )


def eta_table(q: DimerQuiver) -> tuple[Weight, ...]:
    if "eta_table" not in q._memo:
        from .matchings import enumerate_perfect_matchings

        q._memo["eta_table"] = weight_table(q, [d.arrows for d in enumerate_perfect_matchings(q)])
    return q._memo["eta_table"]


def tau_table(q: DimerQuiver) -> tuple[Weight, ...]:
    if "tau_table" not in q._memo:
        from .matchings import simple_matchings

        q._memo["tau_table"] = weight_table(q, [d.arrows for d in simple_matchings(q)])
    return q._memo["tau_table"]


def add(u: Weight, v: Weight) -> Weight:
    return tuple(x + y for x, y in zip(u, v))


def degree(w: Weight) -> int:
    return sum(w)


def word_weight(table: Sequence[Weight], arrows: Sequence[int], nvars: int) -> Weight:
    acc = [0] * nvars
    for a in arrows:
        for k, x in enumerate(table[a]):
            acc[k] += x
    return tuple(acc)


def tau_weight(q: DimerQuiver, p: PathWord) -> Weight:
    """Exponent vector over the simple matchings.

    With no simple matchings the vector is empty, i.e. the constant monomial.
    """
    from .matchings import simple_matchings

    return word_weight(tau_table(q), p.arrows, len(simple_matchings(q)))


def eta_weight(q: DimerQuiver, p: PathWord) -> Weight:
    from .matchings import enumerate_perfect_matchings

    return word_weight(eta_table(q), p.arrows, len(enumerate_perfect_matchings(q)))


def sigma_divides(w: Weight) -> bool:
    """True when the all-ones monomial divides ``w`` (vacuously for no variables)."""
    return min(w, default=1) >= 1


def sigma_multiple(w: Weight) -> int | None:
    """m when ``w`` equals m times the all-ones vector, else None."""
    if not w:
        return 0
    return w[0] if all(x == w[0] for x in w) else None


def is_sigma_reduced(q: DimerQuiver, p: PathWord, psi=None) -> bool:
    """The cycle's weight has a zero entry.

    Weights are taken in the cancellative target of ``psi`` when given.
    An empty variable set makes every weight a power of the constant
    all-ones monomial, so the answer is False there.
    """
    w = psi.tau_psi(p) if psi is not None else tau_weight(q, p)
    return not sigma_divides(w)


def has_cyclic_subpath(q: DimerQuiver, p: PathWord) -> bool:
    """Does the lift of ``p`` revisit a lifted vertex along a proper subword?"""
    n = len(p.arrows)
    if n < 2:
        return False
    seen: dict[tuple[int, Winding], int] = {}
    v, w = p.tail, ZERO
    for k in range(n + 1):
        key = (v, w)
        if key in seen and k - seen[key] < n:
            return True
        seen.setdefault(key, k)
        if k < n:
            arr = q.arrows[p.arrows[k]]
            v, w = arr.head, wadd(w, arr.winding)
    return False


# ----------------------------------------------------------------------------
# enumeration


def enumerate_paths(q: DimerQuiver, max_len: int, start: int | None = None,
                    include_trivial: bool = False) -> Iterator[PathWord]:
    """All paths of length 1..max_len (optionally 0), depth-first, canonical order."""
    starts = [start] if start is not None else list(q.vertices)
    for s in starts:
        if include_trivial:
            yield PathWord.trivial(s)
        stack: list[tuple[tuple[int, ...], int, Winding]] = [((), s, ZERO)]
        while stack:
            word, v, w = stack.pop()
            if word:
                yield PathWord(word, s, v, w)
            if len(word) == max_len:
                continue
            for a in reversed(q.out_arrows[v]):
                arr = q.arrows[a]
                stack.append((word + (a,), arr.head, wadd(w, arr.winding)))


def _distances_to(q: DimerQuiver, target: int) -> list[float]:
    dist = [float("inf")] * q.num_vertices
    dist[target] = 0
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for a in q.in_arrows[v]:
            t = q.arrows[a].tail
            if dist[t] == float("inf"):
                dist[t] = dist[v] + 1
                queue.append(t)
    return dist


def enumerate_cycles(q: DimerQuiver, i: int, u: Winding, max_len: int, cap: int = 200_000) -> list[PathWord]:
    """Cycles at ``i`` with winding ``u`` and length at most ``max_len``.

    Sorted by length, then lexicographically by arrow ids.
    """
    u = tuple(u)
    dist = _distances_to(q, i)
    found: list[PathWord] = []
    if u == ZERO:
        found.append(PathWord.trivial(i))
    stack: list[tuple[tuple[int, ...], int, Winding]] = [((), i, ZERO)]
    while stack:
        word, v, w = stack.pop()
        for a in q.out_arrows[v]:
            arr = q.arrows[a]
            nl = len(word) + 1
            if nl + dist[arr.head] > max_len:
                continue
            nword, nw = word + (a,), wadd(w, arr.winding)
            if arr.head == i and nw == u:
                found.append(PathWord(nword, i, i, nw))
                if len(found) > cap:
                    raise ClassTooLarge(f"more than {cap} cycles")
            if nl < max_len:
                stack.append((nword, arr.head, nw))
    found.sort(key=lambda p: (len(p.arrows), p.arrows))
    return found


# ----------------------------------------------------------------------------
# the rewrite system


@dataclass(frozen=True)
class RewriteSystem:
    """Complements of each arrow in its + and - face, both running h(a) -> t(a)."""

    plus: tuple[tuple[int, ...], ...]
    minus: tuple[tuple[int, ...], ...]
    # (lhs, rhs, arrow) for both directions, grouped by first letter of lhs
    by_first: dict
    empty_lhs: tuple[tuple[tuple[int, ...], int, int], ...]  # (rhs, vertex, arrow)

    @classmethod
    def of(cls, q: DimerQuiver) -> "RewriteSystem":
        if "rewrite" in q._memo:
            return q._memo["rewrite"]
        plus: list[tuple[int, ...]] = [()] * len(q.arrows)
        minus: list[tuple[int, ...]] = [()] * len(q.arrows)
        for f in q.faces:
            bd = f.boundary
            for k, a in enumerate(bd):
                comp = bd[k + 1:] + bd[:k]
                if f.sign == "+":
                    plus[a] = comp
                else:
                    minus[a] = comp
        by_first: dict[int, list] = {}
        empty = []
        for a in range(len(q.arrows)):
            for lhs, rhs in ((plus[a], minus[a]), (minus[a], plus[a])):
                if lhs == rhs:
                    continue
                if lhs:
                    by_first.setdefault(lhs[0], []).append((lhs, rhs, a))
                else:
                    empty.append((rhs, q.arrows[a].head, a))
        rs = cls(tuple(plus), tuple(minus), by_first, tuple(empty))
        q._memo["rewrite"] = rs
        return rs

    def neighbours(self, q: DimerQuiver, word: tuple[int, ...], tail: int) -> Iterator[tuple[int, ...]]:
        """Every word one substitution away from ``word``."""
        n = len(word)
        for k in range(n):
            for lhs, rhs, _ in self.by_first.get(word[k], ()):
                m = len(lhs)
                if word[k:k + m] == lhs:
                    yield word[:k] + rhs + word[k + m:]
        if self.empty_lhs:
            # vertex visited before position k
            verts = [tail] + [q.arrows[a].head for a in word]
            for rhs, v, _ in self.empty_lhs:
                for k in range(n + 1):
                    if verts[k] == v:
                        yield word[:k] + rhs + word[k:]


def is_single_rewrite(q: DimerQuiver, w1: Sequence[int], w2: Sequence[int]) -> bool:
    """Independent check that ``w2`` arises from ``w1`` by one relation."""
    rs = RewriteSystem.of(q)
    w1, w2 = tuple(w1), tuple(w2)
    # strip common prefix and suffix, then the middle must be a relation pair
    for a in range(len(q.arrows)):
        pair = (rs.plus[a], rs.minus[a])
        for lhs, rhs in (pair, pair[::-1]):
            for k in range(len(w1) - len(lhs) + 1):
                if w1[k:k + len(lhs)] == lhs and w1[:k] + rhs + w1[k + len(lhs):] == w2:
                    return True
    return False


@dataclass(frozen=True)
class EqClass:
    seed: PathWord
    members: frozenset[tuple[int, ...]]
    parent: dict  # word -> predecessor word in the BFS tree (seed -> None)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: PathWord | tuple) -> bool:
        word = p.arrows if isinstance(p, PathWord) else tuple(p)
        return word in self.members

    def chain_to(self, word: tuple[int, ...]) -> list[tuple[int, ...]]:
        out = [word]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def paths(self, q: DimerQuiver) -> list[PathWord]:
        return [
            PathWord.from_arrows(q, w, start=self.seed.tail)
            for w in sorted(self.members, key=lambda w: (len(w), w))
        ]


DEFAULT_CLASS_CAP = 200_000


def eq_class(q: DimerQuiver, p: PathWord, cap: int = DEFAULT_CLASS_CAP) -> EqClass:
    """All words equal to ``p`` modulo the dimer ideal."""
    rs = RewriteSystem.of(q)
    parent: dict[tuple[int, ...], tuple[int, ...] | None] = {p.arrows: None}
    queue = deque([p.arrows])
    while queue:
        w = queue.popleft()
        for nw in rs.neighbours(q, w, p.tail):
            if nw not in parent:
                parent[nw] = w
                if len(parent) > cap:
                    raise ClassTooLarge(f"class of {p.arrows} exceeds {cap} words")
                queue.append(nw)
    return EqClass(p, frozenset(parent), parent)


@dataclass(frozen=True)
class Equality:
    status: str  # "equal", "distinct" or "unknown"
    chain: tuple[tuple[int, ...], ...] = ()
    reason: str = ""

    @property
    def equal(self) -> bool:
        return self.status == "equal"

    @property
    def distinct(self) -> bool:
        return self.status == "distinct"


def equal_mod_I(q: DimerQuiver, p: PathWord, r: PathWord, cap: int = DEFAULT_CLASS_CAP) -> Equality:
    """Decide ``p == r`` in the dimer algebra.

    ``equal`` comes with a chain of single substitutions from p to r.
    ``distinct`` means the whole class of p was computed and r is absent.
    ``unknown`` means the class cap was hit; callers must not read it as distinct.
    """
    if (p.tail, p.head) != (r.tail, r.head):
        return Equality("distinct", reason="endpoints differ")
    if p.arrows == r.arrows:
        return Equality("equal", (p.arrows,))
    if p.winding != r.winding:
        return Equality("distinct", reason="windings differ")
    if eta_weight(q, p) != eta_weight(q, r):
        return Equality("distinct", reason="perfect-matching weights differ")
    rs = RewriteSystem.of(q)
    parent: dict[tuple[int, ...], tuple[int, ...] | None] = {p.arrows: None}
    queue = deque([p.arrows])
    while queue:
        w = queue.popleft()
        for nw in rs.neighbours(q, w, p.tail):
            if nw in parent:
                continue
            parent[nw] = w
            if nw == r.arrows:
                chain = [nw]
                while parent[chain[-1]] is not None:
                    chain.append(parent[chain[-1]])
                return Equality("equal", tuple(chain[::-1]))
            if len(parent) > cap:
                return Equality("unknown", reason=f"class size exceeded {cap}")
            queue.append(nw)
    return Equality("distinct", reason=f"class of {len(parent)} words excludes the second path")
