"""Dimer quivers on the two-torus: data types, the ``.dimer`` format, validation.

A quiver is stored combinatorially.  Faces (oriented unit cycles) carry the
embedding, and every arrow carries an explicit winding in Z^2 recording how its
lift crosses the fundamental domain.  Nothing is derived from coordinates.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

Winding = tuple[int, int]

ZERO: Winding = (0, 0)


def wadd(u: Winding, v: Winding) -> Winding:
    return (u[0] + v[0], u[1] + v[1])


def wsub(u: Winding, v: Winding) -> Winding:
    return (u[0] - v[0], u[1] - v[1])


class ParseError(ValueError):
    """Malformed ``.dimer`` or JSON input."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class InvalidQuiver(ValueError):
    """Raised by operations that require a valid quiver."""


@dataclass(frozen=True)
class Arrow:
    id: int
    name: str
    tail: int
    head: int
    winding: Winding


@dataclass(frozen=True)
class Face:
    id: int
    sign: str  # "+" or "-"
    boundary: tuple[int, ...]  # arrow ids, first applied first


@dataclass(frozen=True)
class DimerQuiver:
    num_vertices: int
    arrows: tuple[Arrow, ...]
    faces: tuple[Face, ...]
    pos: tuple[tuple[float, float] | None, ...] | None = None
    # scratch space for per-quiver memoization (matchings, weight tables, ...)
    _memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.num_vertices, self.arrows, self.faces, self.pos))

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    @cached_property
    def arrow_by_name(self) -> dict[str, int]:
        return {a.name: a.id for a in self.arrows}

    @cached_property
    def out_arrows(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for a in self.arrows:
            out[a.tail].append(a.id)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_arrows(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.vertices]
        for a in self.arrows:
            inc[a.head].append(a.id)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def arrow_faces(self) -> tuple[tuple[int | None, int | None], ...]:
        """(+face, -face) for each arrow; None where missing."""
        table: list[list[int | None]] = [[None, None] for _ in self.arrows]
        for f in self.faces:
            slot = 0 if f.sign == "+" else 1
            for a in f.boundary:
                table[a][slot] = f.id
        return tuple((p, m) for p, m in table)

    @property
    def longest_face(self) -> int:
        return max((len(f.boundary) for f in self.faces), default=0)

    def arrow(self, ref: int | str) -> Arrow:
        if isinstance(ref, str):
            return self.arrows[self.arrow_by_name[ref]]
        return self.arrows[ref]

    def ids(self, names: Iterable[str | int]) -> tuple[int, ...]:
        return tuple(self.arrow(n).id for n in names)

    def names(self, ids: Iterable[int]) -> list[str]:
        return [self.arrows[a].name for a in ids]

    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.arrows) + len(self.faces)


# ----------------------------------------------------------------------------
# .dimer text format

_ARROW_RE = re.compile(
    r"^arrow\s+(?P<name>\S+)\s+(?P<tail>-?\d+)\s+(?P<head>-?\d+)\s*"
    r"\(\s*(?P<u1>-?\d+)\s*,\s*(?P<u2>-?\d+)\s*\)\s*$"
)
_FACE_RE = re.compile(r"^face\s+(?P<sign>[+-])\s*\[(?P<body>[^\]]*)\]\s*$")
_POS_RE = re.compile(r"^pos\s+(?P<v>-?\d+)\s+(?P<x>\S+)\s+(?P<y>\S+)\s*$")
_VERTICES_RE = re.compile(r"^vertices\s*:\s*(?P<n>\d+)\s*$")


def parse_model(text: str) -> DimerQuiver:
    """Parse the line-oriented ``.dimer`` format.

    The result has referential integrity but is not validated; call
    :func:`validate` for the dimer-model checks.
    """
    n: int | None = None
    raw_arrows: list[tuple[str, int, int, Winding, int]] = []
    raw_faces: list[tuple[str, list[tuple[str, int]], int]] = []
    raw_pos: dict[int, tuple[float, float]] = {}
    pos_lines: dict[int, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped)
        keyword = stripped.split(None, 1)[0].rstrip(":")
        if keyword == "vertices":
            m = _VERTICES_RE.match(stripped)
            if not m:
                raise ParseError("expected 'vertices: <n>'", lineno, indent + 1)
            if n is not None:
                raise ParseError("duplicate 'vertices' declaration", lineno, indent + 1)
            n = int(m["n"])
        elif keyword == "arrow":
            m = _ARROW_RE.match(stripped)
            if not m:
                raise ParseError("expected 'arrow <name> <tail> <head> (<u1>,<u2>)'", lineno, indent + 1)
            w = (int(m["u1"]), int(m["u2"]))
            raw_arrows.append((m["name"], int(m["tail"]), int(m["head"]), w, lineno))
        elif keyword == "face":
            m = _FACE_RE.match(stripped)
            if not m:
                raise ParseError("expected 'face <+|-> [<name> ...]'", lineno, indent + 1)
            body_col = indent + m.start("body") + 1
            names = []
            for tok in re.finditer(r"[^\s,]+", m["body"]):
                names.append((tok.group(), body_col + tok.start()))
            raw_faces.append((m["sign"], names, lineno))
        elif keyword == "pos":
            m = _POS_RE.match(stripped)
            if not m:
                raise ParseError("expected 'pos <vertex> <x> <y>'", lineno, indent + 1)
            try:
                xy = (float(m["x"]), float(m["y"]))
            except ValueError:
                raise ParseError("coordinates must be numbers", lineno, indent + m.start("x") + 1) from None
            v = int(m["v"])
            if v in raw_pos:
                raise ParseError(f"duplicate position for vertex {v}", lineno, indent + 1)
            raw_pos[v] = xy
            pos_lines[v] = lineno
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, indent + 1)

    if n is None:
        raise ParseError("missing 'vertices: <n>' declaration")

    arrows: list[Arrow] = []
    seen: dict[str, int] = {}
    for name, t, h, w, lineno in raw_arrows:
        if name in seen:
            raise ParseError(f"duplicate arrow name {name!r}", lineno)
        for v in (t, h):
            if not 0 <= v < n:
                raise ParseError(f"arrow {name!r} references unknown vertex {v}", lineno)
        seen[name] = len(arrows)
        arrows.append(Arrow(len(arrows), name, t, h, w))

    faces: list[Face] = []
    for sign, names, lineno in raw_faces:
        ids = []
        for name, col in names:
            if name not in seen:
                raise ParseError(f"face references unknown arrow {name!r}", lineno, col)
            ids.append(seen[name])
        faces.append(Face(len(faces), sign, tuple(ids)))

    pos = None
    if raw_pos:
        for v, lineno in pos_lines.items():
            if not 0 <= v < n:
                raise ParseError(f"position given for unknown vertex {v}", lineno)
        pos = tuple(raw_pos.get(v) for v in range(n))
    return DimerQuiver(n, tuple(arrows), tuple(faces), pos)


def _fmt_float(x: float) -> str:
    return repr(float(x))


def format_model(q: DimerQuiver) -> str:
    """Serialize to the ``.dimer`` format; inverse of :func:`parse_model`."""
    lines = [f"vertices: {q.num_vertices}"]
    for a in q.arrows:
        lines.append(f"arrow {a.name} {a.tail} {a.head} ({a.winding[0]},{a.winding[1]})")
    for f in q.faces:
        lines.append(f"face {f.sign} [{' '.join(q.names(f.boundary))}]")
    if q.pos is not None:
        for v, xy in enumerate(q.pos):
            if xy is not None:
                lines.append(f"pos {v} {_fmt_float(xy[0])} {_fmt_float(xy[1])}")
    return "\n".join(lines) + "\n"


def to_json_dict(q: DimerQuiver) -> dict:
    d: dict = {
        "vertices": q.num_vertices,
        "arrows": [
            {"name": a.name, "tail": a.tail, "head": a.head, "winding": list(a.winding)}
            for a in q.arrows
        ],
        "faces": [{"sign": f.sign, "boundary": q.names(f.boundary)} for f in q.faces],
    }
    if q.pos is not None:
        d["pos"] = {str(v): list(xy) for v, xy in enumerate(q.pos) if xy is not None}
    return d


def from_json_dict(d: dict) -> DimerQuiver:
    """Build a quiver from the JSON mirror of the text format."""
    try:
        lines = [f"vertices: {int(d['vertices'])}"]
        for a in d.get("arrows", []):
            u1, u2 = a["winding"]
            lines.append(f"arrow {a['name']} {int(a['tail'])} {int(a['head'])} ({int(u1)},{int(u2)})")
        for f in d.get("faces", []):
            lines.append(f"face {f['sign']} [{' '.join(f['boundary'])}]")
        for v, xy in (d.get("pos") or {}).items():
            lines.append(f"pos {int(v)} {_fmt_float(xy[0])} {_fmt_float(xy[1])}")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed JSON model: {exc}") from None
    return parse_model("\n".join(lines))


def dumps_json(q: DimerQuiver) -> str:
    return json.dumps(to_json_dict(q), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> DimerQuiver:
    """Parse either format, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        return from_json_dict(d)
    return parse_model(text)


# ----------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    warnings: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness} for c in self.checks],
            "warnings": list(self.warnings),
        }


CHECK_NAMES = (
    "face_composable",
    "arrow_face_incidence",
    "euler_characteristic",
    "connected",
    "vertex_on_face",
    "face_contractible",
    "winding_generates",
)


def _check_face_composable(q: DimerQuiver) -> Check:
    for f in q.faces:
        if not f.boundary:
            return Check("face_composable", False, f"face {f.id} is empty")
        k = len(f.boundary)
        for j in range(k):
            a, b = q.arrows[f.boundary[j]], q.arrows[f.boundary[(j + 1) % k]]
            if a.head != b.tail:
                return Check(
                    "face_composable", False,
                    f"face {f.id}: head({a.name})={a.head} != tail({b.name})={b.tail}",
                )
    return Check("face_composable", True)


def _check_incidence(q: DimerQuiver) -> Check:
    counts = [[0, 0] for _ in q.arrows]
    for f in q.faces:
        for a in f.boundary:
            counts[a][0 if f.sign == "+" else 1] += 1
    for a, (p, m) in zip(q.arrows, counts):
        if p != 1 or m != 1:
            return Check(
                "arrow_face_incidence", False,
                f"arrow {a.name} lies on {p} '+' face(s) and {m} '-' face(s)",
            )
    return Check("arrow_face_incidence", True)


def _check_euler(q: DimerQuiver) -> Check:
    chi = q.euler_characteristic()
    w = f"{q.num_vertices} - {len(q.arrows)} + {len(q.faces)} = {chi}"
    return Check("euler_characteristic", chi == 0, w)


def _components(q: DimerQuiver) -> list[set[int]]:
    parent = list(q.vertices)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in q.arrows:
        ra, rb = find(a.tail), find(a.head)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    comps: dict[int, set[int]] = {}
    for v in q.vertices:
        comps.setdefault(find(v), set()).add(v)
    return list(comps.values())


def _check_connected(q: DimerQuiver) -> Check:
    if q.num_vertices == 0:
        return Check("connected", False, "no vertices")
    comps = _components(q)
    if len(comps) > 1:
        other = min(min(c) for c in comps if 0 not in c)
        return Check("connected", False, f"vertex {other} is not connected to vertex 0")
    return Check("connected", True)


def _check_vertex_on_face(q: DimerQuiver) -> Check:
    on_face = set()
    for f in q.faces:
        for a in f.boundary:
            on_face.add(q.arrows[a].tail)
            on_face.add(q.arrows[a].head)
    missing = [v for v in q.vertices if v not in on_face]
    if missing:
        return Check("vertex_on_face", False, f"vertex {missing[0]} lies on no face")
    return Check("vertex_on_face", True)


def _check_contractible(q: DimerQuiver) -> Check:
    for f in q.faces:
        w = ZERO
        for a in f.boundary:
            w = wadd(w, q.arrows[a].winding)
        if w != ZERO:
            return Check("face_contractible", False, f"face {f.id} has winding sum {w}")
    return Check("face_contractible", True)


def cycle_space_windings(q: DimerQuiver) -> list[Winding]:
    """Windings of the fundamental cycles of a spanning forest."""
    potential: dict[int, Winding] = {}
    tree: set[int] = set()
    for root in q.vertices:
        if root in potential:
            continue
        potential[root] = ZERO
        stack = [root]
        while stack:
            v = stack.pop()
            for a in q.out_arrows[v] + q.in_arrows[v]:
                arr = q.arrows[a]
                if arr.tail == v and arr.head not in potential:
                    potential[arr.head] = wadd(potential[v], arr.winding)
                elif arr.head == v and arr.tail not in potential:
                    potential[arr.tail] = wsub(potential[v], arr.winding)
                else:
                    continue
                tree.add(a)
                stack.append(arr.head if arr.tail == v else arr.tail)
    gens = []
    for a in q.arrows:
        if a.id in tree:
            continue
        # closes the tree path from head back to tail
        gens.append(wsub(wadd(potential[a.tail], a.winding), potential[a.head]))
    return gens


def lattice_index(vectors: Iterable[Winding]) -> int:
    """Index in Z^2 of the sublattice spanned by ``vectors`` (0 if rank < 2)."""
    vs = list(vectors)
    g = 0
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            g = math.gcd(g, vs[i][0] * vs[j][1] - vs[i][1] * vs[j][0])
    return g


def _check_generates(q: DimerQuiver) -> Check:
    idx = lattice_index(cycle_space_windings(q))
    if idx != 1:
        return Check("winding_generates", False, f"cycle windings span a sublattice of index {idx}")
    return Check("winding_generates", True)


def validate(q: DimerQuiver) -> ValidationReport:
    """Run every dimer-model invariant independently; failures are data."""
    checks = (
        _check_face_composable(q),
        _check_incidence(q),
        _check_euler(q),
        _check_connected(q),
        _check_vertex_on_face(q),
        _check_contractible(q),
        _check_generates(q),
    )
    warnings = []
    for f in q.faces:
        if len(f.boundary) <= 2:
            warnings.append(f"face {f.id} has length {len(f.boundary)}")
    return ValidationReport(checks, tuple(warnings))


def require_valid(q: DimerQuiver) -> None:
    report = validate(q)
    if not report.valid:
        bad = report[report.failed[0]]
        raise InvalidQuiver(f"{bad.name}: {bad.witness}")


# ----------------------------------------------------------------------------
# derived objects


def unit_cycle_at(q: DimerQuiver, i: int):
    """The boundary of the first face through ``i``, rotated to start at ``i``."""
    from .paths import PathWord

    for f in q.faces:
        for k, a in enumerate(f.boundary):
            if q.arrows[a].tail == i:
                word = f.boundary[k:] + f.boundary[:k]
                return PathWord.from_arrows(q, word)
    raise InvalidQuiver(f"vertex {i} lies on no face")


MAX_COVER_SIZE = 10**6


def torus_cover(q: DimerQuiver, k: int, l: int) -> DimerQuiver:
    """The k x l periodic refinement: the fundamental domain is enlarged k-fold
    along the first winding axis and l-fold along the second.

    Vertex ``(v, s, t)`` of the cover gets id ``(s * l + t) * n + v``; arrow
    and face copies are numbered the same way.
    """
    if k < 1 or l < 1:
        raise ValueError("cover multiplicities must be positive")
    if k * l * (len(q.arrows) + q.num_vertices + len(q.faces)) > MAX_COVER_SIZE:
        raise ValueError("cover too large")
    n, m = q.num_vertices, len(q.arrows)
    copies = [(s, t) for s in range(k) for t in range(l)]

    def vid(v: int, s: int, t: int) -> int:
        return (s * l + t) * n + v

    def aid(a: int, s: int, t: int) -> int:
        return (s * l + t) * m + a

    arrows = []
    for s, t in copies:
        for a in q.arrows:
            hs, ht = s + a.winding[0], t + a.winding[1]
            name = a.name if k * l == 1 else f"{a.name}_{s}_{t}"
            arrows.append(
                Arrow(aid(a.id, s, t), name, vid(a.tail, s, t), vid(a.head, hs % k, ht % l),
                      (hs // k, ht // l))
            )
    faces = []
    for s, t in copies:
        for f in q.faces:
            cs, ct = s, t
            bd = []
            for a in f.boundary:
                bd.append(aid(a, cs % k, ct % l))
                w = q.arrows[a].winding
                cs, ct = cs + w[0], ct + w[1]
            faces.append(Face(len(faces), f.sign, tuple(bd)))
    pos = None
    if q.pos is not None:
        pos = tuple(
            None if q.pos[v] is None else ((q.pos[v][0] + s) / k, (q.pos[v][1] + t) / l)
            for s, t in copies
            for v in q.vertices
        )
    arrows.sort(key=lambda a: a.id)
    return DimerQuiver(k * l * n, tuple(arrows), tuple(faces), pos)
