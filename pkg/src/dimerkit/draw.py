"""DOT and SVG pictures of the fundamental domain."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Iterable

from .model import ZERO, DimerQuiver


class MissingCoordinates(ValueError):
    pass


def _winding_label(u) -> str:
    return f"({u[0]},{u[1]})"


def to_dot(q: DimerQuiver, matched: Iterable[int] = ()) -> str:
    matched = set(matched)
    lines = ["digraph dimer {", "  node [shape=circle];"]
    for v in q.vertices:
        if q.pos is not None:
            x, y = q.pos[v]
            lines.append(f'  {v} [label="{v}", pos="{4 * x:.3f},{4 * y:.3f}!"];')
        else:
            lines.append(f'  {v} [label="{v}"];')
    for arr in q.arrows:
        label = arr.name if arr.winding == ZERO else f"{arr.name} {_winding_label(arr.winding)}"
        style = ", color=red, penwidth=2.5" if arr.id in matched else ""
        lines.append(f'  {arr.tail} -> {arr.head} [label="{label}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


SIZE = 400
MARGIN = 40
STYLE = """
.vertex { fill: #222; }
.arrow { stroke: #555; stroke-width: 1.5; fill: none; marker-end: url(#head); }
.arrow.matched { stroke: #c22; stroke-width: 3; }
.winding { font: 10px sans-serif; fill: #36c; }
.label { font: 11px sans-serif; fill: #000; }
.domain { fill: none; stroke: #aaa; stroke-dasharray: 4 3; }
"""


def _xy(x: float, y: float) -> tuple[float, float]:
    # y grows upward in the domain
    return MARGIN + x * SIZE, MARGIN + (1 - y) * SIZE


def to_svg(q: DimerQuiver, matched: Iterable[int] = ()) -> str:
    """One circle per vertex, one path per arrow drawn to the lifted head.

    Arrows leaving the domain carry a text label with their winding.
    """
    if q.pos is None:
        raise MissingCoordinates("SVG export needs vertex coordinates (pos lines)")
    matched = set(matched)
    side = SIZE + 2 * MARGIN
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(side), height=str(side),
                     viewBox=f"0 0 {side} {side}")
    ET.SubElement(svg, "style").text = STYLE
    defs = ET.SubElement(svg, "defs")
    marker = ET.SubElement(defs, "marker", id="head", viewBox="0 0 10 10", refX="10", refY="5",
                           markerWidth="6", markerHeight="6", orient="auto")
    ET.SubElement(marker, "path", d="M0,0 L10,5 L0,10 z")
    ET.SubElement(svg, "rect", {"class": "domain", "x": str(MARGIN), "y": str(MARGIN),
                                "width": str(SIZE), "height": str(SIZE)})
    for arr in q.arrows:
        tx, ty = q.pos[arr.tail]
        hx, hy = q.pos[arr.head]
        hx, hy = hx + arr.winding[0], hy + arr.winding[1]
        x0, y0 = _xy(tx, ty)
        x1, y1 = _xy(hx, hy)
        cls = "arrow matched" if arr.id in matched else "arrow"
        if (x0, y0) == (x1, y1):
            d = f"M{x0:.1f},{y0:.1f} c30,-40 -30,-40 0,0"
        else:
            d = f"M{x0:.1f},{y0:.1f} L{x1:.1f},{y1:.1f}"
        el = ET.SubElement(svg, "path", {"class": cls, "d": d, "data-arrow": arr.name})
        ET.SubElement(el, "title").text = arr.name
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        ET.SubElement(svg, "text", {"class": "label", "x": f"{mx + 4:.1f}", "y": f"{my - 4:.1f}"}).text = arr.name
        if arr.winding != ZERO:
            ET.SubElement(svg, "text", {"class": "winding", "x": f"{mx + 4:.1f}", "y": f"{my + 10:.1f}"}).text = \
                _winding_label(arr.winding)
    for v in q.vertices:
        x, y = _xy(*q.pos[v])
        ET.SubElement(svg, "circle", {"class": "vertex", "cx": f"{x:.1f}", "cy": f"{y:.1f}", "r": "5"})
        ET.SubElement(svg, "text", {"class": "label", "x": f"{x + 7:.1f}", "y": f"{y + 14:.1f}"}).text = str(v)
    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"
