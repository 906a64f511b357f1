"""Built-in models, addressed as ``corpus:<name>``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .model import DimerQuiver, loads

SCHEME = "corpus:"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    source: str
    expected: dict  # fixture values, each with a "provenance" tag

    def quiver(self) -> DimerQuiver:
        return loads(self.source)


def _dir():
    return resources.files("dimerkit") / "corpus"


def names() -> list[str]:
    return sorted(p.name[:-6] for p in _dir().iterdir() if p.name.endswith(".dimer"))


def entry(name: str) -> CorpusEntry:
    base = _dir()
    src = base / f"{name}.dimer"
    if not src.is_file():
        raise KeyError(f"no corpus model named {name!r}; available: {', '.join(names())}")
    fixture = base / f"{name}.expected.json"
    expected = json.loads(fixture.read_text()) if fixture.is_file() else {}
    return CorpusEntry(name, src.read_text(), expected)


def load(ref: str) -> DimerQuiver:
    """A quiver from ``corpus:<name>`` or a file path (``.dimer`` or JSON)."""
    if ref.startswith(SCHEME):
        return entry(ref[len(SCHEME):]).quiver()
    return loads(Path(ref).read_text(encoding="utf-8"))
