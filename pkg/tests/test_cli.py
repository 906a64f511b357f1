import io
import json
import xml.etree.ElementTree as ET

import pytest

from dimerkit.cli import run
from dimerkit.corpus import entry, names
from dimerkit.matchings import enumerate_perfect_matchings
from dimerkit.model import parse_model

SVG = "{http://www.w3.org/2000/svg}"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_check_hex():
    code, out, _ = call("check", "corpus:hex")
    assert code == 0 and out.startswith("cancellative")


def test_check_fig1():
    code, out, _ = call("check", "corpus:fig1")
    assert code == 1
    assert "non-cancellative" in out and "noncancellative_pair" in out


def test_check_json_is_stable():
    a = call("check", "corpus:fig1", "--json")[1]
    b = call("check", "corpus:fig1", "--json")[1]
    assert a == b
    data = json.loads(a)
    assert data["schema"].startswith("dimerkit") and data["command"] == "check"


def test_validate_broken(tmp_path):
    bad = tmp_path / "broken.dimer"
    bad.write_text(entry("hex").source.replace("face - ", "face + ", 1))
    code, out, _ = call("validate", str(bad))
    assert code == 2 and "FAIL" in out


def test_validate_parse_error(tmp_path):
    bad = tmp_path / "garbage.dimer"
    bad.write_text("vertices: 1\narrow a 0 0 (1,\n")
    code, out, _ = call("validate", str(bad), "--json")
    assert code == 2
    assert json.loads(out)["parse_error"]["line"] == 2


def test_missing_file():
    code, _, err = call("check", "/nonexistent/x.dimer")
    assert code == 2 and "invalid input" in err


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"], io.StringIO(), io.StringIO())
    assert exc.value.code == 64
    code, _, _ = call("check", "corpus:hex", "--bounds", "nonsense=3")
    assert code == 64
    code, _, _ = call("paths", "corpus:hex", "--from", "0", "--to", "7", "--max-len", "2")
    assert code == 64


def test_matchings_json():
    code, out, _ = call("matchings", "corpus:conifold", "--json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 4 and data["simple"] == 4
    for m in data["matchings"]:
        assert m["arrows"] == sorted(m["arrows"]) or m["arrows"]
    code, out, _ = call("matchings", "corpus:fig1", "--simple-only", "--json")
    assert len(json.loads(out)["matchings"]) == 3


def test_paths():
    code, out, _ = call("paths", "corpus:hex", "--from", "0", "--to", "0", "--max-len", "3", "--json")
    data = json.loads(out)
    # trivial path, the three arrows, nine words of length 2, 27 of length 3
    assert code == 0 and len(data["paths"]) == 1 + 3 + 9 + 27
    code, out, _ = call("paths", "corpus:hex", "--from", "0", "--to", "0", "--max-len", "3",
                        "--winding", "0,0", "--json")
    zero = json.loads(out)["paths"]
    assert all(p["winding"] == [0, 0] for p in zero)
    assert len(zero) == 1 + 6


def test_algebras():
    code, out, _ = call("algebras", "corpus:hex", "--json")
    data = json.loads(out)
    assert code == 0 and data["R_equals_S"]["status"] == "equal-at-bound"
    code, out, _ = call("algebras", "corpus:fig1", "--json")
    data = json.loads(out)
    assert code == 1 and data["R_equals_S"]["status"] == "differ"
    assert data["contraction"]["contracted"] == ["c"]


def test_contract_find_and_file(tmp_path):
    mp = tmp_path / "psi.json"
    target = tmp_path / "target.dimer"
    code, out, _ = call("contract", "corpus:fig1", "--find", "--map", str(mp), "-o", str(target))
    assert code == 0 and "contracted: c" in out
    assert len(parse_model(target.read_text()).arrows) == 8
    code, out, _ = call("check", "corpus:fig1", "--contraction", str(mp), "--json")
    assert code == 1 and json.loads(out)["contraction"]["contracted"] == ["c"]


def test_contract_loop_fails():
    code, out, _ = call("contract", "corpus:hex", "--arrows", "x")
    assert code == 1 and "cannot contract" in out


def test_contract_reduce(tmp_path):
    target = tmp_path / "t.dimer"
    code, out, _ = call("contract", "corpus:fig1", "--arrows", "c", "--reduce-2cycles", "-o", str(target))
    assert code == 0
    q = parse_model(target.read_text())
    assert all(len(f.boundary) > 2 for f in q.faces)


def test_contract_needs_a_mode():
    with pytest.raises(SystemExit) as exc:
        run(["contract", "corpus:fig1", "--arrows", "c", "--find"], io.StringIO(), io.StringIO())
    assert exc.value.code == 64


def test_corpus_listing_and_fixtures():
    code, out, _ = call("corpus")
    assert out.split() == names()
    for name in names():
        code, out, _ = call("corpus", name, "--json")
        data = json.loads(out)
        assert data["expected"] == entry(name).expected


@pytest.mark.parametrize("name", ["hex", "conifold", "fig1"])
def test_fixtures_reproduce(name):
    exp = entry(name).expected
    code, out, _ = call("matchings", f"corpus:{name}", "--json")
    data = json.loads(out)
    assert data["count"] == exp["perfect_matchings"]["value"]
    assert data["simple"] == exp["simple_matchings"]["value"]
    code, out, _ = call("check", f"corpus:{name}", "--json")
    assert json.loads(out)["cancellative"] == exp["cancellative"]["value"]


def test_env_bounds(monkeypatch):
    monkeypatch.setenv("DIMERKIT_DEFAULT_BOUNDS", "quick,degree=3")
    code, out, _ = call("algebras", "corpus:hex", "--json")
    assert json.loads(out)["R_equals_S"]["S"]["degree_bound"] == 3
    monkeypatch.setenv("DIMERKIT_DEFAULT_BOUNDS", "garbage")
    code, _, _ = call("algebras", "corpus:hex")
    assert code == 64


def _svg(text):
    return ET.fromstring(text)


def test_draw_hex_svg():
    code, out, _ = call("draw", "corpus:hex")
    root = _svg(out)
    q = entry("hex").quiver()
    assert len([c for c in root.iter(SVG + "circle") if c.get("class") == "vertex"]) == q.num_vertices == 1
    arrows = [p for p in root.iter(SVG + "path") if "arrow" in (p.get("class") or "").split()]
    assert len(arrows) == len(q.arrows) == 3
    windings = [t for t in root.iter(SVG + "text") if t.get("class") == "winding"]
    assert len(windings) == 3


def test_draw_matching_overlay():
    q = entry("fig1").quiver()
    pms = enumerate_perfect_matchings(q)
    code, out, _ = call("draw", "corpus:fig1", "--matching", "0")
    matched = [p for p in _svg(out).iter(SVG + "path") if p.get("class") == "arrow matched"]
    assert len(matched) == len(pms[0].arrows)
    assert {p.get("data-arrow") for p in matched} == set(q.names(pms[0].arrows))


@pytest.mark.parametrize("name", ["hex", "conifold", "fig1"])
def test_draw_dot_edges(name):
    code, out, _ = call("draw", f"corpus:{name}", "--format", "dot")
    assert sum("->" in line for line in out.splitlines()) == len(entry(name).quiver().arrows)


def test_svg_needs_coordinates(tmp_path):
    src = "\n".join(l for l in entry("hex").source.splitlines() if not l.startswith("pos")) + "\n"
    f = tmp_path / "nopos.dimer"
    f.write_text(src)
    assert call("draw", str(f))[0] == 2
    assert call("draw", str(f), "--format", "dot")[0] == 0
