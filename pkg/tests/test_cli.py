import csv
import json
import subprocess
import sys
from fractions import Fraction
from math import comb

import pytest

import tia.tia1d as tia1d
from tia.cli import build_parser, main


def chain_doc(*terms, period=None):
    return {"lattice": {"h": "1", "period": period},
            "terms": [{"coeff": c, "gen": g} for c, g in terms]}


P0 = {"kind": "point", "a": 0, "m": 0, "n": 0}
X01 = {"kind": "interval", "a": 0, "b": 1, "m": 0, "n": 0}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return write


@pytest.fixture
def clean_caches():
    tia1d.clear_caches()
    yield
    tia1d.clear_caches()


def test_product_example(files, tmp_path, capsys):
    out = tmp_path / "out.json"
    rc = main(["product", files("a.json", chain_doc(("1", P0))), files("b.json", chain_doc(("1", X01))), "-o", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["terms"] == [{"coeff": "1/2", "gen": {"kind": "point", "a": 0, "m": 1, "n": 0}}]


def test_product_empty(files, capsys):
    rc = main(["product", files("a.json", chain_doc()), files("b.json", chain_doc(("1", X01)))])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["terms"] == []


def test_product_malformed(files, capsys):
    rc = main(["product", files("a.json", chain_doc(("0.5", P0))), files("b.json", chain_doc(("1", X01)))])
    assert rc == 2
    assert "terms[0].coeff" in capsys.readouterr().err
    assert main(["product", files("c.json", "{not json"), files("d.json", chain_doc())]) == 2
    assert main(["product", "/nonexistent/file.json", files("e.json", chain_doc())]) == 2


def test_product_lattice_mismatch(files, capsys):
    rc = main(["product", files("a.json", chain_doc(("1", P0), period=5)), files("b.json", chain_doc(("1", X01)))])
    assert rc == 3


def test_boundary_command(files, capsys):
    rc = main(["boundary", files("a.json", chain_doc(("1", {"kind": "infinitesimal", "a": 0})))])
    assert rc == 0
    terms = json.loads(capsys.readouterr().out)["terms"]
    assert {(t["coeff"], t["gen"]["m"], t["gen"]["n"]) for t in terms} == {("1", 1, 0), ("-1", 0, 1)}


def test_d_chain_product(files, capsys):
    lat = [{"h": "1", "period": None}] * 2
    a = {"lattice": lat, "terms": [{"coeff": "1", "factors": [P0, X01]}]}
    b = {"lattice": lat, "terms": [{"coeff": "1", "factors": [X01, P0]}]}
    assert main(["product", files("a.json", a), files("b.json", b)]) == 0
    (t,) = json.loads(capsys.readouterr().out)["terms"]
    assert t["coeff"] == "-1/4"


def test_verify_pass(capsys):
    assert main(["verify", "--dims", "1", "--dec-bound", "1", "--window", "3"]) == 0
    assert capsys.readouterr().out.strip().endswith("PASS")
    assert main(["verify", "--dims", "3", "--dec-bound", "1", "--window", "3", "--samples", "100"]) == 0
    assert main(["verify", "--dims", "1", "--dec-bound", "1", "--period", "3", "--no-triples"]) == 0


def test_verify_config_errors(capsys):
    assert main(["verify", "--dims", "4"]) == 3
    assert main(["verify", "--dec-bound", "5"]) == 3
    assert main(["verify", "--period", "2"]) == 3
    assert main(["verify", "--bogus"]) == 2


def test_verify_catches_corrupted_coefficient(monkeypatch, clean_caches, capsys):
    real = tia1d.point_at_left_end
    monkeypatch.setattr(tia1d, "point_at_left_end", lambda m, n, m2: real(m, n, m2) * 2)
    tia1d.clear_caches()
    rc = main(["verify", "--dims", "1", "--dec-bound", "0", "--window", "3"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "associativity" in out and ") . " in out
    assert out.strip().endswith("FAIL")


def test_oracle_check_small(capsys):
    assert main(["oracle-check", "--dec-bound", "0", "--window", "3"]) == 0
    assert capsys.readouterr().out.strip().splitlines()[-1].startswith("AGREE:")


def test_oracle_check_rejects_swapped_binomials(monkeypatch, clean_caches, capsys):
    def swapped(m, n, m2, n2):
        return Fraction(comb(m + m2 + 1, m2) * comb(n + n2 + 1, n2), comb(m + n + m2 + n2 + 3, m2 + n2 + 1))
    monkeypatch.setattr(tia1d, "point_on_infinitesimal", swapped)
    tia1d.clear_caches()
    rc = main(["oracle-check", "--dec-bound", "1", "--window", "2"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "closed form" in out and "oracle" in out and "DISAGREE" in out


def test_fluid_build_small_n(capsys):
    assert main(["fluid", "build", "--N", "2"]) == 3
    assert main(["fluid", "build", "--delta", "3/2"]) == 3


def test_fluid_build_and_run(tmp_path, capsys):
    out = tmp_path / "b.json"
    assert main(["fluid", "build", "--N", "3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["definiteness"]["status"] == "positive definite" and rep["dim_V"] > 0
    c1, j1 = tmp_path / "r1.csv", tmp_path / "r1.json"
    args = ["fluid", "run", "--N", "3", "--steps", "100", "--dt", "0.1", "--method", "implicit_midpoint"]
    assert main(args + ["--csv", str(c1), "--json", str(j1)]) == 0
    rows = list(csv.DictReader(open(c1)))
    e = [float(r["energy"]) for r in rows]
    assert len(rows) == 101 and max(abs(x - e[0]) for x in e) / e[0] < 1e-10
    c2, j2 = tmp_path / "r2.csv", tmp_path / "r2.json"
    assert main(args + ["--csv", str(c2), "--json", str(j2)]) == 0
    assert c1.read_bytes() == c2.read_bytes() and j1.read_bytes() == j2.read_bytes()


def test_help_documents_flags():
    p = build_parser()
    text = p.format_help()
    for cmd in ("product", "boundary", "verify", "oracle-check", "fluid"):
        assert cmd in text
    sub = {a.dest: a for a in p._actions if a.dest == "command"}["command"].choices
    for name, sp in sub.items():
        h = sp.format_help()
        for act in sp._actions:
            if act.option_strings and act.dest != "help":
                assert act.option_strings[-1] in h
                assert act.help
                if act.default not in (None, False) and act.default != "==SUPPRESS==":
                    assert "default" in h


def test_module_entry_point_and_log_env():
    r = subprocess.run([sys.executable, "-m", "tia", "oracle-check", "--dec-bound", "0", "--window", "2"],
                       capture_output=True, text=True, env={"TIA_LOG": "debug", "PATH": ""})
    assert r.returncode == 0
    assert "DEBUG" in r.stderr
    r = subprocess.run([sys.executable, "-m", "tia", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "oracle-check" in r.stdout
