import json
import os

import pytest

from homcount.cli import main
from conftest import DATA


@pytest.fixture(autouse=True)
def data_env(monkeypatch):
    monkeypatch.setenv("HOMCOUNT_DATA", DATA)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def parse_report(out):
    items = {}
    for line in out.splitlines():
        key, _, val = line.partition(": ")
        items[key] = val
    return items


def test_homology_command(capsys):
    code, out = run(capsys, "homology", "--complex", "s2.cx")
    rep = parse_report(out)
    assert code == 0
    assert rep["H0"] == "Z" and rep["H1"] == "0" and rep["H2"] == "Z"


def test_count_hom_poincare(capsys):
    code, out = run(capsys, "count-hom", "--presentation", "poincare.pres",
                    "--group", "a5.grp")
    rep = parse_report(out)
    assert code == 0
    assert rep["homs"] == "121"
    assert rep["surjections"] == "120"
    assert rep["quotients"] == "1"


def test_dp_count_torus(capsys):
    code, out = run(capsys, "dp-count", "--complex", "torus7.cx",
                    "--group", "s3.grp")
    rep = parse_report(out)
    assert code == 0 and rep["homs"] == "18"


def test_json_mirror(capsys):
    code, out = run(capsys, "--json", "homology", "--complex", "s2.cx")
    data = json.loads(out)
    assert code == 0 and data["H2"] == "Z"


def test_deterministic_reports(capsys):
    _, out1 = run(capsys, "--seed", "5", "orbit", "--group", "s3.grp",
                  "--genus", "2", "--orbit-seeds", "2")
    _, out2 = run(capsys, "--seed", "5", "orbit", "--group", "s3.grp",
                  "--genus", "2", "--orbit-seeds", "2")
    assert out1 == out2


def test_input_error_exit_code(capsys):
    code, out = run(capsys, "homology", "--complex", "missing.cx")
    assert code == 2
    assert "error" in parse_report(out)


def test_bound_exceeded_exit_code(capsys):
    code, out = run(capsys, "--max-states", "5", "dp-count", "--complex",
                    "torus7.cx", "--group", "s3.grp")
    assert code == 2
    assert "budget" in out


def test_verify_parsimony_command(capsys, tmp_path):
    path = tmp_path / "and2.bool"
    path.write_text("in 2\nAND 0 1 -> 2\nout 2\n")
    code, out = run(capsys, "verify-parsimony", "--circuit", str(path),
                    "--gamma", "z2.grp")
    rep = parse_report(out)
    assert code == 0
    assert rep["parsimony"] == "PASS"
    assert rep["csat"] == rep["rsat4"] == "1"
    assert rep["zsat"] == "3"


def test_reduce_command(capsys, tmp_path):
    path = tmp_path / "or2.bool"
    path.write_text("in 2\nOR 0 1 -> 2\nout 2\n")
    out_path = tmp_path / "or2.rev"
    code, out = run(capsys, "reduce", "--circuit", str(path),
                    "--output", str(out_path))
    rep = parse_report(out)
    assert code == 0
    assert rep["csat"] == rep["rsat4"] == "3"
    assert out_path.exists()


def test_rubik_check_command(capsys):
    code, out = run(capsys, "rubik-check", "--gamma", "z2.grp", "--orbits", "7")
    rep = parse_report(out)
    assert code == 0
    assert rep["generated-order"] == "161280"
    assert rep["theorem-instance"] == "PASS"


def test_heegaard_command(capsys, tmp_path):
    path = tmp_path / "lens.glu"
    path.write_text("genus 1\nword tb1 tb1 tb1 tb1 tb1\n")
    code, out = run(capsys, "heegaard-count", "--gluing", str(path),
                    "--group", "a5.grp")
    rep = parse_report(out)
    assert code == 0 and rep["homs"] == "25"


def test_compile_zsat_command(capsys, tmp_path):
    # identity data circuit of width 2 over the 4-orbit quotient
    path = tmp_path / "ident.rev"
    path.write_text("alphabet 4\nwidth 2\n")
    code, out = run(capsys, "compile-zsat", "--circuit", str(path),
                    "--gamma", "z2.grp")
    rep = parse_report(out)
    assert code == 0
    assert rep["zsat-count"] == "1"
    assert rep["zombie-relation"] == "PASS"


def test_goursat_command(capsys, tmp_path):
    path = tmp_path / "diag.pairs"
    path.write_text("".join("%d %d\n" % (x, x) for x in range(6)))
    code, out = run(capsys, "goursat", "--group", "s3.grp",
                    "--group2", "s3.grp", "--subgroup", str(path))
    rep = parse_report(out)
    assert code == 0
    assert rep["n1-order"] == "1" and rep["quotient-order"] == "6"


def test_invert_lattice_command(capsys):
    code, out = run(capsys, "invert-lattice", "--presentation",
                    "poincare.pres", "--group", "s3.grp")
    rep = parse_report(out)
    assert code == 0
    assert rep["total-homs"] == "1"


def test_invert_lattice_complex(capsys):
    code, out = run(capsys, "invert-lattice", "--complex", "torus7.cx",
                    "--group", "s3.grp")
    rep = parse_report(out)
    assert code == 0
    assert rep["total-homs"] == "18"
