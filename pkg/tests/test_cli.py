import csv
import io
import json

import pytest

from lattice_dispersion.cli import main
from lattice_dispersion.dilation import PointSet


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_writes_point_file(tmp_path, capsys):
    path = tmp_path / "p.txt"
    code, _, _ = run(capsys, "generate", "--lattice", "golden", "--n", "32", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# d=2 n=32 t=")
    assert len(lines) == 33
    assert PointSet.read(path).N == 32


def test_dispersion_json(tmp_path, capsys):
    path = tmp_path / "p.txt"
    run(capsys, "generate", "--lattice", "frolov", "--dim", "2", "--n", "20", "--out", str(path))
    code, out, _ = run(capsys, "dispersion", "--in", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["volume"] > 0
    assert set(data) == {"volume", "witness", "algorithm", "certified_exact"}
    assert data["certified_exact"] is True


def test_scaling_csv(capsys):
    code, out, _ = run(capsys, "scaling", "--lattice", "golden", "--n", "16,32,64")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["N", "n_t", "disp", "n_times_disp"]
    assert [r[0] for r in rows[1:]] == ["16", "32", "64"]


def test_scaling_json(capsys):
    code, out, _ = run(capsys, "scaling", "--n", "8", "--format", "json")
    assert code == 0
    assert json.loads(out)[0]["N"] == 8


def test_bounded_and_counting(capsys):
    code, out, _ = run(capsys, "bounded", "--lattice", "integer", "--dim", "2", "--m", "4,8")
    assert code == 0
    assert out.splitlines()[0] == "M,disp_star_window,growth_ratio"
    code, out, _ = run(capsys, "counting", "--volumes", "10,100", "--shifts", "5")
    assert code == 0
    assert out.splitlines()[0] == "vol,max_discrepancy,max_log_bound_ratio"
    assert len(out.splitlines()) == 3


def test_deterministic_output(capsys):
    _, a, _ = run(capsys, "counting", "--volumes", "10,100", "--shifts", "7", "--seed", "9")
    _, b, _ = run(capsys, "counting", "--volumes", "10,100", "--shifts", "7", "--seed", "9")
    assert a == b
    _, c, _ = run(capsys, "scaling", "--n", "16,32")
    _, d, _ = run(capsys, "scaling", "--n", "16,32")
    assert c == d


def test_custom_lattice_file(tmp_path, capsys):
    from lattice_dispersion import golden_lattice

    path = tmp_path / "lat.json"
    path.write_text(golden_lattice().to_json())
    code, out, _ = run(capsys, "scaling", "--lattice", f"custom:{path}", "--n", "8")
    assert code == 0


def test_validation_errors_exit_1(capsys, tmp_path):
    assert run(capsys, "scaling", "--n", "abc")[0] == 1
    assert run(capsys, "scaling", "--lattice", "nope", "--n", "4")[0] == 1
    assert run(capsys, "scaling", "--lattice", "integer", "--dim", "2", "--n", "4")[0] == 1
    assert run(capsys, "dispersion", "--in", str(tmp_path / "missing.txt"))[0] == 1
    assert run(capsys, "generate", "--lattice", "golden", "--dim", "3", "--n", "4")[0] == 1
    assert run(capsys)[0] == 1


def test_invariant_violation_exits_2(tmp_path, capsys):
    from dataclasses import replace

    from lattice_dispersion import custom_lattice

    # a lattice with collisions but a false certificate trips the sweep check
    bogus = replace(custom_lattice([[1.0, 0.0], [0.0, 1.0]]), nm_certified=1.0)
    path = tmp_path / "bogus.json"
    path.write_text(bogus.to_json())
    code, _, err = run(capsys, "generate", "--lattice", f"custom:{path}", "--n", "5")
    assert code == 2
    assert "invariant" in err


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "all invariants hold" in out
