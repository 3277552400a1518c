"""Command-line surface: files, exit codes, determinism."""

import json
import os
from fractions import Fraction

import numpy as np
import pytest

from qtwist import fileio
from qtwist.cli import main, parse_grid, canonical_algebra, _SWEEP_COLUMNS
from qtwist.conventions import conventions_hash
from qtwist.errors import BadInput, FileFormatError
from qtwist.repspace import osp12_rep, spin_rep_sl2, vector_rep_sln


def test_canonical_algebra_aliases():
    assert canonical_algebra("sl2") == "A1"
    assert canonical_algebra("SL3") == "A2"
    assert canonical_algebra("a3") == "A3"
    assert canonical_algebra("so5") == "B2"
    assert canonical_algebra("osp(1|2)") == "OSP12"
    with pytest.raises(BadInput):
        canonical_algebra("e8")


def test_parse_grid():
    axis, values = parse_grid("mu=2..4:0.5")
    assert axis == "mu"
    assert values == [2.0, 2.5, 3.0, 3.5, 4.0]
    axis, values = parse_grid("q=0.3..0.8:0.25")
    assert axis == "q"
    assert values == [0.3, 0.55, 0.8]
    assert parse_grid("mu=9..8:1")[1] == []


def test_parse_grid_rejects_malformed():
    for bad in ("mu=2..4", "nu=1..2:1", "mu=1..2:0", "mu=1..2:-1", "garbage"):
        with pytest.raises(BadInput):
            parse_grid(bad)


# --- file round trips --------------------------------------------------


def test_matrix_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    m = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))).astype(complex)
    path = tmp_path / "m.json"
    fileio.write_matrix(str(path), "m", m, {"note": "test"})
    back, doc = fileio.read_matrix(str(path))
    assert np.array_equal(back, m)
    assert doc["conventions"] == conventions_hash()
    assert doc["meta"]["note"] == "test"


@pytest.mark.parametrize("make_rep", [
    lambda: spin_rep_sl2(Fraction(3, 2), 0.5),
    lambda: vector_rep_sln(4, 0.3),
    lambda: osp12_rep(0.8),
])
def test_representation_round_trip_bit_exact(tmp_path, make_rep):
    rep = make_rep()
    path = tmp_path / "rep.json"
    fileio.write_representation(str(path), rep)
    back = fileio.read_representation(str(path))
    assert back.rs.algebra_id == rep.rs.algebra_id
    assert back.q == rep.q
    assert back.weights == rep.weights
    assert back.parities == rep.parities
    for i in range(rep.rs.rank):
        assert np.array_equal(back.e[i], rep.e[i])
        assert np.array_equal(back.f[i], rep.f[i])
        assert np.array_equal(back.qt[i], rep.qt[i])


def test_matrix_file_rejected_as_representation(tmp_path):
    path = tmp_path / "m.json"
    fileio.write_matrix(str(path), "m", np.eye(2, dtype=complex))
    with pytest.raises(FileFormatError):
        fileio.read_representation(str(path))


def test_malformed_json_rejected(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(FileFormatError):
        fileio.read_matrix(str(path))


# --- compute ----------------------------------------------------------------


def test_compute_writes_matrix_files(tmp_path, capsys):
    out = tmp_path / "artifacts"
    code = main(["compute", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--q", "0.5", "--mu", "8", "--method", "both",
                 "--out", str(out)])
    assert code == 0
    names = {p.name for p in out.iterdir()}
    assert names == {"rhat.json", "k.json", "r.json", "b.json",
                     "f_linear.json", "f_product.json", "r_dyn.json"}
    f, _ = fileio.read_matrix(str(out / "f_linear.json"))
    assert f.shape == (4, 4)
    assert np.allclose(np.diag(f), 1.0)
    assert "x = " in capsys.readouterr().out


def test_compute_trivial_rep(tmp_path):
    out = tmp_path / "trivial"
    code = main(["compute", "--algebra", "sl2", "--reps", "spin:0,spin:0",
                 "--mu", "8", "--out", str(out)])
    assert code == 0
    k, _ = fileio.read_matrix(str(out / "k.json"))
    assert k.shape == (1, 1)
    assert k[0, 0] == 1.0


def test_compute_broadcasts_single_mu(tmp_path):
    out = tmp_path / "a2"
    code = main(["compute", "--algebra", "sl3", "--reps", "vector,vector",
                 "--mu", "8.37", "--out", str(out)])
    assert code == 0
    _, doc = fileio.read_matrix(str(out / "rhat.json"))
    assert doc["meta"]["mu"] == [8.37, 8.37]


def test_compute_rejects_bad_q(tmp_path, capsys):
    out = tmp_path / "nothing"
    code = main(["compute", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--q", "1.5", "--mu", "8", "--out", str(out)])
    assert code == 3
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_compute_exit_2_on_nonconvergence(tmp_path, capsys):
    code = main(["compute", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--mu", "8.37", "--method", "product", "--max-terms", "2",
                 "--out", str(tmp_path / "x")])
    assert code == 2
    assert "NotConverged" in capsys.readouterr().err


def test_compute_rejects_wrong_arity(tmp_path):
    code = main(["compute", "--algebra", "sl2", "--reps", "spin:0.5",
                 "--mu", "8", "--out", str(tmp_path / "y")])
    assert code == 3


# --- verify -----------------------------------------------------------------


def test_verify_passes_and_writes_report(tmp_path, capsys):
    out = tmp_path / "report"
    code = main(["verify", "--algebra", "sl2",
                 "--reps", "spin:0.5,spin:0.5,spin:0.5",
                 "--mu", "8.37", "--out", str(out)])
    assert code == 0
    report = fileio.read_report(str(out / "verify_report.json"))
    assert report["pass"] is True
    assert report["static"]["pass"] is True
    assert report["dynamic"]["pass"] is True
    assert report["conventions"] == conventions_hash()
    assert (out / "verify_report.png").stat().st_size > 0
    text = capsys.readouterr().out
    assert "ybe" in text and "dynamical_ybe" in text


def test_verify_deterministic_modulo_timestamp(tmp_path):
    args = ["verify", "--algebra", "osp12", "--reps", "osp3,osp3,osp3",
            "--q", "0.3", "--mu", "8"]
    outs = []
    for sub in ("one", "two"):
        out = tmp_path / sub
        assert main(args + ["--out", str(out)]) == 0
        outs.append(fileio.report_bytes_for_comparison(
            str(out / "verify_report.json")))
    assert outs[0] == outs[1]


def test_verify_resonant_exits_2_naming_subcheck(tmp_path, capsys):
    out = tmp_path / "resonant"
    code = main(["verify", "--algebra", "sl2",
                 "--reps", "spin:0.5,spin:0.5,spin:0.5",
                 "--mu", "0", "--out", str(out)])
    assert code == 2
    err = capsys.readouterr().err
    assert "linear_eq" in err
    assert "ResonantParameter" in err
    report = fileio.read_report(str(out / "verify_report.json"))
    assert report["dynamic"]["errors"]


def test_verify_exit_1_on_residual_failure(tmp_path, capsys):
    # an absurdly tight tolerance turns machine-precision residuals into
    # failures without touching the math
    out = tmp_path / "tight"
    code = main(["verify", "--algebra", "sl2",
                 "--reps", "spin:0.5,spin:0.5,spin:0.5",
                 "--mu", "8.37", "--tol", "1e-30", "--out", str(out)])
    assert code == 1
    assert "tolerance" in capsys.readouterr().err


def test_verify_rejects_wrong_arity(tmp_path):
    code = main(["verify", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--mu", "8", "--out", str(tmp_path / "z")])
    assert code == 3


def test_verify_rejects_missing_mu(tmp_path):
    code = main(["verify", "--algebra", "sl2",
                 "--reps", "spin:0.5,spin:0.5,spin:0.5",
                 "--out", str(tmp_path / "w")])
    assert code == 3


def test_verify_rejects_bad_ordering_index(tmp_path):
    code = main(["verify", "--algebra", "sl2",
                 "--reps", "spin:0.5,spin:0.5,spin:0.5",
                 "--mu", "8.37", "--ordering", "5",
                 "--out", str(tmp_path / "v")])
    assert code == 3


# --- sweep -------------------------------------------------------------


def test_sweep_writes_csv_and_figure(tmp_path):
    out = tmp_path / "sweep"
    code = main(["sweep", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--grid", "mu=6..8:1", "--out", str(out)])
    assert code == 0
    lines = (out / "sweep.csv").read_text().strip().splitlines()
    assert lines[0] == ",".join(_SWEEP_COLUMNS)
    assert len(lines) == 4
    assert (out / "sweep.png").stat().st_size > 0


def test_sweep_flags_resonant_rows_but_exits_0(tmp_path, capsys):
    out = tmp_path / "flagged"
    code = main(["sweep", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--grid", "mu=0..9:4.5", "--out", str(out)])
    assert code == 0
    import csv as csv_mod
    with open(out / "sweep.csv") as handle:
        rows = list(csv_mod.DictReader(handle))
    assert len(rows) == 3
    assert "ResonantParameter" in rows[0]["error"]
    assert rows[2]["error"] == ""
    assert float(rows[2]["worst_residual"]) < 1e-9
    assert "flagged" in capsys.readouterr().out


def test_sweep_empty_grid(tmp_path):
    out = tmp_path / "empty"
    code = main(["sweep", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--grid", "mu=9..8:1", "--out", str(out)])
    assert code == 0
    lines = (out / "sweep.csv").read_text().strip().splitlines()
    assert lines == [",".join(_SWEEP_COLUMNS)]


def test_sweep_over_q(tmp_path):
    out = tmp_path / "qsweep"
    code = main(["sweep", "--algebra", "osp12", "--reps", "osp3,osp3",
                 "--grid", "q=0.3..0.8:0.25", "--mu", "9.5",
                 "--out", str(out)])
    assert code == 0
    import csv as csv_mod
    with open(out / "sweep.csv") as handle:
        rows = list(csv_mod.DictReader(handle))
    assert [float(r["q"]) for r in rows] == [0.3, 0.55, 0.8]
    assert all(r["error"] == "" for r in rows)


def test_sweep_requires_grid(tmp_path):
    code = main(["sweep", "--algebra", "sl2", "--reps", "spin:0.5,spin:0.5",
                 "--out", str(tmp_path / "u")])
    assert code == 3


# --- validate-rep ------------------------------------------------------


def test_validate_rep_round_trip(tmp_path, capsys):
    rep_path = tmp_path / "sl3_vector.json"
    fileio.write_representation(str(rep_path), vector_rep_sln(3, 0.5))
    code = main(["validate-rep", "--algebra", "sl3",
                 "--reps", f"file:{rep_path}"])
    assert code == 0
    assert "satisfies" in capsys.readouterr().out


def test_validate_rep_corrupted_entry_fails_with_named_relation(
        tmp_path, capsys):
    rep_path = tmp_path / "bad.json"
    fileio.write_representation(str(rep_path), vector_rep_sln(3, 0.5))
    doc = json.loads(rep_path.read_text())
    doc["e"][0]["entries"][0][1][0] += 1e-3
    rep_path.write_text(json.dumps(doc))
    code = main(["validate-rep", "--algebra", "sl3",
                 "--reps", f"file:{rep_path}"])
    assert code == 1
    captured = capsys.readouterr()
    assert "validator failed" in captured.err
    assert "ef" in captured.out


def test_validate_rep_dim_mismatch_exits_3(tmp_path, capsys):
    rep_path = tmp_path / "dim.json"
    fileio.write_representation(str(rep_path), vector_rep_sln(3, 0.5))
    doc = json.loads(rep_path.read_text())
    doc["dim"] = 4
    rep_path.write_text(json.dumps(doc))
    code = main(["validate-rep", "--algebra", "sl3",
                 "--reps", f"file:{rep_path}"])
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_validate_rep_algebra_mismatch(tmp_path):
    rep_path = tmp_path / "osp.json"
    fileio.write_representation(str(rep_path), osp12_rep(0.5))
    code = main(["validate-rep", "--algebra", "sl2",
                 "--reps", f"file:{rep_path}"])
    assert code == 3


def test_validate_rep_builtin_spec_and_report(tmp_path):
    out = tmp_path / "valrep"
    code = main(["validate-rep", "--algebra", "b2", "--reps", "vector",
                 "--out", str(out)])
    assert code == 0
    report = fileio.read_report(str(out / "validate_rep_report.json"))
    assert report["pass"] is True


# --- parser-level behaviour ----------------------------------------------


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_usage_error_exits_3(capsys):
    assert main(["compute"]) == 3
    assert main(["no-such-command"]) == 3
    capsys.readouterr()


def test_spin_spec_outside_a1_rejected(tmp_path):
    code = main(["compute", "--algebra", "sl3", "--reps", "spin:1,vector",
                 "--mu", "8", "--out", str(tmp_path / "t")])
    assert code == 3
