import json

import numpy as np
import pytest

from weylcurves import bruhat as br
from weylcurves import cli
from weylcurves import curves as cv
from weylcurves import signed_perm as sp


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEnumerate:
    def test_so_level(self, capsys, tmp_path):
        out_path = tmp_path / "d3.json"
        code, _, err = run(
            capsys, "enumerate", "--m", "3", "--json", str(out_path)
        )
        assert code == cli.EXIT_OK
        data = json.loads(out_path.read_text())
        assert data["count"] == 24
        assert [1, 2, 3] in data["elements"]
        assert "enumerated 24" in err

    def test_spin_level_n_alias(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--n", "2", "--spin")
        assert code == cli.EXIT_OK
        assert json.loads(out)["count"] == 48

    def test_guard_is_usage_error(self, capsys):
        code, _, err = run(capsys, "enumerate", "--m", "9")
        assert code == cli.EXIT_USAGE
        assert "error" in err


class TestClassify:
    def test_json_schema(self, capsys):
        code, out, _ = run(capsys, "classify", "--n", "3")
        assert code == cli.EXIT_OK
        data = json.loads(out)
        assert data["level"] == "SO"
        assert data["group_order"] == 192
        assert len(data["classes"]) == 3
        for info in data["classes"]:
            assert set(info) == {"rep", "size", "s_values", "named_reps"}
        assert data["elapsed_ms"] is None
        assert set(data["move_counts"]) == {"TR", "AD", "CHOP", "DELTA"}

    def test_reports_are_reproducible_bytes(self, capsys):
        _, out1, _ = run(capsys, "classify", "--m", "4", "--spin")
        _, out2, _ = run(capsys, "classify", "--m", "4", "--spin")
        assert out1 == out2

    def test_timing_flag_embeds_elapsed(self, capsys):
        code, out, _ = run(capsys, "classify", "--m", "3", "--timing")
        assert code == cli.EXIT_OK
        assert json.loads(out)["elapsed_ms"] > 0

    def test_csv_output(self, capsys, tmp_path):
        csv_path = tmp_path / "classes.csv"
        code, _, _ = run(
            capsys, "classify", "--m", "4", "--csv", str(csv_path)
        )
        assert code == cli.EXIT_OK
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "n,level,class,representative,size,s"
        assert len(lines) == 4


class TestDecompose:
    def test_germ_matrix_file(self, capsys, tmp_path):
        germ = cv.germ_frame(
            sp.SignedPermutation((2, -1, 3)), 1e-3, cv.TridiagonalLog.ones(3)
        )
        path = tmp_path / "germ.txt"
        path.write_text(
            "\n".join(" ".join(repr(float(x)) for x in row) for row in germ)
        )
        code, out, _ = run(
            capsys, "decompose", "--input", str(path), "--tol", "1e-12"
        )
        assert code == cli.EXIT_OK
        data = json.loads(out)
        assert data["q0"] == [3, -2, 1]
        assert data["residual"] < 1e-10

    def test_json_matrix_stdin(self, capsys, monkeypatch):
        import io

        q = br.random_so(4, np.random.default_rng(0))
        monkeypatch.setattr("sys.stdin", io.StringIO(br.matrix_to_json(q)))
        code, out, _ = run(capsys, "decompose")
        assert code == cli.EXIT_OK
        assert json.loads(out)["residual"] < 1e-10

    def test_non_orthogonal_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 0\n0 2\n")
        code, _, err = run(capsys, "decompose", "--input", str(path))
        assert code == cli.EXIT_USAGE
        assert "error" in err


class TestChopVerify:
    def test_small_exhaustive(self, capsys):
        code, out, err = run(
            capsys, "chop-verify", "--m", "3", "--h", "1e-2", "--samples", "2"
        )
        assert code == cli.EXIT_OK
        data = json.loads(out)
        assert data["checked"] == 48
        assert data["failures"] == []
        assert "48/48" in err


class TestTransit:
    def test_so_witness(self, capsys):
        code, out, _ = run(
            capsys, "transit", "--d1", "[-1,-1,1,1]", "--d2", "[1,1,-1,-1]"
        )
        assert code == cli.EXIT_OK
        data = json.loads(out)
        assert data["valid"]
        q = sp.SignedPermutation(tuple(data["witness"]))
        assert sp.delta(q).signs == (-1, -1, 1, 1)
        assert sp.delta(sp.tr(q)).signs == (1, 1, -1, -1)

    def test_spin_chain(self, capsys):
        code, out, _ = run(
            capsys,
            "transit", "--spin",
            "--d1", "[-1,-1,1]", "--d2", "[-1,-1,1]",
            "--sign1", "1", "--sign2", "-1",
        )
        assert code == cli.EXIT_OK
        data = json.loads(out)
        assert 2 <= data["jumps"] <= 3

    def test_trace_mismatch_is_usage_error(self, capsys):
        code, _, err = run(
            capsys, "transit", "--d1", "[1,1,1]", "--d2", "[-1,-1,1]"
        )
        assert code == cli.EXIT_USAGE
        assert "error" in err

    def test_bad_signs_rejected(self, capsys):
        code, _, _ = run(capsys, "transit", "--d1", "[2,1,1]", "--d2", "[1,1,1]")
        assert code == cli.EXIT_USAGE


class TestCurve:
    def test_inline_spec(self, capsys):
        spec = cv.standard_spec(2)
        code, out, err = run(
            capsys,
            "curve", "--spec", json.dumps(spec.to_json_dict()),
            "--samples", "96",
        )
        assert code == cli.EXIT_OK
        data = json.loads(out)
        assert data["min_wronskian"] > 0
        assert data["endpoint_lift_sign"] in (1, -1)
        assert len(data["endpoint_cell"]) == 3
        assert "min Wronskian" in err

    def test_identical_runs_byte_identical(self, capsys):
        spec = json.dumps(cv.standard_spec(3).to_json_dict())
        _, out1, _ = run(capsys, "curve", "--spec", spec, "--samples", "64")
        _, out2, _ = run(capsys, "curve", "--spec", spec, "--samples", "64")
        assert out1 == out2

    def test_bad_spec_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "curve", "--spec", '{"n": 3}')
        assert code == cli.EXIT_USAGE


class TestSelftest:
    def test_all_suites_pass(self, capsys):
        code, _, err = run(capsys, "selftest", "--seed", "0")
        assert code == cli.EXIT_OK
        assert "6 passed, 0 failed" in err


class TestParser:
    def test_missing_subcommand_exits_two_via_argparse(self, capsys):
        with pytest.raises(SystemExit):
            cli.main([])

    def test_missing_size_is_usage_error(self, capsys):
        code, _, err = run(capsys, "classify")
        assert code == cli.EXIT_USAGE
        assert "--m or --n" in err
