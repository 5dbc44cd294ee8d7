import io
import json
import math

import numpy as np
import pytest

from cli import EXIT_MALFORMED, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, main, parse_grid
from radial.errors import InvalidArgumentError


def read_table(text):
    lines = text.strip().splitlines()
    assert lines[0] == "r,value"
    return np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",", ndmin=2)


@pytest.fixture
def sampled(tmp_path):
    """texp:1 on (10, 127), written by the sample subcommand."""
    path = tmp_path / "chi.csv"
    assert main(["sample", "--fn", "texp:1", "--grid", "10,127", "--out", str(path)]) == EXIT_OK
    return path


class TestParseGrid:
    def test_valid(self):
        grid = parse_grid("20, 2047")
        assert grid.R == 20.0 and grid.N == 2047

    @pytest.mark.parametrize("text", ["20", "20,1.5", "a,b", "-1,10", "1,0"])
    def test_invalid(self, text):
        with pytest.raises(InvalidArgumentError):
            parse_grid(text)


class TestSample:
    def test_sine(self, capsys):
        assert main(["sample", "--fn", "sin:3.14159265", "--grid", "1,3"]) == EXIT_OK
        table = read_table(capsys.readouterr().out)
        np.testing.assert_allclose(table[:, 0], [0.25, 0.5, 0.75])
        np.testing.assert_allclose(table[:, 1], np.sin(3.14159265 * table[:, 0]), atol=1e-15)

    def test_bad_descriptor(self, capsys):
        assert main(["sample", "--fn", "bogus", "--grid", "1,3"]) == EXIT_USAGE
        assert "bogus" in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        target = tmp_path / "missing" / "out.csv"
        assert main(["sample", "--fn", "exp:1", "--grid", "1,3", "--out", str(target)]) == EXIT_USAGE


class TestApply:
    def test_zinv_then_zplus(self, tmp_path, sampled):
        inv = tmp_path / "inv.csv"
        back = tmp_path / "back.csv"
        assert main(["apply", "--op", "zinv", "--in", str(sampled), "--out", str(inv)]) == EXIT_OK
        assert main(["apply", "--op", "zplus", "--in", str(inv), "--out", str(back)]) == EXIT_OK
        original = read_table(sampled.read_text())
        np.testing.assert_allclose(read_table(back.read_text()), original, atol=1e-12)

    def test_fs_twice(self, tmp_path, sampled):
        image = tmp_path / "image.csv"
        back = tmp_path / "back.csv"
        assert main(["apply", "--op", "fs", "--in", str(sampled), "--out", str(image)]) == EXIT_OK
        assert main(["apply", "--op", "fs", "--in", str(image), "--out", str(back)]) == EXIT_OK
        np.testing.assert_allclose(read_table(back.read_text()), read_table(sampled.read_text()), atol=1e-13)

    def test_stdin(self, monkeypatch, capsys, sampled):
        monkeypatch.setattr("sys.stdin", io.StringIO(sampled.read_text()))
        assert main(["apply", "--op", "pr2", "--in", "-"]) == EXIT_OK
        assert read_table(capsys.readouterr().out).shape == (127, 2)

    def test_unknown_operator(self, sampled):
        assert main(["apply", "--op", "bogus", "--in", str(sampled)]) == EXIT_USAGE

    def test_unknown_operator_wins_over_bad_input(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("nonsense\n")
        assert main(["apply", "--op", "bogus", "--in", str(bad)]) == EXIT_USAGE

    @pytest.mark.parametrize(
        "content",
        ["nonsense\n", "r,value\n0.5,abc\n", "r,value\n0.5,1\n0.7,2\n", "r,value\n0,1\n1,2\n", "r,value\n"],
        ids=["header", "number", "spacing", "origin", "empty"],
    )
    def test_malformed(self, tmp_path, content):
        bad = tmp_path / "bad.csv"
        bad.write_text(content)
        assert main(["apply", "--op", "zplus", "--in", str(bad)]) == EXIT_MALFORMED

    def test_missing_file(self, tmp_path):
        assert main(["apply", "--op", "zplus", "--in", str(tmp_path / "nope.csv")]) == EXIT_MALFORMED


class TestKernel:
    def test_log_kernel(self, capsys):
        assert main(["kernel", "--op", "zinv", "--grid", "1,3"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "# N=3 R=1 op=zinv/kernel"
        K = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",")
        assert K.shape == (3, 3)
        assert math.isclose(K[1, 0], 0.5 * math.log(3.0), rel_tol=1e-14)
        np.testing.assert_allclose(K, K.T)

    def test_operator_matrix(self, capsys):
        assert main(["kernel", "--op", "dtilde-fd", "--grid", "1,4"]) == EXIT_OK
        assert "op=dtilde-fd/finite-difference" in capsys.readouterr().out

    def test_unknown(self):
        assert main(["kernel", "--op", "bogus", "--grid", "1,3"]) == EXIT_USAGE


class TestVerify:
    def test_json(self, capsys):
        assert main(["verify", "--suite", "specfun", "--json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["suite"] == "specfun" and data["pass"] is True
        assert set(data["checks"][0]) == {"name", "defect", "tol", "pass"}

    def test_table(self, capsys):
        assert main(["verify", "--suite", "specfun"]) == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("PASS")

    def test_forced_failure(self, capsys):
        assert main(["verify", "--suite", "nonhermitian", "--tol", "1e-30", "--json"]) == EXIT_VERIFY_FAILED
        out = capsys.readouterr().out.strip().splitlines()
        assert json.loads(out[-1])["pass"] is False

    def test_negative_tolerance(self):
        assert main(["verify", "--suite", "specfun", "--tol", "-1"]) == EXIT_USAGE

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["verify", "--suite", "bogus"])
        assert excinfo.value.code == 2


class TestDemo:
    def test_shift(self, capsys):
        assert main(["demo", "shift", "--a", "0.5", "--fn", "step:0,1", "--grid", "2,4095"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "1024" in out
        assert "0.5" in out

    def test_shift_snaps(self, capsys):
        assert main(["demo", "shift", "--a", "0.3", "--grid", "1,3"]) == EXIT_OK
        assert "Warning" in capsys.readouterr().err

    def test_shift_must_be_positive(self):
        assert main(["demo", "shift", "--a", "-1"]) == EXIT_USAGE

    def test_deficiency(self, capsys):
        assert main(["demo", "deficiency", "--sign", "1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "+1" in out and "finite" in out

    def test_both_signs(self, capsys):
        assert main(["demo", "deficiency", "--R", "10"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "+1" in out and "-1" in out and "growing" in out
