import io
import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from brf import BrfParams, closed_survival, density_z, sample_x, tail_density_z
from brf.cli import FitReport, dumps, run


def _run(*argv, stdin=b""):
    return run(list(argv), io.BytesIO(stdin))


def _ok(*argv, stdin=b""):
    code, out, err = _run(*argv, stdin=stdin)
    assert code == 0, err.decode()
    return out.decode()


def _tsv(text):
    lines = text.splitlines()
    assert lines[0].startswith("#")
    return lines[0][1:].split("\t"), np.array([[float(v) for v in ln.split("\t")] for ln in lines[1:]])


class TestQuantileAndStats:
    def test_symmetric_quantile(self):
        assert _ok("quantile", "-a", "1", "-b", "1", "-A", "1", "-u", "0.5") == "1\n"

    def test_stats_mean(self):
        doc = json.loads(_ok("stats", "-a", "2", "-b", "0.5", "-A", "2.718281828"))
        assert doc["log_stats"]["mean"] == pytest.approx(2.5, abs=1e-9)
        assert doc["raw_moments"][0]["finite"] is False
        assert doc["raw_moments"][0]["value"] is None
        assert set(doc) >= {"x_mode", "x_median", "taylor"}

    def test_quantile_domain(self):
        code, _, err = _run("quantile", "-a", "1", "-b", "1", "-u", "1.5")
        assert code == 1 and err.startswith(b"error\tcode=1\t")


class TestSample:
    def test_values_round_trip(self):
        out = _ok("sample", "-a", "0.7", "-b", "0.2", "-A", "3", "-n", "50", "--seed", "4")
        got = np.array([float(v) for v in out.split()])
        np.testing.assert_array_equal(got, sample_x(BrfParams(3, 0.7, 0.2), 50, 4).values)

    def test_digits(self):
        out = _ok("sample", "-a", "0.7", "-b", "0.2", "-n", "20", "--seed", "1")
        for line in out.split():
            mantissa = line.split("e")[0].replace("-", "").replace(".", "").lstrip("0")
            assert len(mantissa) >= 15 or float(line) == float(f"{float(line):.15g}")
            assert "," not in line

    def test_deterministic(self):
        argv = ("sample", "-a", "0.99", "-b", "0.3", "-n", "1000", "--seed", "7")
        assert _run(*argv) == _run(*argv)

    def test_log_output(self):
        out = _ok("sample", "-a", "1", "-b", "1", "-n", "5", "--seed", "2", "--log")
        x = _ok("sample", "-a", "1", "-b", "1", "-n", "5", "--seed", "2")
        np.testing.assert_allclose(np.exp(np.array(out.split(), float)), np.array(x.split(), float), rtol=1e-14)


class TestCurves:
    def test_pdf_z(self):
        cols, rows = _tsv(_ok("pdf", "-a", "0.99", "-b", "0.3", "--grid", "-3:5:9", "--tails"))
        assert cols == ["z", "pdf", "left_tail", "right_tail"]
        p = BrfParams(1, 0.99, 0.3)
        np.testing.assert_allclose(rows[:, 1], density_z(p, rows[:, 0]), rtol=1e-15)
        np.testing.assert_allclose(rows[:, 3], tail_density_z(p, rows[:, 0], "right"), rtol=1e-15)

    def test_pdf_numeric_x(self):
        cols, rows = _tsv(
            _ok("pdf", "-a", "1", "-b", "1", "--grid", "-2:2:5", "--space", "x", "--numeric", "--step", "1e-3")
        )
        assert cols == ["x", "pdf"]
        want = 1 / (1 + rows[:, 0]) ** 2
        np.testing.assert_allclose(rows[:, 1], want, atol=1e-8)

    def test_cdf(self):
        cols, rows = _tsv(_ok("cdf", "-a", "0.6", "-b", "0.3", "--grid", "-1:1:3", "--tails"))
        assert cols == ["z", "cdf", "left_tail_cdf", "right_tail_survival"]
        p = BrfParams(1, 0.6, 0.3)
        np.testing.assert_allclose(rows[:, 1], 1 - closed_survival(p, np.exp(rows[:, 0])), atol=1e-15)

    def test_missing_tail_is_nan(self):
        _, rows = _tsv(_ok("pdf", "-a", "0", "-b", "0.5", "--grid", "-1:0:3", "--tails"))
        assert np.all(np.isnan(rows[:, 3]))

    @pytest.mark.parametrize("grid", ["1:0:5", "0:1:1", "a:b:c", "0:1"])
    def test_bad_grid(self, grid):
        code, _, err = _run("pdf", "-a", "1", "-b", "1", "--grid", grid)
        assert code == 1 and b"UsageError" in err

    def test_degenerate(self):
        code, _, err = _run("pdf", "-a", "0", "-b", "0", "--grid", "0:1:3")
        assert code == 1 and b"DegenerateDistributionError" in err


@pytest.fixture(scope="module")
def samples():
    return _ok("sample", "-a", "0.99", "-b", "0.3", "-A", "1", "-n", "1000000", "--seed", "7").encode()


class TestFitPipeline:
    def test_tails(self, samples):
        rep = FitReport.from_json(_ok("fit", "--method", "tails", "--qlow", "0.1", "--qhigh", "0.9", "-", stdin=samples))
        assert rep.params["a"] == pytest.approx(0.99, rel=0.1)
        assert rep.params["b"] == pytest.approx(0.3, rel=0.1)
        assert rep.input["n"] == 10**6

    @pytest.mark.parametrize("method", ["moments", "moments-jackknife"])
    def test_moments(self, samples, method):
        rep = FitReport.from_json(_ok("fit", "--method", method, "-", stdin=samples))
        assert abs(rep.params["a"] - 0.99) <= 0.02 and abs(rep.params["b"] - 0.3) <= 0.02
        assert rep.log_stats["mean"] == pytest.approx(rep.params["a"] - rep.params["b"], rel=1e-12)

    def test_report_round_trip(self, samples):
        text = _ok("fit", "--method", "moments", "-", stdin=samples)
        rep = FitReport.from_json(text)
        assert rep.to_json() == text
        assert set(rep.input) >= {"n", "min", "max", "z_mean", "z_var"}

    def test_hist_then_fit(self, samples):
        hist = _ok("hist", "-", stdin=samples).encode()
        rep = FitReport.from_json(_ok("fit", "--method", "tails", "-", stdin=hist))
        assert rep.params["a"] == pytest.approx(0.99, rel=0.1)
        assert rep.input["binned"] is True

    def test_classify(self, samples):
        hist = _ok("hist", "-", stdin=samples).encode()
        doc = json.loads(_ok("classify", "-", stdin=hist))
        assert doc["variant"] == "TwoSidedBrf"
        assert json.loads(_ok("classify", "-", stdin=samples))["variant"] == "TwoSidedBrf"

    def test_rank(self):
        data = _ok("sample", "-a", "1", "-b", "1", "-n", "10000", "--seed", "3").encode()
        rep = FitReport.from_json(_ok("fit", "--method", "rank", "-", stdin=data))
        assert abs(rep.params["a"] - 1) <= 0.1 and abs(rep.params["b"] - 1) <= 0.1


class TestHist:
    def test_columns(self):
        data = _ok("sample", "-a", "1", "-b", "1", "-n", "1000", "--seed", "3").encode()
        cols, rows = _tsv(_ok("hist", "--bins", "20", "-", stdin=data))
        assert cols == ["z", "count", "density"]
        assert rows.shape == (20, 3) and rows[:, 1].sum() == 1000

    def test_log_input(self):
        z = _ok("sample", "-a", "1", "-b", "1", "-n", "1000", "--seed", "3", "--log").encode()
        x = _ok("sample", "-a", "1", "-b", "1", "-n", "1000", "--seed", "3").encode()
        a = _tsv(_ok("hist", "--log-input", "-", stdin=z))[1]
        b = _tsv(_ok("hist", "-", stdin=x))[1]
        np.testing.assert_array_equal(a[:, 1], b[:, 1])


class TestInputHandling:
    def test_non_positive(self):
        code, out, err = _run("fit", "-", stdin=b"1\n2\n-3\n4\n")
        assert code == 2 and out == b"" and err.count(b"\n") == 1

    def test_bad_lines_tolerated(self):
        body = "\n".join(["1.5", "2.5", "0.7"] * 100 + ["oops"]).encode()
        code, _, err = _run("fit", "-", stdin=body)
        assert code == 0 and b"skipped_lines=1" in err

    def test_bad_lines_abort(self):
        body = "\n".join(["1.5", "2.5", "oops", "0.7"] * 10).encode()
        code, _, err = _run("fit", "-", stdin=body)
        assert code == 2 and b"failed to parse" in err

    def test_too_few_points(self):
        code, _, _ = _run("hist", "-", stdin=b"1\n2\n3\n")
        assert code == 2

    def test_negative_discriminant(self):
        body = "\n".join(str(math.exp(5 + 1e-4 * k)) for k in range(20)).encode()
        code, _, err = _run("fit", "--method", "moments", "-", stdin=body)
        assert code == 3 and b"NegativeDiscriminantError" in err

    def test_missing_file(self):
        code, _, err = _run("fit", "/nonexistent/file")
        assert code == 2

    def test_file_input(self, tmp_path):
        path = tmp_path / "prices.txt"
        path.write_text("100\n101\n99.5\n")
        rows = np.array(_ok("returns", str(path)).split(), float)
        np.testing.assert_allclose(rows, np.diff(np.log([100, 101, 99.5])), rtol=1e-15)

    def test_usage(self):
        assert _run()[0] == 1
        assert _run("bogus")[0] == 1
        assert _run("sample", "-a", "1")[0] == 1

    def test_help(self):
        code, out, _ = _run("--help")
        assert code == 0 and b"usage" in out


class TestDumps:
    def test_lossless_floats(self):
        vals = [0.1, 1 / 3, 2.0**-1074, 1.7976931348623157e308, -0.0]
        back = json.loads(dumps({"v": vals}))["v"]
        assert [float(v) for v in back] == vals

    def test_non_finite_become_null(self):
        assert json.loads(dumps({"x": math.inf, "y": np.float64("nan")})) == {"x": None, "y": None}


@pytest.mark.skipif(shutil.which("brf") is None, reason="console script not installed")
def test_shell_pipeline():
    cmd = "brf sample -a 0.99 -b 0.3 -n 200000 --seed 1 | brf hist | brf classify -"
    first = subprocess.run(cmd, shell=True, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, shell=True, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["variant"] == "TwoSidedBrf"
