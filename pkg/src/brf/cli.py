"""Command-line front end.

Subcommands read newline-delimited numbers (a path, or ``-`` for stdin) and
write either one number per line, tab-separated columns under a ``#`` header,
or a JSON document.  Floats are written with 17 significant digits.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
Failures print one line to stderr::

    error<TAB>code=<n><TAB>kind=<ExceptionName><TAB>message=<text>
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from ._types import (
    BrfError,
    BrfParams,
    ConvergenceError,
    DataError,
    DegenerateDistributionError,
    DomainError,
    ModelViolationError,
    NumericConfig,
)
from .core import cdf, density_x, density_z, rank_size, tail_density_z
from .estimation import (
    LogHistogram,
    classify_shape,
    fit_moments,
    fit_rank,
    fit_tails,
    log_histogram,
    log_returns,
)
from .numeric_pdf import numeric_cdf, pdf_grid
from .sampling import sample_x, sample_z
from .stats import raw_moment_x, taylor_coeffs, x_median, x_mode, z_stats

__all__ = ["run", "main", "FitReport", "dumps", "REPORT_SCHEMA"]

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
MAX_BAD_FRACTION = 0.01
REPORT_SCHEMA = "brf.fit_report/1"
HIST_HEADER = ("z", "count", "density")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v) -> str:
    return "%.17g" % v


# ---------------------------------------------------------------- JSON output


def _dump(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        # JSON has no inf/nan; they become null
        return _fmt(float(obj)) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k)) + ": " + _dump(v, indent, level + 1) for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [_dump(v, indent, level + 1) for v in obj]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float at 17 significant digits (lossless)."""
    return _dump(obj, indent, 0) + "\n"


@dataclass
class FitReport:
    """Serialized result of ``fit``.

    Schema ``brf.fit_report/1``: ``method``, ``params`` {A, a, b},
    ``diagnostics`` (estimator specific), ``input`` {n, min, max, z_mean,
    z_var, binned, skipped_lines} and ``log_stats`` (null when the fitted
    law is degenerate).
    """

    method: str
    params: dict
    diagnostics: dict
    input: dict
    log_stats: dict | None = None
    schema: str = field(default=REPORT_SCHEMA)

    def to_json(self) -> str:
        return dumps(
            {
                "schema": self.schema,
                "method": self.method,
                "params": self.params,
                "diagnostics": self.diagnostics,
                "input": self.input,
                "log_stats": self.log_stats,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "FitReport":
        d = json.loads(text)
        if d.get("schema") != REPORT_SCHEMA:
            raise DataError(f"unknown report schema {d.get('schema')!r}")
        return cls(
            method=d["method"],
            params=d["params"],
            diagnostics=d["diagnostics"],
            input=d["input"],
            log_stats=d["log_stats"],
            schema=d["schema"],
        )


def _log_stats_dict(params: BrfParams) -> dict | None:
    if params.degenerate:
        return None
    s = z_stats(params)
    return {
        "mean": s.mean,
        "variance": s.variance,
        "median": s.median,
        "mode": s.mode,
        "partition_left": s.partition_left,
        "partition_right": s.partition_right,
    }


# ---------------------------------------------------------------- input


@dataclass
class _Input:
    values: np.ndarray | None = None  # raw numbers
    hist: LogHistogram | None = None  # set when the input was `hist` output
    skipped: int = 0


def _read_text(path: str, stdin) -> str:
    if path == "-":
        data = stdin.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _parse_hist(lines) -> LogHistogram:
    rows = []
    for ln in lines:
        parts = ln.split("\t")
        if len(parts) < 3:
            raise DataError(f"histogram row has {len(parts)} columns, need 3")
        try:
            rows.append((float(parts[0]), int(parts[1])))
        except ValueError:
            raise DataError(f"unparsable histogram row: {ln!r}") from None
    if len(rows) < 2:
        raise DataError("histogram needs at least 2 bins")
    centers = np.array([r[0] for r in rows])
    counts = np.array([r[1] for r in rows], dtype=np.int64)
    if np.any(np.diff(centers) <= 0) or np.any(counts < 0):
        raise DataError("histogram centers must increase and counts be >= 0")
    mids = 0.5 * (centers[1:] + centers[:-1])
    edges = np.concatenate(
        [[centers[0] - (mids[0] - centers[0])], mids, [centers[-1] + (centers[-1] - mids[-1])]]
    )
    n = int(counts.sum())
    if n == 0:
        raise DataError("histogram is empty")
    return LogHistogram(edges=edges, counts=counts, density=counts / (n * np.diff(edges)), n_total=n)


def _read_input(path: str, stdin) -> _Input:
    lines = [ln.strip() for ln in _read_text(path, stdin).splitlines()]
    header = next((ln for ln in lines if ln.startswith("#")), None)
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    if header is not None and tuple(header.lstrip("#").split())[:3] == HIST_HEADER:
        return _Input(hist=_parse_hist(body))
    vals = []
    bad = 0
    for ln in body:
        try:
            vals.append(float(ln))
        except ValueError:
            bad += 1
    if body and bad > MAX_BAD_FRACTION * len(body):
        raise DataError(f"{bad} of {len(body)} lines failed to parse (limit 1%)")
    if not vals:
        raise DataError("no numeric input")
    return _Input(values=np.array(vals), skipped=bad)


def _positive(values: np.ndarray) -> np.ndarray:
    if np.any(~(values > 0)):
        raise DataError("values must be positive (pass --log-input for log data)")
    return values


def _z_of(inp: _Input, log_input: bool) -> np.ndarray:
    if not np.all(np.isfinite(inp.values)):
        raise DataError("values must be finite")
    return inp.values if log_input else np.log(_positive(inp.values))


def _hist_of(inp: _Input, bins: int, log_input: bool) -> LogHistogram:
    if inp.hist is not None:
        return inp.hist
    return log_histogram(_z_of(inp, log_input), bins, pre_logged=True)


# ---------------------------------------------------------------- commands


def _params(ns) -> BrfParams:
    return BrfParams(ns.A, ns.a, ns.b)


def _grid(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"--grid must be zmin:zmax:npts, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo or n < 2:
        raise UsageError("--grid needs finite zmin < zmax and npts >= 2")
    return np.linspace(lo, hi, n)


def _config(ns) -> NumericConfig:
    return NumericConfig(t=ns.tol, h=ns.step)


def _cmd_sample(ns, stdin, out):
    params = _params(ns)
    draw = sample_z if ns.log else sample_x
    vals = draw(params, ns.n, ns.seed).values
    out.write("".join(_fmt(v) + "\n" for v in vals.tolist()))


def _cmd_quantile(ns, stdin, out):
    if not 0 < ns.u <= 1:
        raise DomainError(f"u must lie in (0, 1], got {ns.u}")
    out.write(_fmt(rank_size(_params(ns), ns.u)) + "\n")


def _cmd_curve(ns, stdin, out):
    params = _params(ns)
    params.require_nondegenerate()
    cfg = _config(ns)
    z = _grid(ns.grid)
    x = np.exp(z)
    in_x = ns.space == "x"
    cols = {"x" if in_x else "z": x if in_x else z}
    if ns.command == "pdf":
        if ns.numeric:
            g = pdf_grid(params, x if in_x else z, cfg, space=ns.space)
            if not np.all(g.converged):
                raise ConvergenceError("bisection did not converge at some grid points")
            vals = g.densities
        else:
            vals = density_x(params, x, cfg) if in_x else density_z(params, z, cfg)
        cols["pdf"] = vals
        if ns.tails:
            for side, ok in (("left", params.b > 0), ("right", params.a > 0)):
                t = tail_density_z(params, z, side) if ok else np.full(z.shape, np.nan)
                cols[f"{side}_tail"] = t / x if in_x else t
    else:
        cols["cdf"] = numeric_cdf(params, x, cfg) if ns.numeric else cdf(params, x, cfg)
        if ns.tails:
            zp = z - params.log_A
            with np.errstate(over="ignore"):
                # asymptotes of F on the left and of 1 - F on the right
                left = np.exp(zp / params.b) if params.b > 0 else np.full(z.shape, np.nan)
                right = np.exp(-zp / params.a) if params.a > 0 else np.full(z.shape, np.nan)
            cols["left_tail_cdf"] = left
            cols["right_tail_survival"] = right
    out.write("#" + "\t".join(cols) + "\n")
    rows = np.column_stack(list(cols.values())).tolist()
    out.write("".join("\t".join(_fmt(v) for v in r) + "\n" for r in rows))


def _cmd_stats(ns, stdin, out):
    params = _params(ns)
    params.require_nondegenerate()
    xm = x_mode(params)
    doc = {
        "params": {"A": params.A, "a": params.a, "b": params.b},
        "log_stats": _log_stats_dict(params),
        "x_median": x_median(params),
        "x_mode": {"u0": xm.u0, "x0": xm.x0, "at_boundary": xm.at_boundary},
        "raw_moments": [
            {"n": n, "value": m, "finite": math.isfinite(m)}
            for n in range(1, ns.moments + 1)
            for m in [raw_moment_x(params, n)]
        ],
    }
    if params.a > 0 and params.b > 0:
        tc = taylor_coeffs(params)
        doc["taylor"] = {"c1": tc.c1, "c2": tc.c2, "c3": tc.c3, "z0": tc.z0}
    out.write(dumps(doc))


def _summary(inp: _Input, log_input: bool) -> dict:
    if inp.hist is not None:
        h = inp.hist
        w = h.counts / h.n_inside
        zbar = float(np.sum(w * h.centers))
        zvar = float(np.sum(w * (h.centers - zbar) ** 2)) * h.n_inside / max(h.n_inside - 1, 1)
        return {
            "n": h.n_inside,
            "min": math.exp(h.edges[0]),
            "max": math.exp(h.edges[-1]),
            "z_mean": zbar,
            "z_var": zvar,
            "binned": True,
            "skipped_lines": 0,
        }
    z = _z_of(inp, log_input)
    x = np.exp(z) if log_input else inp.values
    return {
        "n": int(z.size),
        "min": float(x.min()),
        "max": float(x.max()),
        "z_mean": float(z.mean()),
        "z_var": float(z.var(ddof=1)) if z.size > 1 else 0.0,
        "binned": False,
        "skipped_lines": inp.skipped,
    }


def _cmd_fit(ns, stdin, out):
    inp = _read_input(ns.input, stdin)
    if ns.method == "tails":
        res = fit_tails(_hist_of(inp, ns.bins, ns.log_input), ns.qlow, ns.qhigh)
    else:
        if inp.hist is not None:
            raise DataError(f"method {ns.method!r} needs raw values, not a histogram")
        z = _z_of(inp, ns.log_input)
        if ns.method == "rank":
            res = fit_rank(np.exp(z))
        else:
            res = fit_moments(z, jackknife=ns.method == "moments-jackknife", scale=ns.scale)
    _report(res, inp, ns, out)
    if inp.skipped:
        sys.stderr.write(f"warning\tskipped_lines={inp.skipped}\n")


def _report(res, inp, ns, out):
    p = res.params
    rep = FitReport(
        method=res.method,
        params={"A": p.A, "a": p.a, "b": p.b},
        diagnostics=res.diagnostics,
        input=_summary(inp, ns.log_input),
        log_stats=_log_stats_dict(p),
    )
    out.write(rep.to_json())


def _cmd_hist(ns, stdin, out):
    inp = _read_input(ns.input, stdin)
    if inp.hist is not None:
        raise DataError("input is already a histogram")
    h = log_histogram(_z_of(inp, ns.log_input), ns.bins, pre_logged=True)
    out.write("#" + "\t".join(HIST_HEADER) + "\n")
    out.write(
        "".join(
            f"{_fmt(c)}\t{int(k)}\t{_fmt(d)}\n"
            for c, k, d in zip(h.centers.tolist(), h.counts.tolist(), h.density.tolist())
        )
    )


def _cmd_classify(ns, stdin, out):
    inp = _read_input(ns.input, stdin)
    sc = classify_shape(_hist_of(inp, ns.bins, ns.log_input))
    out.write(dumps({"variant": sc.variant.value, "evidence": sc.evidence}))


def _cmd_returns(ns, stdin, out):
    inp = _read_input(ns.input, stdin)
    if inp.hist is not None:
        raise DataError("returns needs a price series")
    r = log_returns(inp.values)
    out.write("".join(_fmt(v) + "\n" for v in r.tolist()))


# ---------------------------------------------------------------- parser


def _build_parser() -> _Parser:
    p = _Parser(prog="brf", description="Beta Rank Function toolkit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def params(sp):
        sp.add_argument("-A", type=float, default=1.0, help="scale (default 1)")
        sp.add_argument("-a", type=float, required=True, help="right-tail exponent")
        sp.add_argument("-b", type=float, required=True, help="left-tail exponent")

    def source(sp, log_flag=True):
        sp.add_argument("input", nargs="?", default="-", help="file path, '-' for stdin")
        if log_flag:
            sp.add_argument("--log-input", action="store_true", help="values are already log x")

    sp = sub.add_parser("sample", help="draw variates")
    params(sp)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--log", action="store_true", help="emit z = log x")
    sp.set_defaults(func=_cmd_sample)

    for name in ("pdf", "cdf"):
        sp = sub.add_parser(name, help=f"{name} on a grid")
        params(sp)
        sp.add_argument("--grid", required=True, help="zmin:zmax:npts in z = log x")
        sp.add_argument("--space", choices=("x", "z"), default="z")
        sp.add_argument("--tol", type=float, default=1e-12, help="bisection tolerance t")
        sp.add_argument("--step", type=float, default=None, help="stencil step h")
        sp.add_argument("--numeric", action="store_true", help="force bisection (+ stencil for pdf)")
        sp.add_argument("--tails", action="store_true", help="add exponential tail columns")
        sp.set_defaults(func=_cmd_curve)

    sp = sub.add_parser("quantile", help="rank-size value x(u)")
    params(sp)
    sp.add_argument("-u", type=float, required=True)
    sp.set_defaults(func=_cmd_quantile)

    sp = sub.add_parser("stats", help="analytic summary statistics")
    params(sp)
    sp.add_argument("--moments", type=int, default=4, help="raw moments of X to list")
    sp.set_defaults(func=_cmd_stats)

    sp = sub.add_parser("fit", help="estimate parameters")
    sp.add_argument(
        "--method", choices=("moments", "moments-jackknife", "tails", "rank"), default="moments"
    )
    sp.add_argument("--bins", type=int, default=100)
    sp.add_argument("--qlow", type=float, default=0.1)
    sp.add_argument("--qhigh", type=float, default=0.9)
    sp.add_argument("--scale", type=float, default=None, help="known A for the moment fit")
    source(sp)
    sp.set_defaults(func=_cmd_fit)

    sp = sub.add_parser("hist", help="histogram of log x")
    sp.add_argument("--bins", type=int, default=100)
    source(sp)
    sp.set_defaults(func=_cmd_hist)

    sp = sub.add_parser("classify", help="shape of the log histogram")
    sp.add_argument("--bins", type=int, default=100)
    source(sp)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("returns", help="log-returns of a price series")
    source(sp, log_flag=False)
    sp.set_defaults(func=_cmd_returns)
    return p


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (UsageError, DegenerateDistributionError)):
        return EXIT_USAGE
    if isinstance(exc, (ConvergenceError, ModelViolationError, FloatingPointError)):
        return EXIT_NUMERIC
    if isinstance(exc, DomainError):
        return EXIT_USAGE
    return EXIT_DATA


def _attach_grid(argv: list) -> list:
    # "--grid -1:1:9" would read as a flag; rewrite it as "--grid=-1:1:9"
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--grid":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--grid={nxt}")
        else:
            out.append(tok)
    return out


def run(argv, stdin=None) -> tuple[int, bytes, bytes]:
    """Execute one command; returns ``(exit_code, stdout, stderr)``."""
    stdin = io.BytesIO(b"") if stdin is None else stdin
    out, err = io.StringIO(), io.StringIO()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            ns = _build_parser().parse_args(_attach_grid(list(argv)))
            ns.func(ns, stdin, out)
        code = EXIT_OK
    except SystemExit as exc:  # --help
        code = int(exc.code or 0)
    except (UsageError, BrfError, ValueError, FloatingPointError) as exc:
        code = _exit_code(exc)
        msg = " ".join(str(exc).split())
        out = io.StringIO()
        err.write(f"error\tcode={code}\tkind={type(exc).__name__}\tmessage={msg}\n")
    return code, out.getvalue().encode("utf-8"), err.getvalue().encode("utf-8")


def main(argv=None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv, sys.stdin.buffer)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    sys.stderr.buffer.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
