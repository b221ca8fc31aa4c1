"""Command-line interface.

Subcommands: eval, table, asym, omega, zeros, verify.  Complex arguments are
written ``A+Bi`` without spaces; a value starting with ``-`` that is not a
plain number must be attached with ``=`` (``--z=-0.5+1i``).

Exit codes: 0 success, 1 verification failure, 2 domain error, 3 accuracy
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional, Sequence

from . import __version__
from .asymptotics import g1_corollary1, g1_lemma1, omega
from .branchlog import LogScaledComplex, rel_diff
from .errors import AccuracyError, DataIntegrityError, DomainError, EvaluationError, RangeError
from .g_eval import EvalRequest, evaluate, g1_integral
from .gamma_core import deriv_oracle
from .zeros import KINDS, zero_table

__all__ = [
    "SCHEMA_VERSION",
    "CSV_HEADERS",
    "OutputRecord",
    "parse_complex",
    "parse_range",
    "eval_record",
    "cmd_eval",
    "cmd_table",
    "cmd_asym",
    "cmd_omega",
    "cmd_zeros",
    "cmd_verify",
    "build_parser",
    "main",
]

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_ACCURACY = 0, 1, 2, 3

CSV_HEADERS = {
    "table": "schema_version,m,z_re,z_im,value_re,value_im,oracle_re,oracle_im,rel_dev",
    "table_scaled": "schema_version,m,z_re,z_im,value_logmod,value_phase,oracle_logmod,oracle_phase,rel_dev",
    "asym_lemma1": "schema_version,lambda,z_re,z_im,logmod_g1,logmod_asym,power_factor_logmod,ratio_minus_1",
    "asym_corollary1": "schema_version,lambda,z_re,z_im,logmod_g1,logmod_asym,power_factor_logmod,log_ratio",
    "zeros": "schema_version,kind,k,location,bracket_lo,bracket_hi,residual,increasing,limit_distance",
    "eval": "schema_version,lambda_re,lambda_im,z_re,z_im,method,tol,value_a,value_b,value_kind,err_estimate,n_evals,continued",
}

_METHOD_ALIASES = {"series": "series_plus_tail"}
_COMPLEX_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_complex(text: str) -> complex:
    """Parse ``A``, ``Bi``, ``A+Bi`` or ``A-Bi`` (no spaces)."""
    s = text.strip()
    if not s or " " in s:
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r}")
    if not s.endswith("i"):
        if not _COMPLEX_RE.match(s):
            raise argparse.ArgumentTypeError(f"invalid complex number {text!r}")
        return complex(float(s), 0.0)
    body = s[:-1]
    # split at the last sign that is not part of an exponent
    cut = max((i for i, c in enumerate(body) if c in "+-" and i > 0 and body[i - 1] not in "eE"), default=0)
    re_part, im_part = (body[:cut], body[cut:]) if cut else ("0", body)
    if im_part in ("", "+", "-"):
        im_part += "1"
    if not (_COMPLEX_RE.match(re_part) and _COMPLEX_RE.match(im_part)):
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r}")
    return complex(float(re_part), float(im_part))


def parse_range(text: str) -> range:
    """``a:b`` (inclusive) or a single integer."""
    try:
        if ":" in text:
            a, b = (int(p) for p in text.split(":"))
        else:
            a = b = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}; expected a:b") from None
    if a < 0 or b < a:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return range(a, b + 1)


def _cx(v: complex) -> dict:
    return {"re": v.real, "im": v.imag}


def _value_obj(v: LogScaledComplex, scaled: bool) -> dict:
    if scaled:
        return {"logmod": v.logmod, "phase": v.phase}
    return _cx(v.to_complex())


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    value: dict
    err_estimate: Optional[float] = None
    n_evals: Optional[int] = None
    wall_time_ms: Optional[float] = None
    extra: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        kinds = {"re", "im"} <= self.value.keys(), {"logmod", "phase"} <= self.value.keys()
        if sum(kinds) != 1:
            raise ValueError("a record carries exactly one of the cartesian and log-scaled values")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, allow_nan=True)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        return cls(**json.loads(text))


def eval_record(lam: complex, z: complex, method: str, r: float, tol: float, scaled: bool = False) -> OutputRecord:
    method = _METHOD_ALIASES.get(method, method)
    t0 = time.perf_counter()
    res = evaluate(EvalRequest(lam, z, method, r, tol))
    ms = (time.perf_counter() - t0) * 1e3
    return OutputRecord(
        command="eval",
        inputs={"lambda": _cx(complex(lam)), "z": _cx(complex(z)), "method": method, "tol": tol, "r": r},
        value=_value_obj(res.value, scaled),
        err_estimate=res.rel_err,
        n_evals=res.n_evals,
        wall_time_ms=ms,
        extra={"continued": res.continued, "resolved_method": res.method},
    )


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return "" if x is None else str(x)


def _csv_text(header: str, rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header.split(","))
    for row in rows:
        writer.writerow([SCHEMA_VERSION, *(_fmt(v) for v in row)])
    return buf.getvalue()


def _pmap(fn: Callable, items: Sequence, threads: int) -> List:
    """Ordered map, optionally across worker threads."""
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --- commands -------------------------------------------------------------


def cmd_eval(args, out=sys.stdout) -> int:
    rec = eval_record(args.lam, args.z, args.method, args.r, args.tol, args.scaled)
    if args.csv:
        v = rec.value
        a, b, kind = (v["logmod"], v["phase"], "logscaled") if args.scaled else (v["re"], v["im"], "cartesian")
        row = [args.lam.real, args.lam.imag, args.z.real, args.z.imag, rec.inputs["method"], args.tol,
               a, b, kind, rec.err_estimate, rec.n_evals, rec.extra["continued"]]
        out.write(_csv_text(CSV_HEADERS["eval"], [row]))
    else:
        out.write(rec.to_json() + "\n")
    return EXIT_OK


def table_rows(ms: Sequence[int], z: complex, scaled: bool, tol: float, threads: int = 1) -> List[list]:
    def row(m):
        v = evaluate(EvalRequest(m, z, "auto", 0.5, tol)).value
        o = deriv_oracle(m, z)
        a, b = (v.logmod, v.phase) if scaled else (v.to_complex().real, v.to_complex().imag)
        c, d = (o.logmod, o.phase) if scaled else (o.to_complex().real, o.to_complex().imag)
        return [m, z.real, z.imag, a, b, c, d, rel_diff(v, o)]

    return _pmap(row, list(ms), threads)


def cmd_table(args, out=sys.stdout) -> int:
    rows = table_rows(args.m, args.z, args.scaled, args.tol, args.threads)
    out.write(_csv_text(CSV_HEADERS["table_scaled" if args.scaled else "table"], rows))
    return EXIT_OK


def asym_rows(lams: Sequence[float], z: complex, form: str, threads: int = 1) -> List[list]:
    def row(lam):
        q = g1_integral(lam, z)
        if form == "lemma1":
            est = g1_lemma1(lam, z).leading
            power = (z * math.log(omega(lam).omega)).real
            dev = abs((q / est).to_complex() - 1)
        else:
            est = g1_corollary1(lam, z).leading
            power = ((z - 0.5) * math.log(lam / math.log(lam))).real
            dev = est.logmod - q.logmod
        return [lam, z.real, z.imag, q.logmod, est.logmod, power, dev]

    return _pmap(row, [float(x) for x in lams], threads)


def cmd_asym(args, out=sys.stdout) -> int:
    rows = asym_rows(args.lambda_grid, args.z, args.form, args.threads)
    out.write(_csv_text(CSV_HEADERS[f"asym_{args.form}"], rows))
    return EXIT_OK


def cmd_omega(args, out=sys.stdout) -> int:
    t0 = time.perf_counter()
    sol = omega(args.lam)
    ms = (time.perf_counter() - t0) * 1e3
    rec = OutputRecord(
        command="omega",
        inputs={"lambda": args.lam},
        value={"re": sol.omega, "im": 0.0},
        err_estimate=sol.residual,
        n_evals=sol.iterations,
        wall_time_ms=ms,
    )
    out.write(rec.to_json() + "\n")
    return EXIT_OK


def zero_rows(kind: str, ks: range) -> List[list]:
    rows = zero_table(kind, ks.stop - 1)[ks.start:]
    return [
        [kind, r.record.k, r.record.location, r.record.bracket[0], r.record.bracket[1], r.record.residual,
         r.increasing, r.limit_distance]
        for r in rows
    ]


def cmd_zeros(args, out=sys.stdout) -> int:
    out.write(_csv_text(CSV_HEADERS["zeros"], zero_rows(args.kind, args.k)))
    return EXIT_OK


def cmd_verify(args, out=sys.stdout) -> int:
    from .verify import run_suite

    def show(res):
        out.write(f"{'PASS' if res.passed else 'FAIL'} {res.ident}: {res.description} [{res.detail}]\n")
        out.flush()

    results = run_suite(args.suite, show)
    failed = [r.ident for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    if failed:
        out.write("failing: " + " ".join(failed) + "\n")
        return EXIT_VERIFY
    return EXIT_OK


# --- entry point ----------------------------------------------------------


def _positive_tol(text: str) -> float:
    v = float(text)
    if not 0 < v <= 1e-4:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1e-4], got {text}")
    return v


def _grid(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gammainterp", description="Interpolant G(lambda, z) of the Gamma derivatives.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate G(lambda, z)")
    e.add_argument("--lambda", dest="lam", type=parse_complex, required=True)
    e.add_argument("--z", type=parse_complex, required=True)
    e.add_argument("--method", choices=("contour", "split", "series", "series_plus_tail", "auto"), default="auto")
    e.add_argument("--r", type=float, default=0.5)
    e.add_argument("--tol", type=_positive_tol, default=1e-10)
    e.add_argument("--scaled", action="store_true", help="emit (logmod, phase) instead of (re, im)")
    fmt = e.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON object (default)")
    fmt.add_argument("--csv", action="store_true")
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("table", help="G(m, z) against the oracle for a range of m (CSV)")
    t.add_argument("--m", type=parse_range, required=True, help="a:b inclusive")
    t.add_argument("--z", type=parse_complex, required=True)
    t.add_argument("--tol", type=_positive_tol, default=1e-10)
    t.add_argument("--scaled", action="store_true")
    t.add_argument("--threads", type=int, default=1)
    t.set_defaults(func=cmd_table)

    a = sub.add_parser("asym", help="G1 quadrature against its large-lambda forms (CSV)")
    a.add_argument("--lambda-grid", type=_grid, default=[50.0, 100.0, 200.0, 400.0, 800.0])
    a.add_argument("--z", type=parse_complex, default=1 + 0j)
    a.add_argument("--form", choices=("lemma1", "corollary1"), default="lemma1")
    a.add_argument("--threads", type=int, default=1)
    a.set_defaults(func=cmd_asym)

    o = sub.add_parser("omega", help="solve t ln t = lambda")
    o.add_argument("--lambda", dest="lam", type=float, required=True)
    o.set_defaults(func=cmd_omega)

    zs = sub.add_parser("zeros", help="zeros of the odd derivatives (CSV)")
    zs.add_argument("--kind", choices=KINDS, required=True)
    zs.add_argument("--k", type=parse_range, default=range(0, 1), help="a:b inclusive, b <= 12")
    zs.set_defaults(func=cmd_zeros)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--suite", choices=("fast", "all"), default="fast")
    v.set_defaults(func=cmd_verify)
    return p


def _error(kind: str, exc: Exception, out) -> None:
    out.write(json.dumps({"error": {"type": kind, "class": type(exc).__name__, "message": str(exc)}}) + "\n")


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (DomainError, RangeError) as exc:
        _error("domain", exc, out)
        return EXIT_DOMAIN
    except (AccuracyError, EvaluationError, DataIntegrityError) as exc:
        _error("accuracy", exc, out)
        return EXIT_ACCURACY


if __name__ == "__main__":
    sys.exit(main())
