"""Command-line front end.

    pqmittag eval  --alpha 1 --beta 1 --gamma 1 --c 2 --z 1
    pqmittag beta  --x 2 --y 2 --p 0.5 --q 0.5
    pqmittag wright --upper 1,1 --lower 1,1 --z 0.5
    pqmittag mellin --alpha 1 --beta 1 --gamma 1.2 --c 2.5 --s 1.5 --r 2 --z 0.5
    pqmittag fracderiv --integrand monomial --param a=2 --lambda -0.5 --x 1
    pqmittag table --alpha 0.8 --beta 1 --gamma 1.2 --c 2.5 --p 0.3 --q 0.6 \\
                   --z-from -1 --z-to 1 --steps 41
    pqmittag verify [--config FILE] [--only ID ...] [--report FILE.jsonl]

Exit status: 0 on success, 1 if a gating identity fails under ``verify``,
2 on usage errors, invalid parameters or an unreadable config.

The environment variable ``PQMITTAG_REL_TOL`` sets the default relative
tolerance (series and quadrature) when ``--rel-tol`` is not given.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import verifier
from .extbeta import beta_p, beta_pq
from .fracderiv import INTEGRANDS, ExtKernelParams, FracOrder, make_integrand, rl_ext_p, rl_ext_pq
from .mlcore import (MLParams, SeriesConfig, ml_extended_pq, ml_integral_halfline,
                     ml_integral_trig, ml_integral_unit)
from .numcore import KERNEL_QUAD, DomainError, EvalResult
from .transforms import MellinPoint, mellin_numeric
from .wright import WrightSpec, mellin_closed_form, wright_psi

ENV_REL_TOL = "PQMITTAG_REL_TOL"
TABLE_HEADER = ("z", "value", "abs_err_est", "terms")
RESULT_HEADER = ("point", "value", "abs_err_est", "effort", "status")


class UsageError(Exception):
    pass


def _fmt(x: float, digits: int) -> str:
    if math.isnan(x) or math.isinf(x):
        return repr(float(x))
    return format(float(x), f".{digits}g")


def _pair(text: str) -> Tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'value,slope', got {text!r}") from None
    return a, b


def _keyval(text: str) -> Tuple[str, float]:
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return key.strip(), float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number in {text!r}") from None


def _default_rel_tol() -> Optional[float]:
    raw = os.environ.get(ENV_REL_TOL)
    if raw is None or raw == "":
        return None
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"{ENV_REL_TOL}={raw!r} is not a number") from None
    if not val > 0:
        raise UsageError(f"{ENV_REL_TOL} must be positive")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("plain", "csv", "structured"), default=None,
                        help="output format (default: plain; csv for table)")
    common.add_argument("--precision", type=int, default=15,
                        help="significant digits for printed numbers (default 15; 17 round-trips)")
    common.add_argument("--rel-tol", type=float, default=None,
                        help=f"relative tolerance (default from ${ENV_REL_TOL} or 1e-12)")

    ml = argparse.ArgumentParser(add_help=False)
    ml.add_argument("--alpha", type=float, required=True)
    ml.add_argument("--beta", type=float, required=True)
    ml.add_argument("--gamma", type=float, required=True)
    ml.add_argument("--c", type=float, required=True)
    ml.add_argument("--p", type=float, default=0.0)
    ml.add_argument("--q", type=float, default=0.0)

    parser = argparse.ArgumentParser(prog="pqmittag",
                                     description="Extended (p, q) Mittag-Leffler toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common, ml], help="evaluate the extended function")
    ev.add_argument("--z", type=float, nargs="+", required=True)
    ev.add_argument("--method", choices=("series", "unit", "halfline", "trig"), default="series")

    be = sub.add_parser("beta", parents=[common], help="extended beta function")
    be.add_argument("--x", type=float, required=True)
    be.add_argument("--y", type=float, required=True)
    be.add_argument("--p", type=float, default=0.0)
    be.add_argument("--q", type=float, default=None, help="defaults to p (one-parameter form)")

    wr = sub.add_parser("wright", parents=[common], help="Wright generalized hypergeometric series")
    wr.add_argument("--upper", type=_pair, action="append", default=[], metavar="A,MU")
    wr.add_argument("--lower", type=_pair, action="append", default=[], metavar="B,LAMBDA")
    wr.add_argument("--z", type=float, nargs="+", required=True)

    me = sub.add_parser("mellin", parents=[common], help="Mellin transform in (p, q)")
    for name in ("alpha", "beta", "gamma", "c", "s", "r"):
        me.add_argument(f"--{name}", type=float, required=True)
    me.add_argument("--z", type=float, nargs="+", required=True)
    me.add_argument("--method", choices=("closed", "numeric", "double"), default="closed")
    me.add_argument("--lower-slope", choices=("alpha", "gamma"), default="alpha")

    fd = sub.add_parser("fracderiv", parents=[common], help="fractional integral / derivative")
    fd.add_argument("--integrand", choices=sorted(INTEGRANDS), required=True)
    fd.add_argument("--param", type=_keyval, action="append", default=[], metavar="NAME=VALUE")
    fd.add_argument("--lambda", dest="lam", type=float, required=True, help="order")
    fd.add_argument("--x", type=float, nargs="+", required=True)
    fd.add_argument("--p", type=float, default=0.0)
    fd.add_argument("--q", type=float, default=None, help="omit for the one-parameter kernel")

    ta = sub.add_parser("table", parents=[common, ml], help="sweep z and emit a CSV table")
    ta.add_argument("--z-from", type=float, required=True)
    ta.add_argument("--z-to", type=float, required=True)
    ta.add_argument("--steps", type=int, required=True)

    ve = sub.add_parser("verify", parents=[common], help="run the identity suite")
    ve.add_argument("--config", default=None, help="YAML config file")
    ve.add_argument("--only", action="append", choices=verifier.IDENTITIES, default=None)
    ve.add_argument("--report", default=None, help="write JSON Lines reports here")
    ve.add_argument("--extended", action="store_true", help="use the larger sweep grid")
    ve.add_argument("--quiet", action="store_true")
    return parser


def parse_config(path) -> verifier.SuiteConfig:
    """Load and validate a verification config (see :func:`verifier.load_config`)."""
    return verifier.load_config(path)


class _Printer:
    def __init__(self, fmt: str, digits: int, out):
        self.fmt, self.digits, self.out = fmt, digits, out
        self.writer = csv.writer(out, lineterminator="\n") if fmt == "csv" else None
        self.header_done = False

    def row(self, point, res: EvalResult, label="z", unit="terms"):
        d = self.digits
        if self.fmt == "plain":
            self.out.write(f"{_fmt(res.value, d)}  +/- {_fmt(res.abs_err_est, 3)}"
                           f"  ({res.status.value}, {res.effort} {unit})\n")
        elif self.fmt == "csv":
            if not self.header_done:
                self.writer.writerow((label,) + RESULT_HEADER[1:])
                self.header_done = True
            self.writer.writerow((_fmt(point, d), _fmt(res.value, d), _fmt(res.abs_err_est, d),
                                  res.effort, res.status.value))
        else:
            rec = {label: point, "value": res.value, "abs_err_est": res.abs_err_est,
                   "effort": res.effort, "status": res.status.value}
            self.out.write(json.dumps(rec) + "\n")


def _cmd_eval(args, tol, out):
    params = MLParams(args.alpha, args.beta, args.gamma, args.c, args.p, args.q)
    cfg = SeriesConfig(rel_tol=tol) if tol else SeriesConfig()
    qcfg = KERNEL_QUAD.with_(rel_tol=min(tol, KERNEL_QUAD.rel_tol)) if tol else KERNEL_QUAD
    route = {"series": lambda z: ml_extended_pq(params, z, cfg, qcfg),
             "unit": lambda z: ml_integral_unit(params, z, qcfg),
             "halfline": lambda z: ml_integral_halfline(params, z, qcfg),
             "trig": lambda z: ml_integral_trig(params, z, qcfg)}[args.method]
    pr = _Printer(args.output or "plain", args.precision, out)
    unit = "terms" if args.method == "series" else "evaluations"
    for z in args.z:
        pr.row(z, route(z), unit=unit)


def _cmd_beta(args, tol, out):
    qcfg = KERNEL_QUAD.with_(rel_tol=tol) if tol else KERNEL_QUAD
    if args.q is None:
        res = beta_p(args.x, args.y, args.p, qcfg)
    else:
        res = beta_pq(args.x, args.y, args.p, args.q, qcfg)
    _Printer(args.output or "plain", args.precision, out).row(args.x, res, label="x",
                                                              unit="evaluations")


def _cmd_wright(args, tol, out):
    spec = WrightSpec(args.upper, args.lower)
    cfg = SeriesConfig(rel_tol=tol) if tol else SeriesConfig()
    pr = _Printer(args.output or "plain", args.precision, out)
    for z in args.z:
        pr.row(z, wright_psi(spec, z, cfg))


def _cmd_mellin(args, tol, out):
    params = MLParams(args.alpha, args.beta, args.gamma, args.c)
    pt = MellinPoint(args.s, args.r)
    cfg = SeriesConfig(rel_tol=tol) if tol else SeriesConfig()
    pr = _Printer(args.output or "plain", args.precision, out)
    for z in args.z:
        if args.method == "closed":
            res = mellin_closed_form(params, pt.s, pt.r, z, cfg, lower_slope=args.lower_slope)
        elif args.method == "numeric":
            res = mellin_numeric(params, pt, z, KERNEL_QUAD.with_(rel_tol=tol) if tol else None)
        else:
            res = mellin_numeric(params, pt, z, KERNEL_QUAD.with_(rel_tol=tol) if tol else None,
                                 mode="double")
        pr.row(z, res, unit="terms" if args.method == "closed" else "evaluations")


def _cmd_fracderiv(args, tol, out):
    f = make_integrand(args.integrand, **dict(args.param))
    order = FracOrder.of(args.lam)
    qcfg = KERNEL_QUAD.with_(rel_tol=tol) if tol else KERNEL_QUAD
    pr = _Printer(args.output or "plain", args.precision, out)
    for x in args.x:
        if args.q is None:
            res = rl_ext_p(f, order, x, args.p, qcfg)
        else:
            res = rl_ext_pq(f, order, x, ExtKernelParams(args.p, args.q), qcfg)
        pr.row(x, res, label="x", unit="evaluations")


def _cmd_table(args, tol, out):
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    params = MLParams(args.alpha, args.beta, args.gamma, args.c, args.p, args.q)
    cfg = SeriesConfig(rel_tol=tol) if tol else SeriesConfig()
    zs = np.linspace(args.z_from, args.z_to, args.steps) if args.steps > 1 else [args.z_from]
    fmt, d = args.output or "csv", args.precision
    writer = csv.writer(out, lineterminator="\n")
    if fmt == "csv":
        writer.writerow(TABLE_HEADER)
    for z in zs:
        res = ml_extended_pq(params, float(z), cfg)
        if fmt == "csv":
            writer.writerow((_fmt(z, d), _fmt(res.value, d), _fmt(res.abs_err_est, d), res.effort))
        elif fmt == "structured":
            out.write(json.dumps({"z": float(z), "value": res.value,
                                  "abs_err_est": res.abs_err_est, "terms": res.effort,
                                  "status": res.status.value}) + "\n")
        else:
            out.write(f"{_fmt(z, d)}\t{_fmt(res.value, d)}\t{_fmt(res.abs_err_est, 3)}"
                      f"\t{res.effort}\n")


def _cmd_verify(args, tol, out):
    conf = parse_config(args.config)
    if args.extended:
        conf = verifier.SuiteConfig(**{**conf.__dict__, "grid": verifier.EXTENDED_GRID})
    if tol:
        conf = verifier.SuiteConfig(**{**conf.__dict__, "rel_tol": tol})
    log = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    reports = verifier.run_full_suite(conf=conf, only=args.only, log=log)
    if args.report:
        verifier.write_reports(reports, args.report)
    fmt = args.output or "plain"
    if fmt == "structured":
        for r in reports:
            out.write(verifier.report_json(r) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("identity_id", "grid_size", "max_rel_err", "median_rel_err", "tolerance",
                    "pass"))
        for r in reports:
            w.writerow((r.identity_id, r.grid_size, _fmt(r.max_rel_err, args.precision),
                        _fmt(r.median_rel_err, args.precision), _fmt(r.tolerance, 3),
                        str(r.passed).lower()))
    else:
        out.write(verifier.summary_table(reports) + "\n")
        for r in reports:
            if r.notes:
                out.write(f"  {r.identity_id}: {r.notes}\n")
    return 0 if all(r.passed for r in reports if r.gating) else 1


COMMANDS = {
    "eval": _cmd_eval,
    "beta": _cmd_beta,
    "wright": _cmd_wright,
    "mellin": _cmd_mellin,
    "fracderiv": _cmd_fracderiv,
    "table": _cmd_table,
    "verify": _cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the usage message
        return int(exc.code or 0)
    try:
        tol = args.rel_tol if args.rel_tol is not None else _default_rel_tol()
        if tol is not None and not tol > 0:
            raise UsageError("--rel-tol must be positive")
        if args.precision < 1 or args.precision > 17:
            raise UsageError("--precision must be between 1 and 17")
        return COMMANDS[args.command](args, tol, out) or 0
    except FileNotFoundError as exc:
        print(f"pqmittag: error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, DomainError, verifier.ConfigError, ValueError) as exc:
        print(f"pqmittag {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
