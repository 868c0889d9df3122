"""Command-line entry point.

Subcommands: describe, coeffs, eval, gamma-check, osc, transform,
twist-scan, summatory, certify.  Outputs are CSV (default) or JSON; every
file starts with '# key=value' lines echoing the full parameter set, so a
run can be reproduced from its own output.  Files are written atomically
(temp file + rename) and contain no timestamps: identical invocations give
byte-identical bytes.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 failed
certificate under --strict.  The TWISTLAB_BUDGET environment variable
overrides the default 1e9 operation budget.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import TwistlabError
from .evaluate import smoothed_value
from .gammafn import gamma_ratio_compare
from .model import LSeriesInstance, SmoothingParams
from .oscillatory import (PhaseFamily, I_n_quadrature, I_n_stationary_phase,
                          in_stationary_range)
from .presets import PRESET_NAMES, get_preset, load_instance
from .summatory import (TWIST_RHO, abs_partial_sum, growth_exponent,
                        omega_certificate, run_twist_scan)
from .transforms import constant_conventions, kappa, run_transform


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1, not argparse's default 2
        raise UsageError(message)


# ---------------------------------------------------------------------------
# grids and formatting
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> List[float]:
    """Grid syntaxes: '2^a:2^b' dyadic, 'a:b:geomK' geometric with ratio K,
    'a:b:n' linear with n points, or a single number."""
    text = text.strip()
    try:
        if text.startswith("2^"):
            lo_s, hi_s = text.split(":")
            lo, hi = int(lo_s[2:]), int(hi_s[2:] if hi_s.startswith("2^") else hi_s)
            return [float(2 ** j) for j in range(lo, hi + 1)]
        parts = text.split(":")
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3 and parts[2].startswith("geom"):
            a, b, ratio = float(parts[0]), float(parts[1]), float(parts[2][4:])
            if not (ratio > 1.0 and a > 0 and b >= a):
                raise ValueError
            out, v = [], a
            while v <= b * (1.0 + 1e-9):
                out.append(v)
                v *= ratio
            return out
        if len(parts) == 3:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return [float(v) for v in np.linspace(a, b, n)]
    except (ValueError, IndexError):
        pass
    raise UsageError(f"cannot parse grid {text!r}")


def parse_int_range(text: str) -> List[int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            return list(range(int(parts[0]), int(parts[1]) + 1))
        if len(parts) == 3:
            return list(range(int(parts[0]), int(parts[1]) + 1, int(parts[2])))
    except ValueError:
        pass
    raise UsageError(f"cannot parse integer range {text!r}")


def _fmt(v) -> str:
    return repr(float(v))


def _emit(path: Optional[str], fmt: str, params: Dict[str, object],
          columns: Sequence[str], rows: Sequence[Sequence[object]],
          trailer: Optional[Dict[str, object]] = None) -> None:
    if fmt == "json":
        payload = {"meta": {**params, **(trailer or {})},
                   "columns": list(columns),
                   "rows": [dict(zip(columns, r)) for r in rows]}
        text = json.dumps(payload, sort_keys=True, indent=1,
                          default=lambda o: repr(o)) + "\n"
    else:
        lines = [f"# twistlab {params.pop('_cmd', 'run')}"]
        for k in sorted(params):
            lines.append(f"# {k}={params[k]}")
        lines.append(",".join(columns))
        for r in rows:
            lines.append(",".join(str(v) for v in r))
        if trailer:
            for k in sorted(trailer):
                lines.append(f"# {k}={trailer[k]}")
        text = "\n".join(lines) + "\n"
    _write_text(path, text)


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _load(args) -> LSeriesInstance:
    if getattr(args, "config", None):
        try:
            return load_instance(args.config)
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"bad config {args.config!r}: {exc}")
    if getattr(args, "preset", None):
        try:
            return get_preset(args.preset)
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
    raise UsageError("one of --preset or --config is required")


def _smoothing(args, rho_default: Optional[float] = None) -> SmoothingParams:
    kw = {}
    if getattr(args, "p", None) is not None:
        kw["p"] = args.p
    rho = getattr(args, "rho", None)
    if rho is not None:
        kw["rho"] = rho
    elif rho_default is not None:
        kw["rho"] = rho_default
    if getattr(args, "X", None) is not None:
        kw["X"] = args.X
    if getattr(args, "epsilon", None) is not None:
        kw["epsilon"] = args.epsilon
    return SmoothingParams(**kw)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_describe(args) -> int:
    L = _load(args)
    inv = L.invariants()
    rows = [
        ("name", L.name),
        ("d", _fmt(inv.d)),
        ("A", _fmt(inv.A)),
        ("B", _fmt(inv.B)),
        ("C", _fmt(inv.C)),
        ("Q", _fmt(L.fe.Q)),
        ("omega_re", _fmt(L.fe.omega.real)),
        ("omega_im", _fmt(L.fe.omega.imag)),
        ("sigma_a", _fmt(L.sigma_a)),
    ]
    for i, pole in enumerate(L.fe.poles, start=1):
        rows.append((f"pole_{i}",
                     f"{_fmt(pole.location.real)}+{_fmt(pole.location.imag)}i"
                     f" order={pole.order}"))
    try:
        rows.append(("resonance_alpha_m1", _fmt(L.resonance_alpha(1))))
    except TwistlabError:
        pass
    if args.format == "json":
        text = json.dumps(dict(rows), sort_keys=True, indent=1) + "\n"
    else:
        text = "".join(f"{k}={v}\n" for k, v in rows)
    _write_text(args.out, text)
    return 0


def _cmd_coeffs(args) -> int:
    L = _load(args)
    params = {"_cmd": "coeffs", "preset": L.name}
    if args.bulk is not None:
        table = L.coefficients.bulk(args.bulk).values
        params["bulk"] = args.bulk
        rows = [(n, _fmt(table[n - 1].real), _fmt(table[n - 1].imag))
                for n in range(1, args.bulk + 1)]
        _emit(args.out, args.format, params, ("n", "re", "im"), rows)
        return 0
    if args.n is None:
        raise UsageError("coeffs needs --n or --bulk")
    v = L.coefficients.coefficient(args.n)
    params["n"] = args.n
    _emit(args.out, args.format, params, ("n", "re", "im"),
          [(args.n, _fmt(v.real), _fmt(v.imag))])
    return 0


def _cmd_eval(args) -> int:
    L = _load(args)
    sp = _smoothing(args)
    ts = parse_grid(args.t)
    rows = []
    for t in ts:
        ev = smoothed_value(L, args.sigma, t, sp)
        rows.append((_fmt(t), _fmt(ev.value.real), _fmt(ev.value.imag),
                     ev.terms_used, _fmt(ev.tail_bound)))
    params = {"_cmd": "eval", "preset": L.name, "sigma": args.sigma,
              "t": args.t, "p": sp.p, "X": sp.X if sp.X is not None else "auto",
              "epsilon": sp.epsilon}
    _emit(args.out, args.format, params,
          ("t", "re", "im", "terms_used", "tail_bound"), rows)
    return 0


def _cmd_gamma_check(args) -> int:
    L = _load(args)
    ts = parse_grid(args.t_grid)
    rows = []
    for t in ts:
        r = gamma_ratio_compare(L.fe.gamma, args.x, t)
        rows.append((_fmt(t), _fmt(r.exact.real), _fmt(r.exact.imag),
                     _fmt(r.asymptotic.real), _fmt(r.asymptotic.imag),
                     _fmt(r.relative_error)))
    params = {"_cmd": "gamma-check", "preset": L.name, "x": args.x,
              "t_grid": args.t_grid}
    _emit(args.out, args.format, params,
          ("t", "exact_re", "exact_im", "asym_re", "asym_im", "rel_err"), rows)
    return 0


def _cmd_osc(args) -> int:
    ns = parse_int_range(args.n)
    rows = []
    for n in ns:
        pf = PhaseFamily(alpha=args.alpha, n=n, d=args.d)
        quad = sp_val = None
        if args.mode in ("quad", "both"):
            quad = I_n_quadrature(pf, args.T, args.tol)
        if args.mode in ("sp", "both") and in_stationary_range(pf, args.T):
            sp_val = I_n_stationary_phase(pf, args.T)
        diff = abs(quad - sp_val) if quad is not None and sp_val is not None else math.nan
        rows.append((n,
                     _fmt(quad.real) if quad is not None else "nan",
                     _fmt(quad.imag) if quad is not None else "nan",
                     _fmt(sp_val.real) if sp_val is not None else "nan",
                     _fmt(sp_val.imag) if sp_val is not None else "nan",
                     _fmt(diff)))
    params = {"_cmd": "osc", "d": args.d, "alpha": args.alpha, "T": args.T,
              "n": args.n, "mode": args.mode, "tol": args.tol}
    _emit(args.out, args.format, params,
          ("n", "quad_re", "quad_im", "sp_re", "sp_im", "abs_diff"), rows)
    return 0


def _cmd_transform(args) -> int:
    if args.ledger:
        sys.stdout.write(constant_conventions())
        return 0
    L = _load(args)
    routes = tuple(r.strip() for r in args.routes.split(","))
    for r in routes:
        if r not in ("direct", "sum", "fe"):
            raise UsageError(f"unknown route {r!r}")
    sp = _smoothing(args)
    Ts = parse_grid(args.T_grid)
    rows = []
    for T in Ts:
        rep = run_transform(L, args.m, T, sp, routes=routes, force=args.force)
        row: List[object] = [_fmt(T)]
        for name, val in (("direct", rep.direct), ("sum", rep.sum_side),
                          ("fe", rep.fe_side)):
            if name in routes:
                row.extend((_fmt(val.real), _fmt(val.imag)))
        for key in ("direct-sum", "direct-fe", "sum-fe"):
            if key in rep.deviations:
                row.append(_fmt(rep.deviations[key]))
        rows.append(tuple(row))
    columns: List[str] = ["T"]
    for name in ("direct", "sum", "fe"):
        if name in routes:
            columns.extend((f"{name}_re", f"{name}_im"))
    pairs = [f"dev_{a}_{b}" for a, b in (("direct", "sum"), ("direct", "fe"),
                                         ("sum", "fe"))
             if a in routes and b in routes]
    columns.extend(pairs)
    params = {"_cmd": "transform", "preset": L.name, "m": args.m,
              "T_grid": args.T_grid, "routes": args.routes, "p": sp.p,
              "rho": sp.rho}
    _emit(args.out, args.format, params, columns, rows)
    return 0


def _cmd_twist_scan(args) -> int:
    L = _load(args)
    if args.alpha == "auto":
        alpha = L.resonance_alpha(args.m)
    else:
        try:
            alpha = float(args.alpha)
        except ValueError:
            raise UsageError(f"--alpha must be 'auto' or a number, got {args.alpha!r}")
    sp = _smoothing(args, rho_default=TWIST_RHO)
    Ts = parse_grid(args.T_grid)
    report = run_twist_scan(L, alpha, Ts, sp)
    rows = [(_fmt(T), _fmt(tw.real), _fmt(tw.imag), _fmt(nm))
            for T, tw, nm in zip(report.grid, report.twist_values, report.normalized)]
    params = {"_cmd": "twist-scan", "preset": L.name, "alpha": alpha,
              "T_grid": args.T_grid, "p": sp.p, "rho": sp.rho, "m": args.m}
    _emit(args.out, args.format, params, ("T", "tw_re", "tw_im", "normalized"),
          rows, trailer={"slope": _fmt(report.slope),
                         "slope_stderr": _fmt(report.slope_stderr)})
    return 0


def _cmd_summatory(args) -> int:
    L = _load(args)
    Xs = parse_grid(args.X_grid)
    sums = [abs_partial_sum(L, X) for X in Xs]
    slope, stderr = growth_exponent(Xs, sums)
    rows = [(_fmt(X), _fmt(s)) for X, s in zip(Xs, sums)]
    params = {"_cmd": "summatory", "preset": L.name, "X_grid": args.X_grid}
    _emit(args.out, args.format, params, ("X", "sum"), rows,
          trailer={"slope": _fmt(slope), "slope_stderr": _fmt(stderr)})
    return 0


def _cmd_certify(args) -> int:
    L = _load(args)
    alpha = L.resonance_alpha(args.m)
    kap = kappa(L, alpha, args.m, "oracle-calibrated")
    sp = _smoothing(args, rho_default=TWIST_RHO)
    Ts = parse_grid(args.T_grid)
    report = omega_certificate(L, alpha, args.m, kap, Ts, sp)
    rows = [(_fmt(r.T), _fmt(r.twist_abs), _fmt(r.bound),
             int(r.passed), _fmt(r.margin)) for r in report.rows]
    params = {"_cmd": "certify", "preset": L.name, "m": args.m,
              "alpha": alpha, "T_grid": args.T_grid, "p": sp.p, "rho": sp.rho,
              "constant": _fmt(report.constant)}
    _emit(args.out, args.format, params,
          ("T", "lhs", "rhs", "pass", "margin"), rows)
    if args.strict and not report.all_passed():
        return 3
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    top = _Parser(prog="twistlab", description=__doc__,
                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, preset=True):
        if preset:
            p.add_argument("--preset", choices=PRESET_NAMES)
            p.add_argument("--config", help="JSON config for a custom instance")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("describe", help="derived invariants of an instance")
    common(p)
    p.set_defaults(func=_cmd_describe)

    p = sub.add_parser("coeffs", help="coefficient values")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--bulk", type=int)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("eval", help="smoothed evaluation of F(sigma + it)")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", required=True, help="value or grid a:b:n")
    p.add_argument("--X", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--epsilon", type=float)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("gamma-check", help="exact vs asymptotic gamma ratio")
    common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--t-grid", dest="t_grid", required=True)
    p.set_defaults(func=_cmd_gamma_check)

    p = sub.add_parser("osc", help="resonance-kernel integrals I_n")
    common(p, preset=False)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--n", required=True, help="N1:N2[:step]")
    p.add_argument("--mode", choices=("quad", "sp", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=_cmd_osc)

    p = sub.add_parser("transform", help="three-route resonance transform")
    common(p)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--T-grid", dest="T_grid", default="50:200:geom2")
    p.add_argument("--routes", default="direct,sum,fe")
    p.add_argument("--p", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--force", action="store_true",
                   help="override the operation-budget guard")
    p.add_argument("--ledger", action="store_true",
                   help="print the constant-convention notes and exit")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("twist-scan", help="additive twist over a T grid")
    common(p)
    p.add_argument("--alpha", default="auto")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--T-grid", dest="T_grid", required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--rho", type=float)
    p.set_defaults(func=_cmd_twist_scan)

    p = sub.add_parser("summatory", help="|a_n| partial sums over an X grid")
    common(p)
    p.add_argument("--X-grid", dest="X_grid", required=True)
    p.set_defaults(func=_cmd_summatory)

    p = sub.add_parser("certify", help="lower-bound certificate per dyadic T")
    common(p)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--T-grid", dest="T_grid", required=True)
    p.add_argument("--strict", action="store_true",
                   help="exit 3 if any grid point fails")
    p.add_argument("--p", type=float)
    p.add_argument("--rho", type=float)
    p.set_defaults(func=_cmd_certify)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except TwistlabError as exc:
        sys.stderr.write(f"computation error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
