"""Command-line front end: every pipeline stage as a standalone
subcommand writing deterministic CSV/JSON plus a manifest sidecar.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import __version__
from .branchpoints import PrecisionContext, first_quadrant_root_census
from .elasticity import (
    MaterialParams,
    cohen_approx,
    inv_langevin,
    reduced_eval,
    rickaby_scott_approx,
    strain_energy,
    stress_response,
)
from .errors import NumericalError
from .estimation import CoefficientWindow, fit_domb_sykes, three_term_approx, three_term_exact
from .output import RunManifest, write_csv, write_json
from .rational import cf_convergent, filter_froissart, pole_zero_set, series_to_cf
from .series import (
    h_series,
    inverse_langevin_series,
    langevin_series,
    reduce_additive,
    reduce_multiplicative,
)

_MAX_ORDER = 2000
_GRID_CAP = 1.0 - 1e-12  # eval grid must stay clear of the poles

_WRITERS = {"csv": write_csv, "json": write_json}


def _emit(args, header, rows, parameters, precision_mode):
    out = args.out or f"{args.command.replace('-', '_')}.{args.format}"
    _WRITERS[args.format](out, header, rows)
    manifest = RunManifest(command=args.command, parameters=parameters,
                           precision_mode=precision_mode, version=__version__)
    manifest.add_output(out)
    manifest.write(out)
    return out


def _parse_int_list(text: str):
    """'5:150:5' (start:stop:step), 'a,b,c', or a single integer."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) == 2:
            parts.append("1")
        start, stop, step = (int(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad range {text!r}")
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",")]


def _parse_grid(text: str):
    if ":" in text:
        start_s, stop_s, step_s = text.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
        if step <= 0 or stop < start:
            raise ValueError(f"bad grid {text!r}")
        n = int(math.floor((stop - start) / step + 1e-9))
        return [start + k * step for k in range(n + 1)]
    return [float(p) for p in text.split(",")]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_series(args, parser):
    if not 1 <= args.order <= _MAX_ORDER:
        parser.error(f"order must be in 1..{_MAX_ORDER}")
    if args.function == "langevin":
        s = langevin_series(args.order)
    elif args.function == "inverse":
        s = inverse_langevin_series(args.order)
    elif args.function == "f":
        s = reduce_multiplicative(inverse_langevin_series(args.order + 1))
    elif args.function == "g":
        s = reduce_additive(inverse_langevin_series(args.order))
    else:
        s = h_series(reduce_additive(inverse_langevin_series(args.order + 1)))
    rows = [(k, str(c.numerator), str(c.denominator), float(c))
            for k, c in s.nonzero_terms()]
    out = _emit(args, ("power", "numerator", "denominator", "float64_value"),
                rows, {"function": args.function, "order": args.order},
                "exact-rational")
    print(f"wrote {len(rows)} terms of {args.function} to {out}")
    return 0


def _window_for(args, parser, need_hi: int):
    order = max(args.order, need_hi + 2)
    if order > _MAX_ORDER:
        parser.error(f"window needs order {order} > {_MAX_ORDER}")
    inv = inverse_langevin_series(order + 1)
    h = h_series(reduce_additive(inv))
    return CoefficientWindow.from_series(h)


def _cmd_estimate(args, parser):
    if args.method == "domb-sykes":
        fit_range = None
        if args.window != "auto":
            try:
                lo, hi = (int(p) for p in args.window.split(":"))
            except ValueError:
                parser.error(f"bad window {args.window!r}")
            fit_range = (lo, hi)
        win = _window_for(args, parser, fit_range[1] if fit_range else args.order)
        fit = fit_domb_sykes(win, fit_range)
        rows = [(fit.window[0], fit.window[1], fit.intercept, fit.slope,
                 fit.radius, fit.alpha, fit.rms_residual, fit.n_points,
                 fit.n_skipped)]
        header = ("first_index", "last_index", "intercept", "slope", "radius",
                  "alpha", "rms_residual", "n_points", "n_skipped")
    else:
        solver = three_term_exact if args.method == "three-term-exact" else three_term_approx
        if args.window == "auto":
            lo, hi = 262, 300
        else:
            try:
                lo, hi = (int(p) for p in args.window.split(":"))
            except ValueError:
                parser.error(f"bad window {args.window!r}")
        if lo % 2 or hi % 2 or lo < 6 or hi < lo:
            parser.error(f"window {args.window!r} must be an even range with lo >= 6")
        win = _window_for(args, parser, hi)
        rows = []
        for m2 in range(lo, hi + 2, 2):
            try:
                est = solver(win, m2)
                rows.append((m2, win.a(m2), win.a(m2 - 2), win.a(m2 - 4),
                             est.radius, est.cos_two_theta, est.alpha,
                             est.residual, est.flagged, ""))
            except NumericalError as exc:
                # per-row failure stays in-row; the sweep continues
                rows.append((m2, win.a(m2), win.a(m2 - 2), win.a(m2 - 4),
                             None, None, None, None, None, str(exc)))
        header = ("anchor", "a_m", "a_m_minus_2", "a_m_minus_4", "r",
                  "cos_two_theta", "alpha", "residual", "flagged", "error")
    out = _emit(args, header, rows,
                {"method": args.method, "window": args.window, "order": args.order},
                "float64")
    print(f"wrote {len(rows)} row(s) to {out}")
    return 0


def _cmd_poles(args, parser):
    try:
        depths = _parse_int_list(args.depths)
    except ValueError as exc:
        parser.error(str(exc))
    if not depths or min(depths) < 1 or max(depths) > 200:
        parser.error("depths must lie in 1..200")
    order = 2 * (max(depths) + 1) + 2
    inv = inverse_langevin_series(order + 1)
    base = reduce_multiplicative(inv) if args.function == "f" else (
        h_series(reduce_additive(inv)) if args.function == "h" else inv)
    rows = []
    for depth in sorted(depths):
        cf = series_to_cf(base, depth)
        rf = cf_convergent(cf, depth + 1)
        pz = pole_zero_set(rf, truncation_depth=depth, dps=args.dps)
        kept_poles = set(pz.poles)
        kept_zeros = set(pz.zeros)
        if args.filter == "froissart":
            fz = filter_froissart(pz)
            kept_poles = set(fz.poles)
            kept_zeros = set(fz.zeros)
        for p, res, mult in zip(pz.poles, pz.residues, pz.pole_multiplicity):
            rows.append((depth, "pole", p.real, p.imag, res.real, res.imag,
                         mult, p in kept_poles))
        for z in pz.zeros:
            rows.append((depth, "zero", z.real, z.imag, None, None, 1,
                         z in kept_zeros))
    out = _emit(args, ("depth", "kind", "re", "im", "residue_re", "residue_im",
                       "multiplicity", "kept"),
                rows, {"depths": args.depths, "filter": args.filter,
                       "function": args.function, "dps": args.dps},
                f"mp-{args.dps}")
    print(f"wrote {len(rows)} row(s) to {out}")
    return 0


def _cmd_branch_points(args, parser):
    if args.n < 1:
        parser.error("--n must be >= 1")
    if args.precision not in ("standard", "extended"):
        # reachable via the INVLANG_PRECISION env default, which argparse
        # does not check against choices
        parser.error(f"bad precision {args.precision!r}")
    ctx = PrecisionContext.standard() if args.precision == "standard" else PrecisionContext.extended()
    census = first_quadrant_root_census(args.n, ctx)
    rows = [(bp.n, bp.w.real, bp.w.imag, bp.z.real, bp.z.imag, bp.modulus,
             bp.defining_residual, bp.consistency_residual) for bp in census]
    out = _emit(args, ("n", "w_re", "w_im", "z_re", "z_im", "modulus",
                       "defining_residual", "consistency_residual"),
                rows, {"n": args.n, "precision": args.precision},
                args.precision)
    print(f"wrote {len(rows)} branch point(s) to {out}")
    return 0


def _cmd_eval(args, parser):
    if args.mu <= 0 or args.I_m <= 3:
        parser.error("require --mu > 0 and --Im > 3")
    try:
        grid = _parse_grid(args.grid)
    except ValueError as exc:
        parser.error(str(exc))
    if any(abs(x) > _GRID_CAP for x in grid):
        parser.error(f"grid must lie inside (-{_GRID_CAP}, {_GRID_CAP})")
    params = MaterialParams(mu=args.mu, I_m=args.I_m)
    x0 = math.sqrt(3.0 / args.I_m)
    if not any(abs(x - x0) < 1e-12 for x in grid):
        grid.append(x0)  # the normalization point, so the W=0 row exists
    rows = []
    for x in sorted(grid):
        at_x0 = abs(x - x0) < 1e-12
        beta = stress_response(x, params) if x >= 0.0 else None
        I_1 = x * x * args.I_m
        if at_x0:
            W = 0.0
        elif 3.0 <= I_1 < args.I_m:
            W = strain_energy(I_1, params)
        else:
            W = None
        rows.append((x, inv_langevin(x), cohen_approx(x),
                     rickaby_scott_approx(x), reduced_eval("f", x),
                     reduced_eval("g", x), reduced_eval("h", x), beta, W))
    out = _emit(args, ("x", "Linv", "cohen", "rickaby_scott", "f", "g", "h",
                       "beta", "W"),
                rows, {"grid": args.grid, "mu": args.mu, "I_m": args.I_m},
                "float64")
    print(f"wrote {len(rows)} row(s) to {out}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invlang",
        description="Series, singularity estimates, pole maps, branch points "
                    "and rubber-elasticity evaluation for the inverse of "
                    "coth(y) - 1/y.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output file (default: <command>.<format>)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("series", help="exact Taylor coefficients")
    p.add_argument("--function", choices=("langevin", "inverse", "f", "g", "h"),
                   required=True)
    p.add_argument("--order", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("estimate", help="singularity estimates from coefficients")
    p.add_argument("--method", choices=("three-term-exact", "three-term-approx",
                                        "domb-sykes"), required=True)
    p.add_argument("--window", default="auto",
                   help="anchor range 'lo:hi' (even indices) or 'auto'")
    p.add_argument("--order", type=int, default=448,
                   help="series order supplying the coefficients")
    common(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("poles", help="rational-approximant pole/zero maps")
    p.add_argument("--depths", required=True,
                   help="'150', 'a,b,c', or 'start:stop:step'")
    p.add_argument("--filter", choices=("froissart", "none"), default="froissart")
    p.add_argument("--function", choices=("f", "h", "inverse"), default="f")
    p.add_argument("--dps", type=int, default=60,
                   help="working digits for the root finder")
    common(p)
    p.set_defaults(func=_cmd_poles)

    p = sub.add_parser("branch-points", help="first-quadrant root census")
    p.add_argument("--n", type=int, required=True, help="number of roots")
    p.add_argument("--precision", choices=("standard", "extended"),
                   default=os.environ.get("INVLANG_PRECISION", "extended"))
    common(p)
    p.set_defaults(func=_cmd_branch_points)

    p = sub.add_parser("eval", help="real-line evaluation grid")
    p.add_argument("--grid", default="0:0.99:0.01",
                   help="'start:stop:step' or comma-separated x values")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--Im", dest="I_m", type=float, default=25.0)
    common(p)
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
