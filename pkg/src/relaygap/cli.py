"""Command-line front end.

Subcommands:
  rates         bounds, rates and gaps at one channel
  sweep         rates against rho_z, as CSV (and optionally SVG)
  certify-gap   random-channel certification of the ½log₂3 gap
  af            amplify-and-forward water-filling at one channel
  mc-validate   Monte Carlo / determinant cross-check at one channel
  df-touch      rho_z where decode-and-forward meets the cut-set bound

Exit codes: 0 success, 1 usage or I/O error, 2 certification failure,
3 numerical-domain error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from . import __version__
from .af_isi import build_isi, flat_rate_closed_form, waterfill
from .channel import DomainError, params_from_db
from .cutset import exact_cutset
from .mc_validate import conditional_variance_check, mi_rates
from .rates import (
    HALF_LOG2_3,
    cf_quantizer,
    cf_rate,
    df_rate,
    gap_report,
    manual_quantizer,
    nnc_gap_bound,
    nnc_rates,
    q_star,
)
from .sweep import (
    CURVES,
    SweepSpec,
    certify_gap,
    emit_csv,
    emit_svg,
    find_df_touch_point,
    run_sweep,
    write_rows,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERT_FAIL = 2
EXIT_DOMAIN = 3

logger = logging.getLogger("relaygap")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_gains(p, rho=True):
    p.add_argument("--hsd-db", type=float, default=20.0, help="h_sd^2 in dB (default 20)")
    p.add_argument("--hsr-db", type=float, default=40.0, help="h_sr^2 in dB (default 40)")
    p.add_argument("--hrd-db", type=float, default=60.0, help="h_rd^2 in dB (default 60)")
    if rho:
        p.add_argument("--rho-z", type=float, default=0.0, help="noise correlation in [-1, 1]")


def _add_sweep_range(p):
    p.add_argument("--rho-lo", type=float, default=-1.0)
    p.add_argument("--rho-hi", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--epsilon", type=float, default=1e-6,
                   help="finite-rate curves use |rho_z| <= 1 - epsilon")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relaygap", description=__doc__.splitlines()[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rates", help="bounds, rates and gaps at one channel")
    _add_gains(p)
    p.add_argument("--q", type=float, default=None, help="manual quantizer variance for NNC")

    p = sub.add_parser("sweep", help="sweep rho_z and write CSV")
    _add_gains(p, rho=False)
    _add_sweep_range(p)
    p.add_argument("--curves", default=",".join(CURVES),
                   help="comma-separated subset of " + ",".join(CURVES))
    p.add_argument("--grid", type=int, default=4096, help="AF frequency grid size")
    p.add_argument("--af-flat", action="store_true", help="AF with flat power (closed form)")
    p.add_argument("--unit-rho", action="store_true",
                   help="do not clamp the rho_z range; df/af are also evaluated at |rho_z| = 1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for row evaluation")
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    p.add_argument("--svg", default=None, help="optional SVG chart path")

    p = sub.add_parser("certify-gap", help="certify the constant gap on random channels")
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--db-lo", type=float, default=-60.0)
    p.add_argument("--db-hi", type=float, default=60.0)

    p = sub.add_parser("af", help="amplify-and-forward rate at one channel")
    _add_gains(p)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--af-flat", action="store_true")

    p = sub.add_parser("mc-validate", help="Monte Carlo cross-check at one channel")
    _add_gains(p)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--draws", type=int, default=1_000_000, help="samples per covariance")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("df-touch", help="rho_z where DF touches the exact cut-set bound")
    _add_gains(p, rho=False)
    _add_sweep_range(p)
    p.add_argument("--tol", type=float, default=1e-6)
    return parser


def _print_json(obj):
    print(json.dumps(obj, indent=2, default=str))


def _params(args):
    return params_from_db(args.hsd_db, args.hsr_db, args.hrd_db, args.rho_z)


def _cmd_rates(args):
    p = _params(args)
    out = {"params": asdict(p)}
    if abs(p.rho_z) < 1.0:
        q = q_star(p) if args.q is None else manual_quantizer(args.q)
        nnc = nnc_rates(p, q)
        cs = exact_cutset(p)
        out.update(
            r_ub1=cs.r_ub1, r_ub2=cs.r_ub2, cutset_relaxed=cs.relaxed_bound,
            cutset_exact=cs.exact_bound, rho_x_star=cs.rho_x_star,
            q=q.q, q_origin=q.origin.value, r1=nnc.r1, r2=nnc.r2, nnc=nnc.rate,
            nnc_gap_bound=nnc_gap_bound(p, q),
        )
    if p.h_rd > 0:
        out.update(q_c=cf_quantizer(p).q, cf=cf_rate(p))
    out["df"] = df_rate(p)
    if abs(p.rho_z) < 1.0:
        rep = gap_report(p, epsilon=0.0)
        out.update(gap_nnc_at_q_star=rep.gap_nnc, gap_cf=rep.gap_cf, gap_df=rep.gap_df)
    _print_json(out)
    return EXIT_OK


def _cmd_sweep(args):
    curves = tuple(c.strip() for c in args.curves.split(",") if c.strip())
    spec = SweepSpec(args.hsd_db, args.hsr_db, args.hrd_db, args.rho_lo, args.rho_hi,
                     args.steps, curves, args.grid, args.af_flat, args.seed,
                     args.epsilon, args.unit_rho)
    rows = run_sweep(spec, workers=args.jobs)
    if args.out == "-":
        write_rows(rows, sys.stdout)
    else:
        emit_csv(rows, args.out)
    if args.svg:
        emit_svg(rows, args.svg, title=f"h_sd²={args.hsd_db:g} dB, h_sr²={args.hsr_db:g} dB, "
                                       f"h_rd²={args.hrd_db:g} dB")
    return EXIT_OK


def _cmd_certify(args):
    cert = certify_gap(args.draws, args.seed, (args.db_lo, args.db_hi))
    _print_json({
        "draws": cert.n_draws,
        "max_gap_nnc": cert.max_gap_nnc,
        "max_gap_cf": cert.max_gap_cf,
        "max_gap_df": cert.max_gap_df,
        "bound": HALF_LOG2_3,
        "threshold": cert.threshold,
        "worst_nnc_params": None if cert.worst_nnc is None else asdict(cert.worst_nnc),
        "passed": cert.passed,
    })
    return EXIT_OK if cert.passed else EXIT_CERT_FAIL


def _cmd_af(args):
    ch = build_isi(_params(args))
    out = {"isi": asdict(ch)}
    try:
        out["flat_closed_form"] = flat_rate_closed_form(ch)
    except DomainError as exc:
        out["flat_closed_form"] = None
        logger.warning("flat closed form unavailable: %s", exc)
    if not args.af_flat:
        sol = waterfill(ch, args.grid)
        out.update(waterfill_rate=sol.rate_bits, water_level=sol.lambda_,
                   power_used=sol.power_used, grid_offset=sol.power.offset,
                   max_abs_s_minus_1=float(abs(sol.power.values - 1.0).max()))
    _print_json(out)
    return EXIT_OK


def _cmd_mc(args):
    p = _params(args)
    q = None if args.q is None else manual_quantizer(args.q)
    q_used = q_star(p) if q is None else q
    closed = nnc_rates(p, q_used)
    exact = exact_cutset(p)
    analytic = mi_rates(p, q)
    empirical = mi_rates(p, q, n=args.draws, seed=args.seed)
    cv_analytic, cv_empirical = conditional_variance_check(p, args.draws, args.seed)
    _print_json({
        "q": q_used.q,
        "closed_form": {"r1": closed.r1, "r2": closed.r2, "r_ub1": exact.r_ub1,
                        "r_ub2": exact.r_ub2, "r_cf": cf_rate(p) if p.h_rd > 0 else None},
        "mi_analytic": asdict(analytic),
        "mi_empirical": asdict(empirical),
        "conditional_variance": {"analytic": cv_analytic, "empirical": cv_empirical},
    })
    return EXIT_OK


def _cmd_touch(args):
    spec = SweepSpec(args.hsd_db, args.hsr_db, args.hrd_db, args.rho_lo, args.rho_hi,
                     args.steps, epsilon=args.epsilon)
    tp = find_df_touch_point(spec, tol=args.tol)
    _print_json(asdict(tp))
    return EXIT_OK


_COMMANDS = {
    "rates": _cmd_rates,
    "sweep": _cmd_sweep,
    "certify-gap": _cmd_certify,
    "af": _cmd_af,
    "mc-validate": _cmd_mc,
    "df-touch": _cmd_touch,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return _COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"relaygap: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"relaygap: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
