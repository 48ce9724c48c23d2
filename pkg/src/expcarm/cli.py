"""Command-line front end: one subcommand per library operation.

Every command is deterministic given the run configuration; identical
invocations produce byte-identical output.  Exit code 0 means every
internal certification held; failed certifications (for example a
vanishing-order requirement) exit nonzero with a machine-readable record.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath

from . import arith, mainterm, moments, pairs, series
from .config import RunConfig, load_config_file, merge_config


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fraction(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def cmd_eval(args, cfg: RunConfig) -> int:
    if args.function == "lambda":
        values = [(n, arith.carmichael(arith.factorize(n))) for n in args.n]
    elif args.function == "tau":
        exps = [int(x) for x in args.tau_exponents.split(",")]
        values = [(n, arith.tau_multi(exps, n)) for n in args.n]
    else:
        func = arith.function_by_id(args.function)
        values = [(n, func.of_int(n)) for n in args.n]
    if cfg.out_format == "csv":
        lines = ["n,value"] + [f"{n},{v}" for n, v in values]
        _emit("\n".join(lines), args.out)
    else:
        _emit(json.dumps([{"n": n, "value": str(v)} for n, v in values],
                         indent=2), args.out)
    return 0


def _parse_grid(spec: str, x: int) -> list[int]:
    """'decades' for 4 points per decade up to x, or comma-separated values."""
    if spec == "decades":
        pts, k = [], 0
        while True:
            v = int(round(10 ** (k / 4)))
            if v > x:
                break
            pts.append(v)
            k += 1
        return sorted(set(pts + [x]))
    return sorted({int(v) for v in spec.split(",")} | {x})


def cmd_sum(args, cfg: RunConfig) -> int:
    fid = "phi-e" if args.r == "phi" else (
        "lambda-e" if args.r == "1" else f"lambda-e{args.r}")
    grid = _parse_grid(args.grid, args.x)
    table = arith.summatory(fid, args.x, checkpoints=grid,
                            memory_cap=cfg.sieve_memory_cap)
    _emit(table.to_csv() if cfg.out_format == "csv" else table.to_json(), args.out)
    return 0


def cmd_verify_series(args, cfg: RunConfig) -> int:
    rs = [args.r] if args.r else [1, 2, 3, 4]
    reports = [series.verify_vanishing(r) for r in rs]
    _emit(json.dumps([rep.as_json_dict() for rep in reports], indent=2), args.out)
    return 0 if all(rep.ok for rep in reports) else 1


def cmd_main_term(args, cfg: RunConfig) -> int:
    mt = mainterm.main_term(args.r if args.r != "phi" else "phi",
                            prec=min(cfg.precision_bits, 160))
    _emit(mt.to_json(), args.out)
    return 0


def cmd_residual(args, cfg: RunConfig) -> int:
    r = args.r if args.r == "phi" else int(args.r)
    grid = _parse_grid(args.grid, args.x)
    grid = [g for g in grid if g >= args.min_x]
    rows = mainterm.residual(r, grid, memory_cap=cfg.sieve_memory_cap)
    csv_text = mainterm.residual_csv(rows)
    try:
        fit = mainterm.fit_exponent(rows)
        fit_line = (f"# fitted slope {fit.slope:.6f} intercept {fit.intercept:.4f} "
                    f"r2 {fit.r_squared:.4f} points {fit.points_used}")
    except arith.DomainError as exc:
        fit_line = f"# fit unavailable: {exc}"
    _emit(csv_text + fit_line, args.out)
    return 0


def cmd_ep(args, cfg: RunConfig) -> int:
    if args.mode == "word":
        p = pairs.from_word(args.word, args.seed)
        _emit(pairs.pair_report_json(p), args.out)
        return 0
    if args.mode == "mu":
        res = pairs.mu_bound(Fraction(args.sigma), cfg.ep_depth)
        out = res.as_json_dict()
        out["sigma"] = args.sigma
        _emit(json.dumps(out, indent=2), args.out)
        return 0 if res.feasible else 1
    # optimize
    a, b, c, d, e, f = (Fraction(v) for v in args.objective.split(","))
    obj = pairs.FractionalObjective(a, b, c, d, e, f)
    constraints = []
    for spec in args.constraint or []:
        u, v, w = (Fraction(t) for t in spec.split(","))
        constraints.append(pairs.LinearConstraint(u, v, w))
    res = pairs.optimize_fractional(obj, constraints, cfg.ep_depth)
    _emit(json.dumps(res.as_json_dict(), indent=2), args.out)
    return 0 if res.feasible else 1


def cmd_kratzel(args, cfg: RunConfig) -> int:
    a = tuple(int(v) for v in args.a.split(","))
    p = pairs.from_word(args.word, args.seed)
    report = pairs.kratzel_check(a, p, args.condition_32)
    out = report.as_json_dict()
    if report.passes:
        out["exponent"] = str(pairs.kratzel_exponent(a, p, args.condition_32))
    _emit(json.dumps(out, indent=2), args.out)
    return 0 if report.passes else 1


def cmd_moments(args, cfg: RunConfig) -> int:
    if args.mode == "th3-check":
        rep = moments.moment_requirements_th3()
        _emit(json.dumps({"m_half": str(rep.m_half),
                          "m_two_thirds": str(rep.m_two_thirds),
                          "m_five_sixths": str(rep.m_five_sixths),
                          "ok": rep.ok}, indent=2), args.out)
        return 0 if rep.ok else 1
    sigma = Fraction(args.sigma)
    if args.mode == "table":
        value = moments.m_table(sigma)
        _emit(json.dumps({"sigma": args.sigma, "model": "table",
                          "m": str(value)}, indent=2), args.out)
        return 0
    pm = moments.pointwise_m(sigma, cfg.ep_depth)
    _emit(json.dumps({
        "sigma": args.sigma, "model": "pointwise", "m": str(pm.value),
        "m1": str(pm.m1), "m2": str(pm.m2) if pm.m2 is not None else None,
        "two_f": str(pm.two_f), "theta": str(pm.theta),
        "mu_sigma": str(pm.mu_sigma),
        "alpha2_tight": pm.alpha2_constraint_tight,
    }, indent=2), args.out)
    return 0


def cmd_c4(args, cfg: RunConfig) -> int:
    res = moments.solve_C4(args.model, depth=cfg.ep_depth,
                           prec=cfg.precision_bits)
    _emit(res.to_json(), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="expcarm",
        description="exponential-divisor Carmichael arithmetic and analytic "
                    "certification toolkit")
    ap.add_argument("--config", help="KEY=VALUE config file")
    ap.add_argument("--format", choices=["json", "csv"], dest="out_format")
    ap.add_argument("--precision", type=int, dest="precision_bits")
    ap.add_argument("--depth", type=int, dest="ep_depth")
    ap.add_argument("--cutoff", type=int, dest="euler_cutoff")
    ap.add_argument("--threads", type=int, dest="threads")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an arithmetic function")
    p.add_argument("function",
                   help="lambda | lambda-e | lambda-e2..4 | phi-e | tau")
    p.add_argument("tau_exponents", nargs="?", default="",
                   help="comma list a1,...,ak (tau only)")
    p.add_argument("n", type=int, nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sum", help="summatory table via the sieve")
    p.add_argument("r", choices=["1", "2", "3", "4", "phi"])
    p.add_argument("x", type=int)
    p.add_argument("--grid", default="decades")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("verify-series", help="vanishing-order certification")
    p.add_argument("r", type=int, nargs="?", choices=[1, 2, 3, 4])
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_series)

    p = sub.add_parser("main-term", help="residue main term constants")
    p.add_argument("r", choices=["1", "2", "3", "4", "phi"])
    p.add_argument("--out")
    p.set_defaults(func=lambda a, c: cmd_main_term(_coerce_r(a), c))

    p = sub.add_parser("residual", help="summatory minus main term on a grid")
    p.add_argument("r", choices=["1", "2", "3", "4", "phi"])
    p.add_argument("x", type=int)
    p.add_argument("--grid", default="decades")
    p.add_argument("--min-x", type=int, default=100, dest="min_x")
    p.add_argument("--out")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("ep", help="exponent pairs")
    p.add_argument("mode", choices=["word", "mu", "optimize"])
    p.add_argument("--word", default="")
    p.add_argument("--seed", default="H2005", choices=["trivial", "H2005"])
    p.add_argument("--sigma", default="1/2")
    p.add_argument("--objective", default="1,1,0,0,0,2",
                   help="a,b,c,d,e,f for (ak+bl+c)/(dk+el+f)")
    p.add_argument("--constraint", action="append",
                   help="u,v,w meaning u*k+v*l+w >= 0 (repeatable)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ep)

    p = sub.add_parser("kratzel", help="divisor error-term condition check")
    p.add_argument("a", help="a1,a2,a3,a4 nondecreasing")
    p.add_argument("--word", default="")
    p.add_argument("--seed", default="H2005", choices=["trivial", "H2005"])
    p.add_argument("--condition-32", default="2l-2k-1",
                   choices=["2l-2k-1", "literal"], dest="condition_32")
    p.add_argument("--out")
    p.set_defaults(func=cmd_kratzel)

    p = sub.add_parser("moments", help="moment bounds for zeta")
    p.add_argument("mode", choices=["table", "pointwise", "th3-check"])
    p.add_argument("--sigma", default="2/3")
    p.add_argument("--out")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("c4", help="solve the Holder feasibility equation")
    p.add_argument("model", choices=["table", "pointwise"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_c4)
    return ap


def _coerce_r(args):
    args.r = args.r if args.r == "phi" else int(args.r)
    return args


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    file_values = load_config_file(args.config) if args.config else None
    flag_values = {k: getattr(args, k, None)
                   for k in ("precision_bits", "ep_depth", "euler_cutoff",
                             "threads", "out_format")}
    cfg = merge_config(file_values, flag_values)
    mpmath.mp.prec = cfg.precision_bits
    try:
        return args.func(args, cfg)
    except (arith.DomainError, arith.CapacityError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(record) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
