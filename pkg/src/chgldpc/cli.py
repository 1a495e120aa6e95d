"""Command-line entry point: ``chgldpc <subcommand> ...``.

Every subcommand writes JSON (``simulate`` writes CSV) to stdout or to
``--output``. Exit status is 0 on success, 2 when an input is refused
(budget or precondition) and 1 on any other error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .component import component_from_name
from .decoders import DEFAULT_MAX_ITERS, decode, make_hybrid
from .errors import RefusalError
from .gf2 import load_alist, save_alist
from .hybrid import (array_layout, check_lower_rows_girth, code_from_dict, code_to_dict,
                     critical_set_for, lower_rows_girth, place_rows, place_ts_guided,
                     plan_rows, rate_lower_bound, rate_report, splitting_upper_bound)
from .sim import SimConfig, run_sim
from .tanner import TannerGraph, build_permutation_code, layout_girth, search_shifts
from .trapsets import (critical_number, elementary_orbits, enumerate_elementary_ts,
                       min_critical_set_size, ts_from_variables)
from .verify import verify_gec


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def _labels(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(";"):
        a, b = _ints(part)
        out.append((a, b))
    return out


def load_code(path: str):
    """(HybridCode, layout or None) from a code/layout JSON file or an alist file."""
    if path.endswith(".alist"):
        g = TannerGraph.from_matrix(load_alist(path))
        return make_hybrid(g), None
    with open(path) as fh:
        d = json.load(fh)
    return code_from_dict(d)


def _period(layout):
    return layout.p if layout is not None and layout.circulant else None


# ---------------------------------------------------------------------------
# subcommands


def cmd_construct(args):
    if args.array:
        layout = array_layout(args.gamma, args.rho, args.p)
    else:
        layout = search_shifts(args.gamma, args.rho, args.p, args.girth, seed=args.seed,
                               max_tries=args.max_tries, lower_rows_girth=args.lower_girth)
        if layout is None:
            raise RefusalError(f"no girth-{args.girth} layout found for p={args.p} within "
                               f"{args.max_tries} candidate evaluations")
    if args.alist:
        save_alist(build_permutation_code(layout).to_matrix(), args.alist)
    g = layout_girth(layout)
    lg = lower_rows_girth(layout)
    fin = lambda v: None if v == float("inf") else int(v)
    return {"layout": json.loads(layout.to_json()), "girth": fin(g), "lower_rows_girth": fin(lg)}


def cmd_hybridize(args):
    code, layout = load_code(args.layout)
    comp = component_from_name(args.component)
    if args.strategy == "rows":
        if layout is None:
            raise RefusalError("row placement needs a permutation-based layout")
        hybrid = place_rows(layout, args.alpha, comp)
        out = code_to_dict(hybrid, layout)
        out["plan"] = plan_rows(layout, args.alpha).to_dict()
        return out
    labels = _labels(args.labels) if args.labels else None
    sets = enumerate_elementary_ts(code.graph, args.a_max, args.b_max, _period(layout))
    if labels:
        sets = [ts for ts in sets if ts.label in set(labels)]
    crit = [critical_set_for(ts, args.alg, comp) for ts in sets]
    hybrid, plan = place_ts_guided(code.graph, sets, crit, comp, code.gamma, args.alg)
    out = code_to_dict(hybrid, layout)
    out["plan"] = plan.to_dict()
    if plan.unresolved:
        args.exit_code = 2
    return out


def cmd_decode(args):
    code, _ = load_code(args.code)
    y = [0] * code.n
    for v in _ints(args.errors):
        y[v] ^= 1
    return decode(code, y, args.alg, args.max_iters).to_dict()


def cmd_enumerate_ts(args):
    code, layout = load_code(args.code)
    period = _period(layout)
    if args.orbits:
        return [{"representative": ts_from_variables(code.graph, vs).to_dict(), "orbit_size": k}
                for vs, k in elementary_orbits(code.graph, args.a_max, args.b_max, period)]
    return [ts.to_dict() for ts in enumerate_elementary_ts(code.graph, args.a_max, args.b_max, period)]


def _instance(args):
    if args.fixture:
        from .fixtures import all_fixtures
        fx = all_fixtures()[args.fixture]
        return fx.instance()
    code, _ = load_code(args.code)
    return ts_from_variables(code.graph, _ints(args.variables))


def cmd_critical_set(args):
    ts = _instance(args)
    comp = component_from_name(args.component)
    cs = critical_set_for(ts, args.alg, comp)
    out = {"instance": ts.to_dict(), "critical_set": list(cs.checks), "size": cs.size,
           "completed": list(cs.completed),
           "critical_number_plain": _num(critical_number(ts, (), args.alg, comp))}
    if args.exact:
        out["min_size"] = min_critical_set_size(ts, args.alg, comp)
    return out


def _num(v):
    return None if v == float("inf") else v


def cmd_splitting(args):
    code, layout = load_code(args.code)
    comp = component_from_name(args.component)
    hybrid, plan, sets = splitting_upper_bound(code.graph, comp, _labels(args.labels),
                                               args.a_max, args.b_max, _period(layout), args.alg)
    out = {"instances": len(sets), "plan": plan.to_dict()}
    if layout is not None:
        out["row_bounds"] = {"p": layout.p, "2p": 2 * layout.p, "3p": 3 * layout.p}
    if plan.unresolved:
        args.exit_code = 2
    return out


def cmd_verify_gec(args):
    code, _ = load_code(args.code)
    weights = _ints(args.weights) if args.weights else None
    rep = verify_gec(code, args.alg, args.weight, args.mode, args.samples, args.seed, weights,
                     args.max_iters, args.checkpoint, workers=args.threads)
    return rep.to_dict()


def cmd_rate(args):
    if args.bound:
        gamma, rho, n, kappa = (int(v) for v in args.bound[:4])
        from fractions import Fraction
        b = rate_lower_bound(gamma, rho, n, kappa, Fraction(args.bound[4]))
        return {"lower_bound": str(b), "lower_bound_float": float(b)}
    code, layout = load_code(args.code)
    out = rate_report(code).to_dict()
    if layout is not None and layout.gamma in (3, 4):
        which = "cw3_44" if layout.gamma == 3 else "cw4_36"
        out["single_row_precondition"] = {which: check_lower_rows_girth(layout, which)}
    return out


def cmd_simulate(args):
    code, _ = load_code(args.code)
    alphas = [float(a) for a in args.alphas.split(",")]
    cfg = SimConfig(code, args.alg, alphas, args.max_frames, args.max_errors, args.max_iters, args.seed)
    return run_sim(cfg, args.threads).to_csv()


def cmd_fixtures(args):
    from .fixtures import all_fixtures
    fx = all_fixtures()
    if args.name:
        if args.name not in fx:
            raise RefusalError(f"unknown fixture {args.name!r}; known: {', '.join(sorted(fx))}")
        return fx[args.name].to_dict()
    return [f.to_dict() for f in fx.values()]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def globals_(default):
        # subcommands suppress their defaults so flags given before the
        # subcommand name are not overwritten
        d = (lambda v: v) if default else (lambda v: argparse.SUPPRESS)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--seed", type=int, default=d(0))
        g.add_argument("--threads", type=int, default=d(1))
        g.add_argument("--output", default=d(None), help="write here instead of stdout")
        return g

    common = globals_(False)
    p = argparse.ArgumentParser(prog="chgldpc", parents=[globals_(True)],
                                description="Check-hybrid GLDPC construction and analysis tools")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def alg(sp):
        sp.add_argument("--alg", choices=["pbf", "galb"], default="pbf")

    sp = add("construct", cmd_construct, "search or build a permutation-based layout")
    sp.add_argument("--gamma", type=int, required=True)
    sp.add_argument("--rho", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--girth", type=int, default=8)
    sp.add_argument("--lower-girth", type=int)
    sp.add_argument("--max-tries", type=int, default=20000)
    sp.add_argument("--array", action="store_true", help="shifts j*l mod p instead of a search")
    sp.add_argument("--alist", help="also save the parity-check matrix here")

    sp = add("hybridize", cmd_hybridize, "convert checks to super checks")
    sp.add_argument("--layout", required=True)
    sp.add_argument("--strategy", choices=["rows", "ts"], default="rows")
    sp.add_argument("--alpha", type=int, default=1)
    sp.add_argument("--component", default="bch31_21")
    sp.add_argument("--a-max", type=int, default=8)
    sp.add_argument("--b-max", type=int, default=8)
    sp.add_argument("--labels", help="e.g. '4,4;5,3'")
    alg(sp)

    sp = add("decode", cmd_decode, "decode one error pattern on the zero codeword")
    sp.add_argument("--code", required=True)
    sp.add_argument("--errors", default="")
    sp.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    alg(sp)

    sp = add("enumerate-ts", cmd_enumerate_ts, "list elementary trapping sets")
    sp.add_argument("--code", required=True)
    sp.add_argument("--a-max", type=int, default=8)
    sp.add_argument("--b-max", type=int, default=8)
    sp.add_argument("--orbits", action="store_true", help="one representative per cyclic orbit")

    sp = add("critical-set", cmd_critical_set, "cycle-breaking critical set of one trapping set")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--fixture")
    grp.add_argument("--code")
    sp.add_argument("--variables", default="")
    sp.add_argument("--component", default="bch31_21")
    sp.add_argument("--exact", action="store_true", help="also compute the minimum size")
    alg(sp)

    sp = add("splitting", cmd_splitting, "upper-bound the conversions eliminating given labels")
    sp.add_argument("--code", required=True)
    sp.add_argument("--labels", required=True)
    sp.add_argument("--component", default="bch31_21")
    sp.add_argument("--a-max", type=int, default=8)
    sp.add_argument("--b-max", type=int, default=8)
    alg(sp)

    sp = add("verify-gec", cmd_verify_gec, "exhaustive or sampled error-pattern verification")
    sp.add_argument("--code", required=True)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=0)
    sp.add_argument("--weights", help="sampled weights, default: --weight")
    sp.add_argument("--checkpoint")
    sp.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    alg(sp)

    sp = add("rate", cmd_rate, "actual rate and lower bound")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--code")
    grp.add_argument("--bound", nargs=5, metavar=("GAMMA", "RHO", "N", "KAPPA", "R"))

    sp = add("simulate", cmd_simulate, "BSC Monte Carlo, CSV output")
    sp.add_argument("--code", required=True)
    sp.add_argument("--alphas", required=True)
    sp.add_argument("--max-frames", type=int, default=10000)
    sp.add_argument("--max-errors", type=int, default=100)
    sp.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    alg(sp)

    sp = add("fixtures", cmd_fixtures, "canned trapping-set subgraphs as JSON")
    sp.add_argument("--name")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.exit_code = 0
    try:
        result = args.func(args)
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI maps every failure to status 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = result if isinstance(result, str) else json.dumps(result, indent=1) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the flush at exit
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return args.exit_code


if __name__ == "__main__":
    sys.exit(main())
