"""Command line front end: ``kinets <command> ...``.

Every command writes a JSON report (stdout, or ``--out``) and exits 0 iff all
of the report's verdicts pass, 1 if some verdict fails, and 2 on an error.
When ``--out`` is given a figure is rendered next to the report (same stem,
``.svg``) unless ``--svg`` names another path or ``--no-figure`` is set.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import io
from .errors import KinetsError, ParseError
from .geometry import OUTSIDE, hull_membership
from .poly import IsolatingInterval, Poly, RationalFunction


# ---------------------------------------------------------------------------
# serialization helpers


def event_json(iv: IsolatingInterval) -> dict:
    if iv.is_exact:
        return {"exact": io.num_str(iv.lo)}
    return {"poly": io.poly_json(iv.poly), "lo": io.num_str(iv.lo), "hi": io.num_str(iv.hi)}


def _sorted_ids(ids, order) -> list:
    return sorted(ids, key=order.__getitem__)


def net_json(net) -> dict:
    if net.fallback:
        return {"fallback": True, "ids": list(net.fallback_ids), "r": io.num_str(net.r)}
    lines = []
    for line in net.lines:
        lines.append({
            "generator": line.generator,
            "abscissa": io.poly_json(line.abscissa),
            "height_net": [
                {"num": io.poly_json(h.num), "den": io.poly_json(h.den), "pair": list(pair)}
                for h, pair in zip(line.height_net, line.chord_index)
            ],
            "stats": io.jsonable(line.stats),
        })
    return {
        "fallback": False,
        "r": io.num_str(net.r),
        "lambdas": [io.num_str(x) for x in net.lambdas],
        "stage1": io.jsonable(net.stage1),
        "lines": lines,
    }


def net_from_json(P, data):
    """Rebuild a KineticWeakNet; each height entry is recomputed from its pair and checked."""
    from .weaknet import KineticWeakNet, Step1Line, chord_height

    r = io.parse_rational(data.get("r", "2"), "net.r")
    if data.get("fallback"):
        return KineticWeakNet([], r, fallback=True, fallback_ids=list(data["ids"]))
    coords = dict(P.points)
    lines = []
    for k, ld in enumerate(data.get("lines", [])):
        where = f"net.lines[{k}]"
        gen = ld["generator"]
        if gen not in coords:
            raise ParseError(f"{where}.generator: unknown point {gen!r}", at=where)
        w = io._parse_poly(ld["abscissa"], where + ".abscissa")
        if w != coords[gen][0]:
            raise ParseError(f"{where}.abscissa: does not match the generator's first coordinate", at=where)
        hs, pairs = [], []
        for e, hd in enumerate(ld["height_net"]):
            a, b = hd["pair"]
            h = chord_height(coords[a], coords[b], w, pair=(a, b))
            stated = RationalFunction(io._parse_poly(hd["num"], f"{where}.height_net[{e}].num"),
                                      io._parse_poly(hd["den"], f"{where}.height_net[{e}].den"))
            if stated != RationalFunction(h.num, h.den):
                raise ParseError(f"{where}.height_net[{e}]: not the chord height of {a},{b}", at=where)
            hs.append(h)
            pairs.append((a, b))
        lines.append(Step1Line(gen, w, hs, pairs, stats=dict(ld.get("stats", {}))))
    return KineticWeakNet(lines, r, fallback=False, stage1=dict(data.get("stage1", {})))


def schedule_json(times) -> list:
    return [{"t": io.num_str(t), "tags": list(tags)} for t, tags in times]


def schedule_from_json(data) -> list:
    return [(io.parse_rational(x["t"], f"schedule[{k}].t"), list(x.get("tags", []))) for k, x in enumerate(data)]


# ---------------------------------------------------------------------------
# commands


def _figure_path(args):
    if args.no_figure:
        return None
    if args.svg:
        return args.svg
    if args.out:
        return str(Path(args.out).with_suffix(".svg"))
    return None


def _inputs(args, text: str, **extra) -> dict:
    out = {"instance": io.digest(text), "seed": args.seed}
    out.update(extra)
    return out


def _load(args):
    text = Path(args.input).read_text(encoding="utf-8")
    return io.loads_instance(text), text


def cmd_gen(args):
    spec = io.GenSpec(d=args.d, n=args.n, mode=args.mode.upper(), beta=args.beta, seed=args.seed,
                      coef_range=args.coef_range, spread=args.spread)
    inst = io.gen_instance(spec)
    return inst.dumps(), None


def cmd_select(args):
    from .selection import first_selection_point

    inst, text = _load(args)
    P = inst.point_set()
    rep = first_selection_point(P)
    # oracle: recount the depth of the returned point with the generic LP membership test
    depth = 0
    boundary = 0
    for S in combinations(P.points, P.dimension + 1):
        m = hull_membership(rep.point, list(S))
        if m != OUTSIDE:
            depth += 1
            boundary += m.name == "RELATIVE_BOUNDARY"
    report = io.ReportFile(
        command="select",
        inputs=_inputs(args, text),
        outputs={"point": list(rep.point), "depth": rep.depth, "boundary_count": rep.boundary_count},
        metrics={"n": len(P), "d": P.dimension, "bound": rep.bound, "candidates": rep.candidates,
                 "b_d": rep.b_d, "simplices": math.comb(len(P), P.dimension + 1)},
        verdicts={"depth_meets_bound": rep.depth >= rep.bound,
                  "oracle_depth_agrees": depth == rep.depth and boundary == rep.boundary_count},
    )
    fig = _figure_path(args)
    if fig and P.dimension == 2:
        from .plotting import plot_static

        plot_static(P, fig, point=rep.point, title=f"depth {rep.depth} (bound {rep.bound})")
    return report.dumps(), report


def cmd_richsimplex(args):
    from .selection import rich_simplex

    inst, text = _load(args)
    P = inst.point_set()
    res = rich_simplex(P)
    report = io.ReportFile(
        command="richsimplex",
        inputs=_inputs(args, text),
        outputs={"simplex": list(res.simplex), "tuples": [list(t) for t in res.tuples]},
        metrics={"n": len(P), "d": P.dimension, "count": len(res.tuples), "bound": res.bound,
                 "certificates": res.certificates, "simplices_used": len(res.groups)},
        verdicts={"count_meets_bound": len(res.tuples) >= res.bound},
    )
    fig = _figure_path(args)
    if fig and P.dimension == 2:
        from .plotting import plot_static

        plot_static(P, fig, simplex=res.simplex, title=f"{len(res.tuples)} tuples (bound {res.bound})")
    return report.dumps(), report


def _kih_figure(args, M, H_events, net=()):
    fig = _figure_path(args)
    if not fig:
        return
    from .plotting import plot_kinetic_1d

    times = [float(iv.approx()) for iv in H_events]
    horizon = max([2.0] + [2 * t for t in times])
    plot_kinetic_1d(M, fig, horizon=min(horizon, float(args.horizon)), events=times, net=net)


def cmd_kih(args):
    from .kinetic import (
        enumerate_hyperedges,
        greedy_bound,
        hyperedge_bound,
        shatter_function,
        special_events,
        strong_interval_net,
        vc_dimension,
        vc_threshold,
        verify_strong_net,
    )

    inst, text = _load(args)
    M = inst.moving_1d()
    order = M.id_order()
    timeline = special_events(M)
    H = enumerate_hyperedges(M)
    edges = [_sorted_ids(e, order) for e in H.sorted_edges()]
    events = [{"time": event_json(e.time), "tags": sorted(" ".join(map(str, tag)) for tag in e.tags)}
              for e in timeline.events]
    bound = hyperedge_bound(len(M), M.beta)
    if args.action == "enum":
        outputs = {"events": events, "hyperedges": edges}
        metrics = {"n": len(M), "beta": M.beta, "count": len(H), "bound": bound}
        if len(M) <= 12:
            present = set(H.hyperedges)
            missing = [list(s) for k in range(len(M) + 1) for s in combinations(M.ids, k)
                       if frozenset(s) not in present]
            outputs["missing"] = missing
        verdicts = {"hyperedge_bound": len(H) <= bound}
        net_ids = ()
    elif args.action == "net":
        r = Fraction(args.r)
        net = strong_interval_net(M, r, method=args.method, seed=args.seed, H=H)
        ok, miss = verify_strong_net(M, net.members, r, H=H)
        gb = greedy_bound(r, net.heavy_count)
        outputs = {"net": list(net.members), "method": net.method}
        metrics = {"n": len(M), "r": r, "heavy": net.heavy_count, "size": len(net.members), "greedy_bound": gb}
        verdicts = {"verified": ok, "size_within_greedy_bound": len(net.members) <= gb}
        if miss is not None:
            outputs["missed"] = _sorted_ids(miss, order)
        net_ids = net.members
    else:
        vc = vc_dimension(H)
        limit = min(len(M), args.max_m)
        pi = [shatter_function(H, m) for m in range(1, limit + 1)]
        D = vc_threshold(M.beta)
        outputs = {"vc_dimension": vc, "shatter": {str(m): v for m, v in enumerate(pi, 1)}}
        metrics = {"n": len(M), "beta": M.beta, "threshold": D}
        verdicts = {"below_threshold": vc < D, "shatter_monotone": all(a <= b for a, b in zip(pi, pi[1:]))}
        net_ids = ()
    report = io.ReportFile(f"kih {args.action}", _inputs(args, text, r=getattr(args, "r", None)),
                           outputs, metrics, verdicts)
    _kih_figure(args, M, [e.time for e in timeline.events if not e.time.is_exact or e.time.lo > 0], net_ids)
    return report.dumps(), report


def cmd_knet(args):
    from .weaknet import (
        build_weak_net,
        sample_schedule,
        split_diagnostic,
        verify_weak_net,
    )

    inst, text = _load(args)
    P = inst.moving_2d()
    r = Fraction(args.r)
    schedule = None
    if args.net:
        try:
            ndata = io.json.loads(Path(args.net).read_text(encoding="utf-8"))
            if "outputs" in ndata:
                ndata = ndata["outputs"]
            net = net_from_json(P, ndata["net"])
            if "schedule" in ndata:
                schedule = schedule_from_json(ndata["schedule"])
        except io.json.JSONDecodeError as e:
            raise ParseError(f"{args.net}: line {e.lineno} column {e.colno}: {e.msg}") from None
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"{args.net}: malformed net file ({type(e).__name__}: {e})") from None
    else:
        net = build_weak_net(P, r, force_construct=args.force_construct)
    if schedule is None:
        schedule = sample_schedule(P, net, seed=args.seed, horizon=Fraction(args.horizon), count=args.samples)
    outputs = {"net": net_json(net), "schedule": schedule_json(schedule)}
    metrics = {"n": len(P), "r": r, "net_size": net.size, "fallback": net.fallback, "times": len(schedule)}
    verdicts = {}
    failures = []
    if not net.fallback:
        verdicts["first_coordinate_polynomial"] = all(isinstance(line.abscissa, Poly) for line in net.lines)
        metrics["lines"] = len(net.lines)
        metrics["per_line"] = [len(line.height_net) for line in net.lines]
        if args.action == "build":
            verdicts["stage1_strong_net"] = bool(net.stage1.get("verified", False))
            verdicts["line_strong_nets"] = all(line.stats.get("verified", False) for line in net.lines)
    if args.action in ("build", "verify"):
        rep = verify_weak_net(P, net, r, schedule, seed=args.seed, subsets=args.subsets)
        verdicts["weak_net_verified"] = rep.passed
        metrics["checks"] = rep.checks
        failures = rep.failures
    if args.action == "diagnose":
        bad = []
        for t, _tags in schedule:
            ok, where = split_diagnostic(P, net, r, t, details=True)
            if not ok:
                bad.append({"time": t, "halfplane": where})
        verdicts["split_property"] = not bad
        failures = bad
    report = io.ReportFile(
        f"knet {args.action}",
        _inputs(args, text, r=r, horizon=Fraction(args.horizon), samples=args.samples,
                force_construct=args.force_construct, net=io.digest(Path(args.net).read_text()) if args.net else None),
        outputs, metrics, verdicts, failures,
    )
    fig = _figure_path(args)
    if fig:
        from .plotting import plot_weak_net

        plot_weak_net(P, net, Fraction(args.time), fig)
    return report.dumps(), report


# ---------------------------------------------------------------------------
# argument parsing


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    p.add_argument("--out", help="write the report/instance here instead of stdout")
    p.add_argument("--horizon", default="10", help="time-sampling horizon (default 10)")
    p.add_argument("--samples", type=int, default=64, help="random verification times (default 64)")
    p.add_argument("--force-construct", action="store_true", help="build the net even below the fallback threshold")
    p.add_argument("--svg", help="figure path (default: next to --out)")
    p.add_argument("--no-figure", action="store_true", help="do not render a figure")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="kinets", description="Exact selection lemmas and kinetic weak nets.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a seeded random instance")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--mode", default="STATIC", help="STATIC, POLYNOMIAL or RATIONAL")
    g.add_argument("--beta", type=int, default=0)
    g.add_argument("--coef-range", type=int, default=20, help="motion coefficients in [-c, c]")
    g.add_argument("--spread", type=int, default=1000, help="constant terms in [-s, s]")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("select", parents=[common], help="first selection point with depth oracle")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_select)

    rs = sub.add_parser("richsimplex", parents=[common], help="simplex with many certified tuples")
    rs.add_argument("--input", required=True)
    rs.set_defaults(func=cmd_richsimplex)

    k = sub.add_parser("kih", parents=[common], help="kinetic interval hypergraph tools")
    k.add_argument("action", choices=["enum", "net", "vc"])
    k.add_argument("--input", required=True)
    k.add_argument("--r", default="2")
    k.add_argument("--method", default="greedy", choices=["greedy", "sample"])
    k.add_argument("--max-m", type=int, default=12, help="largest m for the shatter function table")
    k.set_defaults(func=cmd_kih)

    w = sub.add_parser("knet", parents=[common], help="kinetic weak nets in the plane")
    w.add_argument("action", choices=["build", "verify", "diagnose"])
    w.add_argument("--input", required=True)
    w.add_argument("--r", default="2")
    w.add_argument("--net", help="net or report file from knet build (verify/diagnose)")
    w.add_argument("--subsets", type=int, default=200, help="seeded subset hulls per time")
    w.add_argument("--time", default="0", help="time of the figure")
    w.set_defaults(func=cmd_knet)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, report = args.func(args)
    except KinetsError as e:
        print(f"error {e.code}: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"error IO: {e}", file=sys.stderr)
        return 2
    if args.out:
        io.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    if report is None:
        return 0
    if not report.passed:
        for name, ok in report.verdicts.items():
            if not ok:
                print(f"verdict failed: {name}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
