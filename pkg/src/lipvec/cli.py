"""Command line front end: ``lipvec <group> <action> --scene FILE ...``.

Exit status: 0 when every check passes, 1 when something is falsified
(the witness is in the report), 2 for input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from .bornology import check_bornological
from .gauge import SpanError, gauge_eval
from .metrization import (
    DEFAULT_DEPTH,
    MAX_DEPTH,
    InvalidChainError,
    chain_from_convex,
    check_axioms,
    check_sandwich,
    dyadic_eval,
    validate_chain,
)
from .numkernel import INF, DimensionError
from .lipstruct import structure_contains
from .plotting import plot_ball
from .scene import SceneError, _set_doc, load_scene, parse_point
from .sets import DEFAULT_CAP, CombinationCapError
from .veccheck import BlackboxError, check_map

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT = 0, 1, 2


def jsonable(obj):
    """Exact values become strings; tuples become lists."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return "inf" if obj == INF else repr(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# command implementations: each returns (exit code, result dict)
# ---------------------------------------------------------------------------

def _gauge_eval(scene, args):
    g = scene.lookup("gauges", args.gauge, "--gauge")
    x = parse_point(args.point, g.dim)
    return EXIT_OK, {"gauge": args.gauge, "point": x, "value": gauge_eval(g, x)}


def _psn_eval(scene, args):
    psn = scene.psn(args.chain, args.strategy)
    x = parse_point(args.point, psn.dim)
    v = dyadic_eval(psn, x)
    return EXIT_OK, {"chain": args.chain, "depth": psn.depth, "strategy": args.strategy,
                     "point": x, "value": v.value, "indices": v.indices,
                     "sentinel": v.is_sentinel}


def _chain_figure(args, chain, levels=None):
    """Write the chain's levels as SVG: to ``--svg``, or next to ``--out`` for planar chains."""
    path = getattr(args, "svg", None)
    if path is None and args.out and chain.dim == 2:
        out = Path(args.out)
        path = str(out.with_suffix(".svg") if out.suffix != ".svg" else out.with_name(out.name + ".svg"))
    if path is None:
        return None
    write_atomic(path, plot_ball(chain, levels))
    return path


def _chain_validate(scene, args):
    chain = scene.lookup("chains", args.chain, "--chain")
    res = validate_chain(chain, mode=args.mode, samples=args.samples, seed=args.seed, cap=args.cap)
    out = {"chain": args.chain, "depth": chain.depth, "mode": args.mode, "status": res.status,
           "certificates": res.kinds, "failed_level": res.failed_level, "witness": res.witness}
    fig = _chain_figure(args, chain)
    if fig:
        out["figure"] = fig
    return (EXIT_FALSIFIED if res.status == "invalid" else EXIT_OK), out


def _chain_from_convex(scene, args):
    U = scene.lookup("sets", args.set, "--set")
    if not U.is_convex_piece:
        raise SceneError("from-convex needs a single-piece set", "--set")
    depth = args.depth or DEFAULT_DEPTH
    chain = chain_from_convex(U, depth)
    res = validate_chain(chain, cap=args.cap)
    out = {"set": args.set, "depth": depth, "status": res.status,
           "levels": [_set_doc(v) for v in chain.levels]}
    fig = _chain_figure(args, chain)
    if fig:
        out["figure"] = fig
    return EXIT_OK, out


def _levels(args, depth):
    if args.level is None:
        return list(range(1, depth + 1))
    if not 1 <= args.level <= depth:
        raise SceneError(f"level must lie in 1..{depth}", "--level")
    return [args.level]


def _sandwich(scene, args):
    psn = scene.psn(args.chain)
    checks = []
    ok = True
    for n in _levels(args, psn.depth):
        r = check_sandwich(psn, n, samples=args.samples, seed=args.seed + n)
        ok &= r.ok
        checks.append({"level": n, "verdict": "pass" if r.ok else "fail", "kind": "sampled",
                       "inner_checked": r.inner_checked, "outer_checked": r.outer_checked,
                       "violations": r.violations[:5]})
    out = {"chain": args.chain, "depth": psn.depth, "checks": checks}
    fig = _chain_figure(args, psn.chain)
    if fig:
        out["figure"] = fig
    return (EXIT_OK if ok else EXIT_FALSIFIED), out


def _axioms(scene, args):
    psn = scene.psn(args.chain)
    r = check_axioms(psn, samples=args.samples, seed=args.seed)
    return (EXIT_OK if r.ok else EXIT_FALSIFIED), {
        "chain": args.chain, "depth": psn.depth, "verdict": "pass" if r.ok else "fail",
        "kind": "sampled", "zero_value": r.zero_value,
        "min_balanced_slack": r.min_balanced_slack,
        "min_subadditive_slack": r.min_subadditive_slack,
        "violations": r.violations[:5]}


def _struct_contains(scene, args):
    L = scene.lookup("structures", args.structure, "--structure")
    d = scene.metric(args.metric, "--metric")
    res = structure_contains(L, d, mode=args.mode, samples=args.samples, seed=args.seed)
    base = L.base[res.base_index].name if res.base_index is not None else None
    return (EXIT_OK if res.contained else EXIT_FALSIFIED), {
        "structure": args.structure, "metric": args.metric, "verdict":
        "contained" if res.contained else "not-contained", "kind": res.kind,
        "alpha": res.alpha, "base": base, "witness": res.witness}


def _cert_doc(c):
    return {"target": c.target, "source": c.source, "verdict": "pass" if c.ok else "fail",
            "kind": c.kind, "constant": c.constant, "grid_constant": c.grid_constant,
            "max_ratio": c.max_ratio, "witness": c.witness}


def _map_check(scene, args):
    f = scene.lookup("maps", args.map, "--map")
    LX = scene.lookup("structures", args.source, "--from")
    LY = scene.lookup("structures", args.target, "--to")
    r = check_map(f, LX, LY, mode=args.mode, samples=args.samples, seed=args.seed)
    out = {"map": args.map, "from": args.source, "to": args.target, "mode": args.mode,
           "verdict": "lipschitz" if r.ok else "not-lipschitz",
           "certificates": [_cert_doc(c) for c in r.certificates]}
    if r.counterexample is not None:
        out["counterexample"] = _cert_doc(r.counterexample)
    return (EXIT_OK if r.ok else EXIT_FALSIFIED), out


def _born_check(scene, args):
    f = scene.lookup("maps", args.map, "--map")
    names = [n.strip() for n in args.disks.split(",") if n.strip()]
    disks = [scene.lookup("disks", n, "--disks") for n in names]
    LY = scene.lookup("structures", args.target, "--to")
    results = check_bornological(f, disks, LY, mode=args.mode, samples=args.samples, seed=args.seed)
    ok = all(r.ok for _, r in results)
    return (EXIT_OK if ok else EXIT_FALSIFIED), {
        "map": args.map, "to": args.target, "mode": args.mode,
        "disks": [{"disk": n, "verdict": "pass" if r.ok else "fail",
                   "certificates": [_cert_doc(c) for c in r.certificates]} for n, r in results]}


def _plot_ball(scene, args):
    levels = [int(v) for v in args.levels.split(",")] if args.levels else None
    chosen = [a for a in ("set", "chain", "gauge") if getattr(args, a)]
    if len(chosen) != 1:
        raise SceneError("give exactly one of --set, --chain, --gauge", "plot ball")
    kind = chosen[0]
    target = scene.lookup(kind + "s", getattr(args, kind), f"--{kind}")
    if kind == "chain" and levels and not all(1 <= n <= target.depth for n in levels):
        raise SceneError(f"levels must lie in 1..{target.depth}", "--levels")
    if kind == "gauge" and levels and min(levels) < 0:
        raise SceneError("levels must be nonnegative", "--levels")
    svg = plot_ball(target, levels, title=getattr(args, kind))
    write_atomic(args.svg, svg)
    return EXIT_OK, {"target": {kind: getattr(args, kind)}, "levels": levels, "figure": args.svg}


COMMANDS = {
    ("gauge", "eval"): _gauge_eval,
    ("psn", "eval"): _psn_eval,
    ("chain", "validate"): _chain_validate,
    ("chain", "from-convex"): _chain_from_convex,
    ("sandwich", "check"): _sandwich,
    ("axioms", "check"): _axioms,
    ("struct", "contains"): _struct_contains,
    ("map", "check"): _map_check,
    ("born", "check"): _born_check,
    ("plot", "ball"): _plot_ball,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipvec",
        description="Exact checks on circled sets, dyadic pseudo-seminorms and Lipschitz maps.",
        epilog="exit status: 0 pass, 1 falsified (witness in the report), 2 input error")
    groups = parser.add_subparsers(dest="group", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", required=True, help="scene JSON file")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--depth", type=int, help=f"override chain depth (1..{MAX_DEPTH})")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="maximum piece combinations per Minkowski sum")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock timing (makes reports non-reproducible)")

    def action(group, name, help_):
        sub = subparsers[group].add_parser(name, parents=[common], help=help_)
        return sub

    subparsers = {}
    for g, h in (("gauge", "Minkowski functionals"), ("psn", "dyadic pseudo-seminorms"),
                 ("chain", "chains of circled sets"), ("sandwich", "level sandwich checks"),
                 ("axioms", "pseudo-seminorm axiom checks"), ("struct", "Lipschitz structures"),
                 ("map", "Lipschitz maps"), ("born", "bornological Lipschitz maps"),
                 ("plot", "figures")):
        subparsers[g] = groups.add_parser(g, help=h).add_subparsers(dest="action", required=True)

    p = action("gauge", "eval", "evaluate a gauge at a point")
    p.add_argument("--gauge", required=True)
    p.add_argument("--point", required=True, help='comma separated, e.g. "1/2,3"')

    p = action("psn", "eval", "evaluate the dyadic pseudo-seminorm of a chain")
    p.add_argument("--chain", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--strategy", choices=("fast", "brute"), default="fast")

    p = action("chain", "validate", "check the doubling condition of a chain")
    p.add_argument("--chain", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--svg", help="figure path (default: beside --out for planar chains)")

    p = action("chain", "from-convex", "build V_n = 2^-n U from a convex set")
    p.add_argument("--set", required=True)
    p.add_argument("--svg", help="figure path (default: beside --out for planar chains)")

    for g in ("sandwich", "axioms"):
        p = action(g, "check", f"{g} check on sampled points")
        p.add_argument("--chain", required=True)
        if g == "sandwich":
            p.add_argument("--level", type=int)
            p.add_argument("--svg", help="figure path (default: beside --out for planar chains)")

    p = action("struct", "contains", "is a metric in a structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")

    p = action("map", "check", "certify or falsify a Lipschitz map")
    p.add_argument("--map", required=True)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")

    p = action("born", "check", "bornological Lipschitz check over disks")
    p.add_argument("--map", required=True)
    p.add_argument("--disks", required=True, help="comma separated disk names")
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")

    p = action("plot", "ball", "SVG of a set, chain levels or gauge sublevel sets")
    p.add_argument("--set")
    p.add_argument("--chain")
    p.add_argument("--gauge")
    p.add_argument("--levels", help="comma separated level indices")
    p.add_argument("--svg", required=True)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"command": f"{args.group} {args.action}",
              "arguments": {k: v for k, v in sorted(vars(args).items())
                            if k not in ("group", "action", "timing") and v is not None},
              "seed": args.seed}
    start = time.perf_counter()
    try:
        if args.depth is not None and not 1 <= args.depth <= MAX_DEPTH:
            raise SceneError(f"depth must lie in 1..{MAX_DEPTH}", "--depth")
        if args.samples < 1:
            raise SceneError("samples must be positive", "--samples")
        scene = load_scene(args.scene, depth=args.depth, cap=args.cap, samples=args.samples,
                           seed=args.seed)
        code, result = COMMANDS[(args.group, args.action)](scene, args)
        report["result"] = result
    except (SceneError, SpanError, DimensionError, InvalidChainError, CombinationCapError,
            BlackboxError, OSError) as exc:
        code = EXIT_INPUT
        report["error"] = {"message": getattr(exc, "message", str(exc)),
                           "location": getattr(exc, "location", None)}
        print(f"lipvec: {exc}", file=sys.stderr)
    report["exit_code"] = code
    report = jsonable(report)
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
