"""Command-line entry point.

    digiwave experiment <name> [--set key=value]... [--out DIR] [--gnuplot]
    digiwave solve --config FILE --out FILE [--gnuplot]
    digiwave topology check <file|catalog-name> [--sphere N] [--manifold N]
                            [--contractible] [--orientable [BOOL]] [--euler [INT]]
    digiwave catalog list

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or validation error.
The default output directory for experiments comes from ``DIGIWAVE_OUT``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import analysis, topology
from .catalog import catalog, names, resolve_graph
from .config import ConfigError, load_config, parse_override, problem_from_config
from .experiments import PRESETS, default_out_dir, run_experiment
from .graph import euler_characteristic
from .wave import SchemeError, solve

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="digiwave", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    exp = sub.add_parser("experiment", help="run a preset experiment")
    exp.add_argument("name", choices=sorted(PRESETS))
    exp.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config entry, e.g. steps=200 or f0.4=5")
    exp.add_argument("--out", default=None, help="output directory (default: $DIGIWAVE_OUT or .)")
    exp.add_argument("--gnuplot", action="store_true", help="write whitespace-separated .dat trace")

    sol = sub.add_parser("solve", help="solve a problem described by a JSON config")
    sol.add_argument("--config", required=True)
    sol.add_argument("--out", required=True, help="trace file to write")
    sol.add_argument("--gnuplot", action="store_true")

    top = sub.add_parser("topology", help="digital topology recognizers")
    top_sub = top.add_subparsers(dest="topology_command", required=True)
    chk = top_sub.add_parser("check", help="check properties of a graph file or catalog entry")
    chk.add_argument("target", nargs="+", help="graph file or catalog name ('catalog NAME' also accepted)")
    chk.add_argument("--sphere", type=int, action="append", default=[], metavar="N")
    chk.add_argument("--manifold", type=int, action="append", default=[], metavar="N")
    chk.add_argument("--contractible", action="store_true")
    chk.add_argument("--orientable", nargs="?", const="report", default=None, metavar="BOOL",
                     help="report orientability, or check it equals BOOL")
    chk.add_argument("--euler", nargs="?", const="report", default=None, metavar="INT",
                     help="report the Euler characteristic, or check it equals INT")
    chk.add_argument("--max-points", type=int, default=topology.DEFAULT_MAX_POINTS,
                     help="size cap for exact contractibility")

    cat = sub.add_parser("catalog", help="catalog of digital spaces")
    cat_sub = cat.add_subparsers(dest="catalog_command", required=True)
    cat_sub.add_parser("list", help="list catalog entries")
    return parser


def cmd_experiment(args) -> int:
    overrides = [parse_override(o) for o in args.overrides]
    result = run_experiment(args.name, overrides, args.out or default_out_dir(), gnuplot=args.gnuplot)
    for line in result.report:
        print(line)
    for path in result.files:
        logger.info("wrote %s", path)
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_solve(args) -> int:
    cfg, base = load_config(args.config)
    problem = problem_from_config(cfg, base)
    trace = solve(problem)
    parent = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(parent, exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        trace.to_csv(fh, gnuplot=args.gnuplot)
    rep = analysis.conservation_report(trace)
    print(f"steps={trace.steps} A={rep.a!r} max_dev={rep.max_dev!r}")
    return EXIT_OK


def cmd_topology_check(args) -> int:
    target = args.target
    if len(target) == 2 and target[0] == "catalog":
        target = target[1:]
    if len(target) != 1:
        raise ConfigError(f"expected one target, got {' '.join(args.target)!r}")
    g = resolve_graph(target[0])
    cap = args.max_points
    ok = True

    def verdict(label: str, passed: bool) -> None:
        nonlocal ok
        ok &= passed
        print(f"{label}: {'PASS' if passed else 'FAIL'}")

    if args.contractible:
        verdict("contractible", topology.is_contractible(g, cap))
    for n in args.sphere:
        verdict(f"sphere({n})", topology.is_n_sphere(g, n, cap))
    for n in args.manifold:
        verdict(f"manifold({n})", topology.is_n_manifold(g, n, cap))
    if args.orientable is not None:
        try:
            value = topology.is_orientable(g, cap)
        except ValueError as exc:
            print(f"orientable: FAIL ({exc})")
            ok = False
        else:
            print(f"orientable: {str(value).lower()}")
            if args.orientable != "report":
                verdict("orientable", value == _bool(args.orientable))
    if args.euler is not None:
        chi = euler_characteristic(g)
        print(f"euler: {chi}")
        if args.euler != "report":
            verdict("euler", chi == int(args.euler))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_catalog_list(args) -> int:
    for name in names():
        e = catalog(name)
        extra = "" if e.orientable is None else f" orientable={str(e.orientable).lower()}"
        print(f"{name}: {e.kind}({e.dimension}) points={e.n_points} edges={e.graph.n_edges} euler={e.euler}{extra}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handlers = {
        "experiment": cmd_experiment,
        "solve": cmd_solve,
        "topology": cmd_topology_check,
        "catalog": cmd_catalog_list,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, SchemeError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"digiwave: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
