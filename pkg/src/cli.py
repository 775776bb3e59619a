"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 capped or inconclusive, 3 verification violations.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from src.data_handler.formats import state_to_text
from src.graphs.digraph import IntractableInstanceError
from src.network_toolkit import NetworkToolkit
from src.schemas.network_models import WitnessSpec
from src.verification.suites import SUITES

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CAPPED = 2
EXIT_VIOLATIONS = 3


class ToolkitArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors, so they exit with 1 instead of argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _int_list(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{value}'")


def _add_instance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--net", required=True, help="network file")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--state", help="initial state file")
    source.add_argument("--random-state", action="store_true", help="draw a uniform initial state from --seed")
    parser.add_argument("--seed", type=int, help="seed for --random-state")


def build_parser() -> ToolkitArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    parser = ToolkitArgumentParser(
        prog="refractory-networks",
        description="Simulate and analyze refractory threshold networks on random digraphs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[common], help="sample a random digraph")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--c", type=float, required=True, help="mean degree; arc probability is c / n")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)

    construct = commands.add_parser("construct", parents=[common], help="build a witness network and state")
    construct.add_argument("--kind", choices=["nsc", "nsc1", "nscp", "landau", "tree"], required=True)
    construct.add_argument("--length", type=int, help="cycle length (nsc, nsc1, nscp)")
    construct.add_argument("--p", type=int, default=1, help="refractory period (nsc1, nscp, tree)")
    construct.add_argument("--ks", type=_int_list, default=(), help="odd cycle lengths, e.g. 3,5 (landau)")
    construct.add_argument("--depth", type=int, help="tree depth (tree)")
    construct.add_argument("--branching", type=int, help="branching and threshold (tree)")
    construct.add_argument("--out-net", required=True)
    construct.add_argument("--out-state", required=True)

    simulate = commands.add_parser("simulate", parents=[common], help="print a trajectory, one state per line")
    _add_instance_flags(simulate)
    simulate.add_argument("--steps", type=int, required=True)

    detect = commands.add_parser("detect", parents=[common], help="measure transient and attractor length")
    _add_instance_flags(detect)
    detect.add_argument("--cap", type=int, help="step cap (per component with --decomposed)")
    detect.add_argument("--decomposed", action="store_true", help="measure upstream subsystems separately")
    detect.add_argument("--out", help="also write the summary JSON here")

    sweep = commands.add_parser("sweep", parents=[common], help="run a Monte Carlo sweep over (n, c)")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out-records", required=True)
    sweep.add_argument("--out-stats", required=True)
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--progress", action="store_true")

    stats = commands.add_parser("stats", parents=[common], help="recompute cell statistics from records")
    stats.add_argument("--records", required=True)
    stats.add_argument("--out", required=True)

    laws = commands.add_parser("laws", parents=[common], help="estimate random-digraph statistics")
    laws.add_argument("--n", type=int, required=True)
    laws.add_argument("--c", type=float, required=True)
    laws.add_argument("--reps", type=int, required=True)
    laws.add_argument("--seed", type=int, required=True)
    laws.add_argument("--progress", action="store_true")

    verify = commands.add_parser("verify", parents=[common], help="run an invariant suite")
    verify.add_argument("--suite", choices=list(SUITES), required=True)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--cases", type=int, help="number of fuzz cases (props)")
    verify.add_argument("--progress", action="store_true")
    return parser


def _load(toolkit: NetworkToolkit, args: argparse.Namespace):
    if args.random_state and args.seed is None:
        raise ValueError("--random-state needs --seed")
    return toolkit.load_instance(args.net, args.state, args.seed)


def run(args: argparse.Namespace, toolkit: NetworkToolkit) -> int:
    if args.command == "gen":
        graph = toolkit.generate(args.n, args.c, args.seed, args.out)
        print(graph.arc_count)
        return EXIT_OK

    if args.command == "construct":
        spec = WitnessSpec(
            kind=args.kind,
            length=args.length,
            p=args.p,
            ks=args.ks,
            depth=args.depth,
            branching=args.branching,
        )
        net, _ = toolkit.construct(spec, args.out_net, args.out_state)
        print(f"{args.kind}: {net.n} nodes, {net.graph.arc_count} arcs")
        return EXIT_OK

    if args.command == "simulate":
        net, s0 = _load(toolkit, args)
        for state in toolkit.simulate(net, s0, args.steps):
            sys.stdout.write(state_to_text(state))
        return EXIT_OK

    if args.command == "detect":
        net, s0 = _load(toolkit, args)
        summary = toolkit.detect(net, s0, args.cap, args.decomposed)
        print(summary.model_dump_json(indent=2))
        if args.out:
            toolkit.file_handler.write_json(summary, args.out)
        return EXIT_CAPPED if summary.capped else EXIT_OK

    if args.command == "sweep":
        if args.jobs < 1:
            raise ValueError(f"--jobs must be >= 1, got {args.jobs}")
        stats = toolkit.sweep(args.config, args.out_records, args.out_stats, args.jobs, args.progress)
        print(f"{len(stats)} cells written to {args.out_stats}")
        return EXIT_OK

    if args.command == "stats":
        stats = toolkit.stats(args.records, args.out)
        print(f"{len(stats)} cells written to {args.out}")
        return EXIT_OK

    if args.command == "laws":
        report = toolkit.laws(args.n, args.c, args.reps, args.seed, args.progress)
        print(report.model_dump_json(indent=2))
        return EXIT_OK

    kwargs = {"cases": args.cases} if args.suite == "props" and args.cases is not None else {}
    report = toolkit.verify(args.suite, args.seed, args.progress, **kwargs)
    print(f"suite {report.name}: {report.cases} cases, {len(report.violations)} violations")
    for violation in report.violations:
        print(f"  {violation}")
    return EXIT_OK if report.passed else EXIT_VIOLATIONS


def main(argv: Optional[Sequence[str]] = None, toolkit: Optional[NetworkToolkit] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(args, toolkit or NetworkToolkit())
    except IntractableInstanceError as e:
        print(f"Inconclusive: {e}", file=sys.stderr)
        return EXIT_CAPPED
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
