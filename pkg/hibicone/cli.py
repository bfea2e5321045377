"""Command-line interface for hibicone.

This module parses arguments into a RunConfig, dispatches each subcommand
to its pipeline and turns errors into exit codes:
0 success, 1 internal error or failed check, 2 bad input or flags,
3 infeasible request, 4 graph search truncated at its cap.
"""
import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, get_args

from progress.bar import Bar

from hibicone.checks import CheckReport, run_checks
from hibicone.classgroup import lift_class
from hibicone.config import OUTPUT, PARALLEL, SEARCH, ParallelConfig, SearchConfig, load_settings
from hibicone.conic import conic_oracle, enumerate_conic
from hibicone.corpus import CORPUS_NAMES, corpus_poset
from hibicone.errors import (
    CapExceededError,
    CheckFailedError,
    ConfigError,
    HibiError,
    NotAdmissibleError,
)
from hibicone.geometry import signature_table
from hibicone.hasse import SpanningTree, choose_spanning_tree
from hibicone.io import (
    conic_csv,
    conic_document,
    graph_to_dot,
    graph_to_json,
    mutation_document,
    read_poset,
    report_error,
    signature_csv,
    signature_document,
    to_json,
    write_output,
)
from hibicone.mutation import (
    NCCRSet,
    exchange_graph,
    find_admissible_lambda,
    find_left_lambda,
    left_mutation,
    right_mutation,
)
from hibicone.poset import augment
from hibicone.segre import SegreSpec, in_L_tilde, l_tilde, nccr_set, segre_poset, segre_tree
from hibicone.utils import BoxKind, OutputFormat, SignatureMethod, parse_int_list

logger = logging.getLogger(__name__)

Subcommand = Literal["conic", "fsig", "nccr", "mutate", "graph", "check"]

SEGRE_ONLY = ("nccr", "mutate", "graph")
CSV_SUBCOMMANDS = ("conic", "fsig")


@dataclass(frozen=True)
class RunConfig:
    """One validated command-line request."""

    subcommand: Subcommand
    poset_path: str | None = None
    segre: tuple[int, ...] | None = None
    segre_nccr: tuple[int, int] | None = None
    tree: tuple[str, ...] | None = None
    output_format: OutputFormat = "json"
    method: SignatureMethod = "alcove"
    verify: bool = False
    box: BoxKind = "tight"
    at: tuple[int, ...] | None = None
    chars: tuple[tuple[int, ...], ...] | None = None
    left: bool = False
    cap: int = SEARCH.graph_cap
    jobs: int = PARALLEL.jobs
    corpus: bool = False

    def __post_init__(self) -> None:
        sources = sum(s is not None for s in (self.poset_path, self.segre, self.segre_nccr))
        if self.corpus:
            if self.subcommand != "check":
                raise ConfigError("--corpus is only valid for check")
            if sources:
                raise ConfigError("--corpus takes no poset source")
        elif sources != 1:
            raise ConfigError(
                "Give exactly one poset source: a poset file, --segre or --segre-nccr"
            )
        if self.subcommand in SEGRE_ONLY and self.poset_path is not None:
            raise ConfigError(f"{self.subcommand} needs a Segre product (--segre or --segre-nccr)")
        if self.output_format == "dot" and self.subcommand != "graph":
            raise ConfigError("DOT output is only valid for graph")
        if self.output_format == "csv" and self.subcommand not in CSV_SUBCOMMANDS:
            raise ConfigError("CSV output is only valid for conic and fsig")
        if self.subcommand == "mutate" and self.at is None:
            raise ConfigError("mutate needs --at")
        if self.cap < 1 or self.jobs < 1:
            raise ConfigError("--cap and --jobs must be positive")

    def segre_spec(self) -> SegreSpec:
        if self.segre_nccr is not None:
            return SegreSpec.nccr(*self.segre_nccr)
        if self.segre is None:
            raise ConfigError(f"{self.subcommand} needs a Segre product")
        return SegreSpec(self.segre)

    def source_label(self) -> str:
        if self.poset_path is not None:
            return Path(self.poset_path).stem
        return f"segre-{self.segre_spec().label()}"


def parse_segre_nccr(text: str) -> tuple[int, int]:
    """
    Parse "r=R,t=T".

    Raises:
        ConfigError: If the text is not of that form
    """
    values: dict[str, int] = {}
    try:
        for chunk in text.split(","):
            key, value = chunk.split("=")
            values[key.strip()] = int(value)
    except ValueError as e:
        raise ConfigError(f"--segre-nccr expects r=R,t=T, got {text!r}") from e
    if set(values) != {"r", "t"}:
        raise ConfigError(f"--segre-nccr expects r=R,t=T, got {text!r}")
    return values["r"], values["t"]


def parse_characters(text: str) -> tuple[tuple[int, ...], ...]:
    """Parse semicolon-separated characters such as "0,0;1,0"."""
    try:
        return tuple(parse_int_list(chunk) for chunk in text.split(";") if chunk.strip())
    except ValueError as e:
        raise ConfigError(f"Cannot read characters {text!r}") from e


def _ints(text: str | None, flag: str) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return parse_int_list(text)
    except ValueError as e:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}") from e


def _load_tree(config: RunConfig) -> SpanningTree:
    """The augmented poset of the request with its spanning tree."""
    spec = None
    if config.poset_path is not None:
        ap = augment(read_poset(config.poset_path))
    else:
        spec = config.segre_spec()
        ap = augment(segre_poset(spec))
    if config.tree is not None:
        return choose_spanning_tree(ap, [ap.parse_edge_ref(token) for token in config.tree])
    if spec is not None:
        return segre_tree(ap, spec)
    return choose_spanning_tree(ap)


def _run_conic(config: RunConfig) -> str:
    tree = _load_tree(config)
    classes = enumerate_conic(tree)
    verdicts = None
    if config.verify:
        verdicts = {cls.coords: conic_oracle(lift_class(cls), tree.poset) for cls in classes}
        if not all(verdicts.values()):
            raise CheckFailedError("The LP oracle rejects an enumerated conic class")
    if config.output_format == "csv":
        return conic_csv(classes, verdicts)
    document = {
        "poset": config.source_label(),
        "tree": tree.labels(),
        "cotree": [tree.poset.edge_label(j) for j in tree.cotree_edges],
        "count": len(classes),
        "classes": conic_document(classes, verdicts=verdicts),
    }
    return to_json(document)


def _run_fsig(config: RunConfig) -> str:
    table = signature_table(_load_tree(config), config.method, config.jobs)
    if config.output_format == "csv":
        return signature_csv(table)
    return to_json({"poset": config.source_label(), **signature_document(table)})


def _run_nccr(config: RunConfig) -> str:
    spec = config.segre_spec()
    chars = nccr_set(spec)
    ap = augment(segre_poset(spec))
    conic = [list(cls.coords) for cls in enumerate_conic(segre_tree(ap, spec))]
    document = {
        "r": spec.r,
        "t": spec.t,
        "L": [list(c) for c in chars],
        "conic": conic,
        "L_tilde": [list(c) for c in l_tilde(spec)],
    }
    return to_json(document)


def _run_mutate(config: RunConfig) -> str:
    spec = config.segre_spec()
    start = NCCRSet.of(config.chars if config.chars is not None else nccr_set(spec))
    chi = config.at or ()
    if not in_L_tilde(chi, spec):
        logger.warning("Character %s lies outside L̃", chi)
    finder = find_left_lambda if config.left else find_admissible_lambda
    admissible = finder(start, chi, spec)
    if admissible is None:
        side = "left" if config.left else "right"
        raise NotAdmissibleError(f"No admissible λ for a {side} mutation", chi)
    mutate = left_mutation if config.left else right_mutation
    result = mutate(start, chi, admissible.subgroup, spec)
    logger.info("Mutation at %s gives ν = %s", chi, admissible.target)
    return to_json(mutation_document(start, chi, admissible, result, config.left))


def _run_graph(config: RunConfig) -> tuple[int, str]:
    spec = config.segre_spec()
    graph = exchange_graph(NCCRSet.of(nccr_set(spec)), spec, config.cap, config.jobs)
    text = graph_to_dot(graph) if config.output_format == "dot" else to_json(graph_to_json(graph))
    if graph.truncated:
        report_error(
            CapExceededError.partial(
                f"Search stopped at {config.cap} vertices; output is partial", "exchange graph"
            )
        )
        return CapExceededError.exit_code, text
    return 0, text


def _check_corpus(config: RunConfig) -> list[CheckReport]:
    reports = []
    with Bar(
        "Checking...", max=len(CORPUS_NAMES), suffix="%(percent)d%% | Elapsed: %(elapsed)ds"
    ) as bar:
        for name in CORPUS_NAMES:
            reports.append(run_checks(augment(corpus_poset(name)), name, config.jobs, config.box))
            bar.next()
    return reports


def _run_check(config: RunConfig) -> tuple[int, str]:
    if config.corpus:
        reports = _check_corpus(config)
    else:
        tree = _load_tree(config)
        reports = [
            run_checks(tree.poset, config.source_label(), config.jobs, config.box, tree)
        ]
    text = to_json([report.to_dict() for report in reports])
    failed = [report.poset for report in reports if not report.passed]
    if failed:
        report_error(CheckFailedError(f"Checks failed on: {', '.join(failed)}"))
        return CheckFailedError.exit_code, text
    return 0, text


def run(config: RunConfig) -> tuple[int, str]:
    """
    Execute one request.

    Args:
        config: Validated request

    Returns:
        Exit code and output document (partial on exit code 4)
    """
    try:
        match config.subcommand:
            case "conic":
                return 0, _run_conic(config)
            case "fsig":
                return 0, _run_fsig(config)
            case "nccr":
                return 0, _run_nccr(config)
            case "mutate":
                return 0, _run_mutate(config)
            case "graph":
                return _run_graph(config)
            case "check":
                return _run_check(config)
    except HibiError as error:
        report_error(error)
        return error.exit_code, ""
    raise ConfigError(f"Unknown subcommand {config.subcommand!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("poset", nargs="?", help="Poset JSON file")
    common.add_argument("--segre", help="Segre product as chain lengths, e.g. 1,1,1")
    common.add_argument("--segre-nccr", help="Gorenstein Segre product as r=R,t=T")
    common.add_argument("--tree", help="Spanning tree edges, e.g. e2,e3,e4 or p1-p2")
    common.add_argument(
        "--format", choices=get_args(OutputFormat), default=OUTPUT.default_format
    )
    common.add_argument("--jobs", type=int, help="Worker processes (default: HIBI_JOBS or 1)")
    common.add_argument("-o", "--output", help="Write the document to a file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug messages")
    common.add_argument("-q", "--quiet", action="store_true", help="Log errors only")

    parser = argparse.ArgumentParser(
        prog="hibicone",
        description="Conic classes, F-signatures and NCCR mutations of Hibi rings.",
    )
    commands = parser.add_subparsers(dest="subcommand", required=True)

    conic = commands.add_parser("conic", parents=[common], help="List conic classes and cells")
    conic.add_argument("--verify", action="store_true", help="Confirm each class with the LP")

    fsig = commands.add_parser("fsig", parents=[common], help="Generalized F-signatures")
    fsig.add_argument("--method", choices=get_args(SignatureMethod), default="alcove")

    commands.add_parser("nccr", parents=[common], help="The NCCR character set L and L̃")

    mutate = commands.add_parser("mutate", parents=[common], help="Mutate L at a character")
    mutate.add_argument("--at", required=True, help="Character to mutate at, e.g. 1,0")
    mutate.add_argument("--set", help="Character set, e.g. '0,0;1,0;0,1;1,1' (default: L)")
    mutate.add_argument("--left", action="store_true", help="Left instead of right mutation")

    graph = commands.add_parser("graph", parents=[common], help="Exchange graph of mutations")
    graph.add_argument("--cap", type=int, help="Vertex cap (default: HIBI_GRAPH_CAP or 10000)")

    check = commands.add_parser("check", parents=[common], help="Run the property suite")
    check.add_argument("--corpus", action="store_true", help="Check every corpus poset")
    check.add_argument("--box", choices=get_args(BoxKind), default="tight")
    return parser


def config_from_args(
    args: argparse.Namespace,
    search: SearchConfig = SEARCH,
    parallel: ParallelConfig = PARALLEL,
) -> RunConfig:
    """
    Build a RunConfig; flags override environment settings.

    Raises:
        ConfigError: If a flag value or combination is invalid
    """
    return RunConfig(
        subcommand=args.subcommand,
        poset_path=args.poset,
        segre=_ints(args.segre, "--segre"),
        segre_nccr=parse_segre_nccr(args.segre_nccr) if args.segre_nccr else None,
        tree=tuple(t for t in args.tree.split(",") if t.strip()) if args.tree else None,
        output_format=args.format,
        method=getattr(args, "method", "alcove"),
        verify=getattr(args, "verify", False),
        box=getattr(args, "box", "tight"),
        at=_ints(getattr(args, "at", None), "--at"),
        chars=parse_characters(args.set) if getattr(args, "set", None) else None,
        left=getattr(args, "left", False),
        cap=search.graph_cap if getattr(args, "cap", None) is None else args.cap,
        jobs=parallel.jobs if args.jobs is None else args.jobs,
        corpus=getattr(args, "corpus", False),
    )


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.INFO
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    try:
        search, parallel = load_settings()
        config = config_from_args(args, search, parallel)
    except HibiError as error:
        report_error(error)
        return error.exit_code
    code, text = run(config)
    if text:
        write_output(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
