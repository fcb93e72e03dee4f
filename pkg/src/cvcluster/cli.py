"""Command-line front door.

Four subcommands::

    cvcluster run <script.cvq> [--engine ledger|covariance] [--r R] [--seed S]
    cvcluster claims [--only ID]
    cvcluster sweep (--state NAME:SIZE | --script FILE) --combo C [...] --r LIST
    cvcluster graph <edges.txt> --protocol NAME [protocol args]

Exit codes are a stable contract: 0 when everything passed, 1 when an
assertion, claim or protocol target failed, 2 for usage, I/O and parse
errors.  All output is deterministic given the inputs and seed; the only
environment influence is ``NO_COLOR``, which disables the PASS/FAIL
coloring that is otherwise applied on a terminal.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import claims as claims_suite
from . import graphs, ledger, protocols, scenario
from .errors import CvClusterError
from .scenario import ParseError, ScenarioRuntimeError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

STATE_BUILDERS = ("chain", "star", "ringstar", "bschain", "ghz")


def _fail_usage(message: str) -> int:
    print(message, file=sys.stderr)
    return EXIT_USAGE


def _paint(status: str) -> str:
    if not sys.stdout.isatty() or os.environ.get("NO_COLOR"):
        return status
    code = "32" if status == "PASS" else "31"
    return f"\x1b[{code}m{status}\x1b[0m"


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _cmd_run(args) -> int:
    if args.engine == scenario.COVARIANCE and args.r is None:
        return _fail_usage("covariance engine requires --r")
    try:
        report = scenario.run_file(args.script, engine=args.engine, r=args.r, seed=args.seed)
    except OSError as err:
        return _fail_usage(str(err))
    except ParseError as err:
        return _fail_usage(err.render(args.script))
    except ScenarioRuntimeError as err:
        return _fail_usage(err.render(args.script))
    sys.stdout.write(report.render())
    return EXIT_PASS if report.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# claims
# ---------------------------------------------------------------------------


def _cmd_claims(args) -> int:
    try:
        outcome = claims_suite.run_claims(only=args.only)
    except ValueError as err:
        return _fail_usage(str(err))
    rows = [
        (res.claim_id, res.status, res.value, res.tolerance, res.statement)
        for res in outcome.results
    ]
    headers = ("claim", "status", "value", "tolerance", "statement")
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) for i in range(4)
    ]
    fmt = "  ".join(f"{{{i}:<{w}}}" for i, w in enumerate(widths)) + "  {4}"
    print(fmt.format(*headers))
    print(fmt.format(*("-" * w for w in widths), "-" * len(headers[4])))
    for res in outcome.results:
        line = fmt.format(res.claim_id, res.status, res.value, res.tolerance, res.statement)
        if sys.stdout.isatty():
            line = line.replace(res.status, _paint(res.status), 1)
        print(line)
        if args.only:
            for detail in res.details:
                print(f"    {detail}")
    passed = sum(res.passed for res in outcome.results)
    print(f"{passed}/{len(outcome.results)} claims passed in {outcome.elapsed:.2f}s")
    return EXIT_PASS if outcome.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _build_state(spec: str) -> ledger.Register:
    name, _, size_text = spec.partition(":")
    try:
        size = int(size_text)
    except ValueError:
        raise ValueError(f"state spec must be name:size, got {spec!r}") from None
    if name == "chain":
        return protocols.build_graph_state(graphs.chain(size))
    if name == "star":
        return protocols.build_graph_state(graphs.star(size))
    if name == "ringstar":
        # size is the family index m: ring of 2m vertices, hub on the evens
        return protocols.build_graph_state(graphs.ring_star(2 * size))
    if name == "bschain":
        return protocols.build_bs_chain(size)
    if name == "ghz":
        return protocols.build_ghz_optics(size)
    raise ValueError(
        f"unknown state {name!r}; choose from {', '.join(STATE_BUILDERS)}"
    )


def _parse_r_list(text: str) -> list[float]:
    if not text.strip():
        return []
    try:
        return [float(piece) for piece in text.split(",")]
    except ValueError:
        raise ValueError(f"--r wants comma-separated reals, got {text!r}") from None


def _cmd_sweep(args) -> int:
    try:
        if args.script is not None:
            with open(args.script, "r", encoding="utf-8") as fh:
                text = fh.read()
            scn = scenario.parse(text, source=args.script)
            reg = scenario.ledger_register(scn, source=args.script)
        else:
            reg = _build_state(args.state)
        rs = _parse_r_list(args.r)
        rows = []
        for raw in args.combo:
            terms = scenario.parse_combo(raw)
            rendered = scenario.render_combo(terms)
            expr = reg.combine(scenario.combo_parts(terms))
            for rv in rs:
                rows.append((rendered, rv, ledger.variance_formula(expr, rv)))
    except OSError as err:
        return _fail_usage(str(err))
    except ParseError as err:
        source = args.script if args.script is not None else "<combo>"
        return _fail_usage(err.render(source))
    except (CvClusterError, ValueError) as err:
        return _fail_usage(str(err))
    rows.sort(key=lambda row: (row[0], row[1]))
    csv = "combo,r,variance\n" + "".join(
        f"{combo},{scenario.fmt_num(rv)},{value:.12g}\n" for combo, rv, value in rows
    )
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(csv)
        except OSError as err:
            return _fail_usage(str(err))
    else:
        sys.stdout.write(csv)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# graph
# ---------------------------------------------------------------------------


def _fmt_weight(value: float) -> str:
    # report display only: trims solver float noise, never fed back in
    text = f"{value:.10g}"
    return text[:-2] if text.endswith(".0") else text


def _combo_text(parts) -> str:
    bits = []
    for i, (coeff, mode, kind) in enumerate(parts):
        term = f"{_fmt_weight(abs(float(coeff)))}*{kind}{mode}"
        if i == 0:
            bits.append(term if coeff >= 0 else f"-{term}")
        else:
            bits.append(f"{'+' if coeff >= 0 else '-'} {term}")
    return " ".join(bits)


def _render_protocol_report(report, graph: graphs.Graph) -> str:
    lines = [
        f"protocol: {report.protocol}",
        f"graph: {graph.n_vertices} vertices, {len(graph.edges)} edges",
    ]
    if report.flavor:
        lines.append(f"flavor: {report.flavor}")
    if report.measurements:
        measured = " ".join(f"{kind}{mode}" for mode, kind in report.measurements)
        lines.append(f"measurements: {measured}")
    if report.displacements:
        count = len(report.displacements)
        plural = "s" if count != 1 else ""
        lines.append(f"displacements: {count} feed-forward correction{plural}")
    if report.success:
        lines.append("status: success")
        if report.combos:
            lines.append("nullifiers:")
            lines += [f"  {_combo_text(parts)}" for parts in report.combos]
        if report.partition:
            rendered = " | ".join(
                "{" + ",".join(str(m) for m in block) + "}" for block in report.partition
            )
            lines.append(f"partition: {rendered}")
    else:
        lines.append("status: failed")
        if report.rank_info is not None:
            equations, rank = report.rank_info
            lines.append(
                f"rank: {rank} of {equations} record equations "
                f"(deficiency {equations - rank})"
            )
    if report.details:
        lines.append(f"details: {report.details}")
    return "\n".join(lines) + "\n"


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(piece) for piece in text.split(",")]
    except ValueError:
        raise ValueError(f"{flag} wants comma-separated integers, got {text!r}") from None


def _cmd_graph(args) -> int:
    def need(*flags):
        missing = [f"--{name}" for name in flags if getattr(args, name) is None]
        if missing:
            raise ValueError(
                f"protocol {args.protocol} requires {' and '.join(missing)}"
            )

    try:
        graph = graphs.load_edge_list(args.edges)
        reg = protocols.build_graph_state(graph)
        if args.protocol == "reduce-path":
            need("a", "b")
            report = protocols.reduce_graph_to_path(reg, graph, args.a, args.b)
        elif args.protocol == "star-ghz":
            report = protocols.star_to_ghz(reg, graph)
        elif args.protocol == "ring-star-ghz":
            measured = None
            if args.measured is not None:
                measured = _parse_int_list(args.measured, "--measured")
            report = protocols.ring_star_to_ghz(reg, graph, measured=measured, flavor=args.flavor)
        elif args.protocol == "extract-pair":
            need("j", "k")
            outer = protocols.NextNeighbor()
            if args.outer_left is not None or args.outer_right is not None:
                outer = protocols.CustomOuter(
                    left=tuple(_parse_int_list(args.outer_left, "--outer-left"))
                    if args.outer_left is not None else (),
                    right=tuple(_parse_int_list(args.outer_right, "--outer-right"))
                    if args.outer_right is not None else (),
                )
            report = protocols.extract_pair(reg, graph, args.j, args.k, outer)
        elif args.protocol == "disconnect":
            need("j")
            report = protocols.disconnect(reg, graph, args.j)
        else:  # disentangle
            report = protocols.disentangle_even(reg, graph)
    except OSError as err:
        return _fail_usage(str(err))
    except (CvClusterError, ValueError) as err:
        return _fail_usage(str(err))
    sys.stdout.write(_render_protocol_report(report, graph))
    return EXIT_PASS if report.success else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvcluster",
        description="Continuous-variable cluster-state toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    run_parser = sub.add_parser("run", help="execute a .cvq scenario script")
    run_parser.add_argument("script", help="path to the script")
    run_parser.add_argument(
        "--engine", choices=(scenario.LEDGER, scenario.COVARIANCE),
        default=scenario.LEDGER,
        help="exact symbolic engine (default) or numeric Gaussian engine",
    )
    run_parser.add_argument("--r", type=float, default=None,
                            help="squeezing parameter (required for covariance)")
    run_parser.add_argument("--seed", type=int, default=None,
                            help="seed for simulated measurement outcomes")

    claims_parser = sub.add_parser("claims", help="run the built-in claims suite")
    claims_parser.add_argument("--only", metavar="ID", default=None,
                               help="run one claim and show its detail rows")

    sweep_parser = sub.add_parser("sweep", help="variance-vs-squeezing CSV")
    source = sweep_parser.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--state", metavar="NAME:SIZE",
        help="built-in state: chain:N, star:LEAVES, ringstar:M (ring of 2M), "
             "bschain:N, ghz:N",
    )
    source.add_argument("--script", help="take the state a .cvq script builds")
    sweep_parser.add_argument("--combo", action="append", required=True,
                              metavar="TERMS", help="combination, e.g. '1*y1 - 1*x2'")
    sweep_parser.add_argument("--r", default="", metavar="LIST",
                              help="comma-separated squeezing values "
                                   "(empty: header-only CSV)")
    sweep_parser.add_argument("--output", "-o", default=None, help="write CSV here")

    graph_parser = sub.add_parser("graph", help="run a protocol on an edge-list graph")
    graph_parser.add_argument("edges", help="edge-list file: one 'a b' pair per line")
    graph_parser.add_argument(
        "--protocol", required=True,
        choices=("reduce-path", "star-ghz", "ring-star-ghz", "extract-pair",
                 "disconnect", "disentangle"),
    )
    graph_parser.add_argument("--a", type=int, default=None, help="path start vertex")
    graph_parser.add_argument("--b", type=int, default=None, help="path end vertex")
    graph_parser.add_argument("--j", type=int, default=None, help="pair / cut position")
    graph_parser.add_argument("--k", type=int, default=None, help="pair position")
    graph_parser.add_argument("--measured", default=None, metavar="LIST",
                              help="ring vertices to measure (default: the hub's spokes)")
    graph_parser.add_argument("--flavor", choices=("total-momentum", "total-position"),
                              default="total-momentum")
    graph_parser.add_argument("--outer-left", default=None, metavar="LIST",
                              help="helper positions left of the pair")
    graph_parser.add_argument("--outer-right", default=None, metavar="LIST",
                              help="helper positions right of the pair")
    return parser


_COMMANDS = {
    "run": _cmd_run,
    "claims": _cmd_claims,
    "sweep": _cmd_sweep,
    "graph": _cmd_graph,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.subcommand](args)


if __name__ == "__main__":
    sys.exit(main())
