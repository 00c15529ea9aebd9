"""Command-line client of the laboratory.

Subcommands call the same handlers the HTTP routes use; ``serve``
starts the HTTP application itself.  Exit codes: 0 success, 1 invalid
input or configuration, 2 runtime failure (density floor breach),
3 requested counterexample sign not reproduced.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, csvio
from .config import GRAMMAR_VERSION, ConfigError
from .counterexamples import SearchResult, integral_counterexample
from .service import handlers
from .service.schemas import (
    ConfigRequest,
    CounterexampleRequest,
    SearchRequest,
    ViscosityRequest,
)
from .solver import DensityFloorError

__all__ = ["main", "entrypoint"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_NO_COUNTEREXAMPLE = 3


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the validation code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _vector_arg(raw: str):
    try:
        return [float(p) for p in raw.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {raw!r}") from None


def _matrix_arg(raw: str):
    rows = [r for r in raw.split(";") if r.strip()]
    return [_vector_arg(r) for r in rows]


def _build_parser() -> _Parser:
    parser = _Parser(prog="multifluid",
                     description="numerical laboratory for barotropic "
                                 "viscous compressible multi-fluid flows")
    parser.add_argument("--version", action="version",
                        version=f"multifluid {__version__} "
                                f"(config grammar {GRAMMAR_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    sim = sub.add_parser("simulate", help="integrate a configured flow")
    sim.add_argument("--config", required=True, help="configuration file")
    sim.add_argument("--out", default=None,
                     help="output directory (overrides [output] directory)")

    cex = sub.add_parser("counterexample",
                         help="pressure-law non-monotonicity constructions")
    cex.add_argument("--case", required=True,
                     choices=("tilde", "total", "integral", "search"))
    cex.add_argument("--construction", choices=("tilde", "total"),
                     default="tilde",
                     help="state pair used by the integral case")
    cex.add_argument("--m1", type=float, default=2.0,
                     help="heavier molar mass (default 2)")
    cex.add_argument("--m2", type=float, default=1.0,
                     help="lighter molar mass (default 1)")
    cex.add_argument("--gamma", type=float, default=2.0,
                     help="heat-capacity ratio (default 2)")
    cex.add_argument("--ratio", type=float, default=None,
                     help="density ratio for the total case")
    cex.add_argument("--weight", type=_vector_arg, default=None,
                     help="density weights for integral/search, e.g. '1,1'")
    cex.add_argument("--measure", type=float, default=1.0,
                     help="two-cell domain measure (default 1)")
    cex.add_argument("--m-low", type=float, default=1.01)
    cex.add_argument("--m-high", type=float, default=100.0)
    cex.add_argument("--gamma-low", type=float, default=1.05)
    cex.add_argument("--gamma-high", type=float, default=5.0)
    cex.add_argument("--samples", type=int, default=1000,
                     help="search draws (default 1000)")
    cex.add_argument("--seed", type=int, default=0, help="search seed")
    cex.add_argument("--csv", default=None,
                     help="also write the report as a CSV file")

    adi = sub.add_parser("adiabat", help="tabulate a closed-volume isentrope")
    adi.add_argument("--config", required=True, help="configuration file "
                     "with [mixture] and [adiabat] sections")
    adi.add_argument("--out", default=None,
                     help="CSV file (default: table to stdout)")

    vis = sub.add_parser("viscosity",
                         help="mixture viscosity matrices at one composition")
    vis.add_argument("--mu", type=_vector_arg, required=True,
                     help="pure-constituent viscosities, e.g. '4,1'")
    vis.add_argument("--xi", type=_vector_arg, required=True,
                     help="mass concentrations, e.g. '0.5,0.5'")
    vis.add_argument("--rule", choices=("simple", "exponential"),
                     default="simple")
    vis.add_argument("--empiric-alpha", type=_matrix_arg, default=None,
                     help="exponential-rule matrix, rows split by ';'")
    vis.add_argument("--empiric-beta", type=_matrix_arg, default=None)
    vis.add_argument("--second", type=_matrix_arg, default=None,
                     help="second viscosity matrix, rows split by ';'")

    srv = sub.add_parser("serve", help="start the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _print_matrix(label: str, rows) -> None:
    print(label)
    for row in rows:
        print("  " + " ".join(csvio.format_value(v) for v in row))


def _cmd_simulate(args) -> int:
    with open(args.config, encoding="utf-8") as handle:
        text = handle.read()
    response = handlers.simulate(ConfigRequest(config=text))
    directory = args.out if args.out is not None else response.directory
    paths = csvio.write_documents(
        directory, [(doc.name, doc.content) for doc in response.documents])
    print(f"steps {response.steps}")
    print(f"final_time {csvio.format_value(response.final_time)}")
    for index, mass in enumerate(response.masses):
        print(f"mass_{index + 1} {csvio.format_value(mass)}")
    print(f"energy {csvio.format_value(response.energy)}")
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def _print_search(result: SearchResult) -> None:
    print(f"found {str(result.found).lower()}")
    print(f"draws {result.draws}")
    if result.found:
        print(f"case {result.case}")
        print(f"m1 {csvio.format_value(result.m1)}")
        print(f"m2 {csvio.format_value(result.m2)}")
        print(f"gamma {csvio.format_value(result.gamma)}")
        if result.ratio is not None:
            print(f"ratio {csvio.format_value(result.ratio)}")
        print(f"value {csvio.format_value(result.value)}")


def _cmd_counterexample(args) -> int:
    if args.case == "search":
        if args.weight is None or len(args.weight) != 2:
            raise ValueError("search needs --weight with two entries")
        request = SearchRequest(weight=tuple(args.weight), m_low=args.m_low,
                                m_high=args.m_high, gamma_low=args.gamma_low,
                                gamma_high=args.gamma_high,
                                samples=args.samples, seed=args.seed)
        response = handlers.counterexample_search(request)
        result = SearchResult(found=response.found, draws=response.draws,
                              weight=response.weight, m1=response.m1,
                              m2=response.m2, gamma=response.gamma,
                              case=response.case, ratio=response.ratio,
                              value=response.value)
        _print_search(result)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(csvio.search_csv(result))
            print(f"wrote {args.csv}")
        return EXIT_OK if response.found else EXIT_NO_COUNTEREXAMPLE

    base_case = args.construction if args.case == "integral" else args.case
    report = handlers.build_report(CounterexampleRequest(
        case=base_case, m1=args.m1, m2=args.m2, gamma=args.gamma,
        ratio=args.ratio))
    fields = [("case", report.case), ("m1", report.m1), ("m2", report.m2),
              ("gamma", report.gamma), ("epsilon", report.epsilon)]
    if report.ratio is not None:
        fields.append(("ratio", report.ratio))
    fields += [("rho_total_1", report.state1.rho_total),
               ("tilde_rho_1", report.state1.tilde_rho),
               ("p_1", report.state1.pressure),
               ("rho_total_2", report.state2.rho_total),
               ("tilde_rho_2", report.state2.tilde_rho),
               ("p_2", report.state2.pressure),
               ("product_tilde", report.product_tilde),
               ("product_total", report.product_total),
               ("densities_positive", report.densities_positive),
               ("verdict", report.verdict),
               ("near_degenerate", report.near_degenerate)]
    for key, value in fields:
        print(f"{key} {csvio.format_value(value)}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(csvio.counterexample_csv(report))
        print(f"wrote {args.csv}")

    if args.case == "integral":
        if args.weight is None:
            # the weighting each construction is built to defeat
            weight = ([1.0 / args.m1, 1.0 / args.m2]
                      if base_case == "tilde" else [1.0, 1.0])
        else:
            weight = args.weight
        if len(weight) != 2:
            raise ValueError("integral needs --weight with two entries")
        value = integral_counterexample(report, weight, args.measure)
        print(f"weight {csvio.format_value(weight[0])} "
              f"{csvio.format_value(weight[1])}")
        print(f"integral {csvio.format_value(value)}")
        return EXIT_OK if value < 0.0 else EXIT_NO_COUNTEREXAMPLE

    reproduced = (report.verdict == report.case and report.densities_positive
                  and not report.near_degenerate)
    return EXIT_OK if reproduced else EXIT_NO_COUNTEREXAMPLE


def _cmd_adiabat(args) -> int:
    with open(args.config, encoding="utf-8") as handle:
        text = handle.read()
    response = handlers.adiabat_table(ConfigRequest(config=text))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(response.document)
        for key in ("alpha_sum", "beta_sum", "exponent", "gamma_reference",
                    "k_simple", "k1_composite"):
            print(f"{key} {csvio.format_value(getattr(response, key))}")
        print(f"rows {response.rows}")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(response.document)
    return EXIT_OK


def _cmd_viscosity(args) -> int:
    response = handlers.viscosity_report(ViscosityRequest(
        pure_viscosities=args.mu, concentrations=args.xi, rule=args.rule,
        empiric_alpha=args.empiric_alpha, empiric_beta=args.empiric_beta,
        second=args.second))
    _print_matrix("shear", response.shear)
    _print_matrix("second", response.second)
    _print_matrix("bulk_combination", response.bulk_combination)
    print(f"shear_min_eigenvalue {csvio.format_value(response.shear_min_eigenvalue)}")
    print(f"bulk_min_eigenvalue {csvio.format_value(response.bulk_min_eigenvalue)}")
    print(f"positive {str(response.positive).lower()}")
    if response.failure_reason:
        print(f"failure_reason {response.failure_reason}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    """Run the CLI; returns the exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    commands = {"simulate": _cmd_simulate,
                "counterexample": _cmd_counterexample,
                "adiabat": _cmd_adiabat,
                "viscosity": _cmd_viscosity,
                "serve": _cmd_serve}
    try:
        return commands[args.command](args)
    except DensityFloorError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ConfigError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
