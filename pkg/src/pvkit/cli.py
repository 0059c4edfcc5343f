"""Command-line interface.

Subcommands: ``rate`` (risk factor and net rates), ``pv`` (single-point
present value), ``curve`` (one sampled curve), ``scenario`` (paired
time-value / risk-adjusted curves), ``fit`` (closed-form and numeric
adjustment fit), ``mc`` (Monte-Carlo fit-sign report).

Exit codes: 0 success, 2 validation or parse error, 3 numeric failure,
4 I/O error.
"""

import argparse
import sys
from dataclasses import replace

from ._version import __version__
from .engine import discounted_value, net_rate, pv_curve, stream_value
from .errors import NoConvergenceError, ValuationError
from .fit import FitProblem, classify_direction, fit_closed_form, fit_numeric
from .mc import Normal, Uniform, mc_fit_distribution
from .model import Rate, RiskPolicy, StreamKind, StreamSpec, risk_ratio
from .scenario import (
    ScenarioConfig,
    emit_csv,
    emit_curve_csv,
    emit_json,
    fit_result_to_dict,
    load_config,
    mc_report_to_dict,
    parse_rate_token,
    scenario_run,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="config file (flat key=value lines)")
    parser.add_argument("--d-tvm", type=parse_rate_token, metavar="RATE",
                        help="base time-value discount rate, fraction/yr ('%%' suffix allowed)")
    parser.add_argument("--r-rar", type=float, metavar="FACTOR",
                        help="dimensionless risk factor >= 1")
    parser.add_argument("--d-target", type=parse_rate_token, metavar="RATE",
                        help="risk-bearing target rate used by the rate ratio")
    parser.add_argument("--kind", choices=[k.value for k in StreamKind],
                        help="stream kind (default income)")
    parser.add_argument("--initial", type=float, metavar="AMOUNT",
                        help="initial magnitude, > 0 (sign comes from --kind)")
    parser.add_argument("--growth", type=parse_rate_token, metavar="RATE",
                        help="stream growth rate, fraction/yr")
    parser.add_argument("--horizon", type=float, metavar="YEARS", help="grid horizon")
    parser.add_argument("--step", type=float, metavar="YEARS", help="grid step")
    parser.add_argument("--allow-illegal-pairing", action="store_true", default=None,
                        help="also emit the wrong-direction counterfactual curve")
    parser.add_argument("--format", choices=["csv", "json"], dest="fmt",
                        help="output format (tabular commands default to csv, others to json)")
    parser.add_argument("--out", metavar="PATH", help="output file (default stdout)")


def _build_config(args: argparse.Namespace) -> ScenarioConfig:
    config = load_config(args.config) if args.config else ScenarioConfig()
    overrides = {}
    if args.d_tvm is not None:
        overrides["d_tvm"] = Rate(args.d_tvm)
    if args.r_rar is not None:
        overrides["r_rar"] = args.r_rar
    if args.d_target is not None:
        overrides["d_target"] = Rate(args.d_target)
    if args.horizon is not None:
        overrides["horizon"] = args.horizon
    if args.step is not None:
        overrides["step"] = args.step
    if args.allow_illegal_pairing is not None:
        overrides["allow_illegal_pairing"] = args.allow_illegal_pairing
    stream = config.stream
    if args.kind is not None or args.initial is not None or args.growth is not None:
        overrides["stream"] = StreamSpec(
            StreamKind(args.kind) if args.kind is not None else stream.kind,
            args.initial if args.initial is not None else stream.initial_magnitude,
            Rate(args.growth) if args.growth is not None else stream.growth,
        )
    return replace(config, **overrides) if overrides else config


def _csv_cell(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def _flat_csv(document: dict, prefix: str = "") -> list[str]:
    rows = []
    for key, value in document.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows += _flat_csv(value, prefix=f"{name}.")
        elif isinstance(value, list):
            parts = [
                ":".join(_csv_cell(x) for x in v) if isinstance(v, list) else _csv_cell(v)
                for v in value
            ]
            rows.append(f"{name},{';'.join(parts)}")
        else:
            rows.append(f"{name},{_csv_cell(value)}")
    return rows


def _emit_document(document: dict, args: argparse.Namespace) -> None:
    destination = args.out if args.out else sys.stdout
    if args.fmt == "csv":
        text = "key,value\n" + "\n".join(_flat_csv(document)) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    else:
        emit_json(document, destination)


def _net_rates(config: ScenarioConfig) -> tuple[Rate, Rate]:
    income_net = net_rate(config.d_tvm, RiskPolicy.multiplicative(config.r_rar), StreamKind.INCOME)
    loss_net = net_rate(config.d_tvm, RiskPolicy.divisive(config.r_rar), StreamKind.LOSS)
    return income_net, loss_net


def cmd_rate(args: argparse.Namespace) -> None:
    config = _build_config(args)
    ratio = risk_ratio(config.d_target, config.d_tvm)
    income_net, loss_net = _net_rates(config)
    _emit_document({
        "schema": "pvkit.rate/1",
        "d_tvm": config.d_tvm.value,
        "d_target": config.d_target.value,
        "risk_ratio": ratio,
        "r_rar": config.r_rar,
        "d_net_income": income_net.value,
        "d_net_loss": loss_net.value,
    }, args)


def cmd_pv(args: argparse.Namespace) -> None:
    config = _build_config(args)
    stream = config.stream
    income_net, loss_net = _net_rates(config)
    d_net = income_net if stream.kind is StreamKind.INCOME else loss_net
    _emit_document({
        "schema": "pvkit.pv/1",
        "kind": stream.kind.value,
        "t": args.t,
        "raw": stream_value(stream, args.t),
        "tvm": discounted_value(stream, config.d_tvm, args.t),
        "risk": discounted_value(stream, d_net, args.t),
        "rates": {"d_tvm": config.d_tvm.value, "d_net": d_net.value},
    }, args)


def cmd_curve(args: argparse.Namespace) -> None:
    config = _build_config(args)
    stream = config.stream
    if args.at == "risk":
        income_net, loss_net = _net_rates(config)
        rate = income_net if stream.kind is StreamKind.INCOME else loss_net
    else:
        rate = config.d_tvm
    series = pv_curve(stream, rate, config.horizon, config.step)
    if args.fmt == "json":
        _emit_document({
            "schema": "pvkit.curve/1",
            "kind": stream.kind.value,
            "rate": rate.value,
            "points": [[p.t, p.raw_value, p.discounted_value] for p in series.points],
        }, args)
    else:
        emit_curve_csv(series, args.out if args.out else sys.stdout)


def cmd_scenario(args: argparse.Namespace) -> None:
    config = _build_config(args)
    report = scenario_run(config)
    if args.fmt == "json":
        emit_json(report, args.out if args.out else sys.stdout)
    else:
        emit_csv(report, args.out if args.out else sys.stdout)


def cmd_fit(args: argparse.Namespace) -> None:
    config = _build_config(args)
    kind = config.stream.kind
    initial = config.stream.initial_magnitude
    problem = FitProblem(
        expected=StreamSpec(kind, initial, Rate(args.expected_growth)),
        actual=StreamSpec(kind, initial, Rate(args.actual_growth)),
        d_tvm=config.d_tvm,
        horizon=config.horizon,
        step=config.step,
    )
    closed = fit_closed_form(problem)
    numeric = fit_numeric(problem)
    _emit_document({
        "schema": "pvkit.fit/1",
        "kind": kind.value,
        "expected_growth": args.expected_growth,
        "actual_growth": args.actual_growth,
        "closed_form": fit_result_to_dict(closed),
        "numeric": fit_result_to_dict(numeric),
        "difference": abs(closed.adjustment.value - numeric.adjustment.value),
        "direction": classify_direction(kind, closed).value,
    }, args)


def cmd_mc(args: argparse.Namespace) -> None:
    config = _build_config(args)
    if args.dist == "uniform":
        dist = Uniform(args.lo, args.hi)
    else:
        dist = Normal(args.mean, args.stddev)
    report = mc_fit_distribution(
        kind=config.stream.kind,
        expected_growth=Rate(args.expected_growth),
        dist=dist,
        d_tvm=config.d_tvm,
        n=args.n,
        seed=args.seed,
    )
    if args.fmt == "csv":
        _emit_document(mc_report_to_dict(report), args)
    else:
        emit_json(report, args.out if args.out else sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvkit",
        description="Present values for exponential income and loss streams "
                    "under risk-adjusted continuous discounting.",
    )
    parser.add_argument("--version", action="version", version=f"pvkit {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p_rate = commands.add_parser("rate", help="risk factor implied by two rates, plus net rates")
    _add_common_flags(p_rate)
    p_rate.set_defaults(func=cmd_rate)

    p_pv = commands.add_parser("pv", help="present value of one stream at a single time")
    _add_common_flags(p_pv)
    p_pv.add_argument("--t", type=float, required=True, metavar="YEARS", help="evaluation time")
    p_pv.set_defaults(func=cmd_pv)

    p_curve = commands.add_parser("curve", help="one sampled curve over the grid")
    _add_common_flags(p_curve)
    p_curve.add_argument("--at", choices=["tvm", "risk"], default="tvm",
                         help="discount at the base rate or the net-of-risk rate")
    p_curve.set_defaults(func=cmd_curve)

    p_scenario = commands.add_parser("scenario", help="paired tvm/risk curves for one stream")
    _add_common_flags(p_scenario)
    p_scenario.set_defaults(func=cmd_scenario)

    p_fit = commands.add_parser("fit", help="closed-form and numeric adjustment fit")
    _add_common_flags(p_fit)
    p_fit.add_argument("--expected-growth", type=parse_rate_token, required=True,
                       metavar="RATE", help="expected stream growth rate")
    p_fit.add_argument("--actual-growth", type=parse_rate_token, required=True,
                       metavar="RATE", help="realized stream growth rate")
    p_fit.set_defaults(func=cmd_fit)

    p_mc = commands.add_parser("mc", help="Monte-Carlo fit-sign report")
    _add_common_flags(p_mc)
    p_mc.add_argument("--expected-growth", type=parse_rate_token, default=0.02,
                      metavar="RATE", help="expected growth rate (default 0.02)")
    p_mc.add_argument("--dist", choices=["uniform", "normal"], default="uniform",
                      help="realized-growth distribution")
    p_mc.add_argument("--lo", type=parse_rate_token, default=0.0, metavar="RATE",
                      help="uniform lower bound (default 0.0)")
    p_mc.add_argument("--hi", type=parse_rate_token, default=0.04, metavar="RATE",
                      help="uniform upper bound (default 0.04)")
    p_mc.add_argument("--mean", type=parse_rate_token, default=0.02, metavar="RATE",
                      help="normal mean (default 0.02)")
    p_mc.add_argument("--stddev", type=parse_rate_token, default=0.01, metavar="RATE",
                      help="normal standard deviation (default 0.01)")
    p_mc.add_argument("--n", type=int, default=100_000, help="draw count (default 100000)")
    p_mc.add_argument("--seed", type=int, default=42, help="generator seed (default 42)")
    p_mc.set_defaults(func=cmd_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except NoConvergenceError as exc:
        print(f"pvkit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValuationError as exc:
        print(f"pvkit: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"pvkit: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
