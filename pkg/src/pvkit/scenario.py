"""Scenario configuration, execution, and CSV/JSON serialization.

A scenario pairs the plain time-value curve of one stream with its
risk-adjusted counterpart (multiplicative factor for income, divisive for
losses) over a shared grid, optionally adding the deliberately wrong-direction
"counterfactual" curve behind an explicit override flag.

Config files are flat ``key=value`` text with ``#`` comments; keys match the
CLI flag names (dashes and underscores interchangeable) and unknown keys are
errors. Rates may be written as fractions or with a ``%`` suffix, which is
divided by 100 exactly in decimal at parse time.
"""

import json
from contextlib import contextmanager
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path

from ._version import __version__
from .engine import CurveSeries, net_rate, pv_curve, sample_times
from .errors import ConfigParseError, UnknownKeyError, ValidationError
from .mc import McReport
from .model import (
    FitResult,
    Rate,
    RiskPolicy,
    StreamKind,
    StreamSpec,
    as_rate,
)

DEFAULT_D_TVM = 0.01427
DEFAULT_R_RAR = 3.57
DEFAULT_D_TARGET = 0.051
DEFAULT_HORIZON = 300.0
DEFAULT_STEP = 1.0

# |rate| above 50%/yr is taken as a percent-written-as-fraction slip.
MAX_PLAUSIBLE_RATE = 0.5

_RATE_HINT = "rates are fractions per year: write 1.427%/yr as 0.01427 or '1.427%'"


def parse_rate_token(token: str) -> float:
    """Parse a rate literal; a trailing ``%`` divides by 100 exactly in decimal."""
    text = str(token).strip()
    try:
        if text.endswith("%"):
            return float(Decimal(text[:-1].strip()) / 100)
        return float(text)
    except (InvalidOperation, ValueError) as exc:
        raise ConfigParseError(f"cannot parse rate {token!r}") from exc


def _parse_bool(token: str) -> bool:
    lowered = str(token).strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigParseError(f"cannot parse boolean {token!r}")


def _parse_float(token: str, key: str) -> float:
    try:
        return float(str(token).strip())
    except ValueError as exc:
        raise ConfigParseError(f"cannot parse {key} value {token!r}") from exc


def _default_stream() -> StreamSpec:
    return StreamSpec(StreamKind.INCOME, 1.0, Rate(0.0))


@dataclass(frozen=True)
class ScenarioConfig:
    """Inputs for a scenario run; the defaults reproduce the stock setup."""

    d_tvm: Rate = Rate(DEFAULT_D_TVM)
    r_rar: float = DEFAULT_R_RAR
    d_target: Rate = Rate(DEFAULT_D_TARGET)
    horizon: float = DEFAULT_HORIZON
    step: float = DEFAULT_STEP
    stream: StreamSpec = _default_stream()
    allow_illegal_pairing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "d_tvm", as_rate(self.d_tvm))
        object.__setattr__(self, "d_target", as_rate(self.d_target))
        object.__setattr__(self, "horizon", float(self.horizon))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "allow_illegal_pairing", bool(self.allow_illegal_pairing))
        if not isinstance(self.stream, StreamSpec):
            raise ValidationError(f"stream must be a StreamSpec, got {self.stream!r}")
        # Reject the factor here with the same rule RiskPolicy applies later.
        RiskPolicy.multiplicative(self.r_rar)
        object.__setattr__(self, "r_rar", float(self.r_rar))
        sample_times(self.horizon, self.step)
        for name, rate in (
            ("d_tvm", self.d_tvm),
            ("d_target", self.d_target),
            ("growth", self.stream.growth),
        ):
            if abs(rate.value) > MAX_PLAUSIBLE_RATE:
                raise ValidationError(
                    f"{name}={rate.value!r} exceeds {MAX_PLAUSIBLE_RATE}/yr; {_RATE_HINT}"
                )


_CONFIG_KEYS = (
    "d_tvm",
    "r_rar",
    "d_target",
    "kind",
    "initial",
    "growth",
    "horizon",
    "step",
    "allow_illegal_pairing",
)


def parse_config_text(text: str) -> ScenarioConfig:
    """Parse flat ``key=value`` config text into a validated ScenarioConfig.

    Raises:
        ConfigParseError: malformed lines, duplicate keys, unparseable values.
        UnknownKeyError: keys this tool does not define.
        ValidationError: values that violate config invariants.
    """
    settings: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UnknownKeyError(f"line {lineno}: unknown key {key!r}")
        if key in settings:
            raise ConfigParseError(f"line {lineno}: duplicate key {key!r}")
        settings[key] = value.strip()
    return _config_from_strings(settings)


def _config_from_strings(settings: dict[str, str]) -> ScenarioConfig:
    kwargs = {}
    if "d_tvm" in settings:
        kwargs["d_tvm"] = Rate(parse_rate_token(settings["d_tvm"]))
    if "d_target" in settings:
        kwargs["d_target"] = Rate(parse_rate_token(settings["d_target"]))
    if "r_rar" in settings:
        kwargs["r_rar"] = _parse_float(settings["r_rar"], "r_rar")
    if "horizon" in settings:
        kwargs["horizon"] = _parse_float(settings["horizon"], "horizon")
    if "step" in settings:
        kwargs["step"] = _parse_float(settings["step"], "step")
    if "allow_illegal_pairing" in settings:
        kwargs["allow_illegal_pairing"] = _parse_bool(settings["allow_illegal_pairing"])

    default = _default_stream()
    if "kind" in settings:
        try:
            kind = StreamKind(settings["kind"].lower())
        except ValueError as exc:
            raise ConfigParseError(f"kind must be 'income' or 'loss', got {settings['kind']!r}") from exc
    else:
        kind = default.kind
    initial = _parse_float(settings["initial"], "initial") if "initial" in settings else default.initial_magnitude
    growth = Rate(parse_rate_token(settings["growth"])) if "growth" in settings else default.growth
    kwargs["stream"] = StreamSpec(kind, initial, growth)

    return ScenarioConfig(**kwargs)


def load_config(path: "str | Path") -> ScenarioConfig:
    """Read and parse a config file."""
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def dump_config(config: ScenarioConfig) -> str:
    """Serialize a config as key=value lines that parse back to an equal config."""
    lines = [
        f"d_tvm={config.d_tvm.value!r}",
        f"r_rar={config.r_rar!r}",
        f"d_target={config.d_target.value!r}",
        f"kind={config.stream.kind.value}",
        f"initial={config.stream.initial_magnitude!r}",
        f"growth={config.stream.growth.value!r}",
        f"horizon={config.horizon!r}",
        f"step={config.step!r}",
        f"allow_illegal_pairing={'true' if config.allow_illegal_pairing else 'false'}",
    ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScenarioReport:
    """Paired time-value and risk-adjusted curves for one stream."""

    config: ScenarioConfig
    d_tvm: Rate
    d_net: Rate
    tvm_curve: CurveSeries
    risk_curve: CurveSeries
    counterfactual_curve: "CurveSeries | None" = None
    fit: "FitResult | None" = None
    version: str = __version__


def scenario_run(config: ScenarioConfig) -> ScenarioReport:
    """Run a scenario: curves at the base rate and at the kind's net-of-risk rate.

    With ``allow_illegal_pairing`` set, a third curve is produced at the
    wrong-direction rate for the kind (income divided, losses multiplied),
    bypassing the engine's pairing guard on purpose.
    """
    stream = config.stream
    kind = stream.kind
    if kind is StreamKind.INCOME:
        policy = RiskPolicy.multiplicative(config.r_rar)
    else:
        policy = RiskPolicy.divisive(config.r_rar)
    d_net = net_rate(config.d_tvm, policy, kind)

    tvm_curve = pv_curve(stream, config.d_tvm, config.horizon, config.step)
    risk_curve = pv_curve(stream, d_net, config.horizon, config.step)

    counterfactual = None
    if config.allow_illegal_pairing:
        if kind is StreamKind.INCOME:
            wrong = config.d_tvm.value / config.r_rar
        else:
            wrong = config.d_tvm.value * config.r_rar
        counterfactual = pv_curve(stream, Rate(wrong), config.horizon, config.step)

    return ScenarioReport(
        config=config,
        d_tvm=config.d_tvm,
        d_net=d_net,
        tvm_curve=tvm_curve,
        risk_curve=risk_curve,
        counterfactual_curve=counterfactual,
    )


@contextmanager
def _writable(destination):
    if hasattr(destination, "write"):
        yield destination
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as handle:
            yield handle


def _provenance_lines(report: ScenarioReport) -> list[str]:
    lines = [f"# pvkit {report.version}"]
    lines += [f"# {line}" for line in dump_config(report.config).splitlines()]
    lines.append(f"# d_net={report.d_net.value!r}")
    return lines


def emit_csv(report: ScenarioReport, destination) -> None:
    """Write a scenario as CSV: provenance comments, then one row per grid point.

    Header is ``t,raw,tvm,risk`` plus ``counterfactual`` when the override
    curve is present; numbers carry full round-trip precision; line endings
    are LF.
    """
    columns = ["t", "raw", "tvm", "risk"]
    curves = [report.tvm_curve, report.risk_curve]
    if report.counterfactual_curve is not None:
        columns.append("counterfactual")
        curves.append(report.counterfactual_curve)
    with _writable(destination) as handle:
        for line in _provenance_lines(report):
            handle.write(line + "\n")
        handle.write(",".join(columns) + "\n")
        for row in zip(*(c.points for c in curves)):
            t = row[0].t
            cells = [repr(t), repr(row[0].raw_value)]
            cells += [repr(point.discounted_value) for point in row]
            handle.write(",".join(cells) + "\n")


def emit_curve_csv(series: CurveSeries, destination) -> None:
    """Write a single curve as CSV with header ``t,raw,discounted``."""
    with _writable(destination) as handle:
        handle.write(f"# pvkit {__version__}\n")
        handle.write(f"# kind={series.spec.kind.value}\n")
        handle.write(f"# initial={series.spec.initial_magnitude!r}\n")
        handle.write(f"# growth={series.spec.growth.value!r}\n")
        handle.write(f"# rate={series.rate.value!r}\n")
        handle.write("t,raw,discounted\n")
        for point in series.points:
            handle.write(f"{point.t!r},{point.raw_value!r},{point.discounted_value!r}\n")


def config_to_dict(config: ScenarioConfig) -> dict:
    return {
        "d_tvm": config.d_tvm.value,
        "r_rar": config.r_rar,
        "d_target": config.d_target.value,
        "kind": config.stream.kind.value,
        "initial": config.stream.initial_magnitude,
        "growth": config.stream.growth.value,
        "horizon": config.horizon,
        "step": config.step,
        "allow_illegal_pairing": config.allow_illegal_pairing,
    }


def fit_result_to_dict(fit: FitResult) -> dict:
    return {
        "adjustment": fit.adjustment.value,
        "sign_class": fit.sign_class.value,
        "residual": fit.residual,
    }


def mc_report_to_dict(report: McReport) -> dict:
    return {
        "schema": "pvkit.mc_report/1",
        "kind": report.kind.value,
        "expected_growth": report.expected_growth.value,
        "n": report.n,
        "seed": report.seed,
        "n_negative": report.n_negative,
        "n_positive": report.n_positive,
        "n_zero": report.n_zero,
        "frac_negative": report.frac_negative,
        "frac_actual_above_expected": report.frac_actual_above_expected,
        "mean_adjustment": report.mean_adjustment.value,
        "quantiles": {
            "p05": report.quantiles[0].value,
            "p50": report.quantiles[1].value,
            "p95": report.quantiles[2].value,
        },
        "first_draws": [list(pair) for pair in report.first_draws],
    }


def _curve_rows(series: CurveSeries) -> list[list[float]]:
    return [[p.t, p.raw_value, p.discounted_value] for p in series.points]


def scenario_report_to_dict(report: ScenarioReport) -> dict:
    payload = {
        "schema": "pvkit.scenario_report/1",
        "version": report.version,
        "config": config_to_dict(report.config),
        "rates": {"d_tvm": report.d_tvm.value, "d_net": report.d_net.value},
        "fit": None if report.fit is None else fit_result_to_dict(report.fit),
        "curves": {
            "tvm": _curve_rows(report.tvm_curve),
            "risk": _curve_rows(report.risk_curve),
        },
    }
    if report.counterfactual_curve is not None:
        payload["rates"]["d_counterfactual"] = report.counterfactual_curve.rate.value
        payload["curves"]["counterfactual"] = _curve_rows(report.counterfactual_curve)
    return payload


def emit_json(payload, destination) -> None:
    """Write a report as JSON with a schema marker and stable key order.

    Accepts a ScenarioReport, McReport, or FitResult (or a pre-built dict);
    rates are emitted as plain fractions per year.
    """
    if isinstance(payload, ScenarioReport):
        document = scenario_report_to_dict(payload)
    elif isinstance(payload, McReport):
        document = mc_report_to_dict(payload)
    elif isinstance(payload, FitResult):
        document = {"schema": "pvkit.fit_result/1", **fit_result_to_dict(payload)}
    elif isinstance(payload, dict):
        document = payload
    else:
        raise TypeError(f"cannot serialize {type(payload).__name__} to JSON")
    with _writable(destination) as handle:
        json.dump(document, handle, indent=2)
        handle.write("\n")
