"""Command-line experiment runner with deterministic machine-readable reports.

Configuration is a flat key=value text file (``--config``) whose entries are
overridden by command-line flags.  For a fixed seed every command emits
byte-identical output across runs and across worker counts: all randomness
flows through per-index substreams and rows are produced in canonical order.
Exit codes: 0 success, 1 configuration error, 2 runtime inconsistency (a
failed bound check or an unusable pipeline estimate).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import SLACK_TOL, ghz_pipeline_fidelity, multipartite_sharing_bound, verify
from .csscode import CssCode, load_code_pair, steane_css, validate_css
from .purify import PauliChannelSpec, estimate
from .qcore import (
    apply_channel,
    ginibre_density,
    haar_state,
    overlap,
    schmidt_decompose,
    trace_distance,
)
from .states import IsotropicParams, ghz, isotropic
from .teleport import teleport_channel, teleport_fidelity, teleport_subsystems
from .twirl import twirl_exact, twirl_sampled

COMMANDS = ("purify", "teleport", "twirl", "bounds", "share")

_TELEPORT_DIMS = (2, 3, 4, 5)
_BOUNDS_DIMS = (2, 3, 4)
_BOUNDS_M = (1, 2, 3)
_BOUNDS_EPS = (0.0, 0.05, 0.1, 0.2)
_TWIRL_LADDER = (100, 1000, 10000)


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    seed: int = 0
    trials: int = 10000
    code: str = "steane"
    p: float | None = None
    d: int | None = None
    F: float | None = None
    m: int | None = None
    N: int | None = None
    eps: float | None = None
    output: str | None = None
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; choose from {COMMANDS}")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")


@dataclass
class ReportTable:
    """Rows plus metadata, ready for CSV or JSON emission."""

    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def render(table: ReportTable, fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(table.columns)]
        for row in table.rows:
            lines.append(",".join(_csv_cell(row.get(col)) for col in table.columns))
        return "\n".join(lines) + "\n"
    payload = {"meta": table.meta, "rows": table.rows}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit(table: ReportTable, fmt: str, path: str | None) -> None:
    """Write the report as UTF-8 text with '\\n' newlines (stdout when path is None)."""
    text = render(table, fmt)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as err:
        raise ConfigError(f"cannot write {path!r}: {err}") from err


def parse_report(text: str) -> ReportTable:
    """Inverse of the JSON emission (used round-trip in tests)."""
    payload = json.loads(text)
    rows = payload["rows"]
    columns = list(rows[0].keys()) if rows else []
    return ReportTable(columns=columns, rows=rows, meta=payload["meta"])


def _meta(config: ExperimentConfig, **extra) -> dict:
    meta = {"command": config.command, "seed": config.seed, "version": __version__}
    meta.update(extra)
    return meta


def _load_code(spec: str) -> CssCode:
    if spec == "steane":
        return steane_css()
    try:
        outer, inner = load_code_pair(spec)
    except OSError as err:
        raise ConfigError(f"cannot read code file {spec!r}: {err}") from err
    except ValueError as err:
        raise ConfigError(f"bad code file {spec!r}: {err}") from err
    return validate_css(outer, inner)


def _channel_spec(config: ExperimentConfig) -> PauliChannelSpec:
    if config.p is None:
        raise ConfigError(f"command {config.command!r} needs --p (depolarizing rate)")
    if not 0.0 <= config.p <= 1.0:
        raise ConfigError("--p must lie in [0, 1]")
    return PauliChannelSpec.depolarizing(config.p)


def cmd_purify(config: ExperimentConfig) -> tuple[ReportTable, int]:
    code = _load_code(config.code)
    spec = _channel_spec(config)
    report = estimate(code, spec, config.trials, config.seed, workers=config.workers)
    row = dataclasses.asdict(report)
    row = {"code": config.code, "p": config.p, **row}
    columns = list(row.keys())
    table = ReportTable(columns=columns, rows=[row], meta=_meta(config, p=config.p, trials=config.trials))
    return table, 0


def _teleport_grid(config: ExperimentConfig) -> list[tuple[int, float]]:
    if config.d is not None and config.F is not None:
        return [(config.d, config.F)]
    if (config.d is None) != (config.F is None):
        raise ConfigError("teleport needs both --d and --F, or neither for the default grid")
    grid = []
    for d in _TELEPORT_DIMS:
        for fraction in (1.0 / d**2, 0.3, 0.6, 0.9, 1.0):
            grid.append((d, fraction))
    return grid


def cmd_teleport(config: ExperimentConfig) -> tuple[ReportTable, int]:
    rows = []
    inputs = 10
    for index, (d, fraction) in enumerate(_teleport_grid(config)):
        channel = teleport_channel(isotropic(IsotropicParams(d, fraction)))
        overlaps = []
        for i in range(inputs):
            psi = haar_state((d,), np.random.default_rng([config.seed, index, i]))
            overlaps.append(overlap(apply_channel(channel, psi.density(), (0,)), psi))
        predicted = teleport_fidelity(d, fraction)
        simulated = float(np.mean(overlaps))
        rows.append(
            {
                "d": d,
                "F": fraction,
                "simulated": simulated,
                "predicted": predicted,
                "abs_error": abs(simulated - predicted),
                "input_spread": float(np.max(overlaps) - np.min(overlaps)),
            }
        )
    columns = ["d", "F", "simulated", "predicted", "abs_error", "input_spread"]
    return ReportTable(columns, rows, _meta(config, inputs=inputs)), 0


def cmd_twirl(config: ExperimentConfig) -> tuple[ReportTable, int]:
    d = config.d if config.d is not None else 2
    if d < 2:
        raise ConfigError("--d must be at least 2")
    ladder = sorted({n for n in _TWIRL_LADDER if n < config.trials} | {config.trials})
    state = ginibre_density((d, d), np.random.default_rng([config.seed, 0]))
    exact = twirl_exact(state)
    rows = []
    for index, n_samples in enumerate(ladder):
        sampled = twirl_sampled(
            state, n_samples, np.random.default_rng([config.seed, 1 + index]), workers=config.workers
        )
        rows.append(
            {"d": d, "n_samples": n_samples, "trace_distance": trace_distance(sampled, exact)}
        )
    columns = ["d", "n_samples", "trace_distance"]
    return ReportTable(columns, rows, _meta(config, d=d)), 0


def _bounds_grid(config: ExperimentConfig):
    dims = (config.d,) if config.d is not None else _BOUNDS_DIMS
    ms = (config.m,) if config.m is not None else _BOUNDS_M
    eps_grid = (config.eps,) if config.eps is not None else _BOUNDS_EPS
    for name in ("teleport_overlap", "entanglement_fidelity", "shared_pair_sqrt"):
        for d in dims:
            for eps in eps_grid:
                yield name, {"d": d, "eps": eps, "seed": config.seed}
    for name in ("multipartite_overlap", "ghz_pipeline_sqrt"):
        for m in ms:
            for eps in eps_grid:
                yield name, {"m": m, "eps": eps, "seed": config.seed}


def cmd_bounds(config: ExperimentConfig) -> tuple[ReportTable, int]:
    rows = []
    failed = False
    for name, params in _bounds_grid(config):
        report = verify(name, params)
        label = name + "(" + ",".join(f"{k}={params[k]}" for k in sorted(params) if k != "seed") + ")"
        rows.append(
            {
                "name": label,
                "simulated": report.simulated,
                "bound": report.bound,
                "slack": report.slack,
                "satisfied": report.satisfied,
            }
        )
        failed = failed or not report.satisfied
    columns = ["name", "simulated", "bound", "slack", "satisfied"]
    return ReportTable(columns, rows, _meta(config)), (2 if failed else 0)


def cmd_share(config: ExperimentConfig) -> tuple[ReportTable, int]:
    """Full pipeline: purify, estimate the resource fraction, twirl to an
    isotropic resource, teleport m qubits of a GHZ state, check the bounds."""
    m = config.m if config.m is not None else 1
    n_qubits = config.N if config.N is not None else 3
    if n_qubits <= m:
        raise ConfigError("--N must exceed --m")
    meta_extra: dict = {"m": m, "N": n_qubits}
    if config.p is not None:
        code = _load_code(config.code)
        spec = _channel_spec(config)
        report = estimate(code, spec, config.trials, config.seed, workers=config.workers)
        if report.conditional_fidelity is None:
            sys.stderr.write("share: purification never passed; no resource estimate\n")
            return ReportTable([], [], _meta(config, **meta_extra)), 2
        pair_fraction = report.conditional_fidelity
        meta_extra.update(p=config.p, trials=config.trials)
    elif config.eps is not None:
        pair_fraction = 1.0 - config.eps
    elif config.F is not None:
        pair_fraction = config.F
    else:
        raise ConfigError("share needs --p (purify first) or --eps/--F (direct resource)")

    resource_fraction = pair_fraction**m
    eps_pipe = 1.0 - resource_fraction
    state = ghz(n_qubits)
    targets = tuple(range(n_qubits - m, n_qubits))
    output = teleport_subsystems(state, targets, isotropic(IsotropicParams(2**m, resource_fraction)))
    simulated = overlap(output, state)
    data = schmidt_decompose(state, targets)
    bound = multipartite_sharing_bound(m, eps_pipe, data.schmidt_number, data.max_pair_product)
    claim = ghz_pipeline_fidelity(m, eps_pipe)
    sqrt_fidelity = float(np.sqrt(simulated))
    row = {
        "m": m,
        "N": n_qubits,
        "resource_fraction": resource_fraction,
        "eps": eps_pipe,
        "simulated_overlap": simulated,
        "overlap_bound": bound,
        "overlap_slack": simulated - bound,
        "sqrt_fidelity": sqrt_fidelity,
        "sqrt_claim": claim,
        "sqrt_slack": sqrt_fidelity - claim,
        "satisfied": simulated - bound >= -SLACK_TOL,
    }
    table = ReportTable(list(row.keys()), [row], _meta(config, **meta_extra))
    return table, (0 if row["satisfied"] else 2)


_COMMAND_TABLE = {
    "purify": cmd_purify,
    "teleport": cmd_teleport,
    "twirl": cmd_twirl,
    "bounds": cmd_bounds,
    "share": cmd_share,
}


def run(config: ExperimentConfig) -> int:
    """Dispatch a parsed configuration; returns the process exit code."""
    table, status = _COMMAND_TABLE[config.command](config)
    emit(table, config.format, config.output)
    return status


def load_config_file(path: str) -> dict:
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, raw in enumerate(handle, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{line_no}: expected key=value, got {line!r}")
                key, value = line.split("=", 1)
                values[key.strip()] = value.strip()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path!r}: {err}") from err
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); config errors must exit 1
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="entshare", description="entanglement sharing experiment runner")
    parser.add_argument("--config", help="key=value config file; flags override its entries")
    parser.add_argument("--command", choices=COMMANDS)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--code", help="embedded code name (steane) or a code-pair file")
    parser.add_argument("--p", type=float, help="depolarizing rate per transmitted qubit")
    parser.add_argument("--d", type=int, help="local dimension for teleport/twirl/bounds")
    parser.add_argument("--F", type=float, help="entangled fraction of the resource")
    parser.add_argument("--m", type=int, help="teleported qubits in the share pipeline")
    parser.add_argument("--N", type=int, help="qubits of the shared GHZ state")
    parser.add_argument("--eps", type=float, help="resource infidelity 1 - F")
    parser.add_argument("--output", help="output path (stdout when omitted)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--workers", type=int, help="parallel workers (output is identical)")
    return parser


_INT_KEYS = {"seed", "trials", "d", "m", "N", "workers"}
_FLOAT_KEYS = {"p", "F", "eps"}


def build_config(argv: Sequence[str]) -> ExperimentConfig:
    args = _build_parser().parse_args(argv)
    values: dict = {}
    if args.config:
        for key, raw in load_config_file(args.config).items():
            if key not in ExperimentConfig.__dataclass_fields__:
                raise ConfigError(f"unknown config key {key!r}")
            try:
                if key in _INT_KEYS:
                    values[key] = int(raw)
                elif key in _FLOAT_KEYS:
                    values[key] = float(raw)
                else:
                    values[key] = raw
            except ValueError as err:
                raise ConfigError(f"bad value for {key!r}: {err}") from err
    for key in ExperimentConfig.__dataclass_fields__:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if "command" not in values:
        raise ConfigError("no command given (use --command or a config file)")
    try:
        return ExperimentConfig(**values)
    except TypeError as err:
        raise ConfigError(str(err)) from err


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = build_config(argv)
        return run(config)
    except ConfigError as err:
        sys.stderr.write(f"entshare: {err}\n")
        return 1


def script_entry() -> None:
    raise SystemExit(main())
