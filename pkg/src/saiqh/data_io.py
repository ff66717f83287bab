"""Scenario configuration, observed-data ingestion, and file schemas.

Scenario files are flat `key = value` text with `#` comments, one key per
line; every key missing from a user file falls back to the bundled
Portugal 2020 scenario, so defaults live in a checked-in file rather than
in code. Trajectories travel as CSV with the header
`step,t_days,S,A,I,Q,H,Hbar,D,N,lambda` (full 17-significant-digit
values, preceded by `# key=value` metadata lines); observed case series
as `date,active_cases` CSV; fit and stability reports as JSON.
"""

from __future__ import annotations

import csv
import datetime
import json
import math
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

from .errors import DomainError, ValidationError
from .model_core import Parameters, State
from .nsfd import Trajectory
from .stability import StabilityReport

__all__ = [
    "Scenario", "ObservedSeries", "FitReport",
    "SCENARIO_KEYS", "MAPPING_I_ONLY", "MAPPING_I_H_HBAR",
    "default_scenario_path", "bundled_observed_path",
    "read_scenario_file", "build_scenario", "load_scenario", "write_scenario",
    "load_observed", "compare",
    "write_trajectory", "read_trajectory", "write_report",
]

TRAJECTORY_HEADER = ["step", "t_days", "S", "A", "I", "Q", "H", "Hbar", "D", "N", "lambda"]
OBSERVED_HEADER = ["date", "active_cases"]

_PARAM_KEYS = ("Lambda", "mu", "beta", "lA", "lH", "phi", "nu", "delta1", "delta2",
               "eta", "omega", "alpha1", "alpha2", "p", "q", "f1", "f2", "f3", "kappa", "m")
_INIT_KEYS = ("S0", "A0", "I0", "Q0", "H0", "Hbar0", "D0")
SCENARIO_KEYS = _PARAM_KEYS + _INIT_KEYS + ("h", "n_steps", "t0_date", "scheme")

MAPPING_I_ONLY = "I_only"
MAPPING_I_H_HBAR = "I_plus_H_plus_Hbar"
SCHEMES = ("nsfd", "rk4")


@dataclass(frozen=True)
class Scenario:
    """A fully validated simulation setup.

    t0_date anchors step 0 on the calendar; scheme selects the integrator.
    """

    params: Parameters
    init: State
    h: float
    n_steps: int
    t0_date: datetime.date
    scheme: str

    def __post_init__(self) -> None:
        if not (math.isfinite(self.h) and self.h > 0):
            raise ValidationError(f"h must be a finite number > 0 (got {self.h!r})")
        if not (isinstance(self.n_steps, int) and self.n_steps >= 1):
            raise ValidationError(f"n_steps must be an integer >= 1 (got {self.n_steps!r})")
        if self.scheme not in SCHEMES:
            raise ValidationError(f"scheme must be one of {SCHEMES} (got {self.scheme!r})")

    @property
    def t0_offset(self) -> int:
        return self.t0_date.toordinal()


@dataclass(frozen=True)
class ObservedSeries:
    """Daily observed active-case counts on strictly increasing dates."""

    dates: tuple[datetime.date, ...]
    active_cases: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.dates) != len(self.active_cases):
            raise ValidationError("dates and active_cases must have equal length")
        if not self.dates:
            raise ValidationError("observed series is empty")
        for left, right in zip(self.dates, self.dates[1:]):
            if right <= left:
                raise ValidationError(f"dates must be strictly increasing "
                                      f"({left.isoformat()} !< {right.isoformat()})")
        for value in self.active_cases:
            if value < 0:
                raise ValidationError(f"active_cases must be >= 0 (got {value})")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class FitReport:
    """Model-versus-data error metrics over the overlapping dates."""

    mapping: str
    rmse: float
    mae: float
    max_abs_error: float
    n_points: int


def default_scenario_path() -> Path:
    """Checked-in scenario file carrying every default value."""
    return Path(str(resources.files("saiqh").joinpath("data/portugal_2020.cfg")))


def bundled_observed_path() -> Path:
    """Checked-in observed active-case series (2020-03-02 to 2020-05-04)."""
    return Path(str(resources.files("saiqh").joinpath("data/portugal_active_cases.csv")))


def read_scenario_file(path: str | Path) -> dict[str, str]:
    """Parse flat `key = value` lines into a string mapping.

    `#` starts a comment anywhere on a line; blank lines are skipped.
    Unknown or duplicated keys and lines without `=` are rejected with the
    offending line number.
    """
    mapping: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected `key = value`, got {raw_line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in SCENARIO_KEYS:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        if key in mapping:
            raise ValidationError(f"{path}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ValidationError(f"{path}:{lineno}: empty value for {key!r}")
        mapping[key] = value
    return mapping


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"value for {key!r} is not a number: {value!r}") from None


def build_scenario(mapping: dict[str, str]) -> Scenario:
    """Validate a complete key/value mapping into a Scenario."""
    missing = [key for key in SCENARIO_KEYS if key not in mapping]
    if missing:
        raise ValidationError(f"scenario is missing keys: {', '.join(missing)}")
    params = Parameters(**{key: _parse_float(key, mapping[key]) for key in _PARAM_KEYS})
    init = State(S=_parse_float("S0", mapping["S0"]), A=_parse_float("A0", mapping["A0"]),
                 I=_parse_float("I0", mapping["I0"]), Q=_parse_float("Q0", mapping["Q0"]),
                 H=_parse_float("H0", mapping["H0"]), Hbar=_parse_float("Hbar0", mapping["Hbar0"]),
                 D=_parse_float("D0", mapping["D0"]))
    raw_steps = mapping["n_steps"]
    try:
        n_steps = int(raw_steps)
    except ValueError:
        raise ValidationError(f"value for 'n_steps' is not an integer: {raw_steps!r}") from None
    try:
        t0_date = datetime.date.fromisoformat(mapping["t0_date"])
    except ValueError:
        raise ValidationError(f"value for 't0_date' is not an ISO date: "
                              f"{mapping['t0_date']!r}") from None
    return Scenario(params=params, init=init, h=_parse_float("h", mapping["h"]),
                    n_steps=n_steps, t0_date=t0_date, scheme=mapping["scheme"])


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario file; keys absent from it take the bundled defaults."""
    merged = read_scenario_file(default_scenario_path())
    merged.update(read_scenario_file(path))
    return build_scenario(merged)


def scenario_to_mapping(scenario: Scenario) -> dict[str, str]:
    """Render a Scenario back into exact-round-trip strings."""
    out: dict[str, str] = {}
    for key in _PARAM_KEYS:
        out[key] = format(getattr(scenario.params, key), ".17g")
    for key, attr in zip(_INIT_KEYS, ("S", "A", "I", "Q", "H", "Hbar", "D")):
        out[key] = format(getattr(scenario.init, attr), ".17g")
    out["h"] = format(scenario.h, ".17g")
    out["n_steps"] = str(scenario.n_steps)
    out["t0_date"] = scenario.t0_date.isoformat()
    out["scheme"] = scenario.scheme
    return out


def write_scenario(scenario: Scenario, path: str | Path) -> None:
    """Write every key in canonical order; load_scenario inverts exactly."""
    mapping = scenario_to_mapping(scenario)
    lines = [f"{key} = {mapping[key]}" for key in SCENARIO_KEYS]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_observed(path: str | Path) -> ObservedSeries:
    """Read a `date,active_cases` CSV with ISO dates and integer counts."""
    dates: list[datetime.date] = []
    counts: list[int] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != OBSERVED_HEADER:
            raise ValidationError(f"{path}: expected header {','.join(OBSERVED_HEADER)!r}, "
                                  f"got {header!r}")
        for row_index, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ValidationError(f"{path}: row {row_index}: expected 2 fields, got {len(row)}")
            try:
                date = datetime.date.fromisoformat(row[0].strip())
            except ValueError:
                raise ValidationError(f"{path}: row {row_index}: bad date {row[0]!r}") from None
            try:
                count = int(row[1])
            except ValueError:
                raise ValidationError(f"{path}: row {row_index}: bad count {row[1]!r}") from None
            if count < 0:
                raise ValidationError(f"{path}: row {row_index}: count must be >= 0 (got {count})")
            dates.append(date)
            counts.append(count)
    if not dates:
        raise ValidationError(f"{path}: no data rows")
    return ObservedSeries(dates=tuple(dates), active_cases=tuple(counts))


def _model_series(traj: Trajectory, mapping: str, index: int) -> float:
    state = traj.states[index]
    if mapping == MAPPING_I_ONLY:
        return state.I
    return state.I + state.H + state.Hbar


def compare(traj: Trajectory, obs: ObservedSeries, mapping: str = MAPPING_I_ONLY) -> FitReport:
    """Error metrics of the model series sampled at the observed dates.

    The trajectory must be daily sampled (h dividing 1 day) and anchored
    (t0_offset set); the model observable is I alone or I+H+Hbar per the
    mapping. Raises DomainError when no observed date falls inside the
    simulated range.
    """
    if mapping not in (MAPPING_I_ONLY, MAPPING_I_H_HBAR):
        raise ValidationError(f"mapping must be {MAPPING_I_ONLY!r} or {MAPPING_I_H_HBAR!r} "
                              f"(got {mapping!r})")
    steps_per_day = round(1.0 / traj.h)
    if steps_per_day < 1 or abs(steps_per_day * traj.h - 1.0) > 1e-9:
        raise ValidationError(f"trajectory step h = {traj.h!r} does not divide 1 day")
    errors = []
    for date, observed in zip(obs.dates, obs.active_cases):
        day = date.toordinal() - traj.t0_offset
        index = day * steps_per_day
        if day < 0 or index >= len(traj.states):
            continue
        errors.append(_model_series(traj, mapping, index) - observed)
    if not errors:
        raise DomainError("no date overlap between trajectory and observed series")
    n = len(errors)
    rmse = math.sqrt(sum(e * e for e in errors) / n)
    mae = sum(abs(e) for e in errors) / n
    return FitReport(mapping=mapping, rmse=rmse, mae=mae,
                     max_abs_error=max(abs(e) for e in errors), n_points=n)


def write_trajectory(traj: Trajectory, path: str | Path) -> None:
    """Write the trajectory CSV schema with leading `# key=value` metadata."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(f"# scheme={traj.scheme}\n")
        handle.write(f"# h={traj.h:.17g}\n")
        handle.write(f"# t0_offset={traj.t0_offset}\n")
        if traj.scheme == "rk4":
            handle.write(f"# rk4_halvings={traj.rk4_halvings}\n")
        handle.write(",".join(TRAJECTORY_HEADER) + "\n")
        for index, state in enumerate(traj.states):
            fields = [str(index), format(index * traj.h, ".17g")]
            fields += [format(v, ".17g") for v in state.living() + (state.D,)]
            fields.append(format(traj.N[index], ".17g"))
            fields.append(format(traj.lambdas[index], ".17g"))
            handle.write(",".join(fields) + "\n")


def read_trajectory(path: str | Path) -> Trajectory:
    """Read a trajectory CSV back; values round-trip bit exactly.

    The per-step linear-solve residuals are not part of the schema and
    come back empty.
    """
    meta: dict[str, str] = {}
    states: list[State] = []
    n_values: list[float] = []
    lambdas: list[float] = []
    with open(path, newline="", encoding="utf-8") as handle:
        header: list[str] | None = None
        for raw in handle:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split(",")
                if header != TRAJECTORY_HEADER:
                    raise ValidationError(f"{path}: expected trajectory header "
                                          f"{','.join(TRAJECTORY_HEADER)!r}, got {line!r}")
                continue
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(TRAJECTORY_HEADER):
                raise ValidationError(f"{path}: row {len(states) + 1}: expected "
                                      f"{len(TRAJECTORY_HEADER)} fields, got {len(parts)}")
            try:
                values = [float(part) for part in parts[2:]]
            except ValueError:
                raise ValidationError(f"{path}: row {len(states) + 1}: non-numeric field") from None
            states.append(State(*values[:7]))
            n_values.append(values[7])
            lambdas.append(values[8])
    if header is None or not states:
        raise ValidationError(f"{path}: no trajectory rows")
    for left, right in zip(states, states[1:]):
        if right.D < left.D:
            raise ValidationError(f"{path}: death tally D decreases along the trajectory")
    scheme = meta.get("scheme", "nsfd")
    if scheme not in SCHEMES:
        raise ValidationError(f"{path}: unknown scheme {scheme!r} in metadata")
    return Trajectory(h=float(meta.get("h", "1")), scheme=scheme, states=states,
                      N=n_values, lambdas=lambdas, residuals=[],
                      t0_offset=int(meta.get("t0_offset", "0")),
                      rk4_halvings=int(meta.get("rk4_halvings", "0")))


def write_report(report: FitReport | StabilityReport, path: str | Path) -> None:
    """Serialize a report dataclass as stable, sorted JSON."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(asdict(report), handle, indent=2, sort_keys=True)
        handle.write("\n")
