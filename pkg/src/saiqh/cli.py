"""Command-line interface: simulate, analyze, compare, sweep.

Exit codes: 0 success, 1 validation problem, 2 runtime or numerical
failure, 3 I/O failure. All outputs are deterministic: identical inputs
produce byte-identical files (timing information goes to stdout only).

Value precedence for scenario settings: dedicated flags (--h, --steps,
--scheme) over positional key=value overrides, over the config file,
over the bundled defaults.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import data_io, nsfd, ode_reference, stability
from .errors import DomainError, SaiqhError, StepError, ValidationError
from .model_core import critical_beta, dfe, endemic_equilibrium, endemic_lambda, \
    reproduction_number, reproduction_number_forms
from .nsfd import StepConfig, Trajectory, fixed_point_residual, simulate

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors follow the exit-code contract."""

    def error(self, message: str):  # noqa: D102  (argparse hook)
        raise ValidationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="saiqh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write the trajectory CSV")
    sim.add_argument("--config", required=True, help="scenario file (missing keys: bundled defaults)")
    sim.add_argument("--scheme", choices=data_io.SCHEMES, help="integrator override")
    sim.add_argument("--h", type=float, dest="h", help="step size override (days)")
    sim.add_argument("--steps", type=int, help="step count override")
    sim.add_argument("--out", required=True, help="output trajectory CSV path")
    sim.add_argument("overrides", nargs="*", metavar="KEY=VALUE",
                     help="scenario key overrides, e.g. beta=3.86")
    sim.set_defaults(func=_cmd_simulate)

    ana = sub.add_parser("analyze", help="print R0, equilibria, residuals, classification")
    ana.add_argument("--config", required=True)
    ana.add_argument("--traj", help="trajectory CSV to verify Lyapunov descent on")
    ana.add_argument("--out", help="stability report JSON path (default: TRAJ.stability.json)")
    ana.add_argument("overrides", nargs="*", metavar="KEY=VALUE")
    ana.set_defaults(func=_cmd_analyze)

    cmp_ = sub.add_parser("compare", help="error metrics of a trajectory against observed data")
    cmp_.add_argument("--traj", required=True)
    cmp_.add_argument("--observed", required=True)
    cmp_.add_argument("--mapping", choices=("I", "IHH"), default="I",
                      help="observable: I alone or I+H+Hbar")
    cmp_.add_argument("--out", help="also write the fit report JSON here")
    cmp_.set_defaults(func=_cmd_compare)

    swp = sub.add_parser("sweep", help="positivity/boundedness table across step sizes")
    swp.add_argument("--config", required=True)
    swp.add_argument("--h-list", required=True, dest="h_list",
                     help="comma-separated step sizes, e.g. 0.1,1,10,100")
    swp.add_argument("--steps", type=int, help="step count override")
    swp.add_argument("overrides", nargs="*", metavar="KEY=VALUE")
    swp.set_defaults(func=_cmd_sweep)
    return parser


def _scenario_from_args(args: argparse.Namespace) -> data_io.Scenario:
    mapping = data_io.read_scenario_file(data_io.default_scenario_path())
    mapping.update(data_io.read_scenario_file(args.config))
    for item in getattr(args, "overrides", []):
        key, sep, value = item.partition("=")
        if not sep or key not in data_io.SCENARIO_KEYS:
            raise ValidationError(f"override {item!r} is not KEY=VALUE with a known key")
        mapping[key] = value
    if getattr(args, "h", None) is not None:
        mapping["h"] = format(args.h, ".17g")
    if getattr(args, "steps", None) is not None:
        mapping["n_steps"] = str(args.steps)
    if getattr(args, "scheme", None):
        mapping["scheme"] = args.scheme
    return data_io.build_scenario(mapping)


def _run(scenario: data_io.Scenario) -> Trajectory:
    if scenario.scheme == "rk4":
        return ode_reference.rk4_integrate(scenario.params, scenario.init, scenario.h,
                                           scenario.n_steps, t0_offset=scenario.t0_offset)
    return simulate(scenario.params, scenario.init, StepConfig(h=scenario.h),
                    scenario.n_steps, t0_offset=scenario.t0_offset)


def _format_state(state) -> str:
    return ("S={:.6f} A={:.6f} I={:.6f} Q={:.6f} H={:.6f} Hbar={:.6f} D={:.6f}"
            .format(state.S, state.A, state.I, state.Q, state.H, state.Hbar, state.D))


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _scenario_from_args(args)
    started = time.perf_counter()
    traj = _run(scenario)
    elapsed = time.perf_counter() - started
    data_io.write_trajectory(traj, args.out)
    print(f"R0 = {reproduction_number(scenario.params):.17g}")
    print(f"scheme = {traj.scheme}  h = {traj.h:g}  steps = {scenario.n_steps}")
    print(f"final: {_format_state(traj.final)}")
    print(f"wrote {args.out} ({len(traj.states)} rows) in {elapsed:.3f} s")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    scenario = _scenario_from_args(args)
    params = scenario.params
    cfg = StepConfig(h=scenario.h)
    grouped, rewritten = reproduction_number_forms(params)
    print(f"R0 = {reproduction_number(params):.17g}")
    print(f"R0 (grouped form)   = {grouped:.17g}")
    print(f"R0 (rewritten form) = {rewritten:.17g}")
    try:
        print(f"critical beta = {critical_beta(params):.17g}")
    except DomainError as err:
        print(f"critical beta: {err}")
    point = dfe(params)
    print(f"DFE: {_format_state(point.state)}")
    print(f"DFE step-map residual (h={scenario.h:g}) = "
          f"{fixed_point_residual(params, point.state, cfg):.3e}")
    try:
        lam = endemic_lambda(params)
        flag = "" if lam > 0 else "  (subcritical)" if lam < 0 else "  (threshold)"
        print(f"lambda* = {lam:.17g}{flag}")
    except DomainError as err:
        print(f"lambda*: undefined ({err})")
    try:
        endemic = endemic_equilibrium(params)
        print(f"EE: {_format_state(endemic.state)}")
        print(f"EE step-map residual (h={scenario.h:g}) = "
              f"{fixed_point_residual(params, endemic.state, cfg):.3e}")
    except DomainError as err:
        print(f"EE: none ({err})")
    print(f"classification: {stability.classify(params)}")
    if args.traj:
        traj = data_io.read_trajectory(args.traj)
        report = stability.verify_descent(params, traj)
        out = args.out or (args.traj + ".stability.json")
        data_io.write_report(report, out)
        print(f"descent: violations = {report.descent_violations}, "
              f"verified = {report.verified}, mismatch = {report.diagnostics_mismatch}")
        print(f"wrote {out}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    traj = data_io.read_trajectory(args.traj)
    obs = data_io.load_observed(args.observed)
    mapping = data_io.MAPPING_I_ONLY if args.mapping == "I" else data_io.MAPPING_I_H_HBAR
    report = data_io.compare(traj, obs, mapping)
    print(f"mapping = {report.mapping}")
    print(f"n_points = {report.n_points}")
    print(f"rmse = {report.rmse:.17g}")
    print(f"mae = {report.mae:.17g}")
    print(f"max_abs_error = {report.max_abs_error:.17g}")
    if args.out:
        data_io.write_report(report, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _scenario_from_args(args)
    try:
        h_values = [float(part) for part in args.h_list.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"--h-list must be comma-separated numbers "
                              f"(got {args.h_list!r})") from None
    if not h_values or any(not h > 0 for h in h_values):
        raise ValidationError(f"every h in --h-list must be > 0 (got {args.h_list!r})")
    cap = scenario.params.Lambda / scenario.params.mu
    cap_slack = cap * (1.0 + 1e-12)  # round-off allowance on the invariant-region bound
    print(f"scheme = {scenario.scheme}  steps = {scenario.n_steps}  Lambda/mu = {cap:.17g}")
    print("h,min_component,max_N,halvings,violations")
    total = 0
    for h in sorted(h_values):
        row_scenario = data_io.Scenario(params=scenario.params, init=scenario.init, h=h,
                                        n_steps=scenario.n_steps, t0_date=scenario.t0_date,
                                        scheme=scenario.scheme)
        try:
            traj = _run(row_scenario)
        except StepError as err:
            total += 1
            print(f"{h:g},failed,failed,-,1  # {err}")
            continue
        min_component = min(min(state.living()) for state in traj.states)
        max_n = max(traj.N)
        violations = 0
        if min_component < 0:
            violations += 1
        if traj.N[0] <= cap_slack and max_n > cap_slack:
            violations += 1
        if traj.rk4_halvings > 0:
            violations += 1  # could not run cleanly at the requested h
        total += violations
        print(f"{h:g},{min_component:.17g},{max_n:.17g},{traj.rk4_halvings},{violations}")
    return 2 if total else 0


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except StepError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SaiqhError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
