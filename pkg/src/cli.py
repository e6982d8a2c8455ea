"""
Atmomin - Command Line
argparse surface over the numerics modules. JSON and CSV payloads go to
--out or stdout; status lines go to stderr.

Exit codes: 0 ok, 2 invalid arguments, 3 domain error, 4 cutoff overflow,
5 I/O failure.
"""

import argparse
import math
import sys
from typing import Dict, Optional, Sequence

from atmosphere import (
    AtmospherePoint, critical_constant, dhh_from_observables, hawking_temperature,
    local_temperature, temperature_ratio,
)
from errors import AtmominError, ContractViolation
from kruskal_states import (
    Convention, CutoffPolicy, ModeSpec, SqueezingParam, reduced_state_for,
    squeezing_from_temperature,
)
from min_measure import (
    discord_direction_value, disturbance_closed_form, min_closed_form, min_numeric,
    min_paper_final,
)
from settings import (
    DEFAULT_CONVENTION, DEFAULT_CUTOFF_CAP, DEFAULT_DHH_LIST, DEFAULT_EPSILON_TAIL,
    DEFAULT_ETA, DEFAULT_GRID, DEFAULT_OMEGA, DEFAULT_RH, DEFAULT_STEPS,
    DEFAULT_VERIFY_STRIDE, DEFAULT_X_MAX, DEFAULT_X_MIN, TOOL_NAME, RunSettings,
    get_current_version, threads_from_env,
)
from sweep import (
    PEAK_FIELDS, AxisRange, SweepMode, SweepSpec, adjudicate, peak_rows, render_csv,
    run_sweep, to_json, write_document,
)

EXIT_OK = 0
EXIT_IO = 5

DEFAULT_T_GRID = tuple(round(0.1 * k, 1) for k in range(10))


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=float, default=DEFAULT_OMEGA, help="mode frequency, 1/ℓ_p")
    common.add_argument("--eta", type=float, default=DEFAULT_ETA, help="entanglement parameter in [0, 1]")
    common.add_argument("--convention", choices=[c.value for c in Convention], default=DEFAULT_CONVENTION,
                        help="t = exp(-Ω/2T) (half) or exp(-Ω/T) (full)")
    common.add_argument("--eps-tail", type=float, default=DEFAULT_EPSILON_TAIL, dest="eps_tail")
    common.add_argument("--cutoff-cap", type=int, default=DEFAULT_CUTOFF_CAP, dest="cutoff_cap")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--verify", type=int, nargs="?", const=DEFAULT_VERIFY_STRIDE, default=None,
                        metavar="K", help="run the dense oracle on every K-th sweep point")
    common.add_argument("--threads", type=int, default=None, help="worker threads (env ATMOMIN_THREADS)")
    common.add_argument("--quiet", action="store_true", help="suppress status lines")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="MIN of a bosonic bipartite state in the Hartle-Hawking quantum atmosphere",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {get_current_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("temp", parents=[common], help="local temperature at a radius")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--rh", type=float, default=DEFAULT_RH)
    p.add_argument("--dhh", type=float, required=True)

    p = sub.add_parser("dhh", parents=[common], help="invert the profile for D_HH")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)

    p = sub.add_parser("min", parents=[common], help="MIN at a single point")
    point = p.add_mutually_exclusive_group(required=True)
    point.add_argument("--t", type=float)
    point.add_argument("--tau", type=float)
    point.add_argument("--x", type=float)
    p.add_argument("--rh", type=float, default=DEFAULT_RH)
    p.add_argument("--dhh", type=float)
    p.add_argument("--numeric", action="store_true", help="also run the dense oracle")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)

    p = sub.add_parser("sweep-r", parents=[common], help="MIN against r/r_H")
    p.add_argument("--x-min", type=float, default=DEFAULT_X_MIN, dest="x_min")
    p.add_argument("--x-max", type=float, default=DEFAULT_X_MAX, dest="x_max")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--rh", type=float, default=DEFAULT_RH)
    p.add_argument("--dhh", type=float, nargs="+", default=list(DEFAULT_DHH_LIST))
    p.add_argument("--numeric", action="store_true")

    p = sub.add_parser("sweep-tau", parents=[common], help="MIN against T_HH/T_H")
    p.add_argument("--tau-min", type=float, default=0.0, dest="tau_min")
    p.add_argument("--tau-max", type=float, default=None, dest="tau_max",
                   help="default: the peak of T_HH/T_H for each D_HH")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--rh", type=float, default=DEFAULT_RH)
    p.add_argument("--dhh", type=float, nargs="+", default=list(DEFAULT_DHH_LIST))
    p.add_argument("--numeric", action="store_true")

    p = sub.add_parser("grid", parents=[common], help="MIN on the (r, r_H) plane")
    p.add_argument("--r-min", type=float, default=1.01, dest="r_min")
    p.add_argument("--r-max", type=float, default=5.0, dest="r_max")
    p.add_argument("--rh-min", type=float, default=0.1, dest="rh_min")
    p.add_argument("--rh-max", type=float, default=1.0, dest="rh_max")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--dhh", type=float, nargs="+", default=list(DEFAULT_DHH_LIST))
    p.add_argument("--numeric", action="store_true")

    p = sub.add_parser("adjudicate", parents=[common], help="oracle against both closed forms")
    p.add_argument("--t-grid", type=float, nargs="+", default=list(DEFAULT_T_GRID), dest="t_grid")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)

    p = sub.add_parser("critical", parents=[common], help="positivity threshold of D_HH")
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=50.0)

    p = sub.add_parser("peaks", parents=[common], help="peak location and MIN depth per D_HH")
    p.add_argument("--rh", type=float, default=DEFAULT_RH)
    p.add_argument("--dhh", type=float, nargs="+", default=list(DEFAULT_DHH_LIST))

    return parser


def settings_from_args(args: argparse.Namespace) -> RunSettings:
    """
    Validate the common flags and fold them, plus the environment, into RunSettings.

    Raises:
        ContractViolation: flag values outside their ranges
    """
    if not (math.isfinite(args.omega) and args.omega > 0.0):
        raise ContractViolation(f"--omega must be > 0, got {args.omega!r}")
    if not 0.0 <= args.eta <= 1.0:
        raise ContractViolation(f"--eta must lie in [0, 1], got {args.eta!r}")
    if not 0.0 < args.eps_tail < 1.0:
        raise ContractViolation(f"--eps-tail must lie in (0, 1), got {args.eps_tail!r}")
    if args.cutoff_cap < 1:
        raise ContractViolation(f"--cutoff-cap must be >= 1, got {args.cutoff_cap!r}")
    if args.verify is not None and args.verify < 1:
        raise ContractViolation(f"--verify must be >= 1, got {args.verify!r}")
    if args.threads is not None and args.threads < 1:
        raise ContractViolation(f"--threads must be >= 1, got {args.threads!r}")

    return RunSettings(
        omega=args.omega,
        eta=args.eta,
        convention=args.convention,
        epsilon_tail=args.eps_tail,
        cutoff_cap=args.cutoff_cap,
        threads=threads_from_env(args.threads),
        quiet=args.quiet,
    )


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_document(text, out)


def _policy(settings: RunSettings) -> CutoffPolicy:
    return CutoffPolicy(settings.epsilon_tail, settings.cutoff_cap)


def _mode(settings: RunSettings) -> ModeSpec:
    return ModeSpec(settings.omega, Convention.from_flag(settings.convention))


# ==================== Single-value commands ====================

def cmd_temp(args, settings: RunSettings) -> Dict:
    point = AtmospherePoint(args.r, args.rh, args.dhh, settings.omega)
    t_h = hawking_temperature(args.rh).value
    t_hh = local_temperature(point).value
    return {
        'settings': settings.metadata(),
        'r': args.r,
        'r_h': args.rh,
        'x': point.x,
        'd_hh': args.dhh,
        't_h': t_h,
        't_hh': t_hh,
        't_hh_over_th': temperature_ratio(point.x, args.dhh),
    }


def cmd_dhh(args, settings: RunSettings) -> Dict:
    return {
        'settings': settings.metadata(),
        'x': args.x,
        'tau': args.tau,
        'd_hh': dhh_from_observables(args.x, args.tau),
    }


def cmd_min(args, settings: RunSettings) -> Dict:
    out = {'settings': settings.metadata()}
    mode = _mode(settings)

    if args.t is not None:
        t = SqueezingParam(args.t)
    elif args.tau is not None:
        if args.tau < 0.0:
            raise ContractViolation(f"--tau must be >= 0, got {args.tau!r}")
        temperature = args.tau * hawking_temperature(args.rh).value
        out.update({'tau': args.tau, 'r_h': args.rh, 't_hh': temperature})
        t = squeezing_from_temperature(temperature, mode)
    else:
        if args.dhh is None:
            raise ContractViolation("min --x needs --dhh")
        point = AtmospherePoint(args.x * args.rh, args.rh, args.dhh, settings.omega)
        temperature = local_temperature(point).value
        out.update({'x': args.x, 'r_h': args.rh, 'd_hh': args.dhh, 't_hh': temperature,
                    'tau': temperature_ratio(args.x, args.dhh)})
        t = squeezing_from_temperature(temperature, mode)

    out.update({
        't_param': t.t,
        'min_closed': disturbance_closed_form(t, settings.eta, 1.0),
        'min_closed_max': min_closed_form(t, settings.eta),
        'min_paper_final': min_paper_final(t, settings.eta),
        'min_x3_0': discord_direction_value(t, settings.eta),
    })

    if args.numeric:
        rho, cutoff = reduced_state_for(t, _policy(settings))
        report = min_numeric(rho, grid=args.grid, squeezing=t, eta=settings.eta)
        out.update({
            'cutoff_used': cutoff,
            'min_numeric': report.value_numeric,
            'argmax_x3': report.argmax.x3,
            'flat': report.flat,
        })
    return out


def cmd_critical(args, settings: RunSettings) -> Dict:
    settings.status(f"🔭 Searching D_HH in [{args.lo}, {args.hi}] for radicand positivity...")
    report = critical_constant((args.lo, args.hi))
    out = {'settings': settings.metadata()}
    out.update(report.to_dict())
    return out


def cmd_adjudicate(args, settings: RunSettings) -> Dict:
    if settings.eta != 1.0:
        settings.status("⚠️ adjudicate compares at eta = 1; --eta is ignored")
    settings.status(f"🔭 Adjudicating {len(args.t_grid)} t values (grid {args.grid}, "
                    f"{settings.threads} thread(s))...")
    report = adjudicate(args.t_grid, _policy(settings), grid=args.grid,
                        threads=settings.threads, settings=settings)
    settings.status(f"✅ Oracle-consistent form: {report['summary']['oracle_consistent_form']}")
    return report


# ==================== Table commands ====================

def sweep_spec_from_args(args, settings: RunSettings) -> SweepSpec:
    """Translate a sweep subcommand into a SweepSpec."""
    if args.command == "sweep-r":
        mode = SweepMode.RADIUS
        ranges = {'x': AxisRange(args.x_min, args.x_max, args.steps)}
        r_h = args.rh
    elif args.command == "sweep-tau":
        mode = SweepMode.TEMPERATURE
        ranges = {}
        if args.tau_max is not None:
            ranges['tau'] = AxisRange(args.tau_min, args.tau_max, args.steps)
        r_h = args.rh
    else:
        mode = SweepMode.GRID
        ranges = {
            'r': AxisRange(args.r_min, args.r_max, args.steps),
            'r_h': AxisRange(args.rh_min, args.rh_max, args.steps),
        }
        r_h = DEFAULT_RH

    return SweepSpec(
        mode=mode,
        ranges=ranges,
        d_hh_list=tuple(args.dhh),
        omega=settings.omega,
        eta=settings.eta,
        convention=Convention.from_flag(settings.convention),
        epsilon_tail=settings.epsilon_tail,
        cutoff_cap=settings.cutoff_cap,
        numeric_check=args.numeric,
        verify_stride=args.verify,
        output_path=args.out,
        r_h=r_h,
        steps=args.steps,
    )


def cmd_sweep(args, settings: RunSettings) -> str:
    spec = sweep_spec_from_args(args, settings)
    if settings.eta != 1.0 and (spec.numeric_check or spec.verify_stride):
        settings.status("⚠️ eta != 1: the oracle is only defined at eta = 1, skipping min_numeric")
    settings.status(f"🔭 Running {spec.mode.value} for D_HH = {list(spec.d_hh_list)} "
                    f"on {settings.threads} thread(s)...")
    text = run_sweep(spec, threads=settings.threads)
    rows = sum(1 for line in text.splitlines() if line and not line.startswith("#")) - 1
    settings.status(f"✅ {rows} rows" + (f" written to {args.out}" if args.out else ""))
    return text


def cmd_peaks(args, settings: RunSettings) -> str:
    records = peak_rows(args.dhh, r_h=args.rh, omega=settings.omega, eta=settings.eta,
                        convention=Convention.from_flag(settings.convention))
    meta = settings.metadata()
    meta['mode'] = "peaks"
    meta['r_h'] = args.rh
    return render_csv(records, PEAK_FIELDS, meta)


JSON_COMMANDS = {
    'temp': cmd_temp,
    'dhh': cmd_dhh,
    'min': cmd_min,
    'critical': cmd_critical,
    'adjudicate': cmd_adjudicate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch, and map failures onto exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    quiet = getattr(args, 'quiet', False)

    try:
        settings = settings_from_args(args)
        if args.command in JSON_COMMANDS:
            _emit(to_json(JSON_COMMANDS[args.command](args, settings)), args.out)
        elif args.command == "peaks":
            _emit(cmd_peaks(args, settings), args.out)
        else:
            text = cmd_sweep(args, settings)
            if args.out is None:
                _emit(text, None)
    except AtmominError as e:
        if not quiet:
            print(f"❌ {e.reason}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        if not quiet:
            print(f"❌ I/O failure: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
