"""
Atmomin - Sweeps
Maps atmosphere points to MIN values, runs the radius / temperature / grid
sweeps, the peak table and the closed-form adjudication, and renders the
results as CSV or JSON documents.
"""

import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from atmosphere import (
    AtmospherePoint, hawking_temperature, local_temperature, peak_radius, temperature_ratio,
)
from errors import AtmominError, ContractViolation, DomainError
from kruskal_states import (
    Convention, CutoffPolicy, ModeSpec, SqueezingParam, choose_cutoff, reduced_state,
    squeezing_from_temperature,
)
from min_measure import (
    discord_direction_value, disturbance_closed_form, min_numeric, min_paper_final,
)
from settings import DEFAULT_DHH_LIST, DEFAULT_GRID, DEFAULT_RH, DEFAULT_STEPS, RunSettings

ADJUDICATION_TOL = 1e-6


class SweepMode(Enum):
    RADIUS = "sweep-r"
    TEMPERATURE = "sweep-tau"
    GRID = "grid"
    ADJUDICATE = "adjudicate"


@dataclass(frozen=True)
class AxisRange:
    """Linear axis: steps intervals, steps + 1 points including both ends."""
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ContractViolation(f"axis steps={self.steps!r} must be an integer >= 1")
        if not self.min < self.max:
            raise ContractViolation(f"axis bounds must satisfy min < max, got [{self.min}, {self.max}]")

    def points(self) -> np.ndarray:
        return np.linspace(self.min, self.max, int(self.steps) + 1)


@dataclass(frozen=True)
class SweepSpec:
    """Everything a sweep needs; ranges are keyed by axis name (x, tau, r, r_h)."""
    mode: SweepMode
    ranges: Dict[str, AxisRange] = field(default_factory=dict)
    d_hh_list: Tuple[float, ...] = DEFAULT_DHH_LIST
    omega: float = 1.0
    eta: float = 1.0
    convention: Convention = Convention.HALF_EXPONENT
    epsilon_tail: float = 1e-12
    cutoff_cap: int = 2048
    numeric_check: bool = False
    verify_stride: Optional[int] = None
    output_path: Optional[str] = None
    r_h: float = DEFAULT_RH
    grid: int = DEFAULT_GRID
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if not self.d_hh_list:
            raise ContractViolation("d_hh_list must not be empty")
        if self.verify_stride is not None and self.verify_stride < 1:
            raise ContractViolation(f"verify stride {self.verify_stride!r} must be >= 1")
        if not self.r_h > 0.0:
            raise ContractViolation(f"r_h={self.r_h!r} must be > 0")

        if self.mode is SweepMode.RADIUS:
            axis = self._require('x')
            if not axis.min > 1.0:
                raise ContractViolation(f"radius sweeps need x_min > 1, got {axis.min!r}")
        elif self.mode is SweepMode.TEMPERATURE:
            axis = self.ranges.get('tau')
            if axis is not None and axis.min < 0.0:
                raise ContractViolation(f"tau axis must start at >= 0, got {axis.min!r}")
        elif self.mode is SweepMode.GRID:
            self._require('r')
            rh_axis = self._require('r_h')
            if not rh_axis.min > 0.0:
                raise ContractViolation(f"r_h axis must stay > 0, got {rh_axis.min!r}")

    def _require(self, axis: str) -> AxisRange:
        if axis not in self.ranges:
            raise ContractViolation(f"{self.mode.value} needs a '{axis}' axis")
        return self.ranges[axis]

    @property
    def policy(self) -> CutoffPolicy:
        return CutoffPolicy(self.epsilon_tail, self.cutoff_cap)

    def runs_oracle(self, index: int) -> bool:
        if self.eta != 1.0:
            return False
        if self.numeric_check:
            return True
        return self.verify_stride is not None and index % self.verify_stride == 0


@dataclass(frozen=True)
class SweepRow:
    """One CSV row; empty cells are either not applicable or masked (see mask)."""
    d_hh: float
    x: Optional[float] = None
    r: Optional[float] = None
    r_h: Optional[float] = None
    t_hh_over_th: Optional[float] = None
    t_param: Optional[float] = None
    min_closed: Optional[float] = None
    min_paper_final: Optional[float] = None
    min_x3_0: Optional[float] = None
    min_numeric: Optional[float] = None
    cutoff_used: Optional[int] = None
    mask: str = ""


SWEEP_FIELDS = [f.name for f in fields(SweepRow)]
PEAK_FIELDS = ['d_hh', 'x_peak', 'tau_peak', 't_param', 'min_closed', 'min_paper_final']


# ==================== Point evaluation ====================

def _evaluate_t(t: SqueezingParam, eta: float, policy: CutoffPolicy,
                numeric: bool, grid: int) -> Dict:
    """MIN columns for a squeezing parameter; cutoff problems mask only the cutoff cells."""
    values = {
        't_param': t.t,
        'min_closed': disturbance_closed_form(t, eta, 1.0),
        'min_paper_final': min_paper_final(t, eta),
        'min_x3_0': discord_direction_value(t, eta),
    }
    try:
        cutoff = choose_cutoff(t, policy)
        values['cutoff_used'] = cutoff
        if numeric:
            report = min_numeric(reduced_state(t, cutoff), grid=grid, squeezing=t, eta=eta)
            values['min_numeric'] = report.value_numeric
    except AtmominError as e:
        values['cutoff_used'] = None
        values['min_numeric'] = None
        values['mask'] = e.reason
    return values


def min_at_point(p: AtmospherePoint, eta: float = 1.0,
                 convention: Convention = Convention.HALF_EXPONENT,
                 policy: CutoffPolicy = CutoffPolicy(),
                 numeric: bool = False, grid: int = DEFAULT_GRID) -> SweepRow:
    """
    Local temperature → squeezing parameter → MIN at one observation point.

    Subcritical D_HH and cutoff overflow come back as masked rows, never raised.
    """
    base = {'d_hh': p.d_hh, 'x': p.x, 'r': p.r, 'r_h': p.r_h}
    try:
        temperature = local_temperature(p)
        t = squeezing_from_temperature(temperature.value, ModeSpec(p.omega, convention))
    except DomainError as e:
        return SweepRow(**base, mask=e.reason)

    ratio = temperature.value / hawking_temperature(p.r_h).value
    return SweepRow(**base, t_hh_over_th=ratio, **_evaluate_t(t, eta, policy, numeric, grid))


def min_at_ratio(tau: float, r_h: float, d_hh: float, omega: float = 1.0, eta: float = 1.0,
                 convention: Convention = Convention.HALF_EXPONENT,
                 policy: CutoffPolicy = CutoffPolicy(),
                 numeric: bool = False, grid: int = DEFAULT_GRID) -> SweepRow:
    """MIN at a prescribed scaled temperature τ = T_HH / T_H (x and r left empty)."""
    base = {'d_hh': d_hh, 'r_h': r_h, 't_hh_over_th': tau}
    try:
        temperature = tau * hawking_temperature(r_h).value
        t = squeezing_from_temperature(temperature, ModeSpec(omega, convention))
    except DomainError as e:
        return SweepRow(**base, mask=e.reason)
    return SweepRow(**base, **_evaluate_t(t, eta, policy, numeric, grid))


# ==================== Sweeps ====================

def _sweep_tasks(spec: SweepSpec) -> List[Callable[[], SweepRow]]:
    """Zero-argument jobs in output order: sorted D_HH, then axis indices."""
    common = {'eta': spec.eta, 'convention': spec.convention,
              'policy': spec.policy, 'grid': spec.grid}
    tasks = []

    for d_hh in sorted(spec.d_hh_list):
        index = 0
        if spec.mode is SweepMode.RADIUS:
            for x in spec.ranges['x'].points():
                point = AtmospherePoint(float(x) * spec.r_h, spec.r_h, d_hh, spec.omega)
                tasks.append(partial(min_at_point, point, numeric=spec.runs_oracle(index), **common))
                index += 1

        elif spec.mode is SweepMode.TEMPERATURE:
            axis = spec.ranges.get('tau')
            if axis is None:
                try:
                    tau_peak = temperature_ratio(peak_radius(d_hh), d_hh)
                except DomainError as e:
                    # no peak to end the default range at; the whole panel is masked
                    tasks.extend(partial(SweepRow, d_hh=d_hh, r_h=spec.r_h, mask=e.reason)
                                 for _ in range(spec.steps + 1))
                    continue
                axis = AxisRange(0.0, tau_peak, spec.steps)
            for tau in axis.points():
                tasks.append(partial(min_at_ratio, float(tau), spec.r_h, d_hh, spec.omega,
                                     numeric=spec.runs_oracle(index), **common))
                index += 1

        elif spec.mode is SweepMode.GRID:
            for r in spec.ranges['r'].points():
                for r_h in spec.ranges['r_h'].points():
                    r, r_h = float(r), float(r_h)
                    if r <= r_h:
                        tasks.append(partial(SweepRow, d_hh=d_hh, r=r, r_h=r_h, mask="inside-horizon"))
                    else:
                        point = AtmospherePoint(r, r_h, d_hh, spec.omega)
                        tasks.append(partial(min_at_point, point,
                                             numeric=spec.runs_oracle(index), **common))
                    index += 1
        else:
            raise ContractViolation(f"{spec.mode.value} is not a row sweep")
    return tasks


def _run_parallel(jobs: Sequence[Callable], threads: int) -> List:
    """Run jobs; results come back in job order whatever the schedule."""
    if threads <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: job(), jobs))


def sweep_rows(spec: SweepSpec, threads: int = 1) -> List[SweepRow]:
    return _run_parallel(_sweep_tasks(spec), threads)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def render_csv(records: Iterable[Dict], columns: Sequence[str], metadata: Dict) -> str:
    """
    CSV with '#'-prefixed metadata lines, LF endings and shortest round-trip floats.
    """
    table = pd.DataFrame(
        [[_format_cell(rec.get(col)) for col in columns] for rec in records],
        columns=list(columns),
        dtype=str,
    )
    buffer = io.StringIO()
    for key, value in metadata.items():
        buffer.write(f"# {key}: {_format_cell(value)}\n")
    table.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def write_document(text: str, output_path: Optional[str]):
    """Write to output_path (LF kept as-is); no-op when no path is set."""
    if output_path is None:
        return
    with open(output_path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)


def _check_writable(output_path: Optional[str]):
    if output_path is None:
        return
    parent = Path(output_path).resolve().parent
    if not parent.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {parent}")


def spec_metadata(spec: SweepSpec) -> Dict:
    settings = RunSettings(omega=spec.omega, eta=spec.eta, convention=spec.convention.value,
                           epsilon_tail=spec.epsilon_tail, cutoff_cap=spec.cutoff_cap)
    meta = settings.metadata()
    meta['mode'] = spec.mode.value
    if spec.mode in (SweepMode.RADIUS, SweepMode.TEMPERATURE):
        meta['r_h'] = spec.r_h
    for name in sorted(spec.ranges):
        axis = spec.ranges[name]
        meta[f"axis_{name}"] = f"{axis.min!r}..{axis.max!r}/{axis.steps}"
    if spec.numeric_check:
        meta['oracle'] = "every point"
    elif spec.verify_stride is not None:
        meta['oracle'] = f"every {spec.verify_stride} points"
    return meta


def run_sweep(spec: SweepSpec, threads: int = 1) -> str:
    """
    Run a radius / temperature / grid sweep and return the CSV document.

    The document is also written to spec.output_path when one is set. Bytes
    do not depend on the number of threads.

    Raises:
        OSError: output path not writable
        ContractViolation: invalid ranges or mode
    """
    _check_writable(spec.output_path)
    rows = sweep_rows(spec, threads)
    text = render_csv((vars(row) for row in rows), SWEEP_FIELDS, spec_metadata(spec))
    write_document(text, spec.output_path)
    return text


# ==================== Peak table ====================

def peak_rows(d_hh_list: Sequence[float], r_h: float = DEFAULT_RH, omega: float = 1.0,
              eta: float = 1.0, convention: Convention = Convention.HALF_EXPONENT) -> List[Dict]:
    """Location and depth of the MIN minimum (the T_HH peak) per D_HH."""
    records = []
    for d_hh in sorted(d_hh_list):
        x_peak = peak_radius(d_hh)
        row = min_at_point(AtmospherePoint(x_peak * r_h, r_h, d_hh, omega), eta=eta, convention=convention)
        records.append({
            'd_hh': d_hh,
            'x_peak': x_peak,
            'tau_peak': row.t_hh_over_th,
            't_param': row.t_param,
            'min_closed': row.min_closed,
            'min_paper_final': row.min_paper_final,
        })
    return records


# ==================== Adjudication ====================

def _adjudicate_one(t: float, policy: CutoffPolicy, grid: int) -> Dict:
    param = SqueezingParam(t)
    cutoff = choose_cutoff(param, policy)
    report = min_numeric(reduced_state(param, cutoff), grid=grid, squeezing=param, eta=1.0)
    return {
        't': param.t,
        'cutoff_used': cutoff,
        'min_numeric': report.value_numeric,
        'closed_x3_1': report.value_closed_x3_1,
        'paper_final': report.value_paper_final,
        'x3_0': report.value_x3_0,
        'ratio_numeric_over_paper': report.value_numeric / report.value_paper_final,
        'argmax_x3': report.argmax.x3,
        'flat': report.flat,
        'residual_closed_x3_1': abs(report.value_numeric - report.value_closed_x3_1),
        'residual_paper_final': abs(report.value_numeric - report.value_paper_final),
    }


def adjudicate(t_grid: Sequence[float], policy: CutoffPolicy = CutoffPolicy(),
               grid: int = DEFAULT_GRID, threads: int = 1,
               settings: Optional[RunSettings] = None) -> Dict:
    """
    Compare the dense oracle against both closed forms on a grid of t.

    Raises:
        DomainError: t outside [0, 1)
        TruncationError: cutoff above the cap for some t
    """
    if not t_grid:
        raise ContractViolation("adjudicate needs at least one t value")
    records = _run_parallel([partial(_adjudicate_one, float(t), policy, grid) for t in t_grid], threads)

    tracks = {
        form: all(rec[f"residual_{form}"] < ADJUDICATION_TOL for rec in records)
        for form in ('closed_x3_1', 'paper_final')
    }
    consistent = [form for form, ok in tracks.items() if ok]
    verdict = consistent[0] if len(consistent) == 1 else ("both" if consistent else "none")

    settings = settings or RunSettings(epsilon_tail=policy.epsilon_tail, cutoff_cap=policy.n_max_cap)
    return {
        'settings': settings.metadata(),
        'grid': grid,
        'records': records,
        'summary': {
            'tolerance': ADJUDICATION_TOL,
            'tracks_oracle': tracks,
            'oracle_consistent_form': verdict,
            'max_residual_closed_x3_1': max(rec['residual_closed_x3_1'] for rec in records),
            'max_residual_paper_final': max(rec['residual_paper_final'] for rec in records),
        },
    }


def to_json(document: Dict) -> str:
    """JSON with insertion-ordered keys and a trailing newline."""
    return json.dumps(document, indent=2) + "\n"
