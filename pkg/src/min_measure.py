"""
Atmomin - MIN Measure
Projective measurements on Alice's qubit, the Hilbert-Schmidt disturbance,
its closed forms, and the brute-force maximisation that adjudicates them.
"""

import math
from dataclasses import dataclass, asdict
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from errors import ContractViolation, DomainError, PreconditionError
from fock_linalg import DensityOperator, alice_marginal, compose, hs_distance_sq
from kruskal_states import SqueezingLike, as_squeezing
from settings import DEFAULT_GRID

UNIT_TOL = 1e-12
MARGINAL_TOL = 1e-8
FLAT_TOL = 1e-10
REFINE_XATOL = 1e-10

IDENTITY_2 = np.eye(2, dtype=np.complex128)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


@dataclass(frozen=True)
class BlochVector:
    """Unit vector selecting Alice's measurement basis."""
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        norm_sq = self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2
        if abs(norm_sq - 1.0) > UNIT_TOL:
            raise DomainError(f"Bloch vector ({self.x1}, {self.x2}, {self.x3}) is not unit (|x|²={norm_sq!r})")

    @classmethod
    def from_x3(cls, x3: float, azimuth: float = 0.0) -> "BlochVector":
        """Vector with polar component x3 and the given azimuth."""
        if not -1.0 <= x3 <= 1.0:
            raise DomainError(f"x3={x3!r} outside [-1, 1]")
        rho = math.sqrt(max(0.0, 1.0 - x3 * x3))
        return cls(rho * math.cos(azimuth), rho * math.sin(azimuth), x3)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)


@dataclass(frozen=True)
class MinReport:
    """Oracle maximum next to the closed-form evaluations it adjudicates."""
    value_numeric: float
    argmax: BlochVector
    value_closed_x3_1: Optional[float]
    value_paper_final: Optional[float]
    value_x3_0: Optional[float]
    cutoff_used: int
    max_abs_residual: Optional[float]
    flat: bool = False
    t: Optional[float] = None

    def to_dict(self) -> Dict:
        out = asdict(self)
        out['argmax'] = list(self.argmax.as_tuple())
        return out


def projectors(x: BlochVector) -> Tuple[np.ndarray, np.ndarray]:
    """Π± = (I ± x·σ) / 2."""
    if not isinstance(x, BlochVector):
        raise DomainError("projectors: expected a unit BlochVector")
    x_sigma = x.x1 * PAULI[0] + x.x2 * PAULI[1] + x.x3 * PAULI[2]
    return 0.5 * (IDENTITY_2 + x_sigma), 0.5 * (IDENTITY_2 - x_sigma)


def _lifted_projectors(rho: DensityOperator, x: BlochVector) -> Tuple[np.ndarray, np.ndarray]:
    if rho.dims[0] != 2:
        raise ContractViolation(f"measurement needs a qubit first factor, got dims {rho.dims}")
    rest = np.eye(rho.dimension // 2, dtype=np.complex128)
    plus, minus = projectors(x)
    return compose(plus, rest), compose(minus, rest)


def apply_measurement(rho: DensityOperator, x: BlochVector) -> DensityOperator:
    """Post-measurement state Σ_α (Π_α ⊗ I) ρ (Π_α ⊗ I)."""
    p_plus, p_minus = _lifted_projectors(rho, x)
    entries = rho.entries
    measured = p_plus @ entries @ p_plus + p_minus @ entries @ p_minus
    return DensityOperator(measured, rho.dims, rho.tail_defect)


def outcome_probabilities(rho: DensityOperator, x: BlochVector) -> Tuple[float, float]:
    """(p₊, p₋) = Tr((Π± ⊗ I) ρ)."""
    p_plus, p_minus = _lifted_projectors(rho, x)
    return (float(np.trace(p_plus @ rho.entries).real),
            float(np.trace(p_minus @ rho.entries).real))


def disturbance_numeric(rho: DensityOperator, x: BlochVector) -> float:
    """||ρ - Π(ρ)||² computed densely."""
    return hs_distance_sq(rho, apply_measurement(rho, x))


def _check_eta(eta: float):
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"entanglement parameter eta={eta!r} outside [0, 1]")


@dataclass(frozen=True)
class MTraces:
    """Traces of products of Bob's M-matrices."""
    m00_sq: float
    m11_sq: float
    m00_m11: float
    m01_m10: float


def m_traces(t: SqueezingLike, eta: float = 1.0) -> MTraces:
    """
    Closed-form traces; Σ t^(4n) is summed to 1/(1 - t⁴).

    Tr(M00 M11) is derived from the M-matrix definitions: the diagonals overlap
    on |m⟩, m >= 1, giving ¼(η+1)²(1-t²)t²/(1-t⁴)².
    """
    q = as_squeezing(t).squared
    q2 = q * q
    half_eta = 0.25 * (eta + 1.0) ** 2
    return MTraces(
        m00_sq=half_eta / (1.0 - q2),
        m11_sq=-(eta + 1.0) ** 2 * (q2 + 1.0) / (4.0 * (q - 1.0) * (q + 1.0) ** 3),
        m00_m11=half_eta * (1.0 - q) * q / (1.0 - q2) ** 2,
        m01_m10=eta ** 2 * (1.0 - q) / (q2 - 1.0) ** 2,
    )


def disturbance_closed_form(t: SqueezingLike, eta: float, x3: float) -> float:
    """
    ((1-t²)²/8) [(1-x3²)(TrM00² + TrM11² - 2TrM00M11) + 2(1+x3²)TrM01M10].

    Raises:
        DomainError: t >= 1, eta outside [0, 1], x3 outside [-1, 1]
    """
    param = as_squeezing(t)
    _check_eta(eta)
    if not -1.0 <= x3 <= 1.0:
        raise DomainError(f"x3={x3!r} outside [-1, 1]")

    traces = m_traces(param, eta)
    diagonal = traces.m00_sq + traces.m11_sq - 2.0 * traces.m00_m11
    prefactor = (1.0 - param.squared) ** 2 / 8.0
    return prefactor * ((1.0 - x3 * x3) * diagonal + 2.0 * (1.0 + x3 * x3) * traces.m01_m10)


def min_paper_final(t: SqueezingLike, eta: float = 1.0) -> float:
    """
    Published final MIN formula, evaluated as printed:
    η²(1-t²)²(t²-1)³(t⁴+1) / (8(t⁴-1)³).
    """
    param = as_squeezing(t)
    _check_eta(eta)
    q = param.squared
    q2 = q * q
    return eta ** 2 * (1.0 - q) ** 2 * (q - 1.0) ** 3 * (q2 + 1.0) / (8.0 * (q2 - 1.0) ** 3)


def discord_direction_value(t: SqueezingLike, eta: float = 1.0) -> float:
    """Closed-form disturbance in the equatorial (x3 = 0) direction."""
    return disturbance_closed_form(t, eta, 0.0)


def min_closed_form(t: SqueezingLike, eta: float = 1.0) -> float:
    """Closed-form maximum over x3; the bracket is affine in x3², so x3² ∈ {0, 1}."""
    return max(disturbance_closed_form(t, eta, 1.0), disturbance_closed_form(t, eta, 0.0))


def _check_marginal(rho: DensityOperator):
    marginal = alice_marginal(rho).entries
    if marginal.shape != (2, 2):
        raise ContractViolation(f"min_numeric: first factor must be a qubit, got dims {rho.dims}")
    defect = float(np.max(np.abs(marginal - 0.5 * IDENTITY_2)))
    if defect > MARGINAL_TOL:
        raise PreconditionError(
            f"Alice marginal is not maximally mixed (max deviation {defect:.3e} > {MARGINAL_TOL:g}); "
            "locally invariant measurements would restrict the admissible set"
        )


def min_numeric(rho: DensityOperator, grid: int = DEFAULT_GRID,
                squeezing: Optional[SqueezingLike] = None, eta: float = 1.0) -> MinReport:
    """
    Maximise the dense disturbance over Alice's measurement direction.

    The disturbance is invariant under azimuthal rotation, so the search runs
    over x3 ∈ [-1, 1] only: a coarse grid, then bounded refinement inside the
    bracket around the best grid point.

    Args:
        rho: state on A ⊗ B_I with maximally mixed Alice marginal
        grid: number of coarse grid points (>= 3)
        squeezing: when given, closed-form columns are filled for this t
        eta: entanglement parameter used for the closed forms

    Raises:
        PreconditionError: Alice marginal not maximally mixed within 1e-8
    """
    if int(grid) != grid or grid < 3:
        raise ContractViolation(f"grid={grid!r} must be an integer >= 3")
    _check_marginal(rho)

    def disturbance_at(x3: float) -> float:
        return disturbance_numeric(rho, BlochVector.from_x3(float(np.clip(x3, -1.0, 1.0))))

    xs = np.linspace(-1.0, 1.0, int(grid))
    values = np.array([disturbance_at(x3) for x3 in xs])
    best = int(np.argmax(values))
    best_x3, best_value = float(xs[best]), float(values[best])
    flat = float(values.max() - values.min()) < FLAT_TOL

    lo = float(xs[max(best - 1, 0)])
    hi = float(xs[min(best + 1, len(xs) - 1)])
    refined = minimize_scalar(lambda x3: -disturbance_at(x3), bounds=(lo, hi),
                              method='bounded', options={'xatol': REFINE_XATOL})
    if refined.success and -refined.fun > best_value:
        best_x3, best_value = float(refined.x), float(-refined.fun)

    cutoff_used = rho.dims[1] - 2 if len(rho.dims) > 1 else 0

    closed_x3_1 = paper_final = x3_0 = residual = t_value = None
    if squeezing is not None:
        param = as_squeezing(squeezing)
        t_value = param.t
        closed_x3_1 = disturbance_closed_form(param, eta, 1.0)
        paper_final = min_paper_final(param, eta)
        x3_0 = discord_direction_value(param, eta)
        residual = abs(best_value - disturbance_closed_form(param, eta, best_x3))

    return MinReport(
        value_numeric=best_value,
        argmax=BlochVector.from_x3(best_x3),
        value_closed_x3_1=closed_x3_1,
        value_paper_final=paper_final,
        value_x3_0=x3_0,
        cutoff_used=cutoff_used,
        max_abs_residual=residual,
        flat=flat,
        t=t_value,
    )
