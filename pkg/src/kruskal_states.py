"""
Atmomin - Kruskal States
Thermal two-mode bosonic states in the occupation basis and the reduced
Alice-Bob density operator, all parametrised by the squeezing parameter t.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np

from errors import ContractViolation, DomainError, TruncationError
from fock_linalg import DensityOperator, PureState, reduce_pure
from settings import DEFAULT_CUTOFF_CAP, DEFAULT_EPSILON_TAIL


class Convention(Enum):
    """Mapping from temperature to t = tanh r."""
    HALF_EXPONENT = "half"   # t = exp(-Ω / 2T), consistent with cosh r = (1 - e^(-Ω/T))^(-1/2)
    FULL_EXPONENT = "full"   # t = exp(-Ω / T)

    @classmethod
    def from_flag(cls, flag: str) -> "Convention":
        try:
            return cls(flag)
        except ValueError:
            raise ContractViolation(f"unknown convention {flag!r} (expected 'half' or 'full')")


@dataclass(frozen=True)
class SqueezingParam:
    """t = tanh r in [0, 1)."""
    t: float

    def __post_init__(self):
        t = float(self.t)
        if not math.isfinite(t) or t < 0.0 or t >= 1.0:
            raise DomainError(f"squeezing parameter t={t!r} outside [0, 1)")
        object.__setattr__(self, 't', t)

    @property
    def squared(self) -> float:
        return self.t * self.t

    @property
    def cosh_r(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.squared)


@dataclass(frozen=True)
class ModeSpec:
    """Field mode frequency (units 1/ℓ_p) plus the t(T) convention."""
    omega: float = 1.0
    convention: Convention = Convention.HALF_EXPONENT

    def __post_init__(self):
        if not math.isfinite(self.omega) or self.omega <= 0.0:
            raise DomainError(f"mode frequency omega={self.omega!r} must be > 0")


@dataclass(frozen=True)
class CutoffPolicy:
    """Truncation policy for the occupation-number series."""
    epsilon_tail: float = DEFAULT_EPSILON_TAIL
    n_max_cap: int = DEFAULT_CUTOFF_CAP

    def __post_init__(self):
        if not 0.0 < self.epsilon_tail < 1.0:
            raise ContractViolation(f"epsilon_tail={self.epsilon_tail!r} must lie in (0, 1)")
        if int(self.n_max_cap) != self.n_max_cap or self.n_max_cap < 1:
            raise ContractViolation(f"n_max_cap={self.n_max_cap!r} must be a positive integer")


SqueezingLike = Union[SqueezingParam, float]


def as_squeezing(t: SqueezingLike) -> SqueezingParam:
    return t if isinstance(t, SqueezingParam) else SqueezingParam(t)


def _check_cutoff(n: int) -> int:
    if int(n) != n or n < 0:
        raise ContractViolation(f"cutoff N={n!r} must be a nonnegative integer")
    return int(n)


def squeezing_from_temperature(temperature: float, mode: ModeSpec) -> SqueezingParam:
    """
    Squeezing parameter for a mode in a bath at the given temperature.

    Args:
        temperature: local temperature, units 1/ℓ_p
        mode: frequency and convention

    Returns:
        SqueezingParam, t = 0 exactly at zero temperature

    Raises:
        DomainError: negative or non-finite temperature, or t rounding up to 1
    """
    temperature = float(temperature)
    if not math.isfinite(temperature) or temperature < 0.0:
        raise DomainError(f"temperature {temperature!r} must be finite and >= 0")
    if temperature == 0.0:
        return SqueezingParam(0.0)

    if mode.convention is Convention.HALF_EXPONENT:
        exponent = mode.omega / (2.0 * temperature)
    else:
        exponent = mode.omega / temperature

    t = math.exp(-exponent)
    if t >= 1.0:
        raise DomainError(f"temperature {temperature!r} saturates t to 1 for omega={mode.omega!r}")
    return SqueezingParam(t)


def vacuum_tail(t: SqueezingLike, n: int) -> float:
    """Weight of the vacuum series beyond occupation N: t^(2(N+1))."""
    q = as_squeezing(t).squared
    return q ** (_check_cutoff(n) + 1)


def excited_tail(t: SqueezingLike, n: int) -> float:
    """Weight of the excited series beyond N: q^(N+1) (1 + (N+1)(1-q)), q = t²."""
    q = as_squeezing(t).squared
    n = _check_cutoff(n)
    return q ** (n + 1) * (1.0 + (n + 1) * (1.0 - q))


def choose_cutoff(t: SqueezingLike, policy: CutoffPolicy = CutoffPolicy()) -> int:
    """
    Smallest N with t^(2(N+1)) <= epsilon_tail.

    Raises:
        TruncationError: N above policy.n_max_cap (reports the achievable tail)
    """
    q = as_squeezing(t).squared
    if q == 0.0:
        return 0

    eps = policy.epsilon_tail
    n = max(0, math.ceil(math.log(eps) / math.log(q)) - 1)
    # log rounding can land one step off either way
    while q ** (n + 1) > eps:
        n += 1
    while n > 0 and q ** n <= eps:
        n -= 1

    if n > policy.n_max_cap:
        achievable = q ** (policy.n_max_cap + 1)
        raise TruncationError(
            f"cutoff N={n} needed for t={math.sqrt(q):.6g} exceeds cap {policy.n_max_cap} "
            f"(achievable tail {achievable:.3e})",
            required=n,
            achievable_epsilon=achievable,
        )
    return n


def kruskal_vacuum(t: SqueezingLike, n: int) -> PureState:
    """
    √(1-t²) Σ_{k<=N} t^k |k⟩_I |k⟩_II on B_I ⊗ B_II, dims (N+2, N+1).
    """
    param = as_squeezing(t)
    n = _check_cutoff(n)
    k = np.arange(n + 1)

    amps = np.zeros((n + 2, n + 1))
    amps[k, k] = math.sqrt(1.0 - param.squared) * np.power(param.t, k)
    return PureState(amps, (n + 2, n + 1), vacuum_tail(param, n))


def kruskal_excited(t: SqueezingLike, n: int) -> PureState:
    """
    (1-t²) Σ_{k<=N} √(k+1) t^k |k+1⟩_I |k⟩_II on B_I ⊗ B_II, dims (N+2, N+1).
    """
    param = as_squeezing(t)
    n = _check_cutoff(n)
    k = np.arange(n + 1)

    amps = np.zeros((n + 2, n + 1))
    amps[k + 1, k] = (1.0 - param.squared) * np.sqrt(k + 1.0) * np.power(param.t, k)
    return PureState(amps, (n + 2, n + 1), excited_tail(param, n))


def lifted_bell(t: SqueezingLike, n: int) -> PureState:
    """
    (|0⟩ ⊗ vacuum + |1⟩ ⊗ excited) / √2 on A ⊗ B_I ⊗ B_II, dims (2, N+2, N+1).
    """
    vacuum = kruskal_vacuum(t, n)
    excited = kruskal_excited(t, n)

    amps = np.stack([vacuum.tensor(), excited.tensor()]) / math.sqrt(2.0)
    tail = 0.5 * (vacuum.tail_defect + excited.tail_defect)
    return PureState(amps, (2,) + vacuum.dims, tail)


def reduced_state(t: SqueezingLike, n: int) -> DensityOperator:
    """ρ_{A B_I}: the lifted Bell state with region II traced out."""
    return reduce_pure(lifted_bell(t, n))


def reduced_state_for(t: SqueezingLike, policy: CutoffPolicy = CutoffPolicy()) -> Tuple[DensityOperator, int]:
    """Reduced state at the cutoff chosen by the policy; returns (rho, N)."""
    n = choose_cutoff(t, policy)
    return reduced_state(t, n), n
