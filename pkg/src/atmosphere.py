"""
Atmomin - Atmosphere
Hawking temperature, the Hartle-Hawking local temperature profile, its
inversion for D_HH, and the peak / critical-constant searches.

Radial arithmetic runs on x = r / r_H; absolute radii appear only at the
AtmospherePoint boundary.
"""

import math
from dataclasses import dataclass, asdict
from typing import Dict, Tuple

import numpy as np
from scipy.optimize import bisect, brentq, minimize_scalar

from errors import DomainError, PoleError, SearchError, SubcriticalError
from settings import PUBLISHED_CRITICAL_CONSTANT

SEARCH_X_MAX = 100.0
SEARCH_POINTS = 4001
CRITICAL_XTOL = 1e-6
DEFAULT_CRITICAL_BOUNDS = (0.0, 50.0)


@dataclass(frozen=True)
class AtmospherePoint:
    """Observation point (r, r_H in Planck lengths), Hartle-Hawking constant, mode frequency."""
    r: float
    r_h: float
    d_hh: float
    omega: float = 1.0

    def __post_init__(self):
        if not self.r_h > 0.0:
            raise DomainError(f"horizon radius r_h={self.r_h!r} must be > 0")
        if not self.r >= self.r_h:
            raise DomainError(f"r={self.r!r} lies inside the horizon r_h={self.r_h!r}")
        if not self.omega > 0.0:
            raise DomainError(f"omega={self.omega!r} must be > 0")

    @property
    def x(self) -> float:
        return self.r / self.r_h


@dataclass(frozen=True)
class Temperature:
    """Temperature in units of 1/ℓ_p."""
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0.0:
            raise DomainError(f"temperature {self.value!r} must be finite and >= 0")


@dataclass(frozen=True)
class CriticalReport:
    """Positivity threshold of D_HH under the bare radicand criterion."""
    d_c: float
    tangency_x: float
    tangency_residual: float
    search_bounds: Tuple[float, float]
    published_value: float = PUBLISHED_CRITICAL_CONSTANT
    criterion: str = "radicand-positivity"

    @property
    def deviation(self) -> float:
        return self.d_c - self.published_value

    def to_dict(self) -> Dict:
        out = asdict(self)
        out['search_bounds'] = list(self.search_bounds)
        out['deviation'] = self.deviation
        return out


def hawking_temperature(r_h: float) -> Temperature:
    """T_H = 1 / (4π r_H)."""
    if not r_h > 0.0:
        raise DomainError(f"horizon radius r_h={r_h!r} must be > 0")
    return Temperature(1.0 / (4.0 * math.pi * r_h))


def radicand(x, d_hh: float):
    """
    Second radicand of the profile: 1 + 2u + u²(9 + 4D + 36 ln u), u = 1/x.

    Accepts scalars or numpy arrays.
    """
    u = 1.0 / np.asarray(x, dtype=float)
    value = 1.0 + 2.0 * u + u * u * (9.0 + 4.0 * d_hh + 36.0 * np.log(u))
    return float(value) if np.ndim(value) == 0 else value


def _ratio_sq(x, d_hh: float):
    """(T_HH / T_H)² = (1 - 1/x) · radicand; no sign checks."""
    x = np.asarray(x, dtype=float)
    return (1.0 - 1.0 / x) * radicand(x, d_hh)


def _ratio_sq_slope(x: float, d_hh: float) -> float:
    """d(T_HH/T_H)²/dx in closed form."""
    u = 1.0 / x
    log_term = 9.0 + 4.0 * d_hh + 36.0 * math.log(u)
    rad = 1.0 + 2.0 * u + u * u * log_term
    rad_du = 2.0 + 2.0 * u * log_term + 36.0 * u
    return -u * u * (-rad + (1.0 - u) * rad_du)


def temperature_ratio(x: float, d_hh: float) -> float:
    """
    τ = T_HH / T_H at x = r / r_H.

    Raises:
        DomainError: x < 1
        SubcriticalError: negative radicand at x
    """
    if not x >= 1.0:
        raise DomainError(f"x={x!r} lies inside the horizon")
    rad = radicand(x, d_hh)
    if rad < 0.0:
        raise SubcriticalError(
            f"negative radicand {rad:.6g} at r/r_H={x!r} for D_HH={d_hh!r}", r=x, radicand=rad
        )
    return math.sqrt(1.0 - 1.0 / x) * math.sqrt(rad)


def local_temperature(p: AtmospherePoint) -> Temperature:
    """
    Hartle-Hawking local temperature
    T_H √(1 - r_H/r) √(1 + 2 r_H/r + (r_H/r)²(9 + 4D_HH + 36 ln(r_H/r))).

    Raises:
        SubcriticalError: negative radicand (carries the offending r)
    """
    try:
        ratio = temperature_ratio(p.x, p.d_hh)
    except SubcriticalError as e:
        raise SubcriticalError(str(e), r=p.r, radicand=e.radicand) from e
    return Temperature(hawking_temperature(p.r_h).value * ratio)


def dhh_from_observables(x: float, tau: float) -> float:
    """
    Invert the profile for D_HH given x = r/r_H and τ = T_HH/T_H:
    ¼(-x² - 2x - 36 ln(1/x) + x³τ²/(x - 1) - 9).

    Raises:
        PoleError: x <= 1
        DomainError: tau < 0
    """
    if not x > 1.0:
        raise PoleError(f"x={x!r}: inversion has a pole at x = 1 and needs x > 1")
    if not tau >= 0.0:
        raise DomainError(f"tau={tau!r} must be >= 0")
    return 0.25 * (-x * x - 2.0 * x - 36.0 * math.log(1.0 / x)
                   + x ** 3 * tau * tau / (x - 1.0) - 9.0)


def _search_grid(x_max: float) -> np.ndarray:
    return np.geomspace(1.0, x_max, SEARCH_POINTS)


def peak_radius(d_hh: float, x_max: float = SEARCH_X_MAX) -> float:
    """
    x* = argmax over (1, x_max] of T_HH.

    A log-spaced scan brackets the maximum; the stationary point is then the
    root of the closed-form slope of τ², with the slope sign checked on both
    sides of the bracket.

    Raises:
        SubcriticalError: radicand negative somewhere on the scan
        SearchError: no interior maximum
    """
    xs = _search_grid(x_max)[1:]
    rads = radicand(xs, d_hh)
    if np.any(rads < 0.0):
        bad = float(xs[int(np.argmin(rads))])
        raise SubcriticalError(
            f"D_HH={d_hh!r} is subcritical: radicand < 0 near r/r_H={bad:.6g}",
            r=bad, radicand=float(rads.min()),
        )

    values = _ratio_sq(xs, d_hh)
    best = int(np.argmax(values))
    if best == 0 or best == len(xs) - 1:
        raise SearchError(f"no interior maximum of T_HH on (1, {x_max}] for D_HH={d_hh!r}")

    lo, hi = float(xs[best - 1]), float(xs[best + 1])
    slope_lo, slope_hi = _ratio_sq_slope(lo, d_hh), _ratio_sq_slope(hi, d_hh)
    if not (slope_lo > 0.0 > slope_hi):
        raise SearchError(
            f"slope of T_HH does not change sign across [{lo:.6g}, {hi:.6g}] "
            f"({slope_lo:.3e}, {slope_hi:.3e})"
        )
    return float(brentq(_ratio_sq_slope, lo, hi, args=(d_hh,), xtol=1e-14))


def min_radicand(d_hh: float, x_max: float = SEARCH_X_MAX) -> Tuple[float, float]:
    """
    Minimum of the radicand over x ∈ [1, x_max]; returns (x_min, value).

    Golden-section refinement around the best scan point; boundary minima are
    returned as scanned.
    """
    xs = _search_grid(x_max)
    values = radicand(xs, d_hh)
    best = int(np.argmin(values))
    if best == 0 or best == len(xs) - 1:
        return float(xs[best]), float(values[best])

    bracket = (float(xs[best - 1]), float(xs[best]), float(xs[best + 1]))
    try:
        res = minimize_scalar(radicand, bracket=bracket, args=(d_hh,), method='golden', tol=1e-12)
    except ValueError:
        # degenerate bracket (tied scan values)
        res = minimize_scalar(radicand, bounds=(bracket[0], bracket[2]), args=(d_hh,),
                              method='bounded', options={'xatol': 1e-12})
    if res.fun < values[best]:
        return float(res.x), float(res.fun)
    return float(xs[best]), float(values[best])


def critical_constant(search_bounds: Tuple[float, float] = DEFAULT_CRITICAL_BOUNDS) -> CriticalReport:
    """
    Smallest D_HH with a nonnegative radicand on the whole search range.

    Outer bisection on D of the inner minimum (tolerance 1e-6). The result is
    reported next to the quoted 23.03 without forcing agreement.

    Raises:
        SearchError: bounds do not bracket a sign change
    """
    lo, hi = float(search_bounds[0]), float(search_bounds[1])
    if not lo < hi:
        raise SearchError(f"search bounds {search_bounds!r} must satisfy lo < hi")

    def inner(d_hh: float) -> float:
        return min_radicand(d_hh)[1]

    f_lo, f_hi = inner(lo), inner(hi)
    if not (f_lo < 0.0 <= f_hi):
        raise SearchError(
            f"bounds [{lo}, {hi}] do not bracket the positivity threshold "
            f"(min radicand {f_lo:.3e} .. {f_hi:.3e})"
        )

    d_c = float(bisect(inner, lo, hi, xtol=CRITICAL_XTOL))
    # report the feasible end of the final bracket
    while inner(d_c) < 0.0 and d_c < hi:
        d_c = min(d_c + CRITICAL_XTOL, hi)
    x_t, residual = min_radicand(d_c)
    return CriticalReport(d_c=d_c, tangency_x=x_t, tangency_residual=residual,
                          search_bounds=(lo, hi))
