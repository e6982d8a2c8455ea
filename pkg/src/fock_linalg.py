"""
Atmomin - Fock Linear Algebra
Dense kernels over finite truncations of occupation-number Hilbert spaces:
tensor products, partial traces and Hilbert-Schmidt geometry.

Factor order is always (A, B_I, B_II); partial traces remove the last factor.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.linalg import eigvalsh

from errors import ContractViolation, SizingError
from settings import DEFAULT_MAX_DIMENSION

NORM_SLACK = 1e-14
HERMITICITY_TOL = 1e-12
TRACE_SLACK = 1e-12
PSD_FLOOR = -1e-10


def _frozen(values: np.ndarray) -> np.ndarray:
    """Read-only complex copy."""
    out = np.array(values, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def _check_dims(dims: Sequence[int], size: int, what: str) -> Tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ContractViolation(f"{what}: dims must be positive, got {dims}")
    if int(np.prod(dims)) != size:
        raise ContractViolation(f"{what}: product of dims {dims} != {size}")
    return dims


@dataclass(frozen=True)
class PureState:
    """Truncated ket with explicit tail-defect bookkeeping."""
    amplitudes: np.ndarray
    dims: Tuple[int, ...]
    tail_defect: float = 0.0

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        object.__setattr__(self, 'amplitudes', amps)
        object.__setattr__(self, 'dims', _check_dims(self.dims, amps.size, "PureState"))

        tail = float(self.tail_defect)
        if not 0.0 <= tail < 1.0:
            raise ContractViolation(f"PureState: tail_defect {tail} outside [0, 1)")
        object.__setattr__(self, 'tail_defect', tail)

        norm_sq = self.norm_squared
        if norm_sq < 1.0 - tail - NORM_SLACK or norm_sq > 1.0 + NORM_SLACK:
            raise ContractViolation(
                f"PureState: squared norm {norm_sq!r} outside [1 - {tail!r}, 1]"
            )

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self) -> np.ndarray:
        """Amplitudes as an array with one axis per factor."""
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True)
class DensityOperator:
    """Truncated density matrix; trace may fall short of 1 by tail_defect."""
    entries: np.ndarray
    dims: Tuple[int, ...]
    tail_defect: float = 0.0

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ContractViolation(f"DensityOperator: entries must be square, got {entries.shape}")
        object.__setattr__(self, 'entries', entries)
        object.__setattr__(self, 'dims', _check_dims(self.dims, entries.shape[0], "DensityOperator"))

        tail = float(self.tail_defect)
        if not 0.0 <= tail < 1.0:
            raise ContractViolation(f"DensityOperator: tail_defect {tail} outside [0, 1)")
        object.__setattr__(self, 'tail_defect', tail)

        defect = self.hermiticity_defect
        if defect >= HERMITICITY_TOL:
            raise ContractViolation(f"DensityOperator: not Hermitian (defect {defect:.3e})")

        trace = self.trace
        if trace < 1.0 - tail - TRACE_SLACK or trace > 1.0 + TRACE_SLACK:
            raise ContractViolation(
                f"DensityOperator: trace {trace!r} outside [1 - {tail!r}, 1]"
            )

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(eigvalsh(self.entries)[0])

    def is_psd(self, floor: float = PSD_FLOOR) -> bool:
        """Positive semidefinite up to truncation dust."""
        return self.min_eigenvalue() >= floor


Operator = Union[np.ndarray, DensityOperator]


def _matrix(op: Operator, what: str) -> np.ndarray:
    mat = op.entries if isinstance(op, DensityOperator) else np.asarray(op)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ContractViolation(f"{what}: operator must be square, got {mat.shape}")
    return mat


def compose(a: Operator, b: Operator, max_dimension: int = DEFAULT_MAX_DIMENSION) -> Operator:
    """
    Kronecker product a ⊗ b.

    Two DensityOperators compose into a DensityOperator with concatenated
    dims; any other pairing returns a plain matrix.

    Raises:
        ContractViolation: non-square input
        SizingError: product dimension above max_dimension
    """
    mat_a = _matrix(a, "compose")
    mat_b = _matrix(b, "compose")

    total = mat_a.shape[0] * mat_b.shape[0]
    if total > max_dimension:
        raise SizingError(f"compose: dimension {total} exceeds maximum {max_dimension}")

    product = np.kron(mat_a, mat_b)
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        tail = 1.0 - (1.0 - a.tail_defect) * (1.0 - b.tail_defect)
        return DensityOperator(product, a.dims + b.dims, tail)
    return product


def partial_trace_last(rho: DensityOperator) -> DensityOperator:
    """
    Trace out the last factor (region II by convention).

    Raises:
        ContractViolation: rho has a single factor
    """
    if len(rho.dims) < 2:
        raise ContractViolation("partial_trace_last: need at least two factors")

    last = rho.dims[-1]
    rest = rho.dimension // last
    blocks = rho.entries.reshape(rest, last, rest, last)
    reduced = np.trace(blocks, axis1=1, axis2=3)
    return DensityOperator(reduced, rho.dims[:-1], rho.tail_defect)


def reduce_pure(state: PureState) -> DensityOperator:
    """
    Tr_last |ψ⟩⟨ψ| without forming the full projector.

    With Ψ the amplitudes reshaped to (rest, last), the reduced operator is Ψ Ψ†.
    """
    if len(state.dims) < 2:
        raise ContractViolation("reduce_pure: need at least two factors")

    last = state.dims[-1]
    psi = state.amplitudes.reshape(-1, last)
    reduced = psi @ psi.conj().T
    # exact Hermitian symmetrisation; removes rounding asymmetry from the product
    reduced = 0.5 * (reduced + reduced.conj().T)
    return DensityOperator(reduced, state.dims[:-1], state.tail_defect)


def alice_marginal(rho: DensityOperator) -> DensityOperator:
    """Reduce to the first factor."""
    while len(rho.dims) > 1:
        rho = partial_trace_last(rho)
    return rho


def hs_distance_sq(a: Operator, b: Operator) -> float:
    """
    Squared Hilbert-Schmidt distance Tr((a - b)†(a - b)).

    Raises:
        ContractViolation: shape or dims mismatch
    """
    mat_a = _matrix(a, "hs_distance_sq")
    mat_b = _matrix(b, "hs_distance_sq")
    if mat_a.shape != mat_b.shape:
        raise ContractViolation(f"hs_distance_sq: shapes differ {mat_a.shape} vs {mat_b.shape}")
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator) and a.dims != b.dims:
        raise ContractViolation(f"hs_distance_sq: dims differ {a.dims} vs {b.dims}")

    diff = mat_a - mat_b
    return float(np.vdot(diff, diff).real)
