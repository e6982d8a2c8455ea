"""
Test script for the Fock-space linear algebra kernels
Run directly for a ✓/✗ summary, or collect with pytest.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from errors import ContractViolation, SizingError
from fock_linalg import (
    DensityOperator,
    PureState,
    alice_marginal,
    compose,
    hs_distance_sq,
    partial_trace_last,
    reduce_pure,
)

BELL = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def bell_density():
    return DensityOperator(np.outer(BELL, BELL.conj()), (2, 2))


# ==================== compose ====================

def test_compose_identities():
    out = compose(np.eye(2), np.eye(3))
    assert out.shape == (6, 6)
    assert np.array_equal(out, np.eye(6))


def test_compose_density_dims_and_tail():
    a = DensityOperator(np.diag([0.5, 0.5]), (2,))
    b = DensityOperator(np.diag([0.6, 0.3, 0.1]), (3,))
    out = compose(a, b)
    assert isinstance(out, DensityOperator)
    assert out.dims == (2, 3)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_compose_is_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = random_hermitian(rng, 2), random_hermitian(rng, 3), random_hermitian(rng, 2)
    left = compose(compose(a, b), c)
    right = compose(a, compose(b, c))
    assert left.shape == right.shape == (12, 12)
    assert np.allclose(left, right, rtol=0.0, atol=1e-13)
    assert out.tail_defect == 0.0


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_compose_trace_factorises(seed):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, 2), random_hermitian(rng, 3)
    lhs = np.trace(compose(a, b))
    rhs = np.trace(a) * np.trace(b)
    assert abs(lhs - rhs) < 1e-13 * max(1.0, abs(rhs))


def test_compose_sizing_limit():
    with pytest.raises(SizingError):
        compose(np.eye(3), np.eye(2), max_dimension=4)


def test_compose_rejects_non_square():
    with pytest.raises(ContractViolation):
        compose(np.ones((2, 3)), np.eye(2))


# ==================== partial traces ====================

def test_partial_trace_of_product_state():
    rng = np.random.default_rng(7)
    rho_a = DensityOperator(random_density(rng, 2), (2,))
    rho_b = DensityOperator(random_density(rng, 3), (3,))
    reduced = partial_trace_last(compose(rho_a, rho_b))
    assert reduced.dims == (2,)
    assert np.max(np.abs(reduced.entries - rho_a.entries)) < 1e-14


def test_bell_reduces_to_maximally_mixed():
    reduced = partial_trace_last(bell_density())
    assert np.allclose(reduced.entries, 0.5 * np.eye(2), atol=1e-15)


def test_partial_trace_matches_index_summation():
    rng = np.random.default_rng(2024)
    rho = DensityOperator(random_density(rng, 4), (2, 2))
    expected = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                expected[i, j] += rho.entries[2 * i + k, 2 * j + k]
    assert np.max(np.abs(partial_trace_last(rho).entries - expected)) < 1e-14


def test_partial_trace_needs_two_factors():
    with pytest.raises(ContractViolation):
        partial_trace_last(DensityOperator(np.eye(2) / 2, (2,)))


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_reduce_pure_agrees_with_partial_trace(seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=24) + 1j * rng.normal(size=24)
    psi /= np.linalg.norm(psi)
    state = PureState(psi, (2, 3, 4))

    full = DensityOperator(np.outer(psi, psi.conj()), (2, 3, 4))
    direct = partial_trace_last(full)
    fast = reduce_pure(state)
    assert fast.dims == (2, 3)
    assert np.max(np.abs(fast.entries - direct.entries)) < 1e-13


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_partial_trace_keeps_state_properties(seed):
    rng = np.random.default_rng(seed)
    rho = DensityOperator(random_density(rng, 6), (2, 3))
    reduced = partial_trace_last(rho)
    assert abs(reduced.trace - 1.0) < 1e-12
    assert reduced.hermiticity_defect < 1e-12
    assert reduced.is_psd()


def test_alice_marginal_of_three_factors():
    rng = np.random.default_rng(11)
    rho_a = DensityOperator(random_density(rng, 2), (2,))
    rest = compose(DensityOperator(random_density(rng, 2), (2,)),
                   DensityOperator(random_density(rng, 3), (3,)))
    marginal = alice_marginal(compose(rho_a, rest))
    assert marginal.dims == (2,)
    assert np.max(np.abs(marginal.entries - rho_a.entries)) < 1e-13


# ==================== Hilbert-Schmidt distance ====================

def test_hs_distance_values():
    assert hs_distance_sq(np.diag([1.0, 0.0]), np.diag([1.0, 0.0])) == 0.0
    assert hs_distance_sq(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(2.0)

    bell = bell_density()
    dephased = DensityOperator(np.diag(np.diag(bell.entries)), (2, 2))
    assert hs_distance_sq(bell, dephased) == pytest.approx(0.5, abs=1e-15)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_hs_distance_is_symmetric_and_nonnegative(seed):
    rng = np.random.default_rng(seed)
    a, b = random_density(rng, 4), random_density(rng, 4)
    d_ab, d_ba = hs_distance_sq(a, b), hs_distance_sq(b, a)
    assert d_ab >= 0.0
    assert abs(d_ab - d_ba) < 1e-15


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_hs_distance_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_density(rng, 4) for _ in range(3))
    d_ac = math.sqrt(hs_distance_sq(a, c))
    d_ab = math.sqrt(hs_distance_sq(a, b))
    d_bc = math.sqrt(hs_distance_sq(b, c))
    assert d_ac <= d_ab + d_bc + 1e-12


def test_hs_distance_rejects_mismatch():
    with pytest.raises(ContractViolation):
        hs_distance_sq(np.eye(2), np.eye(3))
    a = DensityOperator(np.eye(6) / 6, (2, 3))
    b = DensityOperator(np.eye(6) / 6, (3, 2))
    with pytest.raises(ContractViolation):
        hs_distance_sq(a, b)


# ==================== Constructors ====================

def test_density_operator_validation():
    with pytest.raises(ContractViolation):
        DensityOperator(np.array([[0.5, 0.1], [0.0, 0.5]]), (2,))
    with pytest.raises(ContractViolation):
        DensityOperator(np.eye(2), (2,))
    with pytest.raises(ContractViolation):
        DensityOperator(np.eye(4) / 4, (2, 3))

    # trace may fall short by the declared tail
    short = DensityOperator(np.diag([0.5, 0.4]), (2,), tail_defect=0.1)
    assert short.trace == pytest.approx(0.9)


def test_pure_state_norm_accounting():
    state = PureState([math.sqrt(0.5), math.sqrt(0.49)], (2,), tail_defect=0.01)
    assert state.norm_squared == pytest.approx(0.99)
    with pytest.raises(ContractViolation):
        PureState([math.sqrt(0.5), math.sqrt(0.49)], (2,))
    with pytest.raises(ContractViolation):
        PureState([1.0, 0.0, 0.0], (2, 2))


def test_entries_are_read_only():
    rho = bell_density()
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 1.0


TESTS = [
    ("Compose identities", test_compose_identities),
    ("Compose density dims", test_compose_density_dims_and_tail),
    ("Compose associative", test_compose_is_associative),
    ("Compose trace factorises", test_compose_trace_factorises),
    ("Compose sizing limit", test_compose_sizing_limit),
    ("Compose non-square", test_compose_rejects_non_square),
    ("Partial trace product state", test_partial_trace_of_product_state),
    ("Bell reduction", test_bell_reduces_to_maximally_mixed),
    ("Index-summation oracle", test_partial_trace_matches_index_summation),
    ("Single factor rejected", test_partial_trace_needs_two_factors),
    ("reduce_pure vs partial trace", test_reduce_pure_agrees_with_partial_trace),
    ("Partial trace properties", test_partial_trace_keeps_state_properties),
    ("Alice marginal", test_alice_marginal_of_three_factors),
    ("HS distance values", test_hs_distance_values),
    ("HS distance symmetry", test_hs_distance_is_symmetric_and_nonnegative),
    ("HS distance triangle", test_hs_distance_triangle_inequality),
    ("HS distance mismatch", test_hs_distance_rejects_mismatch),
    ("DensityOperator validation", test_density_operator_validation),
    ("PureState norm accounting", test_pure_state_norm_accounting),
    ("Read-only entries", test_entries_are_read_only),
]


def main():
    print("\n" + "=" * 50)
    print("  Fock Linear Algebra Test Suite")
    print("=" * 50)

    results = []
    for name, test in TESTS:
        try:
            test()
            results.append((name, True))
        except Exception as e:
            print(f"  ✗ {name}: {type(e).__name__}: {e}")
            results.append((name, False))

    print("\n" + "=" * 50)
    print("  SUMMARY")
    print("=" * 50)

    for name, passed in results:
        status = "✓ PASS" if passed else "✗ FAIL"
        print(f"  {status}: {name}")
    return all(passed for _, passed in results)


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
