import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicpower.clifford import random_clifford
from magicpower.config import override
from magicpower.linalg import CNOT, H, T, haar_state, haar_unitary
from magicpower.magic import (
    NumericalIntegrityError,
    haar_average_mp,
    linear_entropies,
    mp_exact_batch,
    non_stabilizing_power,
    stabilizer_linear_entropy,
)
from magicpower.pauli import enumerate_paulis, pauli_expectation


def _streaming_entropy(psi):
    n = int(math.log2(len(psi)))
    return 1 - sum(pauli_expectation(p, psi) ** 4 for p in enumerate_paulis(n)) / len(psi)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_entropy_matches_streaming_oracle(n, rng):
    psi = haar_state(2**n, rng)
    assert abs(stabilizer_linear_entropy(psi) - _streaming_entropy(psi)) < 1e-12


def test_entropy_of_t_state():
    # <X> = <Y> = 1/sqrt(2), <Z> = 0: sum of fourth powers is 3/2
    psi = T @ H @ np.array([1, 0], dtype=complex)
    assert abs(stabilizer_linear_entropy(psi) - 0.25) < 1e-14


def test_stabilizer_states_have_zero_entropy(two_qubit_stabilizers):
    assert np.allclose(linear_entropies(np.array(two_qubit_stabilizers)), 0, atol=1e-14)


def test_unnormalized_state_is_rejected():
    psi = np.array([1, 1j, 0, 1], dtype=complex)
    with pytest.raises(NumericalIntegrityError):
        linear_entropies(psi[None] * 0.9)
    with pytest.raises(ValueError):
        stabilizer_linear_entropy(psi)


def test_t_gate_power():
    # four of the six states pick up entropy 1/4
    est = non_stabilizing_power(T, mode="exact-n1")
    assert est.exact and abs(est.value - 1 / 6) < 1e-14


def test_exact_n2_matches_fixture(two_qubit_stabilizers, rng):
    for _ in range(5):
        u = haar_unitary(4, rng)
        oracle = np.mean([_streaming_entropy(u @ s) for s in two_qubit_stabilizers])
        assert abs(non_stabilizing_power(u, mode="exact-n2").value - oracle) < 1e-12


def test_cliffords_have_zero_power(rng):
    for n in (1, 2):
        assert non_stabilizing_power(random_clifford(n, rng).dense()).value < 1e-14
    assert non_stabilizing_power(CNOT).value < 1e-14


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_power_invariant_under_clifford_dressing(seed):
    rng = np.random.default_rng(seed)
    u = haar_unitary(4, rng)
    a, b = random_clifford(2, rng).dense(), random_clifford(2, rng).dense()
    assert abs(mp_exact_batch(a @ u @ b)[0] - mp_exact_batch(u)[0]) < 1e-12


def test_monte_carlo_agrees_with_exact(rng):
    u = haar_unitary(4, rng)
    exact = non_stabilizing_power(u).value
    mc = non_stabilizing_power(u, mode="monte-carlo", n_samples=2000, rng=rng)
    assert not mc.exact and mc.n_samples == 2000
    assert abs(mc.value - exact) < 4 * mc.std_error


def test_mode_errors():
    with pytest.raises(ValueError):
        non_stabilizing_power(np.eye(8), mode="exact")
    with pytest.raises(ValueError):
        non_stabilizing_power(np.eye(4), mode="exact-n1")
    with pytest.raises(ValueError):
        non_stabilizing_power(np.eye(4), mode="mc")
    with pytest.raises(ValueError):
        non_stabilizing_power(np.eye(4), mode="bogus")


def test_haar_average(rng):
    # Bloch sphere: E[x^4] = 1/5, so M averages to 1 - (1 + 3/5)/2
    assert haar_average_mp(1) == pytest.approx(1 / 5)
    assert haar_average_mp(2) == pytest.approx(3 / 7)


def test_resource_limit():
    from magicpower.config import ResourceError

    with override(max_pauli_qubits=3):
        with pytest.raises(ResourceError):
            linear_entropies(np.ones((1, 16)) / 4)


def test_haar_average_one_qubit_sampled(rng):
    vals = [non_stabilizing_power(haar_unitary(2, rng)).value for _ in range(2000)]
    assert abs(np.mean(vals) - 0.2) < 4 * np.std(vals) / np.sqrt(len(vals))
