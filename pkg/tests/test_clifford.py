import collections
import math

import numpy as np
import pytest
from scipy import stats

from conftest import phase_key
from magicpower.cartan import cartan_core
from magicpower.clifford import (
    CliffordTableau,
    clifford_dense_table,
    enumerate_cliffords,
    enumerate_single_qubit_cliffords,
    gate_tableau,
    is_clifford_dense,
    random_clifford,
    random_clifford_dense,
    random_stabilizer_state,
    stabilizer_state_count,
    stabilizer_state_table,
)
from magicpower.linalg import CNOT, H, S, SWAP, T, equal_up_to_phase, is_unitary, kron
from magicpower.pauli import PauliString


@pytest.mark.parametrize("name,qubits,dense", [
    ("H", (0,), H), ("S", (0,), S), ("CNOT", (0, 1), CNOT), ("SWAP", (0, 1), SWAP),
    ("CZ", (0, 1), np.diag([1, 1, 1, -1]).astype(complex)),
])
def test_gate_tableaux_match_dense(name, qubits, dense):
    tab = gate_tableau(name, len(qubits), *qubits)
    assert tab == CliffordTableau.from_dense(dense)
    assert equal_up_to_phase(tab.dense(), dense)


def test_reversed_cnot():
    assert equal_up_to_phase(gate_tableau("CNOT", 2, 1, 0).dense(), SWAP @ CNOT @ SWAP)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_random_dense_synthesis(n, rng):
    for _ in range(5):
        c = random_clifford(n, rng)
        u = c.dense()
        assert is_unitary(u)
        assert CliffordTableau.from_dense(u) == c
        # C^dagger P C for every generator
        for q in range(n):
            for kind in "XZ":
                p = PauliString.single(n, q, kind)
                assert np.allclose(c.conjugate_dagger(p).dense(), u.conj().T @ p.dense() @ u)


def test_compose_and_inverse(rng):
    a, b = random_clifford(3, rng), random_clifford(3, rng)
    assert equal_up_to_phase((a @ b).dense(), a.dense() @ b.dense())
    assert a @ a.inverse() == CliffordTableau.identity(3)
    assert a.inverse() @ a == CliffordTableau.identity(3)


def test_stabilizer_state_is_first_column(rng):
    c = random_clifford(3, rng)
    psi = c.stabilizer_state()
    assert equal_up_to_phase(psi, c.dense()[:, 0])
    for s in c.images()[3:]:
        assert np.allclose(s.apply(psi), psi)


def test_from_images_checks_commutation():
    imgs = [PauliString.from_label("X"), PauliString.from_label("X")]
    with pytest.raises(ValueError):
        CliffordTableau.from_images(imgs)
    with pytest.raises(ValueError):
        CliffordTableau.from_dense(T)


def test_clifford_group_orders(one_qubit_cliffords):
    one = enumerate_single_qubit_cliffords()
    assert len(one) == 24 == len(set(one))
    assert {phase_key(c.dense()) for c in one} == {phase_key(c) for c in one_qubit_cliffords}
    # |C_2 / U(1)| = 2^{n^2 + 2n} prod (4^j - 1)
    assert len(enumerate_cliffords(2)) == 2**8 * 3 * 15 == 11520


def test_dense_table_elements_are_clifford():
    table = clifford_dense_table(1)
    assert table.shape == (24, 2, 2)
    assert all(is_clifford_dense(u) for u in table)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_stabilizer_state_counts(n):
    table = stabilizer_state_table(n)
    expected = 2**n * math.prod(2**k + 1 for k in range(1, n + 1))
    assert len(table) == stabilizer_state_count(n) == expected
    assert np.allclose(np.linalg.norm(table, axis=1), 1)


def test_two_qubit_table_matches_fixture(two_qubit_stabilizers):
    lib = {phase_key(v) for v in stabilizer_state_table(2)}
    assert lib == {phase_key(v) for v in two_qubit_stabilizers}


def test_single_qubit_sampling_is_uniform(rng):
    index = {c: k for k, c in enumerate(enumerate_single_qubit_cliffords())}
    counts = collections.Counter(index[random_clifford(1, rng)] for _ in range(6000))
    assert len(counts) == 24
    _, p = stats.chisquare([counts[k] for k in range(24)])
    assert p > 1e-3


def test_two_qubit_sampling_covers_symplectic_classes(rng):
    counts = collections.Counter(random_clifford(2, rng).symplectic_matrix.tobytes() for _ in range(7200))
    # |Sp(4, 2)| = 720, ten draws each on average
    assert len(counts) == 720
    _, p = stats.chisquare(list(counts.values()))
    assert p > 1e-3


def test_random_stabilizer_states_are_stabilizer(rng):
    psi = random_stabilizer_state(2, rng)
    assert phase_key(psi) in {phase_key(v) for v in stabilizer_state_table(2)}


def test_random_clifford_dense_batch(rng):
    batch = random_clifford_dense(2, rng, size=5)
    assert batch.shape == (5, 4, 4)
    assert random_clifford_dense(5, rng).shape == (32, 32)


def test_is_clifford_dense():
    assert is_clifford_dense(cartan_core(math.pi / 2, 0, 0))
    assert is_clifford_dense(kron(H, S) @ CNOT)
    assert not is_clifford_dense(T)
    assert not is_clifford_dense(cartan_core(math.pi / 4, 0, 0))


def test_vertex_conjugation_example():
    c = CliffordTableau.from_dense(cartan_core(math.pi / 2, 0, 0))
    assert str(c.conjugate_dagger(PauliString.from_label("YI"))) == "-ZX"
