"""Shared fixtures, including stabilizer and Clifford sets built independently of the library."""

import itertools

import numpy as np
import pytest

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])


def _phase_normalize(v: np.ndarray) -> np.ndarray:
    k = np.flatnonzero(np.abs(v) > 1e-9)[0]
    return v * (abs(v[k]) / v[k])


def _key(v: np.ndarray) -> tuple:
    w = np.round(_phase_normalize(v.ravel()), 8) + 0.0
    return tuple(np.concatenate([w.real, w.imag]))


def _single_qubit_cliffords() -> list[np.ndarray]:
    """The 24 one-qubit Cliffords modulo phase, by closing {H, S} under products."""
    found = {_key(np.eye(2)): np.eye(2, dtype=complex)}
    frontier = [np.eye(2, dtype=complex)]
    while frontier:
        nxt = []
        for g in frontier:
            for h in (_H, _S):
                m = h @ g
                k = _key(m)
                if k not in found:
                    found[k] = m
                    nxt.append(m)
        frontier = nxt
    return list(found.values())


@pytest.fixture(scope="session")
def one_qubit_cliffords() -> list[np.ndarray]:
    return _single_qubit_cliffords()


@pytest.fixture(scope="session")
def one_qubit_stabilizers() -> list[np.ndarray]:
    s = 1 / np.sqrt(2)
    return [np.array(v, dtype=complex) for v in
            ([1, 0], [0, 1], [s, s], [s, -s], [s, 1j * s], [s, -1j * s])]


@pytest.fixture(scope="session")
def two_qubit_stabilizers(one_qubit_stabilizers, one_qubit_cliffords) -> list[np.ndarray]:
    """36 product states plus the 24 states ``(I (x) C)|Phi+>``."""
    products = [np.kron(a, b) for a, b in itertools.product(one_qubit_stabilizers, repeat=2)]
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    entangled = [np.kron(np.eye(2), c) @ bell for c in one_qubit_cliffords]
    states = products + entangled
    assert len({_key(v) for v in states}) == 60
    return states


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def phase_key(v: np.ndarray) -> tuple:
    return _key(v)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
