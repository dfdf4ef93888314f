"""Stabilizer linear entropy and non-stabilizing power.

``M(psi) = 1 - 2^-N sum_P <psi|P|psi>^4`` over all ``4^N`` Pauli strings,
and ``m_p(U)`` is the average of ``M(U|s>)`` over stabilizer states ``|s>``.
The 4-replica projector is never formed: for each X-pattern ``x`` the
expectations over all Z-patterns come out of one Walsh-Hadamard transform.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import _kernels
from .clifford import random_stabilizer_state, stabilizer_state_table
from .config import check_qubits, get_config
from .linalg import n_qubits_of, require_state, require_unitary

DEFAULT_MC_SAMPLES = 1000


class NumericalIntegrityError(ArithmeticError):
    """A magic value came out clearly negative (broken normalization)."""


@dataclasses.dataclass(frozen=True)
class MagicEstimate:
    value: float
    std_error: float
    n_samples: int
    exact: bool

    def __post_init__(self):
        if self.exact and self.std_error != 0:
            raise ValueError("exact estimates carry zero standard error")
        if self.std_error < 0 or self.n_samples < 1:
            raise ValueError("invalid sample statistics")


def _clamp(values: np.ndarray) -> np.ndarray:
    tol = get_config().negative_clamp
    worst = float(np.min(values)) if np.size(values) else 0.0
    if worst < -tol:
        raise NumericalIntegrityError(f"stabilizer entropy {worst:.3e} is below -{tol:g}")
    return np.maximum(values, 0.0)


def linear_entropies(states: np.ndarray) -> np.ndarray:
    """``M`` for each row of a ``(batch, 2^N)`` array of normalized states."""
    states = np.atleast_2d(np.asarray(states, dtype=complex))
    dim = states.shape[1]
    check_qubits(n_qubits_of(dim), get_config().max_pauli_qubits, "stabilizer_linear_entropy")
    return _clamp(1.0 - _kernels.pauli_fourth_moment(states) / dim)


def stabilizer_linear_entropy(psi: np.ndarray) -> float:
    psi = require_state(psi)
    return float(linear_entropies(psi[None, :])[0])


def _exact_table(n: int) -> np.ndarray:
    if n not in (1, 2):
        raise ValueError(f"exact non-stabilizing power is only available for N in (1, 2), got N={n}")
    return stabilizer_state_table(n)


def mp_exact_batch(unitaries: np.ndarray) -> np.ndarray:
    """Exact ``m_p`` for a stack ``(B, d, d)`` of one- or two-qubit unitaries."""
    us = np.asarray(unitaries, dtype=complex)
    if us.ndim == 2:
        us = us[None]
    n = n_qubits_of(us.shape[-1])
    table = _exact_table(n)
    # out[b, s, :] = U_b |s>
    images = np.einsum("bij,sj->bsi", us, table)
    flat = images.reshape(-1, us.shape[-1])
    m = linear_entropies(flat).reshape(len(us), len(table))
    return m.mean(axis=1)


def non_stabilizing_power(
    u: np.ndarray,
    mode: str = "exact",
    n_samples: int = DEFAULT_MC_SAMPLES,
    rng: np.random.Generator | None = None,
) -> MagicEstimate:
    """Average of ``M(U|s>)`` over stabilizer states.

    ``mode`` is ``"exact"`` (N <= 2, picks the full enumeration),
    ``"exact-n1"``, ``"exact-n2"`` or ``"monte-carlo"``.
    """
    u = require_unitary(u, "non_stabilizing_power input")
    n = n_qubits_of(u.shape[0])
    key = mode.lower().replace("_", "-")
    if key in ("exact", "exact-n1", "exact-n2"):
        if key != "exact" and int(key[-1]) != n:
            raise ValueError(f"mode {mode!r} does not match a {n}-qubit unitary")
        value = float(mp_exact_batch(u)[0])
        return MagicEstimate(value, 0.0, len(_exact_table(n)), True)
    if key not in ("monte-carlo", "mc"):
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("monte-carlo mode needs an explicit rng")
    if n_samples < 2:
        raise ValueError("monte-carlo mode needs at least 2 samples")
    states = sample_stabilizer_states(n, n_samples, rng)
    m = linear_entropies(states @ u.T)
    return MagicEstimate(float(m.mean()), float(m.std(ddof=1) / np.sqrt(n_samples)), n_samples, False)


def sample_stabilizer_states(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniformly random stabilizer states as rows.

    Up to four qubits the states are drawn from the full enumeration;
    beyond that each one is ``C|0>`` for a fresh uniform Clifford ``C``.
    """
    if n <= 4:
        table = stabilizer_state_table(n)
        return table[rng.integers(0, len(table), size=count)]
    return np.stack([random_stabilizer_state(n, rng) for _ in range(count)])


def haar_average_mp(n: int) -> float:
    """Haar average of ``m_p`` over ``U(2^N)``: ``1 - 4/(2^N + 3)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return 1.0 - 4.0 / (2**n + 3)
