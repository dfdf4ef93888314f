"""Entanglement of states and bipartite gates.

Conventions: ``U`` acts on ``H_A (x) H_B`` with ``A`` the leading Kronecker
factor.  Operator entanglement reshuffles ``U[(a, b), (a', b')]`` into a pure
state on ``(a, a') (x) (b, b')`` before taking the linear entropy.
"""

from __future__ import annotations

import dataclasses
import functools

import numpy as np

from .config import get_config
from .linalg import CNOT, haar_state, require_unitary

DEFAULT_EP_SAMPLES = 2000


@dataclasses.dataclass(frozen=True)
class Bipartition:
    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1:
            raise ValueError("subsystem dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b

    def check(self, dim: int) -> None:
        if dim != self.dim:
            raise ValueError(f"bipartition {self.d_a}x{self.d_b} does not match dimension {dim}")


QUBITS = Bipartition(2, 2)


def _purity_b(psi: np.ndarray, d_a: int, d_b: int) -> float:
    m = psi.reshape(d_a, d_b)
    rho_b = m.T @ m.conj()
    return float(np.real(np.vdot(rho_b, rho_b)))


def linear_entanglement_entropy(psi: np.ndarray, part: Bipartition = QUBITS) -> float:
    """``1 - Tr(rho_B^2)``."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("state must be a 1-d amplitude vector")
    part.check(psi.shape[0])
    if abs(np.vdot(psi, psi).real - 1.0) > get_config().norm_atol * max(1, psi.shape[0]) ** 0.5:
        raise ValueError("state is not normalized")
    return 1.0 - _purity_b(psi, part.d_a, part.d_b)


def operator_entanglement(u: np.ndarray, part: Bipartition = QUBITS) -> float:
    u = require_unitary(u, "operator_entanglement input")
    part.check(u.shape[0])
    da, db = part.d_a, part.d_b
    t = u.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da * db * db)
    return 1.0 - _purity_b(t / np.sqrt(da * db), da * da, db * db)


@functools.lru_cache(maxsize=None)
def _replica_swaps(d_a: int, d_b: int) -> tuple[np.ndarray, np.ndarray]:
    """``S_AA'`` and ``S_BB'`` on ``(A B) (x) (A' B')``."""
    d = d_a * d_b
    idx = np.arange(d * d).reshape(d_a, d_b, d_a, d_b)
    perm_a = idx.transpose(2, 1, 0, 3).ravel()
    perm_b = idx.transpose(0, 3, 2, 1).ravel()
    eye = np.eye(d * d)
    return eye[perm_a], eye[perm_b]


# Haar-average value of the raw projector formula at CNOT is 2/9; reported
# values are rescaled so CNOT sits at 2/3.
def _raw_entangling_power(u: np.ndarray, part: Bipartition) -> float:
    da, db = part.d_a, part.d_b
    s_a, s_b = _replica_swaps(da, db)
    eye = np.eye(u.shape[0] ** 2)
    uu = np.kron(u, u)
    sym = (eye + s_a) @ (eye + s_b)
    value = np.trace(uu @ sym @ uu.conj().T @ (eye - s_b)).real
    return float(value / (da * (da + 1) * db * (db + 1)))


@functools.lru_cache(maxsize=None)
def entangling_power_scale() -> float:
    """Normalization constant fixed by ``e_p(CNOT) = 2/3`` on qubits."""
    return (2.0 / 3.0) / _raw_entangling_power(CNOT, QUBITS)


@dataclasses.dataclass(frozen=True)
class EntanglingEstimate:
    value: float
    std_error: float
    n_samples: int
    exact: bool


def entangling_power(
    u: np.ndarray,
    part: Bipartition = QUBITS,
    mode: str = "exact-moments",
    n_samples: int = DEFAULT_EP_SAMPLES,
    rng: np.random.Generator | None = None,
) -> EntanglingEstimate:
    """Haar average over product inputs of the output linear entropy, normalized."""
    u = require_unitary(u, "entangling_power input")
    part.check(u.shape[0])
    scale = entangling_power_scale()
    key = mode.lower().replace("_", "-")
    if key == "exact-moments":
        return EntanglingEstimate(scale * _raw_entangling_power(u, part), 0.0, 1, True)
    if key not in ("monte-carlo", "mc"):
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("monte-carlo mode needs an explicit rng")
    vals = np.empty(n_samples)
    for k in range(n_samples):
        psi = np.kron(haar_state(part.d_a, rng), haar_state(part.d_b, rng))
        vals[k] = 1.0 - _purity_b(u @ psi, part.d_a, part.d_b)
    vals *= scale
    return EntanglingEstimate(float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples)), n_samples, False)


def _swap(part: Bipartition) -> np.ndarray:
    da, db = part.d_a, part.d_b
    if da != db:
        raise ValueError("gate typicality needs equal subsystem dimensions")
    idx = np.arange(da * db).reshape(da, db).T.ravel()
    return np.eye(da * db, dtype=complex)[idx]


def gate_typicality(u: np.ndarray, part: Bipartition = QUBITS) -> float:
    """``[E(U) - E(US) + E(S)] / (2 E(S))``."""
    u = require_unitary(u, "gate_typicality input")
    part.check(u.shape[0])
    s = _swap(part)
    e_s = operator_entanglement(s, part)
    return (operator_entanglement(u, part) - operator_entanglement(u @ s, part) + e_s) / (2 * e_s)


def mp_lower_boundary(e_p: float) -> float:
    """Parabola ``(6/5) e_p (1 - (3/2) e_p)`` bounding ``m_p`` from below."""
    if not (-1e-12 <= e_p <= 2.0 / 3.0 + 1e-12):
        raise ValueError(f"e_p={e_p} outside [0, 2/3]")
    return 1.2 * e_p * (1.0 - 1.5 * e_p)


@dataclasses.dataclass(frozen=True)
class GateInvariants:
    e_p: float
    g_t: float
    m_p: float

    @classmethod
    def of(cls, u: np.ndarray) -> GateInvariants:
        from .magic import non_stabilizing_power

        return cls(
            entangling_power(u).value,
            gate_typicality(u),
            non_stabilizing_power(u, mode="exact-n2").value,
        )
