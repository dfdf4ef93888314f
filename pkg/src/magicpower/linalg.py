"""Dense complex linear algebra used throughout the package.

Matrices and state vectors are plain ``numpy`` arrays.  Qubit 0 is the
leftmost Kronecker factor, i.e. the most significant bit of a basis index.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .config import get_config

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j]).astype(complex)
T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of factors, left to right."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def n_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def is_unitary(u: np.ndarray, atol: float | None = None) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    atol = get_config().unitary_atol if atol is None else atol
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


def is_hermitian(h: np.ndarray, atol: float | None = None) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    atol = get_config().hermitian_atol if atol is None else atol
    return bool(np.max(np.abs(h - h.conj().T)) <= atol)


def require_unitary(u: np.ndarray, what: str = "matrix") -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError(f"{what} is not unitary within {get_config().unitary_atol:g}")
    return u


def require_state(psi: np.ndarray, what: str = "state") -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"{what} must be a 1-d amplitude vector")
    n_qubits_of(psi.shape[0])
    norm = np.vdot(psi, psi).real
    if abs(norm - 1.0) > get_config().norm_atol * max(1, psi.shape[0]) ** 0.5:
        raise ValueError(f"{what} is not normalized (norm^2 = {norm!r})")
    return psi


def hermitian_eig(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise ValueError("hermitian_eig: input is not Hermitian")
    return np.linalg.eigh(h)


def evolution_operator(eigenvalues: np.ndarray, eigenvectors: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) from a precomputed eigendecomposition of ``H``."""
    phases = np.exp(-1j * np.asarray(eigenvalues) * t)
    return (eigenvectors * phases) @ eigenvectors.conj().T


def unitary_eigenphases(u: np.ndarray) -> np.ndarray:
    """Sorted eigenphases of a unitary in ``[0, 2*pi)``.

    Uses the general complex eigensolver on ``u`` itself, so phases near
    ``pi`` need no branch-cut handling.
    """
    u = require_unitary(u, "unitary_eigenphases input")
    phases = np.mod(np.angle(np.linalg.eigvals(u)), 2 * np.pi)
    # eigenvalues a rounding error below angle 0 would land just under 2*pi;
    # fold them back so degenerate clusters at 1 stay together
    phases[phases >= 2 * np.pi - 1e-12] = 0.0
    return np.sort(phases)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    """True when ``a == exp(i*theta) * b`` for a single real ``theta``."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        return False
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) < atol:
        return bool(np.max(np.abs(a)) < atol)
    phase = a[k] / b[k]
    if abs(abs(phase) - 1) > 1e-8:
        return False
    return bool(np.max(np.abs(a - phase * b)) <= atol)


def embed_operator(op: np.ndarray, n_total: int, qubits: tuple[int, ...]) -> np.ndarray:
    """Dense ``op`` acting on ``qubits`` of an ``n_total``-qubit register."""
    dim = 1 << n_total
    eye = np.eye(dim, dtype=complex).reshape((2,) * n_total + (dim,))
    return apply_to_qubits(eye, op, qubits, n_total).reshape(dim, dim)


def apply_to_qubits(tensor: np.ndarray, op: np.ndarray, qubits: tuple[int, ...], n_qubits: int) -> np.ndarray:
    """Apply a ``2^k x 2^k`` operator to axes ``qubits`` of a ``(2,)*n + rest`` tensor.

    The first ``n_qubits`` axes of ``tensor`` are qubit axes (qubit 0 first);
    any trailing axes are carried along (e.g. the columns of an operator).
    """
    k = len(qubits)
    op_t = np.asarray(op, dtype=complex).reshape((2,) * (2 * k))
    moved = np.tensordot(op_t, tensor, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot puts the op's output axes first; send them back to ``qubits``
    return np.moveaxis(moved, list(range(k)), list(qubits))
