"""Bit-mask representation of N-qubit Pauli strings.

A :class:`PauliString` stands for ``i**phase_exp * s_0 (x) s_1 (x) ... s_{N-1}``
where each factor ``s_q`` is ``I, X, Z`` or ``Y`` according to the bits
``(x_q, z_q)`` = (0,0), (1,0), (0,1), (1,1).  Bit ``q`` of a mask belongs to
qubit ``N-1-q`` so that masks line up with basis-state indices (qubit 0 is
the most significant bit).  With ``phase_exp`` in {0, 2} the operator is
Hermitian, which is the form used for expectation values.
"""

from __future__ import annotations

import dataclasses
from typing import Iterator

import numpy as np

from . import _kernels
from .config import check_qubits, get_config
from .linalg import require_state

_CHARS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _CHARS.items()}
_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def popcount(v: int) -> int:
    return int(v).bit_count()


@dataclasses.dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("PauliString needs at least one qubit")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError("mask out of range for the qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse ``"XIZY"``, optionally prefixed by ``+``, ``-``, ``+i``, ``-i`` or ``i``."""
        text = label.strip()
        phase = 0
        for prefix, value in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if text.startswith(prefix) and len(text) > len(prefix):
                phase = value
                text = text[len(prefix):]
                break
        if not text or any(ch not in "IXYZ" for ch in text.upper()):
            raise ValueError(f"not a Pauli literal: {label!r}")
        n = len(text)
        x = z = 0
        for q, ch in enumerate(text.upper()):
            xb, zb = _BITS[ch]
            bit = n - 1 - q
            x |= xb << bit
            z |= zb << bit
        return cls(n, x, z, phase)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, kind: str) -> PauliString:
        """Single-qubit ``X``, ``Y`` or ``Z`` on ``qubit`` of an ``n_qubits`` register."""
        xb, zb = _BITS[kind.upper()]
        bit = n_qubits - 1 - qubit
        return cls(n_qubits, xb << bit, zb << bit)

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls(n_qubits, 0, 0)

    # -- views --------------------------------------------------------------

    @property
    def label(self) -> str:
        n = self.n_qubits
        return "".join(
            _CHARS[((self.x_mask >> (n - 1 - q)) & 1, (self.z_mask >> (n - 1 - q)) & 1)] for q in range(n)
        )

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase_exp] + self.label

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 - self.phase_exp

    @property
    def weight(self) -> int:
        return popcount(self.x_mask | self.z_mask)

    def unsigned(self) -> PauliString:
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, 0)

    def with_phase(self, phase_exp: int) -> PauliString:
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, phase_exp)

    def _xz_phase(self) -> int:
        """Exponent ``k`` with ``self == i**k * X^x Z^z``."""
        return (self.phase_exp + popcount(self.x_mask & self.z_mask)) % 4

    # -- algebra ------------------------------------------------------------

    def __mul__(self, other: PauliString) -> PauliString:
        if not isinstance(other, PauliString):
            return NotImplemented
        _same_size(self, other)
        e = self._xz_phase() + other._xz_phase() + 2 * popcount(self.z_mask & other.x_mask)
        x = self.x_mask ^ other.x_mask
        z = self.z_mask ^ other.z_mask
        return PauliString(self.n_qubits, x, z, e - popcount(x & z))

    def commutes(self, other: PauliString) -> bool:
        _same_size(self, other)
        return (popcount(self.x_mask & other.z_mask) + popcount(self.z_mask & other.x_mask)) % 2 == 0

    def dense(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        idx = np.arange(dim)
        signs = 1.0 - 2.0 * _kernels.parity(idx & self.z_mask)
        out = np.zeros((dim, dim), dtype=complex)
        out[idx ^ self.x_mask, idx] = signs * (1j ** self._xz_phase())
        return out

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """``P @ psi`` without forming the dense matrix; ``psi`` may be batched on leading axes."""
        psi = np.asarray(psi, dtype=complex)
        if psi.shape[-1] != 1 << self.n_qubits:
            raise ValueError("dimension mismatch between Pauli string and state")
        return _kernels.apply_pauli(psi, self.x_mask, self.z_mask, 1j ** self._xz_phase())


def _same_size(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


def enumerate_paulis(n: int) -> Iterator[PauliString]:
    """All ``4**n`` unsigned Hermitian Pauli strings, identity first."""
    check_qubits(n, get_config().max_pauli_qubits, "enumerate_paulis")
    dim = 1 << n
    for x in range(dim):
        for z in range(dim):
            yield PauliString(n, x, z)


def pauli_expectation(p: PauliString, psi: np.ndarray) -> float:
    """``<psi|P|psi>`` for a Hermitian Pauli string, in O(2^N)."""
    psi = require_state(psi)
    if psi.shape[0] != 1 << p.n_qubits:
        raise ValueError("dimension mismatch between Pauli string and state")
    if not p.is_hermitian:
        raise ValueError("expectation requested for a non-Hermitian Pauli string")
    idx = np.arange(psi.shape[0])
    signs = 1.0 - 2.0 * _kernels.parity(idx & p.z_mask)
    raw = np.sum(np.conj(psi[idx ^ p.x_mask]) * signs * psi)
    return float((raw * 1j ** p._xz_phase()).real)


def pauli_squares(psi: np.ndarray) -> np.ndarray:
    """Array ``w[x, z] = <psi|P_{x,z}|psi>^2`` over all Pauli strings."""
    return _kernels.pauli_squares(np.asarray(psi, dtype=complex))


def conjugate_by_clifford(p: PauliString, c) -> PauliString:
    """``C^dagger P C`` for a :class:`~magicpower.clifford.CliffordTableau` ``c``."""
    return c.conjugate_dagger(p)
