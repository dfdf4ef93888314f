"""Clifford tableaux, exact enumerations, uniform sampling and dense synthesis.

A :class:`CliffordTableau` records the images of the Pauli generators under
``P -> C P C^dagger``: row ``q`` is the image of ``X_q`` and row ``N + q`` the
image of ``Z_q``.  The binary part is written in qubit-indexed coordinates
``(x_0 .. x_{N-1} | z_0 .. z_{N-1})``; ``phase_bits[r] = 1`` means the image
carries a minus sign.  Global phases are ignored everywhere.
"""

from __future__ import annotations

import dataclasses
import functools
from collections import deque
from typing import Sequence

import numpy as np

from . import _kernels
from .config import check_qubits, get_config
from .linalg import CNOT, H, S, apply_to_qubits, n_qubits_of, require_unitary
from .pauli import PauliString, popcount


def _mask_to_bits(mask: int, n: int) -> np.ndarray:
    return np.array([(mask >> (n - 1 - q)) & 1 for q in range(n)], dtype=np.uint8)


def _bits_to_mask(bits: np.ndarray) -> int:
    n = len(bits)
    return sum(int(b) << (n - 1 - q) for q, b in enumerate(bits))


def symplectic_form(n: int) -> np.ndarray:
    eye = np.eye(n, dtype=np.uint8)
    zero = np.zeros((n, n), dtype=np.uint8)
    return np.block([[zero, eye], [eye, zero]])


def is_symplectic(m: np.ndarray) -> bool:
    n = m.shape[0] // 2
    omega = symplectic_form(n).astype(np.int64)
    mm = m.astype(np.int64)
    return bool(np.array_equal((mm @ omega @ mm.T) % 2, omega))


class CliffordTableau:
    """N-qubit Clifford modulo global phase."""

    __slots__ = ("n_qubits", "symplectic_matrix", "phase_bits", "_images", "_inverse", "_dense")

    def __init__(self, n_qubits: int, symplectic_matrix: np.ndarray, phase_bits: np.ndarray):
        m = np.asarray(symplectic_matrix, dtype=np.uint8) % 2
        r = np.asarray(phase_bits, dtype=np.uint8) % 2
        if m.shape != (2 * n_qubits, 2 * n_qubits) or r.shape != (2 * n_qubits,):
            raise ValueError("tableau shape does not match the qubit count")
        self.n_qubits = n_qubits
        self.symplectic_matrix = m
        self.phase_bits = r
        self._images = None
        self._inverse = None
        self._dense = None

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> CliffordTableau:
        return cls(n, np.eye(2 * n, dtype=np.uint8), np.zeros(2 * n, dtype=np.uint8))

    @classmethod
    def from_images(cls, images: Sequence[PauliString]) -> CliffordTableau:
        """Build from the 2N generator images ``[C X_0 C^+, .., C Z_{N-1} C^+]``."""
        n = images[0].n_qubits
        if len(images) != 2 * n:
            raise ValueError("need exactly 2N generator images")
        m = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        r = np.zeros(2 * n, dtype=np.uint8)
        for row, p in enumerate(images):
            if not p.is_hermitian:
                raise ValueError(f"generator image {p} is not Hermitian")
            m[row, :n] = _mask_to_bits(p.x_mask, n)
            m[row, n:] = _mask_to_bits(p.z_mask, n)
            r[row] = p.phase_exp // 2
        tab = cls(n, m, r)
        if not is_symplectic(m):
            raise ValueError("generator images do not preserve commutation relations")
        return tab

    @classmethod
    def from_dense(cls, u: np.ndarray) -> CliffordTableau:
        """Tableau of a dense Clifford unitary; raises if ``u`` is not Clifford."""
        u = require_unitary(u, "from_dense input")
        n = n_qubits_of(u.shape[0])
        images = []
        for g in _generators(n):
            image = _as_signed_pauli(u @ g.dense() @ u.conj().T, n)
            if image is None:
                raise ValueError("matrix does not map Pauli strings to Pauli strings")
            images.append(image)
        return cls.from_images(images)

    # -- views --------------------------------------------------------------

    def images(self) -> list[PauliString]:
        if self._images is None:
            n = self.n_qubits
            self._images = [
                PauliString(
                    n,
                    _bits_to_mask(self.symplectic_matrix[row, :n]),
                    _bits_to_mask(self.symplectic_matrix[row, n:]),
                    2 * int(self.phase_bits[row]),
                )
                for row in range(2 * n)
            ]
        return self._images

    def key(self) -> bytes:
        return self.symplectic_matrix.tobytes() + self.phase_bits.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.key()))

    def __repr__(self) -> str:
        imgs = ", ".join(str(p) for p in self.images())
        return f"CliffordTableau(n={self.n_qubits}, images=[{imgs}])"

    # -- action -------------------------------------------------------------

    def apply(self, p: PauliString) -> PauliString:
        """``C P C^dagger``."""
        n = self.n_qubits
        if p.n_qubits != n:
            raise ValueError("qubit count mismatch between Pauli string and tableau")
        imgs = self.images()
        out = PauliString(n, 0, 0, p._xz_phase())
        for q in range(n):
            if (p.x_mask >> (n - 1 - q)) & 1:
                out = out * imgs[q]
        for q in range(n):
            if (p.z_mask >> (n - 1 - q)) & 1:
                out = out * imgs[n + q]
        return out

    def conjugate_dagger(self, p: PauliString) -> PauliString:
        """``C^dagger P C``."""
        return self.inverse().apply(p)

    def compose(self, first: CliffordTableau) -> CliffordTableau:
        """Tableau of ``self @ first`` (``first`` acts first)."""
        if first.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        return CliffordTableau.from_images([self.apply(p) for p in first.images()])

    def __matmul__(self, other: CliffordTableau) -> CliffordTableau:
        return self.compose(other)

    def inverse(self) -> CliffordTableau:
        if self._inverse is None:
            n = self.n_qubits
            omega = symplectic_form(n).astype(np.int64)
            m_inv = (omega @ self.symplectic_matrix.T.astype(np.int64) @ omega) % 2
            trial = CliffordTableau(n, m_inv, np.zeros(2 * n, dtype=np.uint8))
            # Fix signs so that self @ trial is the identity.
            signs = np.array([self.apply(p).phase_exp // 2 for p in trial.images()], dtype=np.uint8)
            inv = CliffordTableau(n, m_inv, signs)
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    # -- dense forms --------------------------------------------------------

    def stabilizer_state(self) -> np.ndarray:
        """``C |0...0>`` as a normalized amplitude vector (phase fixed so the
        first nonzero amplitude is real positive)."""
        n = self.n_qubits
        check_qubits(n, get_config().max_dense_qubits, "stabilizer_state")
        stabilizers = self.images()[n:]
        b = _support_point(stabilizers, n)
        psi = np.zeros(1 << n, dtype=complex)
        psi[b] = 1.0
        for s in stabilizers:
            psi = 0.5 * (psi + s.apply(psi))
        psi /= np.linalg.norm(psi)
        k = int(np.flatnonzero(np.abs(psi) > 1e-12)[0])
        return psi * (abs(psi[k]) / psi[k])

    def dense(self) -> np.ndarray:
        """Dense unitary, one global phase chosen arbitrarily.

        Column ``j`` equals ``C X^j C^dagger`` applied to ``C|0>``; columns are
        visited in Gray-code order so each costs one Pauli application.
        """
        if self._dense is None:
            n = self.n_qubits
            dim = 1 << n
            destab = self.images()[:n]
            out = np.empty((dim, dim), dtype=complex)
            col = self.stabilizer_state()
            out[:, 0] = col
            prev = 0
            for k in range(1, dim):
                g = k ^ (k >> 1)
                bit = (g ^ prev).bit_length() - 1
                col = destab[n - 1 - bit].apply(col)
                out[:, g] = col
                prev = g
            out.setflags(write=False)
            self._dense = out
        return self._dense

    def apply_to_state(self, psi: np.ndarray) -> np.ndarray:
        return self.dense() @ np.asarray(psi, dtype=complex)


synthesize_dense = CliffordTableau.dense


def _generators(n: int) -> list[PauliString]:
    return [PauliString.single(n, q, "X") for q in range(n)] + [PauliString.single(n, q, "Z") for q in range(n)]


def _support_point(stabilizers: Sequence[PauliString], n: int) -> int:
    """A basis index ``b`` with ``<b|psi> != 0`` for the stabilizer state of the generators."""
    rows = list(stabilizers)
    # Row-reduce on the X part; leftover rows are diagonal (Z-type) stabilizers.
    pivot = 0
    for bit in reversed(range(n)):
        sel = next((i for i in range(pivot, len(rows)) if (rows[i].x_mask >> bit) & 1), None)
        if sel is None:
            continue
        rows[pivot], rows[sel] = rows[sel], rows[pivot]
        for i in range(len(rows)):
            if i != pivot and (rows[i].x_mask >> bit) & 1:
                rows[i] = rows[i] * rows[pivot]
        pivot += 1
    # Each diagonal row (-1)^s Z^z fixes the parity z.b = s.
    eqs = [(r.z_mask, r.phase_exp // 2) for r in rows[pivot:]]
    b = 0
    solved: list[tuple[int, int, int]] = []
    for z, s in eqs:
        for lead, zz, ss in solved:
            if (z >> lead) & 1:
                z ^= zz
                s ^= ss
        if z == 0:
            if s:
                raise ValueError("inconsistent stabilizer generators")
            continue
        lead = z.bit_length() - 1
        for idx, (l2, z2, s2) in enumerate(solved):
            if (z2 >> lead) & 1:
                solved[idx] = (l2, z2 ^ z, s2 ^ s)
        solved.append((lead, z, s))
    for lead, z, s in solved:
        # free bits are zero, so only the lead bit needs setting
        if s:
            b |= 1 << lead
    return b


def pauli_decompose(a: np.ndarray) -> np.ndarray:
    """Coefficients ``c[x, z]`` with ``a = sum c[x, z] * sigma_{x,z}`` (Hermitian Pauli basis)."""
    a = np.asarray(a, dtype=complex)
    dim = a.shape[0]
    idx = np.arange(dim)
    # Tr(X^x Z^z a) = sum_j (-1)^{z.j} a[j, j^x], a Walsh transform over j
    traces = _kernels._fwht_last_axis(a[idx[None, :], idx[:, None] ^ idx[None, :]])
    xz = np.array([[popcount(x & z) for z in range(dim)] for x in range(dim)])
    return traces * (1j ** (xz % 4)) / dim


def _as_signed_pauli(a: np.ndarray, n: int, atol: float | None = None) -> PauliString | None:
    atol = get_config().clifford_atol if atol is None else atol
    coeffs = pauli_decompose(a)
    x, z = np.unravel_index(int(np.argmax(np.abs(coeffs))), coeffs.shape)
    c = coeffs[x, z]
    if abs(abs(c) - 1) > atol or abs(c.imag) > atol:
        return None
    rest = np.sum(np.abs(coeffs) ** 2) - abs(c) ** 2
    if rest > atol:
        return None
    return PauliString(n, int(x), int(z), 0 if c.real > 0 else 2)


def is_clifford_dense(u: np.ndarray) -> bool:
    """True iff ``U^dagger P U`` is a signed Pauli string for every generator ``P``."""
    u = require_unitary(u, "is_clifford_dense input")
    n = n_qubits_of(u.shape[0])
    check_qubits(n, 6, "is_clifford_dense")
    for g in _generators(n):
        if _as_signed_pauli(u.conj().T @ g.dense() @ u, n) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# elementary tableaux


def gate_tableau(name: str, n: int, *qubits: int) -> CliffordTableau:
    """Tableau of a named gate (``H S SDG X Y Z CNOT CZ SWAP``) on ``qubits`` of ``n``."""
    name = name.upper()
    imgs = _generators(n)
    out = list(imgs)

    def xq(q):
        return imgs[q]

    def zq(q):
        return imgs[n + q]

    if name == "H":
        (q,) = qubits
        out[q], out[n + q] = zq(q), xq(q)
    elif name in ("S", "SDG"):
        (q,) = qubits
        y = xq(q) * zq(q) * PauliString(n, 0, 0, 1)  # i X Z = Y
        out[q] = y if name == "S" else y.with_phase(y.phase_exp + 2)
    elif name in ("X", "Y", "Z"):
        (q,) = qubits
        if name in ("Y", "Z"):
            out[q] = xq(q).with_phase(2)
        if name in ("X", "Y"):
            out[n + q] = zq(q).with_phase(2)
    elif name == "CNOT":
        c, t = qubits
        out[c] = xq(c) * xq(t)
        out[n + t] = zq(c) * zq(t)
    elif name == "CZ":
        c, t = qubits
        out[c] = xq(c) * zq(t)
        out[t] = zq(c) * xq(t)
    elif name == "SWAP":
        a, b = qubits
        out[a], out[b] = xq(b), xq(a)
        out[n + a], out[n + b] = zq(b), zq(a)
    else:
        raise ValueError(f"unknown gate {name!r}")
    return CliffordTableau.from_images(out)


# ---------------------------------------------------------------------------
# sampling


def _symp(a: tuple[int, int], b: tuple[int, int]) -> int:
    return (popcount(a[0] & b[1]) + popcount(a[1] & b[0])) & 1


def random_symplectic_pairs(n: int, rng: np.random.Generator) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Uniform random symplectic basis ``[(img X_q, img Z_q)]`` as (x, z) mask pairs.

    Each pair is drawn uniformly from the symplectic complement of the pairs
    already chosen, which yields the Haar measure on Sp(2n, 2).
    """
    pairs: list[tuple[tuple[int, int], tuple[int, int]]] = []
    top = 1 << n

    def project(v: tuple[int, int]) -> tuple[int, int]:
        x, z = v
        for a, b in pairs:
            ca, cb = _symp((x, z), b), _symp((x, z), a)
            if ca:
                x, z = x ^ a[0], z ^ a[1]
            if cb:
                x, z = x ^ b[0], z ^ b[1]
        return x, z

    for _ in range(n):
        while True:
            v = project((int(rng.integers(top)), int(rng.integers(top))))
            if v != (0, 0):
                break
        while True:
            w = project((int(rng.integers(top)), int(rng.integers(top))))
            if _symp(v, w):
                break
        pairs.append((v, w))
    return pairs


def random_clifford(n: int, rng: np.random.Generator) -> CliffordTableau:
    """Uniformly random N-qubit Clifford (modulo global phase)."""
    check_qubits(n, get_config().max_pauli_qubits, "random_clifford")
    pairs = random_symplectic_pairs(n, rng)
    signs = rng.integers(0, 2, size=2 * n)
    images = [PauliString(n, v[0], v[1], 2 * int(signs[q])) for q, (v, _) in enumerate(pairs)]
    images += [PauliString(n, w[0], w[1], 2 * int(signs[n + q])) for q, (_, w) in enumerate(pairs)]
    return CliffordTableau.from_images(images)


def random_stabilizer_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """``C|0...0>`` for a uniformly random Clifford ``C``."""
    return random_clifford(n, rng).stabilizer_state()


# ---------------------------------------------------------------------------
# exact enumerations (small N)


def _symplectic_generators(n: int) -> list[np.ndarray]:
    gens = [gate_tableau("H", n, q) for q in range(n)] + [gate_tableau("S", n, q) for q in range(n)]
    gens += [gate_tableau("CNOT", n, q, q + 1) for q in range(n - 1)]
    return [g.symplectic_matrix for g in gens]


@functools.lru_cache(maxsize=None)
def _symplectic_group(n: int) -> tuple[np.ndarray, ...]:
    check_qubits(n, 2, "symplectic group enumeration")
    start = np.eye(2 * n, dtype=np.uint8)
    gens = _symplectic_generators(n)
    seen = {start.tobytes(): start}
    queue = deque([start])
    while queue:
        m = queue.popleft()
        for g in gens:
            # row convention: composite images are rows of m @ g
            nxt = (m.astype(np.int64) @ g.astype(np.int64) % 2).astype(np.uint8)
            key = nxt.tobytes()
            if key not in seen:
                seen[key] = nxt
                queue.append(nxt)
    return tuple(seen.values())


@functools.lru_cache(maxsize=None)
def enumerate_cliffords(n: int) -> tuple[CliffordTableau, ...]:
    """Every N-qubit Clifford modulo phase for N <= 2 (24 or 11520), identity first."""
    out = []
    for m in _symplectic_group(n):
        for code in range(1 << (2 * n)):
            bits = np.array([(code >> k) & 1 for k in range(2 * n)], dtype=np.uint8)
            out.append(CliffordTableau(n, m, bits))
    return tuple(out)


def enumerate_single_qubit_cliffords() -> list[CliffordTableau]:
    return list(enumerate_cliffords(1))


@functools.lru_cache(maxsize=None)
def clifford_dense_table(n: int) -> np.ndarray:
    """Stacked dense matrices of :func:`enumerate_cliffords` (read-only)."""
    table = np.stack([c.dense() for c in enumerate_cliffords(n)])
    table.setflags(write=False)
    return table


def random_clifford_dense(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Dense uniformly random Clifford(s); ``size`` stacks independent draws."""
    count = 1 if size is None else int(size)
    if n <= 2:
        table = clifford_dense_table(n)
        out = table[rng.integers(0, len(table), size=count)]
    else:
        out = np.stack([random_clifford(n, rng).dense() for _ in range(count)])
    return out[0] if size is None else out


def _canonical_rows(states: np.ndarray) -> np.ndarray:
    """Fix each row's phase so its first nonzero amplitude is real positive."""
    lead = np.argmax(np.abs(states) > 1e-9, axis=1)
    ref = states[np.arange(len(states)), lead]
    return states * (np.abs(ref) / ref)[:, None]


def _row_keys(states: np.ndarray, decimals: int = 8) -> list[bytes]:
    # adding 0.0 folds -0.0 into 0.0 so equal states share a key
    rounded = np.round(states, decimals) + 0.0
    return [row.tobytes() for row in rounded]


@functools.lru_cache(maxsize=None)
def stabilizer_state_table(n: int) -> np.ndarray:
    """All N-qubit stabilizer states (rows), by orbit closure of ``|0..0>``.

    Feasible for N <= 4 (60, 1080, 36720 states for N = 2, 3, 4).
    """
    check_qubits(n, 4, "stabilizer state enumeration")
    dim = 1 << n
    gates: list[tuple[np.ndarray, tuple[int, ...]]] = [(H, (q,)) for q in range(n)]
    gates += [(S, (q,)) for q in range(n)]
    gates += [(CNOT, (q, q + 1)) for q in range(n - 1)]
    start = np.zeros((1, dim), dtype=complex)
    start[0, 0] = 1.0
    found = [start]
    seen = set(_row_keys(start))
    frontier = start
    while len(frontier):
        # qubit axes first, batch axis last
        t = frontier.T.reshape((2,) * n + (len(frontier),))
        fresh = []
        for op, qs in gates:
            nxt = _canonical_rows(apply_to_qubits(t, op, qs, n).reshape(dim, -1).T)
            for key, row in zip(_row_keys(nxt), nxt):
                if key not in seen:
                    seen.add(key)
                    fresh.append(row)
        frontier = np.array(fresh).reshape(-1, dim)
        found.append(frontier)
    table = np.concatenate(found)
    table.setflags(write=False)
    return table


@dataclasses.dataclass(frozen=True)
class StabilizerStateSet:
    n_qubits: int
    states: np.ndarray
    exact: bool

    def __len__(self) -> int:
        return len(self.states)


def enumerate_two_qubit_stabilizer_states() -> StabilizerStateSet:
    return StabilizerStateSet(2, stabilizer_state_table(2), True)


def single_qubit_stabilizer_states() -> np.ndarray:
    return stabilizer_state_table(1)


def stabilizer_state_count(n: int) -> int:
    """``2^n prod_{k=1..n} (2^k + 1)``."""
    count = 1 << n
    for k in range(1, n + 1):
        count *= (1 << k) + 1
    return count
