"""Hot inner loops, each with a numba ``@njit`` body and a pure-numpy twin.

The numba path is used when numba imports cleanly and the environment
variable ``MAGICPOWER_NUMBA`` is not set to ``0``.  Both paths are always
importable (``*_numpy`` / ``*_numba``) so tests and the benchmark can compare
them directly; the unsuffixed names dispatch to the active backend.
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("MAGICPOWER_NUMBA", "1").strip().lower() not in {"0", "false", "no", "off"}

try:
    import numba as _nb
except ImportError:  # pragma: no cover - exercised only without numba
    _nb = None
else:
    # the TBB probe warns on older TBB builds; workqueue is always available
    if "NUMBA_THREADING_LAYER" not in os.environ:
        _nb.config.THREADING_LAYER = "workqueue"

HAVE_NUMBA = _nb is not None
USE_NUMBA = HAVE_NUMBA and _WANT_NUMBA
BACKEND = "numba" if USE_NUMBA else "numpy"

# elements of the (batch, 2^N, 2^N) work array per numpy chunk
_NUMPY_CHUNK_ELEMS = 1 << 22


def parity(values: np.ndarray) -> np.ndarray:
    """Bit parity of each non-negative integer in ``values``."""
    values = np.asarray(values, dtype=np.int64)
    if hasattr(np, "bitwise_count"):
        return (np.bitwise_count(values) & 1).astype(np.int64)
    out = values.copy()
    shift = 32
    while shift:
        out ^= out >> shift
        shift //= 2
    return out & 1


# ---------------------------------------------------------------------------
# sum over all Pauli strings of |<psi|P|psi>|^4


def _fwht_last_axis(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < n:
        a = a.reshape(lead + (n // (2 * h), 2, h))
        lo = a[..., 0, :]
        hi = a[..., 1, :]
        a = np.stack((lo + hi, lo - hi), axis=-2)
        h *= 2
    return a.reshape(lead + (n,))


def pauli_fourth_moment_numpy(psi: np.ndarray) -> np.ndarray:
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    batch, dim = psi.shape
    idx = np.arange(dim)
    flip = idx[:, None] ^ idx[None, :]  # flip[x, i] = i ^ x
    out = np.empty(batch)
    step = max(1, _NUMPY_CHUNK_ELEMS // (dim * dim))
    for start in range(0, batch, step):
        block = psi[start:start + step]
        pairs = np.conj(block[:, flip]) * block[:, None, :]
        spectrum = _fwht_last_axis(pairs)
        weights = spectrum.real**2 + spectrum.imag**2
        out[start:start + step] = np.sum(weights * weights, axis=(1, 2))
    return out


def pauli_squares_numpy(psi: np.ndarray) -> np.ndarray:
    """``out[x, z] = |<psi| X^x Z^z |psi>|^2`` for one state."""
    psi = np.asarray(psi, dtype=np.complex128)
    dim = psi.shape[0]
    idx = np.arange(dim)
    flip = idx[:, None] ^ idx[None, :]
    spectrum = _fwht_last_axis(np.conj(psi[flip]) * psi[None, :])
    return spectrum.real**2 + spectrum.imag**2


def gap_ratios_numpy(spacings: np.ndarray) -> np.ndarray:
    """``min(d_i, d_{i+1}) / max(d_i, d_{i+1})``, zero when both vanish."""
    d = np.asarray(spacings, dtype=np.float64)
    lo = np.minimum(d[:-1], d[1:])
    hi = np.maximum(d[:-1], d[1:])
    out = np.zeros_like(lo)
    np.divide(lo, hi, out=out, where=hi > 0)
    return out


def apply_pauli_numpy(psi: np.ndarray, x: int, z: int, coeff: complex) -> np.ndarray:
    """``coeff * X^x Z^z`` applied to ``psi`` (last axis is the basis index)."""
    dim = psi.shape[-1]
    idx = np.arange(dim)
    signs = 1.0 - 2.0 * parity(idx & z)
    out = np.empty_like(psi, dtype=np.complex128)
    out[..., idx ^ x] = psi * (signs * coeff)
    return out


if HAVE_NUMBA:

    @_nb.njit(cache=True, parallel=True)
    def pauli_fourth_moment_numba(psi):  # pragma: no cover - compiled
        batch, dim = psi.shape
        out = np.empty(batch)
        for b in _nb.prange(batch):
            buf = np.empty(dim, dtype=np.complex128)
            acc = 0.0
            for x in range(dim):
                for i in range(dim):
                    buf[i] = np.conj(psi[b, i ^ x]) * psi[b, i]
                h = 1
                while h < dim:
                    for start in range(0, dim, 2 * h):
                        for j in range(start, start + h):
                            u = buf[j]
                            v = buf[j + h]
                            buf[j] = u + v
                            buf[j + h] = u - v
                    h *= 2
                for i in range(dim):
                    w = buf[i].real * buf[i].real + buf[i].imag * buf[i].imag
                    acc += w * w
            out[b] = acc
        return out

    @_nb.njit(cache=True)
    def _pauli_squares_nb(psi):  # pragma: no cover - compiled
        dim = psi.shape[0]
        out = np.empty((dim, dim))
        buf = np.empty(dim, dtype=np.complex128)
        for x in range(dim):
            for i in range(dim):
                buf[i] = np.conj(psi[i ^ x]) * psi[i]
            h = 1
            while h < dim:
                for start in range(0, dim, 2 * h):
                    for j in range(start, start + h):
                        u = buf[j]
                        v = buf[j + h]
                        buf[j] = u + v
                        buf[j + h] = u - v
                h *= 2
            for i in range(dim):
                out[x, i] = buf[i].real * buf[i].real + buf[i].imag * buf[i].imag
        return out

    @_nb.njit(cache=True)
    def gap_ratios_numba(spacings):  # pragma: no cover - compiled
        n = spacings.shape[0]
        out = np.zeros(n - 1)
        for i in range(n - 1):
            d0 = spacings[i]
            d1 = spacings[i + 1]
            hi = max(d0, d1)
            if hi > 0.0:
                out[i] = min(d0, d1) / hi
        return out

    @_nb.njit(cache=True)
    def _apply_pauli_nb(psi, x, z, coeff):  # pragma: no cover - compiled
        rows, dim = psi.shape
        out = np.empty((rows, dim), dtype=np.complex128)
        for i in range(dim):
            v = i & z
            par = 0
            while v:
                par ^= 1
                v &= v - 1
            c = -coeff if par else coeff
            for r in range(rows):
                out[r, i ^ x] = c * psi[r, i]
        return out

    def pauli_squares_numba(psi):
        return _pauli_squares_nb(np.ascontiguousarray(psi, dtype=np.complex128))

    def apply_pauli_numba(psi, x, z, coeff):
        arr = np.asarray(psi, dtype=np.complex128)
        flat = np.ascontiguousarray(arr.reshape(-1, arr.shape[-1]))
        return _apply_pauli_nb(flat, int(x), int(z), complex(coeff)).reshape(arr.shape)

    def _fourth_moment_dispatch(psi):
        return pauli_fourth_moment_numba(np.ascontiguousarray(psi, dtype=np.complex128))

    def _gap_dispatch(spacings):
        return gap_ratios_numba(np.ascontiguousarray(spacings, dtype=np.float64))


if USE_NUMBA:
    pauli_fourth_moment = _fourth_moment_dispatch
    pauli_squares = pauli_squares_numba
    gap_ratios = _gap_dispatch
    apply_pauli = apply_pauli_numba
else:
    pauli_fourth_moment = pauli_fourth_moment_numpy
    pauli_squares = pauli_squares_numpy
    gap_ratios = gap_ratios_numpy
    apply_pauli = apply_pauli_numpy
