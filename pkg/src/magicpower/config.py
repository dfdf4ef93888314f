"""Numerical tolerances and resource limits shared by every module.

All pass/fail thresholds live in one :class:`NumericalConfig` record so a run
can be reproduced exactly.  Override globally with :func:`set_config` or
temporarily with the :func:`override` context manager.
"""

from __future__ import annotations

import contextlib
import dataclasses
import os
from typing import Iterator


@dataclasses.dataclass(frozen=True)
class NumericalConfig:
    unitary_atol: float = 1e-10
    hermitian_atol: float = 1e-10
    norm_atol: float = 1e-12
    # checks that go through a dense Pauli projection are looser
    clifford_atol: float = 1e-8
    # magic values below -negative_clamp are treated as a broken normalization
    negative_clamp: float = 1e-10
    max_dense_qubits: int = 12
    max_pauli_qubits: int = 10


_CONFIG = NumericalConfig()


def get_config() -> NumericalConfig:
    return _CONFIG


def set_config(config: NumericalConfig) -> None:
    global _CONFIG
    _CONFIG = config


@contextlib.contextmanager
def override(**changes) -> Iterator[NumericalConfig]:
    """Temporarily replace fields of the global config."""
    global _CONFIG
    previous = _CONFIG
    _CONFIG = dataclasses.replace(previous, **changes)
    try:
        yield _CONFIG
    finally:
        _CONFIG = previous


def dense_memory_bytes(n_qubits: int) -> int:
    """Bytes needed for one dense complex128 operator on ``n_qubits``."""
    return 16 * 4**n_qubits


def worker_count() -> int:
    """Worker processes used by ensemble runs (``MAGICPOWER_WORKERS``, default 1)."""
    raw = os.environ.get("MAGICPOWER_WORKERS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MAGICPOWER_WORKERS must be an integer, got {raw!r}") from None
    return max(1, value)


class ResourceError(RuntimeError):
    """Raised when a request exceeds the dense-simulation limits."""


def check_qubits(n_qubits: int, limit: int, what: str) -> None:
    if n_qubits > limit:
        raise ResourceError(
            f"{what}: n={n_qubits} exceeds the limit n<={limit} "
            f"(a dense operator at n={n_qubits} needs "
            f"{dense_memory_bytes(n_qubits) / 2**20:.1f} MiB)"
        )
