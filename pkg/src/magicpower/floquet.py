"""Brick-wall Floquet circuits dressed with random one-qubit Cliffords.

One brick layer draws independent one-qubit Cliffords on every wire, then
applies the edge gate on pairs (0,1), (2,3), ..; the next layer draws fresh
Cliffords and acts on (1,2), .., (N-1,0).  A Floquet step is that pair of
layers repeated ``layers_per_step`` times.  Chaos is read off the mean
adjacent gap ratio of the eigenphases.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np

from . import _kernels
from .cartan import EdgeSpec, edge_gate
from .clifford import clifford_dense_table
from .config import check_qubits
from .ensemble import block_seeds, parallel_map
from .linalg import apply_to_qubits, unitary_eigenphases

POISSON_R = 2 * math.log(2) - 1  # 0.386294...
CUE_R = 0.596543
MAX_FLOQUET_QUBITS = 10
ZERO_SPACING = 1e-10


def default_realizations(n_qubits: int) -> int:
    return 100 if n_qubits <= 8 else 25


@dataclasses.dataclass(frozen=True)
class FloquetSpec:
    n_qubits: int
    edge: EdgeSpec
    layers_per_step: int = 1
    # "layer": fresh Cliffords before every brick layer; "step": one draw per
    # layer position, reused by each repetition within the step
    redraw: str = "layer"

    def __post_init__(self):
        if self.n_qubits < 2 or self.n_qubits % 2:
            raise ValueError(f"brick-wall circuits need an even qubit count, got {self.n_qubits}")
        if self.layers_per_step < 1:
            raise ValueError("layers_per_step must be positive")
        if self.redraw not in ("layer", "step"):
            raise ValueError(f"unknown redraw mode {self.redraw!r}")

    def with_parameter(self, parameter: float) -> FloquetSpec:
        return dataclasses.replace(self, edge=EdgeSpec(self.edge.edge, parameter))


def _brick_pairs(n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    even = [(q, q + 1) for q in range(0, n, 2)]
    odd = [(q, (q + 1) % n) for q in range(1, n, 2)]
    return even, odd


def build_floquet(spec: FloquetSpec, rng: np.random.Generator) -> np.ndarray:
    n = spec.n_qubits
    check_qubits(n, MAX_FLOQUET_QUBITS, "build_floquet")
    dim = 1 << n
    gate = edge_gate(spec.edge).dense()
    cliffords = clifford_dense_table(1)
    pairs = _brick_pairs(n)
    tensor = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    cached: list[np.ndarray] = []
    for rep in range(spec.layers_per_step):
        for half, layer in enumerate(pairs):
            if spec.redraw == "layer" or rep == 0:
                picks = rng.integers(0, len(cliffords), size=n)
                cached.append(picks)
            else:
                picks = cached[half]
            for q in range(n):
                tensor = apply_to_qubits(tensor, cliffords[picks[q]], (q,), n)
            for pair in layer:
                tensor = apply_to_qubits(tensor, gate, pair, n)
    return tensor.reshape(dim, dim)


def gap_ratios(phases: Sequence[float]) -> np.ndarray:
    """``min(d_i, d_{i+1}) / max(d_i, d_{i+1})`` over sorted phases, no wraparound.

    Spacings below ``ZERO_SPACING`` are exact degeneracies split by rounding
    and are set to zero, so any ratio touching them is zero.
    """
    p = np.sort(np.asarray(phases, dtype=float))
    if p.size < 4:
        raise ValueError("gap ratio needs at least 4 phases")
    d = np.diff(p)
    d[d < ZERO_SPACING] = 0.0
    return _kernels.gap_ratios(d)


def mean_gap_ratio(phases: Sequence[float]) -> float:
    """Average adjacent gap ratio; zero-spacing pairs count as ``r = 0``."""
    return float(np.mean(gap_ratios(phases)))


def zero_spacing_fraction(phases: Sequence[float], tol: float = ZERO_SPACING) -> float:
    d = np.diff(np.sort(np.asarray(phases, dtype=float)))
    return float(np.mean(d < tol))


@dataclasses.dataclass(frozen=True)
class SpectralStats:
    r_mean: float
    r_stderr: float
    n_realizations: int
    n_qubits: int
    parameter: float
    zero_spacing_fraction: float = 0.0

    def __post_init__(self):
        if not 0 <= self.r_mean <= 1:
            raise ValueError(f"r_mean={self.r_mean} outside [0, 1]")


def _realization_block(args) -> list[tuple[float, float]]:
    spec, count, seed = args
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        phases = unitary_eigenphases(build_floquet(spec, rng))
        out.append((mean_gap_ratio(phases), zero_spacing_fraction(phases)))
    return out


def spectral_stats(spec: FloquetSpec, n_realizations: int, rng: np.random.Generator) -> SpectralStats:
    return sweep_edge(spec, [spec.edge.parameter], rng, n_realizations)[0]


def sweep_edge(
    template: FloquetSpec,
    parameters: Sequence[float],
    rng: np.random.Generator,
    n_realizations: int | None = None,
) -> list[SpectralStats]:
    """Mean ``<r>`` and its standard error across realizations, per parameter value.

    Every realization is one seeded task, so the output does not depend on
    the worker count.
    """
    check_qubits(template.n_qubits, MAX_FLOQUET_QUBITS, "sweep_edge")
    count = default_realizations(template.n_qubits) if n_realizations is None else n_realizations
    if count < 1:
        raise ValueError("need at least one realization")
    specs = [template.with_parameter(float(p)) for p in parameters]
    seeds = block_seeds(rng, len(specs) * count)
    tasks = [(s, 1, seeds[i * count + k]) for i, s in enumerate(specs) for k in range(count)]
    flat = [res[0] for res in parallel_map(_realization_block, tasks)]
    out = []
    for i, s in enumerate(specs):
        vals = np.array(flat[i * count:(i + 1) * count])
        r = vals[:, 0]
        err = float(r.std(ddof=1) / math.sqrt(count)) if count > 1 else 0.0
        out.append(SpectralStats(float(r.mean()), err, count, s.n_qubits, s.edge.parameter, float(vals[:, 1].mean())))
    return out
