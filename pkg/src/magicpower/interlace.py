"""Non-Clifford layers interlaced with random Cliffords.

Averaging ``m_p(V C U)`` over a uniform Clifford ``C`` gives
``m_p(U) + m_p(V) - m_p(U) m_p(V) / mbar`` with ``mbar`` the Haar value, so
a chain of layers relaxes towards ``mbar`` with rate
``-ln(1 - m_p(U) / mbar)`` per layer.  This module checks that relation
exhaustively (N = 1) and by sampling, simulates whole trajectories, fits the
relaxation rate, and evaluates the operator-space version on Ising dynamics.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np

from .clifford import clifford_dense_table, random_clifford, random_clifford_dense
from .config import check_qubits
from .ensemble import Welford, block_seeds, parallel_map, split_blocks
from .linalg import evolution_operator, hermitian_eig, n_qubits_of, require_unitary
from .magic import MagicEstimate, haar_average_mp, linear_entropies, mp_exact_batch, sample_stabilizer_states
from .pauli import PauliString

MAX_INTERLACE_QUBITS = 6
MAX_OSNP_QUBITS = 8
# realizations per independently seeded block
_BLOCK = 50


def theorem1_prediction(mp_u: float, mp_v: float, n: int) -> float:
    return mp_u + mp_v - mp_u * mp_v / haar_average_mp(n)


def corollary_prediction(mp_list: Sequence[float], n: int) -> np.ndarray:
    """``mbar [1 - prod_{j<=t} (1 - m_j / mbar)]`` for ``t = 1 .. len(mp_list)``."""
    m = np.asarray(mp_list, dtype=float)
    if np.any(m < 0) or np.any(m >= 1):
        raise ValueError("m_p values must lie in [0, 1)")
    mbar = haar_average_mp(n)
    return mbar * (1.0 - np.cumprod(1.0 - m / mbar))


def steps_to_match_mp(mp_source: float, mp_target: float, n: int) -> float:
    """Layers of a ``mp_source`` gate needed to accumulate ``mp_target``."""
    mbar = haar_average_mp(n)
    for name, v in (("mp_source", mp_source), ("mp_target", mp_target)):
        if not 0 < v < mbar:
            raise ValueError(f"{name}={v} must lie in (0, {mbar})")
    return math.log(1 - mp_target / mbar) / math.log(1 - mp_source / mbar)


def relaxation_scale(mp_u: float, n: int) -> float:
    """Thermalization time scale ``t* ~ mbar / m_p(U)``."""
    if mp_u <= 0:
        raise ValueError("relaxation scale needs m_p > 0")
    return haar_average_mp(n) / mp_u


def relaxation_rate(mp_u: float, n: int) -> float:
    return -math.log(1 - mp_u / haar_average_mp(n))


# ---------------------------------------------------------------------------
# m_p estimates for stacks of dense unitaries


def mp_estimates(ws: np.ndarray, rng: np.random.Generator | None, n_states: int = 64) -> np.ndarray:
    """One unbiased ``m_p`` estimate per matrix in ``ws`` (exact when N <= 2).

    Up to four qubits the states come from the full stabilizer enumeration.
    Beyond that the columns of a uniform random Clifford serve as a correlated
    batch of uniform stabilizer states.
    """
    ws = np.asarray(ws, dtype=complex)
    n = n_qubits_of(ws.shape[-1])
    if n <= 2:
        return mp_exact_batch(ws)
    dim = 1 << n
    if n <= 4:
        states = sample_stabilizer_states(n, len(ws) * n_states, rng).reshape(len(ws), n_states, dim)
        images = np.einsum("bij,bsj->bsi", ws, states)
        return linear_entropies(images.reshape(-1, dim)).reshape(len(ws), n_states).mean(axis=1)
    rounds = max(1, -(-n_states // dim))
    out = np.empty(len(ws))
    for b, w in enumerate(ws):
        acc = 0.0
        for _ in range(rounds):
            cols = w @ random_clifford(n, rng).dense()
            acc += linear_entropies(cols.T).mean()
        out[b] = acc / rounds
    return out


def _estimate(values: np.ndarray) -> MagicEstimate:
    acc = Welford()
    acc.add_many(values)
    return MagicEstimate(acc.mean, acc.std_error, acc.count, False)


# ---------------------------------------------------------------------------
# Theorem checks


def verify_theorem1_exact_n1(u: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """Exhaustive average of exact ``m_p(V C U)`` over the 24 one-qubit Cliffords."""
    u = require_unitary(u, "U")
    v = require_unitary(v, "V")
    if u.shape != (2, 2) or v.shape != (2, 2):
        raise ValueError("exhaustive check needs single-qubit unitaries")
    table = clifford_dense_table(1)
    empirical = float(mp_exact_batch(v @ table @ u).mean())
    mp_u, mp_v = mp_exact_batch(np.stack([u, v]))
    return empirical, theorem1_prediction(float(mp_u), float(mp_v), 1)


def _theorem1_block(args) -> np.ndarray:
    u, v, count, seed, n_states = args
    rng = np.random.default_rng(seed)
    n = n_qubits_of(u.shape[0])
    cs = random_clifford_dense(n, rng, size=count)
    return mp_estimates(v @ cs @ u, rng, n_states)


def verify_theorem1_mc(
    u: np.ndarray,
    v: np.ndarray,
    n_cliffords: int,
    rng: np.random.Generator,
    n_states: int = 64,
) -> tuple[MagicEstimate, float]:
    """Sampled ``<m_p(V C U)>_C`` and the predicted value.

    The prediction uses exact ``m_p`` for N <= 2 and sampled estimates
    (``n_cliffords`` independent draws each) otherwise.
    """
    u = require_unitary(u, "U")
    v = require_unitary(v, "V")
    n = n_qubits_of(u.shape[0])
    check_qubits(n, MAX_INTERLACE_QUBITS, "verify_theorem1_mc")
    sizes = split_blocks(n_cliffords, _BLOCK)
    seeds = block_seeds(rng, len(sizes))
    parts = parallel_map(_theorem1_block, [(u, v, k, s, n_states) for k, s in zip(sizes, seeds)])
    empirical = _estimate(np.concatenate(parts))
    if n <= 2:
        mp_u, mp_v = (float(x) for x in mp_exact_batch(np.stack([u, v])))
    else:
        mp_u = float(np.mean(mp_estimates(np.repeat(u[None], n_cliffords, axis=0), rng, n_states)))
        mp_v = float(np.mean(mp_estimates(np.repeat(v[None], n_cliffords, axis=0), rng, n_states)))
    return empirical, theorem1_prediction(mp_u, mp_v, n)


# ---------------------------------------------------------------------------
# trajectories


@dataclasses.dataclass(frozen=True, eq=False)
class InterlaceSchedule:
    unitaries: tuple[np.ndarray, ...]
    n_qubits: int

    def __post_init__(self):
        if not self.unitaries:
            raise ValueError("schedule needs at least one layer")
        dim = 1 << self.n_qubits
        for k, u in enumerate(self.unitaries):
            if np.shape(u) != (dim, dim):
                raise ValueError(f"layer {k} has shape {np.shape(u)}, expected {(dim, dim)}")
            require_unitary(u, f"layer {k}")
        object.__setattr__(self, "unitaries", tuple(np.asarray(u, dtype=complex) for u in self.unitaries))

    @property
    def t(self) -> int:
        return len(self.unitaries)

    @classmethod
    def cycle(cls, gates: Sequence[np.ndarray], steps: int) -> InterlaceSchedule:
        """``steps`` layers cycling through ``gates``."""
        n = n_qubits_of(np.shape(gates[0])[0])
        return cls(tuple(gates[k % len(gates)] for k in range(steps)), n)


@dataclasses.dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    mp_mean: np.ndarray
    mp_stderr: np.ndarray
    n_realizations: int
    seed: int | None = None

    def __post_init__(self):
        if not (len(self.times) == len(self.mp_mean) == len(self.mp_stderr)):
            raise ValueError("trajectory arrays must have equal length")


def _trajectory_block(args) -> np.ndarray:
    """Per-realization ``m_p`` at every step, shape ``(count, t)``."""
    layers, count, seed, n_states, prefixes = args
    rng = np.random.default_rng(seed)
    n = n_qubits_of(layers[0].shape[0])
    t_max = len(layers)
    out = np.empty((count, t_max))
    if prefixes == "incremental":
        w = np.repeat(layers[0][None], count, axis=0)
        out[:, 0] = mp_estimates(w, rng, n_states)
        for t in range(1, t_max):
            w = layers[t] @ random_clifford_dense(n, rng, size=count) @ w
            out[:, t] = mp_estimates(w, rng, n_states)
        return out
    for t in range(t_max):
        # fresh Cliffords for every prefix so steps are independent
        w = np.repeat(layers[0][None], count, axis=0)
        for j in range(1, t + 1):
            w = layers[j] @ random_clifford_dense(n, rng, size=count) @ w
        out[:, t] = mp_estimates(w, rng, n_states)
    return out


def simulate_interlaced(
    schedule: InterlaceSchedule,
    n_realizations: int,
    rng: np.random.Generator,
    n_states: int = 64,
    prefixes: str = "independent",
    seed: int | None = None,
) -> Trajectory:
    """Mean ``m_p`` of ``U_t C_{t-1} ... C_1 U_1`` over fresh Clifford draws, for ``t = 0 .. T``.

    ``prefixes="independent"`` redraws every Clifford for every prefix length
    (uncorrelated steps); ``"incremental"`` grows one chain per realization.
    Two-qubit schedules use the exact 60-state average at every step.
    """
    check_qubits(schedule.n_qubits, MAX_INTERLACE_QUBITS, "simulate_interlaced")
    if prefixes not in ("independent", "incremental"):
        raise ValueError(f"unknown prefix mode {prefixes!r}")
    sizes = split_blocks(n_realizations, _BLOCK)
    seeds = block_seeds(rng, len(sizes))
    tasks = [(schedule.unitaries, k, s, n_states, prefixes) for k, s in zip(sizes, seeds)]
    values = np.concatenate(parallel_map(_trajectory_block, tasks))
    mean = np.concatenate([[0.0], values.mean(axis=0)])
    if n_realizations > 1:
        err = np.concatenate([[0.0], values.std(axis=0, ddof=1) / math.sqrt(n_realizations)])
    else:
        err = np.zeros_like(mean)
    return Trajectory(np.arange(schedule.t + 1), mean, err, n_realizations, seed)


def fit_relaxation_rate(
    traj: Trajectory,
    n: int,
    period: int = 1,
    weighting: str = "delta",
    z: float = 3.0,
) -> float:
    """Least-squares slope of ``y_t = -ln(1 - m_t/mbar)`` against ``t``.

    Steps are used while ``1 - m_t/mbar`` stays positive and, when a standard
    error is known, at least ``z`` standard errors above zero; the fit stops at
    the first unresolved step.  For a cyclic schedule pass its ``period`` so
    only whole cycles (``t = 0, p, 2p, ..``) enter and the within-cycle
    sawtooth does not bias the rate.  ``weighting="delta"`` weights each point
    by ``(1 - m_t/mbar)^2``, the inverse variance of ``y_t`` when the errors
    of ``m_t`` have similar size; ``"uniform"`` is plain least squares.
    """
    if period < 1:
        raise ValueError("period must be positive")
    if weighting not in ("delta", "uniform"):
        raise ValueError(f"unknown weighting {weighting!r}")
    mbar = haar_average_mp(n)
    arg = 1.0 - np.asarray(traj.mp_mean) / mbar
    noise = np.asarray(traj.mp_stderr) / mbar
    times = np.asarray(traj.times)
    usable = []
    for k in range(len(arg)):
        if arg[k] <= 0 or arg[k] <= z * noise[k]:
            break
        if times[k] % period == 0:
            usable.append(k)
    if len(usable) < 3:
        raise ValueError(f"only {len(usable)} resolved steps; need at least 3 to fit a rate")
    t = times[usable].astype(float)
    y = -np.log(arg[usable])
    w = arg[usable] if weighting == "delta" else None
    slope, _ = np.polyfit(t, y, 1, w=w)
    return float(slope)


# ---------------------------------------------------------------------------
# Ising dynamics and operator-space non-stabilizing power


@dataclasses.dataclass(frozen=True)
class IsingParams:
    n_sites: int
    h_x: float
    h_y: float

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("Ising chain needs at least two sites")


CHAOTIC = (0.8090, 0.9045)
INTEGRABLE = (0.0, 1.0)


def ising_hamiltonian(p: IsingParams) -> np.ndarray:
    """``sum_j X_j X_{j+1} + h_x sum_j X_j + h_y sum_j Y_j`` on a ring."""
    n = p.n_sites
    check_qubits(n, 10, "ising_hamiltonian")
    h = np.zeros((1 << n, 1 << n), dtype=complex)
    for j in range(n):
        h += (PauliString.single(n, j, "X") * PauliString.single(n, (j + 1) % n, "X")).dense()
        if p.h_x:
            h += p.h_x * PauliString.single(n, j, "X").dense()
        if p.h_y:
            h += p.h_y * PauliString.single(n, j, "Y").dense()
    return h


def osnp_time_grid(n_points: int = 40, t_max: float = 5.0, t_min: float = 0.05) -> np.ndarray:
    """Default geometric grid over ``(0, t_max]``."""
    return np.geomspace(t_min, t_max, n_points)


def ising_evolutions(p: IsingParams, times: Sequence[float]) -> list[np.ndarray]:
    """``exp(-i H t)`` for every ``t`` from a single eigendecomposition."""
    evals, evecs = hermitian_eig(ising_hamiltonian(p))
    return [evolution_operator(evals, evecs, t) for t in times]


@dataclasses.dataclass(frozen=True)
class OsnpResult:
    empirical: MagicEstimate
    predicted: float
    predicted_stderr: float
    mp_u: MagicEstimate

    @property
    def combined_stderr(self) -> float:
        return math.hypot(self.empirical.std_error, self.predicted_stderr)


def _osnp_block(args) -> tuple[np.ndarray, np.ndarray]:
    u, count, seed, n_states = args
    rng = np.random.default_rng(seed)
    n = n_qubits_of(u.shape[0])
    cs = random_clifford_dense(n, rng, size=count)
    ud = u.conj().T
    heis = mp_estimates(ud @ cs @ u, rng, n_states)
    plain = mp_estimates(np.repeat(u[None], count, axis=0), rng, n_states)
    return heis, plain


def osnp(u_t: np.ndarray, n_cliffords: int, rng: np.random.Generator, n_states: int = 64) -> OsnpResult:
    """``<m_p(U^dagger C U)>_C`` against ``m_p(U) (2 - m_p(U) / mbar)``.

    ``m_p(U)`` is estimated with the same number of independent draws.
    """
    u = require_unitary(u_t, "osnp input")
    n = n_qubits_of(u.shape[0])
    check_qubits(n, MAX_OSNP_QUBITS, "osnp")
    sizes = split_blocks(n_cliffords, _BLOCK)
    seeds = block_seeds(rng, len(sizes))
    parts = parallel_map(_osnp_block, [(u, k, s, n_states) for k, s in zip(sizes, seeds)])
    empirical = _estimate(np.concatenate([p[0] for p in parts]))
    if n <= 2:
        m = float(mp_exact_batch(u)[0])
        mp_u = MagicEstimate(m, 0.0, 60 if n == 2 else 6, True)
    else:
        mp_u = _estimate(np.concatenate([p[1] for p in parts]))
    mbar = haar_average_mp(n)
    m = mp_u.value
    predicted = m * (2 - m / mbar)
    return OsnpResult(empirical, predicted, abs(2 - 2 * m / mbar) * mp_u.std_error, mp_u)


def osnp_prediction(mp_u: float, n: int) -> float:
    mbar = haar_average_mp(n)
    return mp_u * (2 - mp_u / mbar)

