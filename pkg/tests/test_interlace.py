import math

import numpy as np
import pytest

from magicpower.cartan import EdgeSpec, edge_gate
from magicpower.interlace import (
    InterlaceSchedule,
    IsingParams,
    Trajectory,
    corollary_prediction,
    fit_relaxation_rate,
    ising_evolutions,
    ising_hamiltonian,
    mp_estimates,
    osnp,
    osnp_prediction,
    osnp_time_grid,
    relaxation_rate,
    relaxation_scale,
    simulate_interlaced,
    steps_to_match_mp,
    theorem1_prediction,
    verify_theorem1_exact_n1,
    verify_theorem1_mc,
)
from magicpower.linalg import T, haar_unitary, is_hermitian
from magicpower.magic import haar_average_mp, non_stabilizing_power

QUARTER = edge_gate(EdgeSpec("Id-CNOT", math.pi / 4)).dense()


def test_prediction_algebra():
    mbar = haar_average_mp(2)
    assert theorem1_prediction(0.1, 0.2, 2) == pytest.approx(0.3 - 0.02 / mbar)
    # the chained prediction iterates the two-layer rule
    seq = corollary_prediction([0.1, 0.2, 0.05], 2)
    assert seq[1] == pytest.approx(theorem1_prediction(0.1, 0.2, 2))
    assert seq[2] == pytest.approx(theorem1_prediction(seq[1], 0.05, 2))
    with pytest.raises(ValueError):
        corollary_prediction([1.2], 2)


def test_rates_and_scales():
    # m_p = 1/5, mbar = 3/7 at N=2: rate ln(15/8)
    assert relaxation_rate(0.2, 2) == pytest.approx(math.log(15 / 8))
    assert relaxation_scale(0.2, 2) == pytest.approx(15 / 7)
    assert steps_to_match_mp(0.1, 0.1, 2) == pytest.approx(1.0)
    small = 1e-4
    assert steps_to_match_mp(small, 0.2, 2) == pytest.approx(
        haar_average_mp(2) / small * -math.log(1 - 0.2 / haar_average_mp(2)), rel=1e-3)
    with pytest.raises(ValueError):
        steps_to_match_mp(0.0, 0.1, 2)


def test_theorem1_exhaustive_t_gates(rng):
    emp, pred = verify_theorem1_exact_n1(T, T)
    assert emp == pytest.approx(7 / 36, abs=1e-12)
    assert abs(emp - pred) < 1e-12
    for _ in range(5):
        u, v = haar_unitary(2, rng), haar_unitary(2, rng)
        emp, pred = verify_theorem1_exact_n1(u, v)
        assert abs(emp - pred) < 1e-12


def test_theorem1_monte_carlo(rng):
    est, pred = verify_theorem1_mc(QUARTER, QUARTER, 300, rng)
    assert est.n_samples == 300
    assert abs(est.value - pred) < 4 * est.std_error


def test_mp_estimates_three_qubits(rng):
    from magicpower.cartan import embed_gate

    u = embed_gate(edge_gate(EdgeSpec("Id-CNOT", math.pi / 4)), 3, 0)
    vals = mp_estimates(np.repeat(u[None], 200, axis=0), rng, 16)
    # (8/9) sin^2(pi/2)/4 on three qubits
    assert abs(vals.mean() - 2 / 9) < 4 * vals.std() / math.sqrt(len(vals))


def test_trajectory_determinism_and_shape(rng):
    sched = InterlaceSchedule.cycle([QUARTER], 4)
    a = simulate_interlaced(sched, 60, np.random.default_rng(3))
    b = simulate_interlaced(sched, 60, np.random.default_rng(3))
    assert np.array_equal(a.mp_mean, b.mp_mean)
    assert a.times.tolist() == [0, 1, 2, 3, 4] and a.mp_mean[0] == 0
    assert a.mp_mean[1] == pytest.approx(0.2)  # first step is an exact m_p
    assert np.all(np.diff(a.mp_mean) > -2 * a.mp_stderr[1:])


def test_worker_count_independence(monkeypatch):
    sched = InterlaceSchedule.cycle([QUARTER], 3)
    serial = simulate_interlaced(sched, 120, np.random.default_rng(9))
    monkeypatch.setenv("MAGICPOWER_WORKERS", "2")
    pooled = simulate_interlaced(sched, 120, np.random.default_rng(9))
    assert np.array_equal(serial.mp_mean, pooled.mp_mean)


def test_incremental_prefixes(rng):
    sched = InterlaceSchedule.cycle([QUARTER], 5)
    traj = simulate_interlaced(sched, 200, rng, prefixes="incremental")
    pred = corollary_prediction([0.2] * 5, 2)
    assert np.all(np.abs(traj.mp_mean[1:] - pred) < 4 * traj.mp_stderr[1:] + 1e-12)
    with pytest.raises(ValueError):
        simulate_interlaced(sched, 10, rng, prefixes="bogus")


def test_fit_recovers_exact_rate():
    n = 2
    mbar = haar_average_mp(n)
    times = np.arange(12)
    m = mbar * (1 - np.exp(-0.5 * times))
    traj = Trajectory(times, m, np.zeros_like(m), 1)
    assert fit_relaxation_rate(traj, n) == pytest.approx(0.5)
    assert fit_relaxation_rate(traj, n, weighting="uniform") == pytest.approx(0.5)
    assert fit_relaxation_rate(traj, n, period=2) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        fit_relaxation_rate(Trajectory(times[:2], m[:2], np.zeros(2), 1), n)


def test_schedule_validation():
    with pytest.raises(ValueError):
        InterlaceSchedule((), 2)
    with pytest.raises(ValueError):
        InterlaceSchedule((np.eye(2),), 2)


def test_ising():
    p = IsingParams(4, 0.8090, 0.9045)
    h = ising_hamiltonian(p)
    assert is_hermitian(h)
    # the XX ring term alone is traceless with eigenvalues in [-4, 4]
    assert abs(np.trace(h)) < 1e-12
    u0, u1 = ising_evolutions(p, [0.0, 0.3])
    assert np.allclose(u0, np.eye(16))
    grid = osnp_time_grid(10, 5.0)
    assert len(grid) == 10 and grid[-1] == pytest.approx(5.0) and grid[0] > 0


def test_osnp_two_qubits(rng):
    u = ising_evolutions(IsingParams(2, 0.8090, 0.9045), [0.7])[0]
    res = osnp(u, 600, rng)
    m = non_stabilizing_power(u).value
    assert res.predicted == pytest.approx(osnp_prediction(m, 2))
    assert abs(res.empirical.value - res.predicted) < 4 * res.combined_stderr
    assert osnp(np.eye(4), 60, rng).empirical.value == pytest.approx(0, abs=1e-14)
