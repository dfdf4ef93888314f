import math

import numpy as np
import pytest

from magicpower.cartan import EdgeSpec
from magicpower.clifford import is_clifford_dense
from magicpower.floquet import (
    POISSON_R,
    FloquetSpec,
    build_floquet,
    gap_ratios,
    mean_gap_ratio,
    spectral_stats,
    sweep_edge,
    zero_spacing_fraction,
)
from magicpower.linalg import is_unitary, unitary_eigenphases


def test_gap_ratio_by_hand():
    phases = [0.0, 1.0, 3.0, 3.5, 7.0]
    # spacings 1, 2, 0.5, 3.5
    assert np.allclose(gap_ratios(phases), [0.5, 0.25, 0.5 / 3.5])
    assert mean_gap_ratio(phases[::-1]) == pytest.approx((0.5 + 0.25 + 0.5 / 3.5) / 3)
    with pytest.raises(ValueError):
        mean_gap_ratio([0.1, 0.2, 0.3])


def test_degenerate_pairs_give_zero():
    phases = [0.0, 1.0, 1.0, 1.0, 2.0, 2.0 + 1e-15, 3.0]
    r = gap_ratios(phases)
    assert np.all(r[:4] == 0)
    assert zero_spacing_fraction(phases) == pytest.approx(3 / 6)


def test_poisson_value(rng):
    assert mean_gap_ratio(rng.uniform(0, 2 * np.pi, 200_000)) == pytest.approx(POISSON_R, abs=0.01)


def test_build_is_unitary_and_seeded():
    spec = FloquetSpec(4, EdgeSpec("Id-SWAP", math.pi / 4))
    a = build_floquet(spec, np.random.default_rng(1))
    assert is_unitary(a)
    assert np.array_equal(a, build_floquet(spec, np.random.default_rng(1)))


@pytest.mark.parametrize("edge,c", [("Id-CNOT", math.pi / 2), ("DCNOT-SWAP", 0.0), ("Id-SWAP", math.pi / 2)])
def test_vertex_circuits_are_clifford(edge, c, rng):
    assert is_clifford_dense(build_floquet(FloquetSpec(4, EdgeSpec(edge, c), 2), rng))


def test_generic_point_has_no_degeneracy(rng):
    u = build_floquet(FloquetSpec(6, EdgeSpec("Id-SWAP", math.pi / 4)), rng)
    assert np.diff(np.sort(unitary_eigenphases(u))).min() > 1e-12


def test_spec_validation():
    with pytest.raises(ValueError):
        FloquetSpec(5, EdgeSpec("Id-CNOT", 0.3))
    with pytest.raises(ValueError):
        FloquetSpec(4, EdgeSpec("Id-CNOT", 0.3), redraw="never")


def test_sweep_is_ordered_and_worker_independent(monkeypatch):
    spec = FloquetSpec(4, EdgeSpec("DCNOT-SWAP", 0.0))
    grid = [0.2, 0.7, 1.1]
    serial = sweep_edge(spec, grid, np.random.default_rng(5), 6)
    monkeypatch.setenv("MAGICPOWER_WORKERS", "2")
    pooled = sweep_edge(spec, grid, np.random.default_rng(5), 6)
    assert [s.parameter for s in serial] == grid
    assert [s.r_mean for s in serial] == [s.r_mean for s in pooled]


def test_identity_vertex_is_fully_degenerate(rng):
    st = spectral_stats(FloquetSpec(4, EdgeSpec("Id-CNOT", 0.0)), 5, rng)
    assert st.r_mean < 0.2 and st.zero_spacing_fraction > 0.5
