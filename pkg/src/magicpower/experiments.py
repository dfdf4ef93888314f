"""Named experiments producing flat, seeded, replayable result rows.

Every experiment takes a parameter map (validated against its schema) and a
master seed and returns a list of rows.  The runner adds the bookkeeping
columns ``experiment``, ``seed``, ``wall_time_ms`` and ``config`` (the resolved
parameters as JSON) so an output file alone is enough to re-run it.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from typing import Any, Callable

import numpy as np

from .cartan import EdgeSpec, canonical_edge_name, edge_gate, edge_mp_closed_form, embed_gate
from .config import ResourceError, check_qubits
from .ensemble import task_rng
from .entangling import GateInvariants, mp_lower_boundary
from .floquet import FloquetSpec, MAX_FLOQUET_QUBITS, sweep_edge
from .interlace import (
    CHAOTIC,
    MAX_INTERLACE_QUBITS,
    MAX_OSNP_QUBITS,
    InterlaceSchedule,
    IsingParams,
    corollary_prediction,
    fit_relaxation_rate,
    ising_evolutions,
    osnp,
    relaxation_rate,
    simulate_interlaced,
    theorem1_prediction,
    verify_theorem1_exact_n1,
    verify_theorem1_mc,
)
from .linalg import haar_unitary
from .magic import haar_average_mp, non_stabilizing_power

Row = dict[str, Any]
BOOKKEEPING = ("experiment", "seed", "wall_time_ms", "config")


class ConfigError(ValueError):
    """Invalid experiment name or parameters."""


@dataclasses.dataclass(frozen=True)
class Param:
    default: Any
    kind: str  # int, float, str, floats, strs
    help: str


@dataclasses.dataclass(frozen=True)
class Experiment:
    name: str
    summary: str
    params: dict[str, Param]
    fn: Callable[[dict[str, Any], int], list[Row]]
    # qubit-count parameter and its ceiling, checked before running
    size_key: str | None = None
    max_qubits: int | None = None

    def resolve(self, given: dict[str, Any]) -> dict[str, Any]:
        unknown = sorted(set(given) - set(self.params))
        if unknown:
            raise ConfigError(
                f"unknown parameter(s) {', '.join(unknown)} for {self.name}; "
                f"expected {', '.join(self.params)}"
            )
        out = {}
        for key, spec in self.params.items():
            out[key] = _coerce(key, given.get(key, spec.default), spec.kind)
        return out

    def guard(self, params: dict[str, Any]) -> None:
        if self.size_key is not None:
            check_qubits(int(params[self.size_key]), self.max_qubits, self.name)


def _coerce(key: str, value: Any, kind: str) -> Any:
    try:
        if kind == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError("not an integer")
            return int(value)
        if kind == "float":
            return float(value)
        if kind == "str":
            if not isinstance(value, str):
                raise ValueError("not a string")
            return value
        if kind in ("floats", "strs"):
            items = [value] if isinstance(value, (str, int, float)) else list(value)
            if not items:
                raise ValueError("empty list")
            return [float(v) for v in items] if kind == "floats" else [str(v) for v in items]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"parameter {key}={value!r}: expected {kind} ({exc})") from None
    raise AssertionError(kind)


def _grid(lo: float, hi: float, n_points: int) -> np.ndarray:
    if n_points < 1:
        raise ConfigError("n_points must be positive")
    return np.linspace(lo, hi, n_points) if n_points > 1 else np.array([lo])


def _edges(names: list[str]) -> list[str]:
    try:
        return [canonical_edge_name(e) for e in names]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _layer(edge: str, c: float, n: int, position: int = 0) -> np.ndarray:
    gate = edge_gate(EdgeSpec(edge, c))
    return gate.dense() if n == 2 else embed_gate(gate, n, position)


def _phase_gate(theta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * theta)]).astype(complex)


# ---------------------------------------------------------------------------


def _edge_mp(p: dict, seed: int) -> list[Row]:
    rows = []
    for edge in _edges(p["edges"]):
        for c in _grid(p["param_min"], p["param_max"], p["n_points"]):
            spec = EdgeSpec(edge, float(c))
            est = non_stabilizing_power(edge_gate(spec).dense(), mode="exact-n2")
            closed = edge_mp_closed_form(spec)
            rows.append({
                "edge": edge, "parameter": float(c), "mp": est.value,
                "closed_form": math.nan if closed is None else closed,
                "estimate": est.value, "std_error": 0.0, "n_samples": est.n_samples,
            })
    return rows


def _theorem1(p: dict, seed: int) -> list[Row]:
    n = p["n_qubits"]
    rng = task_rng(seed, 0)
    if n == 1:
        u, v = _phase_gate(p["angle_u"]), _phase_gate(p["angle_v"])
    else:
        u, v = _layer(p["edge"], p["angle_u"], n), _layer(p["edge"], p["angle_v"], n)
    if n == 1 and p["mode"] == "exhaustive":
        empirical, predicted = verify_theorem1_exact_n1(u, v)
        value, err, count = empirical, 0.0, 24
    elif p["mode"] in ("exhaustive", "mc"):
        if p["mode"] == "exhaustive":
            raise ConfigError("exhaustive mode needs n_qubits=1")
        est, predicted = verify_theorem1_mc(u, v, p["n_cliffords"], rng, p["n_states"])
        value, err, count = est.value, est.std_error, est.n_samples
    else:
        raise ConfigError(f"theorem1 mode must be exhaustive or mc, got {p['mode']!r}")
    return [{
        "n_qubits": n, "angle_u": p["angle_u"], "angle_v": p["angle_v"],
        "estimate": value, "std_error": err, "n_samples": count,
        "predicted": predicted, "deviation": value - predicted,
    }]


def _relaxation(p: dict, seed: int) -> list[Row]:
    n = p["n_qubits"]
    edge = _edges([p["edge"]])[0]
    gates = [_layer(edge, c, n, p["position"]) for c in p["angles"]]
    schedule = InterlaceSchedule.cycle(gates, p["steps"])
    traj = simulate_interlaced(schedule, p["n_realizations"], task_rng(seed, 0), p["n_states"], seed=seed)
    # per-layer m_p is the first step of a one-gate trajectory; exact for N <= 2
    if n <= 2:
        layer_mp = [non_stabilizing_power(g, mode="exact").value for g in gates]
    else:
        layer_mp = [
            non_stabilizing_power(g, mode="mc", n_samples=p["n_realizations"], rng=task_rng(seed, 1, k)).value
            for k, g in enumerate(gates)
        ]
    predicted = np.concatenate([[0.0], corollary_prediction([layer_mp[k % len(gates)] for k in range(p["steps"])], n)])
    period_rate = sum(relaxation_rate(m, n) for m in layer_mp) / len(layer_mp)
    try:
        fitted = fit_relaxation_rate(traj, n, period=len(gates))
    except ValueError:
        fitted = math.nan
    return [{
        "n_qubits": n, "edge": edge, "angles": ";".join(repr(a) for a in p["angles"]),
        "t": int(t), "estimate": float(traj.mp_mean[t]), "std_error": float(traj.mp_stderr[t]),
        "n_samples": traj.n_realizations, "predicted": float(predicted[t]),
        "fitted_rate": fitted, "predicted_rate": period_rate,
    } for t in traj.times]


def _osnp(p: dict, seed: int) -> list[Row]:
    n = p["n_sites"]
    params = IsingParams(n, p["h_x"], p["h_y"])
    if p["n_points"] > 1:
        times = np.geomspace(p["t_min"], p["t_max"], p["n_points"])
    else:
        times = np.array([p["t_max"]])
    rows = []
    for k, (t, u) in enumerate(zip(times, ising_evolutions(params, times))):
        res = osnp(u, p["n_cliffords"], task_rng(seed, k), p["n_states"])
        rows.append({
            "n_sites": n, "h_x": p["h_x"], "h_y": p["h_y"], "t": float(t),
            "estimate": res.empirical.value, "std_error": res.empirical.std_error,
            "n_samples": res.empirical.n_samples, "predicted": res.predicted,
            "predicted_stderr": res.predicted_stderr, "mp_u": res.mp_u.value,
            "mbar": haar_average_mp(n),
        })
    return rows


def _floquet_r(p: dict, seed: int) -> list[Row]:
    edge = _edges([p["edge"]])[0]
    template = FloquetSpec(p["n_qubits"], EdgeSpec(edge, p["param_min"]), p["layers_per_step"], p["redraw"])
    grid = _grid(p["param_min"], p["param_max"], p["n_points"])
    realizations = p["n_realizations"] if p["n_realizations"] > 0 else None
    stats = sweep_edge(template, grid, task_rng(seed, 0), realizations)
    return [{
        "n_qubits": s.n_qubits, "edge": edge, "layers_per_step": p["layers_per_step"],
        "parameter": s.parameter, "r_mean": s.r_mean, "r_stderr": s.r_stderr,
        "zero_spacing_fraction": s.zero_spacing_fraction,
        "estimate": s.r_mean, "std_error": s.r_stderr, "n_samples": s.n_realizations,
    } for s in stats]


def _ep_mp_scatter(p: dict, seed: int) -> list[Row]:
    rng = task_rng(seed, 0)
    rows = []
    for k in range(p["n_gates"]):
        inv = GateInvariants.of(haar_unitary(4, rng))
        bound = mp_lower_boundary(min(inv.e_p, 2.0 / 3.0))
        rows.append({
            "index": k, "e_p": inv.e_p, "g_t": inv.g_t, "mp": inv.m_p, "boundary": bound,
            "estimate": inv.m_p, "std_error": 0.0, "n_samples": 60,
        })
    return rows


def _edge_appendix(p: dict, seed: int) -> list[Row]:
    rows = []
    for edge in _edges(p["edges"]):
        for c in _grid(p["param_min"], p["param_max"], p["n_points"]):
            inv = GateInvariants.of(edge_gate(EdgeSpec(edge, float(c))).dense())
            rows.append({
                "edge": edge, "parameter": float(c), "mp": inv.m_p, "e_p": inv.e_p, "g_t": inv.g_t,
                "estimate": inv.m_p, "std_error": 0.0, "n_samples": 60,
            })
    return rows


def _embedded_mp(p: dict, seed: int) -> list[Row]:
    n = p["n_qubits"]
    d = 2**n
    rows = []
    k = 0
    for edge in _edges(p["edges"]):
        for c in _grid(p["param_min"], p["param_max"], p["n_points"]):
            u = _layer(edge, float(c), n, p["position"])
            est = non_stabilizing_power(u, mode="mc", n_samples=p["n_samples"], rng=task_rng(seed, k))
            k += 1
            s2 = math.sin(2 * c) ** 2
            rows.append({
                "n_qubits": n, "edge": edge, "position": p["position"], "parameter": float(c),
                "estimate": est.value, "std_error": est.std_error, "n_samples": est.n_samples,
                "predicted": d / (d + 1) * s2 / 4, "fit_form": s2 / 4.25,
            })
    return rows


_HALF_PI = math.pi / 2
_CLIFFORD_EDGES = ["Id-CNOT", "CNOT-DCNOT", "DCNOT-SWAP"]

EXPERIMENTS: dict[str, Experiment] = {
    e.name: e
    for e in [
        Experiment("edge-mp", "exact two-qubit m_p along tetrahedron edges", {
            "edges": Param(["Id-CNOT"], "strs", "edge names"),
            "n_points": Param(50, "int", "grid points per edge"),
            "param_min": Param(0.0, "float", "first edge parameter"),
            "param_max": Param(_HALF_PI, "float", "last edge parameter"),
        }, _edge_mp),
        Experiment("theorem1", "Clifford-averaged m_p(V C U) against the closed form", {
            "n_qubits": Param(1, "int", "qubits; N=1 uses phase gates diag(1, e^{i angle})"),
            "edge": Param("Id-CNOT", "str", "edge for N>=2 layers, embedded on qubits (0, 1)"),
            "angle_u": Param(math.pi / 4, "float", "parameter of U"),
            "angle_v": Param(math.pi / 4, "float", "parameter of V"),
            "mode": Param("exhaustive", "str", "exhaustive (N=1) or mc"),
            "n_cliffords": Param(1000, "int", "Clifford draws in mc mode"),
            "n_states": Param(64, "int", "stabilizer states per m_p estimate for N>2"),
        }, _theorem1, "n_qubits", MAX_INTERLACE_QUBITS),
        Experiment("relaxation", "interlaced m_p trajectory and fitted relaxation rate", {
            "n_qubits": Param(2, "int", "qubits"),
            "edge": Param("Id-CNOT", "str", "edge of every layer"),
            "angles": Param([math.pi / 4], "floats", "edge parameters, cycled"),
            "position": Param(0, "int", "first qubit of the gate for N>2"),
            "steps": Param(20, "int", "layers"),
            "n_realizations": Param(1000, "int", "Clifford realizations per step"),
            "n_states": Param(64, "int", "stabilizer states per m_p estimate for N>2"),
        }, _relaxation, "n_qubits", MAX_INTERLACE_QUBITS),
        Experiment("osnp", "operator-space m_p of Ising evolutions", {
            "n_sites": Param(6, "int", "chain length"),
            "h_x": Param(CHAOTIC[0], "float", "transverse x field"),
            "h_y": Param(CHAOTIC[1], "float", "y field"),
            "n_points": Param(10, "int", "geometric time points"),
            "t_min": Param(0.05, "float", "first time"),
            "t_max": Param(5.0, "float", "last time"),
            "n_cliffords": Param(1000, "int", "Clifford draws per time"),
            "n_states": Param(64, "int", "stabilizer states per m_p estimate"),
        }, _osnp, "n_sites", MAX_OSNP_QUBITS),
        Experiment("floquet-r", "mean gap ratio of brick-wall Floquet circuits along an edge", {
            "n_qubits": Param(6, "int", "even qubit count"),
            "edge": Param("DCNOT-SWAP", "str", "edge of the two-qubit gate"),
            "n_points": Param(20, "int", "grid points"),
            "param_min": Param(0.0, "float", "first edge parameter"),
            "param_max": Param(_HALF_PI, "float", "last edge parameter"),
            "n_realizations": Param(0, "int", "realizations per point; 0 picks 100 (N<=8) or 25"),
            "layers_per_step": Param(1, "int", "brick-layer pairs per step"),
            "redraw": Param("layer", "str", "fresh Cliffords per layer or per step"),
        }, _floquet_r, "n_qubits", MAX_FLOQUET_QUBITS),
        Experiment("ep-mp-scatter", "e_p, g_t and m_p of Haar-random two-qubit gates", {
            "n_gates": Param(1000, "int", "random gates"),
        }, _ep_mp_scatter),
        Experiment("edge-appendix", "m_p, e_p and g_t along the non Clifford-connected edges", {
            "edges": Param(["Id-DCNOT", "CNOT-SWAP", "Id-SWAP"], "strs", "edge names"),
            "n_points": Param(50, "int", "grid points per edge"),
            "param_min": Param(0.0, "float", "first edge parameter"),
            "param_max": Param(_HALF_PI, "float", "last edge parameter"),
        }, _edge_appendix),
        Experiment("embedded-mp", "sampled m_p of a two-qubit edge gate inside N qubits", {
            "n_qubits": Param(4, "int", "total qubits"),
            "position": Param(1, "int", "first qubit of the gate"),
            "edges": Param(list(_CLIFFORD_EDGES), "strs", "edge names"),
            "n_points": Param(10, "int", "grid points per edge"),
            "param_min": Param(0.0, "float", "first edge parameter"),
            "param_max": Param(_HALF_PI, "float", "last edge parameter"),
            "n_samples": Param(1000, "int", "stabilizer samples per point"),
        }, _embedded_mp, "n_qubits", 8),
    ]
}


def get_experiment(name: str) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise ConfigError(f"unknown experiment {name!r}; valid names: {', '.join(EXPERIMENTS)}") from None


def run_experiment(name: str, parameters: dict[str, Any], seed: int) -> list[Row]:
    """Resolve, guard and run one experiment; rows come back in parameter order."""
    exp = get_experiment(name)
    params = exp.resolve(parameters)
    exp.guard(params)
    config = json.dumps({"experiment": name, "parameters": params, "seed": seed}, sort_keys=True)
    start = time.perf_counter()
    try:
        rows = exp.fn(params, seed)
    except (ConfigError, ResourceError):
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    elapsed = (time.perf_counter() - start) * 1000.0
    per_row = elapsed / max(1, len(rows))
    out = []
    for row in rows:
        out.append({"experiment": name, **row, "seed": seed, "wall_time_ms": per_row, "config": config})
    return out
