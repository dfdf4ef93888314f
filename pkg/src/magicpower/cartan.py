"""Cartan-parametrized two-qubit gates and the six tetrahedron edges.

``U(c_x, c_y, c_z) = exp(-i sum_j (c_j / 2) sigma_j (x) sigma_j)``; the three
terms commute so the exponential is a product of three analytic factors.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .linalg import X, Y, Z, embed_operator, kron, require_unitary

_XX = kron(X, X)
_YY = kron(Y, Y)
_ZZ = kron(Z, Z)
_EYE4 = np.eye(4, dtype=complex)

Pair = tuple[np.ndarray, np.ndarray]


@dataclasses.dataclass(frozen=True, eq=False)
class CartanGate:
    c_x: float
    c_y: float
    c_z: float
    left_dressing: Pair | None = None
    right_dressing: Pair | None = None

    def __post_init__(self):
        for name in ("left", "right"):
            pair = getattr(self, f"{name}_dressing")
            if pair is not None:
                if len(pair) != 2:
                    raise ValueError(f"{name} dressing must be a pair of 2x2 unitaries")
                for m in pair:
                    if np.shape(m) != (2, 2):
                        raise ValueError(f"{name} dressing must be a pair of 2x2 unitaries")
                    require_unitary(m, f"{name} dressing")

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.c_x, self.c_y, self.c_z)

    def in_chamber(self) -> bool:
        """True for the canonical ordering ``pi/2 >= c_x >= c_y >= c_z >= 0``."""
        return math.pi / 2 >= self.c_x >= self.c_y >= self.c_z >= 0

    def require_chamber(self) -> CartanGate:
        if not self.in_chamber():
            raise ValueError(f"angles {self.angles} are outside the canonical chamber")
        return self

    def dressed(self, left: Pair | None = None, right: Pair | None = None) -> CartanGate:
        return dataclasses.replace(self, left_dressing=left, right_dressing=right)

    def dense(self) -> np.ndarray:
        return cartan_dense(self)


def cartan_core(c_x: float, c_y: float, c_z: float) -> np.ndarray:
    out = _EYE4
    for c, pp in ((c_x, _XX), (c_y, _YY), (c_z, _ZZ)):
        out = out @ (math.cos(c / 2) * _EYE4 - 1j * math.sin(c / 2) * pp)
    return out


def cartan_dense(g: CartanGate) -> np.ndarray:
    """Dressed gate ``(L_A (x) L_B) U(c) (R_A (x) R_B)``."""
    u = cartan_core(g.c_x, g.c_y, g.c_z)
    if g.right_dressing is not None:
        u = u @ kron(*g.right_dressing)
    if g.left_dressing is not None:
        u = kron(*g.left_dressing) @ u
    return u


EDGES = ("Id-CNOT", "CNOT-DCNOT", "DCNOT-SWAP", "Id-SWAP", "Id-DCNOT", "CNOT-SWAP")
_CLOSED_FORM_EDGES = ("Id-CNOT", "CNOT-DCNOT", "DCNOT-SWAP")


def canonical_edge_name(name: str) -> str:
    """Case-insensitive edge lookup; any dash, underscore or spaced dash separates the ends."""
    text = name.strip()
    for sep in ("—", "–", "---", "--", "_", " "):
        text = text.replace(sep, "-")
    while "--" in text:
        text = text.replace("--", "-")
    key = text.lower()
    for edge in EDGES:
        if edge.lower() == key:
            return edge
    raise ValueError(f"unknown edge {name!r}; expected one of {', '.join(EDGES)}")


@dataclasses.dataclass(frozen=True)
class EdgeSpec:
    edge: str
    parameter: float

    def __post_init__(self):
        object.__setattr__(self, "edge", canonical_edge_name(self.edge))
        if not (-1e-12 <= self.parameter <= math.pi / 2 + 1e-12):
            raise ValueError(f"edge parameter {self.parameter} outside [0, pi/2]")


def edge_angles(spec: EdgeSpec) -> tuple[float, float, float]:
    c = spec.parameter
    h = math.pi / 2
    return {
        "Id-CNOT": (c, 0.0, 0.0),
        "CNOT-DCNOT": (h, c, 0.0),
        "DCNOT-SWAP": (h, h, c),
        "Id-SWAP": (c, c, c),
        "Id-DCNOT": (c, c, 0.0),
        "CNOT-SWAP": (h, c, c),
    }[spec.edge]


def edge_gate(spec: EdgeSpec) -> CartanGate:
    return CartanGate(*edge_angles(spec))


def edge_mp_closed_form(spec: EdgeSpec) -> float | None:
    """``sin^2(2c)/5`` on the three Clifford-connected edges, else ``None``."""
    if spec.edge not in _CLOSED_FORM_EDGES:
        return None
    return math.sin(2 * spec.parameter) ** 2 / 5


def embed_gate(g: CartanGate | np.ndarray, n_total: int, position: int) -> np.ndarray:
    """Two-qubit gate on qubits ``(position, position + 1)``, identity elsewhere."""
    if not (0 <= position and position + 1 < n_total):
        raise ValueError(f"position {position} out of range for {n_total} qubits")
    u = cartan_dense(g) if isinstance(g, CartanGate) else np.asarray(g, dtype=complex)
    return embed_operator(u, n_total, (position, position + 1))
