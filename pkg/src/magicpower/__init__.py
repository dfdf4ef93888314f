"""Magic and entanglement of quantum gates, Clifford-interlaced dynamics and Floquet chaos."""

from ._kernels import BACKEND
from .cartan import EDGES, CartanGate, EdgeSpec, edge_gate, edge_mp_closed_form, embed_gate
from .clifford import (
    CliffordTableau,
    enumerate_single_qubit_cliffords,
    enumerate_two_qubit_stabilizer_states,
    is_clifford_dense,
    random_clifford,
    stabilizer_state_table,
)
from .config import NumericalConfig, ResourceError, get_config, override, set_config
from .entangling import (
    Bipartition,
    entangling_power,
    gate_typicality,
    linear_entanglement_entropy,
    mp_lower_boundary,
    operator_entanglement,
)
from .floquet import FloquetSpec, build_floquet, mean_gap_ratio, sweep_edge
from .interlace import (
    InterlaceSchedule,
    IsingParams,
    fit_relaxation_rate,
    osnp,
    simulate_interlaced,
    theorem1_prediction,
    verify_theorem1_exact_n1,
    verify_theorem1_mc,
)
from .magic import MagicEstimate, haar_average_mp, non_stabilizing_power, stabilizer_linear_entropy
from .pauli import PauliString, conjugate_by_clifford, enumerate_paulis, pauli_expectation

__version__ = "0.1.0"
