"""Bell nonlocality of two-qubit states certified through EPR steering.

A state ``tau`` is mapped to ``rho = mu tau + (1 - mu) tau_A ⊗ I/2`` with
``mu = 1/sqrt(3)``; if ``rho`` violates a steering inequality, ``tau`` has
no local hidden variable model.
"""

from .criteria import (
    MU_DEFAULT,
    ChshResult,
    InverseMapVerdict,
    MapSpec,
    NonlocalityReport,
    SteeringResult,
    SteeringSettings,
    bell_via_steering,
    chsh_max,
    chsh_max_search,
    chsh_value,
    classical_bound,
    dodecahedron_settings,
    icosahedron_settings,
    inverse_map,
    map_to_steering,
    steering_max,
    steering_value,
)
from .errors import *  # noqa: F401,F403
from .lhs import (
    LocalHiddenStateEnsemble,
    LocalHiddenVariableModel,
    VerificationReport,
    construct_lhs,
    lhv_from_separable,
    verify_lhs,
)
from .states import (
    QubitState,
    TwoQubitState,
    bell_state,
    bloch_to_state,
    conditional_state,
    correlation_matrix,
    joint_probability,
    marginal_probability,
    maximally_mixed,
    partial_trace_A,
    partial_trace_B,
    product_state,
    projector,
    state_to_bloch,
    werner,
)

__version__ = "0.1.0"
