"""Local hidden variable models and the hidden-state ensembles built from them.

Given an LHV model for ``tau`` with response functions ``P(a|A, xi)``,
``P(b|B, xi)`` and weights ``P_xi``, the mapped state
``rho = mu tau + (1 - mu) tau_A ⊗ I/2`` has the local hidden state model

    weight_xi      = P_xi
    response       = P(a|A, xi)                      (Alice's rule unchanged)
    hidden Bloch   = mu * (2P(0|x,xi) - 1, 2P(0|y,xi) - 1, 2P(0|z,xi) - 1)

whose Bloch vectors have norm at most ``sqrt(3) mu``, hence are valid
qubit states for ``mu <= 1/sqrt(3)``. The LHV models realized here come
from separable states, where each ``xi`` carries a product of qubit states
and responses are Born probabilities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .criteria import MapSpec
from .errors import InvalidWeights, ProofInvalidMu, StateFormatError
from .linalg import tensor
from .rng import random_direction, stream
from .states import (
    QubitState,
    TwoQubitState,
    bloch_to_state,
    conditional_state,
    matrix_from_json,
    partial_trace_A,
    projector,
    state_to_json,
)

WEIGHT_TOL = 1e-12
HIDDEN_NORM_TOL = 1e-12


def _check_weights(weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise InvalidWeights("model needs at least one component")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidWeights(f"weights must be finite and nonnegative: {w.tolist()}")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise InvalidWeights(f"weights sum to {w.sum()!r}, expected 1")
    return w


def _born(state: QubitState, n, outcome: int) -> float:
    p = float(np.trace(projector(n, outcome) @ state.matrix).real)
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class LocalHiddenVariableModel:
    """Finite LHV model with quantum response functions.

    ``components[xi] = (P_xi, alice_state, bob_state)``; the responses are
    ``P(a|n, xi) = tr[Pi^n_a alice_state]`` and likewise for Bob.
    """

    components: tuple[tuple[float, QubitState, QubitState], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([c[0] for c in self.components])

    def alice_response(self, xi: int, n, a: int) -> float:
        return _born(self.components[xi][1], n, a)

    def bob_response(self, xi: int, n, b: int) -> float:
        return _born(self.components[xi][2], n, b)

    def joint_probability(self, n_a, a: int, n_b, b: int) -> float:
        return float(
            sum(
                w * self.alice_response(xi, n_a, a) * self.bob_response(xi, n_b, b)
                for xi, (w, _, _) in enumerate(self.components)
            )
        )

    def state(self) -> TwoQubitState:
        """The separable state ``sum_xi P_xi alice_xi ⊗ bob_xi`` the model reproduces."""
        return TwoQubitState(sum(w * tensor(sa.matrix, sb.matrix) for w, sa, sb in self.components))


def lhv_from_separable(
    components: Iterable[tuple[float, QubitState | np.ndarray, QubitState | np.ndarray]],
) -> LocalHiddenVariableModel:
    comps = []
    for w, sa, sb in components:
        sa = sa if isinstance(sa, QubitState) else QubitState(sa)
        sb = sb if isinstance(sb, QubitState) else QubitState(sb)
        comps.append((float(w), sa, sb))
    _check_weights([c[0] for c in comps])
    return LocalHiddenVariableModel(tuple(comps))


@dataclass(frozen=True, eq=False)
class LocalHiddenStateEnsemble:
    """Members ``(weight, alice_state, hidden_state)``.

    ``alice_state`` only carries Alice's response rule
    ``p(a|n, xi) = tr[Pi^n_a alice_state]``.
    """

    members: tuple[tuple[float, QubitState, QubitState], ...]

    def __post_init__(self) -> None:
        _check_weights([m[0] for m in self.members])
        for _, _, hidden in self.members:
            norm = float(np.linalg.norm(hidden.bloch))
            if norm > 1 + HIDDEN_NORM_TOL:
                raise ValueError(f"hidden state Bloch norm {norm} exceeds 1")

    @property
    def hidden_bloch_vectors(self) -> np.ndarray:
        return np.array([h.bloch for _, _, h in self.members])

    def assemblage(self, n, a: int) -> np.ndarray:
        """``sum_xi p(a|n, xi) weight_xi rho_xi`` (unnormalized)."""
        return sum(w * _born(sa, n, a) * h.matrix for w, sa, h in self.members)

    def unconditioned(self) -> np.ndarray:
        return sum(w * h.matrix for w, _, h in self.members)


def hidden_bloch_vector(p0x: float, p0y: float, p0z: float, mu: float) -> np.ndarray:
    """``mu * (2 p0x - 1, 2 p0y - 1, 2 p0z - 1)`` from Bob's outcome-0 probabilities."""
    return mu * (2 * np.array([p0x, p0y, p0z], dtype=float) - 1)


def construct_lhs(lhv: LocalHiddenVariableModel, spec: MapSpec = MapSpec()) -> LocalHiddenStateEnsemble:
    """Hidden-state ensemble for the mapped state built from an LHV model of ``tau``."""
    if not spec.proof_valid:
        raise ProofInvalidMu(
            f"mu = {spec.mu} exceeds 1/sqrt(3); hidden Bloch vectors may leave the ball"
        )
    members = []
    for xi, (w, sa, _) in enumerate(lhv.components):
        r = hidden_bloch_vector(
            lhv.bob_response(xi, "x", 0),
            lhv.bob_response(xi, "y", 0),
            lhv.bob_response(xi, "z", 0),
            spec.mu,
        )
        members.append((w, sa, bloch_to_state(r)))
    return LocalHiddenStateEnsemble(tuple(members))


@dataclass(frozen=True)
class VerificationReport:
    directions_tested: int
    max_residual: float
    marginal_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance and self.marginal_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "directions_tested": self.directions_tested,
            "max_residual": self.max_residual,
            "marginal_residual": self.marginal_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def verify_lhs(
    ensemble: LocalHiddenStateEnsemble,
    rho: TwoQubitState,
    n_directions: int = 100,
    tolerance: float = 1e-10,
    seed: int = 0,
) -> VerificationReport:
    """Compare Bob's conditional states of ``rho`` with the ensemble's prediction.

    For random Alice directions ``n`` and both outcomes, the residual is the
    largest entry of ``|tr_A[(Pi^n_a ⊗ I) rho] - sum_xi p(a|n,xi) w_xi rho_xi|``.
    Bob's unconditioned state is checked as well.
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    rng = stream(seed, 0x1a5)
    worst = 0.0
    for _ in range(n_directions):
        n = random_direction(rng)
        for a in (0, 1):
            diff = conditional_state(rho, n, a) - ensemble.assemblage(n, a)
            worst = max(worst, float(np.max(np.abs(diff))))
    marginal = float(np.max(np.abs(partial_trace_A(rho).matrix - ensemble.unconditioned())))
    return VerificationReport(n_directions, worst, marginal, float(tolerance))


# -- components file --------------------------------------------------------


def components_to_json(components: Sequence[tuple[float, QubitState, QubitState]]) -> str:
    out = [
        {
            "weight": float(w),
            "alice": json.loads(state_to_json(sa)),
            "bob": json.loads(state_to_json(sb)),
        }
        for w, sa, sb in components
    ]
    return json.dumps({"components": out}, indent=1) + "\n"


def components_from_json(data: dict) -> list[tuple[float, QubitState, QubitState]]:
    """Parse ``{"components": [{"weight", "alice", "bob"}, ...]}``; states use the state JSON format."""
    try:
        raw = data["components"]
        parsed = [(float(c["weight"]), c["alice"], c["bob"]) for c in raw]
    except (TypeError, KeyError, ValueError):
        raise StateFormatError("components file needs a list of {weight, alice, bob}") from None
    out = []
    for w, a, b in parsed:
        ma, mb = matrix_from_json(a), matrix_from_json(b)
        if ma.shape != (2, 2) or mb.shape != (2, 2):
            raise StateFormatError("component states must be single-qubit (dim 2)")
        out.append((w, QubitState(ma), QubitState(mb)))
    return out
