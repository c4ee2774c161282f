"""Steering map, its inverse, linear steering inequalities and CHSH.

A two-qubit state ``tau`` is sent to

    rho = mu * tau + (1 - mu) * tau_A ⊗ I/2,      mu = 1/sqrt(3),

and a violation of a linear steering inequality by ``rho`` certifies that
``tau`` admits no local hidden variable model. Both the steering parameter
and the CHSH value only depend on the correlation matrix ``T`` of a state,
so everything below is phrased in terms of ``T``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import LengthMismatch, ParameterOutOfRange, ProofInvalidMu, TooManySettings
from .linalg import HERMITIAN_TOL, hermitian_deviation, singular_values_3, svd_3
from .states import (
    PSD_TOL,
    TRACE_TOL,
    TwoQubitState,
    _matrix,
    _ptrace_b,
    as_direction,
    correlation_matrix,
)

MU_DEFAULT = 1 / math.sqrt(3)
VIOLATION_MARGIN = 1e-9
MAX_SETTINGS = 24
TSIRELSON = 2 * math.sqrt(2)
GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class MapSpec:
    """Mixing weight ``mu`` of the steering map, ``0 < mu <= 1``.

    Bell verdicts are only sound for ``mu <= 1/sqrt(3)``: the hidden states
    built from an LHV model have Bloch norm up to ``sqrt(3) * mu``.
    """

    mu: float = MU_DEFAULT

    def __post_init__(self) -> None:
        if not 0.0 < self.mu <= 1.0:
            raise ParameterOutOfRange(f"mu must lie in (0, 1], got {self.mu}")

    @property
    def proof_valid(self) -> bool:
        return self.mu <= MU_DEFAULT + 1e-15


@dataclass(frozen=True, eq=False)
class SteeringSettings:
    axes: np.ndarray
    classical_bound: float
    label: str = ""

    def __post_init__(self) -> None:
        axes = np.array([as_direction(b) for b in self.axes], dtype=float)
        if axes.ndim != 2 or len(axes) < 1:
            raise ParameterOutOfRange("steering settings need at least one axis")
        gram = np.abs(axes @ axes.T)
        np.fill_diagonal(gram, 0.0)
        if np.any(gram >= 1 - 1e-9):
            raise ParameterOutOfRange("steering axes must be pairwise non-parallel")
        if not 0.0 < self.classical_bound <= 1.0:
            raise ParameterOutOfRange(f"classical bound must lie in (0, 1], got {self.classical_bound}")
        axes.setflags(write=False)
        object.__setattr__(self, "axes", axes)

    @classmethod
    def from_axes(cls, axes: Sequence[Sequence[float]], label: str = "") -> "SteeringSettings":
        """Build settings with the classical bound computed by enumeration."""
        return cls(np.asarray(axes, dtype=float), classical_bound(axes), label)

    @property
    def n(self) -> int:
        return len(self.axes)


@dataclass(frozen=True, eq=False)
class SteeringResult:
    value: float
    bound: float
    alice_directions: np.ndarray
    margin: float = VIOLATION_MARGIN
    label: str = ""

    @property
    def violated(self) -> bool:
        return self.value - self.bound > self.margin

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "value": self.value,
            "bound": self.bound,
            "violated": self.violated,
            "alice_directions": self.alice_directions.tolist(),
        }


@dataclass(frozen=True, eq=False)
class ChshResult:
    max_value: float
    alice: tuple[np.ndarray, np.ndarray]
    bob: tuple[np.ndarray, np.ndarray]
    margin: float = VIOLATION_MARGIN

    @property
    def violated(self) -> bool:
        return self.max_value > 2 + self.margin

    def to_dict(self) -> dict:
        return {
            "max_value": self.max_value,
            "violated": self.violated,
            "alice": [v.tolist() for v in self.alice],
            "bob": [v.tolist() for v in self.bob],
        }


@dataclass(frozen=True, eq=False)
class InverseMapVerdict:
    candidate: np.ndarray
    is_density_matrix: bool
    min_eigenvalue: float

    def to_dict(self) -> dict:
        return {"is_density_matrix": self.is_density_matrix, "min_eigenvalue": self.min_eigenvalue}


@dataclass(frozen=True, eq=False)
class NonlocalityReport:
    """Outcome of testing ``tau`` through steering of its mapped state.

    ``verdict`` is one-sided: a steering violation proves Bell nonlocality,
    its absence proves nothing.
    """

    mu: float
    steering: list[SteeringResult]
    chsh: ChshResult
    mapped_state: TwoQubitState = field(repr=False)

    @property
    def bell_nonlocal(self) -> bool:
        return any(r.violated for r in self.steering)

    @property
    def verdict(self) -> str:
        return "nonlocal via steering" if self.bell_nonlocal else "inconclusive"

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "steering": [r.to_dict() for r in self.steering],
            "chsh_max": self.chsh.max_value,
            "chsh_violated": self.chsh.violated,
            "bell_nonlocal": self.bell_nonlocal,
            "verdict": self.verdict,
        }


# -- the map ----------------------------------------------------------------


def map_to_steering(tau: TwoQubitState, spec: MapSpec = MapSpec()) -> TwoQubitState:
    """``mu * tau + (1 - mu) * tau_A ⊗ I/2``."""
    m = _matrix(tau)
    noise = np.kron(_ptrace_b(m), np.eye(2) / 2)
    return TwoQubitState(spec.mu * m + (1 - spec.mu) * noise)


def inverse_map(rho: TwoQubitState, spec: MapSpec = MapSpec()) -> InverseMapVerdict:
    """Undo the map: ``rho/mu - (1/mu - 1) * rho_A ⊗ I/2``.

    The candidate is returned whether or not it is a state; the verdict
    records whether it is positive semidefinite with unit trace.
    """
    m = _matrix(rho)
    mu = spec.mu
    cand = m / mu - (1 / mu - 1) * np.kron(_ptrace_b(m), np.eye(2) / 2)
    hermitian = hermitian_deviation(cand) <= HERMITIAN_TOL
    herm = (cand + cand.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    unit_trace = abs(np.trace(cand).real - 1) <= TRACE_TOL
    ok = bool(hermitian and unit_trace and min_eig >= -PSD_TOL)
    return InverseMapVerdict(candidate=cand, is_density_matrix=ok, min_eigenvalue=min_eig)


# -- steering inequalities --------------------------------------------------


def classical_bound(axes: Sequence[Sequence[float]]) -> float:
    """Local-hidden-state bound of the N-setting linear steering inequality.

    Equals ``max_a |sum_k a_k b_k| / N`` over sign vectors ``a`` in {+1,-1}^N,
    found by exhaustive enumeration. The first sign is fixed to +1 since
    ``a`` and ``-a`` give the same norm.
    """
    b = np.array([as_direction(v) for v in axes], dtype=float).reshape(-1, 3)
    n = len(b)
    if n < 1:
        raise ParameterOutOfRange("need at least one axis")
    if n > MAX_SETTINGS:
        raise TooManySettings(f"brute force supports at most {MAX_SETTINGS} settings, got {n}")
    if n == 1:
        return float(np.linalg.norm(b[0]))
    # low bits enumerate the tail signs in blocks; prefixes are looped over
    tail = min(n - 1, 14)
    head = n - 1 - tail
    tail_signs = np.array(list(itertools.product((1.0, -1.0), repeat=tail)))
    tail_sums = tail_signs @ b[n - tail :]
    best = 0.0
    for prefix in itertools.product((1.0, -1.0), repeat=head):
        base = b[0] + np.asarray(prefix) @ b[1 : 1 + head] if head else b[0]
        best = max(best, float(np.max(np.einsum("ij,ij->i", base + tail_sums, base + tail_sums))))
    return math.sqrt(best) / n


def _icosahedron_axes() -> np.ndarray:
    p = GOLDEN
    v = np.array(
        [(1, p, 0), (1, -p, 0), (0, 1, p), (0, 1, -p), (p, 0, 1), (-p, 0, 1)], dtype=float
    )
    return v / math.sqrt(1 + p * p)


def _dodecahedron_axes() -> np.ndarray:
    p, q = GOLDEN, 1 / GOLDEN
    v = np.array(
        [
            (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
            (0, q, p), (0, q, -p), (q, p, 0), (q, -p, 0), (p, 0, q), (-p, 0, q),
        ],
        dtype=float,
    )
    return v / math.sqrt(3)


@lru_cache(maxsize=None)
def icosahedron_settings() -> SteeringSettings:
    """Six settings along the vertex axes of the icosahedron."""
    return SteeringSettings.from_axes(_icosahedron_axes(), "icosahedron-6")


@lru_cache(maxsize=None)
def dodecahedron_settings() -> SteeringSettings:
    """Ten settings along the vertex axes of the dodecahedron."""
    return SteeringSettings.from_axes(_dodecahedron_axes(), "dodecahedron-10")


def settings_by_name(name: str | int) -> list[SteeringSettings]:
    """Resolve "6", "10" or "both" (also "n6", "n10")."""
    key = str(name).lower().lstrip("n")
    if key == "6":
        return [icosahedron_settings()]
    if key == "10":
        return [dodecahedron_settings()]
    if key == "both":
        return [icosahedron_settings(), dodecahedron_settings()]
    raise ParameterOutOfRange(f"unknown settings {name!r}; expected 6, 10 or both")


def steering_value(
    rho: TwoQubitState,
    settings: SteeringSettings,
    alice_dirs: Sequence[Sequence[float]],
) -> float:
    """``(1/N) sum_k a_k^T T b_k`` for Alice directions ``a_k``."""
    a = np.asarray(alice_dirs, dtype=float)
    if a.shape[0] != settings.n:
        raise LengthMismatch(f"{a.shape[0]} Alice directions for {settings.n} settings")
    a = np.array([as_direction(v) for v in a])
    t = correlation_matrix(rho)
    return float(np.einsum("ki,ij,kj->", a, t, settings.axes) / settings.n)


def steering_max_from_correlations(
    t: np.ndarray, settings: SteeringSettings, margin: float = VIOLATION_MARGIN
) -> SteeringResult:
    tb = settings.axes @ np.asarray(t).T  # row k is T b_k
    norms = np.linalg.norm(tb, axis=1)
    dirs = settings.axes.copy()
    nz = norms > 0
    dirs[nz] = tb[nz] / norms[nz, None]
    return SteeringResult(
        value=float(norms.sum() / settings.n),
        bound=settings.classical_bound,
        alice_directions=dirs,
        margin=margin,
        label=settings.label,
    )


def steering_max(
    rho: TwoQubitState, settings: SteeringSettings, margin: float = VIOLATION_MARGIN
) -> SteeringResult:
    """Largest steering parameter over Alice's measurement choices.

    Alice's best direction for axis ``b_k`` is ``T b_k / |T b_k|`` (Cauchy-Schwarz);
    an axis with ``T b_k = 0`` contributes nothing and keeps ``a_k = b_k``.
    """
    return steering_max_from_correlations(correlation_matrix(rho), settings, margin)


# -- CHSH -------------------------------------------------------------------


def chsh_value(tau: TwoQubitState, a, a_prime, b, b_prime) -> float:
    """``E(a,b) + E(a,b') + E(a',b) - E(a',b')`` with ``E(u, v) = u^T T v``."""
    t = correlation_matrix(tau)
    a, a_prime, b, b_prime = (as_direction(v) for v in (a, a_prime, b, b_prime))
    return float(a @ t @ (b + b_prime) + a_prime @ t @ (b - b_prime))


def chsh_max_from_correlations(t: np.ndarray, margin: float = VIOLATION_MARGIN) -> ChshResult:
    u, s, v = svd_3(t)
    value = 2 * math.hypot(s[0], s[1])
    theta = math.atan2(s[1], s[0]) if s[0] > 0 else math.pi / 4
    b = math.cos(theta) * v[:, 0] + math.sin(theta) * v[:, 1]
    b_prime = math.cos(theta) * v[:, 0] - math.sin(theta) * v[:, 1]
    return ChshResult(value, (u[:, 0], u[:, 1]), (b, b_prime), margin)


def chsh_max(tau: TwoQubitState, margin: float = VIOLATION_MARGIN) -> ChshResult:
    """Maximal CHSH value ``2 sqrt(s1^2 + s2^2)`` from the two largest singular values of T.

    The optimal settings are ``a = u1``, ``a' = u2`` and
    ``b, b' = cos(t) v1 ± sin(t) v2`` with ``tan(t) = s2/s1``.
    """
    return chsh_max_from_correlations(correlation_matrix(tau), margin)


def chsh_max_search(tau: TwoQubitState, restarts: int = 20, seed: int = 0, iters: int = 500) -> float:
    """Maximize ``chsh_value`` directly by alternating ascent.

    Each sweep sets Alice's pair optimally for Bob's pair and vice versa,
    which never decreases the value. Independent of the singular-value
    closed form; used to cross-check it.
    """
    t = correlation_matrix(tau)
    rng = np.random.default_rng(seed)

    def _unit_or(v, fallback):
        n = np.linalg.norm(v)
        return v / n if n > 1e-15 else fallback

    best = -np.inf
    for _ in range(restarts):
        b, bp = (v / np.linalg.norm(v) for v in rng.standard_normal((2, 3)))
        a, ap = b, bp
        prev = -np.inf
        for _ in range(iters):
            a = _unit_or(t @ (b + bp), a)
            ap = _unit_or(t @ (b - bp), ap)
            b = _unit_or(t.T @ (a + ap), b)
            bp = _unit_or(t.T @ (a - ap), bp)
            val = chsh_value(tau, a, ap, b, bp)
            if val - prev < 1e-15:
                break
            prev = val
        best = max(best, val)
    return float(best)


# -- the criterion ----------------------------------------------------------


def bell_via_steering(
    tau: TwoQubitState,
    settings: SteeringSettings | Sequence[SteeringSettings] | None = None,
    spec: MapSpec = MapSpec(),
) -> NonlocalityReport:
    """Test ``tau`` for Bell nonlocality through steering of its mapped state.

    ``settings`` defaults to both the six- and ten-setting inequalities.

    Raises
    ------
    ProofInvalidMu
        If ``spec.mu > 1/sqrt(3)``, where no Bell conclusion is warranted.
    """
    if not spec.proof_valid:
        raise ProofInvalidMu(f"mu = {spec.mu} exceeds 1/sqrt(3); no Bell verdict is possible")
    if settings is None:
        settings = [icosahedron_settings(), dodecahedron_settings()]
    elif isinstance(settings, SteeringSettings):
        settings = [settings]
    rho = map_to_steering(tau, spec)
    t_rho = correlation_matrix(rho)
    results = [steering_max_from_correlations(t_rho, s) for s in settings]
    return NonlocalityReport(spec.mu, results, chsh_max(tau), rho)
