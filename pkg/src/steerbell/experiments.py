"""Random states, Monte Carlo checks of the steering-to-Bell implication, Werner scans."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .criteria import (
    MU_DEFAULT,
    MapSpec,
    chsh_max,
    dodecahedron_settings,
    icosahedron_settings,
    map_to_steering,
    settings_by_name,
    steering_max,
)
from .errors import ParameterOutOfRange
from .rng import RNG_ALGORITHM, stream
from .states import QubitState, TwoQubitState, correlation_matrix, werner

GENERATORS = ("haar_pure", "hs_mixed", "separable_k")
_GENERATOR_CODE = {"haar_pure": 1, "hs_mixed": 2, "separable": 3}


# -- samplers ---------------------------------------------------------------


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample_pure_state(rng: np.random.Generator) -> TwoQubitState:
    """Haar-random pure two-qubit state."""
    psi = _complex_normal(rng, 4)
    psi /= np.linalg.norm(psi)
    return TwoQubitState(np.outer(psi, psi.conj()))


def sample_mixed_state(rng: np.random.Generator) -> TwoQubitState:
    """Hilbert-Schmidt random state ``G G^dagger / tr(G G^dagger)``, G 4x4 Ginibre."""
    g = _complex_normal(rng, (4, 4))
    m = g @ g.conj().T
    return TwoQubitState(m / np.trace(m).real)


def sample_pure_qubit(rng: np.random.Generator) -> QubitState:
    psi = _complex_normal(rng, 2)
    psi /= np.linalg.norm(psi)
    return QubitState(np.outer(psi, psi.conj()))


def sample_separable(
    rng: np.random.Generator, k: int
) -> tuple[TwoQubitState, list[tuple[float, QubitState, QubitState]]]:
    """Mixture of ``k`` random pure product states with flat-Dirichlet weights.

    Returns the state and its ``(weight, alice, bob)`` components.
    """
    if k < 1:
        raise ParameterOutOfRange(f"k must be at least 1, got {k}")
    weights = rng.dirichlet(np.ones(k)) if k > 1 else np.ones(1)
    comps = [(float(w), sample_pure_qubit(rng), sample_pure_qubit(rng)) for w in weights]
    # renormalize so the weights sum to 1 to within round-off of a single division
    total = sum(c[0] for c in comps)
    comps = [(w / total, a, b) for w, a, b in comps]
    m = sum(w * np.kron(a.matrix, b.matrix) for w, a, b in comps)
    return TwoQubitState(m), comps


# -- theorem verification ---------------------------------------------------


def _parse_generator(name: str) -> tuple[str, int]:
    if name in ("haar_pure", "hs_mixed"):
        return name, 0
    if name.startswith("separable_"):
        try:
            k = int(name.split("_", 1)[1])
        except ValueError:
            raise ParameterOutOfRange(f"bad separable generator {name!r}") from None
        if k < 1:
            raise ParameterOutOfRange("separable_k needs k >= 1")
        return "separable", k
    raise ParameterOutOfRange(f"unknown generator {name!r}; expected haar_pure, hs_mixed or separable_<k>")


@dataclass(frozen=True)
class SampleSpec:
    n_samples: int
    generator: str = "haar_pure"
    seed: int = 0
    settings_label: str = "both"
    mu: float = MU_DEFAULT

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise ParameterOutOfRange("n_samples must be >= 1")
        if not 0 < self.mu <= MU_DEFAULT + 1e-15:
            raise ParameterOutOfRange(f"mu must lie in (0, 1/sqrt(3)], got {self.mu}")
        _parse_generator(self.generator)
        settings_by_name(self.settings_label)


@dataclass
class TheoremStats:
    n_samples: int = 0
    n_steering_violations: int = 0
    n_chsh_violations: int = 0
    n_counterexamples: int = 0
    steering_violations_by_settings: dict[str, int] = field(default_factory=dict)
    counterexample_indices: list[int] = field(default_factory=list)
    max_steering_margin: float = -math.inf

    @property
    def detection_ratio(self) -> float | None:
        if self.n_chsh_violations == 0:
            return None
        return self.n_steering_violations / self.n_chsh_violations

    def merge(self, other: "TheoremStats") -> "TheoremStats":
        by = dict(self.steering_violations_by_settings)
        for k, v in other.steering_violations_by_settings.items():
            by[k] = by.get(k, 0) + v
        return TheoremStats(
            self.n_samples + other.n_samples,
            self.n_steering_violations + other.n_steering_violations,
            self.n_chsh_violations + other.n_chsh_violations,
            self.n_counterexamples + other.n_counterexamples,
            by,
            sorted(self.counterexample_indices + other.counterexample_indices),
            max(self.max_steering_margin, other.max_steering_margin),
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["detection_ratio"] = self.detection_ratio
        return d


def draw_sample(spec: SampleSpec, index: int) -> TwoQubitState:
    """The ``index``-th sample of ``spec``; depends only on ``(seed, generator, index)``."""
    kind, k = _parse_generator(spec.generator)
    rng = stream(spec.seed, _GENERATOR_CODE[kind], k, index)
    if kind == "haar_pure":
        return sample_pure_state(rng)
    if kind == "hs_mixed":
        return sample_mixed_state(rng)
    return sample_separable(rng, k)[0]


def _run_range(spec: SampleSpec, start: int, stop: int) -> TheoremStats:
    settings = settings_by_name(spec.settings_label)
    map_spec = MapSpec(spec.mu)
    stats = TheoremStats(steering_violations_by_settings={s.label: 0 for s in settings})
    for i in range(start, stop):
        tau = draw_sample(spec, i)
        rho = map_to_steering(tau, map_spec)
        results = [steering_max(rho, s) for s in settings]
        steered = False
        for r in results:
            stats.max_steering_margin = max(stats.max_steering_margin, r.value - r.bound)
            if r.violated:
                steered = True
                stats.steering_violations_by_settings[r.label] += 1
        bell = chsh_max(tau).violated
        stats.n_samples += 1
        stats.n_steering_violations += steered
        stats.n_chsh_violations += bell
        if steered and not bell:
            stats.n_counterexamples += 1
            stats.counterexample_indices.append(i)
    return stats


def verify_theorem(spec: SampleSpec, workers: int = 1, chunk: int = 2000) -> TheoremStats:
    """Tally steering violations of mapped states against CHSH violations of the sources.

    A counterexample is a sample whose mapped state violates a steering
    inequality while the source state does not violate CHSH. The result is
    the same for any ``workers``.
    """
    bounds = [(s, min(s + chunk, spec.n_samples)) for s in range(0, spec.n_samples, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_range, [spec] * len(bounds), *zip(*bounds)))
    else:
        parts = [_run_range(spec, a, b) for a, b in bounds]
    total = parts[0]
    for p in parts[1:]:
        total = total.merge(p)
    return total


# -- Werner scan ------------------------------------------------------------

SCAN_HEADER = ["w", "s6_max", "s10_max", "c6", "c10", "chsh_max", "bell_via_s6", "bell_via_s10", "chsh_violated"]


@dataclass(frozen=True)
class ScanRow:
    w: float
    s6_max: float
    s10_max: float
    c6: float
    c10: float
    chsh_max: float
    bell_via_s6: bool
    bell_via_s10: bool
    chsh_violated: bool


def default_grid(step: float = 1e-3) -> list[float]:
    n = int(round(1 / step))
    return [i / n for i in range(n + 1)]


def werner_scan(w_grid: Sequence[float], spec: MapSpec = MapSpec()) -> list[ScanRow]:
    """Steering parameters of the mapped Werner states and CHSH of the originals."""
    ico, dod = icosahedron_settings(), dodecahedron_settings()
    rows = []
    for w in w_grid:
        tau = werner(w)
        rho = map_to_steering(tau, spec)
        s6, s10 = steering_max(rho, ico), steering_max(rho, dod)
        c = chsh_max(tau)
        rows.append(
            ScanRow(
                float(w), s6.value, s10.value, s6.bound, s10.bound, c.max_value,
                s6.violated and spec.proof_valid, s10.violated and spec.proof_valid, c.violated,
            )
        )
    return rows


def scan_to_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    for r in rows:
        writer.writerow(
            [f"{v:.12g}" for v in (r.w, r.s6_max, r.s10_max, r.c6, r.c10, r.chsh_max)]
            + [str(v).lower() for v in (r.bell_via_s6, r.bell_via_s10, r.chsh_violated)]
        )
    return buf.getvalue()


def scan_from_csv(text: str) -> list[ScanRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != SCAN_HEADER:
        raise ValueError(f"unexpected scan header {reader.fieldnames}")
    return [
        ScanRow(
            *(float(rec[k]) for k in SCAN_HEADER[:6]),
            *(rec[k] == "true" for k in SCAN_HEADER[6:]),
        )
        for rec in reader
    ]


def onset(rows: Sequence[ScanRow], column: str) -> float | None:
    """Smallest ``w`` in the scan at which boolean ``column`` is true."""
    hits = [r.w for r in rows if getattr(r, column)]
    return min(hits) if hits else None


def rng_description() -> str:
    return RNG_ALGORITHM
