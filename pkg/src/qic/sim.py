"""Seeded Monte-Carlo of source -> media -> detector for paired channels.

Each shot picks a source pure state by its mixture weight and then an
induced-basis outcome ``(k, n)`` with probability ``|<k n|psi>|^2``.
Randomness comes from numpy's Philox4x64-10 counter-based generator, so a
given seed reproduces the same stream on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .channel import (
    BipartiteState,
    CoupledWeights,
    JointDistribution,
    detection_distribution,
    joint_distribution,
)
from .core import ValidationError
from .info import _entropy_bits
from .representation import coupled_basis

GENERATOR = "numpy.random.Philox (Philox4x64-10)"
# probabilities below this are treated as exact zeros (solver round-off)
_PROB_FLOOR = 1e-14

StateSpec = Union[CoupledWeights, BipartiteState]


@dataclass(frozen=True)
class SimulationConfig:
    state: StateSpec
    shots: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.state, (CoupledWeights, BipartiteState)):
            raise ValidationError("simulation state must be CoupledWeights or BipartiteState")
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValidationError(f"shots must be a positive integer, got {self.shots!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True, eq=False)
class SimulationReport:
    counts: np.ndarray
    analytic: JointDistribution
    shots: int
    seed: int
    generator: str = GENERATOR

    @property
    def empirical(self) -> np.ndarray:
        return self.counts / self.shots

    @property
    def marginal_a(self) -> np.ndarray:
        return self.empirical.sum(axis=1)

    @property
    def marginal_b(self) -> np.ndarray:
        return self.empirical.sum(axis=0)

    @property
    def deviation(self) -> np.ndarray:
        return self.empirical - self.analytic.table

    @property
    def empirical_entropy(self) -> float:
        return _entropy_bits(self.empirical.ravel())

    def as_dict(self) -> dict:
        return {
            "generator": self.generator,
            "seed": self.seed,
            "shots": self.shots,
            "counts": self.counts.tolist(),
            "empirical": self.empirical.tolist(),
            "analytic": self.analytic.table.tolist(),
            "deviation": self.deviation.tolist(),
            "empirical_marginal_a": self.marginal_a.tolist(),
            "empirical_marginal_b": self.marginal_b.tolist(),
            "analytic_marginal_a": self.analytic.row_sums.tolist(),
            "analytic_marginal_b": self.analytic.col_sums.tolist(),
            "empirical_entropy_bits": self.empirical_entropy,
            "deviation_statistic": deviation_statistic(self),
        }


def source_ensemble(state: StateSpec) -> tuple[np.ndarray, np.ndarray]:
    """Weights and induced-basis amplitude rows of the states the source emits."""
    if isinstance(state, CoupledWeights):
        table = coupled_basis(state.l, state.s)
        weights = np.array([state.get(*lab) for lab in table.labels])
        return weights, table.unitary
    spec = state.rho.spectrum
    weights = np.clip(spec.eigenvalues, 0.0, None)
    return weights / weights.sum(), np.stack([v.amplitudes for v in spec.eigenvectors])


def run_simulation(cfg: SimulationConfig) -> SimulationReport:
    state = cfg.state
    dims = state.dims
    weights, amps = source_ensemble(state)
    probs = np.abs(amps) ** 2
    probs[probs < _PROB_FLOOR] = 0.0
    probs /= probs.sum(axis=1, keepdims=True)

    rng = np.random.Generator(np.random.Philox(cfg.seed))
    sources = rng.choice(weights.size, size=cfg.shots, p=weights)
    per_source = np.bincount(sources, minlength=weights.size)
    counts = np.zeros(dims.total, dtype=np.int64)
    for idx, n in enumerate(per_source):
        if n:
            outcomes = rng.choice(dims.total, size=n, p=probs[idx])
            counts += np.bincount(outcomes, minlength=dims.total)

    analytic = joint_distribution(state) if isinstance(state, CoupledWeights) else detection_distribution(state)
    return SimulationReport(counts.reshape(dims.na, dims.nb), analytic, int(cfg.shots), int(cfg.seed))


def deviation_statistic(report: SimulationReport) -> float:
    """Pearson statistic ``sum (O - E)^2 / E`` over cells with ``E > 0``."""
    expected = report.analytic.table * report.shots
    mask = expected > 0
    return float(np.sum((report.counts[mask] - expected[mask]) ** 2 / expected[mask]))
