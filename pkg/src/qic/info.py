"""Shannon information measures, in bits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DensityMatrix, ValidationError

PROB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ProbabilityDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.size == 0 or not np.all(np.isfinite(p)):
            raise ValidationError("distribution must be a non-empty finite vector")
        if np.any(p < 0):
            raise ValidationError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)


def information_content(p: float) -> float:
    """Information gained by an outcome of probability ``p``: ``-log2 p``."""
    if not 0 < p <= 1:
        raise ValueError(f"probability must lie in (0, 1], got {p!r}")
    return float(-np.log2(p))


def _entropy_bits(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def shannon_entropy(d: ProbabilityDistribution | Sequence[float]) -> float:
    if not isinstance(d, ProbabilityDistribution):
        d = ProbabilityDistribution(d)
    return _entropy_bits(d.probs)


def spectral_entropy(rho: DensityMatrix) -> float:
    # eigenvalues down to -PSD_TOL are admitted by validation; clip them
    lam = np.clip(rho.spectrum.eigenvalues, 0.0, None)
    return _entropy_bits(lam)
