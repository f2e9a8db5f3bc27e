"""Representation-theoretic analysis of paired quantum information channels."""

from .core import (
    DensityMatrix,
    Spectrum,
    StateVector,
    ValidationError,
    degeneracy_classes,
    density_from_mixture,
    purity,
    qubit_state,
    spectrum,
)

__version__ = "0.1.0"
