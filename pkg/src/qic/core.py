"""Dense complex linear algebra for states and density matrices.

Basis vectors are stored 0-based. Index ``i`` corresponds to the 1-based
label ``k = i + 1`` and, where a representation-theoretic reading applies,
to the magnetic label ``m = k - (1 + N) / 2`` (so index 0 is ``m = -(N-1)/2``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

NORM_TOL = 1e-9
TRACE_TOL = 1e-9
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9


class ValidationError(ValueError):
    """An input violates a documented invariant."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_complex(z) -> complex:
    """Coerce to a finite complex scalar."""
    if isinstance(z, (list, tuple)) and len(z) == 2:
        z = complex(float(z[0]), float(z[1]))
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValidationError(f"non-finite complex scalar {z!r}")
    return z


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.size == 0:
            raise ValidationError("state vector must have dimension >= 1")
        if not np.all(np.isfinite(amps)):
            raise ValidationError("state vector has non-finite amplitudes")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state vector norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls(v)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix.

    The spectrum is computed lazily and cached on first access.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("density matrix has non-finite entries")
        asym = np.max(np.abs(m - m.conj().T))
        if asym > HERMITIAN_TOL:
            raise ValidationError(f"density matrix is not Hermitian (residual {asym:.3g})")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace {tr!r} differs from 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise ValidationError(f"density matrix has negative eigenvalue {lo:.3g}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> "Spectrum":
        return spectrum(self)


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: tuple[StateVector, ...] = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return sum(lam * v.projector() for lam, v in zip(self.eigenvalues, self.eigenvectors))


def qubit_state(theta: float, phi: float) -> StateVector:
    """Pure qubit state ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""
    return StateVector(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))


def density_from_mixture(weights: Sequence[float], vectors: Sequence[StateVector]) -> DensityMatrix:
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(vectors) or len(vectors) == 0:
        raise ValidationError("mixture needs one weight per vector and at least one vector")
    dims = {v.dim for v in vectors}
    if len(dims) != 1:
        raise ValidationError(f"mixture vectors have differing dimensions {sorted(dims)}")
    if np.any(weights < 0):
        raise ValidationError("mixture weights must be nonnegative")
    if abs(weights.sum() - 1.0) > TRACE_TOL:
        raise ValidationError(f"mixture weights sum to {weights.sum()!r}, not 1")
    (dim,) = dims
    rho = np.zeros((dim, dim), dtype=complex)
    for w, v in zip(weights, vectors):
        rho += w * v.projector()
    return DensityMatrix(rho)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # first component with non-negligible magnitude is made real positive
    idx = np.flatnonzero(np.abs(v) > 1e-12)
    if idx.size:
        z = v[idx[0]]
        v = v * (abs(z) / z)
    return v


def _orthonormalize_block(vecs: np.ndarray) -> np.ndarray:
    """Deterministic basis of span(vecs) from projected standard basis vectors."""
    dim, size = vecs.shape
    proj = vecs @ vecs.conj().T
    out: list[np.ndarray] = []
    for i in range(dim):
        if len(out) == size:
            break
        w = proj[:, i].copy()
        for u in out:
            w -= (u.conj() @ w) * u
        nrm = np.linalg.norm(w)
        if nrm > 1e-6:
            w /= nrm
            # second pass for stability
            for u in out:
                w -= (u.conj() @ w) * u
            out.append(w / np.linalg.norm(w))
    if len(out) < size:  # pragma: no cover - projector always spans
        raise np.linalg.LinAlgError("failed to re-orthonormalize degenerate subspace")
    return np.stack(out, axis=1)


def spectrum(rho: DensityMatrix, rel_tol: float = 1e-9) -> Spectrum:
    """Eigen-decomposition with descending eigenvalues.

    Eigenvectors within a degenerate block are replaced by a deterministic
    basis (ordered Gram-Schmidt on the projected standard basis), and every
    eigenvector's first nonzero component is made real positive.
    """
    vals, vecs = np.linalg.eigh(rho.matrix)
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    for group in degeneracy_classes(vals, rel_tol):
        if len(group) > 1:
            vecs[:, group] = _orthonormalize_block(vecs[:, group])
    cols = tuple(StateVector(_fix_phase(vecs[:, i])) for i in range(vecs.shape[1]))
    return Spectrum(eigenvalues=vals, eigenvectors=cols)


def degeneracy_classes(spec, rel_tol: float = 1e-9) -> list[list[int]]:
    """Group eigenvalue indices whose values coincide within ``rel_tol``.

    ``spec`` is a :class:`Spectrum` or a plain sequence of eigenvalues. Two
    values are linked when ``|a - b| <= rel_tol * max(1, |a|)``; groups are the
    transitive closure of that relation, listed in order of first index.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    vals = np.asarray(spec.eigenvalues if isinstance(spec, Spectrum) else spec, dtype=float)
    order = np.argsort(-vals, kind="stable")
    groups: list[list[int]] = []
    for pos, i in enumerate(order):
        if pos and abs(vals[order[pos - 1]] - vals[i]) <= rel_tol * max(1.0, abs(vals[order[pos - 1]])):
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    groups = [sorted(g) for g in groups]
    groups.sort(key=lambda g: g[0])
    return groups


def purity(rho: DensityMatrix) -> float:
    m = rho.matrix
    return float(np.real(np.sum(m * m.T)))


def max_abs(a: np.ndarray) -> float:
    """Max-entry norm."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0
