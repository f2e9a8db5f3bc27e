"""Two coupled qubits: singlet/triplet basis, the product triplet family,
the four-weight mixed state and its entanglement diagnostics.

Induced basis ordering is ``|--> , |-+>, |+->, |++>`` (index ``2 a + b``,
``-`` being the ``m = -1/2`` state of each subchannel).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import (
    BipartiteDims,
    BipartiteState,
    CoupledWeights,
    classify,
    ppt_min_eigenvalue,
)
from .core import DensityMatrix, StateVector, TRACE_TOL, ValidationError, as_complex, degeneracy_classes
from .representation import SpinLabel

SQRT2 = np.sqrt(2.0)
_EIG_FLOOR = 1e-12
PARAQUBIT_DIMS = BipartiteDims(2, 2)


class SingletTriplet(NamedTuple):
    s: StateVector
    d: StateVector
    zero: StateVector
    u: StateVector


@dataclass(frozen=True)
class ParaqubitWeights:
    p_s: float
    p_0: float
    p_d: float
    p_u: float

    def __post_init__(self):
        vals = self.as_tuple()
        if not all(np.isfinite(v) and v >= 0 for v in vals):
            raise ValidationError(f"paraqubit weights must be nonnegative, got {vals}")
        if abs(sum(vals) - 1.0) > TRACE_TOL:
            raise ValidationError(f"paraqubit weights sum to {sum(vals)!r}, not 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_s, self.p_0, self.p_d, self.p_u)

    def to_coupled(self) -> CoupledWeights:
        return CoupledWeights(
            SpinLabel(1),
            SpinLabel(1),
            {(0, 0): self.p_s, (2, 0): self.p_0, (2, -2): self.p_d, (2, 2): self.p_u},
        )


@dataclass(frozen=True)
class TripletCoefficients:
    """Amplitudes ``a|d> + b|0> + c|u>``."""

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        a, b, c = (as_complex(z) for z in (self.a, self.b, self.c))
        norm2 = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2
        if abs(norm2 - 1.0) > 1e-9:
            raise ValidationError(f"triplet coefficients have squared norm {norm2!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def vector(self) -> StateVector:
        basis = singlet_triplet_basis()
        return StateVector(self.a * basis.d.amplitudes + self.b * basis.zero.amplitudes + self.c * basis.u.amplitudes)


def singlet_triplet_basis() -> SingletTriplet:
    r = 1 / SQRT2
    return SingletTriplet(
        s=StateVector([0, -r, r, 0]),
        d=StateVector([1, 0, 0, 0]),
        zero=StateVector([0, r, r, 0]),
        u=StateVector([0, 0, 0, 1]),
    )


def triplet_product_family(k: complex = 0, at_infinity: bool = False) -> TripletCoefficients:
    """Triplet combination that factorizes, parametrized by ``k`` on the sphere.

    ``at_infinity=True`` selects the limiting member ``|d>``.
    """
    if at_infinity:
        return TripletCoefficients(1, 0, 0)
    k = as_complex(k)
    c = 1 / (1 + abs(k) ** 2)
    return TripletCoefficients(k * k * c, SQRT2 * k * c, c)


def is_product_triplet(t: TripletCoefficients, tol: float = 1e-12) -> bool:
    return abs(t.b * t.b - 2 * t.a * t.c) <= tol


def paraqubit_density(w: ParaqubitWeights) -> BipartiteState:
    plus = (w.p_0 + w.p_s) / 2
    minus = (w.p_0 - w.p_s) / 2
    rho = np.array(
        [
            [w.p_d, 0, 0, 0],
            [0, plus, minus, 0],
            [0, minus, plus, 0],
            [0, 0, 0, w.p_u],
        ],
        dtype=complex,
    )
    return BipartiteState(PARAQUBIT_DIMS, DensityMatrix(rho))


def degeneracy_criterion(w: ParaqubitWeights, tol: float = 1e-9) -> bool:
    """True when singlet and entangled-triplet weights coincide."""
    return abs(w.p_s - w.p_0) <= tol


_SPIN_FLIP = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def concurrence(state: BipartiteState) -> float:
    """Wootters concurrence of a two-qubit state.

    The square roots of the eigenvalues of ``rho rho~`` are obtained as the
    singular values of ``W^dagger (Y x Y) W^*`` with ``rho = W W^dagger``,
    which keeps small values accurate.
    """
    if (state.dims.na, state.dims.nb) != (2, 2):
        raise ValidationError(f"concurrence needs 2x2 dims, got {state.dims.na}x{state.dims.nb}")
    vals, vecs = np.linalg.eigh(state.matrix)
    vals = np.where(vals > _EIG_FLOOR, vals, 0.0)
    w = vecs * np.sqrt(vals)
    lam = np.linalg.svd(w.conj().T @ _SPIN_FLIP @ w.conj(), compute_uv=False)
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def closed_form_concurrence(w: ParaqubitWeights) -> float:
    return max(0.0, abs(w.p_0 - w.p_s) - 2 * np.sqrt(w.p_d * w.p_u))


def simplex_grid(resolution: float) -> list[ParaqubitWeights]:
    """Lattice points of the weight simplex at step ``1/round(1/resolution)``."""
    if not 0 < resolution <= 0.25:
        raise ValueError("resolution must lie in (0, 0.25]")
    n = int(round(1 / resolution))
    pts = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            for k in range(n + 1 - i - j):
                pts.append(ParaqubitWeights(i / n, j / n, k / n, (n - i - j - k) / n))
    return pts


def _point_record(w: ParaqubitWeights, tol: float) -> dict:
    state = paraqubit_density(w)
    conc = concurrence(state)
    ppt = ppt_min_eigenvalue(state)
    verdict = classify(state, tol)
    spec = state.rho.spectrum
    return {
        "weights": {"p_s": w.p_s, "p_0": w.p_0, "p_d": w.p_d, "p_u": w.p_u},
        "paper_disentangled": degeneracy_criterion(w, tol),
        "concurrence": conc,
        "closed_form_concurrence": closed_form_concurrence(w),
        "ppt_min_eigenvalue": ppt,
        "label": verdict.label.value,
        "oracle_separable": conc <= tol,
        "spectrum": [float(x) for x in spec.eigenvalues],
        "degeneracy_classes": degeneracy_classes(spec, tol),
    }


def phase_diagram_scan(resolution: float = 0.05, tol: float = 1e-9) -> dict:
    """Compare the coincidence criterion against the concurrence oracle on a grid."""
    grid = simplex_grid(resolution)
    points = [_point_record(w, tol) for w in grid]
    counts = {"criterion_true_separable": 0, "criterion_true_entangled": 0,
              "criterion_false_separable": 0, "criterion_false_entangled": 0}
    disagreements = []
    other_pair = []
    for idx, rec in enumerate(points):
        key = ("criterion_true_" if rec["paper_disentangled"] else "criterion_false_") + (
            "separable" if rec["oracle_separable"] else "entangled"
        )
        counts[key] += 1
        if rec["paper_disentangled"] != rec["oracle_separable"]:
            disagreements.append(idx)
        w = rec["weights"]
        if abs(w["p_d"] - w["p_u"]) <= tol and not rec["paper_disentangled"] and not rec["oracle_separable"]:
            other_pair.append(idx)
    return {
        "resolution": resolution,
        "step": 1 / round(1 / resolution),
        "n_points": len(points),
        "counts": counts,
        "agree": counts["criterion_true_separable"] + counts["criterion_false_entangled"],
        "disagree": len(disagreements),
        "disagreement_indices": disagreements,
        "other_pair_coincidence_entangled": other_pair,
        "points": points,
    }
