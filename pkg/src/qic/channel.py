"""Bipartite (paired) channel states.

Induced basis: ``|m> (x) |n>`` has flat index ``m * nb + n`` (A is the slow
index). For coupled-basis mixtures the ``l`` factor is subchannel A and the
``s`` factor is subchannel B, so ``na = 2l + 1`` and ``nb = 2s + 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import DensityMatrix, TRACE_TOL, ValidationError, max_abs
from .representation import SpinLabel, clebsch_gordan, coupled_basis, coupled_labels, fmt_half

DEFAULT_TOL = 1e-9
# dims for which a positive partial transpose certifies separability
PPT_CONCLUSIVE = {(2, 2), (2, 3), (3, 2)}


@dataclass(frozen=True)
class BipartiteDims:
    na: int
    nb: int

    def __post_init__(self):
        if int(self.na) != self.na or int(self.nb) != self.nb or self.na < 1 or self.nb < 1:
            raise ValidationError(f"subchannel dimensions must be positive integers, got {self.na}x{self.nb}")

    @property
    def total(self) -> int:
        return self.na * self.nb


@dataclass(frozen=True, eq=False)
class BipartiteState:
    dims: BipartiteDims
    rho: DensityMatrix

    def __post_init__(self):
        if not isinstance(self.dims, BipartiteDims):
            object.__setattr__(self, "dims", BipartiteDims(*self.dims))
        if not isinstance(self.rho, DensityMatrix):
            object.__setattr__(self, "rho", DensityMatrix(self.rho))
        if self.rho.dim != self.dims.total:
            raise ValidationError(
                f"density matrix of dimension {self.rho.dim} does not match dims {self.dims.na}x{self.dims.nb}"
            )

    @property
    def matrix(self) -> np.ndarray:
        return self.rho.matrix

    def tensor(self) -> np.ndarray:
        """``rho[m, n, m', n']`` view of the matrix."""
        na, nb = self.dims.na, self.dims.nb
        return self.matrix.reshape(na, nb, na, nb)


@dataclass(frozen=True, eq=False)
class CoupledWeights:
    """Mixture weights ``p[(two_j, two_m)]`` over the coupled basis of ``l x s``."""

    l: SpinLabel
    s: SpinLabel
    weights: Mapping[tuple[int, int], float]

    def __post_init__(self):
        l = self.l if isinstance(self.l, SpinLabel) else SpinLabel(self.l)
        s = self.s if isinstance(self.s, SpinLabel) else SpinLabel(self.s)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "s", s)
        valid = set(coupled_labels(l.two_j, s.two_j))
        clean = {}
        for key, p in self.weights.items():
            key = (int(key[0]), int(key[1]))
            if key not in valid:
                raise ValidationError(
                    f"(j={fmt_half(key[0])}, m={fmt_half(key[1])}) is not a coupled state of "
                    f"l={l}, s={s}"
                )
            p = float(p)
            if not np.isfinite(p) or p < 0:
                raise ValidationError(f"weight for {key} must be finite and nonnegative")
            clean[key] = clean.get(key, 0.0) + p
        total = sum(clean.values())
        if abs(total - 1.0) > TRACE_TOL:
            raise ValidationError(f"coupled weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", clean)

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(self.l.dim, self.s.dim)

    @classmethod
    def uniform(cls, two_l: int, two_s: int) -> "CoupledWeights":
        labels = coupled_labels(two_l, two_s)
        return cls(SpinLabel(two_l), SpinLabel(two_s), {k: 1 / len(labels) for k in labels})

    def get(self, two_j: int, two_m: int) -> float:
        return self.weights.get((two_j, two_m), 0.0)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2 or np.any(t < -1e-12) or abs(t.sum() - 1.0) > TRACE_TOL:
            raise ValidationError("joint distribution must be a nonnegative table summing to 1")
        t = np.clip(t, 0.0, None)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def row_sums(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.table.sum(axis=0)


class Label(str, enum.Enum):
    PRODUCT = "Product"
    SEPARABLE_MIX = "SeparableMix"
    ENTANGLED = "Entangled"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ChannelClass:
    label: Label
    product_residual: float
    ppt_min_eigenvalue: float
    ppt_conclusive: bool

    def as_dict(self) -> dict:
        return {
            "label": self.label.value,
            "product_residual": self.product_residual,
            "ppt_min_eigenvalue": self.ppt_min_eigenvalue,
            "ppt_conclusive": self.ppt_conclusive,
        }


def induced_index(m: int, n: int, dims: BipartiteDims) -> int:
    if not (0 <= m < dims.na and 0 <= n < dims.nb):
        raise IndexError(f"({m}, {n}) outside {dims.na}x{dims.nb}")
    return m * dims.nb + n


def tensor_product(rho_a: DensityMatrix, rho_b: DensityMatrix) -> BipartiteState:
    return BipartiteState(BipartiteDims(rho_a.dim, rho_b.dim), DensityMatrix(np.kron(rho_a.matrix, rho_b.matrix)))


def partial_trace_b(state: BipartiteState) -> DensityMatrix:
    """Average over subchannel B: ``rho_a[m, m'] = sum_n rho[m n, m' n]``."""
    return DensityMatrix(np.einsum("anbn->ab", state.tensor()))


def partial_trace_a(state: BipartiteState) -> DensityMatrix:
    return DensityMatrix(np.einsum("mamb->ab", state.tensor()))


def coupled_mixture(cw: CoupledWeights) -> BipartiteState:
    table = coupled_basis(cw.l, cw.s)
    p = np.array([cw.get(*lab) for lab in table.labels])
    u = table.unitary
    rho = (u.T * p) @ u.conj()
    return BipartiteState(cw.dims, DensityMatrix(rho))


def _cg_squares(cw: CoupledWeights):
    """Yield ``(i_l, i_s, p_{j, m_l+m_s} C^2)`` for every contributing term."""
    tl, ts = cw.l.two_j, cw.s.two_j
    for (two_j, two_m), p in cw.weights.items():
        if p == 0:
            continue
        for il in range(tl + 1):
            two_ml = 2 * il - tl
            two_ms = two_m - two_ml
            if abs(two_ms) > ts:
                continue
            c = clebsch_gordan(tl, ts, two_j, two_ml, two_ms)
            yield il, (two_ms + ts) // 2, p * c * c


def joint_distribution(cw: CoupledWeights) -> JointDistribution:
    """Detection probabilities ``P[k][n] = sum_j p_{j,k+n} C^2_{j,k;n}``."""
    table = np.zeros((cw.l.dim, cw.s.dim))
    for il, is_, w in _cg_squares(cw):
        table[il, is_] += w
    return JointDistribution(table)


def subchannel_probs(cw: CoupledWeights) -> tuple[np.ndarray, np.ndarray]:
    pa = np.zeros(cw.l.dim)
    pb = np.zeros(cw.s.dim)
    for il, is_, w in _cg_squares(cw):
        pa[il] += w
        pb[is_] += w
    return pa, pb


def detection_distribution(state: BipartiteState) -> JointDistribution:
    """Induced-basis outcome probabilities of an arbitrary state (the diagonal)."""
    return JointDistribution(np.real(np.diag(state.matrix)).reshape(state.dims.na, state.dims.nb))


def parameter_counting(dims: BipartiteDims) -> dict[str, int]:
    na, nb = dims.na, dims.nb
    n = na * nb
    return {
        "pure_full": n - 1,
        "pure_product": n - na - nb + 1,
        "mixed_full": n * n - 1,
        "mixed_product_sum": (na * na - 1) + (nb * nb - 1),
        "missing": n * n + 1 - na * na - nb * nb,
    }


def partial_transpose_b(state: BipartiteState) -> np.ndarray:
    na, nb = state.dims.na, state.dims.nb
    return state.tensor().transpose(0, 3, 2, 1).reshape(na * nb, na * nb)


def ppt_min_eigenvalue(state: BipartiteState) -> float:
    return float(np.linalg.eigvalsh(partial_transpose_b(state))[0])


def product_residual(state: BipartiteState) -> float:
    """``max |rho - rho_a (x) rho_b|``."""
    ra, rb = partial_trace_b(state), partial_trace_a(state)
    return max_abs(state.matrix - np.kron(ra.matrix, rb.matrix))


def classify(state: BipartiteState, tol: float = DEFAULT_TOL) -> ChannelClass:
    if tol <= 0:
        raise ValueError("tol must be positive")
    residual = product_residual(state)
    ppt = ppt_min_eigenvalue(state)
    conclusive = (state.dims.na, state.dims.nb) in PPT_CONCLUSIVE
    if residual <= tol:
        label = Label.PRODUCT
    elif ppt < -tol:
        label = Label.ENTANGLED
    elif conclusive:
        label = Label.SEPARABLE_MIX
    else:
        label = Label.UNDETERMINED
    return ChannelClass(label, residual, ppt, conclusive)
