"""Ladder operators, Clebsch-Gordan coefficients and coupled bases.

Spins are handled as doubled integers (``two_j = 2 j``) so that half-integer
labels compare exactly. Basis index ``i`` of a ``2j+1`` dimensional space
carries magnetic number ``m = i - j``.

Conventions: ``[J+, J-] = 2 J3`` with ``J3 = diag(k - (1+N)/2)`` and
``J+ = sum_k sqrt((N-k) k) |k+1><k|`` (1-based ``k``). Clebsch-Gordan
coefficients follow the Condon-Shortley phase convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, sqrt

import numpy as np

from .core import DensityMatrix, StateVector, ValidationError, max_abs
from .info import ProbabilityDistribution

SCHMIDT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LadderSet:
    dim: int
    j_plus: np.ndarray
    j_minus: np.ndarray
    j3: np.ndarray


@dataclass(frozen=True, order=True)
class SpinLabel:
    two_j: int

    def __post_init__(self):
        if int(self.two_j) != self.two_j or self.two_j < 0:
            raise ValidationError(f"spin label must be a nonnegative doubled integer, got {self.two_j!r}")

    @property
    def value(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def __str__(self) -> str:
        return fmt_half(self.two_j)


def fmt_half(two_x: int) -> str:
    return str(two_x // 2) if two_x % 2 == 0 else f"{two_x}/2"


def ladder_ops(n: int) -> LadderSet:
    """Raising, lowering and diagonal operators on an ``n``-dimensional space."""
    if int(n) != n or n < 1:
        raise ValidationError(f"dimension must be a positive integer, got {n!r}")
    k = np.arange(1, n)  # 1-based source labels that can be raised
    j_plus = np.zeros((n, n), dtype=complex)
    j_plus[k, k - 1] = np.sqrt((n - k) * k)
    j3 = np.diag(np.arange(1, n + 1) - (1 + n) / 2).astype(complex)
    return LadderSet(n, j_plus, j_plus.conj().T.copy(), j3)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def casimir(ops: LadderSet) -> np.ndarray:
    jp, jm, j3 = ops.j_plus, ops.j_minus, ops.j3
    return j3 @ j3 + 0.5 * (jp @ jm + jm @ jp)


def ladder_residuals(ops: LadderSet) -> dict[str, float]:
    """Max-entry residuals of the defining algebra and the Casimir value."""
    jp, jm, j3 = ops.j_plus, ops.j_minus, ops.j3
    j = (ops.dim - 1) / 2
    c = casimir(ops)
    return {
        "[J3,J+]-J+": max_abs(commutator(j3, jp) - jp),
        "[J3,J-]+J-": max_abs(commutator(j3, jm) + jm),
        "[J+,J-]-2J3": max_abs(commutator(jp, jm) - 2 * j3),
        "J^2-j(j+1)I": max_abs(c - j * (j + 1) * np.eye(ops.dim)),
        "[J^2,J+]": max_abs(commutator(c, jp)),
        "[J^2,J-]": max_abs(commutator(c, jm)),
        "[J^2,J3]": max_abs(commutator(c, j3)),
        "J- - J+^dagger": max_abs(jm - jp.conj().T),
    }


def spectral_operator(n: int, n3: float, n_plus: complex, p_values) -> DensityMatrix:
    """Apply ``p`` to ``n3 J3 + conj(n_plus) J+ + n_plus J-`` by spectral calculus.

    The operator has eigenvalues ``m_k = k - (1+N)/2``; the eigenvector for
    ``m_k`` (ascending) receives weight ``p_values[k-1]``.
    """
    n3 = float(n3)
    n_plus = complex(n_plus)
    if abs(n3**2 + 4 * abs(n_plus) ** 2 - 1.0) > 1e-9:
        raise ValidationError("direction must satisfy n3^2 + 4|n_plus|^2 = 1")
    p = ProbabilityDistribution(p_values).probs
    if p.size != n:
        raise ValidationError(f"expected {n} p_values, got {p.size}")
    ops = ladder_ops(n)
    op = n3 * ops.j3 + n_plus.conjugate() * ops.j_plus + n_plus * ops.j_minus
    _, vecs = np.linalg.eigh(op)
    rho = (vecs * p) @ vecs.conj().T
    return DensityMatrix(rho)


# --- Clebsch-Gordan -------------------------------------------------------


def _check_label(two_j: int, two_m: int, what: str) -> None:
    if abs(two_m) > two_j or (two_j - two_m) % 2:
        raise ValidationError(f"invalid magnetic number {fmt_half(two_m)} for {what}={fmt_half(two_j)}")


def triangle_ok(two_a: int, two_b: int, two_c: int) -> bool:
    return abs(two_a - two_b) <= two_c <= two_a + two_b and (two_a + two_b + two_c) % 2 == 0


def clebsch_gordan(two_l: int, two_s: int, two_j: int, two_ml: int, two_ms: int) -> float:
    """``<l m_l; s m_s | j, m_l + m_s>`` from the Racah closed form.

    Arguments are doubled. Returns 0 when ``|m_l + m_s| > j``.
    """
    for x in (two_l, two_s, two_j):
        if int(x) != x or x < 0:
            raise ValidationError(f"spin labels must be nonnegative doubled integers, got {x!r}")
    if not triangle_ok(two_l, two_s, two_j):
        raise ValidationError(
            f"j={fmt_half(two_j)} violates the triangle rule for l={fmt_half(two_l)}, s={fmt_half(two_s)}"
        )
    _check_label(two_l, two_ml, "l")
    _check_label(two_s, two_ms, "s")
    two_m = two_ml + two_ms
    if abs(two_m) > two_j:
        return 0.0
    # half-sum/difference combinations below are all integers
    a = (two_l + two_s - two_j) // 2
    b = (two_l - two_ml) // 2
    c = (two_s + two_ms) // 2
    d = (two_j - two_s + two_ml) // 2
    e = (two_j - two_l - two_ms) // 2
    f = factorial
    total = Fraction(0)
    for k in range(max(0, -d, -e), min(a, b, c) + 1):
        total += Fraction((-1) ** k, f(k) * f(a - k) * f(b - k) * f(c - k) * f(d + k) * f(e + k))
    if total == 0:
        return 0.0
    pref = Fraction(
        (two_j + 1)
        * f((two_j + two_l - two_s) // 2)
        * f((two_j - two_l + two_s) // 2)
        * f(a)
        * f((two_j + two_m) // 2)
        * f((two_j - two_m) // 2)
        * f((two_l - two_ml) // 2)
        * f((two_l + two_ml) // 2)
        * f((two_s - two_ms) // 2)
        * f((two_s + two_ms) // 2),
        f((two_l + two_s + two_j) // 2 + 1),
    )
    mag = sqrt(float(pref * total * total))
    return mag if total > 0 else -mag


@dataclass(frozen=True, eq=False)
class CGTable:
    """Coupled basis of ``l x s`` expressed in the induced basis.

    ``unitary[r]`` is coupled vector ``labels[r] = (two_j, two_m)`` written in
    the induced basis ``|l, m_l> (x) |s, m_s>`` with flat index
    ``(m_l + l) * (2s + 1) + (m_s + s)``. Rows are ordered by descending j,
    then descending m.
    """

    l: SpinLabel
    s: SpinLabel
    coefficients: dict
    labels: tuple
    unitary: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return self.l.dim, self.s.dim

    def vector(self, two_j: int, two_m: int) -> StateVector:
        return StateVector(self.unitary[self.labels.index((two_j, two_m))])

    def stretch_rows(self) -> list[int]:
        top = self.l.two_j + self.s.two_j
        return [self.labels.index((top, top)), self.labels.index((top, -top))]


def coupled_labels(two_l: int, two_s: int) -> list[tuple[int, int]]:
    return [
        (two_j, two_m)
        for two_j in range(two_l + two_s, abs(two_l - two_s) - 1, -2)
        for two_m in range(two_j, -two_j - 1, -2)
    ]


def coupled_basis(l: SpinLabel | int, s: SpinLabel | int) -> CGTable:
    """Clebsch-Gordan table and induced-to-coupled unitary.

    The closed form is valid for either ordering of ``l`` and ``s``; no factor
    swap is needed when ``s > l``.
    """
    l = l if isinstance(l, SpinLabel) else SpinLabel(l)
    s = s if isinstance(s, SpinLabel) else SpinLabel(s)
    nl, ns = l.dim, s.dim
    labels = coupled_labels(l.two_j, s.two_j)
    coeffs: dict = {}
    u = np.zeros((nl * ns, nl * ns))
    for row, (two_j, two_m) in enumerate(labels):
        for il in range(nl):
            two_ml = 2 * il - l.two_j
            two_ms = two_m - two_ml
            if abs(two_ms) > s.two_j:
                continue
            ims = (two_ms + s.two_j) // 2
            c = clebsch_gordan(l.two_j, s.two_j, two_j, two_ml, two_ms)
            coeffs[(two_j, two_ml, two_ms)] = c
            u[row, il * ns + ims] = c
    return CGTable(l, s, coeffs, tuple(labels), u.astype(complex))


def composed_ladder(two_l: int, two_s: int) -> LadderSet:
    """Total ladder operators ``L (x) I + I (x) S`` on the induced space."""
    lo, so = ladder_ops(two_l + 1), ladder_ops(two_s + 1)
    il, is_ = np.eye(two_l + 1), np.eye(two_s + 1)

    def tot(a, b):
        return np.kron(a, is_) + np.kron(il, b)

    return LadderSet(
        (two_l + 1) * (two_s + 1),
        tot(lo.j_plus, so.j_plus),
        tot(lo.j_minus, so.j_minus),
        tot(lo.j3, so.j3),
    )


def schmidt_rank(v: StateVector | np.ndarray, dims: tuple[int, int]) -> tuple[int, np.ndarray]:
    """Number of Schmidt coefficients above 1e-9, and the coefficients."""
    amps = v.amplitudes if isinstance(v, StateVector) else np.asarray(v, dtype=complex)
    na, nb = dims
    if amps.size != na * nb:
        raise ValidationError(f"vector of dimension {amps.size} does not split as {na}x{nb}")
    sv = np.linalg.svd(amps.reshape(na, nb), compute_uv=False)
    return int(np.sum(sv > SCHMIDT_TOL)), sv
