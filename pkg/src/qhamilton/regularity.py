"""Quaternion-valued 1-forms, right regularity and completion.

A quaternion-valued 1-form ``theta = theta0 + theta^a i_a`` on R^(4n) is held
as four real coefficient rows. Regularity of ``theta`` is the vanishing of

    D(Y) = theta(Y) + sum_a theta(i_a Y) i_a

for all Y, where ``i_a Y`` is the left action of the structure. ``D`` is
quaternionic anti-linear, ``D(qY) = D(Y) conj(q)``, so testing the basis is
enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NotImaginary
from .hyperkahler import HyperKahlerStructure
from .polynomial import ScalarField
from .quaternion import UNITS, Quaternion, qmul

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class QForm:
    """Quaternion-valued 1-form.

    Attributes:
        comp0: coefficients of the real part, length 4n.
        comp: 3 x 4n coefficients of the parts along i1, i2, i3.
    """

    comp0: np.ndarray
    comp: np.ndarray

    def __post_init__(self):
        comp0 = np.asarray(self.comp0, dtype=float)
        comp = np.asarray(self.comp, dtype=float)
        if comp0.ndim != 1 or comp.shape != (3, comp0.size):
            raise DimensionMismatch(f"QForm components of shapes {comp0.shape} and {comp.shape}")
        object.__setattr__(self, "comp0", comp0)
        object.__setattr__(self, "comp", comp)

    @classmethod
    def from_rows(cls, rows) -> "QForm":
        """Build from a 4 x m array whose rows are the 1, i1, i2, i3 parts."""
        rows = np.asarray(rows, dtype=float)
        return cls(rows[0], rows[1:])

    @classmethod
    def imaginary(cls, comp) -> "QForm":
        comp = np.asarray(comp, dtype=float)
        return cls(np.zeros(comp.shape[1]), comp)

    @classmethod
    def zero(cls, dim: int) -> "QForm":
        return cls(np.zeros(dim), np.zeros((3, dim)))

    @property
    def dim(self) -> int:
        return self.comp0.size

    @property
    def rows(self) -> np.ndarray:
        return np.vstack([self.comp0, self.comp])

    def is_imaginary(self) -> bool:
        return not np.any(self.comp0)

    def __add__(self, other: "QForm") -> "QForm":
        return QForm(self.comp0 + other.comp0, self.comp + other.comp)

    def __mul__(self, s: float) -> "QForm":
        return QForm(s * self.comp0, s * self.comp)

    __rmul__ = __mul__

    def with_real_part(self, comp0) -> "QForm":
        return QForm(np.asarray(comp0, dtype=float), self.comp)


def evaluate(theta: QForm, Y) -> Quaternion:
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (theta.dim,):
        raise DimensionMismatch(f"QForm on R^{theta.dim} evaluated on vector of shape {Y.shape}")
    return Quaternion.from_array(theta.rows @ Y)


def _check(s: HyperKahlerStructure, theta: QForm):
    if theta.dim != s.dim:
        raise DimensionMismatch(f"QForm on R^{theta.dim} with a structure on R^{s.dim}")


def regularity_defect(s: HyperKahlerStructure, theta: QForm, Y,
                      units: Sequence[Quaternion] = UNITS) -> Quaternion:
    """``theta(Y) + sum_a theta(u_a Y) u_a`` for the unit triple ``units``."""
    _check(s, theta)
    out = evaluate(theta, Y)
    for u in units:
        out = out + qmul(evaluate(theta, s.act(u, Y)), u)
    return out


def unit_sum(s: HyperKahlerStructure, theta: QForm, Y, units: Sequence[Quaternion] = UNITS) -> Quaternion:
    """``sum_a theta(u_a Y) u_a``; independent of the admissible triple chosen."""
    _check(s, theta)
    out = Quaternion()
    for u in units:
        out = out + qmul(evaluate(theta, s.act(u, Y)), u)
    return out


def max_defect(s: HyperKahlerStructure, theta: QForm) -> float:
    """Largest defect norm over the coordinate basis."""
    eye = np.eye(s.dim)
    return max(regularity_defect(s, theta, eye[b]).norm() for b in range(s.dim))


def is_regular(s: HyperKahlerStructure, theta: QForm, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return max_defect(s, theta) <= tol


def satisfies_component_condition(s: HyperKahlerStructure, theta: QForm, tol: float = DEFAULT_TOL) -> bool:
    """The componentwise criterion ``theta0(e_b) = sum_a theta^a(i_a e_b)``."""
    _check(s, theta)
    lhs = theta.comp0
    rhs = sum(s.J[a].T @ theta.comp[a] for a in range(3))
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


def complete(s: HyperKahlerStructure, xi: QForm) -> np.ndarray:
    """Real 1-form ``r`` with ``r + xi`` regular, for imaginary-valued ``xi``.

    ``r(Y) = sum_a xi^a(i_a Y)``; returned as its coefficient vector.

    Raises:
        NotImaginary: ``xi`` has a nonzero real part.
    """
    _check(s, xi)
    if not xi.is_imaginary():
        raise NotImaginary("completion is defined for imaginary-valued 1-forms only")
    eye = np.eye(s.dim)
    r = np.zeros(s.dim)
    for b in range(s.dim):
        r[b] = sum(xi.comp[a] @ s.act(UNITS[a], eye[b]) for a in range(3))
    return r


@dataclass(frozen=True)
class QuaternionicPolynomialFunction:
    """A polynomial map H -> H given by its 1, i1, i2, i3 components on R^4."""

    parts: tuple[ScalarField, ScalarField, ScalarField, ScalarField]

    def __post_init__(self):
        if len(self.parts) != 4 or any(f.dim != 4 for f in self.parts):
            raise DimensionMismatch("a function H -> H needs four scalar fields on R^4")

    def __call__(self, p) -> Quaternion:
        return Quaternion.from_array([f(p) for f in self.parts])

    def partial(self, a: int, p) -> Quaternion:
        return Quaternion.from_array([f.gradient(p)[a] for f in self.parts])

    def differential(self, p) -> QForm:
        """``d phi`` at ``p`` as a quaternion-valued 1-form."""
        return QForm.from_rows(np.vstack([f.gradient(p) for f in self.parts]))


def fueter_defect(phi: QuaternionicPolynomialFunction, p) -> Quaternion:
    """``d phi/dt + sum_a (d phi/dx^a) i_a`` at ``p`` (right regularity)."""
    grads = np.vstack([f.gradient(p) for f in phi.parts])  # rows: parts, cols: variables
    out = Quaternion.from_array(grads[:, 0])
    for a, u in enumerate(UNITS, 1):
        out = out + qmul(Quaternion.from_array(grads[:, a]), u)
    return out
