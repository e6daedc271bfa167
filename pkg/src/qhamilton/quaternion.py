"""Quaternion arithmetic and triples of imaginary units.

A quaternion ``t + x1*i1 + x2*i2 + x3*i3`` is stored as four floats. The
units obey ``i1*i1 = i2*i2 = i3*i3 = -1`` and ``i1*i2 = i3`` (cyclically),
distinct units anticommute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonOrthogonal, OrientationReversing, TripleInconsistent

ORTHOGONALITY_TOL = 1e-12


@dataclass(frozen=True)
class Quaternion:
    t: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "Quaternion":
        t, x1, x2, x3 = (float(v) for v in a)
        return cls(t, x1, x2, x3)

    @classmethod
    def imaginary(cls, v: Sequence[float]) -> "Quaternion":
        """Pure imaginary quaternion with components ``v`` along i1, i2, i3."""
        x1, x2, x3 = (float(c) for c in v)
        return cls(0.0, x1, x2, x3)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x1, self.x2, self.x3])

    @property
    def vector(self) -> np.ndarray:
        """Imaginary components as a length-3 array."""
        return np.array([self.x1, self.x2, self.x3])

    def __iter__(self):
        return iter((self.t, self.x1, self.x2, self.x3))

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            other = Quaternion(float(other))
        return Quaternion(self.t + other.t, self.x1 + other.x1,
                          self.x2 + other.x2, self.x3 + other.x3)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.t, -self.x1, -self.x2, -self.x3)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        s = float(other)
        return Quaternion(self.t * s, self.x1 * s, self.x2 * s, self.x3 * s)

    def __rmul__(self, other):
        # only reached for real scalars on the left
        return self * other

    def __truediv__(self, other):
        s = float(other)
        return Quaternion(self.t / s, self.x1 / s, self.x2 / s, self.x3 / s)

    def conj(self) -> "Quaternion":
        return conj(self)

    def norm2(self) -> float:
        return self.t * self.t + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def __abs__(self) -> float:
        return self.norm()

    def is_imaginary(self, tol: float = 0.0) -> bool:
        return abs(self.t) <= tol

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol

    def __repr__(self):
        return f"Quaternion({self.t!r}, {self.x1!r}, {self.x2!r}, {self.x3!r})"


ONE = Quaternion(1.0)
I1 = Quaternion(0.0, 1.0)
I2 = Quaternion(0.0, 0.0, 1.0)
I3 = Quaternion(0.0, 0.0, 0.0, 1.0)
UNITS = (I1, I2, I3)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b``."""
    return Quaternion(
        a.t * b.t - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
        a.t * b.x1 + a.x1 * b.t + a.x2 * b.x3 - a.x3 * b.x2,
        a.t * b.x2 - a.x1 * b.x3 + a.x2 * b.t + a.x3 * b.x1,
        a.t * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.t,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.t, -q.x1, -q.x2, -q.x3)


@dataclass(frozen=True)
class UnitTriple:
    """Imaginary units ``j_a = sum_b c[a][b] i_b`` with ``j3 = j1 j2``."""

    j1: Quaternion
    j2: Quaternion
    j3: Quaternion
    c: np.ndarray

    @property
    def units(self) -> tuple[Quaternion, Quaternion, Quaternion]:
        return (self.j1, self.j2, self.j3)

    def __iter__(self):
        return iter(self.units)


def make_triple(c, tol: float = ORTHOGONALITY_TOL) -> UnitTriple:
    """Build the unit triple whose rows of ``c`` express it in ``i1, i2, i3``.

    Raises:
        NonOrthogonal: ``c.T @ c`` differs from the identity by more than ``tol``.
        OrientationReversing: ``det(c)`` is -1, so ``j3 = j1 j2`` cannot hold.
        TripleInconsistent: the constructed units fail the product check.
    """
    c = np.array(c, dtype=float)
    if c.shape != (3, 3):
        raise NonOrthogonal(f"triple matrix must be 3x3, got shape {c.shape}")
    if np.max(np.abs(c.T @ c - np.eye(3))) > tol:
        raise NonOrthogonal("triple matrix is not orthogonal (c^T c != I)")
    det = float(np.linalg.det(c))
    if abs(det - 1.0) > tol:
        raise OrientationReversing(f"triple matrix has det {det:+.3g}; j3 = j1 j2 requires det = +1")
    c.setflags(write=False)
    j1, j2, j3 = (Quaternion.imaginary(row) for row in c)
    for j in (j1, j2):
        if not qmul(j, j).isclose(-ONE, 10 * tol):
            raise TripleInconsistent("unit does not square to -1")
    if not qmul(j1, j2).isclose(j3, 10 * tol):
        raise TripleInconsistent("j1 * j2 != j3")
    return UnitTriple(j1, j2, j3, c)


IDENTITY_TRIPLE = make_triple(np.eye(3))


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed element of SO(3)."""
    from scipy.spatial.transform import Rotation

    return Rotation.random(random_state=rng).as_matrix()


def random_unit_imaginary(rng: np.random.Generator) -> Quaternion:
    v = rng.standard_normal(3)
    return Quaternion.imaginary(v / np.linalg.norm(v))
