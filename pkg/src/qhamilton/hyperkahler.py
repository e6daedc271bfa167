"""Flat hyper-Kahler model on R^(4n) = H^n.

Coordinates are grouped by quaternionic slot: index ``4k + 0`` is the real
part of the k-th quaternion and ``4k + 1 .. 4k + 3`` its imaginary parts.
The complex structures act by LEFT multiplication by the units, which makes
each tangent space a left quaternionic module. The metric is the Euclidean
identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidDimension, NotUnitImaginary
from .exterior import KForm
from .quaternion import ONE, UNITS, Quaternion, UnitTriple, qmul

_UNIT_TOL = 1e-12


def left_multiplication_matrix(u: Quaternion) -> np.ndarray:
    """4x4 matrix of ``q -> u q`` in the basis 1, i1, i2, i3."""
    basis = (ONE,) + UNITS
    return np.column_stack([qmul(u, e).as_array() for e in basis])


@dataclass(frozen=True)
class HyperKahlerStructure:
    """Metric and complex-structure triple on R^(4n).

    Attributes:
        n: quaternionic dimension.
        J: the three 4n x 4n complex structures.
        metric: the Gram matrix of g (identity for the flat model).
    """

    n: int
    J: tuple[np.ndarray, np.ndarray, np.ndarray]
    metric: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 4 * self.n

    def _vector(self, Y) -> np.ndarray:
        Y = np.asarray(Y, dtype=float)
        if Y.shape != (self.dim,):
            raise DimensionMismatch(f"expected a vector of length {self.dim}, got shape {Y.shape}")
        return Y

    def g(self, X, Y) -> float:
        return float(self._vector(X) @ self.metric @ self._vector(Y))

    def act(self, q: Quaternion, Y) -> np.ndarray:
        """Left action ``q Y = t Y + x^a J_a Y``."""
        Y = self._vector(Y)
        return q.t * Y + q.x1 * (self.J[0] @ Y) + q.x2 * (self.J[1] @ Y) + q.x3 * (self.J[2] @ Y)

    def complex_structure_of_unit(self, u: Quaternion) -> np.ndarray:
        """``J_u = u^1 J_1 + u^2 J_2 + u^3 J_3`` for a unit imaginary ``u``."""
        if abs(u.t) > _UNIT_TOL or abs(u.norm() - 1.0) > _UNIT_TOL:
            raise NotUnitImaginary(f"{u!r} is not a unit imaginary quaternion")
        return u.x1 * self.J[0] + u.x2 * self.J[1] + u.x3 * self.J[2]

    def two_form(self, Jm: np.ndarray) -> KForm:
        """The 2-form ``omega(X, Y) = g(J X, Y)`` of a complex structure."""
        W = (self.metric @ Jm).T  # W[a, b] = g(J e_a, e_b)
        m = self.dim
        return KForm(m, 2, {(a, b): W[a, b] for a in range(m) for b in range(a + 1, m)})

    def symplectic_form(self, alpha: int) -> KForm:
        """omega_alpha for alpha in 1..3."""
        if alpha not in (1, 2, 3):
            raise ValueError(f"structure index must be 1, 2 or 3, got {alpha}")
        return self.two_form(self.J[alpha - 1])

    def symplectic_forms(self) -> tuple[KForm, KForm, KForm]:
        return tuple(self.symplectic_form(a) for a in (1, 2, 3))

    def rotated(self, triple: UnitTriple) -> "HyperKahlerStructure":
        """Structure whose complex structures are ``J_{j_a} = sum_b c[a][b] J_b``."""
        c = triple.c
        J = tuple(sum(c[a, b] * self.J[b] for b in range(3)) for a in range(3))
        return HyperKahlerStructure(self.n, J, self.metric)

    def relation_defects(self) -> dict[str, float]:
        """Max-entry residuals of the quaternionic relations and g-compatibility."""
        J1, J2, J3 = self.J
        eye = np.eye(self.dim)
        out = {
            "J1^2+I": np.abs(J1 @ J1 + eye).max(),
            "J2^2+I": np.abs(J2 @ J2 + eye).max(),
            "J1J2+J2J1": np.abs(J1 @ J2 + J2 @ J1).max(),
            "J3-J1J2": np.abs(J3 - J1 @ J2).max(),
        }
        for a, Ja in enumerate(self.J, 1):
            out[f"J{a}^T g J{a} - g"] = np.abs(Ja.T @ self.metric @ Ja - self.metric).max()
            out[f"J{a}^T + J{a}"] = np.abs(Ja.T + Ja).max()
        return {k: float(v) for k, v in out.items()}


def build_structure(n: int) -> HyperKahlerStructure:
    """Flat structure on R^(4n) with block-diagonal left multiplications."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InvalidDimension(f"quaternionic dimension must be a positive integer, got {n!r}")
    n = int(n)
    J = []
    for u in UNITS:
        M = np.kron(np.eye(n), left_multiplication_matrix(u))
        M.setflags(write=False)
        J.append(M)
    metric = np.eye(4 * n)
    metric.setflags(write=False)
    return HyperKahlerStructure(n, tuple(J), metric)
