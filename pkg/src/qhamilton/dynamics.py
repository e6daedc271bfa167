"""Hyper-Hamiltonian vector fields and their integration.

For ``H = h^1 i1 + h^2 i2 + h^3 i3`` the field X is computed two ways:

* completion route: solve ``g(X, Y) = sum_a dh^a(i_a Y)`` for all Y, the
  right-hand side being the completion of the imaginary form ``dH``;
* volume route: solve ``X _| Omega = sum_a dh^a ^ omega_a^(2n-1) / (2n-1)!``.

Both give ``X = -sum_a J_a grad h^a`` and equal the sum of the three
classical fields ``X_a _| omega_a = dh^a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, NonFiniteState
from .exterior import KForm, one_form, solve_contraction, two_form_matrix, volume_form, wedge, wedge_power
from .hyperkahler import HyperKahlerStructure
from .polynomial import ScalarField
from .quaternion import Quaternion, UnitTriple
from .regularity import QForm, complete


@dataclass(frozen=True)
class HamiltonianField:
    """Imaginary-valued Hamiltonian ``H = h^a i_a``."""

    h: tuple[ScalarField, ScalarField, ScalarField]

    def __post_init__(self):
        h = tuple(self.h)
        if len(h) != 3:
            raise ValueError("a Hamiltonian needs exactly three components")
        if len({f.dim for f in h}) != 1:
            raise DimensionMismatch("Hamiltonian components live on different spaces")
        object.__setattr__(self, "h", h)

    @classmethod
    def along(cls, h: ScalarField, u: Quaternion) -> "HamiltonianField":
        """``H = h u`` for an imaginary quaternion ``u``."""
        return cls(tuple(c * h for c in u.vector))

    @classmethod
    def zero(cls, dim: int) -> "HamiltonianField":
        return cls((ScalarField(dim),) * 3)

    @property
    def dim(self) -> int:
        return self.h[0].dim

    def __call__(self, p) -> Quaternion:
        return Quaternion.imaginary([f(p) for f in self.h])

    def gradients(self, p) -> np.ndarray:
        """3 x m array whose rows are grad h^a(p)."""
        return np.vstack([f.gradient(p) for f in self.h])

    def differential(self, p) -> QForm:
        """``dH`` at ``p`` as an imaginary-valued 1-form."""
        return QForm.imaginary(self.gradients(p))

    def __add__(self, other: "HamiltonianField") -> "HamiltonianField":
        return HamiltonianField(tuple(a + b for a, b in zip(self.h, other.h)))

    def __mul__(self, s: float) -> "HamiltonianField":
        return HamiltonianField(tuple(s * f for f in self.h))

    __rmul__ = __mul__


def _check(s: HyperKahlerStructure, H: HamiltonianField, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if H.dim != s.dim or p.shape != (s.dim,):
        raise DimensionMismatch(
            f"structure on R^{s.dim}, Hamiltonian on R^{H.dim}, point of shape {p.shape}")
    return p


def field_qham(s: HyperKahlerStructure, H: HamiltonianField, p, fast: bool = False) -> np.ndarray:
    """Field X with ``X _| g`` equal to the completion of ``dH`` at ``p``.

    By default the metric system is solved; ``fast=True`` uses the closed
    form ``-sum_a J_a grad h^a``, valid because each J_a is g-antisymmetric.
    """
    p = _check(s, H, p)
    grads = H.gradients(p)
    if fast:
        return -sum(s.J[a] @ grads[a] for a in range(3))
    rhs = complete(s, QForm.imaginary(grads))
    return np.linalg.solve(s.metric, rhs)


_TOP_POWER_CACHE: dict[bytes, tuple[KForm, KForm, KForm]] = {}


def scaled_top_powers(s: HyperKahlerStructure) -> tuple[KForm, KForm, KForm]:
    """``omega_a^(2n-1) / (2n-1)!`` for each a, cached per structure."""
    key = b"".join(np.ascontiguousarray(J).tobytes() for J in s.J)
    if key not in _TOP_POWER_CACHE:
        k = 2 * s.n - 1
        _TOP_POWER_CACHE[key] = tuple(wedge_power(w, k) / math.factorial(k) for w in s.symplectic_forms())
    return _TOP_POWER_CACHE[key]


def field_gmham(s: HyperKahlerStructure, H: HamiltonianField, p) -> np.ndarray:
    """Field X solving ``X _| Omega = sum_a dh^a ^ omega_a^(2n-1) / (2n-1)!``."""
    p = _check(s, H, p)
    grads = H.gradients(p)
    rho = KForm(s.dim, s.dim - 1)
    for dh, top in zip(grads, scaled_top_powers(s)):
        rho = rho + wedge(one_form(dh), top)
    return solve_contraction(volume_form(s.dim), rho)


def classical_field(omega: KForm, dh) -> np.ndarray:
    """The X with ``omega(X, Y) = dh(Y)`` for all Y."""
    W = two_form_matrix(omega)
    return np.linalg.solve(W.T, np.asarray(dh, dtype=float))


@dataclass(frozen=True)
class Decomposition:
    X1: np.ndarray
    X2: np.ndarray
    X3: np.ndarray
    X: np.ndarray

    @property
    def parts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.X1, self.X2, self.X3)


def decompose(s: HyperKahlerStructure, H: HamiltonianField, p) -> Decomposition:
    """Split the field into the classical fields of ``(omega_a, h^a)``."""
    p = _check(s, H, p)
    grads = H.gradients(p)
    parts = [classical_field(w, g) for w, g in zip(s.symplectic_forms(), grads)]
    return Decomposition(parts[0], parts[1], parts[2], field_qham(s, H, p))


def rotate_hamiltonian(H: HamiltonianField, triple: UnitTriple) -> HamiltonianField:
    """Components of the same H with respect to ``triple``.

    From ``h^c = sum_b h'^b c[b][c]`` and ``c^T = c^-1`` one gets
    ``h'^b = sum_c c[b][c] h^c``.
    """
    c = triple.c
    new = []
    for b in range(3):
        f = ScalarField(H.dim)
        for k in range(3):
            if c[b, k] != 0.0:
                f = f + c[b, k] * H.h[k]
        new.append(f)
    return HamiltonianField(tuple(new))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    method: str
    dt: float

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


_METHODS = ("euler", "rk4")


def integrate(s: HyperKahlerStructure, H: HamiltonianField, x0, dt: float, steps: int,
              method: str = "rk4", vector_field: Optional[Callable] = None) -> Trajectory:
    """Fixed-step explicit integration of ``x' = X(x)``.

    Raises:
        NonFiniteState: a state component became NaN or infinite. The error
            carries the trajectory up to the last finite state.
    """
    x = _check(s, H, x0).copy()
    if not dt > 0:
        raise ValueError(f"step size must be positive, got {dt}")
    if steps < 0:
        raise ValueError(f"step count must be nonnegative, got {steps}")
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {_METHODS}")
    F = vector_field or (lambda y: field_qham(s, H, y))

    states = np.empty((steps + 1, s.dim))
    states[0] = x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            if method == "euler":
                x = x + dt * F(x)
            else:
                k1 = F(x)
                k2 = F(x + 0.5 * dt * k1)
                k3 = F(x + 0.5 * dt * k2)
                k4 = F(x + dt * k3)
                x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                partial = Trajectory(dt * np.arange(k + 1), states[: k + 1].copy(), method, dt)
                raise NonFiniteState(f"non-finite state at step {k + 1} (t = {dt * (k + 1):g})", partial)
            states[k + 1] = x
    return Trajectory(dt * np.arange(steps + 1), states, method, dt)


def single_unit_direction(H: HamiltonianField, tol: float = 1e-12):
    """If ``H = h u`` for a unit imaginary u, return ``(u, h)``, else None."""
    keys = sorted(set().union(*(f.terms for f in H.h)))
    if not keys:
        return None
    M = np.array([[f.terms.get(k, 0.0) for k in keys] for f in H.h])
    U, sv, Vt = np.linalg.svd(M, full_matrices=False)
    if sv[1] > tol * max(sv[0], 1.0):
        return None
    u = U[:, 0]
    h = ScalarField(H.dim, [(sv[0] * v, k) for v, k in zip(Vt[0], keys)])
    return Quaternion.imaginary(u), h


@dataclass
class DiagnosticsReport:
    h_values: np.ndarray  # samples x 3
    h_drift: list[float]
    route_max_defect: float
    decomposition_max_defect: float
    conserved_drift: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "h_drift": [float(v) for v in self.h_drift],
            "route_max_defect": float(self.route_max_defect),
            "decomposition_max_defect": float(self.decomposition_max_defect),
        }
        out.update(self.extra)
        return out


def route_defect(s: HyperKahlerStructure, H: HamiltonianField, p) -> float:
    """``|X_q - X_gm| / (1 + |X_q|)`` at ``p``."""
    xq = field_qham(s, H, p)
    xg = field_gmham(s, H, p)
    return float(np.linalg.norm(xq - xg) / (1.0 + np.linalg.norm(xq)))


def decomposition_defect(s: HyperKahlerStructure, H: HamiltonianField, p) -> float:
    """Worst of the sum residual and the per-structure classical residuals."""
    d = decompose(s, H, p)
    worst = float(np.max(np.abs(d.X1 + d.X2 + d.X3 - d.X)))
    grads = H.gradients(p)
    for w, Xa, g in zip(s.symplectic_forms(), d.parts, grads):
        # omega(X, e_b) = (W^T X)_b
        worst = max(worst, float(np.max(np.abs(two_form_matrix(w).T @ Xa - g))))
    return worst


def diagnostics(s: HyperKahlerStructure, H: HamiltonianField, traj: Trajectory) -> DiagnosticsReport:
    states = traj.states
    h_values = np.array([[f(x) for f in H.h] for x in states])
    h_drift = np.max(np.abs(h_values - h_values[0]), axis=0).tolist()
    route = max(route_defect(s, H, x) for x in states)
    decomp = max(decomposition_defect(s, H, x) for x in states)
    conserved = None
    su = single_unit_direction(H)
    if su is not None:
        _, h = su
        hv = np.array([h(x) for x in states])
        conserved = float(np.max(np.abs(hv - hv[0])))
    return DiagnosticsReport(h_values, h_drift, route, decomp, conserved)
