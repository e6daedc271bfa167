"""Constant-coefficient alternating forms on R^m.

A k-form is stored sparsely as ``{(i_1, ..., i_k): c}`` with strictly
increasing multi-indices, meaning ``sum c * dx^{i_1} ^ ... ^ dx^{i_k}``.
The interior product inserts the vector into the first slot.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegreeMismatch, DegreeZero, DimensionMismatch, OddDegreeBase

PRUNE_TOL = 1e-14


def _sort_with_parity(idx: Sequence[int]) -> tuple[tuple[int, ...] | None, int]:
    """Sort a multi-index, returning (sorted, sign); (None, 0) on a repeat."""
    arr = list(idx)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(arr, arr[1:]):
        if a == b:
            return None, 0
    return tuple(arr), sign


class KForm:
    """An alternating ``degree``-form on R^``dim``.

    Instances are treated as immutable; every operation returns a new form.
    """

    __slots__ = ("dim", "degree", "_coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[tuple[int, ...], float] | None = None):
        if dim < 1:
            raise DimensionMismatch(f"ambient dimension must be positive, got {dim}")
        if not 0 <= degree <= dim:
            raise DegreeMismatch(f"degree {degree} outside 0..{dim}")
        self.dim = dim
        self.degree = degree
        clean: dict[tuple[int, ...], float] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"multi-index {idx} has length {len(idx)}, expected {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise DimensionMismatch(f"multi-index {idx} out of range for dim {dim}")
            key, sign = _sort_with_parity(idx)
            if key is None:
                continue
            clean[key] = clean.get(key, 0.0) + sign * float(c)
        self._coeffs = {k: v for k, v in clean.items() if abs(v) > PRUNE_TOL}

    @property
    def coeffs(self) -> dict[tuple[int, ...], float]:
        return dict(self._coeffs)

    def __getitem__(self, idx) -> float:
        return self._coeffs.get(tuple(idx), 0.0)

    def __len__(self):
        return len(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    def _check(self, other: "KForm"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"forms live on R^{self.dim} and R^{other.dim}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add a {self.degree}-form and a {other.degree}-form")
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return KForm(self.dim, self.degree, out)

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, s: float) -> "KForm":
        s = float(s)
        return KForm(self.dim, self.degree, {k: s * v for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> "KForm":
        return self * (1.0 / s)

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.dim, self.degree, self._coeffs) == (other.dim, other.degree, other._coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self._coeffs.items())))

    def allclose(self, other: "KForm", tol: float = 1e-12) -> bool:
        self._check(other)
        if self.degree != other.degree:
            return False
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def max_abs(self) -> float:
        return max((abs(v) for v in self._coeffs.values()), default=0.0)

    def __call__(self, *vectors) -> float:
        """Evaluate on ``degree`` vectors: sum of c_I times det of the I-rows."""
        if len(vectors) != self.degree:
            raise DegreeMismatch(f"{self.degree}-form evaluated on {len(vectors)} vectors")
        if self.degree == 0:
            return self[()]
        V = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
        if V.shape[0] != self.dim:
            raise DimensionMismatch(f"vectors of length {V.shape[0]} on R^{self.dim}")
        return float(sum(c * np.linalg.det(V[list(idx), :]) for idx, c in self._coeffs.items()))

    def to_vector(self) -> np.ndarray:
        """Coefficient array of a 1-form."""
        if self.degree != 1:
            raise DegreeMismatch("to_vector needs a 1-form")
        out = np.zeros(self.dim)
        for (i,), c in self._coeffs.items():
            out[i] = c
        return out

    def __repr__(self):
        if not self._coeffs:
            return f"KForm(dim={self.dim}, degree={self.degree}, 0)"
        terms = " + ".join(
            f"{c:g}*" + "^".join(f"dx{i}" for i in idx) if idx else f"{c:g}"
            for idx, c in sorted(self._coeffs.items())
        )
        return f"KForm(dim={self.dim}, degree={self.degree}, {terms})"


def zero_form(dim: int, degree: int) -> KForm:
    return KForm(dim, degree)


def constant(dim: int, value: float = 1.0) -> KForm:
    return KForm(dim, 0, {(): value})


def basis_form(dim: int, *indices: int) -> KForm:
    """``dx^{i_1} ^ ... ^ dx^{i_k}`` (indices in any order)."""
    return KForm(dim, len(indices), {tuple(indices): 1.0})


def one_form(coeffs: Iterable[float]) -> KForm:
    c = np.asarray(list(coeffs), dtype=float)
    return KForm(len(c), 1, {(i,): v for i, v in enumerate(c)})


def volume_form(dim: int) -> KForm:
    """The coordinate volume form ``dx^0 ^ ... ^ dx^{dim-1}``."""
    return KForm(dim, dim, {tuple(range(dim)): 1.0})


def wedge(a: KForm, b: KForm) -> KForm:
    a._check(b)
    deg = a.degree + b.degree
    if deg > a.dim:
        # the zero form of a degree above dim has no home; degree is clipped
        return KForm(a.dim, a.dim)
    out: dict[tuple[int, ...], float] = {}
    for ia, ca in a.items():
        sa = set(ia)
        for ib, cb in b.items():
            if sa.intersection(ib):
                continue
            key, sign = _sort_with_parity(ia + ib)
            out[key] = out.get(key, 0.0) + sign * ca * cb
    return KForm(a.dim, deg, out)


def wedge_power(omega: KForm, k: int) -> KForm:
    """``omega ^ ... ^ omega`` (k factors); k = 0 gives the constant 1."""
    if omega.degree % 2:
        raise OddDegreeBase(f"wedge powers need an even-degree base, got degree {omega.degree}")
    if k < 0:
        raise ValueError("wedge power exponent must be nonnegative")
    result = constant(omega.dim)
    for _ in range(k):
        result = wedge(result, omega)
    return result


def interior_product(X, rho: KForm) -> KForm:
    """Contraction ``X _| rho`` with X in the first slot."""
    X = np.asarray(X, dtype=float)
    if X.shape != (rho.dim,):
        raise DimensionMismatch(f"vector of length {X.size} on R^{rho.dim}")
    if rho.degree == 0:
        raise DegreeZero("cannot contract a vector with a 0-form")
    out: dict[tuple[int, ...], float] = {}
    for idx, c in rho.items():
        for j, i in enumerate(idx):
            if X[i] == 0.0:
                continue
            rest = idx[:j] + idx[j + 1:]
            out[rest] = out.get(rest, 0.0) + (-1) ** j * X[i] * c
    return KForm(rho.dim, rho.degree - 1, out)


def solve_contraction(Omega: KForm, rho: KForm) -> np.ndarray:
    """The unique X with ``X _| Omega = rho`` for the coordinate volume form.

    ``e_a _| Omega = (-1)^a dx^{omit a}``, so ``X^a = (-1)^a rho[omit a]``.
    """
    m = Omega.dim
    if Omega.degree != m or len(Omega) != 1 or Omega[tuple(range(m))] != 1.0:
        raise DegreeMismatch("solve_contraction expects the coordinate volume form")
    Omega._check(rho)
    if rho.degree != m - 1:
        raise DegreeMismatch(f"right-hand side must have degree {m - 1}, got {rho.degree}")
    X = np.zeros(m)
    full = tuple(range(m))
    for a in range(m):
        X[a] = (-1) ** a * rho[full[:a] + full[a + 1:]]
    return X


def two_form_matrix(omega: KForm) -> np.ndarray:
    """Antisymmetric matrix ``W[a, b] = omega(e_a, e_b)``."""
    if omega.degree != 2:
        raise DegreeMismatch("two_form_matrix needs a 2-form")
    W = np.zeros((omega.dim, omega.dim))
    for (a, b), c in omega.items():
        W[a, b] = c
        W[b, a] = -c
    return W


def multi_indices(dim: int, degree: int):
    """All strictly increasing multi-indices in lexicographic order."""
    from itertools import combinations

    return list(combinations(range(dim), degree))
