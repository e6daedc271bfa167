"""Sparse real polynomials on R^m with analytic gradients."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch


class ScalarField:
    """A polynomial ``sum_k c_k prod_a x_a^(e_ka)``.

    Terms with equal exponent vectors are merged and zero coefficients
    dropped, so two fields representing the same polynomial compare equal.
    """

    def __init__(self, dim: int, terms: Iterable[tuple[float, Sequence[int]]] = ()):
        self.dim = int(dim)
        merged: dict[tuple[int, ...], float] = {}
        for coeff, exps in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.dim:
                raise DimensionMismatch(f"exponent vector {exps} has length {len(exps)}, expected {self.dim}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            merged[exps] = merged.get(exps, 0.0) + float(coeff)
        self.terms = {e: c for e, c in sorted(merged.items()) if c != 0.0}
        if self.terms:
            self._E = np.array(list(self.terms), dtype=np.int64)
            self._c = np.array(list(self.terms.values()))
        else:
            self._E = np.zeros((0, self.dim), dtype=np.int64)
            self._c = np.zeros(0)

    @classmethod
    def zero(cls, dim: int) -> "ScalarField":
        return cls(dim)

    @classmethod
    def half_square_norm(cls, dim: int, indices: Iterable[int] | None = None) -> "ScalarField":
        """``1/2 sum x_a^2`` over ``indices`` (all coordinates by default)."""
        idx = range(dim) if indices is None else indices
        terms = []
        for a in idx:
            e = [0] * dim
            e[a] = 2
            terms.append((0.5, e))
        return cls(dim, terms)

    def __iter__(self):
        return iter((c, e) for e, c in self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __add__(self, other: "ScalarField") -> "ScalarField":
        self._check_dim(other.dim)
        return ScalarField(self.dim, list(self) + list(other))

    def __mul__(self, s: float) -> "ScalarField":
        return ScalarField(self.dim, [(s * c, e) for c, e in self])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return int(self._E.sum(axis=1).max()) if self.terms else 0

    def max_variable_degree(self) -> int:
        return int(self._E.max()) if self.terms else 0

    def _check_dim(self, m: int):
        if m != self.dim:
            raise DimensionMismatch(f"field on R^{self.dim} given a point in R^{m}")

    def _point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise DimensionMismatch(f"field on R^{self.dim} given a point of shape {p.shape}")
        return p

    def __call__(self, p) -> float:
        return self.evaluate(p)

    def evaluate(self, p) -> float:
        p = self._point(p)
        if not self.terms:
            return 0.0
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.prod(p ** self._E, axis=1) @ self._c)

    def gradient(self, p) -> np.ndarray:
        p = self._point(p)
        g = np.zeros(self.dim)
        if not self.terms:
            return g
        with np.errstate(over="ignore", invalid="ignore"):
            for a in range(self.dim):
                ea = self._E[:, a]
                mask = ea > 0
                if not mask.any():
                    continue
                E = self._E[mask].copy()
                E[:, a] -= 1
                g[a] = np.prod(p ** E, axis=1) @ (self._c[mask] * ea[mask])
        return g

    def partial(self, a: int) -> "ScalarField":
        """The polynomial ``d/dx_a`` of this field."""
        terms = []
        for c, e in self:
            if e[a] > 0:
                e2 = list(e)
                e2[a] -= 1
                terms.append((c * e[a], e2))
        return ScalarField(self.dim, terms)

    def to_spec(self) -> dict:
        return {"terms": [{"coeff": c, "exponents": list(e)} for c, e in self]}

    def __repr__(self):
        if not self.terms:
            return f"ScalarField(dim={self.dim}, 0)"
        parts = []
        for c, e in self:
            mono = "*".join(f"x{a}" + (f"^{k}" if k > 1 else "") for a, k in enumerate(e) if k)
            parts.append(f"{c:g}" + (f"*{mono}" if mono else ""))
        return f"ScalarField(dim={self.dim}, {' + '.join(parts)})"


def monomial(dim: int, coeff: float = 1.0, **powers: int) -> ScalarField:
    """Convenience constructor: ``monomial(4, 2.0, x0=1, x2=3)``."""
    e = [0] * dim
    for name, k in powers.items():
        e[int(name.lstrip("x"))] = k
    return ScalarField(dim, [(coeff, e)])


def random_field(rng: np.random.Generator, dim: int, max_degree: int = 3,
                 max_terms: int = 6, coeff_range: float = 1.0) -> ScalarField:
    """Random polynomial of total degree <= max_degree, coefficients uniform."""
    n_terms = int(rng.integers(1, max_terms + 1))
    terms = []
    for _ in range(n_terms):
        deg = int(rng.integers(0, max_degree + 1))
        e = np.zeros(dim, dtype=int)
        for a in rng.integers(0, dim, size=deg):
            e[a] += 1
        terms.append((float(rng.uniform(-coeff_range, coeff_range)), e))
    return ScalarField(dim, terms)
