import numpy as np
from scipy.linalg import null_space

from qhamilton.polynomial import ScalarField
from qhamilton.regularity import QuaternionicPolynomialFunction, fueter_defect


def central_difference(f, p, step=1e-5):
    g = np.zeros_like(p)
    for a in range(p.size):
        e = np.zeros_like(p)
        e[a] = step
        g[a] = (f(p + e) - f(p - e)) / (2 * step)
    return g


def monomials(dim, max_degree):
    out = [()]
    from itertools import combinations_with_replacement
    for d in range(1, max_degree + 1):
        out.extend(combinations_with_replacement(range(dim), d))
    exps = []
    for m in out:
        e = [0] * dim
        for a in m:
            e[a] += 1
        exps.append(e)
    return exps


def function_from_coeffs(coeffs, exps):
    """coeffs is (4, len(exps)): part-by-monomial coefficient matrix."""
    parts = tuple(ScalarField(4, [(c, e) for c, e in zip(row, exps)]) for row in coeffs)
    return QuaternionicPolynomialFunction(parts)


def right_regular_basis(max_degree=2, seed=0):
    """Null space of the Fueter operator on polynomials of degree <= max_degree.

    The defect has degree < max_degree, so sampling it at enough generic
    points pins down the linear map.
    """
    exps = monomials(4, max_degree)
    nvar = 4 * len(exps)
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((3 * len(exps), 4))
    A = np.zeros((4 * len(points), nvar))
    for k in range(nvar):
        c = np.zeros(nvar)
        c[k] = 1.0
        phi = function_from_coeffs(c.reshape(4, -1), exps)
        A[:, k] = np.concatenate([fueter_defect(phi, p).as_array() for p in points])
    return null_space(A), exps
