import math

import numpy as np
import pytest

from qhamilton.dynamics import (HamiltonianField, decompose, diagnostics, field_gmham, field_qham, integrate,
                                rotate_hamiltonian, single_unit_direction)
from qhamilton.errors import DimensionMismatch, NonFiniteState
from qhamilton.exterior import two_form_matrix
from qhamilton.hyperkahler import build_structure
from qhamilton.polynomial import ScalarField, monomial
from qhamilton.quaternion import IDENTITY_TRIPLE, I1, I2, UNITS, Quaternion, make_triple, random_rotation
from qhamilton.verify import random_hamiltonian, random_point

S1 = build_structure(1)
S2 = build_structure(2)
ZERO4 = ScalarField(4)
P0 = np.array([1.0, 0.0, 0.0, 0.0])


def mixed_hamiltonian():
    return HamiltonianField((ScalarField.half_square_norm(4, [0, 1]), monomial(4, x0=1, x2=1), ZERO4))


def metric_system_solution(s, H, p):
    """Solve g(X, e_b) = sum_a dh^a(J_a e_b) by assembling the system explicitly."""
    grads = H.gradients(p)
    rhs = np.array([sum(grads[a] @ (s.J[a] @ e) for a in range(3)) for e in np.eye(s.dim)])
    return np.linalg.solve(s.metric, rhs)


def test_qham_examples():
    H = HamiltonianField.along(ScalarField.half_square_norm(4), I1)
    assert np.array_equal(field_qham(S1, H, P0), [0, -1, 0, 0])
    assert np.array_equal(field_qham(S1, mixed_hamiltonian(), P0), [1, -1, 0, 0])
    assert np.array_equal(field_qham(S1, HamiltonianField.zero(4), P0), np.zeros(4))


def test_gmham_examples():
    H = HamiltonianField((monomial(4, x0=1), ZERO4, ZERO4))
    rng = np.random.default_rng(0)
    for p in rng.standard_normal((5, 4)):
        assert np.array_equal(field_gmham(S1, H, p), [0, -1, 0, 0])
    assert np.array_equal(field_gmham(S1, mixed_hamiltonian(), P0), [1, -1, 0, 0])
    assert np.array_equal(field_gmham(S1, HamiltonianField.zero(4), P0), np.zeros(4))


@pytest.mark.parametrize("s", [S1, S2], ids=["n1", "n2"])
def test_closed_form_matches_linear_system(s):
    rng = np.random.default_rng(s.n)
    for _ in range(50):
        H = random_hamiltonian(rng, s.dim)
        p = random_point(rng, s.dim)
        X = metric_system_solution(s, H, p)
        assert np.allclose(field_qham(s, H, p), X, atol=1e-13)
        assert np.allclose(field_qham(s, H, p, fast=True), X, atol=1e-13)


@pytest.mark.parametrize("s", [S1, S2], ids=["n1", "n2"])
def test_completion_consistency(s):
    from qhamilton.regularity import complete

    rng = np.random.default_rng(5 + s.n)
    for _ in range(20):
        H = random_hamiltonian(rng, s.dim)
        p = random_point(rng, s.dim)
        rhs_direct = np.array([sum(H.gradients(p)[a] @ s.act(u, e) for a, u in enumerate(UNITS))
                               for e in np.eye(s.dim)])
        assert np.allclose(complete(s, H.differential(p)), rhs_direct, atol=1e-13)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        field_qham(S1, HamiltonianField.zero(8), np.zeros(8))
    with pytest.raises(DimensionMismatch):
        field_gmham(S1, HamiltonianField.zero(4), np.zeros(8))


def test_decompose_examples():
    d = decompose(S1, mixed_hamiltonian(), P0)
    assert np.array_equal(d.X1, [0, -1, 0, 0])
    assert np.array_equal(d.X2, [1, 0, 0, 0])
    assert np.array_equal(d.X3, np.zeros(4))
    d0 = decompose(S1, HamiltonianField.zero(4), P0)
    assert all(not np.any(x) for x in d0.parts + (d0.X,))


def test_single_unit_decomposition():
    rng = np.random.default_rng(1)
    h = ScalarField(4, [(1.0, [1, 1, 0, 0]), (-0.5, [0, 0, 3, 0])])
    p = rng.standard_normal(4)
    d = decompose(S1, HamiltonianField((h, ZERO4, ZERO4)), p)
    assert not np.any(d.X2) and not np.any(d.X3)
    W = two_form_matrix(S1.symplectic_form(1))
    assert np.allclose(W.T @ d.X1, h.gradient(p))


def test_rotate_hamiltonian_examples():
    H = random_hamiltonian(np.random.default_rng(2), 4)
    assert rotate_hamiltonian(H, IDENTITY_TRIPLE) == H
    t = make_triple([[0, 1, 0], [-1, 0, 0], [0, 0, 1]])
    Hr = rotate_hamiltonian(H, t)
    assert Hr.h[0] == H.h[1]
    assert Hr.h[1] == -H.h[0]
    assert Hr.h[2] == H.h[2]


def test_rotated_components_represent_same_quaternion():
    rng = np.random.default_rng(3)
    for _ in range(20):
        H = random_hamiltonian(rng, 4)
        t = make_triple(random_rotation(rng))
        Hr = rotate_hamiltonian(H, t)
        p = random_point(rng, 4)
        q = sum((f(p) * j for f, j in zip(Hr.h, t.units)), Quaternion())
        assert (q - H(p)).norm() <= 1e-13


def test_linearity_in_h():
    rng = np.random.default_rng(4)
    for s in (S1, S2):
        H1, H2 = random_hamiltonian(rng, s.dim), random_hamiltonian(rng, s.dim)
        p = random_point(rng, s.dim)
        a, b = 1.7, -0.4
        lhs = field_qham(s, a * H1 + b * H2, p)
        assert np.allclose(lhs, a * field_qham(s, H1, p) + b * field_qham(s, H2, p), atol=1e-12)
        assert np.allclose(field_gmham(s, a * H1 + b * H2, p), lhs, atol=1e-12)


def test_integrate_zero_steps_and_zero_field():
    H = HamiltonianField.along(ScalarField.half_square_norm(4), I1)
    tr = integrate(S1, H, P0, 1e-2, 0)
    assert len(tr) == 1 and np.array_equal(tr.states[0], P0)
    tr = integrate(S1, HamiltonianField.zero(4), P0, 0.1, 10)
    assert np.all(tr.states == P0)
    assert np.allclose(tr.times, 0.1 * np.arange(11))


def test_integrate_rejects_bad_input():
    H = HamiltonianField.zero(4)
    with pytest.raises(ValueError):
        integrate(S1, H, P0, 0.0, 5)
    with pytest.raises(ValueError):
        integrate(S1, H, P0, 0.1, 5, method="leapfrog")
    with pytest.raises(DimensionMismatch):
        integrate(S1, H, np.zeros(3), 0.1, 5)


def test_harmonic_period():
    H = HamiltonianField.along(ScalarField.half_square_norm(4), I1)
    x0 = np.array([1.0, 0.0, 0.3, -0.2])
    steps = 6283
    tr = integrate(S1, H, x0, 2 * math.pi / steps, steps, "rk4")
    assert np.max(np.abs(tr.final - x0)) <= 1e-9
    # exact flow is exp(-t J1) x0
    t = tr.times[1000]
    J = S1.J[0]
    exact = math.cos(t) * x0 - math.sin(t) * (J @ x0)
    assert np.max(np.abs(tr.states[1000] - exact)) <= 1e-12


def test_rk4_fourth_order_euler_first_order():
    H = HamiltonianField.along(ScalarField.half_square_norm(4), I1)
    T = 1.0
    exact = math.cos(T) * P0 - math.sin(T) * (S1.J[0] @ P0)
    errs = {}
    for method in ("euler", "rk4"):
        errs[method] = [np.linalg.norm(integrate(S1, H, P0, T / k, k, method).final - exact) for k in (50, 100)]
    assert 1.8 < errs["euler"][0] / errs["euler"][1] < 2.2
    assert 14 < errs["rk4"][0] / errs["rk4"][1] < 18


def test_blow_up_keeps_partial_trajectory():
    H = HamiltonianField((monomial(4, x0=2, x1=1), ZERO4, ZERO4))
    with pytest.raises(NonFiniteState) as info:
        integrate(S1, H, P0, 0.5, 200)
    tr = info.value.trajectory
    assert 1 <= len(tr) < 201
    assert np.all(np.isfinite(tr.states))
    assert np.array_equal(tr.states[0], P0)


def test_single_unit_detection():
    rng = np.random.default_rng(6)
    h = random_hamiltonian(rng, 4).h[0]
    u = Quaternion.imaginary([0.6, 0.0, -0.8])
    got = single_unit_direction(HamiltonianField.along(h, u))
    assert got is not None
    v, g = got
    # sign of u is a free choice
    sign = np.sign(v.vector @ u.vector)
    assert np.allclose(sign * v.vector, u.vector)
    p = rng.standard_normal(4)
    assert abs(sign * g(p) - h(p)) <= 1e-12
    assert single_unit_direction(random_hamiltonian(rng, 4)) is None


def test_diagnostics_harmonic_and_zero():
    H = HamiltonianField.along(ScalarField.half_square_norm(4), I2)
    tr = integrate(S1, H, np.array([0.5, 0.5, -0.5, 0.1]), 1e-2, 200)
    rep = diagnostics(S1, H, tr)
    assert rep.conserved_drift <= 1e-10
    assert rep.route_max_defect <= 1e-9
    assert rep.decomposition_max_defect <= 1e-12
    assert rep.h_values.shape == (201, 3)
    z = diagnostics(S1, HamiltonianField.zero(4), integrate(S1, HamiltonianField.zero(4), P0, 0.1, 5))
    assert z.h_drift == [0, 0, 0] and z.route_max_defect == 0 and z.decomposition_max_defect == 0
    assert set(z.to_json()) == {"h_drift", "route_max_defect", "decomposition_max_defect"}


def test_route_agreement_along_trajectory_n2():
    rng = np.random.default_rng(8)
    H = random_hamiltonian(rng, 8, max_degree=2)
    tr = integrate(S2, H, random_point(rng, 8), 1e-2, 50)
    assert diagnostics(S2, H, tr).route_max_defect <= 1e-9
