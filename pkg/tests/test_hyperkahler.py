import math

import numpy as np
import pytest

from qhamilton.errors import DimensionMismatch, InvalidDimension, NotUnitImaginary
from qhamilton.exterior import basis_form, volume_form, wedge_power
from qhamilton.hyperkahler import build_structure
from qhamilton.quaternion import I1, I2, I3, ONE, Quaternion, make_triple, qmul, random_rotation

E = np.eye(4)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quaternionic_relations(n):
    s = build_structure(n)
    assert max(s.relation_defects().values()) <= 1e-13


def test_j1_table():
    J1 = build_structure(1).J[0]
    for src, dst in [(0, E[1]), (1, -E[0]), (2, E[3]), (3, -E[2])]:
        assert np.array_equal(J1 @ E[src], dst)


def test_j2_table():
    J2 = build_structure(1).J[1]
    for src, dst in [(0, E[2]), (1, -E[3]), (2, -E[0]), (3, E[1])]:
        assert np.array_equal(J2 @ E[src], dst)


def test_invalid_dimension():
    for bad in (0, -1, 1.5):
        with pytest.raises(InvalidDimension):
            build_structure(bad)


def test_act_examples():
    s = build_structure(1)
    rng = np.random.default_rng(2)
    Y = rng.standard_normal(4)
    assert np.array_equal(s.act(ONE, Y), Y)
    assert np.array_equal(s.act(I1, E[0]), E[1])
    assert np.allclose(s.act(qmul(I1, I2), Y), s.act(I1, s.act(I2, Y)))
    with pytest.raises(DimensionMismatch):
        s.act(I1, np.zeros(8))


@pytest.mark.parametrize("n", [1, 2])
def test_left_module_law(n):
    s = build_structure(n)
    rng = np.random.default_rng(n)
    for _ in range(100):
        p, q = (Quaternion.from_array(rng.standard_normal(4)) for _ in range(2))
        Y = rng.standard_normal(4 * n)
        assert np.allclose(s.act(qmul(p, q), Y), s.act(p, s.act(q, Y)), atol=1e-12)


def test_act_matches_quaternion_product_blockwise():
    s = build_structure(2)
    rng = np.random.default_rng(3)
    q = Quaternion.from_array(rng.standard_normal(4))
    Y = rng.standard_normal(8)
    out = s.act(q, Y)
    for k in range(2):
        expected = qmul(q, Quaternion.from_array(Y[4 * k:4 * k + 4])).as_array()
        assert np.allclose(out[4 * k:4 * k + 4], expected)


def test_complex_structure_of_unit():
    s = build_structure(1)
    assert np.array_equal(s.complex_structure_of_unit(I1), s.J[0])
    u = (I1 + I2) / np.sqrt(2)
    Ju = s.complex_structure_of_unit(u)
    assert np.allclose(Ju, (s.J[0] + s.J[1]) / np.sqrt(2))
    assert np.allclose(Ju @ Ju, -np.eye(4), atol=1e-15)
    with pytest.raises(NotUnitImaginary):
        s.complex_structure_of_unit(ONE)
    with pytest.raises(NotUnitImaginary):
        s.complex_structure_of_unit(2 * I3)


def test_symplectic_forms_n1():
    s = build_structure(1)
    w1, w2, w3 = s.symplectic_forms()
    assert w1 == basis_form(4, 0, 1) + basis_form(4, 2, 3)
    assert w2 == basis_form(4, 0, 2) - basis_form(4, 1, 3)
    assert w3 == basis_form(4, 0, 3) + basis_form(4, 1, 2)


@pytest.mark.parametrize("n", [1, 2])
def test_metric_invariance_and_antisymmetry(n):
    s = build_structure(n)
    rng = np.random.default_rng(4)
    for a in (1, 2, 3):
        J = s.J[a - 1]
        w = s.symplectic_form(a)
        for _ in range(20):
            X, Y = rng.standard_normal((2, s.dim))
            assert abs(s.g(J @ X, J @ Y) - s.g(X, Y)) <= 1e-12
            assert abs(w(X, Y) + w(Y, X)) <= 1e-12
            assert abs(w(X, Y) - s.g(J @ X, Y)) <= 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_top_power_normalization(n):
    s = build_structure(n)
    for w in s.symplectic_forms():
        assert wedge_power(w, 2 * n) == math.factorial(2 * n) * volume_form(s.dim)


def test_rotated_structures_obey_relations():
    s = build_structure(2)
    rng = np.random.default_rng(5)
    for _ in range(10):
        t = make_triple(random_rotation(rng))
        sr = s.rotated(t)
        assert max(sr.relation_defects().values()) <= 1e-12
        for j, Jr in zip(t.units, sr.J):
            assert np.allclose(s.complex_structure_of_unit(j), Jr, atol=1e-15)
