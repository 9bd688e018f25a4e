import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermitia.errors import SingularSeriesError
from hermitia.jets import (Jet, constant, jet_conj, jet_inverse,
                           jet_matrix_inverse, jet_mul, truncate, variable,
                           wirtinger)


def _random_jet(n, order, rng):
    z = constant(0.0, n, order)
    out = z.coeffs.copy()
    out[:] = rng.standard_normal(out.shape) + 1j * rng.standard_normal(out.shape)
    return Jet(n, order, out)


def test_constant_and_variable():
    c = constant(2.5 - 1j, 2, 3)
    assert c.const == 2.5 - 1j
    z0 = variable(2, 3, 0)
    zb1 = variable(2, 3, 1, barred=True)
    prod = jet_mul(z0, zb1)
    assert prod.const == 0
    assert wirtinger(wirtinger(prod, "holo", 0), "antiholo", 1).const == 1


def test_mul_commutative_associative():
    rng = np.random.default_rng(0)
    a, b, c = (_random_jet(2, 3, rng) for _ in range(3))
    ab = jet_mul(a, b)
    ba = jet_mul(b, a)
    assert np.allclose(ab.coeffs, ba.coeffs)
    assert np.allclose(jet_mul(ab, c).coeffs, jet_mul(a, jet_mul(b, c)).coeffs)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 999), st.integers(0, 1))
def test_wirtinger_product_rule(seed, which_idx):
    which = ("holo", "antiholo")[which_idx]
    rng = np.random.default_rng(seed)
    a, b = _random_jet(2, 3, rng), _random_jet(2, 3, rng)
    lhs = wirtinger(jet_mul(a, b), which, 0)
    rhs1 = jet_mul(wirtinger(a, which, 0), truncate(b, 2))
    rhs2 = jet_mul(truncate(a, 2), wirtinger(b, which, 0))
    assert np.max(np.abs(lhs.coeffs - rhs1.coeffs - rhs2.coeffs)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 999))
def test_conj_involution_and_antihomomorphism(seed):
    rng = np.random.default_rng(seed)
    a, b = _random_jet(2, 3, rng), _random_jet(2, 3, rng)
    assert np.allclose(jet_conj(jet_conj(a)).coeffs, a.coeffs)
    assert np.allclose(jet_conj(jet_mul(a, b)).coeffs,
                       jet_mul(jet_conj(a), jet_conj(b)).coeffs)


def test_conj_swaps_derivative_type():
    rng = np.random.default_rng(5)
    a = _random_jet(2, 3, rng)
    lhs = wirtinger(jet_conj(a), "holo", 1)
    rhs = jet_conj(wirtinger(a, "antiholo", 1))
    assert np.allclose(lhs.coeffs, rhs.coeffs)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 999))
def test_inverse(seed):
    rng = np.random.default_rng(seed)
    coeffs = _random_jet(2, 3, rng).coeffs.copy()
    coeffs[0] = 2.0 + 0.3j  # keep away from zero
    a = Jet(2, 3, coeffs)
    prod = jet_mul(a, jet_inverse(a))
    unit = constant(1.0, 2, 3)
    assert np.max(np.abs(prod.coeffs - unit.coeffs)) < 1e-10


def test_inverse_singular():
    z = variable(2, 3, 0)
    with pytest.raises(SingularSeriesError):
        jet_inverse(z)


def test_matrix_inverse():
    rng = np.random.default_rng(3)
    m = np.empty((2, 2), dtype=object)
    for i in range(2):
        for j in range(2):
            m[i, j] = _random_jet(2, 3, rng)
        m[i, i] = Jet(2, 3, m[i, i].coeffs + constant(4.0, 2, 3).coeffs)
    inv = jet_matrix_inverse(m)
    for i in range(2):
        for j in range(2):
            acc = sum((jet_mul(m[i, k], inv[k, j]).coeffs for k in range(2)))
            want = constant(1.0 if i == j else 0.0, 2, 3).coeffs
            assert np.max(np.abs(acc - want)) < 1e-10


def test_truncate_drops_high_degree():
    rng = np.random.default_rng(1)
    a = _random_jet(2, 3, rng)
    t = truncate(a, 1)
    assert t.order == 1
    assert np.allclose(t.coeffs, a.coeffs[: len(t.coeffs)])


def test_wirtinger_lowers_order():
    rng = np.random.default_rng(2)
    a = _random_jet(2, 3, rng)
    assert wirtinger(a, "holo", 0).order == 2
