import numpy as np

from hermitia.jets import constant, jet_mul, variable
from hermitia.metric import (flat_metric, hopf_metric, metric_jet,
                             normal_form_balanced, normal_form_balanced_skt,
                             normal_form_skt, potential_kahler_torus)
from hermitia.structure import (laplacian_compare, prop38_check,
                                structure_report)


def _hopf(n, z=None):
    if z is None:
        z = np.array([1.2 + 0.0j] + [0.4 - 0.3j] * (n - 1))
    return metric_jet(hopf_metric(n), z, order=3)


def test_flat_all_verdicts_true():
    r = structure_report(metric_jet(flat_metric(2), np.zeros(2), order=3))
    assert r.is_kahler and r.is_balanced and r.is_skt


def test_hopf_verdicts():
    r2 = structure_report(_hopf(2))
    assert not r2.is_kahler and not r2.is_balanced and r2.is_skt
    r3 = structure_report(_hopf(3))
    assert not r3.is_kahler and not r3.is_balanced and not r3.is_skt


def test_kahler_potential_torus():
    rng = np.random.default_rng(1)
    fld = potential_kahler_torus(2, 4)
    z = rng.uniform(0, 1, 2) + 1j * rng.uniform(0, 1, 2)
    r = structure_report(metric_jet(fld, z, order=3))
    assert r.is_kahler and r.is_balanced and r.is_skt


def test_constrained_normal_forms():
    rb = structure_report(metric_jet(normal_form_balanced(2, 0),
                                     np.zeros(2), order=3))
    assert rb.is_balanced
    rs = structure_report(metric_jet(normal_form_skt(2, 0),
                                     np.zeros(2), order=3))
    assert rs.is_skt


def test_laplacians_coincide_on_kahler():
    rng = np.random.default_rng(2)
    fld = potential_kahler_torus(2, 7)
    z = rng.uniform(0, 1, 2) + 1j * rng.uniform(0, 1, 2)
    mj = metric_jet(fld, z, order=3)
    f = jet_mul(variable(2, 3, 0), variable(2, 3, 1, barred=True)) \
        + variable(2, 3, 1) + constant(0.3, 2, 3)
    a, b, c = laplacian_compare(mj, f)
    assert abs(a - c) < 1e-9 and abs(b - c) < 1e-9


def test_laplacians_differ_on_hopf():
    mj = _hopf(2)
    f = variable(2, 3, 0) + jet_mul(variable(2, 3, 0),
                                    variable(2, 3, 0, barred=True))
    a, b, c = laplacian_compare(mj, f)
    assert abs(a - c) > 1e-6 or abs(b - c) > 1e-6


def test_prop38_balanced_skt_forces_flatness():
    mj = metric_jet(normal_form_balanced_skt(2, 3), np.zeros(2), order=3)
    status, norm = prop38_check(mj)
    assert status == "checked"
    assert norm < 1e-18


def test_prop38_skips_generic():
    status, norm = prop38_check(_hopf(2))
    assert status == "skip" and norm is None
