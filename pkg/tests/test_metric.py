import os
import tempfile

import numpy as np
import pytest

from hermitia.errors import DomainError, ValidationError
from hermitia.jets import wirtinger
from hermitia.metric import (evaluate, flat_metric, hopf_metric,
                             ingest_torus_metric, metric_jet,
                             normal_coordinates_random, normal_form_balanced,
                             normal_form_balanced_skt, normal_form_random,
                             normal_form_skt, polynomial_metric,
                             potential_kahler_torus, random_torus_fourier,
                             scaled, separable_kahler_torus, torus_fourier,
                             write_torus_metric)
from hermitia.structure import balanced_torsion, skt_defect


def _d1_tables(mj):
    n = mj.n
    d1 = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                d1[k, i, j] = wirtinger(mj.h[i][j], "holo", k).const
    return d1


def test_flat_and_hopf_values():
    assert np.allclose(evaluate(flat_metric(3), np.zeros(3)), np.eye(3))
    z = np.array([1.0, 1.0j])
    assert np.allclose(evaluate(hopf_metric(2), z), 2.0 * np.eye(2))
    with pytest.raises(DomainError):
        evaluate(hopf_metric(2), np.zeros(2))


def test_scaled():
    z = np.array([1.0, 0.0])
    assert np.allclose(evaluate(scaled(hopf_metric(2), 0.5), z),
                       2.0 * np.eye(2))


def test_metric_jet_matches_evaluate():
    rng = np.random.default_rng(0)
    for fld in (hopf_metric(2), normal_form_random(2, 1),
                potential_kahler_torus(2, 2), random_torus_fourier(2, 3)):
        for _ in range(5):
            z = 0.3 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
            if fld.kind == "Hopf":
                z = z + np.array([1.5, 0.0])
            mj = metric_jet(fld, z, order=3)
            assert np.max(np.abs(mj.h_at0() - evaluate(fld, z))) < 1e-12


def test_metric_jet_hermitian_and_positive():
    mj = metric_jet(normal_form_random(3, 7), 0.1 * np.ones(3), order=3)
    h0 = mj.h_at0()
    assert np.max(np.abs(h0 - h0.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(h0).min() > 0


def test_normal_form_is_identity_at_origin():
    for maker in (normal_form_random, normal_form_balanced, normal_form_skt,
                  normal_form_balanced_skt, normal_coordinates_random):
        mj = metric_jet(maker(2, 4), np.zeros(2), order=3)
        assert np.max(np.abs(mj.h_at0() - np.eye(2))) < 1e-12


def test_normal_coordinates_have_vanishing_christoffel_but_nonzero_dh():
    mj = metric_jet(normal_coordinates_random(2, 9), np.zeros(2), order=3)
    d1 = _d1_tables(mj)
    sym = d1 + np.transpose(d1, (1, 0, 2))
    assert np.max(np.abs(sym)) < 1e-12
    assert np.max(np.abs(d1)) > 1e-3  # the instrument is not degenerate


def test_balanced_and_skt_constraints():
    for seed in range(3):
        mjb = metric_jet(normal_form_balanced(2, seed), np.zeros(2), order=3)
        assert np.max(np.abs(balanced_torsion(mjb))) < 1e-12
        mjs = metric_jet(normal_form_skt(2, seed), np.zeros(2), order=3)
        assert skt_defect(mjs)[0] < 1e-12


def test_polynomial_metric_rejects_non_hermitian_use():
    fld = polynomial_metric(2, [((1, 0), (0, 1), 0.1 * np.eye(2))])
    z = np.array([0.1, 0.2j])
    h = evaluate(fld, z)
    assert np.max(np.abs(h - h.conj().T)) < 1e-12


def test_torus_fourier_needs_hermitian_pairing():
    A = np.array([[0.1, 0.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValidationError):
        torus_fourier(2, [((1, 0, 0, 0), A)])


def test_torus_roundtrip():
    fld = random_torus_fourier(2, seed=11)
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "m.txt")
        write_torus_metric(fld, path)
        back = ingest_torus_metric(path)
    z = np.array([0.3 + 0.1j, 0.7 + 0.9j])
    assert np.max(np.abs(evaluate(fld, z) - evaluate(back, z))) < 1e-12


def test_torus_positive_definite_on_grid():
    for maker in (potential_kahler_torus, random_torus_fourier,
                  separable_kahler_torus):
        fld = maker(2, 5)
        rng = np.random.default_rng(1)
        for _ in range(20):
            x = rng.uniform(0, 1, 4)
            z = x[0::2] + 1j * x[1::2]
            assert np.linalg.eigvalsh(evaluate(fld, z)).min() > 0


def test_separable_kahler_entries_depend_on_single_coordinate():
    fld = separable_kahler_torus(2, 8)
    rng = np.random.default_rng(2)
    z = rng.uniform(0, 1, 2) + 1j * rng.uniform(0, 1, 2)
    base = evaluate(fld, z)
    assert abs(base[0, 1]) < 1e-14
    moved = z.copy()
    moved[1] += 0.37 + 0.11j
    assert abs(evaluate(fld, moved)[0, 0] - base[0, 0]) < 1e-14
