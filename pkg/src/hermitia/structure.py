"""Pointwise structure classification: Kaehler, balanced, SKT.

The three defects are exact jet evaluations, so a structure that holds
identically shows up as a machine-zero defect.  "SKT" here means the trace
condition on the mixed second derivatives of the metric (vanishing of the
contracted ddbar of the fundamental form).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import levi_civita
from .errors import OrderExhaustedError
from .jets import Jet, wirtinger
from .metric import MetricJet

__all__ = [
    "StructureReport",
    "DEFAULT_TOL",
    "kahler_defect",
    "balanced_torsion",
    "balanced_torsion_row_trace",
    "torsion_trace_residual",
    "skt_defect",
    "laplacian_compare",
    "prop38_check",
    "structure_report",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class StructureReport:
    point: np.ndarray
    kahler_defect: float
    balanced_defect: float
    skt_defect: float
    is_kahler: bool
    is_balanced: bool
    is_skt: bool
    tol: float


def _d1(mj: MetricJet):
    """dh[k][i][j] = dh_{i jbar}/dz^k and dbh[k][i][j] = dh_{i jbar}/dzbar^k."""
    if mj.order < 1:
        raise OrderExhaustedError("metric jet order must be >= 1")
    n = mj.n
    dh = np.zeros((n, n, n), dtype=complex)
    dbh = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                dh[k, i, j] = wirtinger(mj.h[i][j], "holo", k).const
                dbh[k, i, j] = wirtinger(mj.h[i][j], "antiholo", k).const
    return dh, dbh


def _d2(mj: MetricJet):
    """d2[i][j][k][l] = d^2 h_{k lbar} / dz^i dzbar^j at the point."""
    if mj.order < 2:
        raise OrderExhaustedError("metric jet order must be >= 2")
    n = mj.n
    d2 = np.zeros((n, n, n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            for i in range(n):
                step = wirtinger(mj.h[k][l], "holo", i)
                for j in range(n):
                    d2[i, j, k, l] = wirtinger(step, "antiholo", j).const
    return d2


def kahler_defect(mj: MetricJet):
    """f_{i jbar k} = dh_{i jbar}/dz^k - dh_{k jbar}/dz^i and its max modulus."""
    dh, _ = _d1(mj)
    n = mj.n
    f = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                f[i, j, k] = dh[k, i, j] - dh[i, k, j]
    return float(abs(f).max()), f


def balanced_torsion(mj: MetricJet) -> np.ndarray:
    """The torsion 1-form coefficients eta_l = Gamma_{l jbar}^{jbar}."""
    n = mj.n
    g = levi_civita(mj).const_table()
    return np.array([sum(g[l, n + j, n + j] for j in range(n))
                     for l in range(n)])


def balanced_torsion_row_trace(mj: MetricJet) -> np.ndarray:
    """Same trace with the point indices in the other order,
    Gamma_{jbar l}^{jbar}; equal to balanced_torsion by the symmetry of the
    Levi-Civita table."""
    n = mj.n
    g = levi_civita(mj).const_table()
    return np.array([sum(g[n + j, l, n + j] for j in range(n))
                     for l in range(n)])


def torsion_trace_residual(mj: MetricJet) -> float:
    """Residual of the contraction identity linking the Laplacian correction
    h^{i jbar} Gamma_{i jbar}^{lbar} to the torsion form:
    h^{i jbar} Gamma_{i jbar}^{lbar} = -h^{k lbar} eta_k."""
    n = mj.n
    g = levi_civita(mj).const_table()
    eta = balanced_torsion(mj)
    res = 0.0
    for l in range(n):
        lhs = sum(mj.h_up(i, j).const * g[i, n + j, n + l]
                  for i in range(n) for j in range(n))
        rhs = -sum(mj.h_up(k, l).const * eta[k] for k in range(n))
        res = max(res, abs(lhs - rhs))
    return float(res)


def skt_defect(mj: MetricJet):
    """Residual matrix of the trace condition on ddbar of the fundamental
    form: r_{ij} = sum_k (d2[k,k,i,j] + d2[i,j,k,k] - d2[k,j,i,k]
    - d2[i,k,k,j]); zero iff the metric is SKT at the point."""
    d2 = _d2(mj)
    n = mj.n
    r = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r[i, j] += (d2[k, k, i, j] + d2[i, j, k, k]
                            - d2[k, j, i, k] - d2[i, k, k, j])
    return float(abs(r).max()), r


def laplacian_compare(mj: MetricJet, f: Jet):
    """The dbar-Laplacian, d-Laplacian(1,0 part) and canonical Laplacian of a
    scalar Jet at the point: returns (lap_dbar, lap_d, canonical)."""
    if f.order < 2:
        raise OrderExhaustedError("scalar jet order must be >= 2")
    n = mj.n
    g = levi_civita(mj).const_table()
    can = 0.0 + 0.0j
    for i in range(n):
        fi = wirtinger(f, "holo", i)
        for j in range(n):
            can -= mj.h_up(i, j).const * wirtinger(fi, "antiholo", j).const
    corr_bar = 0.0 + 0.0j
    corr_hol = 0.0 + 0.0j
    for l in range(n):
        dfb = wirtinger(f, "antiholo", l).const
        dfh = wirtinger(f, "holo", l).const
        for i in range(n):
            for j in range(n):
                corr_bar += 2 * mj.h_up(i, j).const * g[i, n + j, n + l] * dfb
                corr_hol += 2 * mj.h_up(i, j).const * g[j, n + i, l] * dfh
    return complex(can + corr_bar), complex(can + corr_hol), complex(can)


def prop38_check(mj: MetricJet, tol: float = DEFAULT_TOL):
    """On a point that is both balanced and SKT (defects below tol), the full
    first-derivative norm of the metric must vanish; returns
    ('skip', None) when the precondition fails, else ('checked', norm)."""
    bal = float(abs(balanced_torsion(mj)).max())
    skt, _ = skt_defect(mj)
    if bal > tol or skt > tol:
        return "skip", None
    dh, dbh = _d1(mj)
    norm = float((abs(dh) ** 2).sum() + (abs(dbh) ** 2).sum())
    return "checked", norm


def structure_report(mj: MetricJet, tol: float = DEFAULT_TOL) -> StructureReport:
    kd, _ = kahler_defect(mj)
    bd = float(abs(balanced_torsion(mj)).max())
    sd, _ = skt_defect(mj)
    return StructureReport(point=mj.point, kahler_defect=kd,
                           balanced_defect=bd, skt_defect=sd,
                           is_kahler=kd <= tol, is_balanced=bd <= tol,
                           is_skt=sd <= tol, tol=tol)
