"""The four curvature tensors and every Ricci / scalar contraction.

Storage order for all (1,1)-type tensors is (i, jbar, k, lbar): the first
pair are form indices, the second pair bundle indices.  Contractions use the
inverse-metric tensor h^{i jbar} = hinv[j][i] (see docs/conventions.md).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import ChristoffelTable, bismut, chern, levi_civita
from .errors import OrderExhaustedError, StructuralError
from .jets import Jet, truncate, wirtinger
from .metric import MetricJet

__all__ = [
    "CurvatureTensor",
    "RicciMatrix",
    "ScalarReport",
    "curvature_lc",
    "curvature_induced",
    "curvature_chern",
    "curvature_bismut",
    "lc_curvature_full",
    "bundle_curvature",
    "ricci",
    "complexified_ricci",
    "complexified_ricci_bianchi",
    "ricci_first_chern_logdet",
    "scalars",
    "hup_at0",
    "det_jet",
    "log_det_jet",
    "ricci_panel",
    "curvature_comparison",
    "normal_point_suite",
]


@dataclass(frozen=True)
class CurvatureTensor:
    kind: str  # LeviCivita | Induced | Chern | Bismut
    n: int
    components: np.ndarray  # (n, n, n, n), indexed (i, jbar, k, lbar)
    point: np.ndarray


@dataclass(frozen=True)
class RicciMatrix:
    flavor: str
    kind: str
    n: int
    matrix: np.ndarray
    point: np.ndarray


@dataclass(frozen=True)
class ScalarReport:
    s_h: complex
    S: complex
    S_LC: complex
    S_CH: complex
    S_BM: complex
    point: np.ndarray

    def as_dict(self):
        return {"s_h": self.s_h, "S": self.S, "S_LC": self.S_LC,
                "S_CH": self.S_CH, "S_BM": self.S_BM}


def hup_at0(mj: MetricJet) -> np.ndarray:
    """h^{i jbar} at the point as a matrix indexed [i, j]."""
    return mj.hinv_at0().T


def _require_order(mj: MetricJet, k: int):
    if mj.order < k:
        raise OrderExhaustedError(f"metric jet order must be >= {k}")


def lc_curvature_full(mj: MetricJet) -> np.ndarray:
    """Pointwise complexified curvature R_{ABCD} for all 2n-range indices.

    R_{ABC}^D = -(dGamma_{AC}^D/dz^B - dGamma_{BC}^D/dz^A
                  + Gamma_{AC}^F Gamma_{FB}^D - Gamma_{BC}^F Gamma_{AF}^D),
    then lowered with H_{DE}.
    """
    _require_order(mj, 2)
    n = mj.n
    lc = levi_civita(mj)
    g = lc.const_table()            # Gamma_{AB}^C
    dg = lc.dconst_table()          # dg[E, A, B, C]
    R_up = np.zeros((2 * n,) * 4, dtype=complex)
    for A in range(2 * n):
        for B in range(2 * n):
            for C in range(2 * n):
                for D in range(2 * n):
                    val = dg[B, A, C, D] - dg[A, B, C, D]
                    val += np.dot(g[A, C, :], g[:, B, D])
                    val -= np.dot(g[B, C, :], g[A, :, D])
                    R_up[A, B, C, D] = -val
    # lower the last index with H_{DE}
    H = np.zeros((2 * n, 2 * n), dtype=complex)
    h0 = mj.h_at0()
    H[:n, n:] = h0
    H[n:, :n] = h0.T
    return np.einsum("abcs,sd->abcd", R_up, H)


def curvature_lc(mj: MetricJet) -> CurvatureTensor:
    full = lc_curvature_full(mj)
    n = mj.n
    comp = full[:n, n:, :n, n:]
    return CurvatureTensor(kind="LeviCivita", n=n, components=comp,
                           point=mj.point)


def curvature_induced(mj: MetricJet) -> CurvatureTensor:
    """Curvature of the projection of the Levi-Civita connection onto the
    holomorphic tangent bundle: only unbarred intermediate indices survive."""
    _require_order(mj, 2)
    n = mj.n
    lc = levi_civita(mj)
    g = lc.const_table()
    dg = lc.dconst_table()
    h0 = mj.h_at0()
    comp = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            jb = n + j
            for k in range(n):
                for s in range(n):
                    val = dg[jb, i, k, s] - dg[i, jb, k, s]
                    val += np.dot(g[i, k, :n], g[:n, jb, s])
                    val -= np.dot(g[jb, k, :n], g[i, :n, s])
                    for l in range(n):
                        comp[i, j, k, l] += -val * h0[s, l]
    return CurvatureTensor(kind="Induced", n=n, components=comp,
                           point=mj.point)


def bundle_curvature(table: ChristoffelTable, mj: MetricJet,
                     lower: bool = True) -> np.ndarray:
    """(1,1)-curvature of a connection on the holomorphic tangent bundle:

    R_{i jbar a}^b = -d_jbar Gamma_{i a}^b + d_i Gamma_{jbar a}^b
                     - Gamma_{i a}^c Gamma_{jbar c}^b
                     + Gamma_{jbar a}^c Gamma_{i c}^b

    lowered (by default) with h_{b lbar} into index order (i, jbar, a, lbar).
    """
    n = mj.n
    g = table.const_table()      # (2n, n, n)
    dg = table.dconst_table()    # (2n, 2n, n, n)
    Rup = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            jb = n + j
            Rup[i, j] = (-dg[jb, i] + dg[i, jb]
                         - g[i] @ g[jb] + g[jb] @ g[i])
    if not lower:
        return Rup
    h0 = mj.h_at0()
    return np.einsum("ijab,bl->ijal", Rup, h0)


def curvature_chern(mj: MetricJet) -> CurvatureTensor:
    _require_order(mj, 2)
    comp = bundle_curvature(chern(mj), mj)
    return CurvatureTensor(kind="Chern", n=mj.n, components=comp,
                           point=mj.point)


def curvature_bismut(mj: MetricJet) -> CurvatureTensor:
    _require_order(mj, 2)
    comp = bundle_curvature(bismut(mj), mj)
    return CurvatureTensor(kind="Bismut", n=mj.n, components=comp,
                           point=mj.point)


# -- Ricci contractions ----------------------------------------------------


def ricci(t: CurvatureTensor, mj: MetricJet, flavor: str) -> RicciMatrix:
    """Contract a curvature tensor to a Ricci matrix.

    flavors: 'first' (trace over the bundle pair, matrix indexed by the form
    pair), 'second' (trace over the form pair), 'hermitian' (the 'second'
    contraction of the Levi-Civita tensor), 'complexified' (Levi-Civita only,
    computed from the full curvature).
    """
    up = hup_at0(mj)
    if flavor == "first":
        m = np.einsum("kl,ijkl->ij", up, t.components)
    elif flavor == "second":
        m = np.einsum("ij,ijkl->kl", up, t.components)
    elif flavor == "hermitian":
        if t.kind != "LeviCivita":
            raise StructuralError("hermitian Ricci requires the LeviCivita kind")
        m = np.einsum("ij,ijkl->kl", up, t.components)
    elif flavor == "complexified":
        if t.kind != "LeviCivita":
            raise StructuralError(
                "complexified Ricci requires the LeviCivita kind")
        return complexified_ricci(mj)
    else:
        raise StructuralError(f"unknown Ricci flavor {flavor!r}")
    return RicciMatrix(flavor=flavor, kind=t.kind, n=t.n, matrix=m,
                       point=t.point)


def complexified_ricci(mj: MetricJet) -> RicciMatrix:
    """R_{k lbar} = h^{i jbar} (R_{k jbar i lbar} + R_{k i jbar lbar})."""
    n = mj.n
    full = lc_curvature_full(mj)
    up = hup_at0(mj)
    m = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            for i in range(n):
                for j in range(n):
                    m[k, l] += up[i, j] * (full[k, n + j, i, n + l]
                                           + full[k, i, n + j, n + l])
    return RicciMatrix(flavor="complexified", kind="LeviCivita", n=n,
                       matrix=m, point=mj.point)


def complexified_ricci_bianchi(mj: MetricJet) -> RicciMatrix:
    """Second route: R_{k lbar} = h^{i jbar} (2 R_{k jbar i lbar}
    - R_{k lbar i jbar}), using only the (1,1)-slice."""
    n = mj.n
    slice11 = curvature_lc(mj).components
    up = hup_at0(mj)
    m = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            for i in range(n):
                for j in range(n):
                    m[k, l] += up[i, j] * (2 * slice11[k, j, i, l]
                                           - slice11[k, l, i, j])
    return RicciMatrix(flavor="complexified-bianchi", kind="LeviCivita", n=n,
                       matrix=m, point=mj.point)


# -- determinant route for the first Ricci-Chern curvature -----------------


def det_jet(m: np.ndarray) -> Jet:
    """Determinant of a square matrix of Jets by Laplace expansion."""
    k = m.shape[0]
    if k == 1:
        return m[0][0]
    acc = None
    for j in range(k):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        term = m[0][j] * det_jet(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def log_det_jet(m: np.ndarray) -> Jet:
    """log det of a matrix of Jets with positive-definite constant term,
    up to an additive constant (log of the constant determinant, which the
    derivatives never see)."""
    d = det_jet(m)
    c = d.const
    u = d * (1.0 / c) - 1.0  # zero constant term
    out = u * 0.0
    term = u * 0.0 + 1.0
    for k in range(1, d.order + 1):
        term = term * u
        out = out + term * ((-1.0) ** (k + 1) / k)
    return out


def ricci_first_chern_logdet(mj: MetricJet) -> RicciMatrix:
    """First Ricci-Chern curvature as -d^2 log det(h) / dz^i dzbar^j."""
    _require_order(mj, 2)
    n = mj.n
    ld = log_det_jet(mj.h)
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            m[i, j] = -wirtinger(wirtinger(ld, "holo", i),
                                 "antiholo", j).const
    return RicciMatrix(flavor="first", kind="Chern-logdet", n=n, matrix=m,
                       point=mj.point)


def scalars(mj: MetricJet) -> ScalarReport:
    up = hup_at0(mj)
    R_full = curvature_lc(mj).components
    R_hat = curvature_induced(mj).components
    Theta = curvature_chern(mj).components
    B = curvature_bismut(mj).components
    S = np.einsum("kl,ij,ijkl->", up, up, R_full)
    S_LC = np.einsum("kl,ij,ijkl->", up, up, R_hat)
    S_CH = np.einsum("kl,ij,ijkl->", up, up, Theta)
    S_BM = np.einsum("kl,ij,ijkl->", up, up, B)
    Rc = complexified_ricci(mj).matrix
    s_h = np.einsum("kl,kl->", up, Rc)
    return ScalarReport(s_h=complex(s_h), S=complex(S), S_LC=complex(S_LC),
                        S_CH=complex(S_CH), S_BM=complex(S_BM), point=mj.point)


# -- normal-point direct-formula suite -------------------------------------


def _derivative_tables(mj: MetricJet):
    """(d1, db1, d2): d1[k,i,j] = dh_{i jbar}/dz^k, db1[k,i,j] the zbar^k
    derivative, d2[i,j,k,l] = d2 h_{k lbar}/dz^i dzbar^j, all at the point."""
    n = mj.n
    d1 = np.zeros((n, n, n), dtype=complex)
    db1 = np.zeros((n, n, n), dtype=complex)
    d2 = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            jet = mj.h[i][j]
            for k in range(n):
                d1[k, i, j] = wirtinger(jet, "holo", k).const
                db1[k, i, j] = wirtinger(jet, "antiholo", k).const
                for l in range(n):
                    d2[k, l, i, j] = wirtinger(
                        wirtinger(jet, "holo", k), "antiholo", l).const
    return d1, db1, d2


def _require_normal_point(mj: MetricJet, tol: float = 1e-12):
    n = mj.n
    h0 = mj.h_at0()
    if np.max(np.abs(h0 - np.eye(n))) > tol:
        raise StructuralError("normal-point suite needs h(0) = identity")
    d1, _, _ = _derivative_tables(mj)
    gam = d1 + np.transpose(d1, (1, 0, 2))
    if np.max(np.abs(gam)) > tol:
        raise StructuralError(
            "normal-point suite needs vanishing symmetrized Christoffels")


def ricci_panel(mj: MetricJet) -> dict:
    """All eight Ricci matrices at the point, keyed by connection/trace."""
    rlc = curvature_lc(mj)
    rind = curvature_induced(mj)
    rch = curvature_chern(mj)
    rbm = curvature_bismut(mj)
    return {
        "chern_first": ricci(rch, mj, "first").matrix,
        "chern_second": ricci(rch, mj, "second").matrix,
        "induced_first": ricci(rind, mj, "first").matrix,
        "induced_second": ricci(rind, mj, "second").matrix,
        "bismut_first": ricci(rbm, mj, "first").matrix,
        "bismut_second": ricci(rbm, mj, "second").matrix,
        "hermitian": ricci(rlc, mj, "hermitian").matrix,
        "complexified": complexified_ricci(mj).matrix,
    }


def curvature_comparison(mj: MetricJet, trials: int, seed: int) -> dict:
    """Pointwise comparison of the Levi-Civita (1,1) curvature with the
    induced-connection curvature: the (u, ubar, v, vbar) contraction of
    R - Rhat is real and nonpositive, and both induced Ricci traces
    dominate the Hermitian Ricci matrix."""
    n = mj.n
    rng = np.random.default_rng(seed)
    r11 = curvature_lc(mj).components
    rhat = curvature_induced(mj).components
    diff = r11 - rhat
    worst = -np.inf
    max_imag = 0.0
    for _ in range(trials):
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        val = np.einsum("ijkl,i,j,k,l->", diff, u, u.conj(), v, v.conj())
        worst = max(worst, val.real)
        max_imag = max(max_imag, abs(val.imag))
    herm = ricci(curvature_lc(mj), mj, "hermitian").matrix
    first = ricci(curvature_induced(mj), mj, "first").matrix
    second = ricci(curvature_induced(mj), mj, "second").matrix
    return {
        "max_contraction": worst,
        "max_contraction_imag": max_imag,
        "min_eig_first_minus_hermitian": float(
            np.linalg.eigvalsh((first - herm + (first - herm).conj().T) / 2)[0]),
        "min_eig_second_minus_hermitian": float(
            np.linalg.eigvalsh((second - herm + (second - herm).conj().T) / 2)[0]),
    }


def normal_point_suite(mj: MetricJet, balanced: bool = False,
                       skt: bool = False) -> dict:
    """Residuals of the direct second-derivative curvature formulas valid at
    a point with h = identity and vanishing symmetrized Christoffels,
    against the jet pipeline.  With ``balanced``/``skt`` set, also checks
    the constrained Ricci formulas valid under those trace conditions."""
    _require_normal_point(mj)
    n = mj.n
    d1, db1, d2 = _derivative_tables(mj)

    r11 = curvature_lc(mj).components
    rhat = curvature_induced(mj).components
    theta = curvature_chern(mj).components
    bis = curvature_bismut(mj).components
    panel = ricci_panel(mj)

    def second(k, j, i, l):
        # d2 h_{i lbar} / dz^k dzbar^j
        return d2[k, j, i, l]

    res = {}

    # Levi-Civita (1,1) tensor from second derivatives plus first-derivative
    # quadratics.
    oracle = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    val = -0.5 * (second(k, j, i, l) + second(i, l, k, j))
                    for q in range(n):
                        val -= (d1[i, q, l] * db1[j, k, q]
                                + d1[k, q, j] * db1[l, i, q])
                    oracle[i, j, k, l] = val
    res["lc_tensor"] = float(np.max(np.abs(r11 - oracle)))

    # Hermitian Ricci trace.
    orc = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            val = 0.0 + 0.0j
            for s in range(n):
                val -= 0.5 * (second(k, s, s, l) + second(s, l, k, s))
                for q in range(n):
                    val -= (d1[s, q, l] * db1[s, k, q]
                            + d1[s, k, q] * db1[s, q, l])
            orc[k, l] = val
    res["hermitian_ricci"] = float(np.max(np.abs(panel["hermitian"] - orc)))

    # Mixed trace h^{i jbar} R_{k jbar i lbar}.
    mixed = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            mixed[k, l] = sum(r11[k, s, s, l] for s in range(n))
    orc = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            val = 0.0 + 0.0j
            for s in range(n):
                val -= 0.5 * (second(s, s, k, l) + second(k, l, s, s))
                for q in range(n):
                    val -= (d1[k, q, l] * db1[s, s, q]
                            + d1[s, q, s] * db1[l, k, q])
            orc[k, l] = val
    res["mixed_trace"] = float(np.max(np.abs(mixed - orc)))

    # Complexified Ricci.
    orc = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            val = 0.0 + 0.0j
            for s in range(n):
                val += 0.5 * (second(k, s, s, l) + second(s, l, k, s))
                val -= second(s, s, k, l) + second(k, l, s, s)
                for q in range(n):
                    val += (d1[s, q, l] * db1[s, k, q]
                            + d1[s, k, q] * db1[s, q, l])
                    val -= 2 * (d1[k, q, l] * db1[s, s, q]
                                + d1[s, q, s] * db1[l, k, q])
            orc[k, l] = val
    res["complexified_ricci"] = float(
        np.max(np.abs(panel["complexified"] - orc)))

    # Induced-connection tensor and its two Ricci traces.
    oracle = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    val = -0.5 * (second(k, j, i, l) + second(i, l, k, j))
                    for q in range(n):
                        val -= d1[i, q, l] * db1[j, k, q]
                    oracle[i, j, k, l] = val
    res["induced_tensor"] = float(np.max(np.abs(rhat - oracle)))

    orc = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            val = 0.0 + 0.0j
            for k in range(n):
                val -= 0.5 * (second(k, j, i, k) + second(i, k, k, j))
                for q in range(n):
                    val -= d1[i, q, k] * db1[j, k, q]
            orc[i, j] = val
    res["induced_first"] = float(np.max(np.abs(panel["induced_first"] - orc)))

    orc = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            val = 0.0 + 0.0j
            for k in range(n):
                val -= 0.5 * (second(k, j, i, k) + second(i, k, k, j))
                for q in range(n):
                    val -= db1[k, i, q] * d1[k, q, j]
            orc[i, j] = val
    res["induced_second"] = float(
        np.max(np.abs(panel["induced_second"] - orc)))

    orc = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            val = 0.0 + 0.0j
            for k in range(n):
                for q in range(n):
                    val += (db1[k, i, q] * d1[k, q, j]
                            - d1[k, i, q] * db1[k, q, j])
            orc[i, j] = val
    res["induced_difference"] = float(np.max(np.abs(
        panel["induced_first"] - panel["induced_second"] - orc)))

    # Bismut tensor.
    oracle = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for a in range(n):
                for b in range(n):
                    val = -(d2[a, j, i, b] + d2[i, b, a, j] - d2[i, j, a, b])
                    for g in range(n):
                        val += d1[i, a, g] * db1[j, g, b]
                        val -= 4 * db1[j, a, g] * d1[i, g, b]
                    oracle[i, j, a, b] = val
    res["bismut_tensor"] = float(np.max(np.abs(bis - oracle)))

    def quad(coef_a, coef_b):
        """coef_a * sum dh_{q lbar}/dzbar^i dh_{k qbar}/dz^i
        + coef_b * sum dh_{k qbar}/dzbar^i dh_{q lbar}/dz^i, as (k,l)."""
        out = np.zeros((n, n), dtype=complex)
        for k in range(n):
            for l in range(n):
                for i in range(n):
                    for q in range(n):
                        out[k, l] += (coef_a * db1[i, q, l] * d1[i, k, q]
                                      + coef_b * db1[i, k, q] * d1[i, q, l])
        return out
    sum_d2_trace = np.zeros((n, n), dtype=complex)   # sum_i d2 h_{i ibar}/dz^k dzbar^l
    sum_d2_lap = np.zeros((n, n), dtype=complex)     # sum_i d2 h_{k lbar}/dz^i dzbar^i
    for k in range(n):
        for l in range(n):
            sum_d2_trace[k, l] = sum(d2[k, l, i, i] for i in range(n))
            sum_d2_lap[k, l] = sum(d2[i, i, k, l] for i in range(n))

    if balanced:
        orc38 = -sum_d2_trace + quad(1, 0)
        res["balanced_first_ricci"] = float(max(
            np.max(np.abs(panel["chern_first"] - orc38)),
            np.max(np.abs(panel["induced_first"] - orc38)),
            np.max(np.abs(panel["bismut_first"] - orc38))))
        res["balanced_chern_second"] = float(np.max(np.abs(
            panel["chern_second"] - (-sum_d2_lap + quad(1, 0)))))
        res["balanced_induced_second"] = float(np.max(np.abs(
            panel["induced_second"] - (-sum_d2_trace + quad(2, -1)))))
        res["balanced_bismut_second"] = float(np.max(np.abs(
            panel["bismut_second"] - (-sum_d2_trace + quad(5, -4)))))
        res["balanced_hermitian"] = float(np.max(np.abs(
            panel["hermitian"] - (-sum_d2_trace + quad(1, -1)))))
        res["balanced_complexified"] = float(np.max(np.abs(
            panel["complexified"] - (-sum_d2_lap - quad(1, -1)))))

    if skt:
        res["skt_chern_first"] = float(np.max(np.abs(
            panel["chern_first"] - (-sum_d2_trace + quad(1, 0)))))
        res["skt_chern_second"] = float(np.max(np.abs(
            panel["chern_second"] - (-sum_d2_lap + quad(1, 0)))))
        half = -0.5 * (sum_d2_lap + sum_d2_trace)
        res["skt_induced_first"] = float(np.max(np.abs(
            panel["induced_first"] - (half - quad(1, 0)))))
        res["skt_induced_second"] = float(np.max(np.abs(
            panel["induced_second"] - (half - quad(0, 1)))))
        res["skt_bismut_first"] = float(np.max(np.abs(
            panel["bismut_first"] - (-sum_d2_lap + quad(1, -4)))))
        res["skt_bismut_second"] = float(np.max(np.abs(
            panel["bismut_second"] - (-sum_d2_trace + quad(1, -4)))))
        res["skt_hermitian"] = float(np.max(np.abs(
            panel["hermitian"] - (half - quad(1, 1)))))
        # complexified: extra torsion-trace quadratics
        extra = np.zeros((n, n), dtype=complex)
        for k in range(n):
            for l in range(n):
                for q in range(n):
                    for i in range(n):
                        extra[k, l] += (d1[k, q, l] * db1[i, i, q]
                                        + d1[i, q, i] * db1[l, k, q])
        res["skt_complexified"] = float(np.max(np.abs(
            panel["complexified"] - (half + quad(1, 1) - 2 * extra))))
        lhs = panel["chern_second"] + panel["bismut_second"]
        res["skt_trace_relation"] = float(np.max(np.abs(
            lhs - panel["chern_first"] - panel["induced_first"])))
        res["skt_trace_relation_b1"] = float(np.max(np.abs(
            lhs - panel["chern_first"] - panel["bismut_first"])))

    return res
