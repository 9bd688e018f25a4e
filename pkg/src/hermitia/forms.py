"""Pointwise exterior algebra of (p, q)-forms with Jet coefficients.

A FormJet stores coefficients over strictly increasing index tuples
I (unbarred slots) and J (barred slots) in the ordered basis
dz^I wedge dzbar^J, optionally valued in a rank-r bundle with a metric
connection.  All first-order operators act at jet level, so compositions
(commutator identities) are exact up to the available jet order.

The pointwise inner product is the determinant pairing
  < dz^I ^ dzbar^J, dz^K ^ dzbar^L > =
      GRAM_SLOT_FACTOR^(p+q) det(h^{i kbar}) conj(det(h^{j lbar}))
and algebraic operators get their stars as exact matrix adjoints with
respect to it.  GRAM_SLOT_FACTOR = 1 is the normalization under which the
commutator identities close (see docs/conventions.md).
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .connection import levi_civita
from .curvature import det_jet
from .errors import OrderExhaustedError, StructuralError, ValidationError
from .jets import Jet, constant, jet_conj, jet_matrix_inverse, truncate, wirtinger
from .metric import MetricJet

__all__ = [
    "FormJet",
    "ConnectionJet",
    "GRAM_SLOT_FACTOR",
    "zero_form",
    "form_from_scalar",
    "random_form",
    "two_omega",
    "omega_form",
    "wedge",
    "form_conj",
    "contract_holo",
    "contract_anti",
    "partial",
    "dbar",
    "nabla_holo",
    "nabla_anti",
    "d_prime",
    "d_second",
    "delta0_prime",
    "delta0_second",
    "l_op",
    "lambda_op",
    "lambda_matrix_adjoint",
    "a_op",
    "b_op",
    "c_op",
    "tau",
    "tau_bar",
    "star",
    "partial_star",
    "dbar_star",
    "apply",
    "OPERATORS",
    "inner",
    "gram",
    "identity_suite",
    "partial_e",
    "dbar_e",
    "dbar_e_star",
    "partial_e_star",
    "trivial_connection",
    "chern_connection",
    "random_metric_connection",
    "check_metric_compatible",
    "bundle_identity_suite",
    "second_hermitian_ricci",
]

GRAM_SLOT_FACTOR = 1.0


@lru_cache(maxsize=None)
def _combos(n: int, p: int):
    return tuple(itertools.combinations(range(n), p))


@lru_cache(maxsize=None)
def _combo_index(n: int, p: int):
    return {c: k for k, c in enumerate(_combos(n, p))}


def _zero(n, order):
    return constant(0.0 + 0.0j, n, order)


def _mix(a: Jet, b: Jet):
    k = min(a.order, b.order)
    return truncate(a, k), truncate(b, k)


def _jadd(a: Jet, b: Jet) -> Jet:
    a, b = _mix(a, b)
    return a + b


def _jmul(a: Jet, b: Jet) -> Jet:
    a, b = _mix(a, b)
    return a * b


@dataclass(frozen=True)
class FormJet:
    mj: MetricJet
    p: int
    q: int
    r: int
    coeffs: np.ndarray  # object array (C(n,p), C(n,q), r) of Jets

    @property
    def n(self):
        return self.mj.n

    def coeff(self, I, J, alpha=0) -> Jet:
        n = self.n
        return self.coeffs[_combo_index(n, self.p)[tuple(I)],
                           _combo_index(n, self.q)[tuple(J)], alpha]

    def max_const(self) -> float:
        return max((abs(c.const) for c in self.coeffs.flat), default=0.0)

    def is_zero(self) -> bool:
        return all(c.max_abs() == 0.0 for c in self.coeffs.flat)

    def __add__(self, other):
        if (self.p, self.q, self.r) != (other.p, other.q, other.r):
            # tolerate identically-zero forms of clamped bidegree
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise StructuralError("bidegree/rank mismatch in form addition")
        out = np.empty_like(self.coeffs)
        for idx in np.ndindex(self.coeffs.shape):
            out[idx] = _jadd(self.coeffs[idx], other.coeffs[idx])
        return FormJet(self.mj, self.p, self.q, self.r, out)

    def __sub__(self, other):
        return self + other * (-1.0)

    def __mul__(self, s):
        if isinstance(s, Jet):
            out = np.empty_like(self.coeffs)
            for idx in np.ndindex(self.coeffs.shape):
                out[idx] = _jmul(self.coeffs[idx], s)
        else:
            out = np.empty_like(self.coeffs)
            for idx in np.ndindex(self.coeffs.shape):
                out[idx] = self.coeffs[idx] * s
        return FormJet(self.mj, self.p, self.q, self.r, out)

    __rmul__ = __mul__


def zero_form(mj: MetricJet, p: int, q: int, r: int = 1,
              order: int | None = None) -> FormJet:
    n = mj.n
    if order is None:
        order = mj.order
    p = min(max(p, 0), n)
    q = min(max(q, 0), n)
    shape = (len(_combos(n, p)), len(_combos(n, q)), r)
    coeffs = np.empty(shape, dtype=object)
    z = _zero(n, order)
    coeffs[...] = z
    return FormJet(mj, p, q, r, coeffs)


def form_from_scalar(mj: MetricJet, f: Jet, r: int = 1,
                     component: int = 0) -> FormJet:
    out = zero_form(mj, 0, 0, r, order=f.order)
    out.coeffs[0, 0, component] = f
    return out


def random_form(mj: MetricJet, p: int, q: int, rng, r: int = 1,
                order: int | None = None) -> FormJet:
    """Random FormJet with dense random polynomial jet coefficients."""
    n = mj.n
    out = zero_form(mj, p, q, r, order)
    for idx in np.ndindex(out.coeffs.shape):
        base = out.coeffs[idx]
        vals = (rng.standard_normal(base.coeffs.shape)
                + 1j * rng.standard_normal(base.coeffs.shape))
        out.coeffs[idx] = Jet(n, base.order, vals)
    return out


# -- basis bookkeeping -----------------------------------------------------


def _insert(tup, k):
    """Sign and tuple for dz^k moved into sorted position of tup; None if k
    already present."""
    if k in tup:
        return None
    pos = bisect_left(tup, k)
    return (-1) ** pos, tup[:pos] + (k,) + tup[pos:]


def _remove(tup, k):
    if k not in tup:
        return None
    pos = tup.index(k)
    return (-1) ** pos, tup[:pos] + tup[pos + 1:]


def _wedge1_holo(phi: FormJet, i: int, coef: Jet | None = None) -> FormJet:
    """dz^i wedge phi (times an optional scalar jet)."""
    out = zero_form(phi.mj, phi.p + 1, phi.q, phi.r)
    if phi.p + 1 > phi.n:
        return out
    n = phi.n
    src_i = _combos(n, phi.p)
    dst = _combo_index(n, phi.p + 1)
    for a, I in enumerate(src_i):
        ins = _insert(I, i)
        if ins is None:
            continue
        sgn, I2 = ins
        for b in range(phi.coeffs.shape[1]):
            for al in range(phi.r):
                c = phi.coeffs[a, b, al]
                if coef is not None:
                    c = _jmul(c, coef)
                out.coeffs[dst[I2], b, al] = _jadd(
                    out.coeffs[dst[I2], b, al], c * float(sgn))
    return out


def _wedge1_anti(phi: FormJet, j: int, coef: Jet | None = None) -> FormJet:
    """dzbar^j wedge phi (times an optional scalar jet)."""
    out = zero_form(phi.mj, phi.p, phi.q + 1, phi.r)
    if phi.q + 1 > phi.n:
        return out
    n = phi.n
    src_j = _combos(n, phi.q)
    dst = _combo_index(n, phi.q + 1)
    base_sign = (-1) ** phi.p
    for b, J in enumerate(src_j):
        ins = _insert(J, j)
        if ins is None:
            continue
        sgn, J2 = ins
        s = float(base_sign * sgn)
        for a in range(phi.coeffs.shape[0]):
            for al in range(phi.r):
                c = phi.coeffs[a, b, al]
                if coef is not None:
                    c = _jmul(c, coef)
                out.coeffs[a, dst[J2], al] = _jadd(
                    out.coeffs[a, dst[J2], al], c * s)
    return out


def wedge(phi: FormJet, psi: FormJet) -> FormJet:
    """phi wedge psi; fiber ranks must agree or one factor must be scalar."""
    if phi.r != 1 and psi.r != 1 and phi.r != psi.r:
        raise StructuralError("wedge of two bundle-valued forms")
    r = max(phi.r, psi.r)
    n = phi.n
    p, q = phi.p + psi.p, phi.q + psi.q
    out = zero_form(phi.mj, p, q, r)
    if p > n or q > n:
        return out
    dst_i = _combo_index(n, p)
    dst_j = _combo_index(n, q)
    cross = (-1) ** (phi.q * psi.p)
    for a1, I1 in enumerate(_combos(n, phi.p)):
        for a2, I2 in enumerate(_combos(n, psi.p)):
            mi = _merge(I1, I2)
            if mi is None:
                continue
            si, I = mi
            for b1, J1 in enumerate(_combos(n, phi.q)):
                for b2, J2 in enumerate(_combos(n, psi.q)):
                    mj_ = _merge(J1, J2)
                    if mj_ is None:
                        continue
                    sj, J = mj_
                    s = float(cross * si * sj)
                    for al in range(r):
                        c1 = phi.coeffs[a1, b1, al if phi.r > 1 else 0]
                        c2 = psi.coeffs[a2, b2, al if psi.r > 1 else 0]
                        out.coeffs[dst_i[I], dst_j[J], al] = _jadd(
                            out.coeffs[dst_i[I], dst_j[J], al],
                            _jmul(c1, c2) * s)
    return out


def _merge(t1, t2):
    """Sign and sorted tuple of the concatenation; None on repeats."""
    sign = 1
    out = list(t1)
    for k in t2:
        if k in out:
            return None
        pos = bisect_left(out, k)
        sign *= (-1) ** (len(out) - pos)
        out.insert(pos, k)
    return sign, tuple(out)


def form_conj(phi: FormJet) -> FormJet:
    """Complex conjugate; bidegree (p, q) -> (q, p)."""
    out = zero_form(phi.mj, phi.q, phi.p, phi.r)
    sgn = float((-1) ** (phi.p * phi.q))
    for a in range(phi.coeffs.shape[0]):
        for b in range(phi.coeffs.shape[1]):
            for al in range(phi.r):
                out.coeffs[b, a, al] = jet_conj(phi.coeffs[a, b, al]) * sgn
    return out


def contract_holo(phi: FormJet, k: int) -> FormJet:
    """Interior product with d/dz^k."""
    out = zero_form(phi.mj, phi.p - 1, phi.q, phi.r)
    if phi.p == 0:
        return out
    n = phi.n
    dst = _combo_index(n, phi.p - 1)
    for a, I in enumerate(_combos(n, phi.p)):
        rm = _remove(I, k)
        if rm is None:
            continue
        sgn, I2 = rm
        for b in range(phi.coeffs.shape[1]):
            for al in range(phi.r):
                out.coeffs[dst[I2], b, al] = _jadd(
                    out.coeffs[dst[I2], b, al],
                    phi.coeffs[a, b, al] * float(sgn))
    return out


def contract_anti(phi: FormJet, k: int) -> FormJet:
    """Interior product with d/dzbar^k."""
    out = zero_form(phi.mj, phi.p, phi.q - 1, phi.r)
    if phi.q == 0:
        return out
    n = phi.n
    dst = _combo_index(n, phi.q - 1)
    base = (-1) ** phi.p
    for b, J in enumerate(_combos(n, phi.q)):
        rm = _remove(J, k)
        if rm is None:
            continue
        sgn, J2 = rm
        s = float(base * sgn)
        for a in range(phi.coeffs.shape[0]):
            for al in range(phi.r):
                out.coeffs[a, dst[J2], al] = _jadd(
                    out.coeffs[a, dst[J2], al], phi.coeffs[a, b, al] * s)
    return out


# -- differential operators ------------------------------------------------


def _dcoeffs(phi: FormJet, which: str, i: int) -> FormJet:
    out = zero_form(phi.mj, phi.p, phi.q, phi.r, order=phi.coeffs.flat[0].order - 1)
    for idx in np.ndindex(phi.coeffs.shape):
        out.coeffs[idx] = wirtinger(phi.coeffs[idx], which, i)
    return out


def partial(phi: FormJet) -> FormJet:
    out = zero_form(phi.mj, phi.p + 1, phi.q, phi.r)
    for i in range(phi.n):
        out = out + _wedge1_holo(_dcoeffs(phi, "holo", i), i)
    return out


def dbar(phi: FormJet) -> FormJet:
    out = zero_form(phi.mj, phi.p, phi.q + 1, phi.r)
    for j in range(phi.n):
        out = out + _wedge1_anti(_dcoeffs(phi, "antiholo", j), j)
    return out


_LC_CACHE: dict = {}


def _lc(mj: MetricJet):
    key = id(mj)
    hit = _LC_CACHE.get(key)
    if hit is not None and hit[0] is mj:
        return hit[1]
    table = levi_civita(mj)
    _LC_CACHE[key] = (mj, table)
    return table


def nabla_holo(phi: FormJet, i: int, conn: "ConnectionJet | None" = None):
    """Type-preserving covariant derivative in direction z^i (the (1,0)-part
    connection on the bundle of (p,q)-forms, plus a fiber connection)."""
    n = phi.n
    lc = _lc(phi.mj)
    out = _dcoeffs(phi, "holo", i)
    idx_p = _combo_index(n, phi.p)
    idx_q = _combo_index(n, phi.q)
    for a, I in enumerate(_combos(n, phi.p)):
        for b, J in enumerate(_combos(n, phi.q)):
            for t, slot in enumerate(I):
                for c in range(n):
                    gam = lc.entry(i, c, slot)
                    if gam.max_abs() == 0.0:
                        continue
                    rest = I[:t] + I[t + 1:]
                    ins = _insert(rest, c)
                    if ins is None:
                        continue
                    sgn, I2 = ins
                    s = float((-1) ** t * sgn)
                    for al in range(phi.r):
                        out.coeffs[idx_p[I2], b, al] = _jadd(
                            out.coeffs[idx_p[I2], b, al],
                            _jmul(phi.coeffs[a, b, al], gam) * (-s))
            for t, slot in enumerate(J):
                for c in range(n):
                    gam = lc.entry(i, n + c, n + slot)
                    if gam.max_abs() == 0.0:
                        continue
                    rest = J[:t] + J[t + 1:]
                    ins = _insert(rest, c)
                    if ins is None:
                        continue
                    sgn, J2 = ins
                    s = float((-1) ** t * sgn)
                    for al in range(phi.r):
                        out.coeffs[a, idx_q[J2], al] = _jadd(
                            out.coeffs[a, idx_q[J2], al],
                            _jmul(phi.coeffs[a, b, al], gam) * (-s))
    if conn is not None:
        for a in range(out.coeffs.shape[0]):
            for b in range(out.coeffs.shape[1]):
                for be in range(phi.r):
                    acc = out.coeffs[a, b, be]
                    for al in range(phi.r):
                        acc = _jadd(acc, _jmul(phi.coeffs[a, b, al],
                                               conn.amats[i][al][be]))
                    out.coeffs[a, b, be] = acc
    return out


def nabla_anti(phi: FormJet, j: int, conn: "ConnectionJet | None" = None):
    """Type-preserving covariant derivative in direction zbar^j."""
    n = phi.n
    lc = _lc(phi.mj)
    out = _dcoeffs(phi, "antiholo", j)
    idx_p = _combo_index(n, phi.p)
    idx_q = _combo_index(n, phi.q)
    jb = n + j
    for a, I in enumerate(_combos(n, phi.p)):
        for b, J in enumerate(_combos(n, phi.q)):
            for t, slot in enumerate(I):
                for c in range(n):
                    gam = lc.entry(jb, c, slot)
                    if gam.max_abs() == 0.0:
                        continue
                    rest = I[:t] + I[t + 1:]
                    ins = _insert(rest, c)
                    if ins is None:
                        continue
                    sgn, I2 = ins
                    s = float((-1) ** t * sgn)
                    for al in range(phi.r):
                        out.coeffs[idx_p[I2], b, al] = _jadd(
                            out.coeffs[idx_p[I2], b, al],
                            _jmul(phi.coeffs[a, b, al], gam) * (-s))
            for t, slot in enumerate(J):
                for c in range(n):
                    gam = lc.entry(jb, n + c, n + slot)
                    if gam.max_abs() == 0.0:
                        continue
                    rest = J[:t] + J[t + 1:]
                    ins = _insert(rest, c)
                    if ins is None:
                        continue
                    sgn, J2 = ins
                    s = float((-1) ** t * sgn)
                    for al in range(phi.r):
                        out.coeffs[a, idx_q[J2], al] = _jadd(
                            out.coeffs[a, idx_q[J2], al],
                            _jmul(phi.coeffs[a, b, al], gam) * (-s))
    if conn is not None:
        for a in range(out.coeffs.shape[0]):
            for b in range(out.coeffs.shape[1]):
                for be in range(phi.r):
                    acc = out.coeffs[a, b, be]
                    for al in range(phi.r):
                        acc = _jadd(acc, _jmul(phi.coeffs[a, b, al],
                                               conn.bmats[j][al][be]))
                    out.coeffs[a, b, be] = acc
    return out


def d_prime(phi: FormJet, conn=None) -> FormJet:
    out = zero_form(phi.mj, phi.p + 1, phi.q, phi.r)
    for i in range(phi.n):
        out = out + _wedge1_holo(nabla_holo(phi, i, conn), i)
    return out


def d_second(phi: FormJet, conn=None) -> FormJet:
    out = zero_form(phi.mj, phi.p, phi.q + 1, phi.r)
    for j in range(phi.n):
        out = out + _wedge1_anti(nabla_anti(phi, j, conn), j)
    return out


def delta0_prime(phi: FormJet, conn=None) -> FormJet:
    """-h^{i jbar} I_i nabla''_jbar"""
    mj = phi.mj
    out = zero_form(mj, phi.p - 1, phi.q, phi.r)
    if phi.p == 0:
        return out
    for j in range(phi.n):
        nb = nabla_anti(phi, j, conn)
        for i in range(phi.n):
            out = out + contract_holo(nb, i) * (mj.h_up(i, j) * (-1.0))
    return out


def delta0_second(phi: FormJet, conn=None) -> FormJet:
    """-h^{j ibar} I_ibar nabla'_j"""
    mj = phi.mj
    out = zero_form(mj, phi.p, phi.q - 1, phi.r)
    if phi.q == 0:
        return out
    for j in range(phi.n):
        nh = nabla_holo(phi, j, conn)
        for i in range(phi.n):
            out = out + contract_anti(nh, i) * (mj.hinv[i][j] * (-1.0))
    return out


# -- omega, L, Lambda, torsion operators -----------------------------------


def two_omega(mj: MetricJet) -> FormJet:
    out = zero_form(mj, 1, 1, 1)
    for i in range(mj.n):
        for j in range(mj.n):
            out.coeffs[i, j, 0] = mj.h[i][j] * 1j
    return out


def omega_form(mj: MetricJet) -> FormJet:
    return two_omega(mj) * 0.5


def l_op(phi: FormJet) -> FormJet:
    return wedge(two_omega(phi.mj), phi)


def lambda_op(phi: FormJet) -> FormJet:
    """sqrt(-1) h^{i jbar} I_i I_jbar"""
    mj = phi.mj
    out = zero_form(mj, phi.p - 1, phi.q - 1, phi.r)
    if phi.p == 0 or phi.q == 0:
        return out
    for j in range(phi.n):
        cj = contract_anti(phi, j)
        for i in range(phi.n):
            out = out + contract_holo(cj, i) * (mj.h_up(i, j) * 1j)
    return out


def c_op(phi: FormJet) -> FormJet:
    """Multiplication by the torsion (1,0)-form 2 Gamma_{j lbar}^{lbar} dz^j."""
    mj = phi.mj
    lc = _lc(mj)
    n = mj.n
    out = zero_form(mj, phi.p + 1, phi.q, phi.r)
    for j in range(n):
        eta = _zero(n, mj.order - 1)
        for l in range(n):
            eta = eta + lc.entry(j, n + l, n + l)
        out = out + _wedge1_holo(phi, j, coef=eta * 2.0)
    return out


def b_op(phi: FormJet) -> FormJet:
    """-2 Gamma_{i jbar}^{lbar} dz^i ^ dzbar^j I_lbar"""
    mj = phi.mj
    lc = _lc(mj)
    n = mj.n
    out = zero_form(mj, phi.p + 1, phi.q, phi.r)
    for l in range(n):
        cl = contract_anti(phi, l)
        for i in range(n):
            for j in range(n):
                gam = lc.entry(i, n + j, n + l)
                if gam.max_abs() == 0.0:
                    continue
                out = out + _wedge1_holo(_wedge1_anti(cl, j), i,
                                         coef=gam * (-2.0))
    return out


def a_op(phi: FormJet) -> FormJet:
    """-h^{k lbar} h_{i mbar} Gamma_{s lbar}^{mbar} dz^s ^ dz^i I_k"""
    mj = phi.mj
    lc = _lc(mj)
    n = mj.n
    out = zero_form(mj, phi.p + 1, phi.q, phi.r)
    if phi.p == 0:
        return out
    for k in range(n):
        ck = contract_holo(phi, k)
        for s in range(n):
            for i in range(n):
                coef = _zero(n, mj.order - 1)
                for l in range(n):
                    for m in range(n):
                        gam = lc.entry(s, n + l, n + m)
                        if gam.max_abs() == 0.0:
                            continue
                        coef = _jadd(coef, _jmul(_jmul(mj.h_up(k, l),
                                                       mj.h[i][m]), gam))
                if coef.max_abs() == 0.0:
                    continue
                out = out + _wedge1_holo(_wedge1_holo(ck, i), s,
                                         coef=coef * (-1.0))
    return out


def tau(phi: FormJet) -> FormJet:
    """[Lambda, 2 d'omega] — the type (1,0) torsion operator."""
    w = partial(two_omega(phi.mj))
    return lambda_op(wedge(w, phi)) - wedge(w, lambda_op(phi))


def tau_bar(phi: FormJet) -> FormJet:
    return form_conj(tau(form_conj(phi)))


# -- inner product and adjoints --------------------------------------------


def _det_hup(mj: MetricJet, I, K) -> Jet:
    """det over rows I, cols K of the raised metric h^{i kbar} as a Jet."""
    if len(I) == 0:
        return constant(1.0 + 0.0j, mj.n, mj.order)
    m = np.empty((len(I), len(K)), dtype=object)
    for a, i in enumerate(I):
        for b, k in enumerate(K):
            m[a, b] = mj.h_up(i, k)
    return det_jet(m)


def gram(mj: MetricJet, p: int, q: int) -> np.ndarray:
    """Gram matrix of the basis forms; entries are Jets."""
    ci, cj = _combos(mj.n, p), _combos(mj.n, q)
    g = np.empty((len(ci) * len(cj), len(ci) * len(cj)), dtype=object)
    scale = GRAM_SLOT_FACTOR ** (p + q)
    for a1, I in enumerate(ci):
        for b1, J in enumerate(cj):
            for a2, K in enumerate(ci):
                for b2, L in enumerate(cj):
                    val = _jmul(_det_hup(mj, I, K),
                                jet_conj(_det_hup(mj, J, L))) * scale
                    g[a1 * len(cj) + b1, a2 * len(cj) + b2] = val
    return g


def _flatten(phi: FormJet) -> np.ndarray:
    na, nb = phi.coeffs.shape[:2]
    return phi.coeffs.reshape(na * nb, phi.r)


def inner(phi: FormJet, psi: FormJet, fiber: np.ndarray | None = None) -> Jet:
    """Pointwise Hermitian inner product; result is a Jet (conjugate linear
    in psi).  fiber is an r x r matrix of Jets G[al][be] = <e_al, e_be>."""
    if (phi.p, phi.q, phi.r) != (psi.p, psi.q, psi.r):
        raise StructuralError("bidegree/rank mismatch in inner product")
    g = gram(phi.mj, phi.p, phi.q)
    x = _flatten(phi)
    y = _flatten(psi)
    acc = _zero(phi.n, phi.mj.order)
    for a in range(g.shape[0]):
        for b in range(g.shape[0]):
            for al in range(phi.r):
                for be in range(phi.r):
                    term = _jmul(_jmul(x[a, al], jet_conj(y[b, be])), g[a, b])
                    if fiber is not None:
                        term = _jmul(term, fiber[al][be])
                    elif al != be:
                        continue
                    acc = _jadd(acc, term)
    return acc


def _op_matrix(op, mj: MetricJet, p: int, q: int, r: int, dst):
    """Materialize a Jet-linear operator as a matrix of Jets from the (p,q)
    coefficient space into the coefficient space at bidegree dst."""
    na, nb = len(_combos(mj.n, p)), len(_combos(mj.n, q))
    cols = []
    for a in range(na):
        for b in range(nb):
            for al in range(r):
                e = zero_form(mj, p, q, r)
                e.coeffs[a, b, al] = constant(1.0 + 0.0j, mj.n, mj.order)
                img = op(e)
                if (img.p, img.q) != dst:
                    if not img.is_zero():
                        raise StructuralError(
                            "operator degree shift does not match ddeg")
                    img = zero_form(mj, dst[0], dst[1], r)
                cols.append(_flatten(img).reshape(-1))
    mat = np.empty((len(cols[0]), len(cols)), dtype=object)
    for c, col in enumerate(cols):
        mat[:, c] = col
    return mat


def _fiber_gram_expand(g: np.ndarray, fiber, r: int) -> np.ndarray:
    if r == 1 and fiber is None:
        return g
    m = g.shape[0]
    out = np.empty((m * r, m * r), dtype=object)
    for a in range(m):
        for b in range(m):
            for al in range(r):
                for be in range(r):
                    v = g[a, b]
                    if fiber is not None:
                        v = _jmul(v, fiber[al][be])
                    elif al != be:
                        v = v * 0.0
                    out[a * r + al, b * r + be] = v
    return out


def _mat_mul(A, B):
    out = np.empty((A.shape[0], B.shape[1]), dtype=object)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            acc = None
            for k in range(A.shape[1]):
                t = _jmul(A[i, k], B[k, j])
                acc = t if acc is None else _jadd(acc, t)
            out[i, j] = acc
    return out


def _mat_conj(A):
    out = np.empty_like(A)
    for idx in np.ndindex(A.shape):
        out[idx] = jet_conj(A[idx])
    return out


def star(op, phi: FormJet, ddeg, fiber=None) -> FormJet:
    """Exact pointwise adjoint of a Jet-linear (algebraic) operator.

    op maps (p,q) -> (p+dp, q+dq) with ddeg = (dp, dq); star(op) maps phi at
    (p,q) back to (p-dp, q-dq)."""
    dp, dq = ddeg
    mj = phi.mj
    sp, sq = phi.p - dp, phi.q - dq
    if not (0 <= sp <= phi.n and 0 <= sq <= phi.n):
        return zero_form(mj, max(sp, 0), max(sq, 0), phi.r)
    T = _op_matrix(op, mj, sp, sq, phi.r, (phi.p, phi.q))
    g_src = _fiber_gram_expand(gram(mj, sp, sq), fiber, phi.r)
    g_dst = _fiber_gram_expand(gram(mj, phi.p, phi.q), fiber, phi.r)
    # adjoint matrix: conj(T*) = Gs^{-1} T^T Gd
    gs_inv = jet_matrix_inverse(g_src)
    tstar = _mat_conj(_mat_mul(_mat_mul(gs_inv, T.T), g_dst))
    y = _flatten(phi).reshape(-1)
    out = zero_form(mj, sp, sq, phi.r)
    flat = _flatten(out)
    nb = len(_combos(mj.n, sq))
    for row in range(tstar.shape[0]):
        acc = None
        for col in range(tstar.shape[1]):
            t = _jmul(tstar[row, col], y[col])
            acc = t if acc is None else _jadd(acc, t)
        a, rem = divmod(row, nb * phi.r)
        b, al = divmod(rem, phi.r)
        out.coeffs[a, b, al] = acc
    return out


def lambda_matrix_adjoint(phi: FormJet) -> FormJet:
    """Lambda realized as the matrix adjoint of L; ground-truth cross-check
    for lambda_op."""
    return star(l_op, phi, (1, 1))


def _abar_star(phi):
    return star(lambda ps: form_conj(a_op(form_conj(ps))), phi, (0, 1))


def _bbar_star(phi):
    return star(lambda ps: form_conj(b_op(form_conj(ps))), phi, (0, 1))


def _cbar_star(phi):
    return star(lambda ps: form_conj(c_op(form_conj(ps))), phi, (0, 1))


def _a_star(phi):
    return star(a_op, phi, (1, 0))


def _b_star(phi):
    return star(b_op, phi, (1, 0))


def _c_star(phi):
    return star(c_op, phi, (1, 0))


def _tau_star(phi, fiber=None):
    return star(tau, phi, (1, 0), fiber)


def _tau_bar_star(phi, fiber=None):
    return star(tau_bar, phi, (0, 1), fiber)


def dbar_star(phi: FormJet) -> FormJet:
    """Local formula: delta''_0 - (Bbar* + Cbar*)/2."""
    return (delta0_second(phi)
            - (_bbar_star(phi) + _cbar_star(phi)) * 0.5)


def partial_star(phi: FormJet) -> FormJet:
    """Local formula: delta'_0 - (B* + C*)/2."""
    return delta0_prime(phi) - (_b_star(phi) + _c_star(phi)) * 0.5


def delta_prime(phi: FormJet) -> FormJet:
    """delta'_0 - C*/2."""
    return delta0_prime(phi) - _c_star(phi) * 0.5


def delta_second(phi: FormJet) -> FormJet:
    """delta''_0 - Cbar*/2."""
    return delta0_second(phi) - _cbar_star(phi) * 0.5


OPERATORS = {
    "L": l_op,
    "Lambda": lambda_op,
    "partial": partial,
    "dbar": dbar,
    "Dprime": d_prime,
    "Dsecond": d_second,
    "delta0prime": delta0_prime,
    "delta0second": delta0_second,
    "deltaprime": delta_prime,
    "deltasecond": delta_second,
    "A": a_op,
    "B": b_op,
    "C": c_op,
    "tau": tau,
    "taubar": tau_bar,
    "Astar": _a_star,
    "Bstar": _b_star,
    "Cstar": _c_star,
    "Abarstar": _abar_star,
    "Bbarstar": _bbar_star,
    "Cbarstar": _cbar_star,
    "taustar": _tau_star,
    "taubarstar": _tau_bar_star,
    "partialstar": partial_star,
    "dbarstar": dbar_star,
}


def apply(name: str, phi: FormJet) -> FormJet:
    if name not in OPERATORS:
        raise ValidationError(f"unknown operator {name!r}")
    return OPERATORS[name](phi)


# -- identity suite --------------------------------------------------------


def _comm(f, g, phi):
    return f(g(phi)) - g(f(phi))


def identity_suite(mj: MetricJet, trials: int, seed: int) -> dict:
    """Max residual (constant coefficient) of each operator identity over
    random forms of random bidegrees."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = mj.n
    res = {k: 0.0 for k in ("lambda_a", "lambda_b", "lambda_c",
                            "partial_split", "dbar_star_split",
                            "kahler_torsion", "torsion_form")}
    for _ in range(trials):
        p = int(rng.integers(0, n + 1))
        q = int(rng.integers(0, n + 1))
        phi = random_form(mj, p, q, rng)
        r1 = _comm(lambda_op, a_op, phi) + _bbar_star(phi) * 1j
        res["lambda_a"] = max(res["lambda_a"], r1.max_const())
        r2 = (_comm(lambda_op, b_op, phi)
              + (_abar_star(phi) * 2.0 + _bbar_star(phi)
                 + _cbar_star(phi)) * 1j)
        res["lambda_b"] = max(res["lambda_b"], r2.max_const())
        r3 = _comm(lambda_op, c_op, phi) + _cbar_star(phi) * 1j
        res["lambda_c"] = max(res["lambda_c"], r3.max_const())
        r4 = partial(phi) - d_prime(phi) + b_op(phi) * 0.5
        res["partial_split"] = max(res["partial_split"], r4.max_const())
        r5 = (dbar_star(phi) - delta0_second(phi)
              + (_bbar_star(phi) + _cbar_star(phi)) * 0.5)
        res["dbar_star_split"] = max(res["dbar_star_split"], r5.max_const())
        r6 = (lambda_op(partial(phi)) - partial(lambda_op(phi))
              - (dbar_star(phi) + _tau_bar_star(phi)) * 1j)
        res["kahler_torsion"] = max(res["kahler_torsion"], r6.max_const())
    w = omega_form(mj)
    r7 = dbar_star(w) - lambda_op(partial(w)) * 1j
    res["torsion_form"] = r7.max_const()
    return res


# -- bundle-valued machinery -----------------------------------------------


@dataclass(frozen=True)
class ConnectionJet:
    r: int
    amats: tuple  # amats[i][al][be]: Jet, direction z^i
    bmats: tuple  # bmats[j][al][be]: Jet, direction zbar^j
    fiber: tuple  # fiber[al][be]: Jet, <e_al, e_be>


def trivial_connection(mj: MetricJet, r: int = 1) -> ConnectionJet:
    n = mj.n
    z = _zero(n, mj.order)
    one = constant(1.0 + 0.0j, n, mj.order)
    amats = tuple(tuple(tuple(z for _ in range(r)) for _ in range(r))
                  for _ in range(n))
    fiber = tuple(tuple(one if a == b else z for b in range(r))
                  for a in range(r))
    return ConnectionJet(r=r, amats=amats, bmats=amats, fiber=fiber)


def chern_connection(mj: MetricJet) -> ConnectionJet:
    """The tangent bundle E = T^{1,0}M with its holomorphic-metric
    connection: fiber metric h, (1,0)-part from the metric, (0,1)-part 0."""
    from .connection import chern as chern_table
    n = mj.n
    tab = chern_table(mj)
    z = _zero(n, mj.order - 1)
    amats = tuple(tuple(tuple(tab.entries[i][a][b] for b in range(n))
                        for a in range(n)) for i in range(n))
    bz = tuple(tuple(tuple(z for _ in range(n)) for _ in range(n))
               for _ in range(n))
    fiber = tuple(tuple(mj.h[a][b] for b in range(n)) for a in range(n))
    return ConnectionJet(r=n, amats=amats, bmats=bz, fiber=fiber)


def random_metric_connection(mj: MetricJet, r: int, seed: int) -> ConnectionJet:
    """Random connection jets compatible with the identity fiber metric:
    B_j = -A_j^H at jet level."""
    n = mj.n
    rng = np.random.default_rng(seed)
    z = _zero(n, mj.order)
    one = constant(1.0 + 0.0j, n, mj.order)
    amats = []
    bmats = []
    for _ in range(n):
        A = [[None] * r for _ in range(r)]
        B = [[None] * r for _ in range(r)]
        for al in range(r):
            for be in range(r):
                shape = z.coeffs.shape
                A[al][be] = Jet(n, z.order,
                                (rng.standard_normal(shape)
                                 + 1j * rng.standard_normal(shape)) * 0.3)
        for al in range(r):
            for be in range(r):
                B[al][be] = jet_conj(A[be][al]) * (-1.0)
        amats.append(tuple(tuple(row) for row in A))
        bmats.append(tuple(tuple(row) for row in B))
    fiber = tuple(tuple(one if a == b else z for b in range(r))
                  for a in range(r))
    return ConnectionJet(r=r, amats=tuple(amats), bmats=tuple(bmats),
                         fiber=fiber)


def check_metric_compatible(conn: ConnectionJet, n: int,
                            tol: float = 1e-10) -> None:
    """d<s,t> = <nabla s, t> + <s, nabla t> at jet level; raises naming the
    violated coefficient."""
    r = conn.r
    for i in range(n):
        for al in range(r):
            for be in range(r):
                lhs = wirtinger(conn.fiber[al][be], "holo", i)
                rhs = _zero(n, lhs.order)
                for ga in range(r):
                    rhs = _jadd(rhs, _jmul(conn.amats[i][al][ga],
                                           conn.fiber[ga][be]))
                    rhs = _jadd(rhs, _jmul(jet_conj(conn.bmats[i][be][ga]),
                                           conn.fiber[al][ga]))
                d = _jadd(lhs, rhs * (-1.0))
                if d.max_abs() > tol:
                    raise ValidationError(
                        "connection not metric-compatible at fiber entry "
                        f"({al}, {be}), direction z^{i + 1}")


def partial_e(phi: FormJet, conn: ConnectionJet) -> FormJet:
    out = zero_form(phi.mj, phi.p + 1, phi.q, phi.r)
    for i in range(phi.n):
        d = _dcoeffs(phi, "holo", i)
        for a in range(phi.coeffs.shape[0]):
            for b in range(phi.coeffs.shape[1]):
                for be in range(phi.r):
                    acc = d.coeffs[a, b, be]
                    for al in range(phi.r):
                        acc = _jadd(acc, _jmul(phi.coeffs[a, b, al],
                                               conn.amats[i][al][be]))
                    d.coeffs[a, b, be] = acc
        out = out + _wedge1_holo(d, i)
    return out


def dbar_e(phi: FormJet, conn: ConnectionJet) -> FormJet:
    out = zero_form(phi.mj, phi.p, phi.q + 1, phi.r)
    for j in range(phi.n):
        d = _dcoeffs(phi, "antiholo", j)
        for a in range(phi.coeffs.shape[0]):
            for b in range(phi.coeffs.shape[1]):
                for be in range(phi.r):
                    acc = d.coeffs[a, b, be]
                    for al in range(phi.r):
                        acc = _jadd(acc, _jmul(phi.coeffs[a, b, al],
                                               conn.bmats[j][al][be]))
                    d.coeffs[a, b, be] = acc
        out = out + _wedge1_anti(d, j)
    return out


def _fiber_split(phi: FormJet):
    """Scalar forms phi^alpha such that phi = sum phi^alpha x e_alpha."""
    comps = []
    for al in range(phi.r):
        f = zero_form(phi.mj, phi.p, phi.q, 1)
        for a in range(phi.coeffs.shape[0]):
            for b in range(phi.coeffs.shape[1]):
                f.coeffs[a, b, 0] = phi.coeffs[a, b, al]
        comps.append(f)
    return comps


def _fiber_join(mj, comps_per_fiber, p, q, r):
    out = zero_form(mj, p, q, r)
    for al, f in enumerate(comps_per_fiber):
        for a in range(out.coeffs.shape[0]):
            for b in range(out.coeffs.shape[1]):
                out.coeffs[a, b, al] = _jadd(out.coeffs[a, b, al],
                                             f.coeffs[a, b, 0])
    return out


def dbar_e_star(phi: FormJet, conn: ConnectionJet) -> FormJet:
    """(dbar* phi^al) x e_al - h^{i jbar} (I_jbar phi^al) nabla_i e_al."""
    mj = phi.mj
    comps = _fiber_split(phi)
    out = zero_form(mj, phi.p, phi.q - 1, phi.r)
    base = [dbar_star(c) for c in comps]
    out = out + _fiber_join(mj, base, phi.p, phi.q - 1, phi.r)
    for al, c in enumerate(comps):
        for j in range(phi.n):
            cj = contract_anti(c, j)
            for i in range(phi.n):
                for be in range(phi.r):
                    coef = _jmul(mj.h_up(i, j), conn.amats[i][al][be])
                    term = cj * (coef * (-1.0))
                    for a in range(out.coeffs.shape[0]):
                        for b in range(out.coeffs.shape[1]):
                            out.coeffs[a, b, be] = _jadd(
                                out.coeffs[a, b, be], term.coeffs[a, b, 0])
    return out


def partial_e_star(phi: FormJet, conn: ConnectionJet) -> FormJet:
    """Conjugate-dual local formula: (partial* phi^al) x e_al
    - h^{j ibar} (I_j phi^al) nabla''_ibar e_al."""
    mj = phi.mj
    comps = _fiber_split(phi)
    out = zero_form(mj, phi.p - 1, phi.q, phi.r)
    base = [partial_star(c) for c in comps]
    out = out + _fiber_join(mj, base, phi.p - 1, phi.q, phi.r)
    for al, c in enumerate(comps):
        for j in range(phi.n):
            cj = contract_holo(c, j)
            for i in range(phi.n):
                for be in range(phi.r):
                    coef = _jmul(mj.hinv[i][j], conn.bmats[i][al][be])
                    term = cj * (coef * (-1.0))
                    for a in range(out.coeffs.shape[0]):
                        for b in range(out.coeffs.shape[1]):
                            out.coeffs[a, b, be] = _jadd(
                                out.coeffs[a, b, be], term.coeffs[a, b, 0])
    return out


def _tau_e(phi: FormJet) -> FormJet:
    """tau on bundle-valued forms acts through the form part only."""
    w = partial(two_omega(phi.mj))
    return lambda_op(wedge(w, phi)) - wedge(w, lambda_op(phi))


def _tau_bar_e(phi: FormJet) -> FormJet:
    w = form_conj(partial(two_omega(phi.mj)))
    return lambda_op(wedge(w, phi)) - wedge(w, lambda_op(phi))


def bundle_identity_suite(mj: MetricJet, conn: ConnectionJet,
                          trials: int, seed: int) -> dict:
    """Residuals of the bundle commutator identities, curvature tensoriality
    and the torsion/section identity on random E-valued forms."""
    check_metric_compatible(conn, mj.n)
    rng = np.random.default_rng(seed)
    n, r = mj.n, conn.r
    fib = conn.fiber
    res = {k: 0.0 for k in ("dbar_e_star_L", "partial_e_star_L",
                            "lambda_partial_e", "lambda_dbar_e",
                            "tensoriality", "torsion_section")}
    for _ in range(trials):
        p = int(rng.integers(0, n + 1))
        q = int(rng.integers(0, n + 1))
        phi = random_form(mj, p, q, rng, r=r)
        pe = lambda f: partial_e(f, conn)
        de = lambda f: dbar_e(f, conn)
        pes = lambda f: partial_e_star(f, conn)
        des = lambda f: dbar_e_star(f, conn)
        r1 = (des(l_op(phi)) - l_op(des(phi))
              - (pe(phi) + _tau_e(phi)) * 1j)
        res["dbar_e_star_L"] = max(res["dbar_e_star_L"], r1.max_const())
        r2 = (pes(l_op(phi)) - l_op(pes(phi))
              + (de(phi) + _tau_bar_e(phi)) * 1j)
        res["partial_e_star_L"] = max(res["partial_e_star_L"], r2.max_const())
        r3 = (lambda_op(pe(phi)) - pe(lambda_op(phi))
              - (des(phi) + star(_tau_bar_e, phi, (0, 1), fib)) * 1j)
        res["lambda_partial_e"] = max(res["lambda_partial_e"], r3.max_const())
        r4 = (lambda_op(de(phi)) - de(lambda_op(phi))
              + (pes(phi) + star(_tau_e, phi, (1, 0), fib)) * 1j)
        res["lambda_dbar_e"] = max(res["lambda_dbar_e"], r4.max_const())
        # curvature tensoriality on a product phi_scalar x s
        phis = random_form(mj, p, q, rng, r=1)
        s = random_form(mj, 0, 0, rng, r=r)
        prod = _tensor(phis, s)
        lhs = pe(de(prod)) + de(pe(prod))
        rhs_s = pe(de(s)) + de(pe(s))
        rhs = _wedge_scalar_bundle(phis, rhs_s)
        r5 = lhs - rhs
        res["tensoriality"] = max(res["tensoriality"], r5.max_const())
    # Lemma 4.6: tau(s) = -2 sqrt(-1) (dbar* omega) . s for sections s
    s = random_form(mj, 0, 0, rng, r=r)
    dso = dbar_star(omega_form(mj))
    r6 = _tau_e(s) - _wedge_scalar_bundle(dso, s) * (-2j)
    res["torsion_section"] = r6.max_const()
    return res


def _tensor(phis: FormJet, s: FormJet) -> FormJet:
    """(scalar form) x (section): multiply the section coefficients in."""
    out = zero_form(phis.mj, phis.p, phis.q, s.r)
    for a in range(phis.coeffs.shape[0]):
        for b in range(phis.coeffs.shape[1]):
            for al in range(s.r):
                out.coeffs[a, b, al] = _jmul(phis.coeffs[a, b, 0],
                                             s.coeffs[0, 0, al])
    return out


def _wedge_scalar_bundle(phis: FormJet, psi: FormJet) -> FormJet:
    """Wedge of a scalar form with a bundle-valued form."""
    return wedge(phis, psi)


def second_hermitian_ricci(conn: ConnectionJet, mj: MetricJet) -> np.ndarray:
    """Tr_omega R^E lowered with the fiber metric: an r x r Hermitian
    matrix with entries h^{i jbar} R_{i jbar al}^{ga} <e_ga, e_be>."""
    n, r = mj.n, conn.r
    A = conn.amats
    B = conn.bmats
    out = np.zeros((r, r), dtype=complex)
    for i in range(n):
        for j in range(n):
            up = mj.h_up(i, j).const
            if up == 0:
                continue
            for al in range(r):
                for ga in range(r):
                    v = (-wirtinger(A[i][al][ga], "antiholo", j).const
                         + wirtinger(B[j][al][ga], "holo", i).const)
                    for de in range(r):
                        v -= A[i][al][de].const * B[j][de][ga].const
                        v += B[j][al][de].const * A[i][de][ga].const
                    for be in range(r):
                        out[al, be] += up * v * conn.fiber[ga][be].const
    return out
