"""Truncated power-series (jet) arithmetic in 2n commuting variables.

A ``Jet`` stores a complex polynomial in the formal variables
``z^1..z^n, zbar^1..zbar^n`` truncated at a total degree ``order``.  The two
families of variables are treated as independent commuting symbols, so the
Wirtinger derivatives d/dz^i and d/dzbar^j are exact formal derivatives.

Coefficients live in a dense 1-D numpy array over a per-(n, order) monomial
basis; the basis is sorted by total degree first, which makes truncation to a
lower order a prefix slice and lets derivative results (order - 1) reuse the
same index map.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .errors import OrderExhaustedError, SingularSeriesError, StructuralError

__all__ = [
    "Jet",
    "jet_mul",
    "wirtinger",
    "jet_conj",
    "jet_inverse",
    "jet_matrix_inverse",
    "variable",
    "constant",
    "truncate",
]


def _monomials(nvars: int, max_deg: int):
    """All exponent tuples of length nvars with total degree <= max_deg,
    sorted by (total degree, lexicographic)."""
    out = []
    for deg in range(max_deg + 1):
        # combinations_with_replacement over variable slots -> exponent vectors
        level = set()
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            level.add(tuple(e))
        out.extend(sorted(level))
    return out


class _Algebra:
    """Cached multiplication/derivative/conjugation tables for one (n, order)."""

    def __init__(self, n: int, order: int):
        self.n = n
        self.order = order
        self.exponents = _monomials(2 * n, order)
        self.index = {e: i for i, e in enumerate(self.exponents)}
        self.size = len(self.exponents)
        self.degrees = np.array([sum(e) for e in self.exponents])
        # number of monomials of total degree <= d, for prefix truncation
        self.size_at = [int(np.sum(self.degrees <= d)) for d in range(order + 1)]

        # multiplication triples: coeffs[t] += a[i] * b[j]
        mi, mj, mt = [], [], []
        for i, ei in enumerate(self.exponents):
            di = sum(ei)
            for j, ej in enumerate(self.exponents):
                if di + sum(ej) > order:
                    continue
                mi.append(i)
                mj.append(j)
                mt.append(self.index[tuple(a + b for a, b in zip(ei, ej))])
        self.mul_i = np.array(mi)
        self.mul_j = np.array(mj)
        self.mul_t = np.array(mt)

        # derivative gather maps, one per variable slot v in 0..2n-1
        self.deriv_src = []
        self.deriv_dst = []
        self.deriv_fac = []
        for v in range(2 * n):
            src, dst, fac = [], [], []
            for i, e in enumerate(self.exponents):
                if e[v] == 0:
                    continue
                low = list(e)
                low[v] -= 1
                src.append(i)
                dst.append(self.index[tuple(low)])  # valid in the (order-1) prefix
                fac.append(e[v])
            self.deriv_src.append(np.array(src, dtype=int))
            self.deriv_dst.append(np.array(dst, dtype=int))
            self.deriv_fac.append(np.array(fac, dtype=float))

        # conjugation permutes z^alpha zbar^beta -> z^beta zbar^alpha
        self.conj_perm = np.array(
            [self.index[e[n:] + e[:n]] for e in self.exponents]
        )


@lru_cache(maxsize=None)
def _algebra(n: int, order: int) -> _Algebra:
    return _Algebra(n, order)


class Jet:
    """Immutable truncated power series in (z^1..z^n, zbar^1..zbar^n)."""

    __slots__ = ("n", "order", "coeffs", "_alg")

    def __init__(self, n: int, order: int, coeffs=None):
        if order < 0:
            raise StructuralError("jet order must be >= 0")
        alg = _algebra(n, order)
        if coeffs is None:
            c = np.zeros(alg.size, dtype=complex)
        else:
            c = np.asarray(coeffs, dtype=complex)
            if c.shape != (alg.size,):
                raise StructuralError(
                    f"coefficient array has shape {c.shape}, expected ({alg.size},)"
                )
            c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "_alg", alg)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Jet is immutable")

    # -- accessors ---------------------------------------------------------

    @property
    def const(self) -> complex:
        """Constant term (value of the series at 0)."""
        return complex(self.coeffs[0])

    def coeff(self, alpha, beta) -> complex:
        """Coefficient of z^alpha zbar^beta."""
        key = tuple(alpha) + tuple(beta)
        idx = self._alg.index.get(key)
        if idx is None:
            raise StructuralError(f"multi-degree {key} exceeds order {self.order}")
        return complex(self.coeffs[idx])

    def eval(self, dz) -> complex:
        """Evaluate the series at displacement dz (zbar slots get conj(dz))."""
        dz = np.asarray(dz, dtype=complex)
        vals = np.concatenate([dz, np.conj(dz)])
        total = 0.0 + 0.0j
        for e, c in zip(self._alg.exponents, self.coeffs):
            if c != 0:
                total += c * np.prod(vals ** np.array(e))
        return complex(total)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Jet"):
        if self.n != other.n or self.order != other.order:
            raise StructuralError(
                f"jet mismatch: (n={self.n}, K={self.order}) vs "
                f"(n={other.n}, K={other.order})"
            )

    def __add__(self, other):
        if np.isscalar(other):
            c = self.coeffs.copy()
            c[0] += other
            return Jet(self.n, self.order, c)
        self._check(other)
        return Jet(self.n, self.order, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.n, self.order, -self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return Jet(self.n, self.order, self.coeffs * other)
        self._check(other)
        alg = self._alg
        out = np.zeros(alg.size, dtype=complex)
        np.add.at(out, alg.mul_t, self.coeffs[alg.mul_i] * other.coeffs[alg.mul_j])
        return Jet(self.n, self.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return self * (1.0 / other)
        return self * jet_inverse(other)

    def conj(self) -> "Jet":
        return Jet(self.n, self.order, np.conj(self.coeffs)[self._alg.conj_perm])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __repr__(self):
        terms = []
        for e, c in zip(self._alg.exponents, self.coeffs):
            if abs(c) > 0:
                terms.append(f"{c:.3g}*{e}")
        body = " + ".join(terms[:6]) or "0"
        if len(terms) > 6:
            body += " + ..."
        return f"Jet(n={self.n}, K={self.order}: {body})"


# -- module-level operations ----------------------------------------------


def constant(value: complex, n: int, order: int) -> Jet:
    c = np.zeros(_algebra(n, order).size, dtype=complex)
    c[0] = value
    return Jet(n, order, c)


def variable(n: int, order: int, index: int, barred: bool = False) -> Jet:
    """The formal variable z^index (or zbar^index), index in 0..n-1."""
    if not 0 <= index < n:
        raise StructuralError(f"variable index {index} out of range for n={n}")
    if order < 1:
        raise StructuralError("order must be >= 1 to hold a linear term")
    alg = _algebra(n, order)
    e = [0] * (2 * n)
    e[index + (n if barred else 0)] = 1
    c = np.zeros(alg.size, dtype=complex)
    c[alg.index[tuple(e)]] = 1.0
    return Jet(n, order, c)


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_conj(a: Jet) -> Jet:
    return a.conj()


def truncate(a: Jet, order: int) -> Jet:
    """Restrict a jet to a lower truncation order (prefix of the basis)."""
    if order > a.order:
        raise StructuralError(f"cannot raise order {a.order} to {order}")
    if order == a.order:
        return a
    m = a._alg.size_at[order]
    return Jet(a.n, order, a.coeffs[:m])


def wirtinger(a: Jet, which: str, index: int) -> Jet:
    """Formal d/dz^index ('holo') or d/dzbar^index ('antiholo'); index 0-based.

    The result has order K-1.
    """
    if a.order == 0:
        raise OrderExhaustedError("cannot differentiate an order-0 jet")
    if which not in ("holo", "antiholo"):
        raise StructuralError(f"unknown derivative kind {which!r}")
    if not 0 <= index < a.n:
        raise StructuralError(f"derivative index {index} out of range for n={a.n}")
    v = index + (a.n if which == "antiholo" else 0)
    alg = a._alg
    out = np.zeros(_algebra(a.n, a.order - 1).size, dtype=complex)
    out[alg.deriv_dst[v]] = alg.deriv_fac[v] * a.coeffs[alg.deriv_src[v]]
    return Jet(a.n, a.order - 1, out)


def jet_inverse(a: Jet) -> Jet:
    """Multiplicative inverse: a * jet_inverse(a) = 1 through degree K."""
    c0 = a.const
    if c0 == 0:
        raise SingularSeriesError("series has zero constant term")
    x = constant(1.0 / c0, a.n, a.order)
    # Newton iteration doubles the correct degree each pass
    passes = max(1, int(np.ceil(np.log2(a.order + 1))) + 1)
    for _ in range(passes):
        x = x * (2.0 - a * x)
    return x


def jet_matrix_inverse(m) -> np.ndarray:
    """Inverse of a square matrix of Jets by Gaussian elimination.

    Pivots are chosen by largest constant-term modulus, which is safe because
    the intended inputs have Hermitian positive-definite constant term.
    """
    m = np.asarray(m, dtype=object)
    k = m.shape[0]
    if m.shape != (k, k):
        raise StructuralError(f"matrix must be square, got {m.shape}")
    proto = m[0, 0]
    n, order = proto.n, proto.order
    aug = np.empty((k, 2 * k), dtype=object)
    for i in range(k):
        for j in range(k):
            aug[i, j] = m[i, j]
            aug[i, k + j] = constant(1.0 if i == j else 0.0, n, order)
    for col in range(k):
        piv = max(range(col, k), key=lambda r: abs(aug[r, col].const))
        if abs(aug[piv, col].const) == 0:
            raise SingularSeriesError("matrix of jets has singular constant term")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        inv_piv = jet_inverse(aug[col, col])
        for j in range(2 * k):
            aug[col, j] = aug[col, j] * inv_piv
        for r in range(k):
            if r == col:
                continue
            f = aug[r, col]
            if f.max_abs() == 0:
                continue
            for j in range(2 * k):
                aug[r, j] = aug[r, j] - f * aug[col, j]
    return aug[:, k:].copy()
