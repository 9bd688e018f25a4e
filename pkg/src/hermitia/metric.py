"""Hermitian metric fields on a chart and their Taylor jets.

Supported kinds:

- ``Flat``: h = identity.
- ``Hopf``: h = 4 delta_ij / |z|^2 on C^n minus the origin.
- ``NormalForm``: polynomial perturbation of the identity with zero linear
  term, so h(0) = identity and all Christoffel symbols vanish at 0.
- ``TorusFourier``: finite Fourier series over the real torus [0,1)^{2n},
  with z^j = x^j + i x^{n+j}.
- ``Scaled``: positive constant multiple of a base field.

``metric_jet`` produces exact Taylor jets of h and h^{-1} at a point; all
connection and curvature computations downstream consume only ``MetricJet``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import factorial

import numpy as np

from .errors import DomainError, ParseError, StructuralError, ValidationError
from .jets import Jet, constant, jet_matrix_inverse, variable

__all__ = [
    "MetricField",
    "MetricJet",
    "flat_metric",
    "hopf_metric",
    "polynomial_metric",
    "normal_form_random",
    "normal_coordinates_random",
    "normal_form_balanced",
    "normal_form_skt",
    "normal_form_balanced_skt",
    "torus_fourier",
    "potential_kahler_torus",
    "separable_kahler_torus",
    "random_torus_fourier",
    "scaled",
    "evaluate",
    "metric_jet",
    "ingest_torus_metric",
    "write_torus_metric",
]

_POS_EIG_TOL = 1e-10


@dataclass(frozen=True)
class MetricJet:
    """Jets of h and h^{-1} at a point, the input to every curvature routine.

    ``h[i][j]`` is the Jet of h_{i jbar}; ``hinv`` is the matrix inverse, so
    the tensor h^{i jbar} is ``hinv[j][i]``.
    """

    n: int
    order: int
    point: np.ndarray
    h: np.ndarray      # (n, n) object array of Jets
    hinv: np.ndarray   # (n, n) object array of Jets

    def h_up(self, i: int, j: int) -> Jet:
        """The inverse-metric tensor entry h^{i jbar}."""
        return self.hinv[j][i]

    def h_at0(self) -> np.ndarray:
        return np.array([[self.h[i][j].const for j in range(self.n)]
                         for i in range(self.n)])

    def hinv_at0(self) -> np.ndarray:
        return np.array([[self.hinv[i][j].const for j in range(self.n)]
                         for i in range(self.n)])


@dataclass(frozen=True)
class MetricField:
    """A Hermitian metric field on a chart of C^n (or the torus)."""

    n: int
    kind: str  # Flat | Hopf | NormalForm | TorusFourier | Scaled
    # NormalForm: list of (alpha, beta, M) monomial terms; the field value is
    #   identity + sum M z^alpha zbar^beta (conjugate partners included).
    terms: tuple = ()
    # TorusFourier: list of (m, A) with m an int vector of length 2n.
    modes: tuple = ()
    base: "MetricField | None" = None
    factor: float = 1.0

    def admissible(self, z) -> bool:
        if self.kind == "Hopf":
            return float(np.linalg.norm(z)) > 0
        if self.kind == "Scaled":
            return self.base.admissible(z)
        return True


# -- constructors ----------------------------------------------------------


def flat_metric(n: int) -> MetricField:
    return MetricField(n=n, kind="Flat")


def hopf_metric(n: int) -> MetricField:
    if n < 2:
        raise StructuralError("the Hopf family needs n >= 2")
    return MetricField(n=n, kind="Hopf")


def scaled(base: MetricField, factor: float) -> MetricField:
    if factor <= 0:
        raise ValidationError("scale factor must be positive")
    return MetricField(n=base.n, kind="Scaled", base=base, factor=factor)


def polynomial_metric(n: int, terms, allow_linear: bool = False) -> MetricField:
    """Identity plus a Hermitian polynomial perturbation.

    ``terms`` is an iterable of (alpha, beta, M): a contribution
    M_{ij} z^alpha zbar^beta to h_{i jbar}.  The conjugate-partner term
    (beta, alpha, M^H) is added automatically so the field is Hermitian.
    """
    full = []
    for alpha, beta, M in terms:
        alpha, beta = tuple(alpha), tuple(beta)
        M = np.asarray(M, dtype=complex)
        deg = sum(alpha) + sum(beta)
        if deg == 0:
            raise StructuralError("degree-0 terms are not allowed; h(0) = identity")
        if deg == 1 and not allow_linear:
            raise StructuralError("normal-form fields have zero linear term")
        full.append((alpha, beta, M))
        full.append((beta, alpha, M.conj().T))
    return MetricField(n=n, kind="NormalForm", terms=tuple(full))


def _hermitize_quadratic(n, d):
    """Enforce conj(h_{i jbar}) = h_{j ibar} on a mixed-quadratic tensor:
    d[i,j,k,l] is the coefficient of z^k zbar^l in h_{i jbar}."""
    return (d + np.conj(np.transpose(d, (1, 0, 3, 2)))) / 2


def _quadratic_terms(n, d, p):
    """Build monomial terms from a Hermitian mixed tensor d[i,j,k,l]
    (z^k zbar^l) and a pure tensor p[i,j,k,l] (z^k z^l, symmetric in k,l).
    Conjugate partners of the pure terms are added by polynomial_metric."""
    terms = []
    e = np.eye(n, dtype=int)
    for k in range(n):
        for l in range(n):
            M = d[:, :, k, l]
            if np.any(M):
                # append both halves directly: d is already Hermitian-paired
                terms.append((tuple(e[k]), tuple(e[l]), M / 1.0))
    ptrms = []
    for k in range(n):
        for l in range(k, n):
            M = p[:, :, k, l] + (p[:, :, l, k] if l != k else 0)
            if np.any(M):
                ptrms.append((tuple(e[k] + e[l]), (0,) * n, M))
    return terms, ptrms


def _assemble_polynomial(n, d, p, cubic=None):
    d = _hermitize_quadratic(n, d)
    mixed, pure = _quadratic_terms(n, d, p)
    # mixed terms already include their own conjugate partners, so halve them
    # before polynomial_metric doubles everything.
    terms = [(a, b, M / 2.0) for a, b, M in mixed] + pure
    if cubic is not None:
        terms.extend(cubic)
    return polynomial_metric(n, terms)


def normal_form_random(n: int, seed: int, scale: float = 0.1,
                       with_cubic: bool = True) -> MetricField:
    """Random zero-linear-term polynomial metric: generic second derivatives."""
    rng = np.random.default_rng(seed)

    def cplx(shape):
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    d = cplx((n, n, n, n))
    p = cplx((n, n, n, n))
    cubic = []
    if with_cubic:
        e = np.eye(n, dtype=int)
        for k in range(n):
            for l in range(n):
                for m in range(n):
                    M = cplx((n, n)) * 0.3
                    cubic.append((tuple(e[k] + e[l]), tuple(e[m]), M))
    return _assemble_polynomial(n, d, p, cubic)


def normal_coordinates_random(n: int, seed: int, scale: float = 0.1) -> MetricField:
    """Polynomial metric with h(0) = identity and vanishing symmetrized
    Christoffels at 0, but generically nonzero first derivatives: the linear
    coefficient tensor is antisymmetric in (derivative, row) so that
    dh_{i qbar}/dz^j + dh_{j qbar}/dz^i = 0 at the origin."""
    rng = np.random.default_rng(seed)
    t = scale * (rng.standard_normal((n, n, n))
                 + 1j * rng.standard_normal((n, n, n)))
    t = t - np.transpose(t, (1, 0, 2))
    e = np.eye(n, dtype=int)
    terms = [(tuple(e[k]), (0,) * n, t[k]) for k in range(n)]
    rng2 = np.random.default_rng(seed + 1)
    d = scale * (rng2.standard_normal((n, n, n, n))
                 + 1j * rng2.standard_normal((n, n, n, n)))
    d = _hermitize_quadratic(n, d)
    mixed, _ = _quadratic_terms(n, d, np.zeros((n, n, n, n)))
    terms += [(a, b, M / 2.0) for a, b, M in mixed]
    return polynomial_metric(n, terms, allow_linear=True)


def _constrained_quadratic(n, seed, scale, balanced, skt):
    """Random Hermitian mixed/pure quadratic tensors projected onto the
    requested linear constraint set (trace conditions at the origin)."""
    rng = np.random.default_rng(seed)
    d0 = scale * (rng.standard_normal((n, n, n, n)) +
                  1j * rng.standard_normal((n, n, n, n)))
    d0 = _hermitize_quadratic(n, d0)
    p0 = scale * (rng.standard_normal((n, n, n, n)) +
                  1j * rng.standard_normal((n, n, n, n)))
    p0 = (p0 + np.transpose(p0, (0, 1, 3, 2))) / 2

    rows = []

    def add_row(entries):
        r = np.zeros((n, n, n, n), dtype=complex)
        for idx, w in entries:
            r[idx] += w
        rows.append(r.ravel())

    if balanced:
        for k in range(n):
            for l in range(n):
                add_row([((i, l, k, i), 1) for i in range(n)] +
                        [((i, i, k, l), -1) for i in range(n)])
                add_row([((k, i, i, l), 1) for i in range(n)] +
                        [((i, i, k, l), -1) for i in range(n)])
    if skt:
        for i in range(n):
            for j in range(n):
                add_row([((i, j, k, k), 1) for k in range(n)] +
                        [((k, k, i, j), 1) for k in range(n)] +
                        [((i, k, k, j), -1) for k in range(n)] +
                        [((k, j, i, k), -1) for k in range(n)])

    d = d0
    if rows:
        C = np.array(rows)
        # least-squares projection onto the null space of C, then
        # re-Hermitize (the constraint sets are conj-symmetric, so the
        # projection of a Hermitian tensor stays within tolerance Hermitian).
        x = d0.ravel()
        corr, *_ = np.linalg.lstsq(C, C @ x, rcond=None)
        d = _hermitize_quadratic(n, (x - corr).reshape(n, n, n, n))

    if balanced:
        # pure-term balanced condition: sum_e P[e,e,i,k] = sum_e P[i,e,e,k]
        prows = []
        for i in range(n):
            for k in range(n):
                r = np.zeros((n, n, n, n), dtype=complex)
                for e in range(n):
                    r[e, e, i, k] += 1
                    r[i, e, e, k] -= 1
                prows.append(r.ravel())
        C = np.array(prows)
        x = p0.ravel()
        corr, *_ = np.linalg.lstsq(C, C @ x, rcond=None)
        p0 = (x - corr).reshape(n, n, n, n)
        p0 = (p0 + np.transpose(p0, (0, 1, 3, 2))) / 2
    return d, p0


def normal_form_balanced(n: int, seed: int, scale: float = 0.1) -> MetricField:
    d, p = _constrained_quadratic(n, seed, scale, balanced=True, skt=False)
    return _assemble_polynomial(n, d, p)


def normal_form_skt(n: int, seed: int, scale: float = 0.1) -> MetricField:
    d, p = _constrained_quadratic(n, seed, scale, balanced=False, skt=True)
    return _assemble_polynomial(n, d, p)


def normal_form_balanced_skt(n: int, seed: int, scale: float = 0.1) -> MetricField:
    d, p = _constrained_quadratic(n, seed, scale, balanced=True, skt=True)
    return _assemble_polynomial(n, d, p)


def _mu(m: np.ndarray, n: int) -> np.ndarray:
    """Holomorphic frequency: the phase is exp(i pi (mu.z + conj(mu).zbar))."""
    m = np.asarray(m)
    return m[:n] - 1j * m[n:]


def torus_fourier(n: int, modes) -> MetricField:
    """Fourier metric h(x) = sum_m A^(m) exp(2 pi i m.x) on [0,1)^{2n}."""
    table = {}
    for m, A in modes:
        key = tuple(int(v) for v in m)
        if len(key) != 2 * n:
            raise StructuralError(f"frequency vector must have length {2*n}")
        A = np.asarray(A, dtype=complex)
        if A.shape != (n, n):
            raise StructuralError(f"mode matrix must be {n}x{n}")
        table[key] = table.get(key, 0) + A
    # Hermitian-pairing check: A^(-m) must equal A^(m) conj-transposed
    for key, A in table.items():
        neg = tuple(-v for v in key)
        partner = table.get(neg)
        if partner is None or not np.allclose(partner, A.conj().T, atol=1e-12):
            raise ValidationError(
                f"Hermitian frequency constraint violated at m={key}")
    return MetricField(n=n, kind="TorusFourier",
                       modes=tuple(sorted(table.items())))


def potential_kahler_torus(n: int, seed: int, nmodes: int = 3,
                           amp: float = 0.02, max_freq: int = 2) -> MetricField:
    """Kahler metric h = identity + (d^2 phi / dz dzbar) from a random real
    Fourier potential phi; dw = 0 holds by construction."""
    rng = np.random.default_rng(seed)
    modes = {}
    count = 0
    while count < nmodes:
        m = rng.integers(-max_freq, max_freq + 1, size=2 * n)
        if not np.any(m):
            continue
        c = amp * (rng.standard_normal() + 1j * rng.standard_normal())
        mu = _mu(m, n)
        A = -np.pi**2 * c * np.outer(mu, np.conj(mu))
        key = tuple(int(v) for v in m)
        negkey = tuple(-v for v in key)
        modes[key] = modes.get(key, 0) + A
        # conjugate mode keeps phi (hence h) real/Hermitian
        modes[negkey] = modes.get(negkey, 0) + A.conj().T
        count += 1
    _cap_perturbation(modes, 0.5)
    zero = tuple([0] * (2 * n))
    modes[zero] = modes.get(zero, 0) + np.eye(n)
    return torus_fourier(n, list(modes.items()))


def separable_kahler_torus(n: int, seed: int, amp: float = 0.05,
                           max_freq: int = 2) -> MetricField:
    """Kahler potential metric whose entries each depend on a single complex
    coordinate: h is diagonal with h_{k kbar} a function of z^k alone.  Any
    translation-invariant first-difference operator then annihilates the
    off-axis derivatives exactly, which keeps discretized closedness checks
    at machine precision."""
    rng = np.random.default_rng(seed)
    modes = {}
    for k in range(n):
        m = np.zeros(2 * n, dtype=int)
        m[k] = int(rng.integers(1, max_freq + 1))
        m[n + k] = int(rng.integers(-max_freq, max_freq + 1))
        c = amp * (rng.standard_normal() + 1j * rng.standard_normal())
        mu = _mu(m, n)
        A = -np.pi**2 * c * np.outer(mu, np.conj(mu))
        key = tuple(int(v) for v in m)
        negkey = tuple(-v for v in key)
        modes[key] = modes.get(key, 0) + A
        modes[negkey] = modes.get(negkey, 0) + A.conj().T
    _cap_perturbation(modes, 0.5)
    zero = tuple([0] * (2 * n))
    modes[zero] = modes.get(zero, 0) + np.eye(n)
    return torus_fourier(n, list(modes.items()))


def _cap_perturbation(modes: dict, cap: float):
    """Rescale the nonconstant Fourier modes in place so their operator-norm
    sum stays below cap, keeping the field positive definite everywhere."""
    total = sum(np.linalg.norm(A, 2) for A in modes.values())
    if total > cap:
        s = cap / total
        for key in modes:
            modes[key] = modes[key] * s


def random_torus_fourier(n: int, seed: int, nmodes: int = 3,
                         amp: float = 0.03, max_freq: int = 2) -> MetricField:
    """Generic (non-Kahler) Hermitian Fourier metric."""
    rng = np.random.default_rng(seed)
    modes = {}
    count = 0
    while count < nmodes:
        m = rng.integers(-max_freq, max_freq + 1, size=2 * n)
        if not np.any(m):
            continue
        A = amp * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        key = tuple(int(v) for v in m)
        negkey = tuple(-v for v in key)
        modes[key] = modes.get(key, 0) + A
        modes[negkey] = modes.get(negkey, 0) + A.conj().T
        count += 1
    _cap_perturbation(modes, 0.5)
    zero = tuple([0] * (2 * n))
    modes[zero] = modes.get(zero, 0) + np.eye(n)
    return torus_fourier(n, list(modes.items()))


# -- evaluation ------------------------------------------------------------


def evaluate(field: MetricField, z) -> np.ndarray:
    """Value of h at the point z (an n-vector of complex coordinates)."""
    z = np.asarray(z, dtype=complex)
    n = field.n
    if z.shape != (n,):
        raise StructuralError(f"point must be a complex {n}-vector")
    if field.kind == "Flat":
        return np.eye(n, dtype=complex)
    if field.kind == "Hopf":
        r2 = float(np.sum(np.abs(z) ** 2))
        if r2 == 0:
            raise DomainError("the Hopf metric is undefined at z = 0")
        return (4.0 / r2) * np.eye(n, dtype=complex)
    if field.kind == "NormalForm":
        h = np.eye(n, dtype=complex)
        for alpha, beta, M in field.terms:
            h = h + M * np.prod(z ** np.array(alpha)) * \
                np.prod(np.conj(z) ** np.array(beta))
        return h
    if field.kind == "TorusFourier":
        h = np.zeros((n, n), dtype=complex)
        for m, A in field.modes:
            mu = _mu(m, n)
            phase = np.exp(1j * np.pi *
                           (mu @ z + np.conj(mu) @ np.conj(z)))
            h = h + A * phase
        return h
    if field.kind == "Scaled":
        return field.factor * evaluate(field.base, z)
    raise StructuralError(f"unknown metric kind {field.kind!r}")


def _jet_prod_linear(n, order, coeffs_z, coeffs_zb, const=0.0):
    """Jet of const + sum_i coeffs_z[i] z_i + coeffs_zb[i] zbar_i."""
    out = constant(const, n, order)
    for i in range(n):
        if coeffs_z[i] != 0:
            out = out + coeffs_z[i] * variable(n, order, i)
        if coeffs_zb[i] != 0:
            out = out + coeffs_zb[i] * variable(n, order, i, barred=True)
    return out


def _jet_exp_linear(lin: Jet) -> Jet:
    """exp of a jet with zero constant term, truncated at its order."""
    out = constant(1.0, lin.n, lin.order)
    term = constant(1.0, lin.n, lin.order)
    for k in range(1, lin.order + 1):
        term = term * lin
        out = out + term * (1.0 / factorial(k))
    return out


def _jet_monomial(n, order, point, alpha, beta):
    """Jet of (p+zeta)^alpha * conj(p+zeta)^beta around the point p."""
    out = constant(1.0, n, order)
    for i in range(n):
        if alpha[i]:
            base = constant(point[i], n, order) + variable(n, order, i)
            for _ in range(alpha[i]):
                out = out * base
        if beta[i]:
            base = constant(np.conj(point[i]), n, order) + \
                variable(n, order, i, barred=True)
            for _ in range(beta[i]):
                out = out * base
    return out


def metric_jet(field: MetricField, z, order: int = 3) -> MetricJet:
    """Exact Taylor jets of h and h^{-1} at the point z."""
    z = np.asarray(z, dtype=complex)
    n = field.n
    if not field.admissible(z):
        raise DomainError(f"point {z} outside the field's domain")

    h = np.empty((n, n), dtype=object)

    if field.kind == "Flat":
        for i in range(n):
            for j in range(n):
                h[i][j] = constant(1.0 if i == j else 0.0, n, order)
    elif field.kind == "Hopf":
        # |p + zeta|^2 as an exact jet, then invert
        r2 = _jet_prod_linear(n, order, np.conj(z), z,
                              const=float(np.sum(np.abs(z) ** 2)))
        for k in range(n):
            r2 = r2 + variable(n, order, k) * variable(n, order, k, barred=True)
        from .jets import jet_inverse
        inv_r2 = jet_inverse(r2)
        for i in range(n):
            for j in range(n):
                h[i][j] = (4.0 * inv_r2) if i == j else constant(0.0, n, order)
    elif field.kind == "NormalForm":
        for i in range(n):
            for j in range(n):
                h[i][j] = constant(1.0 if i == j else 0.0, n, order)
        for alpha, beta, M in field.terms:
            mono = _jet_monomial(n, order, z, alpha, beta)
            for i in range(n):
                for j in range(n):
                    if M[i, j] != 0:
                        h[i][j] = h[i][j] + M[i, j] * mono
    elif field.kind == "TorusFourier":
        for i in range(n):
            for j in range(n):
                h[i][j] = constant(0.0, n, order)
        for m, A in field.modes:
            mu = _mu(m, n)
            phase0 = np.exp(1j * np.pi * (mu @ z + np.conj(mu) @ np.conj(z)))
            lin = _jet_prod_linear(n, order, 1j * np.pi * mu,
                                   1j * np.pi * np.conj(mu))
            mode_jet = phase0 * _jet_exp_linear(lin)
            for i in range(n):
                for j in range(n):
                    if A[i, j] != 0:
                        h[i][j] = h[i][j] + A[i, j] * mode_jet
    elif field.kind == "Scaled":
        base = metric_jet(field.base, z, order)
        for i in range(n):
            for j in range(n):
                h[i][j] = field.factor * base.h[i][j]
    else:
        raise StructuralError(f"unknown metric kind {field.kind!r}")

    h0 = np.array([[h[i][j].const for j in range(n)] for i in range(n)])
    w = np.linalg.eigvalsh((h0 + h0.conj().T) / 2)
    if w.min() <= _POS_EIG_TOL:
        raise ValidationError(
            f"metric not positive definite at {z}: min eigenvalue {w.min():.3e}")
    hinv = jet_matrix_inverse(h)
    return MetricJet(n=n, order=order, point=z, h=h, hinv=hinv)


# -- torus metric files ----------------------------------------------------


def write_torus_metric(field: MetricField, path):
    if field.kind != "TorusFourier":
        raise StructuralError("only TorusFourier fields can be written")
    n = field.n
    lines = [f"dim {n}"]
    for m, A in field.modes:
        nums = []
        for i in range(n):
            for j in range(n):
                nums.append(f"{float(A[i, j].real)!r} {float(A[i, j].imag)!r}")
        lines.append("freq " + " ".join(str(v) for v in m) + " ; " +
                     " ".join(nums))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def ingest_torus_metric(path) -> MetricField:
    """Parse, validate (Hermitian pairing + positivity on a 5^{2n} grid)."""
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    lines = [ln.strip() for ln in raw.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("dim "):
        raise ParseError("first line must be 'dim n'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ParseError("malformed 'dim' header") from exc
    if len(lines[0].split()) != 2 or n < 1:
        raise ParseError("malformed 'dim' header")
    modes = []
    for ln in lines[1:]:
        if not ln.startswith("freq "):
            raise ParseError(f"unexpected line: {ln!r}")
        body = ln[5:]
        if ";" not in body:
            raise ParseError(f"missing ';' separator in: {ln!r}")
        head, tail = body.split(";", 1)
        try:
            m = [int(v) for v in head.split()]
        except ValueError as exc:
            raise ParseError(f"non-integer frequency in: {ln!r}") from exc
        if len(m) != 2 * n:
            raise ParseError(
                f"frequency vector must have {2*n} entries, got {len(m)}")
        try:
            vals = [float(v) for v in tail.split()]
        except ValueError as exc:
            raise ParseError(f"non-numeric matrix entry in: {ln!r}") from exc
        if len(vals) != 2 * n * n:
            raise ParseError(
                f"expected {2*n*n} matrix numbers, got {len(vals)}")
        A = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
        modes.append((tuple(m), A.reshape(n, n)))
    field = torus_fourier(n, modes)  # raises ValidationError on bad pairing
    # positivity sweep on a 5^{2n} grid
    grid = np.linspace(0.0, 0.8, 5)
    shape = (5,) * (2 * n)
    for idx in np.ndindex(shape):
        x = np.array([grid[v] for v in idx])
        zpt = x[:n] + 1j * x[n:]
        hm = evaluate(field, zpt)
        w = np.linalg.eigvalsh((hm + hm.conj().T) / 2)
        if w.min() <= _POS_EIG_TOL:
            raise ValidationError(
                f"metric loses positivity at x={x.tolist()}: "
                f"min eigenvalue {w.min():.3e}")
    return field
