"""Parabolic flow of Hermitian metrics on discretized complex tori.

The evolution is dh/dt = -theta2 + mu*h, where theta2 is the trace of the
Chern curvature over the metric indices, realized here by 4th-order periodic
central differences on an N^(2n) lattice over [0,1)^(2n).  Real axes are
ordered (x_1, y_1, ..., x_n, y_n) with z^i = x_i + sqrt(-1)*y_i.

The round metric on the annulus family is never flowed on a grid; its flow
reduces exactly to a scalar ODE (``hopf_self_similar``).
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, StructuralError
from .metric import MetricField, evaluate

__all__ = [
    "FlowConfig",
    "FlowState",
    "FlowDiagnostics",
    "FlowHalt",
    "grid_points",
    "sample_on_grid",
    "theta2_discrete",
    "kahler_defect",
    "diagnostics",
    "step",
    "run",
    "hopf_self_similar",
    "hopf_extinction_time",
    "write_grid_dump",
    "read_grid_dump",
    "write_diagnostics_csv",
]


class FlowHalt(Exception):
    """Raised when an integration step violates a state invariant.

    Carries ``reason`` ("positivity" or "nan") and a ``site`` witness
    (lattice multi-index) where the violation occurred.
    """

    def __init__(self, reason: str, site, t: float, detail: str = ""):
        self.reason = reason
        self.site = tuple(int(s) for s in site)
        self.t = float(t)
        super().__init__(
            f"flow halted ({reason}) at t={t:.6g}, site {self.site}"
            + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class FlowConfig:
    dt: float | None = None  # None: 0.1 * dx^2 * min eigenvalue of h
    order: int = 4           # spatial stencil order (only 4 supported)
    cadence: int = 1         # diagnostics every `cadence` steps


@dataclass(frozen=True)
class FlowState:
    n: int
    N: int
    h: np.ndarray  # shape (N,)*2n + (n, n), complex, per-site Hermitian
    t: float
    mu: float
    config: FlowConfig = field(default_factory=FlowConfig)

    def __post_init__(self):
        expected = (self.N,) * (2 * self.n) + (self.n, self.n)
        if self.h.shape != expected:
            raise StructuralError(
                f"grid array must have shape {expected}, got {self.h.shape}")


@dataclass(frozen=True)
class FlowDiagnostics:
    t: float
    step_count: int
    kahler_defect: float
    min_eig: float
    max_eig: float
    einstein_residual: float
    wall_time: float


def grid_points(n: int, N: int) -> np.ndarray:
    """Complex coordinates of every site, shape (N,)*2n + (n,)."""
    axes = np.meshgrid(*[np.arange(N) / N for _ in range(2 * n)],
                       indexing="ij")
    z = np.empty((N,) * (2 * n) + (n,), dtype=complex)
    for i in range(n):
        z[..., i] = axes[2 * i] + 1j * axes[2 * i + 1]
    return z


def sample_on_grid(fld: MetricField, N: int) -> np.ndarray:
    """Per-site metric values of a torus metric field."""
    n = fld.n
    z = grid_points(n, N)
    flat = z.reshape(-1, n)
    vals = np.stack([evaluate(fld, p) for p in flat])
    return vals.reshape((N,) * (2 * n) + (n, n))


def _roll_diff(arr: np.ndarray, axis: int, N: int) -> np.ndarray:
    """4th-order central first derivative along a periodic grid axis."""
    dx = 1.0 / N
    return (-np.roll(arr, -2, axis=axis) + 8 * np.roll(arr, -1, axis=axis)
            - 8 * np.roll(arr, 1, axis=axis) + np.roll(arr, 2, axis=axis)
            ) / (12 * dx)


def _dz(arr: np.ndarray, i: int, N: int) -> np.ndarray:
    return 0.5 * (_roll_diff(arr, 2 * i, N) - 1j * _roll_diff(arr, 2 * i + 1, N))


def _dzbar(arr: np.ndarray, i: int, N: int) -> np.ndarray:
    return 0.5 * (_roll_diff(arr, 2 * i, N) + 1j * _roll_diff(arr, 2 * i + 1, N))


def _hup(h: np.ndarray) -> np.ndarray:
    """Inverse metric with hup[..., i, j] the (i, jbar)-up entry."""
    try:
        inv = np.linalg.inv(h)
    except np.linalg.LinAlgError as exc:
        raise DomainError(f"singular metric on the grid: {exc}") from exc
    return np.swapaxes(inv, -1, -2)


def theta2_discrete(h: np.ndarray, n: int, N: int) -> np.ndarray:
    """Second metric-trace of the canonical curvature, per site.

    theta2_{k lbar} = -h^{i jbar} d^2 h_{k lbar}/dz^i dzbar^j
    + h^{i jbar} h^{p qbar} (dh_{k qbar}/dz^i)(dh_{p lbar}/dzbar^j),
    with 4th-order periodic central differences; Hermitian-symmetrized.
    """
    if N < 8:
        raise DomainError("theta2 stencil needs N >= 8")
    up = _hup(h)
    dzh = [_dz(h, i, N) for i in range(n)]
    dzbh = [_dzbar(h, j, N) for j in range(n)]
    out = np.zeros_like(h)
    for i in range(n):
        for j in range(n):
            uij = up[..., i, j][..., None, None]
            out -= uij * _dzbar(dzh[i], j, N)
            # first-derivative quadratic: sum_{p,q} hup[p,q] A_{kq} B_{pl}
            out += uij * np.einsum("...pq,...kq,...pl->...kl",
                                   up, dzh[i], dzbh[j])
    return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))


def kahler_defect(h: np.ndarray, n: int, N: int) -> float:
    """max |dh_{k jbar}/dz^i - dh_{i jbar}/dz^k| over sites and indices."""
    dzh = [_dz(h, i, N) for i in range(n)]
    worst = 0.0
    for i in range(n):
        for k in range(i + 1, n):
            worst = max(worst, float(np.max(np.abs(
                dzh[i][..., k, :] - dzh[k][..., i, :]))))
    return worst


def diagnostics(state: FlowState, step_count: int,
                wall_time: float) -> FlowDiagnostics:
    eigs = np.linalg.eigvalsh(state.h)
    th = theta2_discrete(state.h, state.n, state.N)
    return FlowDiagnostics(
        t=state.t,
        step_count=step_count,
        kahler_defect=kahler_defect(state.h, state.n, state.N),
        min_eig=float(eigs.min()),
        max_eig=float(eigs.max()),
        einstein_residual=float(np.max(np.abs(th - state.mu * state.h))),
        wall_time=wall_time,
    )


def default_dt(h: np.ndarray, N: int) -> float:
    dx = 1.0 / N
    min_eig = float(np.linalg.eigvalsh(h).min())
    if min_eig <= 0:
        raise DomainError("initial grid metric is not positive definite")
    return 0.1 * dx * dx * min_eig


def _check_state(h: np.ndarray, n: int, t: float):
    if not np.all(np.isfinite(h)):
        bad = np.argwhere(~np.isfinite(h))[0][:-2]
        raise FlowHalt("nan", bad, t)
    eigs = np.linalg.eigvalsh(h)
    min_per_site = eigs[..., 0]
    if np.min(min_per_site) <= 0:
        site = np.unravel_index(np.argmin(min_per_site), min_per_site.shape)
        raise FlowHalt("positivity", site, t,
                       f"min eigenvalue {np.min(min_per_site):.3e}")


def step(state: FlowState) -> FlowState:
    """One Runge-Kutta 4 step of dh/dt = -theta2 + mu*h."""
    n, N, mu = state.n, state.N, state.mu
    dt = state.config.dt if state.config.dt is not None \
        else default_dt(state.h, N)

    def rhs(h):
        return -theta2_discrete(h, n, N) + mu * h

    h = state.h
    k1 = rhs(h)
    k2 = rhs(h + 0.5 * dt * k1)
    k3 = rhs(h + 0.5 * dt * k2)
    k4 = rhs(h + dt * k3)
    hn = h + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    hn = 0.5 * (hn + np.conj(np.swapaxes(hn, -1, -2)))
    t_next = state.t + dt
    _check_state(hn, n, t_next)
    return replace(state, h=hn, t=t_next)


def run(initial, mu: float, T: float, config: FlowConfig = FlowConfig(),
        N: int = 12):
    """Integrate from t=0 to the horizon T.

    ``initial`` is a torus MetricField or a pre-sampled grid array.  Returns
    (final_state, [FlowDiagnostics...]); reaching the horizon is success.
    A FlowHalt from ``step`` propagates to the caller.
    """
    if isinstance(initial, MetricField):
        n = initial.n
        h0 = sample_on_grid(initial, N)
    else:
        h0 = np.asarray(initial, dtype=complex)
        n = h0.shape[-1]
        N = h0.shape[0]
    h0 = 0.5 * (h0 + np.conj(np.swapaxes(h0, -1, -2)))
    _check_state(h0, n, 0.0)
    dt = config.dt if config.dt is not None else default_dt(h0, N)
    config = replace(config, dt=dt)
    state = FlowState(n=n, N=N, h=h0, t=0.0, mu=mu, config=config)
    start = time.monotonic()
    series = [diagnostics(state, 0, 0.0)]
    count = 0
    while state.t < T - 1e-12:
        if state.t + dt > T:
            state = replace(state, config=replace(config, dt=T - state.t))
        state = step(state)
        count += 1
        if count % max(1, config.cadence) == 0 or state.t >= T - 1e-12:
            series.append(diagnostics(state, count,
                                      time.monotonic() - start))
    return state, series


# -- exact scale-factor reduction on the round annulus family ---------------


def hopf_self_similar(n: int, c0: float, mu: float, t: float) -> float:
    """Scale factor c(t) of the self-similar solution h = c * (4/|z|^2) I.

    Solves dc/dt = mu*c - (n-1)/4 exactly.  May return c <= 0; see
    ``hopf_extinction_time``.
    """
    if c0 <= 0:
        raise DomainError("initial scale factor must be positive")
    k = (n - 1) / 4.0
    if mu == 0:
        return c0 - k * t
    return (c0 - k / mu) * np.exp(mu * t) + k / mu


def hopf_extinction_time(n: int, c0: float, mu: float) -> float | None:
    """First time the scale factor reaches zero, or None if it never does."""
    if c0 <= 0:
        raise DomainError("initial scale factor must be positive")
    k = (n - 1) / 4.0
    if k == 0:
        return None  # n = 1: c is constant (mu = 0) or grows/decays to 0 only if mu<0
    if mu == 0:
        return c0 / k
    if mu > 0 and c0 >= k / mu:
        return None
    ratio = (k / mu) / (k / mu - c0)
    if ratio <= 0:
        return None
    return float(np.log(ratio) / mu)


# -- serialization ----------------------------------------------------------


def write_grid_dump(state: FlowState, path):
    """CSV per-site matrices with a text header (dims, N, t, mu)."""
    with open(path, "w", newline="") as f:
        f.write(f"# dims={state.n} N={state.N} t={state.t!r} mu={state.mu!r}\n")
        w = csv.writer(f)
        w.writerow(["site_index", "i", "j", "re", "im"])
        flat = state.h.reshape(-1, state.n, state.n)
        for s in range(flat.shape[0]):
            for i in range(state.n):
                for j in range(state.n):
                    v = flat[s, i, j]
                    w.writerow([s, i, j, repr(float(v.real)),
                                repr(float(v.imag))])


def read_grid_dump(path) -> FlowState:
    with open(path) as f:
        header = f.readline()
        if not header.startswith("#"):
            raise StructuralError("grid dump must start with a '#' header")
        meta = dict(tok.split("=", 1) for tok in header[1:].split())
        n, N = int(meta["dims"]), int(meta["N"])
        t, mu = float(meta["t"]), float(meta["mu"])
        rows = list(csv.reader(f))
    flat = np.zeros((N ** (2 * n), n, n), dtype=complex)
    for row in rows[1:]:
        s, i, j = int(row[0]), int(row[1]), int(row[2])
        flat[s, i, j] = float(row[3]) + 1j * float(row[4])
    h = flat.reshape((N,) * (2 * n) + (n, n))
    return FlowState(n=n, N=N, h=h, t=t, mu=mu)


def write_diagnostics_csv(series, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t", "step_count", "kahler_defect", "min_eig",
                    "max_eig", "einstein_residual", "wall_time"])
        for d in series:
            w.writerow([repr(float(d.t)), d.step_count,
                        repr(float(d.kahler_defect)), repr(float(d.min_eig)),
                        repr(float(d.max_eig)),
                        repr(float(d.einstein_residual)),
                        repr(float(d.wall_time))])
