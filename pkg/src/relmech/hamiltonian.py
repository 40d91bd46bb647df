"""Phase-space picture: canonical brackets, the mass shell, Hamilton flow.

The phase space is the cotangent bundle with the canonical symplectic
structure; the bracket sign is fixed by {x^lam, p_mu} = +delta.  A
Hamiltonian H maps to velocities through u^mu = dH/dp_mu; the mass shell is
the preimage of the unit hyperboloid,

    H_T(x, p) = g_{mu nu} (dH/dp_mu) (dH/dp_nu) - 1 = 0.

The standard family

    H = g^{mu nu} (p - eA)_mu (p - eA)_nu / (2m)

satisfies H_T = (2/m) H - 1, hence {H, H_T} = 0 identically and the flow
preserves the shell.  Its second-order reduction reproduces the geodesic
equation of the charged connection exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, DomainError, StepRejected
from .geometry import (
    Array,
    FD_STEP,
    MetricField,
    PotentialField,
    inverse_metric_at,
    metric_at,
)

PhaseFn = Callable[[Array, Array], float]
PhaseGrad = Callable[[Array, Array], Array]


@dataclass(frozen=True)
class PhaseState:
    """A point x^lam with momenta p_lam."""

    x: Array
    p: Array

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.x.shape != self.p.shape or self.x.ndim != 1:
            raise DimensionMismatch("x and p must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.p))):
            raise ValueError("phase-state entries must be finite")


@dataclass(frozen=True)
class StandardData:
    """Ingredients of a standard-family Hamiltonian."""

    metric: MetricField
    potential: PotentialField
    mass: float
    charge: float


@dataclass(frozen=True)
class HamiltonianModel:
    """A scalar on phase space with its two gradients.

    ``value(x, p)``, ``grad_x(x, p)`` (covector d_lam H) and
    ``grad_p(x, p)`` (vector dH/dp_lam).  ``standard`` is set for the
    metric-plus-potential family, unlocking the analytic second-order
    reduction and shell helpers.
    """

    dim: int
    value: PhaseFn
    grad_x: PhaseGrad
    grad_p: PhaseGrad
    standard: Optional[StandardData] = None


@dataclass
class PhaseTrajectory:
    """Samples of a Hamilton flow with the shell residual at every sample."""

    tau: Array
    x: Array
    p: Array
    H: Array
    HT: Array
    integrator: str
    dt: Optional[float]
    max_shell_drift: float

    def __len__(self) -> int:
        return self.tau.size


def _fd_phase_grads(value: PhaseFn, dim: int):
    def grad_x(x, p):
        out = np.empty(dim)
        for lam in range(dim):
            h = FD_STEP * max(1.0, abs(x[lam]))
            xp, xm = x.copy(), x.copy()
            xp[lam] += h
            xm[lam] -= h
            out[lam] = (value(xp, p) - value(xm, p)) / (2.0 * h)
        return out

    def grad_p(x, p):
        out = np.empty(dim)
        for lam in range(dim):
            h = FD_STEP * max(1.0, abs(p[lam]))
            pp, pm = p.copy(), p.copy()
            pp[lam] += h
            pm[lam] -= h
            out[lam] = (value(x, pp) - value(x, pm)) / (2.0 * h)
        return out

    return grad_x, grad_p


def custom_hamiltonian(dim: int, value: PhaseFn,
                       grad_x: Optional[PhaseGrad] = None,
                       grad_p: Optional[PhaseGrad] = None) -> HamiltonianModel:
    """Wrap a user-supplied scalar; missing gradients fall back to central
    finite differences of ``value``."""
    fd_x, fd_p = _fd_phase_grads(value, dim)
    return HamiltonianModel(dim, value,
                            grad_x if grad_x is not None else fd_x,
                            grad_p if grad_p is not None else fd_p)


def standard_hamiltonian(metric: MetricField, potential: PotentialField,
                         mass: float = 1.0, charge: float = 1.0) -> HamiltonianModel:
    """H = g^{mu nu}(p - eA)_mu (p - eA)_nu / (2 mass), with analytic gradients.

    The factor 1/2 makes the shell residual equal (2/mass) H - 1 and the flow
    velocity dH/dp = g^{-1}(p - eA)/mass, so states on the shell map to unit
    vectors g(u, u) = 1.
    """
    if metric.dim != potential.dim:
        raise DimensionMismatch("metric and potential dimensions differ")
    m = float(mass)
    e = float(charge)
    if not m > 0.0:
        raise ValueError("mass must be positive")

    def value(x, p):
        w = p - e * np.asarray(potential.value(x), float)
        ginv = inverse_metric_at(metric, x)
        return 0.5 * float(w @ ginv @ w) / m

    def grad_p(x, p):
        w = p - e * np.asarray(potential.value(x), float)
        return inverse_metric_at(metric, x) @ w / m

    def grad_x(x, p):
        w = p - e * np.asarray(potential.value(x), float)
        ginv = inverse_metric_at(metric, x)
        dg = np.asarray(metric.partials(x), float)
        da = np.asarray(potential.partials(x), float)
        # d_lam g^{ab} = -g^{ac} d_lam g_{cd} g^{db}
        dginv = -np.einsum("ac,lcd,db->lab", ginv, dg, ginv)
        t_metric = 0.5 * np.einsum("lab,a,b->l", dginv, w, w) / m
        t_pot = -(e / m) * np.einsum("ab,a,lb->l", ginv, w, da)
        return t_metric + t_pot

    return HamiltonianModel(metric.dim, value, grad_x, grad_p,
                            StandardData(metric, potential, m, e))


def _shell_metric(h: HamiltonianModel, metric: Optional[MetricField]) -> MetricField:
    if metric is not None:
        return metric
    if h.standard is not None:
        return h.standard.metric
    raise ValueError("a metric is required for shell computations on a "
                     "non-standard Hamiltonian")


def legendre_velocity(h: HamiltonianModel, s: PhaseState) -> Array:
    """Velocity image u^mu = dH/dp_mu of a phase point."""
    return np.asarray(h.grad_p(s.x, s.p), dtype=float)


def mass_shell_residual(h: HamiltonianModel, s: PhaseState,
                        metric: Optional[MetricField] = None) -> float:
    """H_T = g_{mu nu} (dH/dp_mu)(dH/dp_nu) - 1; zero on the mass shell."""
    g = metric_at(_shell_metric(h, metric), s.x)
    v = legendre_velocity(h, s)
    return float(v @ g @ v) - 1.0


def mass_shell_scalar(h: HamiltonianModel,
                      metric: Optional[MetricField] = None) -> HamiltonianModel:
    """The shell residual H_T as a phase-space scalar with gradients.

    For the standard family the gradients are analytic (computed from the
    explicit form g^{ab}(p - eA)(p - eA)/mass^2 - 1, independently of the
    gradients of H); otherwise they fall back to finite differences.
    """
    shell_metric = _shell_metric(h, metric)

    def value(x, p):
        g = metric_at(shell_metric, x)
        v = np.asarray(h.grad_p(x, p), float)
        return float(v @ g @ v) - 1.0

    if h.standard is None:
        fd_x, fd_p = _fd_phase_grads(value, h.dim)
        return HamiltonianModel(h.dim, value, fd_x, fd_p)

    std = h.standard
    e, m2 = std.charge, std.mass ** 2

    def grad_p(x, p):
        w = p - e * np.asarray(std.potential.value(x), float)
        return 2.0 * (inverse_metric_at(std.metric, x) @ w) / m2

    def grad_x(x, p):
        w = p - e * np.asarray(std.potential.value(x), float)
        ginv = inverse_metric_at(std.metric, x)
        dg = np.asarray(std.metric.partials(x), float)
        da = np.asarray(std.potential.partials(x), float)
        dginv = -np.einsum("ac,lcd,db->lab", ginv, dg, ginv)
        return (np.einsum("lab,a,b->l", dginv, w, w)
                - 2.0 * e * np.einsum("ab,a,lb->l", ginv, w, da)) / m2

    return HamiltonianModel(h.dim, value, grad_x, grad_p)


def hamiltonian_vector_field(h: HamiltonianModel, s: PhaseState):
    """Canonical flow (xdot, pdot) = (dH/dp, -dH/dx)."""
    return (np.asarray(h.grad_p(s.x, s.p), float),
            -np.asarray(h.grad_x(s.x, s.p), float))


def poisson_bracket(f: HamiltonianModel, g: HamiltonianModel,
                    s: PhaseState) -> float:
    """Canonical bracket {f, g} = d_x f . d_p g - d_p f . d_x g.

    The sign makes {x^lam, p_mu} = +delta^lam_mu and the Hamilton flow of H
    equal {., H}.
    """
    return (float(np.dot(f.grad_x(s.x, s.p), g.grad_p(s.x, s.p)))
            - float(np.dot(f.grad_p(s.x, s.p), g.grad_x(s.x, s.p))))


def coordinate_scalar(dim: int, lam: int) -> HamiltonianModel:
    """The coordinate function x^lam as a phase-space scalar."""
    ex = np.zeros(dim)
    ex[lam] = 1.0
    zero = np.zeros(dim)
    return HamiltonianModel(dim, lambda x, p: float(x[lam]),
                            lambda x, p: ex.copy(), lambda x, p: zero.copy())


def momentum_scalar(dim: int, lam: int) -> HamiltonianModel:
    """The momentum function p_lam as a phase-space scalar."""
    ep = np.zeros(dim)
    ep[lam] = 1.0
    zero = np.zeros(dim)
    return HamiltonianModel(dim, lambda x, p: float(p[lam]),
                            lambda x, p: zero.copy(), lambda x, p: ep.copy())


def on_shell_momentum(h: HamiltonianModel, x, u) -> Array:
    """Momenta matching a four-velocity: p = mass g u + charge A.

    Standard family only.  When g(u, u) = 1 the resulting phase point lies on
    the mass shell and legendre_velocity maps it back to u.
    """
    if h.standard is None:
        raise ValueError("on_shell_momentum requires a standard-family Hamiltonian")
    std = h.standard
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    g = metric_at(std.metric, x)
    a_form = np.asarray(std.potential.value(x), float)
    return std.mass * (g @ u) + std.charge * a_form


def second_order_rhs(h: HamiltonianModel, x, u) -> Array:
    """Acceleration of the second-order reduction of the Hamilton flow.

    Evaluates  a^lam = (dH/dp_mu) d_mu dH/dp_lam - (d_mu H) d^2H/dp_lam dp_mu
    at the momenta p(x, u) of :func:`on_shell_momentum`.  For the standard
    family this equals the geodesic right-hand side of the charged connection
    built from the same metric and potential.
    """
    if h.standard is None:
        raise ValueError("second_order_rhs requires a standard-family Hamiltonian")
    std = h.standard
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    m, e = std.mass, std.charge
    g = metric_at(std.metric, x)
    ginv = inverse_metric_at(std.metric, x)
    dg = np.asarray(std.metric.partials(x), float)
    da = np.asarray(std.potential.partials(x), float)
    dginv = -np.einsum("ac,lcd,db->lab", ginv, dg, ginv)

    w = m * (g @ u)                      # kinetic momenta p - eA
    p = w + e * np.asarray(std.potential.value(x), float)
    gp = ginv @ w / m                    # dH/dp, equals u up to rounding
    # mixed[lam, mu] = d_mu dH/dp_lam
    mixed = (np.einsum("mln,n->lm", dginv, w) - e * np.einsum("ln,mn->lm", ginv, da)) / m
    gx = h.grad_x(x, p)
    return mixed @ gp - (ginv @ gx) / m


def integrate_hamiltonian(h: HamiltonianModel, s0: PhaseState, dt: float,
                          steps: int, record_every: int = 1,
                          metric: Optional[MetricField] = None) -> PhaseTrajectory:
    """Fixed-step RK4 on the canonical flow (dH/dp, -dH/dx).

    Records (tau, x, p, H, H_T) every ``record_every`` steps (first and last
    samples always kept) and tracks the largest |H_T| over the run.  A start
    with |H_T| > 1e-8 triggers a warning.  For non-standard Hamiltonians a
    ``metric`` must be supplied to evaluate the shell residual.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    shell_metric = _shell_metric(h, metric)

    x = np.array(s0.x, dtype=float)
    p = np.array(s0.p, dtype=float)

    def shell(xx, pp):
        g = metric_at(shell_metric, xx)
        v = np.asarray(h.grad_p(xx, pp), float)
        return float(v @ g @ v) - 1.0

    ht0 = shell(x, p)
    if abs(ht0) > 1e-8:
        warnings.warn(
            f"initial phase point is off the mass shell: H_T = {ht0!r}",
            stacklevel=2,
        )

    taus = [0.0]
    xs = [x.copy()]
    ps = [p.copy()]
    hs = [float(h.value(x, p))]
    hts = [ht0]
    drift = abs(ht0)
    tau = 0.0

    def flow(xx, pp):
        return np.asarray(h.grad_p(xx, pp), float), -np.asarray(h.grad_x(xx, pp), float)

    for k in range(1, steps + 1):
        try:
            k1x, k1p = flow(x, p)
            k2x, k2p = flow(x + 0.5 * dt * k1x, p + 0.5 * dt * k1p)
            k3x, k3p = flow(x + 0.5 * dt * k2x, p + 0.5 * dt * k2p)
            k4x, k4p = flow(x + dt * k3x, p + dt * k3p)
        except DomainError as exc:
            raise DomainError(
                f"left the metric domain during step {k}: {exc}", tau=tau
            ) from exc
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        p = p + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise StepRejected(f"non-finite state after step {k}", tau=tau)
        try:
            htk = shell(x, p)
        except DomainError as exc:
            raise DomainError(
                f"left the metric domain during step {k}: {exc}", tau=tau
            ) from exc
        tau = k * dt
        drift = max(drift, abs(htk))
        if k % record_every == 0 or k == steps:
            taus.append(tau)
            xs.append(x.copy())
            ps.append(p.copy())
            hs.append(float(h.value(x, p)))
            hts.append(htk)

    return PhaseTrajectory(
        tau=np.asarray(taus),
        x=np.stack(xs),
        p=np.stack(ps),
        H=np.asarray(hs),
        HT=np.asarray(hts),
        integrator="rk4",
        dt=dt,
        max_shell_drift=drift,
    )
