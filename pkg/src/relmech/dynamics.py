"""Connections on the tangent bundle and geodesic integration.

A :class:`Connection` stores the coefficient matrix K^mu_lam(x, u); the
second-order equation of motion is ``a^mu = K^mu_lam u^lam``.  Connections
built by :func:`connection_from` combine the metric's connection symbols with
an electromagnetic soldering term and preserve the unit hyperboloid
g(u, u) = 1 along exact solutions; the fixed-step RK4 integrator monitors the
discretization drift of that constraint and can optionally project it away.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NonPositiveG, StepRejected
from .geometry import (
    Array,
    GTensorField,
    MetricField,
    PotentialField,
    christoffel_at,
    faraday_at,
    g_value,
    inverse_metric_at,
    metric_at,
    zero_potential,
)

KFn = Callable[[Array, Array], Array]

PROJECTION_MODES = ("none", "rescale")


@dataclass(frozen=True)
class Connection:
    """Connection coefficients K^mu_lam(x, u) on the tangent bundle.

    ``K(x, u)[mu, lam]`` is K^mu_lam.  When the connection was built from a
    metric, ``metric`` and ``soldering`` record the decomposition
    K = (metric symbols contracted with u) + soldering.
    """

    dim: int
    K: KFn
    metric: Optional[MetricField] = None
    soldering: Optional[KFn] = None


@dataclass
class Trajectory:
    """Samples of a tau-parameterized solution on the tangent bundle.

    Arrays are indexed by sample; ``G`` records the constraint value
    g_value(x, u) at every sample.  ``max_constraint_drift`` is the largest
    |G - 1| seen over every computed step, recorded or not.
    """

    tau: Array
    x: Array
    u: Array
    G: Array
    integrator: str
    dt: Optional[float]
    projection: str
    max_constraint_drift: float

    def __len__(self) -> int:
        return self.tau.size


def connection_from(metric: MetricField, potential: PotentialField,
                    mass: float = 1.0, charge: float = 1.0) -> Connection:
    """Connection of a massive charge on (metric, potential).

    K^mu_lam(x, u) = C[lam, mu, nu] u^nu + (charge/mass) g^{mu nu} F_{nu lam},
    where C are the metric's connection symbols (see geometry docs for the
    sign convention).  With charge/mass = 1 this is the canonical charged
    connection; charge = 0 gives the pure metric (Levi-Civita) connection.
    """
    if metric.dim != potential.dim:
        raise ValueError("metric and potential dimensions differ")
    ratio = float(charge) / float(mass)

    def soldering(x, u):
        ginv = inverse_metric_at(metric, x)
        return ratio * ginv @ faraday_at(potential, x)

    def coeffs(x, u):
        c = christoffel_at(metric, x)
        k = np.einsum("lmn,n->ml", c, u)
        if ratio != 0.0:
            k = k + soldering(x, u)
        return k

    return Connection(metric.dim, coeffs, metric, soldering)


def levi_civita_connection(metric: MetricField) -> Connection:
    """Pure metric connection (no external force)."""
    return connection_from(metric, zero_potential(metric.dim), 1.0, 0.0)


def geodesic_rhs(c: Connection, x, u) -> Array:
    """Acceleration a^mu = K^mu_lam(x, u) u^lam."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    return c.K(x, u) @ u


def check_geodesic_condition(c: Connection, metric: MetricField, x, u) -> float:
    """Residual of the hyperboloid-preservation condition.

    Returns (d_lam g_{mu nu} u^mu + 2 g_{mu nu} K^mu_lam) u^lam u^nu, which
    vanishes exactly when the geodesic flow of ``c`` stays on the bundle of
    unit hyperboloids of ``metric``.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    dg = np.asarray(metric.partials(x), dtype=float)
    g = metric_at(metric, x)
    k = c.K(x, u)
    t1 = float(np.einsum("lmn,m,l,n->", dg, u, u, u))
    t2 = 2.0 * float(u @ g @ (k @ u))
    return t1 + t2


def geodesic_condition_scale(c: Connection, metric: MetricField, x, u) -> float:
    """Magnitude of the terms entering :func:`check_geodesic_condition`.

    Sum of absolute contributions before cancellation; use it to turn the
    residual into a relative quantity.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    dg = np.abs(np.asarray(metric.partials(x), dtype=float))
    g = np.abs(metric_at(metric, x))
    k = np.abs(c.K(x, u))
    au = np.abs(u)
    t1 = float(np.einsum("lmn,m,l,n->", dg, au, au, au))
    t2 = 2.0 * float(au @ g @ (k @ au))
    return t1 + t2 + 1e-30


def soldering_residual(c: Connection, metric: MetricField, x, u) -> float:
    """g_{mu nu} sigma^mu_lam u^lam u^nu for a decomposed connection.

    Zero exactly when the soldering force does no work against the metric,
    i.e. when it preserves the unit hyperboloid.
    """
    if c.soldering is None:
        raise ValueError("connection carries no soldering decomposition")
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    g = metric_at(metric, x)
    sig = c.soldering(x, u)
    return float(u @ g @ (sig @ u))


def project_to_shell(gfield: GTensorField, x, u) -> Array:
    """Rescale ``u`` onto the unit level set G(x, u) = 1.

    Returns u * G^(-1/2N); idempotent up to rounding, raises
    :class:`NonPositiveG` when G <= 0.
    """
    u = np.asarray(u, dtype=float)
    g = g_value(gfield, x, u)
    if not g > 0.0:
        raise NonPositiveG(f"cannot project: G = {g:g} is not positive")
    return u * g ** (-1.0 / (2 * gfield.order_half))


def integrate_geodesic(c: Connection, gfield: GTensorField, s0, dt: float,
                       steps: int, projection: str = "none",
                       record_every: int = 1) -> Trajectory:
    """Integrate a^mu = K^mu_lam u^lam with classic fixed-step RK4.

    Parameters
    ----------
    c, gfield : connection and the velocity form used for constraint
        monitoring (and for the optional shell projection).
    s0 : initial state with attributes ``x`` and ``u`` (a FourState works).
    dt, steps : step size (> 0) and number of steps (>= 1).
    projection : "none" or "rescale"; with "rescale" the velocity is pulled
        back onto G = 1 after every step.
    record_every : keep every k-th sample (the initial and final states are
        always kept).

    The constraint value G is computed at every step; the trajectory metadata
    records the largest |G - 1| over the whole run.  A start with |G - 1|
    beyond 1e-8 triggers a warning (off-shell initial data are allowed, the
    equation itself is defined off the shell).
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if projection not in PROJECTION_MODES:
        raise ValueError(f"projection must be one of {PROJECTION_MODES}")

    x = np.array(s0.x, dtype=float)
    u = np.array(s0.u, dtype=float)
    g0 = g_value(gfield, x, u)
    if not g0 > 0.0:
        raise NonPositiveG(f"initial state has G = {g0:g} <= 0")
    if abs(g0 - 1.0) > 1e-8:
        warnings.warn(
            f"initial state is off the unit level set: G = {g0!r}",
            stacklevel=2,
        )

    taus = [0.0]
    xs = [x.copy()]
    us = [u.copy()]
    gs = [g0]
    drift = abs(g0 - 1.0)
    tau = 0.0

    def acc(xx, uu):
        return c.K(xx, uu) @ uu

    for k in range(1, steps + 1):
        try:
            k1x, k1u = u, acc(x, u)
            x2, u2 = x + 0.5 * dt * k1x, u + 0.5 * dt * k1u
            k2x, k2u = u2, acc(x2, u2)
            x3, u3 = x + 0.5 * dt * k2x, u + 0.5 * dt * k2u
            k3x, k3u = u3, acc(x3, u3)
            x4, u4 = x + dt * k3x, u + dt * k3u
            k4x, k4u = u4, acc(x4, u4)
        except DomainError as exc:
            raise DomainError(
                f"left the metric domain during step {k}: {exc}", tau=tau
            ) from exc
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        u = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(u))):
            raise StepRejected(f"non-finite state after step {k}", tau=tau)
        try:
            if projection == "rescale":
                u = project_to_shell(gfield, x, u)
            gk = g_value(gfield, x, u)
        except DomainError as exc:
            raise DomainError(
                f"left the metric domain during step {k}: {exc}", tau=tau
            ) from exc
        tau = k * dt
        drift = max(drift, abs(gk - 1.0))
        if k % record_every == 0 or k == steps:
            taus.append(tau)
            xs.append(x.copy())
            us.append(u.copy())
            gs.append(gk)

    return Trajectory(
        tau=np.asarray(taus),
        x=np.stack(xs),
        u=np.stack(us),
        G=np.asarray(gs),
        integrator="rk4",
        dt=dt,
        projection=projection,
        max_constraint_drift=drift,
    )
