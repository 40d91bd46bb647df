"""Reparameterization-invariant Lagrangians and their variational derivatives.

The model Lagrangian is

    L(x, u) = mass * G(x, u)^(1/2N) + charge * u^mu A_mu(x),

with G the fully symmetric rank-2N velocity form (positive where evaluated)
and A a one-form.  L is positively homogeneous of degree one in u, which
forces the identity u . calE = 0 on its variational derivatives calE for ALL
arguments, solutions or not.  Because of that identity the Euler-Lagrange
system is underdetermined; it is closed by the unit-level constraint
G(x, u) = 1, on which it is equivalent to the determined system E = 0 (the
"reduced" covector computed by :func:`euler_lagrange_E`).

The chart-local picture eliminates the parameter: with v^i = u^i/u^0 and
Gbar(x, v) = G(x, (1, v)), the three-velocity Lagrangian

    Lbar = mass * Gbar^(1/2N) + charge * (v^i A_i + A_0)

has Euler-Lagrange covector Ebar_i tied to calE_i by calE_i = u^0 Ebar_i
along lifted solutions, with the time component fixed by
Ebar_0 = -v^i Ebar_i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonPositiveG
from .geometry import (
    Array,
    GTensorField,
    PotentialField,
    contract_all,
    faraday_at,
    g_value,
)
from .kinematics import ThreeVelocity

#: floor added to normalization denominators so identities stay scale-free
RESIDUAL_FLOOR = 1e-30


@dataclass(frozen=True)
class LagrangianModel:
    """Velocity form, potential and the particle constants mass, charge.

    mass = charge = 1 gives the bare homogeneous Lagrangian
    G^(1/2N) + u . A.
    """

    gfield: GTensorField
    potential: PotentialField
    mass: float = 1.0
    charge: float = 1.0

    def __post_init__(self):
        if self.gfield.dim != self.potential.dim:
            raise DimensionMismatch(
                f"G field dimension {self.gfield.dim} != potential dimension "
                f"{self.potential.dim}"
            )
        if not self.mass > 0.0:
            raise ValueError("mass must be positive")

    @property
    def dim(self) -> int:
        return self.gfield.dim

    @property
    def order_half(self) -> int:
        return self.gfield.order_half


@dataclass(frozen=True)
class ELResidual:
    """Variational data at one (x, u, a): reduced covector E, full covector
    calE, and the constraint value G."""

    E: Array
    cal_E: Array
    G: float


def _require_positive(g: float) -> None:
    if not g > 0.0:
        raise NonPositiveG(f"G = {g:g} is not positive here")


def lagrangian_value(model: LagrangianModel, x, u) -> float:
    """L(x, u) = mass * G^(1/2N) + charge * u . A(x)."""
    g = g_value(model.gfield, x, u)
    _require_positive(g)
    a_form = np.asarray(model.potential.value(np.asarray(x, float)), float)
    n2 = 2 * model.order_half
    return model.mass * g ** (1.0 / n2) + model.charge * float(np.dot(u, a_form))


def constraint_value(model: LagrangianModel, x, u) -> float:
    """The constraint scalar G(x, u); the unit level set is G = 1."""
    return g_value(model.gfield, x, u)


def _velocity_form_pieces(model: LagrangianModel, x, u):
    """Shared contractions of G and its partials with the velocity.

    Returns (G, dG_full, dG_first, G_red, c) where

      dG_full[beta] = d_beta G_{...} u ... u            (all 2N slots filled)
      dG_first[beta] = u^mu d_mu G_{beta ...} u ... u   (2N - 1 slots filled)
      G_red[beta, mu] = G_{beta mu ...} u ... u         (2N - 2 slots filled)
      c[lam] = G_{lam ...} u ... u                      (2N - 1 slots filled)
    """
    gf = model.gfield
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != (gf.dim,) or u.shape != (gf.dim,):
        raise DimensionMismatch(f"x and u must have shape ({gf.dim},)")
    n2 = 2 * gf.order_half
    gt = np.asarray(gf.value(x), dtype=float)
    dg = np.asarray(gf.partials(x), dtype=float)
    g = float(contract_all(gt, u, n2))
    dg_full = contract_all(dg, u, n2)
    dg_first = contract_all(np.tensordot(u, dg, axes=(0, 0)), u, n2 - 1)
    g_red = contract_all(gt, u, n2 - 2)
    c = g_red @ u
    return g, dg_full, dg_first, g_red, c


def euler_lagrange_E(model: LagrangianModel, x, u, a) -> Array:
    """The reduced Euler-Lagrange covector E_beta(x, u, a).

    E_beta = mass * [ (d_beta G_{mu ...} / 2N - d_mu G_{beta ...}) u^mu u...u
                      - (2N - 1) G_{beta mu ...} a^mu u...u ]
             + charge * G^(1 - 1/2N) F_{beta mu} u^mu.

    E = 0 together with G = 1 is the determined equation of motion; its
    solutions never leave the unit level set.
    """
    g, dg_full, dg_first, g_red, _ = _velocity_form_pieces(model, x, u)
    _require_positive(g)
    a = np.asarray(a, dtype=float)
    n2 = 2 * model.order_half
    f = faraday_at(model.potential, np.asarray(x, float))
    e_cov = model.mass * (dg_full / n2 - dg_first - (n2 - 1) * (g_red @ a))
    return e_cov + model.charge * g ** (1.0 - 1.0 / n2) * (f @ u)


def variational_derivative(model: LagrangianModel, x, u, a) -> ELResidual:
    """Full variational derivative calE of L at (x, u, a).

    calE_lam = E_beta [delta^beta_lam - u^beta c_lam / G] G^(1/2N - 1) with
    c_lam = G_{lam ...} u...u; the bracket projects out the u direction, so
    u . calE = 0 identically.  That identity is verified as a post-check (the
    normalization includes the pre-cancellation magnitude of E so that
    near-solutions, where calE is pure rounding noise, do not trip it).
    """
    u = np.asarray(u, dtype=float)
    g, _, _, _, c = _velocity_form_pieces(model, x, u)
    _require_positive(g)
    e_cov = euler_lagrange_E(model, x, u, a)
    n2 = 2 * model.order_half
    weight = g ** (1.0 / n2 - 1.0)
    cal = (e_cov - (float(e_cov @ u) / g) * c) * weight

    resid = abs(float(u @ cal))
    norm_u = float(np.linalg.norm(u))
    scale = (norm_u * float(np.linalg.norm(cal))
             + norm_u * float(np.linalg.norm(e_cov)) * weight
             + RESIDUAL_FLOOR)
    if not resid <= 1e-10 * scale:
        raise ArithmeticError(
            f"u . calE = {resid:g} exceeds 1e-10 of scale {scale:g}; "
            "the computation is numerically unreliable here"
        )
    return ELResidual(E=e_cov, cal_E=cal, G=g)


def noether_residual(model: LagrangianModel, x, u, a) -> float:
    """Normalized value of u . calE, which must vanish for ALL inputs.

    Returns |u . calE| / (||u|| ||calE|| + 1e-30); this is an algebraic
    identity forced by degree-one homogeneity, not an equation of motion.
    """
    res = variational_derivative(model, x, u, a)
    u = np.asarray(u, dtype=float)
    num = abs(float(u @ res.cal_E))
    den = float(np.linalg.norm(u)) * float(np.linalg.norm(res.cal_E)) + RESIDUAL_FLOOR
    return num / den


def four_acceleration(model: LagrangianModel, x, u) -> Array:
    """Solve E(x, u, a) = 0 for the acceleration a.

    E is affine in a with coefficient matrix -mass (2N - 1) G_red, so one
    linear solve inverts it.  Along the resulting flow G is conserved, since
    d G / d tau = -(2N / (2N - 1)) u . E = 0.
    """
    g, dg_full, dg_first, g_red, _ = _velocity_form_pieces(model, x, u)
    _require_positive(g)
    n2 = 2 * model.order_half
    f = faraday_at(model.potential, np.asarray(x, float))
    rhs = (model.mass * (dg_full / n2 - dg_first)
           + model.charge * g ** (1.0 - 1.0 / n2) * (f @ u))
    return np.linalg.solve(model.mass * (n2 - 1) * g_red, rhs)


# ---------------------------------------------------------------------------
# chart-local three-velocity picture
# ---------------------------------------------------------------------------

def _reduced_pieces(model: LagrangianModel, t: ThreeVelocity):
    gf = model.gfield
    x = t.point
    if x.size != gf.dim:
        raise DimensionMismatch(
            f"three-velocity lives in dimension {x.size}, model in {gf.dim}"
        )
    n2 = 2 * gf.order_half
    uhat = np.concatenate(([1.0], t.v))
    gt = np.asarray(gf.value(x), dtype=float)
    dg = np.asarray(gf.partials(x), dtype=float)
    gbar = float(contract_all(gt, uhat, n2))
    return x, uhat, gt, dg, gbar, n2


def three_lagrangian_value(model: LagrangianModel, t: ThreeVelocity) -> float:
    """Chart-local Lagrangian Lbar = mass Gbar^(1/2N) + charge (v.A_i + A_0)."""
    x, _, _, _, gbar, n2 = _reduced_pieces(model, t)
    if not gbar > 0.0:
        raise NonPositiveG(
            f"reduced form Gbar = {gbar:g} is not positive; the chart-local "
            "three-velocity picture breaks down here"
        )
    a_form = np.asarray(model.potential.value(x), dtype=float)
    return (model.mass * gbar ** (1.0 / n2)
            + model.charge * float(t.v @ a_form[1:] + a_form[0]))


def three_euler_lagrange(model: LagrangianModel, t: ThreeVelocity, w) -> Array:
    """Euler-Lagrange covector Ebar_i of the chart-local Lagrangian.

    ``w = d v / d q^0`` is the three-acceleration.  The omitted time
    component satisfies Ebar_0 = -v^i Ebar_i by construction.  Writing
    c = G_{. ...} (1,v)...(1,v) (one slot free) and e1 = 1 - 1/2N:

        Ebar_i = mass [ d_i Gbar / (2N Gbar^e1) - d0( c_i / Gbar^e1 ) ]
                 + charge (F_{ij} v^j + F_{i0}),

    where d0 is the total chart-time derivative along the jet (q^0, q, v, w).
    """
    x, uhat, gt, dg, gbar, n2 = _reduced_pieces(model, t)
    if not gbar > 0.0:
        raise NonPositiveG(
            f"reduced form Gbar = {gbar:g} is not positive; the chart-local "
            "three-velocity picture breaks down here"
        )
    w = np.asarray(w, dtype=float)
    if w.shape != t.v.shape:
        raise DimensionMismatch("w must match the shape of the three-velocity")
    what = np.concatenate(([0.0], w))

    c = contract_all(gt, uhat, n2 - 1)
    g_red = contract_all(gt, uhat, n2 - 2)
    dgbar_coord = contract_all(dg, uhat, n2)
    # directional coordinate derivative along (1, v)
    dg_dir = dg[0] + np.tensordot(t.v, dg[1:], axes=(0, 0))
    dir_c = contract_all(dg_dir, uhat, n2 - 1)
    d0_c = dir_c + (n2 - 1) * (g_red @ what)
    d0_gbar = float(contract_all(dg_dir, uhat, n2)) + n2 * float(c @ what)

    e1 = 1.0 - 1.0 / n2
    momentum_rate = d0_c / gbar ** e1 - e1 * c * d0_gbar / gbar ** (e1 + 1.0)

    f = faraday_at(model.potential, x)
    force = f[1:, 1:] @ t.v + f[1:, 0]
    return (model.mass * (dgbar_coord[1:] / (n2 * gbar ** e1) - momentum_rate[1:])
            + model.charge * force)


def three_acceleration(model: LagrangianModel, t: ThreeVelocity) -> Array:
    """Solve Ebar(t, w) = 0 for the three-acceleration w.

    Ebar is affine in w, so the coefficient matrix is assembled column by
    column and inverted with one linear solve.
    """
    n = t.v.size
    base = three_euler_lagrange(model, t, np.zeros(n))
    mat = np.empty((n, n))
    for j in range(n):
        ej = np.zeros(n)
        ej[j] = 1.0
        mat[:, j] = three_euler_lagrange(model, t, ej) - base
    return np.linalg.solve(mat, -base)
