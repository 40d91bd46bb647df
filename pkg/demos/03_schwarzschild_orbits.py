"""Geodesics of the Schwarzschild metric: circular orbits and the horizon.

The connection symbols used here carry the opposite sign of the textbook
Christoffel symbols, so the geodesic equation is a = C[mu, lam, nu] u^mu u^nu
with no minus sign.  The circular-orbit angular velocity is recovered by
root-finding on the radial acceleration, then the integrated coordinate
period is compared with the closed form 2 pi sqrt(r^3 / M).
"""

import math

import numpy as np

import relmech as rm

sw = rm.schwarzschild(mass=1.0)
gf = rm.GTensorField.from_metric(sw)
lc = rm.levi_civita_connection(sw)

r0 = 10.0
x0 = np.array([0.0, r0, math.pi / 2, 0.0])
print("metric at r=10, equator:", np.diag(rm.metric_at(sw, x0)))
print("connection symbol C[t, r, t]:", rm.christoffel_at(sw, x0)[0, 1, 0],
      " (textbook value is +0.008)")

f = 1.0 - 2.0 / r0


def radial_accel(omega):
    ut = 1.0 / math.sqrt(f - r0 * r0 * omega * omega)
    u = np.array([ut, 0.0, 0.0, ut * omega])
    return rm.geodesic_rhs(lc, x0, u)[1]


lo, hi = 0.3 * r0 ** -1.5, 2.0 * r0 ** -1.5
for _ in range(100):
    mid = 0.5 * (lo + hi)
    if radial_accel(mid) * radial_accel(lo) <= 0:
        hi = mid
    else:
        lo = mid
omega = 0.5 * (lo + hi)
print(f"\nroot-found angular velocity: {omega:.12f}")
print(f"closed form sqrt(M/r^3)    : {math.sqrt(1.0 / r0 ** 3):.12f}")

ut = 1.0 / math.sqrt(f - r0 * r0 * omega * omega)
u0 = np.array([ut, 0.0, 0.0, ut * omega])
dtau = 2.0 * math.pi / (ut * omega)
traj = rm.integrate_geodesic(lc, gf, rm.FourState(x0, u0), dt=2e-2,
                             steps=int(dtau / 2e-2) + 2, projection="none",
                             record_every=1)
phi = traj.x[:, 3]
k = int(np.searchsorted(phi, 2.0 * math.pi))
tt = traj.x[:, 0]
period = tt[k - 1] + (tt[k] - tt[k - 1]) * (2 * math.pi - phi[k - 1]) / (
    phi[k] - phi[k - 1])
print(f"\nintegrated coordinate period: {period:.6f}")
print(f"2 pi sqrt(r^3 / M)          : {2 * math.pi * math.sqrt(r0 ** 3):.6f}")
print(f"radius wander over one turn : {np.ptp(traj.x[:, 1]):.2e}")
print(f"max |G-1|                   : {traj.max_constraint_drift:.2e}")

print("\n-- an infalling particle leaves the chart at the horizon")
u_in = rm.project_to_shell(gf, np.array([0.0, 4.0, math.pi / 2, 0.0]),
                           np.array([1.5, -0.4, 0.0, 0.0]))
try:
    rm.integrate_geodesic(lc, gf,
                          rm.FourState(np.array([0.0, 4.0, math.pi / 2, 0.0]),
                                       u_in),
                          dt=5e-2, steps=100_000)
except rm.DomainError as exc:
    print("DomainError:", exc)
    print("last good proper time:", exc.tau)
