"""A relativistic charge gyrating in a uniform magnetic field.

The homogeneous Lagrangian m sqrt(g(u,u)) + e u.A produces, on the unit
shell g(u,u) = 1, the familiar Lorentz-force equation.  The magnetic force
does no work, so both the shell value G and the spatial speed are conserved
along the numerical flow.
"""

import numpy as np

import relmech as rm

mk = rm.minkowski()
gf = rm.GTensorField.from_metric(mk)
pot = rm.uniform_field(b_field=(0.0, 0.0, 1.0))       # F_12 = 1
model = rm.LagrangianModel(gf, pot, mass=1.0, charge=1.0)

# start on the shell from the three-velocity (0.6, 0, 0)
s0 = rm.four_from_three(rm.ThreeVelocity(0.0, np.zeros(3),
                                         np.array([0.6, 0.0, 0.0])), gf, 1)
print("initial u:", s0.u, "  G:", rm.constraint_value(model, s0.x, s0.u))
print("Lagrangian value:", rm.lagrangian_value(model, s0.x, s0.u))

conn = rm.connection_from(mk, pot, mass=1.0, charge=1.0)
print("\nacceleration at start:", rm.geodesic_rhs(conn, s0.x, s0.u))
print("(the magnetic force turns the spatial velocity without changing u^0)")

traj = rm.integrate_geodesic(conn, gf, s0, dt=1e-3, steps=10_000,
                             projection="none", record_every=1000)
print("\ntau      x^1       x^2       |u_spatial|   G - 1")
for k in range(len(traj)):
    spd = np.hypot(traj.u[k, 1], traj.u[k, 2])
    print(f"{traj.tau[k]:5.1f}  {traj.x[k, 1]: .5f}  {traj.x[k, 2]: .5f}"
          f"   {spd:.12f}   {traj.G[k] - 1.0: .2e}")
print("\nmax |G-1| over the run:", traj.max_constraint_drift)

# the gyration radius of a charge with gamma v = 0.75 in B = 1 is 0.75
radius = np.max(np.hypot(traj.x[:, 1] - 0.0, traj.x[:, 2] - 0.75)) / 1.0
print("orbit stays on a circle of radius ~0.75 around (0, 0.75):",
      f"{np.max(np.abs(np.hypot(traj.x[:, 1], traj.x[:, 2] - 0.75) - 0.75)):.2e}")

# substituting the integrated states back into the variational derivative
worst = 0.0
for k in range(len(traj)):
    a = rm.geodesic_rhs(conn, traj.x[k], traj.u[k])
    res = rm.variational_derivative(model, traj.x[k], traj.u[k], a)
    worst = max(worst, float(np.max(np.abs(res.cal_E))))
print("max |calE| along the orbit (equation residual):", worst)
