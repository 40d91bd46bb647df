"""One worldline, three formulations.

The geodesic equation of the charged connection, the determined form of the
Euler-Lagrange equation, and the second-order reduction of the Hamilton flow
of H = g^{-1}(p - eA)^2 / (2m) all produce the same acceleration field, and
their integrated trajectories coincide.
"""

import math

import numpy as np

import relmech as rm

metric = rm.schwarzschild(1.0)
gf = rm.GTensorField.from_metric(metric)
pot = rm.uniform_field(e_field=(0.02, 0.0, 0.0), b_field=(0.0, 0.0, 0.05))
mass, charge = 1.0, 0.3

x0 = np.array([0.0, 10.0, math.pi / 2, 0.0])
u0 = rm.project_to_shell(gf, x0, np.array([1.1, -0.03, 0.0, 0.03]))

model = rm.LagrangianModel(gf, pot, mass, charge)
conn = rm.connection_from(metric, pot, mass, charge)
ham = rm.standard_hamiltonian(metric, pot, mass, charge)

print("accelerations at the initial state:")
print("  geodesic       :", rm.geodesic_rhs(conn, x0, u0))
print("  determined E=0 :", rm.four_acceleration(model, x0, u0))
print("  Hamilton flow  :", rm.second_order_rhs(ham, x0, u0))

print("\nshell function and bracket:")
p0 = rm.on_shell_momentum(ham, x0, u0)
s0 = rm.PhaseState(x0, p0)
print("  H     :", ham.value(x0, p0))
print("  H_T   :", rm.mass_shell_residual(ham, s0), " (zero on the shell)")
shell = rm.mass_shell_scalar(ham)
print("  {H,H_T}:", rm.poisson_bracket(ham, shell, s0))
print("  legendre image - u0:",
      np.max(np.abs(rm.legendre_velocity(ham, s0) - u0)))

print("\nintegrating both pictures for tau in [0, 10] ...")
traj = rm.integrate_geodesic(conn, gf, rm.FourState(x0, u0), 1e-3, 10_000,
                             "none", 500)
ptraj = rm.integrate_hamiltonian(ham, s0, 1e-3, 10_000, 500)
print("tau    |x_geo - x_ham|_inf    G-1          H_T")
for k in range(len(traj)):
    div = np.max(np.abs(traj.x[k] - ptraj.x[k]))
    print(f"{traj.tau[k]:5.1f}   {div:.3e}          "
          f"{traj.G[k] - 1: .2e}   {ptraj.HT[k]: .2e}")
print("\nsup-norm divergence:", np.max(np.abs(traj.x - ptraj.x)))
