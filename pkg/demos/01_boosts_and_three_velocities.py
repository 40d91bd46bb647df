"""Three-velocities transform projectively; four-velocities linearly.

A boost with rapidity alpha acts linearly on four-velocities but induces the
familiar relativistic velocity-addition law on three-velocities v = u_i/u_0.
This script walks through both pictures and checks they commute.
"""

import math

import numpy as np

import relmech as rm

alpha = math.log(2.0)          # sh = 0.75, ch = 1.25, frame speed 0.6
print(f"rapidity alpha = ln 2 = {alpha:.6f}, frame speed th(alpha) = "
      f"{math.tanh(alpha):.3f}\n")

print("-- a particle at rest, seen from the boosted frame")
v_rest = np.zeros(3)
print("   boost_three(alpha, 0) =", rm.boost_three(alpha, v_rest))

print("\n-- velocity addition is rapidity addition")
v = np.array([0.5, 0.0, 0.0])
print("   two half-boosts :", rm.boost_three(alpha / 2, rm.boost_three(alpha / 2, v)))
print("   one full boost  :", rm.boost_three(alpha, v))

print("\n-- light speed is a fixed point of every boost")
for a in (0.3, 1.0, 5.0):
    print(f"   alpha={a:3.1f}:", rm.boost_three(a, np.array([1.0, 0.0, 0.0])))

print("\n-- the square commutes: project(boost(u)) == boost(project(u))")
rng = np.random.default_rng(0)
u = np.array([1.4, 0.3, -0.2, 0.5])
lifted = rm.boost_four(alpha, u)
left = rm.three_from_four(rm.FourState(np.zeros(4), lifted)).v
right = rm.projective_transform(
    rm.lorentz_boost_transition(alpha),
    rm.three_from_four(rm.FourState(np.zeros(4), u))).v
print("   via four-velocities :", left)
print("   via chart transition:", right)
print("   difference          :", np.max(np.abs(left - right)))

print("\n-- proportional four-velocities are the same unparameterized state")
print("   same_jet(u, -2.5 u) :", rm.same_jet(u, -2.5 * u))
print("   same_jet(u, u+eps_perp):",
      rm.same_jet(u, u + np.array([0.0, 1e-3, 0.0, 0.0])))

print("\n-- lifting three-velocities back onto the unit shell")
gf = rm.GTensorField.from_metric(rm.minkowski())
t = rm.ThreeVelocity(0.0, np.zeros(3), np.array([0.6, 0.0, 0.0]))
for sign in (+1, -1):
    s = rm.four_from_three(t, gf, sign)
    print(f"   sign={sign:+d}: u = {s.u},  g(u,u) = "
          f"{rm.g_value(gf, s.x, s.u):.15f}")
