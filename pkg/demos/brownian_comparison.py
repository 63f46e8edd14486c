"""Gaussian steps: the dual-cone minimum equals the projection formula.

For identity-covariance Gaussian increments with drift a, the transform
L(x) = exp(|x|^2/2 + <x, a>) attains its dual-cone minimum at the projection
of -a onto K*, and Moreau's orthogonal splitting a = p_K(a) + p_polar(a)
turns the minimum value into exp(-d(a, K)^2 / 2): the rate depends only on
how far the drift sits from the cone.
"""

import numpy as np

import conewalks as cw

Q = cw.orthant(2)

print(f"{'drift a':>16} {'d(a, Q)':>10} {'exp(-d^2/2)':>13} {'solver rho':>13} {'diff':>9}")
for a in ([1.0, 1.0], [0.5, -0.5], [-1.0, -1.0], [-2.0, 0.3], [-0.7, -1.9]):
    a = np.array(a)
    dist = cw.distance(Q, a)
    closed = cw.brownian_rate(a, Q)
    cert = cw.minimize_on_dual(cw.GaussianLaplace(a), Q)
    print(f"{str(a.tolist()):>16} {dist:>10.6f} {closed:>13.9f} "
          f"{cert.rho:>13.9f} {abs(closed - cert.rho):>9.1e}")

# --- Moreau's decomposition: project onto the cone and onto its polar -------
print("\nMoreau splitting a = p_K(a) + p_polar(a), orthogonal parts:")
for a in ([-1.0, 2.0], [3.0, 4.0], [-1.0, -1.0], [2.5, -0.5]):
    pk, pp = cw.moreau_decompose(Q, np.array(a))
    print(f"  a={a}: p_K = {pk.tolist()}, p_polar = {pp.tolist()}, "
          f"<p_K, p_polar> = {pk @ pp:.1e}")

# --- works for every cone with a projection: half-spaces and rays -----------
H = cw.halfspace([0.0, 1.0])
a = np.array([3.0, -4.0])
print(f"\nhalf-space y >= 0, drift {a.tolist()}: distance {cw.distance(H, a)}, "
      f"rate exp(-8) = {cw.brownian_rate(a, H):.6e}")
cert = cw.minimize_on_dual(cw.GaussianLaplace(a), H)
print(f"solver finds x* = {np.round(cert.x_star, 9).tolist()} on the dual ray, "
      f"rho = {cert.rho:.6e}")

# --- sampled Brownian motion behaves like its continuous parent: simulate ---
rng_drift = np.array([-0.6, -0.6])
closed = cw.brownian_rate(rng_drift, Q)
print(f"\ndrift {rng_drift.tolist()}: rate {closed:.6f} per step; survival to "
      "n = 40 is astronomically small, which is exactly why the lattice "
      "models use tilting (see monte_carlo_tilting.py)")
