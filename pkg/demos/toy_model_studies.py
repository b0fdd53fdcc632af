#!/usr/bin/env python3
# Monte Carlo studies of the random Fourier surrogate for the parameter-ODE
# coefficients: how the condition number and the norms of the sampled linear
# systems scale with dimension, and what the Lipschitz landscape of the
# solution map looks like for one fixed draw.

import numpy as np

from rkbudget import (
    condition_number,
    kappa_study,
    lip_surface,
    norm_study,
    perturbation_bound,
    perturbation_empirical,
    sample_toy,
)

SEED = 20240817

print("condition number of the sampled matrix vs dimension (100 draws each)")
print(f"{'N_V':>5} {'median':>12} {'q16':>12} {'q84':>12} {'N^2':>10} {'N^3':>10} {'excl':>5}")
for point in kappa_study([10, 25, 50, 100], samples=100, seed=SEED):
    nv = point.n_params
    print(
        f"{nv:>5} {point.median:>12.4g} {point.q16:>12.4g} {point.q84:>12.4g} "
        f"{nv**2:>10.3g} {nv**3:>10.3g} {point.excluded:>5}"
    )
print("medians sit between the square and the cube of the dimension,")
print("matching a polynomial conditioning assumption with exponent 3")
print()

print("norm scalings (100 draws each)")
studies = norm_study([10, 25, 50, 100], samples=100, seed=SEED)
print(f"{'N_V':>5} {'|A|_F':>10} {'~N_V':>8} {'|C|_2':>10} {'~sqrt':>8} {'|inv(A)C|':>12} {'q84':>10}")
for a_pt, c_pt, f_pt in zip(studies["norm_A"], studies["norm_C"], studies["norm_AinvC"]):
    nv = a_pt.n_params
    print(
        f"{nv:>5} {a_pt.median:>10.4g} {nv:>8} {c_pt.median:>10.4g} {np.sqrt(nv):>8.3g} "
        f"{f_pt.median:>12.4g} {f_pt.q84:>10.4g}"
    )
print()

print("Lipschitz landscape of the solution map for one coefficient draw")
_, params = sample_toy(25, rng=SEED)
grid = np.linspace(0.0, 10.0, 80)
surface = lip_surface(params, grid, grid)
values = surface[~np.isnan(surface)]
for threshold in (5.0, 15.0, 50.0):
    print(f"  fraction of grid cells with difference quotient <= {threshold:>4g}: {np.mean(values <= threshold):.3f}")
print("  (a state Lipschitz constant of 15 covers most of the landscape)")
print()

print("first-order perturbation bound for the linear solve vs reality")
rng = np.random.default_rng(SEED)
system, _ = sample_toy(25, rng=rng)
kappa = condition_number(system.a)
r_mat = rng.normal(size=system.a.shape)
r_vec = rng.normal(size=system.c.shape)
print(f"  condition number of this draw: {kappa:.4g}")
print(f"  {'xi':>8} {'actual':>12} {'bound':>12}")
for xi in (1e-6, 1e-5, 1e-4, 1e-3):
    actual = perturbation_empirical(system.a, system.c, r_mat, r_vec, xi)
    bound = perturbation_bound(system.a, system.c, r_mat, r_vec, xi)
    print(f"  {xi:>8.0e} {actual:>12.4g} {bound:>12.4g}")
print("  the bound dominates and both shrink linearly in the disturbance")
