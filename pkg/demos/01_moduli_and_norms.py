"""
Moduli of smoothness and quasi-norms of a hat function
======================================================

Walks from samples to a Besov norm: differences, the modulus curve, the
per-scale contributions, and the F-norm built from ball means.
"""

# %%
import math

import numpy as np

from fslab import (SmoothnessParams, besov_norm, iterated_difference, make_bump, modulus_curve,
                   tl_norm)

f = make_bump(1, level=6, extent=2.0, radius=1.0, profile="hat")
print("samples:", f.npts, "spacing:", f.delta)

# %%
# A first difference of a piecewise linear function is piecewise constant.
d = iterated_difference(f, (8,), 1)
x = f.axis()
print("Delta_h f at x = -0.5, 0, 0.5:", d.values[np.searchsorted(x, [-0.5, 0.0, 0.5])])

# %%
# The sup-norm modulus of the hat grows like t until the shift spans the support.
curve = modulus_curve(f, math.inf, 1, -1, 6)
for t, w in zip(curve.radii, curve.values):
    print(f"t = {t:8.5f}   omega_1 = {w:.5f}")

# %%
# Zygmund-type norm: sup over scales of t^-s omega(t), largest at t = 1.
rep = besov_norm(f, SmoothnessParams(0.5, math.inf, math.inf, 1))
print("B^0.5_inf,inf:", rep.total, "(L_inf part", rep.lp_part, "+ seminorm", rep.seminorm_part, ")")
best = max(rep.scale_contributions, key=lambda tc: tc[1])
print("largest scale term at t =", best[0])

# %%
# The three variants of the seminorm differ only in which scales enter.
P = SmoothnessParams(0.75, 2.0, 2.0, 1)
for variant in ("inhomogeneous_01", "inhomogeneous_0inf", "homogeneous_0inf"):
    print(f"{variant:20s} {besov_norm(f, P, variant).total:.6f}")

# %%
# F-norm with q = p collapses to a double sum; compare with the B-norm.
g = make_bump(1, level=5, extent=2.0, radius=1.0, profile="hat")
for q in (1.0, 2.0, math.inf):
    F = tl_norm(g, SmoothnessParams(0.8, 2.0, q, 1, "F")).total
    B = besov_norm(g, SmoothnessParams(0.8, 2.0, q, 1)).total
    print(f"q = {q}:  F = {F:.5f}  B = {B:.5f}")
