"""
Dilation and the homogeneity exponent
=====================================

Dilating a fine bump f0 by 2^m and measuring the homogeneous quasi-norm
gives a straight line in log-log coordinates with slope s - n/p.
"""

# %%
import math

from fslab import SmoothnessParams, dilate, homogeneity_experiment, lp_norm, make_bump

f0 = make_bump(1, level=10, extent=0.125, radius=0.0625, profile="smooth_bump")

# %%
# Dilation is pure reindexing, so L_p norms scale by exactly 2^(m n / p).
for m in range(5):
    g = dilate(f0, m)
    print(f"m = {m}: level {g.level}, support {g.support_radius}, "
          f"||g||_2 / ||f0||_2 = {lp_norm(g, 2) / lp_norm(f0, 2):.6f} (2^(m/2) = {2 ** (m / 2):.6f})")

# %%
for s, p, q, fam in [(0.5, 1, 2, "B"), (0.75, math.inf, math.inf, "B"), (1.25, 2, 2, "B"),
                     (0.8, 2, 2, "F")]:
    P = SmoothnessParams(s, p, q, int(s) + 1, fam)
    fit = homogeneity_experiment(f0, P, 4)
    print(f"{fam}(s={s}, p={p}, q={q}): slope {fit.slope:+.4f}  predicted {fit.predicted_slope:+.4f}  "
          f"max residual {fit.max_residual:.2e}")

# %%
# The inhomogeneous totals carry an L_p term scaling like lambda^(-n/p), so they bend.
fit = homogeneity_experiment(f0, SmoothnessParams(0.5, 2, 2, 1), 4)
for (lx, ly), inh in zip(fit.points, fit.extras["inhomogeneous_totals"]):
    print(f"lambda = {math.exp(lx):.4f}  homogeneous {math.exp(ly):.5f}  inhomogeneous {inh:.5f}")
