"""
Pointwise multipliers at shrinking scales
=========================================

The ratio ||phi f|| / ||f|| for phi a bump adapted to B_lambda should stay
bounded as lambda goes to 0.
"""

# %%
from fslab import (MultiplierSpec, SmoothnessParams, derivative_bound_check, make_multiplier,
                   multiplier_sweep)

# %%
for lam in (1.0, 0.5, 0.25, 0.125):
    spec = MultiplierSpec(lam, order=2, profile="cutoff")
    phi = make_multiplier(spec, level=9, extent=2.0)
    ratio, ok = derivative_bound_check(phi, spec)
    print(f"lambda = {lam}: a = {spec.a:.3f}, worst |D^j phi| / (a lambda^-j) = {ratio:.3f}")

# %%
for P in (SmoothnessParams(0.5, 2, 2, 1), SmoothnessParams(1.25, 2, 2, 2),
          SmoothnessParams(0.8, 2, 2, 1, "F")):
    cut = multiplier_sweep(P, m_max=3, base_level=6, profile="cutoff")
    flat = multiplier_sweep(P, m_max=3, base_level=6, profile="plateau")
    print(f"{P.family}(s={P.s}): cutoff ratios", [round(r, 4) for r in cut.max_ratios],
          f"drift {cut.drift:.3f}; plateau ratios", flat.max_ratios)
