"""
Entropy numbers of a diagonal sequence-space embedding
======================================================

Covers the image of a sampled unit ball with 2^(k-1) balls and fits the
decay of the covering radius in k.
"""

# %%
import numpy as np

from fslab import SeqSpaceParams, entropy_curve, entropy_rate_fit

src = SeqSpaceParams(s=2.0, rho=1.0, p=2, q=2, n=1, M=(1, 2, 4))
dst = SeqSpaceParams(s=1.0, rho=0.0, p=2, q=2, n=1, M=(1, 2, 4))
print("coordinates:", src.size)

# %%
# One coordinate: the covering problem is an interval, solved exactly.
one_s = SeqSpaceParams(2.0, 1.0, 2, 2, 1, (1,))
one_d = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1,))
exact = entropy_curve(one_s, one_d, range(1, 7), 512, 0)
greedy = entropy_curve(one_s, one_d, range(1, 7), 512, 0, method="greedy_cover")
for e, g in zip(exact, greedy):
    print(f"k = {e.k}: exact {e.value:.5f}  greedy on 512 points {g.value:.5f}")

# %%
ks = list(range(2, 8))
for seed in range(3):
    fit = entropy_rate_fit(src, dst, ks, 4096, seed)
    vals = np.array(fit.extras["estimates"])
    print(f"seed {seed}: slope {fit.slope:+.3f} (predicted {fit.predicted_slope:+.1f})  e_k =",
          np.round(vals, 4))
