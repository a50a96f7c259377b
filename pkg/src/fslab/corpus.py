"""Fixed test-function corpora with a common declared support radius."""

from __future__ import annotations

import numpy as np

from .grid import GridFunction, make_bump

STANDARD_NAMES = (
    "hat", "hat_half", "bump", "bump_half", "abs",
    "hat_times_bump", "hat_minus_bump_half", "odd_bump", "quadratic_bump", "bump_plus_abs",
)


def standard_corpus(dim: int, level: int, extent: float, radius: float) -> list[GridFunction]:
    """Ten functions on one grid, each declared with support radius ``radius``.

    Mixes kinks (hat, abs), smooth bumps, an odd function and combinations, so
    that ratios are not dominated by a single profile type.
    """
    def bump(profile, rad=radius, **kw):
        return make_bump(dim, level, extent, rad, profile, **kw).with_support(radius)

    hat, hat2 = bump("hat"), bump("hat", radius / 2)
    sb, sb2 = bump("smooth_bump"), bump("smooth_bump", radius / 2)
    ab = bump("abs")
    x1 = hat.coords()[0] / radius
    members = [
        hat, hat2, sb, sb2, ab,
        hat.replace(hat.values * sb.values),
        hat - 0.5 * sb2,
        sb.replace(x1 * sb.values),
        sb.replace(x1 * x1 * sb.values),
        sb + 0.25 * ab,
    ]
    assert len(members) == len(STANDARD_NAMES)
    return members


def smooth_corpus(dim: int, level: int, extent: float, radius: float) -> list[GridFunction]:
    """Smooth bumps of radius R, R/2 and R/4 plus an odd smooth function."""
    out = [make_bump(dim, level, extent, radius * c, "smooth_bump").with_support(radius)
           for c in (1.0, 0.5, 0.25)]
    x1 = out[0].coords()[0] / radius
    out.append(out[0].replace(np.asarray(x1 * out[0].values)))
    return out
