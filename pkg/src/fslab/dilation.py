"""Exact dyadic dilations f -> f(2^-m .) and the homogeneity experiments."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ExperimentError, ResolutionError, UsageError
from .grid import GridFunction
from .norms import SmoothnessParams, quasi_norm
from .smoothness import ball_means, iterated_difference, modulus

STANDARD_EXTENT = 2.0


def dilate(f: GridFunction, m: int, standard_extent: float = STANDARD_EXTENT) -> GridFunction:
    """g(x) = f(2^-m x) by reindexing: same samples on a lattice 2^m times coarser.

    The window grows by 2^m and is clipped back to ``standard_extent`` when it
    would exceed it (only zero samples are dropped, since supp g lies in B_1).
    """
    if int(m) != m or m < 0:
        raise UsageError(f"dilation exponent must be a nonnegative integer, got {m}")
    m = int(m)
    if f.level < m:
        raise ResolutionError(f"level {f.level} is too coarse for an exact 2^-{m} dilation")
    if f.support_radius > 2.0 ** (-m):
        raise DomainError(f"support radius {f.support_radius} exceeds 2^-{m}")
    level = f.level - m
    extent = f.extent * 2.0**m
    values = f.values
    if extent > standard_extent:
        delta = 2.0 ** (-level)
        drop = int(round((extent - standard_extent) / delta))
        values = values[(slice(drop, values.shape[0] - drop),) * f.dim]
        extent = standard_extent
    return GridFunction(f.dim, level, extent, values, f.support_radius * 2.0**m)


@dataclass
class FitResult:
    """Least-squares line through (log x, log y) points."""

    slope: float
    intercept: float
    max_residual: float
    points: list[tuple[float, float]]
    predicted_slope: float | None = None
    extras: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({
            "slope": self.slope,
            "intercept": self.intercept,
            "max_residual": self.max_residual,
            "predicted_slope": self.predicted_slope,
            "points": [list(pt) for pt in self.points],
            **self.extras,
        })

    def to_csv(self, header=("lambda", "norm")) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        for lx, ly in self.points:
            wr.writerow([repr(math.exp(lx)), repr(math.exp(ly))])
        return buf.getvalue()


def fit_loglog(xs, ys, predicted_slope=None) -> FitResult:
    """OLS fit of log y against log x; needs at least three positive pairs."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if x > 0 and y > 0 and math.isfinite(y)]
    if len(pts) < 3:
        raise ExperimentError(f"only {len(pts)} usable points for a log-log fit")
    lx, ly = np.array(pts).T
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return FitResult(float(slope), float(intercept), float(np.max(np.abs(resid))),
                     pts, predicted_slope)


def homogeneity_experiment(f0: GridFunction, params: SmoothnessParams, M: int) -> FitResult:
    """Fit log ||f0(2^-m .)|| against log 2^-m for m = 0..M.

    Uses the homogeneous quasi-norm on (0, inf); the predicted slope is
    s - n/p. Inhomogeneous totals are recorded in ``extras`` but not fitted.
    """
    if int(M) != M or M < 3:
        raise UsageError("M must be an integer >= 3")
    if f0.support_radius > 2.0 ** (-M):
        raise DomainError(f"mother support radius must be <= 2^-{M}")
    if f0.level < M:
        raise ResolutionError(f"mother level {f0.level} < M = {M}")
    lams, hom, inh = [], [], []
    for m in range(M + 1):
        g = dilate(f0, m)
        lams.append(2.0 ** (-m))
        hom.append(quasi_norm(g, params, "homogeneous_0inf").total)
        inh.append(quasi_norm(g, params, "inhomogeneous_01").total)
    fit = fit_loglog(lams, hom, params.s - f0.dim / params.p)
    fit.extras = {"inhomogeneous_totals": inh}
    return fit


def scale_commutation_check(f: GridFunction, m: int, t: float, p, r: int,
                            kind: str = "modulus", h=None):
    """Both sides of a dilation identity for lambda = 2^-m.

    kind ``modulus``:     omega_r(f(lambda .), t)_p  vs  lambda^{-n/p} omega_r(f, lambda t)_p
    kind ``ball_means``:  d^r_{t,p}(f(lambda .))(x)  vs  d^r_{lambda t,p} f(lambda x)
    kind ``difference``:  Delta^r_h(f(lambda .))(x)  vs  Delta^r_{lambda h} f(lambda x),
                          for the integer shift ``h`` of the coarse lattice (t, p unused).
    Pointwise kinds return sample arrays over the common index window.
    """
    g = dilate(f, m, standard_extent=math.inf)
    lam = 2.0 ** (-m)
    if kind == "modulus":
        if t < g.delta:
            raise ResolutionError("t below the dilated lattice spacing")
        factor = 1.0 if math.isinf(float(p)) else lam ** (-f.dim / float(p))
        return modulus(g, t, p, r), factor * modulus(f, lam * t, p, r)
    if kind == "ball_means":
        if t < g.delta:
            raise ResolutionError("t below the dilated lattice spacing")
        return ball_means(g, t, p, r).values, ball_means(f, lam * t, p, r).values
    if kind == "difference":
        if h is None:
            raise UsageError("kind='difference' needs a lattice shift h")
        # h*delta_g on the coarse lattice is lambda*h*delta_g = h*delta_f on the fine one
        return iterated_difference(g, h, r).values, iterated_difference(f, h, r).values
    raise UsageError(f"unknown identity kind {kind!r}")
