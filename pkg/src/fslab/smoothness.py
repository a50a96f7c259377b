"""Iterated differences, moduli of smoothness and ball means on dyadic lattices.

Shifts are integer vectors ``h``; the physical shift is ``h * delta``.
Norms of differences are always taken over the whole lattice delta*Z^n (the
window is padded so that no nonzero term of the difference is lost), which
makes the dilation identities exact.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import ResolutionWarning, UsageError
from .grid import GridFunction, _as_exponent, lattice_lp


def binomial_weights(r: int) -> list[int]:
    """Coefficients c_j of Delta_h^r f(x) = sum_j c_j f(x + j h)."""
    if r < 1:
        raise UsageError(f"difference order must be >= 1, got {r}")
    return [(-1) ** (r - j) * comb(r, j) for j in range(r + 1)]


def lattice_shifts(dim: int, radius_units: float, half: bool = False) -> np.ndarray:
    """Integer vectors h with |h| <= radius_units, sorted by |h|^2.

    With ``half=True`` only one of each pair {h, -h} is kept and h = 0 is
    dropped.
    """
    H = int(math.floor(radius_units + 1e-9))
    rng = np.arange(-H, H + 1)
    grids = np.meshgrid(*([rng] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    sq = np.sum(pts * pts, axis=1)
    keep = sq <= radius_units * radius_units + 1e-9
    if half:
        # lexicographically positive half space
        pos = pts[:, 0] > 0
        if dim == 2:
            pos |= (pts[:, 0] == 0) & (pts[:, 1] > 0)
        keep &= pos
    pts, sq = pts[keep], sq[keep]
    order = np.lexsort(tuple(pts[:, i] for i in reversed(range(dim))) + (sq,))
    return pts[order]


def _pad(values: np.ndarray, pad: int) -> np.ndarray:
    return np.pad(values, pad) if pad else values


def full_difference(values: np.ndarray, h, r: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Delta_h^r of zero-extended samples on the smallest window holding its support.

    Returns ``(out, offset)`` where ``out[offset + i]`` is the difference at
    the original index ``i``.
    """
    h = tuple(int(v) for v in np.atleast_1d(h))
    if len(h) != values.ndim:
        raise UsageError("shift dimension does not match the function")
    coeffs = binomial_weights(r)
    shape = tuple(n + r * abs(hi) for n, hi in zip(values.shape, h))
    offset = tuple(r * max(hi, 0) for hi in h)
    out = np.zeros(shape)
    if not any(h):
        return out, offset  # the weights sum to zero; avoid round-off residue
    for j, c in enumerate(coeffs):
        sl = tuple(slice(o - j * hi, o - j * hi + n)
                   for o, hi, n in zip(offset, h, values.shape))
        out[sl] += c * values
    return out, offset


def iterated_difference(f: GridFunction, h, r: int) -> GridFunction:
    """Delta_h^r f on f's own window, with zero extension outside it."""
    out, offset = full_difference(f.values, h, r)
    window = tuple(slice(o, o + f.npts) for o in offset)
    return GridFunction(f.dim, f.level, f.extent, out[window].copy(),
                        f.extent * math.sqrt(f.dim) + f.delta)


def saturation_units(f: GridFunction) -> int:
    """Shift length (lattice units) from which Delta_h^r f has disjoint pieces.

    For |h*delta| >= 2R the translates f(. + j h) have disjoint supports, so
    every longer shift gives the same norm.
    """
    return int(math.ceil(2.0 * f.support_radius / f.delta - 1e-9))


def shift_norm_table(f: GridFunction, p, r: int, max_units: float):
    """Norms ||Delta_h^r f||_p for all nonzero shifts with |h| <= max_units.

    Uses ||Delta_{-h}^r f||_p = ||Delta_h^r f||_p, so only half the shifts are
    evaluated. Returns (|h|^2 as ints, norms), sorted by |h|^2.
    """
    p = _as_exponent(p)
    shifts = lattice_shifts(f.dim, max_units, half=True)
    w = f.delta ** f.dim
    norms = np.empty(len(shifts))
    if not np.any(f.values):
        norms[:] = 0.0
    else:
        for i, h in enumerate(shifts):
            out, _ = full_difference(f.values, h, r)
            norms[i] = lattice_lp(out, p, w)
    return np.sum(shifts * shifts, axis=1), norms


class ModulusTable:
    """Running maxima of a shift-norm table; answers omega_r(f, t)_p for any t."""

    def __init__(self, f: GridFunction, p, r: int, t_max: float):
        self.delta = f.delta
        units = min(t_max / f.delta, saturation_units(f))
        self.sq, norms = shift_norm_table(f, p, r, max(units, 1.0))
        self.running = np.maximum.accumulate(norms) if len(norms) else norms

    def __call__(self, t: float) -> float:
        u2 = (t / self.delta) ** 2
        idx = np.searchsorted(self.sq, u2 + 1e-9, side="right")
        if idx == 0:
            return 0.0
        return float(self.running[idx - 1])


def modulus(f: GridFunction, t: float, p, r: int, interior: float | None = None) -> float:
    """r-th modulus of smoothness: max over lattice shifts 0 < |h delta| <= t.

    Below one lattice spacing no shift exists; the degenerate value 0 is
    returned with a ResolutionWarning. ``interior`` restricts the L_p sum to
    points whose whole stencil lies in the open ball of that radius.
    """
    p = _as_exponent(p)
    if t < f.delta:
        warnings.warn(f"t={t} is below the lattice spacing {f.delta}; omega set to 0",
                      ResolutionWarning, stacklevel=2)
        return 0.0
    if interior is not None:
        return _interior_modulus(f, t, p, r, interior)
    return ModulusTable(f, p, r, t)(t)


def _interior_modulus(f, t, p, r, rho):
    w = f.delta ** f.dim
    rr = f.radius_sq()
    inside = rr < rho * rho
    coeffs = binomial_weights(r)
    n = f.npts
    best = 0.0
    for h in lattice_shifts(f.dim, t / f.delta):
        if not np.any(h):
            continue
        lo = [max(0, -r * hi) for hi in h]
        hi_ = [n - max(0, r * hi) for hi in h]
        if any(a >= b for a, b in zip(lo, hi_)):
            continue
        acc = np.zeros([b - a for a, b in zip(lo, hi_)])
        mask = np.ones(acc.shape, dtype=bool)
        for j, c in enumerate(coeffs):
            sl = tuple(slice(a + j * s, b + j * s) for a, b, s in zip(lo, hi_, h))
            acc += c * f.values[sl]
            mask &= inside[sl]
        best = max(best, lattice_lp(acc[mask], p, w))
    return best


@dataclass(frozen=True)
class ModulusCurve:
    radii: list[float]
    values: list[float]

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["t", "omega"])
        for t, v in zip(self.radii, self.values):
            wr.writerow([repr(float(t)), repr(float(v))])
        return buf.getvalue()


def modulus_curve(f: GridFunction, p, r: int, k_min: int, k_max: int) -> ModulusCurve:
    """omega_r(f, 2^-k)_p for k = k_min..k_max, returned in ascending t."""
    if 2.0 ** (-k_max) < f.delta:
        raise UsageError("2^-k_max is below the lattice spacing")
    if k_min > k_max:
        raise UsageError("k_min must not exceed k_max")
    table = ModulusTable(f, p, r, 2.0 ** (-k_min))
    ks = range(k_max, k_min - 1, -1)
    return ModulusCurve([2.0 ** (-k) for k in ks], [table(2.0 ** (-k)) for k in ks])


def ball_means_stack(f: GridFunction, ts, p, r: int):
    """Ball means d^r_{t,p} f for several radii on one common padded window.

    Returns ``(stack, pad)``: ``stack[i]`` holds d^r_{ts[i],p} f on the window
    of f padded by ``pad`` samples per side, which contains the support of
    every ball mean computed.
    """
    p = _as_exponent(p)
    if math.isinf(p):
        raise UsageError("ball means are defined only for p < infinity")
    ts = [float(t) for t in ts]
    if min(ts) < f.delta:
        raise UsageError("ball-means radius below the lattice spacing")
    units = [t / f.delta for t in ts]
    H = int(math.floor(max(units) + 1e-9))
    pad = r * H
    big = _pad(f.values, 2 * pad)
    inner = tuple(slice(pad, pad + f.npts + 2 * pad) for _ in range(f.dim))
    shape = (f.npts + 2 * pad,) * f.dim
    coeffs = binomial_weights(r)

    shifts = lattice_shifts(f.dim, max(units))
    sq = np.sum(shifts * shifts, axis=1)
    order = sorted(range(len(ts)), key=lambda i: units[i])
    stack = np.zeros((len(ts),) + shape)
    acc = np.zeros(shape)
    pos = 0
    for i in order:
        lim = units[i] ** 2 + 1e-9
        while pos < len(shifts) and sq[pos] <= lim:
            h = shifts[pos]
            if np.any(h):
                d = np.zeros(shape)
                for j, c in enumerate(coeffs):
                    sl = tuple(slice(s.start + j * hi, s.stop + j * hi) for s, hi in zip(inner, h))
                    d += c * big[sl]
                acc += np.abs(d) ** p
            pos += 1
        # h = 0 is part of the closed ball and contributes nothing
        stack[i] = (acc / pos) ** (1.0 / p)
    return stack, pad


def ball_means(f: GridFunction, t: float, p, r: int) -> GridFunction:
    """d^r_{t,p} f(x) = (mean over lattice shifts |h delta| <= t of |Delta_h^r f(x)|^p)^(1/p)."""
    p = _as_exponent(p)
    if math.isinf(p):
        raise UsageError("ball means are defined only for p < infinity")
    if t < f.delta:
        raise UsageError(f"t={t} is below the lattice spacing {f.delta}")
    stack, pad = ball_means_stack(f, [t], p, r)
    window = tuple(slice(pad, pad + f.npts) for _ in range(f.dim))
    return GridFunction(f.dim, f.level, f.extent, stack[0][window].copy(),
                        f.extent * math.sqrt(f.dim) + f.delta)
