"""Slow reference implementations written straight from the definitions.

Nothing here imports the package's kernels: samples are read through a
zero-extended lookup, shifts are enumerated over the full lattice ball, and
sums are plain Python loops.
"""

import itertools
import math


def lookup(f, idx):
    """Sample of f at integer lattice index idx (origin = 0), zero outside the window."""
    half = (f.values.shape[0] - 1) // 2
    pos = tuple(i + half for i in idx)
    if all(0 <= p < f.values.shape[0] for p in pos):
        return float(f.values[pos])
    return 0.0


def difference_at(f, idx, h, r):
    if not any(h):
        return 0.0  # the binomial weights sum to zero
    return sum((-1) ** (r - j) * math.comb(r, j) * lookup(f, tuple(i + j * hh for i, hh in zip(idx, h)))
               for j in range(r + 1))


def ball(dim, units, include_zero):
    H = int(math.floor(units + 1e-9))
    out = []
    for h in itertools.product(range(-H, H + 1), repeat=dim):
        if sum(v * v for v in h) <= units * units + 1e-9 and (include_zero or any(h)):
            out.append(h)
    return out


def lp_sum(vals, p, weight):
    vals = [abs(v) for v in vals]
    if math.isinf(p):
        return max(vals, default=0.0)
    return (weight * sum(v**p for v in vals)) ** (1.0 / p)


def indices(f, pad):
    half = (f.values.shape[0] - 1) // 2 + pad
    return itertools.product(range(-half, half + 1), repeat=f.dim)


def modulus(f, t, p, r):
    """max over lattice shifts 0 < |h delta| <= t of the full-lattice L_p norm."""
    best = 0.0
    w = f.delta**f.dim
    for h in ball(f.dim, t / f.delta, False):
        pad = r * max(abs(v) for v in h)
        vals = [difference_at(f, x, h, r) for x in indices(f, pad)]
        best = max(best, lp_sum(vals, p, w))
    return best


def ball_means_at(f, idx, t, p, r):
    shifts = ball(f.dim, t / f.delta, True)
    return (sum(abs(difference_at(f, idx, h, r)) ** p for h in shifts) / len(shifts)) ** (1.0 / p)


def besov_01(f, s, p, q, r):
    """Inhomogeneous B-norm on scales 2^-k, k = 0..level, weight ln 2."""
    terms = [2.0 ** (k * s) * modulus(f, 2.0 ** (-k), p, r) for k in range(f.level + 1)]
    if math.isinf(q):
        semi = max(terms)
    else:
        semi = (math.log(2) * sum(a**q for a in terms)) ** (1.0 / q)
    lp = lp_sum([float(v) for v in f.values.ravel()], p, f.delta**f.dim)
    return lp + semi


def seq_norm(P, coeffs):
    """Triple mixed norm by nested loops over (beta, j, m)."""
    total = 0.0
    pos = 0
    for beta in P.betas():
        levels = []
        for j, Mj in enumerate(P.M):
            block = [abs(c) for c in coeffs[pos:pos + Mj]]
            pos += Mj
            inner = max(block) if math.isinf(P.p) else sum(c**P.p for c in block) ** (1 / P.p)
            levels.append(2.0 ** (j * (P.s - P.n / P.p)) * inner)
        outer = max(levels) if math.isinf(P.q) else sum(v**P.q for v in levels) ** (1 / P.q)
        total = max(total, 2.0 ** (P.rho * sum(beta)) * outer)
    return total


def kcenter_exhaustive(points, k, dist):
    """Optimal discrete k-center radius by trying every center subset."""
    n = len(points)
    best = math.inf
    for cs in itertools.combinations(range(n), min(k, n)):
        r = max(min(dist(points[i], points[c]) for c in cs) for i in range(n))
        best = min(best, r)
    return best


def interval_cover_radius(lo, hi, n_balls):
    """Smallest eps such that n_balls intervals [c - eps, c + eps] cover [lo, hi].

    Found by bisection on eps with the left-to-right sweep, which is optimal
    on a line.
    """
    def covers(eps):
        x, used = lo, 0
        while x < hi - 1e-15:
            used += 1
            x += 2 * eps
        return used <= n_balls

    a, b = 0.0, hi - lo
    for _ in range(200):
        mid = 0.5 * (a + b)
        if covers(mid):
            b = mid
        else:
            a = mid
    return b
