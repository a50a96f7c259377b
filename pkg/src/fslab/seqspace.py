"""Truncated weighted sequence spaces b^{s,rho}_{p,q}(M_j) and entropy-number estimates.

Coefficients lambda^beta_{j,m} are stored as a flat vector ordered by beta
(multi-indices with |beta| <= B_max), then level j, then m = 1..M_j.

Entropy numbers are estimated by covering a finite cloud drawn from the
source unit ball: farthest-point seeding (a 2-approximate k-center), then a
minimax refinement of the centers and a bisected sweep cover, keeping the
smallest radius found. All steps only ever cover the cloud, so the estimate
is the covering radius of a finite sample, not a certified bound on e_k.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .dilation import FitResult, fit_loglog
from .errors import ResourceError, UsageError
from .grid import _as_exponent

MAX_COORDS = 60
MAX_WORK = 5e7  # cloud_size * number of centers


@dataclass(frozen=True)
class SeqSpaceParams:
    s: float
    rho: float
    p: float
    q: float
    n: float
    M: tuple[int, ...]
    B_max: int = 0
    beta_dim: int = 1
    c1: float = 0.5
    c2: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "p", _as_exponent(self.p))
        object.__setattr__(self, "q", _as_exponent(self.q))
        object.__setattr__(self, "M", tuple(int(m) for m in self.M))
        if not self.s > 0 or self.rho < 0 or not self.n > 0:
            raise UsageError("need s > 0, rho >= 0 and n > 0")
        if not self.M or min(self.M) < 1:
            raise UsageError("M must list at least one positive level size")
        if self.B_max < 0 or self.beta_dim < 1:
            raise UsageError("need B_max >= 0 and beta_dim >= 1")
        for j, m in enumerate(self.M):
            lo, hi = self.c1 * 2.0 ** (j * self.n), self.c2 * 2.0 ** (j * self.n)
            if not lo <= m <= hi:
                raise UsageError(f"M_{j} = {m} outside [{lo:g}, {hi:g}] (M_j ~ 2^(jn))")

    @property
    def J(self) -> int:
        return len(self.M)

    def betas(self) -> list[tuple[int, ...]]:
        out = [b for b in itertools.product(range(self.B_max + 1), repeat=self.beta_dim)
               if sum(b) <= self.B_max]
        return sorted(out, key=lambda b: (sum(b), b))

    @property
    def size(self) -> int:
        return len(self.betas()) * sum(self.M)

    def layout(self) -> tuple:
        return (self.M, self.B_max, self.beta_dim)

    def norm(self, X) -> np.ndarray:
        """Quasi-norm of each row of X (last axis = coefficients)."""
        X = np.abs(np.asarray(X, dtype=float))
        nb = len(self.betas())
        X = X.reshape(X.shape[:-1] + (nb, sum(self.M)))
        bounds = np.cumsum((0,) + self.M)
        p, q = self.p, self.q
        levels = []
        for j in range(self.J):
            blk = X[..., bounds[j]:bounds[j + 1]]
            lp = blk.max(axis=-1) if math.isinf(p) else np.sum(blk**p, axis=-1) ** (1.0 / p)
            levels.append(2.0 ** (j * (self.s - self.n / p)) * lp)
        L = np.stack(levels, axis=-1)
        per_beta = L.max(axis=-1) if math.isinf(q) else np.sum(L**q, axis=-1) ** (1.0 / q)
        wb = np.array([2.0 ** (self.rho * sum(b)) for b in self.betas()])
        return (wb * per_beta).max(axis=-1)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("s", "rho", "p", "q", "n", "B_max", "beta_dim", "c1", "c2")}
        d["M"] = list(self.M)
        for k in ("p", "q"):
            if math.isinf(d[k]):
                d[k] = "inf"
        return d


@dataclass(frozen=True, eq=False)
class SeqElement:
    params: SeqSpaceParams
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size != self.params.size:
            raise UsageError(f"expected {self.params.size} coefficients, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise UsageError("coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def index(self, beta, j: int, m: int) -> int:
        """Flat position of lambda^beta_{j,m}; m counts from 1."""
        P = self.params
        beta = tuple(beta) if np.ndim(beta) else (int(beta),) + (0,) * (P.beta_dim - 1)
        try:
            b = P.betas().index(beta)
        except ValueError:
            raise UsageError(f"beta {beta} not in the index set") from None
        if not (0 <= j < P.J and 1 <= m <= P.M[j]):
            raise UsageError(f"(j, m) = ({j}, {m}) not in the index set")
        return b * sum(P.M) + sum(P.M[:j]) + (m - 1)

    def get(self, beta, j, m) -> float:
        return float(self.coeffs[self.index(beta, j, m)])

    @classmethod
    def single(cls, params: SeqSpaceParams, beta, j, m, value=1.0) -> SeqElement:
        x = cls(params, np.zeros(params.size))
        c = np.zeros(params.size)
        c[x.index(beta, j, m)] = value
        return cls(params, c)

    def to_dict(self) -> dict:
        P = self.params
        out = {}
        for beta in P.betas():
            for j in range(P.J):
                for m in range(1, P.M[j] + 1):
                    out[(beta, j, m)] = self.get(beta, j, m)
        return out


def seq_norm(x: SeqElement, params: SeqSpaceParams) -> float:
    """||lambda | b^{s,rho}_{p,q}(M_j)||."""
    if x.params.layout() != params.layout():
        raise UsageError("element does not match the index set of params")
    return float(params.norm(x.coeffs))


def embedding_delta(src: SeqSpaceParams, dst: SeqSpaceParams) -> float:
    return src.s - dst.s - src.n * (1.0 / src.p - 1.0 / dst.p)


def check_embedding(src: SeqSpaceParams, dst: SeqSpaceParams):
    """Raise UsageError unless id: src -> dst is the compact embedding studied."""
    if src.layout() != dst.layout() or src.n != dst.n:
        raise UsageError("source and target must share the index set and n")
    if not src.rho > dst.rho >= 0:
        raise UsageError("need rho_1 > rho_2 >= 0")
    if not src.p <= dst.p:
        raise UsageError("need p_1 <= p_2")
    d = embedding_delta(src, dst)
    if not d > 0:
        raise UsageError(f"need delta = s1 - s2 - n(1/p1 - 1/p2) > 0, got {d}")


def embedding_map(x: SeqElement, src: SeqSpaceParams, dst: SeqSpaceParams) -> SeqElement:
    """The identity id: src -> dst (coefficients unchanged)."""
    check_embedding(src, dst)
    if x.params.layout() != src.layout():
        raise UsageError("element does not belong to the source space")
    return SeqElement(dst, x.coeffs)


# ---------------------------------------------------------------- covering

class Metric:
    """Distances induced by a sequence-space quasi-norm.

    With a single beta slice and p == q the quasi-norm is a weighted l_p
    norm, and distances reduce to Minkowski distances of rescaled points.
    """

    def __init__(self, P: SeqSpaceParams):
        self.norm = P.norm
        self.weights = None
        if len(P.betas()) == 1 and P.p == P.q:
            self.weights = np.concatenate(
                [np.full(m, 2.0 ** (j * (P.s - P.n / P.p))) for j, m in enumerate(P.M)])
            self.p = P.p

    def prepare(self, X: np.ndarray) -> np.ndarray:
        return X * self.weights if self.weights is not None else X

    def pairwise(self, A: np.ndarray, B: np.ndarray, chunk_elems=4_000_000) -> np.ndarray:
        """Distance matrix between rows of prepared arrays A and B."""
        if self.weights is not None:
            if math.isinf(self.p):
                return cdist(A, B, "chebyshev")
            if self.p >= 1:
                return cdist(A, B, "minkowski", p=self.p)
            return np.sum(np.abs(A[:, None, :] - B[None, :, :]) ** self.p, axis=-1) ** (1.0 / self.p)
        step = max(1, chunk_elems // max(1, len(B) * A.shape[1]))
        return np.vstack([self.norm(A[i:i + step, None, :] - B[None, :, :])
                          for i in range(0, len(A), step)])


def _min_dist(points, centers, metric: Metric, chunk_rows=4096):
    """Distance from each point to its nearest center, and that center's index."""
    best = np.empty(len(points))
    arg = np.empty(len(points), dtype=int)
    for i in range(0, len(points), chunk_rows):
        d = metric.pairwise(points[i:i + chunk_rows], centers)
        arg[i:i + chunk_rows] = np.argmin(d, axis=1)
        best[i:i + chunk_rows] = d[np.arange(len(d)), arg[i:i + chunk_rows]]
    return best, arg


def farthest_point_centers(points: np.ndarray, n_centers: int, metric: Metric,
                           start: int = 0) -> list[int]:
    """Gonzalez farthest-point traversal; prefixes are the greedy k-center solutions."""
    centers = [start]
    dist = metric.pairwise(points, points[start:start + 1])[:, 0]
    while len(centers) < min(n_centers, len(points)):
        nxt = int(np.argmax(dist))
        centers.append(nxt)
        dist = np.minimum(dist, metric.pairwise(points, points[nxt:nxt + 1])[:, 0])
    return centers


def covering_radius(points, centers, metric: Metric) -> float:
    return float(_min_dist(points, points[list(centers)], metric)[0].max())


def refine_centers(points, centers, metric: Metric, max_iter: int = 500):
    """Alternate nearest-center assignment and per-cluster minimax medoids.

    Iterates to a fixed point (or max_iter) and returns the best configuration
    seen, so the radius never exceeds the starting one.
    """
    centers = list(centers)
    best_c, best_r = centers, covering_radius(points, centers, metric)
    for _ in range(max_iter):
        _, arg = _min_dist(points, points[centers], metric)
        new = []
        for c in range(len(centers)):
            idx = np.flatnonzero(arg == c)
            if len(idx) == 0:
                new.append(centers[c])
                continue
            ecc = _eccentricity(points[idx], metric)
            new.append(int(idx[np.argmin(ecc)]))
        if new == centers:
            break
        centers = new
        r = covering_radius(points, centers, metric)
        if r < best_r:
            best_c, best_r = centers, r
    return best_c, best_r


def _eccentricity(sub, metric: Metric, chunk_rows=1024):
    """Max distance from every point of sub to the others."""
    return np.concatenate([metric.pairwise(sub[i:i + chunk_rows], sub).max(axis=1)
                           for i in range(0, len(sub), chunk_rows)])


def sweep_cover(dist: np.ndarray, eps: float, limit: int) -> list[int] | None:
    """Cover every point within eps using at most ``limit`` centers, or None.

    Repeatedly takes the uncovered point farthest from point 0 (the origin)
    and, among the centers covering it, the one covering most uncovered
    points. On a line this is the optimal left-to-right interval sweep.
    """
    key = dist[0].astype(float)
    unc = np.ones(len(dist), dtype=bool)
    centers = []
    while unc.any():
        if len(centers) == limit:
            return None
        u = int(np.argmax(np.where(unc, key, -1.0)))
        cand = np.flatnonzero(dist[u] <= eps)
        cover = np.count_nonzero(dist[np.ix_(cand, np.flatnonzero(unc))] <= eps, axis=1)
        c = int(cand[np.argmax(cover)])
        centers.append(c)
        unc &= dist[c] > eps
    return centers


def bisect_cover(dist: np.ndarray, hi: float, n_centers: int, iters: int = 14) -> float:
    """Smallest sweep-cover radius found by bisection on [hi/2, hi].

    ``hi`` should be a known achievable radius from a 2-approximate cover,
    so the optimum is at least hi/2.
    """
    lo, best = hi / 2.0, hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        cs = sweep_cover(dist, mid, n_centers)
        if cs is None:
            lo = mid
        else:
            hi = float(dist[:, cs].min(axis=1).max())
            best = min(best, hi)
    return best


SWEEP_MAX_POINTS = 8192


def cover_radii(points: np.ndarray, ks, metric: Metric, refine: bool = True) -> list[float]:
    """Covering radius of the (prepared) cloud by 2^(k-1) centers for each k.

    Starts from farthest-point traversal; with ``refine`` the radius is
    improved by minimax-medoid iterations and, for clouds up to
    SWEEP_MAX_POINTS, by a bisected sweep cover. A cover by 2^(k-1) balls is
    also one by 2^k, so the radii are made non-increasing by a running minimum.
    """
    ks = sorted(ks)
    order = farthest_point_centers(points, 2 ** (ks[-1] - 1), metric)
    dist = None
    if refine and len(points) <= SWEEP_MAX_POINTS:
        dist = metric.pairwise(points, points).astype(np.float32)
    radii = []
    for k in ks:
        cs = order[:2 ** (k - 1)]
        r = covering_radius(points, cs, metric)
        if refine and len(cs) > 1:
            r = min(r, refine_centers(points, cs, metric)[1])
            if dist is not None:
                r = min(r, bisect_cover(dist, r, len(cs)))
        radii.append(r)
    return list(np.minimum.accumulate(radii))


def unit_ball_cloud(src: SeqSpaceParams, cloud_size: int, seed: int) -> np.ndarray:
    """Points of the src unit ball, symmetric under x -> -x.

    Order: origin, signed coordinate extremes, random unit-sphere directions,
    random interior points with jitter-stratified radii. Exact duplicates
    (e.g. directions in one dimension) are dropped, so fewer than
    ``cloud_size`` points may be returned.
    """
    rng = np.random.default_rng(seed)
    D = src.size
    eye = np.eye(D) / src.norm(np.eye(D))[:, None]
    fixed = np.vstack([np.zeros((1, D)), eye, -eye])
    half = max(0, cloud_size - len(fixed)) // 2
    n_dir = half // 2
    n_int = half - n_dir
    g = rng.standard_normal((half, D))
    g /= src.norm(g)[:, None]
    u = (np.arange(n_int) + rng.random(n_int)) / max(n_int, 1)
    g[n_dir:] *= u[:, None] ** (1.0 / D)
    pts = np.vstack([fixed, np.stack([g, -g], axis=1).reshape(-1, D)])[:cloud_size]
    _, first = np.unique(pts, axis=0, return_index=True)
    return pts[np.sort(first)]


@dataclass(frozen=True)
class EntropyEstimate:
    k: int
    value: float
    method: str
    centers_used: int


def _is_1d(P: SeqSpaceParams) -> bool:
    return P.size == 1


def map_entropy_numbers(matrix, src: SeqSpaceParams, dst: SeqSpaceParams, ks,
                        cloud_size: int, seed: int, method: str | None = None) -> list[EntropyEstimate]:
    """Estimates of e_k(A: src -> dst) for a linear map given as a matrix."""
    A = np.atleast_2d(np.asarray(matrix, dtype=float))
    if A.shape != (dst.size, src.size):
        raise UsageError(f"matrix shape {A.shape} does not map {src.size} -> {dst.size} coords")
    ks = sorted(int(k) for k in ks)
    if ks[0] < 1:
        raise UsageError("k must be positive")
    if method is None:
        method = "exact_1d" if A.shape == (1, 1) else "greedy_cover"
    if method == "exact_1d":
        if A.shape != (1, 1):
            raise UsageError("exact_1d needs a one-dimensional source and target")
        w = abs(A[0, 0]) * float(dst.norm(np.ones(1)) / src.norm(np.ones(1)))
        return [EntropyEstimate(k, w * 2.0 ** (-(k - 1)), method, 2 ** (k - 1)) for k in ks]
    if method != "greedy_cover":
        raise UsageError(f"unknown method {method!r}")
    if max(src.size, dst.size) > MAX_COORDS:
        raise ResourceError(f"more than {MAX_COORDS} coordinates")
    if cloud_size < 2 ** (ks[-1] - 1):
        raise UsageError(f"cloud_size {cloud_size} < 2^(k-1) = {2 ** (ks[-1] - 1)} centers")
    if cloud_size * 2 ** (ks[-1] - 1) > MAX_WORK:
        raise ResourceError("cloud too large for the requested number of centers")
    metric = Metric(dst)
    image = metric.prepare(unit_ball_cloud(src, cloud_size, seed) @ A.T)
    radii = cover_radii(image, ks, metric)
    return [EntropyEstimate(k, float(r), method, 2 ** (k - 1)) for k, r in zip(ks, radii)]


def entropy_curve(src, dst, ks, cloud_size, seed, method=None) -> list[EntropyEstimate]:
    """Estimates of e_k(id: src -> dst) for several k from one shared cloud."""
    check_embedding(src, dst)
    return map_entropy_numbers(np.eye(src.size), src, dst, ks, cloud_size, seed, method)


def entropy_estimate(src, dst, k: int, cloud_size: int, seed: int, method=None) -> EntropyEstimate:
    return entropy_curve(src, dst, [k], cloud_size, seed, method)[0]


def predicted_entropy_slope(src: SeqSpaceParams, dst: SeqSpaceParams) -> float:
    """Exponent of k in e_k(id) ~ k^(-delta/n + 1/p2 - 1/p1)."""
    return -embedding_delta(src, dst) / src.n + 1.0 / dst.p - 1.0 / src.p


def entropy_rate_fit(src, dst, k_range, cloud_size, seed) -> FitResult:
    """Fit log e_k against log k; compare the slope to predicted_entropy_slope."""
    ks = list(k_range)
    if len(ks) < 4 or ks != sorted(set(ks)):
        raise UsageError("k_range must hold at least four ascending values")
    if src.J == 1:
        raise UsageError("single-level spaces have geometric, not polynomial, entropy decay")
    est = entropy_curve(src, dst, ks, cloud_size, seed)
    fit = fit_loglog(ks, [e.value for e in est], predicted_entropy_slope(src, dst))
    fit.extras = {"estimates": [e.value for e in est]}
    return fit


def entropy_csv(estimates) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["k", "e_k"])
    for e in estimates:
        wr.writerow([e.k, repr(e.value)])
    return buf.getvalue()


def entropy_manifest(src, dst, k_range, cloud_size, seed, fit: FitResult) -> str:
    return json.dumps({
        "src": src.to_dict(), "dst": dst.to_dict(), "k_range": list(k_range),
        "cloud_size": cloud_size, "seed": seed,
        "slope": fit.slope, "predicted_slope": fit.predicted_slope,
    })


# ------------------------------------------------------ entropy calculus

@dataclass
class CalculusReport:
    checks: list[dict] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(c["holds"] for c in self.checks)


def entropy_calculus_check(S, T, R, X: SeqSpaceParams, Y: SeqSpaceParams, Z: SeqSpaceParams,
                           pairs, cloud_size: int = 2048, seed: int = 0,
                           slack: float = 2.0, method=None) -> CalculusReport:
    """Check additivity and multiplicativity of estimated entropy numbers.

    S, T map X -> Y and R maps Y -> Z (matrices). For each (j, k):
      e_{j+k-1}(S+T) <= slack * (e_j(S)^u + e_k(T)^u)^(1/u), u = min(1, p_Y, q_Y)
      e_{j+k-1}(RT)  <= slack * e_j(R) e_k(T)
    """
    S, T, R = (np.atleast_2d(np.asarray(a, dtype=float)) for a in (S, T, R))
    pairs = [(int(j), int(k)) for j, k in pairs]
    kmax = max(j + k - 1 for j, k in pairs)
    ks = list(range(1, kmax + 1))

    def est(A, a, b):
        return {e.k: e.value for e in map_entropy_numbers(A, a, b, ks, cloud_size, seed, method)}

    eS, eT, eR = est(S, X, Y), est(T, X, Y), est(R, Y, Z)
    eST, eRT = est(S + T, X, Y), est(R @ T, X, Z)
    u = min(1.0, Y.p, Y.q)
    rep = CalculusReport()
    for j, k in pairs:
        lhs = eST[j + k - 1]
        rhs = (eS[j] ** u + eT[k] ** u) ** (1.0 / u)
        rep.checks.append({"name": "additivity", "j": j, "k": k, "lhs": lhs, "rhs": rhs,
                           "holds": bool(lhs <= slack * rhs + 1e-15)})
        lhs = eRT[j + k - 1]
        rhs = eR[j] * eT[k]
        rep.checks.append({"name": "multiplicativity", "j": j, "k": k, "lhs": lhs, "rhs": rhs,
                           "holds": bool(lhs <= slack * rhs + 1e-15)})
    return rep
