"""Besov and Triebel-Lizorkin quasi-norms defined via differences.

The scale integral  int t^{-sq} (.)^q dt/t  is discretized on t_k = 2^-k with
weight ln 2 per step. Scales below the lattice spacing are dropped. The
``*_0inf`` variants stop at the first dyadic scale 2^K >= 2R (R the declared
support radius) and add the remaining tail in closed form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .grid import GridFunction, _as_exponent, lattice_lp, lp_norm
from .smoothness import ModulusTable, ball_means_stack

VARIANTS = ("inhomogeneous_01", "inhomogeneous_0inf", "homogeneous_0inf")
LN2 = math.log(2.0)


@dataclass(frozen=True)
class SmoothnessParams:
    s: float
    p: float
    q: float
    r: int
    family: str = "B"

    def __post_init__(self):
        object.__setattr__(self, "p", _as_exponent(self.p))
        object.__setattr__(self, "q", _as_exponent(self.q))
        if not self.s > 0:
            raise UsageError(f"smoothness s must be positive, got {self.s}")
        if int(self.r) != self.r or not self.r > self.s:
            raise UsageError(f"difference order r={self.r} must be an integer > s={self.s}")
        object.__setattr__(self, "r", int(self.r))
        if self.family not in ("B", "F"):
            raise UsageError(f"family must be 'B' or 'F', got {self.family!r}")
        if self.family == "F" and math.isinf(self.p):
            raise UsageError("Triebel-Lizorkin norms need p < infinity")

    @classmethod
    def default_r(cls, s, p, q, family="B"):
        """Parameters with the smallest admissible order r = floor(s) + 1."""
        return cls(s, p, q, int(math.floor(s)) + 1, family)

    def replace(self, **kw) -> SmoothnessParams:
        d = dict(s=self.s, p=self.p, q=self.q, r=self.r, family=self.family)
        d.update(kw)
        return SmoothnessParams(**d)

    def to_dict(self) -> dict:
        return {"s": self.s, "p": _jnum(self.p), "q": _jnum(self.q),
                "r": self.r, "family": self.family}


def _jnum(x):
    return "inf" if math.isinf(x) else x


@dataclass
class QuasiNormReport:
    """A quasi-norm value with its parts.

    ``scale_contributions`` holds (t_k, term_k) with term_k = 2^{ks} omega_r(f, t_k)_p
    for B and ||2^{ks} d^r_{t_k,p} f||_p for F.
    """

    total: float
    lp_part: float | None
    seminorm_part: float
    variant: str
    scale_contributions: list[tuple[float, float]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "variant": self.variant,
            "total": self.total,
            "lp_part": self.lp_part,
            "seminorm_part": self.seminorm_part,
            "scales": [{"t": t, "contribution": c} for t, c in self.scale_contributions],
        })


def scale_range(f: GridFunction, variant: str) -> tuple[int, int]:
    """Dyadic indices k (t_k = 2^-k) used by ``variant``, as (k_lo, k_hi)."""
    if variant not in VARIANTS:
        raise UsageError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    k_hi = f.level
    if variant == "inhomogeneous_01":
        return 0, k_hi
    # smallest K with 2^K >= 2R, but never below the lattice spacing
    K = math.ceil(math.log2(2.0 * f.support_radius) - 1e-12)
    K = max(K, -f.level)
    return -K, k_hi


def tail_weight(s: float, q: float) -> float:
    """Closed-form tail for scales coarser than the first computed one.

    With the integrand frozen beyond t_{k_lo}, sum_{k < k_lo} (2^{ks} c)^q ln 2
    equals (2^{k_lo s} c)^q times this weight.
    """
    if math.isinf(q):
        return 0.0
    x = 2.0 ** (-s * q)
    return LN2 * x / (1.0 - x)


def lq_aggregate(terms: np.ndarray, q: float, tail: np.ndarray | float = 0.0) -> np.ndarray:
    """(sum_k terms_k^q ln2 + tail * top^q)^(1/q) over axis 0; max if q = inf.

    ``tail`` multiplies the q-th power of the first row (the coarsest scale).
    Scaling by the max keeps huge q finite.
    """
    terms = np.asarray(terms, dtype=float)
    m = terms.max(axis=0)
    if math.isinf(q):
        return m
    safe = np.where(m > 0, m, 1.0)
    ratio = terms / safe
    s = LN2 * np.sum(ratio**q, axis=0) + tail * ratio[0] ** q
    return np.where(m > 0, safe * s ** (1.0 / q), 0.0)


def _check_family(params: SmoothnessParams, family: str):
    if params.family != family:
        raise UsageError(f"expected a {family}-family parameter set, got {params.family}")


def besov_norm(f: GridFunction, params: SmoothnessParams,
               variant: str = "inhomogeneous_01") -> QuasiNormReport:
    """||f|B^s_{p,q}|| from the modulus of smoothness on dyadic scales."""
    _check_family(params, "B")
    s, p, q, r = params.s, params.p, params.q, params.r
    k_lo, k_hi = scale_range(f, variant)
    table = ModulusTable(f, p, r, 2.0 ** (-k_lo))
    ks = np.arange(k_lo, k_hi + 1)
    a = np.array([2.0 ** (k * s) * table(2.0 ** (-k)) for k in ks])
    # omega is constant beyond t = 2R, so the tail is exact
    tail = 0.0 if variant == "inhomogeneous_01" else tail_weight(s, q)
    semi = float(lq_aggregate(a[:, None], q, tail=tail)[0]) if len(a) else 0.0
    return _report(f, p, semi, variant, ks, a)


def tl_norm(f: GridFunction, params: SmoothnessParams,
            variant: str = "inhomogeneous_01") -> QuasiNormReport:
    """||f|F^s_{p,q}|| from ball means aggregated pointwise over dyadic scales.

    For the ``*_0inf`` variants the ball means beyond the coarsest computed
    scale are frozen at their value there (closed-form tail).
    """
    _check_family(params, "F")
    s, p, q, r = params.s, params.p, params.q, params.r
    k_lo, k_hi = scale_range(f, variant)
    ks = np.arange(k_lo, k_hi + 1)
    stack, _ = ball_means_stack(f, [2.0 ** (-k) for k in ks], p, r)
    weights = 2.0 ** (ks * s)
    terms = stack * weights.reshape((-1,) + (1,) * f.dim)
    tail = 0.0 if variant == "inhomogeneous_01" else tail_weight(s, q)
    G = lq_aggregate(terms, q, tail=tail)
    w = f.delta ** f.dim
    semi = lattice_lp(G, p, w)
    contrib = np.array([lattice_lp(t, p, w) for t in terms])
    return _report(f, p, semi, variant, ks, contrib)


def _report(f, p, semi, variant, ks, contrib) -> QuasiNormReport:
    scales = [(2.0 ** (-int(k)), float(c)) for k, c in zip(ks, contrib)]
    if variant == "homogeneous_0inf":
        return QuasiNormReport(semi, None, semi, variant, scales)
    lp = lp_norm(f, p)
    total = lp + semi
    assert lp <= total
    return QuasiNormReport(total, lp, semi, variant, scales)


def quasi_norm(f: GridFunction, params: SmoothnessParams,
               variant: str = "inhomogeneous_01") -> QuasiNormReport:
    """Dispatch to besov_norm or tl_norm by ``params.family``."""
    if params.family == "B":
        return besov_norm(f, params, variant)
    return tl_norm(f, params, variant)


def embedding_margin(src: SmoothnessParams, dst: SmoothnessParams, n: int) -> float:
    """delta_+ = s1 - s2 - n (1/p1 - 1/p2)_+ for bounded-domain embeddings."""
    return src.s - dst.s - n * max(1.0 / src.p - 1.0 / dst.p, 0.0)


def embedding_probe(corpus, src: SmoothnessParams, dst: SmoothnessParams,
                    variant: str = "inhomogeneous_01") -> float:
    """Largest ratio ||f|dst|| / ||f|src|| over a corpus with common bounded support."""
    corpus = list(corpus)
    if not corpus:
        raise UsageError("empty corpus")
    n = corpus[0].dim
    margin = embedding_margin(src, dst, n)
    if not margin > 0:
        raise UsageError(f"no embedding: delta_+ = {margin} <= 0")
    radius = corpus[0].support_radius
    if any(g.support_radius != radius or g.dim != n for g in corpus):
        raise UsageError("corpus members must share dimension and support radius")
    best = 0.0
    for g in corpus:
        den = quasi_norm(g, src, variant).total
        if den == 0.0:
            continue
        best = max(best, quasi_norm(g, dst, variant).total / den)
    return best


def equivalence_probe(f: GridFunction, params: SmoothnessParams) -> tuple[float, float]:
    """(inhomogeneous total on (0,1), homogeneous quasi-norm on (0, inf))."""
    return (quasi_norm(f, params, "inhomogeneous_01").total,
            quasi_norm(f, params, "homogeneous_0inf").total)
