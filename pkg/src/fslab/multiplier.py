"""Pointwise multiplication by dilated smooth bumps and the lambda-uniform bound."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .corpus import standard_corpus
from .dilation import dilate
from .errors import DomainError, ResolutionError, UsageError
from .grid import GridFunction
from .norms import SmoothnessParams, quasi_norm
from .smoothness import binomial_weights

PROFILES = ("plateau", "cutoff")
# plateau: phi = psi(x/lam), equal to 1 on B_lam (so phi f = f for supp f in B_lam)
# cutoff:  phi = psi(2x/lam), equal to 1 on B_{lam/2} and cutting f off inside B_lam
_PROFILE_SCALE = {"plateau": 1.0, "cutoff": 2.0}


def _g(t):
    t = np.asarray(t, dtype=float)
    pos = t > 0
    return np.where(pos, np.exp(-1.0 / np.where(pos, t, 1.0)), 0.0)


def mother_bump(u) -> np.ndarray:
    """Radial plateau bump psi(|x|): 1 for |x| <= 1, 0 for |x| >= 2, C-infinity between."""
    u = np.abs(np.asarray(u, dtype=float))
    a, b = _g(2.0 - u), _g(u - 1.0)
    return a / (a + b)


@lru_cache(maxsize=None)
def _mother_derivative_max(j: int, level: int = 12) -> float:
    """sup |psi^(j)| along a ray, estimated by j-th differences at spacing 2^-level."""
    if j == 0:
        return 1.0
    d = 2.0 ** (-level)
    x = np.arange(-3.0, 3.0 + d / 2, d)
    v = mother_bump(x)
    acc = np.zeros(len(x) - j)
    for i, c in enumerate(binomial_weights(j)):
        acc += c * v[i:len(x) - j + i]
    return float(np.abs(acc).max() / d**j)


def derivative_constant(order: int, profile: str = "plateau") -> float:
    """Smallest a with |D^j phi| <= a lam^-j for j <= order, from psi alone."""
    c = _PROFILE_SCALE[profile]
    return 1.01 * max(c**j * _mother_derivative_max(j) for j in range(order + 1))


@dataclass(frozen=True)
class MultiplierSpec:
    """phi(x) = psi(c x / lam) with derivative bounds a lam^-j up to ``order``."""

    lam: float
    order: int
    a: float | None = None
    profile: str = "plateau"

    def __post_init__(self):
        if not 0 < self.lam <= 1:
            raise UsageError(f"lambda must lie in (0, 1], got {self.lam}")
        m = -math.log2(self.lam)
        if abs(m - round(m)) > 1e-12:
            raise UsageError(f"lambda must be dyadic 2^-m, got {self.lam}")
        if self.profile not in PROFILES:
            raise UsageError(f"unknown multiplier profile {self.profile!r}")
        if int(self.order) != self.order or self.order < 0:
            raise UsageError("order must be a nonnegative integer")
        if self.a is None:
            object.__setattr__(self, "a", derivative_constant(int(self.order), self.profile))

    @classmethod
    def for_params(cls, lam: float, params: SmoothnessParams, profile: str = "plateau"):
        return cls(lam, 1 + int(math.floor(params.s)), None, profile)

    @property
    def m(self) -> int:
        return int(round(-math.log2(self.lam)))

    @property
    def support(self) -> float:
        return 2.0 * self.lam / _PROFILE_SCALE[self.profile]


def make_multiplier(spec: MultiplierSpec, level: int, extent: float, dim: int = 1) -> GridFunction:
    """Samples of phi on the lattice of spacing 2^-level over [-extent, extent]^dim."""
    delta = 2.0 ** (-level)
    if spec.support / _PROFILE_SCALE[spec.profile] < 4 * delta:
        raise ResolutionError(f"level {level} does not resolve lambda = {spec.lam}")
    g = GridFunction.zeros(dim, level, extent)
    vals = mother_bump(np.sqrt(g.radius_sq()) * _PROFILE_SCALE[spec.profile] / spec.lam)
    return GridFunction(dim, level, extent, vals, min(spec.support, extent * math.sqrt(dim) + delta))


def derivative_bound_check(phi: GridFunction, spec: MultiplierSpec, tol: float = 0.05):
    """Worst ratio max|Delta^j phi| / (delta^j a lam^-j) over axes and j <= order.

    Returns ``(ratio, ok)`` with ok meaning ratio <= 1 + tol. The j-th divided
    difference equals a j-th derivative at an intermediate point, so a valid
    bound on the derivatives bounds it too.
    """
    worst = 0.0
    v = phi.values
    for j in range(1, spec.order + 1):
        coeffs = binomial_weights(j)
        for axis in range(phi.dim):
            n = v.shape[axis]
            acc = np.zeros_like(np.take(v, np.arange(n - j), axis=axis))
            for i, c in enumerate(coeffs):
                acc += c * np.take(v, np.arange(i, n - j + i), axis=axis)
            bound = spec.a * spec.lam ** (-j) * phi.delta**j
            worst = max(worst, float(np.abs(acc).max()) / bound)
    return worst, worst <= 1.0 + tol


def multiply(f: GridFunction, phi: GridFunction) -> GridFunction:
    """Pointwise product on a common lattice; support radius is the smaller one."""
    f._check_same_grid(phi)
    return GridFunction(f.dim, f.level, f.extent, f.values * phi.values,
                        min(f.support_radius, phi.support_radius))


def check_f_restriction(params: SmoothnessParams, n: int) -> float:
    """Margin s - n (1/min(p,q) - 1/p) that F-family multiplier bounds need to be positive."""
    return params.s - n * (1.0 / min(params.p, params.q) - 1.0 / params.p)


def multiplier_bound_experiment(corpus, spec: MultiplierSpec, params: SmoothnessParams,
                                variant: str = "inhomogeneous_01",
                                allow_restriction_violation: bool = False) -> float:
    """max over nonzero f of ||phi f|| / ||f|| for a corpus supported in B_lam."""
    corpus = list(corpus)
    if not corpus:
        raise UsageError("empty corpus")
    n = corpus[0].dim
    if params.family == "F" and not allow_restriction_violation:
        margin = check_f_restriction(params, n)
        if not margin > 0:
            raise UsageError(
                f"F-family multiplier bound needs s > n(1/min(p,q) - 1/p); margin is {margin}. "
                "Pass allow_restriction_violation=True to explore anyway.")
    for f in corpus:
        if f.support_radius > spec.lam * (1 + 1e-12):
            raise DomainError(f"corpus member has support radius {f.support_radius} > lambda")
    phi = make_multiplier(spec, corpus[0].level, corpus[0].extent, n)
    best = 0.0
    for f in corpus:
        den = quasi_norm(f, params, variant).total
        if den == 0.0:
            continue
        best = max(best, quasi_norm(multiply(f, phi), params, variant).total / den)
    return best


@dataclass
class LambdaSweep:
    lambdas: list[float]
    max_ratios: list[float]

    @property
    def drift(self) -> float:
        """Largest pairwise quotient of the max ratios."""
        r = [x for x in self.max_ratios if x > 0]
        return max(r) / min(r) if r else math.inf

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["lambda", "max_ratio"])
        for lam, r in zip(self.lambdas, self.max_ratios):
            wr.writerow([repr(float(lam)), repr(float(r))])
        return buf.getvalue()


def multiplier_sweep(params: SmoothnessParams, m_max: int = 3, base_level: int = 6,
                     profile: str = "cutoff", dim: int = 1, corpus_fn=standard_corpus,
                     variant: str = "inhomogeneous_01") -> LambdaSweep:
    """Max multiplier ratios for lambda = 1, 1/2, ..., 2^-m_max.

    The corpus for lambda = 2^-j is one fixed fine-grid corpus on B_{2^-m_max}
    dilated exactly by 2^(m_max - j), so every lambda sees the same samples.
    """
    top = base_level + m_max
    mother = corpus_fn(dim, top, 2.0 ** (1 - m_max), 2.0 ** (-m_max))
    lams, ratios = [], []
    for j in range(m_max + 1):
        lam = 2.0 ** (-j)
        corpus = [dilate(f, m_max - j) for f in mother]
        spec = MultiplierSpec.for_params(lam, params, profile)
        lams.append(lam)
        ratios.append(multiplier_bound_experiment(corpus, spec, params, variant))
    return LambdaSweep(lams, ratios)
