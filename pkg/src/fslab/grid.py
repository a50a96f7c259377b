"""Sampled, compactly supported functions on uniform dyadic lattices."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError

PROFILES = ("hat", "smooth_bump", "polynomial", "abs")


def _as_exponent(p):
    p = float(p)
    if not p > 0:
        raise UsageError(f"integrability exponent must be positive, got {p}")
    return p


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of f on the lattice delta*Z^n restricted to [-extent, extent]^n.

    ``values[i]`` is f at ``x = -extent + i*delta`` (per axis, row-major).
    Outside the window f is zero. ``support_radius`` is a declared R with
    ``f(x) = 0`` whenever ``|x| >= R``.
    """

    dim: int
    level: int
    extent: float
    values: np.ndarray
    support_radius: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise UsageError(f"dim must be 1 or 2, got {self.dim}")
        if int(self.level) != self.level or self.level < 0:
            raise UsageError(f"level must be a nonnegative integer, got {self.level}")
        if not self.extent > 0:
            raise UsageError("extent must be positive")
        ratio = self.extent / self.delta
        if abs(ratio - round(ratio)) > 1e-9:
            raise UsageError("extent must be an integer multiple of the lattice spacing")
        n = 2 * int(round(ratio)) + 1
        values = np.array(self.values, dtype=float)
        if values.shape != (n,) * self.dim:
            raise UsageError(f"values must have shape {(n,) * self.dim}, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise UsageError("values must be finite")
        if not self.support_radius > 0:
            raise UsageError("support_radius must be positive")
        if self.support_radius > self.extent * math.sqrt(self.dim) + self.delta:
            raise DomainError("support_radius exceeds the sampled window")
        outside = self.radius_sq() >= self.support_radius**2
        if np.any(values[outside] != 0):
            raise DomainError("nonzero samples at |x| >= support_radius")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "level", int(self.level))
        object.__setattr__(self, "extent", float(self.extent))
        object.__setattr__(self, "support_radius", float(self.support_radius))

    @property
    def delta(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def npts(self) -> int:
        """Number of samples per axis."""
        return 2 * int(round(self.extent / self.delta)) + 1

    def axis(self) -> np.ndarray:
        return -self.extent + self.delta * np.arange(self.npts)

    def coords(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.axis()] * self.dim), indexing="ij")

    def radius_sq(self) -> np.ndarray:
        return sum(c * c for c in self.coords())

    # arithmetic keeps the lattice; declared support is the union bound
    def _check_same_grid(self, other: GridFunction):
        if (self.dim, self.level, self.extent) != (other.dim, other.level, other.extent):
            raise UsageError("grid functions live on different lattices")

    def __add__(self, other: GridFunction) -> GridFunction:
        self._check_same_grid(other)
        return self.replace(self.values + other.values,
                            max(self.support_radius, other.support_radius))

    def __sub__(self, other: GridFunction) -> GridFunction:
        return self + (-1.0) * other

    def __mul__(self, c) -> GridFunction:
        if isinstance(c, GridFunction):
            raise TypeError("use fslab.multiplier.multiply for pointwise products")
        return self.replace(float(c) * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> GridFunction:
        return (-1.0) * self

    def replace(self, values=None, support_radius=None) -> GridFunction:
        return GridFunction(
            self.dim, self.level, self.extent,
            self.values if values is None else values,
            self.support_radius if support_radius is None else support_radius,
        )

    def with_support(self, radius: float) -> GridFunction:
        """Same samples with a different declared support radius."""
        return self.replace(support_radius=radius)

    def to_json(self) -> str:
        return json.dumps({
            "dim": self.dim,
            "level": self.level,
            "extent": self.extent,
            "support_radius": self.support_radius,
            "values": self.values.ravel().tolist(),
        })

    @classmethod
    def from_json(cls, text: str) -> GridFunction:
        d = json.loads(text)
        n = 2 * int(round(d["extent"] * 2.0 ** d["level"])) + 1
        values = np.asarray(d["values"], dtype=float).reshape((n,) * d["dim"])
        return cls(d["dim"], d["level"], d["extent"], values, d["support_radius"])

    @classmethod
    def zeros(cls, dim: int, level: int, extent: float, support_radius: float | None = None):
        n = 2 * int(round(extent * 2.0 ** level)) + 1
        return cls(dim, level, extent, np.zeros((n,) * dim),
                   extent if support_radius is None else support_radius)


def make_bump(dim: int, level: int, extent: float, radius: float, profile: str,
              degree: int | None = None) -> GridFunction:
    """Sample a closed-form profile truncated to the open ball B_radius.

    profile is one of ``hat`` (1 - |x|/radius), ``smooth_bump``
    (exp(-1/(1 - |x/radius|^2))), ``polynomial`` (x_1**degree) or ``abs``
    (|x_1| - radius).
    """
    if profile not in PROFILES:
        raise UsageError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    if not 0 < radius <= extent:
        raise DomainError(f"radius {radius} must lie in (0, extent={extent}]")
    g = GridFunction.zeros(dim, level, extent, radius)
    x1 = g.coords()[0]
    rr = g.radius_sq()
    inside = rr < radius * radius
    if profile == "hat":
        vals = 1.0 - np.sqrt(rr) / radius
    elif profile == "smooth_bump":
        u = np.where(inside, rr / radius**2, 0.0)
        vals = np.exp(-1.0 / (1.0 - u))
    elif profile == "polynomial":
        if degree is None or int(degree) != degree or degree < 0:
            raise UsageError("polynomial profile needs a nonnegative integer degree")
        vals = x1 ** int(degree)
    else:
        vals = np.abs(x1) - radius
    return g.replace(np.where(inside, vals, 0.0))


def lp_norm(f: GridFunction, p) -> float:
    """Riemann-sum L_p quasi-norm with weight delta**dim; p may be ``math.inf``."""
    p = _as_exponent(p)
    return lattice_lp(f.values, p, f.delta ** f.dim)


def lattice_lp(values: np.ndarray, p: float, weight: float) -> float:
    """(weight * sum |v|^p)^(1/p), rescaled by the max to avoid over/underflow."""
    a = np.abs(values)
    m = float(a.max()) if a.size else 0.0
    if m == 0.0:
        return 0.0
    if math.isinf(p):
        return m
    return m * (weight * float(np.sum((a / m) ** p))) ** (1.0 / p)
