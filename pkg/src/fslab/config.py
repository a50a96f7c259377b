"""Experiment configuration: JSON parsing, validation and default tolerances.

Tolerances are experiment policy, not properties of the computations, so
they live here and can be overridden per config under ``"tolerances"``.
"""

from __future__ import annotations

import copy
import json
import math
import os

from .corpus import smooth_corpus, standard_corpus
from .errors import UsageError
from .grid import GridFunction, make_bump
from .norms import SmoothnessParams
from .seqspace import SeqSpaceParams

COMMANDS = ("norm", "homogeneity", "equivalence", "embed", "entropy", "multiplier", "identities")

DEFAULT_TOLERANCES = {
    "norm": {"relative": 1e-9},
    "homogeneity": {"slope": 0.10, "residual": 0.15},
    "equivalence": {"drift": 0.10, "sandwich_factor": 4.0},
    "identities": {"relative": 1e-12},
    "entropy": {"exact_rel": 0.0, "greedy_rel": 0.15, "slack": 2.0,
                "slope_interval": [-1.4, -0.6]},
    "multiplier": {"drift": 4.0, "derivative": 0.05},
    "embed": {"stability": 2.0},
}


class ConfigError(UsageError):
    """The experiment configuration is malformed or violates a precondition."""


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def tolerances(command: str, cfg: dict) -> dict:
    """Default tolerances for ``command`` updated by ``cfg["tolerances"]``."""
    tol = copy.deepcopy(DEFAULT_TOLERANCES[command])
    extra = cfg.get("tolerances", {})
    if not isinstance(extra, dict):
        raise ConfigError("tolerances must be an object")
    unknown = set(extra) - set(tol)
    if unknown:
        raise ConfigError(f"unknown tolerance keys for {command}: {sorted(unknown)}")
    tol.update(extra)
    return tol


def threads() -> int:
    """Worker cap from FSLAB_THREADS (default: CPU count)."""
    raw = os.environ.get("FSLAB_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"FSLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"FSLAB_THREADS must be a positive integer, got {raw!r}")
    return n


# ----------------------------------------------------------------- parsing

def exponent(v) -> float:
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity", "+inf", "∞"):
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a positive number or 'inf', got {v!r}")
    if not v > 0:
        raise ConfigError(f"exponent must be positive, got {v!r}")
    return float(v)


def jsonable_exponent(p: float):
    return "inf" if math.isinf(p) else p


def _get(d: dict, key: str, kind=None, default=...):
    if not isinstance(d, dict):
        raise ConfigError(f"expected an object around {key!r}")
    if key not in d:
        if default is ...:
            raise ConfigError(f"missing required field {key!r}")
        return default
    v = d[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ConfigError(f"field {key!r} must be an integer, got {v!r}")
    if kind is float and (isinstance(v, bool) or not isinstance(v, (int, float))):
        raise ConfigError(f"field {key!r} must be a number, got {v!r}")
    if kind is list and not isinstance(v, list):
        raise ConfigError(f"field {key!r} must be a list")
    return v


def smoothness_params(d: dict, family: str | None = None) -> SmoothnessParams:
    fam = _get(d, "family", default=family or "B")
    s = float(_get(d, "s", float))
    p, q = exponent(_get(d, "p")), exponent(_get(d, "q"))
    r = _get(d, "r", int, default=None)
    try:
        if r is None:
            return SmoothnessParams.default_r(s, p, q, fam)
        return SmoothnessParams(s, p, q, r, fam)
    except UsageError as exc:
        raise ConfigError(str(exc)) from None


def params_grid(spec) -> list[SmoothnessParams]:
    """A list of parameter objects, or {"s": [...], "p": [...], "q": [...], "family": F}."""
    if isinstance(spec, list):
        return [smoothness_params(d) for d in spec]
    if isinstance(spec, dict) and isinstance(spec.get("s"), list):
        fam = spec.get("family", "B")
        return [smoothness_params({"s": s, "p": p, "q": q, "family": fam})
                for s in _get(spec, "s", list)
                for p in _get(spec, "p", list)
                for q in _get(spec, "q", list)]
    return [smoothness_params(spec)]


def seq_params(d: dict) -> SeqSpaceParams:
    M = _get(d, "M", list)
    try:
        return SeqSpaceParams(
            s=float(_get(d, "s", float)), rho=float(_get(d, "rho", float, 0.0)),
            p=exponent(_get(d, "p")), q=exponent(_get(d, "q")),
            n=float(_get(d, "n", float, 1.0)), M=tuple(int(m) for m in M),
            B_max=_get(d, "B_max", int, 0), beta_dim=_get(d, "beta_dim", int, 1),
            c1=float(_get(d, "c1", float, 0.5)), c2=float(_get(d, "c2", float, 2.0)))
    except UsageError as exc:
        raise ConfigError(str(exc)) from None


def grid_function(d: dict, base_dir: str = ".") -> GridFunction:
    """{"file": path} or {"profile", "dim", "level", "extent", "radius", "degree"?}.

    ``profile`` may also be ``zero`` for the zero function.
    """
    if "file" in d:
        path = os.path.join(base_dir, str(d["file"]))
        try:
            with open(path, encoding="utf-8") as fh:
                return GridFunction.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read function file {path!r}: {exc.strerror}") from None
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad function file {path!r}: {exc}") from None
    profile = _get(d, "profile")
    dim, level = _get(d, "dim", int, 1), _get(d, "level", int)
    extent, radius = float(_get(d, "extent", float)), float(_get(d, "radius", float))
    try:
        if profile == "zero":
            return GridFunction.zeros(dim, level, extent, radius)
        return make_bump(dim, level, extent, radius, profile, _get(d, "degree", int, None))
    except UsageError as exc:
        raise ConfigError(str(exc)) from None


CORPORA = {"standard": standard_corpus, "smooth": smooth_corpus}


def corpus_spec(d: dict) -> dict:
    kind = _get(d, "kind", default="standard")
    if kind not in CORPORA:
        raise ConfigError(f"unknown corpus kind {kind!r}; expected one of {sorted(CORPORA)}")
    spec = {"kind": kind, "dim": _get(d, "dim", int, 1),
            "radius": float(_get(d, "radius", float)), "extent": float(_get(d, "extent", float))}
    if spec["dim"] not in (1, 2):
        raise ConfigError("corpus dim must be 1 or 2")
    if not 0 < spec["radius"] <= spec["extent"]:
        raise ConfigError("corpus radius must lie in (0, extent]")
    return spec


def build_corpus(spec: dict, level: int) -> list[GridFunction]:
    if spec["extent"] * 2.0**level != round(spec["extent"] * 2.0**level):
        raise ConfigError(f"extent {spec['extent']} is not a multiple of 2^-{level}")
    return CORPORA[spec["kind"]](spec["dim"], level, spec["extent"], spec["radius"])
