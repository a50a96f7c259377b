"""Configured experiments: validate a JSON config, then run it.

``prepare(command, cfg, seed)`` checks every precondition it can before any
heavy computation and returns a zero-argument callable producing an
``Outcome``. Reports carry the inputs, the results and a list of assertions
against the declared tolerances.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import config as C
from .config import ConfigError
from .dilation import homogeneity_experiment, scale_commutation_check
from .errors import UsageError
from .grid import GridFunction, make_bump
from .multiplier import (MultiplierSpec, check_f_restriction, derivative_bound_check,
                         make_multiplier, multiplier_sweep)
from .norms import (VARIANTS, SmoothnessParams, besov_norm, embedding_margin, embedding_probe,
                    equivalence_probe, quasi_norm, tl_norm)
from .seqspace import (SeqElement, SeqSpaceParams, check_embedding, entropy_calculus_check,
                       entropy_manifest, entropy_rate_fit, map_entropy_numbers, seq_norm)
from .smoothness import modulus


@dataclass
class Outcome:
    report: dict
    files: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.report["passed"]


def pmap(fn, items):
    """Ordered map over at most FSLAB_THREADS worker threads."""
    items = list(items)
    n = min(C.threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _num(x):
    """JSON-safe float (infinities as strings)."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def _assertion(name, passed, measured=None, tolerance=None, **extra):
    out = {"name": name, "passed": bool(passed)}
    if measured is not None:
        out["measured"] = _num(measured) if not isinstance(measured, (list, dict)) else measured
    if tolerance is not None:
        out["tolerance"] = tolerance
    out.update(extra)
    return out


def _report(command, cfg, seed, results, assertions):
    return {
        "command": command,
        "seed": seed,
        "inputs": cfg,
        "results": results,
        "assertions": assertions,
        "passed": all(a["passed"] for a in assertions),
    }


def _variant(cfg, default="inhomogeneous_01"):
    v = cfg.get("variant", default)
    if v not in VARIANTS:
        raise ConfigError(f"unknown variant {v!r}; expected one of {list(VARIANTS)}")
    return v


# ------------------------------------------------------------------- norm

def _prepare_norm(cfg, seed, base_dir):
    tol = C.tolerances("norm", cfg)
    f = C.grid_function(C._get(cfg, "function"), base_dir)
    params = C.smoothness_params(C._get(cfg, "params"))
    variant = _variant(cfg)
    expected = C._get(cfg, "expected_total", float, None)

    def run():
        rep = quasi_norm(f, params, variant)
        checks = [_assertion("total is finite", math.isfinite(rep.total), rep.total)]
        if rep.lp_part is not None:
            checks.append(_assertion("lp_part <= total", rep.lp_part <= rep.total))
        if expected is not None:
            err = abs(rep.total - expected) / max(1.0, abs(expected))
            checks.append(_assertion("total matches expected_total", err <= tol["relative"],
                                     err, tol["relative"]))
        results = json.loads(rep.to_json())
        results["params"] = params.to_dict()
        csv_out = csv_text(["t", "contribution"], rep.scale_contributions)
        return Outcome(_report("norm", cfg, seed, results, checks), {"scales.csv": csv_out})
    return run


# ------------------------------------------------------------ homogeneity

def _prepare_homogeneity(cfg, seed, base_dir):
    tol = C.tolerances("homogeneity", cfg)
    mother = C.grid_function(C._get(cfg, "mother"), base_dir)
    M = C._get(cfg, "M", int, 4)
    grid = C.params_grid(C._get(cfg, "grid"))
    if M < 3:
        raise ConfigError("M must be at least 3")
    if mother.level < M:
        raise ConfigError(f"mother level {mother.level} < M = {M}")
    if mother.support_radius > 2.0 ** (-M):
        raise ConfigError(f"mother support radius must be <= 2^-{M}")

    def run():
        fits = pmap(lambda P: homogeneity_experiment(mother, P, M), grid)
        rows, checks, files, results = [], [], {}, []
        for i, (P, fit) in enumerate(zip(grid, fits)):
            err = abs(fit.slope - fit.predicted_slope)
            tag = f"{P.family}(s={P.s}, p={C.jsonable_exponent(P.p)}, q={C.jsonable_exponent(P.q)})"
            checks.append(_assertion(f"slope {tag}", err <= tol["slope"], err, tol["slope"]))
            checks.append(_assertion(f"residual {tag}", fit.max_residual <= tol["residual"],
                                     fit.max_residual, tol["residual"]))
            rows.append([P.family, P.s, C.jsonable_exponent(P.p), C.jsonable_exponent(P.q), P.r,
                         fit.slope, fit.predicted_slope, fit.max_residual])
            files[f"fit_{i:02d}.csv"] = fit.to_csv()
            res = json.loads(fit.to_json())
            res["params"] = P.to_dict()
            results.append(res)
        files["slopes.csv"] = csv_text(
            ["family", "s", "p", "q", "r", "slope", "predicted_slope", "max_residual"], rows)
        return Outcome(_report("homogeneity", cfg, seed, {"fits": results}, checks), files)
    return run


# ------------------------------------------------------------ equivalence

EQUIVALENCE_MODES = ("variants", "r_orders", "sandwich")


def _bracket(ratios):
    return max(max(r, 1.0 / r) for r in ratios if r > 0)


def _prepare_equivalence(cfg, seed, base_dir):
    tol = C.tolerances("equivalence", cfg)
    mode = C._get(cfg, "mode", default="variants")
    if mode not in EQUIVALENCE_MODES:
        raise ConfigError(f"unknown equivalence mode {mode!r}; expected one of {EQUIVALENCE_MODES}")
    spec = C.corpus_spec(C._get(cfg, "corpus"))
    levels = [int(v) for v in C._get(cfg, "levels", list)]
    if not levels:
        raise ConfigError("levels must not be empty")
    grid = C.params_grid(C._get(cfg, "params"))
    if mode == "sandwich" and any(math.isinf(P.p) for P in grid):
        raise ConfigError("the sandwich needs p < infinity")
    for L in levels:
        C.build_corpus(spec, L)  # validates lattice compatibility

    def stats(P, f):
        if mode == "variants":
            a, b = equivalence_probe(f, P)
            return [a / b] if b > 0 else []
        if mode == "r_orders":
            a = quasi_norm(f, P).total
            b = quasi_norm(f, P.replace(r=P.r + 1)).total
            return [a / b] if b > 0 else []
        Fp = SmoothnessParams(P.s, P.p, P.q, P.r, "F")
        F = tl_norm(f, Fp).total
        lo = besov_norm(f, SmoothnessParams(P.s, P.p, min(P.p, P.q), P.r)).total
        hi = besov_norm(f, SmoothnessParams(P.s, P.p, max(P.p, P.q), P.r)).total
        # F should lie in [hi, lo]; report the factor by which it leaves it
        return [F / lo, hi / F] if F > 0 else []

    def run():
        rows, checks, results = [], [], []
        for i, P in enumerate(grid):
            per_level = []
            for L in levels:
                corpus = C.build_corpus(spec, L)
                vals = pmap(lambda f: stats(P, f), corpus)
                for j, v in enumerate(vals):
                    for k, x in enumerate(v):
                        rows.append([i, L, j, k, x])
                flat = [x for v in vals for x in v]
                if mode == "sandwich":
                    per_level.append(max([1.0] + flat))
                else:
                    per_level.append(_bracket(flat))
            res = {"params": P.to_dict(), "levels": levels, "brackets": per_level}
            tag = f"{mode} {P.family}(s={P.s}, p={C.jsonable_exponent(P.p)}, q={C.jsonable_exponent(P.q)}, r={P.r})"
            if mode == "sandwich":
                worst = max(per_level)
                checks.append(_assertion(f"sandwich factor {tag}", worst <= tol["sandwich_factor"],
                                         worst, tol["sandwich_factor"]))
            else:
                ref = per_level[0]
                drift = max(b / ref for b in per_level) - 1.0
                res["recorded_C"] = ref
                checks.append(_assertion(f"bracket drift {tag}", drift <= tol["drift"],
                                         drift, tol["drift"], recorded_C=ref))
            results.append(res)
        files = {"equivalence.csv": csv_text(["params_index", "level", "function", "statistic", "value"], rows)}
        return Outcome(_report("equivalence", cfg, seed, {"mode": mode, "params": results}, checks), files)
    return run


# ------------------------------------------------------------------ embed

def _prepare_embed(cfg, seed, base_dir):
    tol = C.tolerances("embed", cfg)
    spec = C.corpus_spec(C._get(cfg, "corpus"))
    levels = [int(v) for v in C._get(cfg, "levels", list)]
    variant = _variant(cfg)
    pairs = []
    for d in C._get(cfg, "pairs", list):
        src, dst = C.smoothness_params(C._get(d, "src")), C.smoothness_params(C._get(d, "dst"))
        margin = embedding_margin(src, dst, spec["dim"])
        if not margin > 0:
            raise ConfigError(f"no embedding for src {src.to_dict()} -> dst {dst.to_dict()}: "
                              f"delta_+ = {margin} <= 0")
        pairs.append((src, dst))
    refuse = []
    for d in C._get(cfg, "refuse", list, []):
        src, dst = C.smoothness_params(C._get(d, "src")), C.smoothness_params(C._get(d, "dst"))
        if embedding_margin(src, dst, spec["dim"]) > 0:
            raise ConfigError("a 'refuse' pair has delta_+ > 0")
        refuse.append((src, dst))
    for L in levels:
        C.build_corpus(spec, L)

    def run():
        rows, checks, results = [], [], []
        for i, (src, dst) in enumerate(pairs):
            ratios = [embedding_probe(C.build_corpus(spec, L), src, dst, variant) for L in levels]
            rows += [[i, L, r] for L, r in zip(levels, ratios)]
            finite = all(math.isfinite(r) and r > 0 for r in ratios)
            spread = max(ratios) / min(ratios) if finite else math.inf
            tag = f"pair {i}"
            checks.append(_assertion(f"{tag} ratio finite", finite))
            checks.append(_assertion(f"{tag} stable across levels", spread <= tol["stability"],
                                     spread, tol["stability"]))
            results.append({"src": src.to_dict(), "dst": dst.to_dict(), "levels": levels,
                            "max_ratios": ratios,
                            "delta_plus": embedding_margin(src, dst, spec["dim"])})
        small = C.build_corpus(spec, min(levels)) if refuse else []
        for src, dst in refuse:
            try:
                embedding_probe(small, src, dst, variant)
                refused = False
            except UsageError:
                refused = True
            checks.append(_assertion(f"refuses {src.to_dict()} -> {dst.to_dict()}", refused))
        files = {"embed.csv": csv_text(["pair", "level", "max_ratio"], rows)}
        return Outcome(_report("embed", cfg, seed, {"pairs": results}, checks), files)
    return run


# ---------------------------------------------------------------- entropy

ENTROPY_MODES = ("rate", "exact_law", "calculus")


def _monotone(values) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


def _seeds(cfg, seed):
    if seed is not None:
        return [seed]
    s = C._get(cfg, "seeds", list, None)
    if s is None:
        return [C._get(cfg, "seed", int, 0)]
    return [int(v) for v in s]


def _prepare_entropy(cfg, seed, base_dir):
    tol = C.tolerances("entropy", cfg)
    mode = C._get(cfg, "mode", default="rate")
    if mode not in ENTROPY_MODES:
        raise ConfigError(f"unknown entropy mode {mode!r}; expected one of {ENTROPY_MODES}")
    if mode == "calculus":
        return _prepare_calculus(cfg, seed, tol)
    src, dst = C.seq_params(C._get(cfg, "src")), C.seq_params(C._get(cfg, "dst"))
    cloud = C._get(cfg, "cloud_size", int)
    seeds = _seeds(cfg, seed)
    if mode == "rate":
        ks = [int(k) for k in C._get(cfg, "k_range", list)]
        check_embedding(src, dst)
        if len(ks) < 4 or ks != sorted(set(ks)) or src.J == 1:
            raise ConfigError("k_range needs >= 4 ascending values and J >= 2")
        if cloud < 2 ** (ks[-1] - 1):
            raise ConfigError("cloud_size smaller than the number of centers")
        lo, hi = tol["slope_interval"]

        def run():
            checks, files, results = [], {}, []
            fits = pmap(lambda s: entropy_rate_fit(src, dst, ks, cloud, s), seeds)
            for s, fit in zip(seeds, fits):
                vals = fit.extras["estimates"]
                files[f"entropy_seed{s}.csv"] = csv_text(["k", "e_k"], zip(ks, vals))
                files[f"manifest_seed{s}.json"] = entropy_manifest(src, dst, ks, cloud, s, fit)
                checks.append(_assertion(f"seed {s} non-increasing in k", _monotone(vals)))
                checks.append(_assertion(f"seed {s} slope in interval", lo <= fit.slope <= hi,
                                         fit.slope, [lo, hi]))
                results.append({"seed": s, "slope": fit.slope, "predicted_slope": fit.predicted_slope,
                                "max_residual": fit.max_residual, "estimates": vals})
            return Outcome(_report("entropy", cfg, seed, {"mode": mode, "runs": results}, checks), files)
        return run

    # exact 1-d law
    if src.size != 1 or dst.size != 1:
        raise ConfigError("exact_law needs one-coordinate spaces (J=1, M=[1], B_max=0)")
    ks = [int(k) for k in C._get(cfg, "k_range", list)]
    scale = float(C._get(cfg, "scale", float, 1.0))
    if cloud < 512:
        raise ConfigError("exact_law compares against greedy_cover with cloud_size >= 512")
    e = SeqElement.single(src, (0,), 0, 1)
    w = abs(scale) * seq_norm(SeqElement(dst, e.coeffs), dst) / seq_norm(e, src)

    def run():
        checks, files, results = [], {}, []
        exact = map_entropy_numbers([[scale]], src, dst, ks, cloud, 0, "exact_1d")
        law = [w * 2.0 ** (-(k - 1)) for k in ks]
        err = max(abs(a.value - b) / b for a, b in zip(exact, law))
        checks.append(_assertion("exact_1d equals w 2^-(k-1)", err <= tol["exact_rel"],
                                 err, tol["exact_rel"]))
        rows = []
        for s in seeds:
            greedy = map_entropy_numbers([[scale]], src, dst, ks, cloud, s, "greedy_cover")
            g = [x.value for x in greedy]
            rel = max(abs(a / b - 1.0) for a, b in zip(g, law))
            checks.append(_assertion(f"seed {s} greedy within tolerance", rel <= tol["greedy_rel"],
                                     rel, tol["greedy_rel"]))
            checks.append(_assertion(f"seed {s} greedy non-increasing", _monotone(g)))
            rows += [[s, k, a, b] for k, a, b in zip(ks, g, law)]
            results.append({"seed": s, "greedy": g})
        files["exact_law.csv"] = csv_text(["seed", "k", "greedy", "exact"], rows)
        return Outcome(_report("entropy", cfg, seed, {"mode": mode, "w": w, "exact": law,
                                                      "runs": results}, checks), files)
    return run


def calculus_instances():
    """Tiny maps for the additivity and multiplicativity checks."""
    one = dict(s=1.0, rho=0.0, p=2.0, q=2.0, n=1.0, M=(1,))
    two = dict(s=1.0, rho=0.0, n=1.0, M=(1, 1))
    X1 = SeqSpaceParams(**one)
    X2 = SeqSpaceParams(p=2.0, q=2.0, **two)
    Y2 = SeqSpaceParams(p=1.0, q=1.0, **two)
    Z2 = SeqSpaceParams(p=math.inf, q=math.inf, **two)
    pairs = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 2)]
    return [
        ("zero_plus_T", np.zeros((2, 2)), np.diag([1.0, 0.5]), np.eye(2), X2, X2, X2,
         [(1, k) for k in range(1, 5)], None),
        ("scaling_1d", [[0.5]], [[1.0]], [[3.0]], X1, X1, X1, pairs, "exact_1d"),
        ("diagonal_2d", np.diag([1.0, 0.3]), np.diag([0.5, 0.8]), np.diag([2.0, 1.0]),
         X2, Y2, Z2, pairs, None),
        ("mixed_2d", np.array([[1.0, 0.5], [0.0, 1.0]]), np.diag([0.7, 0.4]),
         np.array([[1.0, 0.0], [0.3, 1.0]]), X2, X2, Y2, pairs, None),
    ]


def _prepare_calculus(cfg, seed, tol):
    cloud = C._get(cfg, "cloud_size", int, 2048)
    seeds = _seeds(cfg, seed)

    def run():
        checks, rows = [], []
        for s in seeds:
            for name, S, T, R, X, Y, Z, pairs, method in calculus_instances():
                rep = entropy_calculus_check(S, T, R, X, Y, Z, pairs, cloud, s, tol["slack"], method)
                for c in rep.checks:
                    rows.append([s, name, c["name"], c["j"], c["k"], c["lhs"], c["rhs"], c["holds"]])
                checks.append(_assertion(f"seed {s} {name} inequalities", rep.all_hold))
                est = map_entropy_numbers(T, X, Y, range(1, 6), cloud, s, method)
                checks.append(_assertion(f"seed {s} {name} e_k non-increasing",
                                         _monotone([e.value for e in est])))
        files = {"calculus.csv": csv_text(["seed", "instance", "check", "j", "k", "lhs", "rhs", "holds"], rows)}
        return Outcome(_report("entropy", cfg, seed, {"mode": "calculus", "slack": tol["slack"]}, checks), files)
    return run


# ------------------------------------------------------------- multiplier

def _prepare_multiplier(cfg, seed, base_dir):
    tol = C.tolerances("multiplier", cfg)
    grid = C.params_grid(C._get(cfg, "params"))
    m_max = C._get(cfg, "m_max", int, 3)
    base_level = C._get(cfg, "base_level", int, 6)
    profile = C._get(cfg, "profile", default="cutoff")
    dim = C._get(cfg, "dim", int, 1)
    plateau = bool(C._get(cfg, "plateau_check", default=True))
    override = bool(C._get(cfg, "allow_restriction_violation", default=False))
    if profile not in ("plateau", "cutoff"):
        raise ConfigError(f"unknown multiplier profile {profile!r}")
    if m_max < 0 or base_level < 2:
        raise ConfigError("need m_max >= 0 and base_level >= 2")
    for P in grid:
        if P.family == "F" and not override and not check_f_restriction(P, dim) > 0:
            raise ConfigError(
                f"F-family multiplier bound needs s > n(1/min(p,q) - 1/p); violated by {P.to_dict()}")

    def run():
        checks, files, results = [], {}, []
        for i, P in enumerate(grid):
            sw = multiplier_sweep(P, m_max, base_level, profile, dim)
            files[f"multiplier_{i:02d}.csv"] = sw.to_csv()
            tag = f"{P.family}(s={P.s}, p={C.jsonable_exponent(P.p)}, q={C.jsonable_exponent(P.q)})"
            if override and P.family == "F" and not check_f_restriction(P, dim) > 0:
                checks.append(_assertion(f"{tag} explored outside the F restriction", True))
            else:
                checks.append(_assertion(f"{tag} lambda drift", sw.drift <= tol["drift"],
                                         sw.drift, tol["drift"]))
            res = {"params": P.to_dict(), "lambdas": sw.lambdas, "max_ratios": sw.max_ratios,
                   "drift": sw.drift}
            if plateau:
                pl = multiplier_sweep(P, m_max, base_level, "plateau", dim)
                files[f"plateau_{i:02d}.csv"] = pl.to_csv()
                checks.append(_assertion(f"{tag} plateau ratio exactly 1",
                                         all(r == 1.0 for r in pl.max_ratios), pl.max_ratios))
                res["plateau_ratios"] = pl.max_ratios
            results.append(res)
        worst = 0.0
        for j in range(m_max + 1):
            spec = MultiplierSpec(2.0 ** (-j), max(1 + int(math.floor(P.s)) for P in grid), None, profile)
            phi = make_multiplier(spec, base_level + j, 2.0 ** (1 - j), dim)
            worst = max(worst, derivative_bound_check(phi, spec, tol["derivative"])[0])
        checks.append(_assertion("derivative bounds a lam^-j", worst <= 1.0 + tol["derivative"],
                                 worst, 1.0 + tol["derivative"]))
        return Outcome(_report("multiplier", cfg, seed, {"profile": profile, "params": results}, checks), files)
    return run


# ------------------------------------------------------------- identities

IDENTITY_KINDS = ("difference", "modulus", "ball_means")


def random_identity_case(rng: np.random.Generator, kind: str, dims=(1, 2)) -> dict:
    """A random compactly supported f and a dyadic dilation compatible with it."""
    dim = int(rng.choice(dims))
    m = int(rng.integers(0, 3))
    level = m + int(rng.integers(3, 7) if dim == 1 else rng.integers(2, 4))
    R = 2.0 ** (-m)
    g = GridFunction.zeros(dim, level, R, R)
    vals = rng.standard_normal(g.values.shape) * (g.radius_sq() < R * R)
    f = g.replace(vals)
    r = int(rng.integers(1, 4))
    ps = [0.5, 1.0, 2.0, 3.0] + ([math.inf] if kind == "modulus" else [])
    p = float(rng.choice(ps))
    coarse = 2.0 ** (m - level)
    case = {"f": f, "m": m, "r": r, "p": p, "kind": kind, "dim": dim, "level": level}
    if kind == "difference":
        h = rng.integers(-3, 4, size=dim)
        if not np.any(h):
            h[0] = 1
        case["h"] = tuple(int(v) for v in h)
        case["t"] = 0.0
    else:
        case["t"] = coarse * int(rng.integers(1, 5))
    return case


def _rel_err(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = max(float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    return float(np.abs(a - b).max(initial=0.0) / scale) if scale > 0 else 0.0


def _prepare_identities(cfg, seed, base_dir):
    tol = C.tolerances("identities", cfg)
    n_cases = C._get(cfg, "cases", int, 50)
    dims = [int(d) for d in C._get(cfg, "dims", list, [1, 2])]
    if any(d not in (1, 2) for d in dims):
        raise ConfigError("dims must be drawn from {1, 2}")
    ann = C._get(cfg, "annihilation", default=None)
    if ann is not None:
        ann_r = [int(v) for v in C._get(ann, "r", list, [1, 2, 3, 4])]
        ann_levels = [int(v) for v in C._get(ann, "levels", list, [5, 8])]
        ann_dims = [int(v) for v in C._get(ann, "dims", list, [1])]
    s = seed if seed is not None else C._get(cfg, "seed", int, 0)

    def run():
        checks, files, results = [], {}, {}
        rng = np.random.default_rng(s)
        rows, worst = [], 0.0
        for i in range(n_cases):
            case = random_identity_case(rng, IDENTITY_KINDS[i % 3], dims)
            lhs, rhs = scale_commutation_check(case["f"], case["m"], case["t"], case["p"],
                                               case["r"], case["kind"], case.get("h"))
            err = _rel_err(lhs, rhs)
            worst = max(worst, err)
            rows.append([i, case["kind"], case["dim"], case["m"], case["level"], case["r"],
                         C.jsonable_exponent(case["p"]), err])
        if n_cases:
            checks.append(_assertion(f"{n_cases} dyadic identity cases", worst <= tol["relative"],
                                     worst, tol["relative"]))
            files["identities.csv"] = csv_text(
                ["case", "kind", "dim", "m", "level", "r", "p", "relative_error"], rows)
            results["worst_relative_error"] = worst
        if ann is not None:
            arows, zero_ok, control_ok = [], True, True
            for dim in ann_dims:
                for L in ann_levels:
                    for r in ann_r:
                        for d in range(r + 1):
                            f = make_bump(dim, L, 2.0, 1.0, "polynomial", d)
                            for t in (f.delta, 0.25):
                                for p in (1.0, 2.0, math.inf):
                                    w = modulus(f, t, p, r, interior=1.0)
                                    arows.append([dim, L, r, d, t, C.jsonable_exponent(p), w])
                                    if d < r:
                                        zero_ok &= w == 0.0
                                    else:
                                        control_ok &= w > 0.0
            checks.append(_assertion("omega_r of degree < r vanishes exactly", zero_ok))
            checks.append(_assertion("degree r control is nonzero", control_ok))
            files["annihilation.csv"] = csv_text(["dim", "level", "r", "degree", "t", "p", "omega"], arows)
        return Outcome(_report("identities", cfg, s, results, checks), files)
    return run


PREPARE = {
    "norm": _prepare_norm,
    "homogeneity": _prepare_homogeneity,
    "equivalence": _prepare_equivalence,
    "embed": _prepare_embed,
    "entropy": _prepare_entropy,
    "multiplier": _prepare_multiplier,
    "identities": _prepare_identities,
}


def prepare(command: str, cfg: dict, seed: int | None = None, base_dir: str = "."):
    """Validate ``cfg`` for ``command`` and return a callable running it."""
    if command not in PREPARE:
        raise ConfigError(f"unknown command {command!r}; expected one of {list(PREPARE)}")
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    C.threads()
    return PREPARE[command](cfg, seed, base_dir)


def run_experiment(command: str, cfg: dict, seed: int | None = None, base_dir: str = ".") -> Outcome:
    return prepare(command, cfg, seed, base_dir)()
