"""The acceptance grid as a list of configured experiments.

Each criterion is one or more (command, config) runs with fixed seeds; it
passes when every assertion of every run passes.
"""

from __future__ import annotations

import copy
import os
import time
from dataclasses import dataclass, field

from .config import DEFAULT_TOLERANCES, ConfigError, tolerances
from .experiments import Outcome, prepare
from .io import dumps, write_outputs, write_text_atomic

STD_CORPUS = {"kind": "standard", "dim": 1, "radius": 0.5, "extent": 1.0}
MOTHER = {"profile": "smooth_bump", "dim": 1, "level": 10, "extent": 0.125, "radius": 0.0625}
SEQ_SRC = {"s": 2.0, "rho": 1.0, "p": 2, "q": 2, "n": 1, "M": [1, 2, 4]}
SEQ_DST = {"s": 1.0, "rho": 0.0, "p": 2, "q": 2, "n": 1, "M": [1, 2, 4]}
ONE_SRC = {"s": 2.0, "rho": 1.0, "p": 2, "q": 2, "n": 1, "M": [1]}
ONE_DST = {"s": 1.0, "rho": 0.0, "p": 2, "q": 2, "n": 1, "M": [1]}


@dataclass
class Criterion:
    id: int
    title: str
    runs: list[tuple[str, dict]]


SUITE = [
    Criterion(1, "homogeneity exponent, B family", [("homogeneity", {
        "mother": MOTHER, "M": 4,
        "grid": {"s": [0.5, 0.75, 1.25], "p": [1, 2, "inf"], "q": [1, 2, "inf"], "family": "B"}})]),
    Criterion(2, "homogeneity exponent, F family", [("homogeneity", {
        "mother": MOTHER, "M": 4,
        "grid": {"s": [0.8, 1.5], "p": [1, 2], "q": [2, "inf"], "family": "F"}})]),
    Criterion(3, "exact discrete dilation identities", [("identities", {
        "cases": 50, "seed": 0, "dims": [1, 2]})]),
    Criterion(4, "support-based equivalence", [("equivalence", {
        "mode": "variants", "corpus": STD_CORPUS, "levels": [8, 9, 10],
        "params": [{"s": 0.5, "p": 2, "q": 2}, {"s": 1.25, "p": 1, "q": "inf"},
                   {"s": 0.75, "p": "inf", "q": "inf"},
                   {"s": 0.8, "p": 2, "q": 2, "family": "F"},
                   {"s": 1.5, "p": 1, "q": "inf", "family": "F"}]})]),
    Criterion(5, "independence of the difference order", [("equivalence", {
        "mode": "r_orders", "corpus": STD_CORPUS, "levels": [8, 9, 10],
        "params": [{"s": 0.5, "p": 2, "q": 2, "r": 1}, {"s": 1.25, "p": 2, "q": 2, "r": 2},
                   {"s": 0.75, "p": "inf", "q": "inf", "r": 1},
                   {"s": 0.5, "p": 1, "q": 1, "r": 1}]})]),
    Criterion(6, "B-F-B sandwich", [("equivalence", {
        "mode": "sandwich", "corpus": STD_CORPUS, "levels": [8, 9, 10],
        "params": [{"s": 0.8, "p": 2, "q": 1}, {"s": 0.8, "p": 2, "q": "inf"}]})]),
    Criterion(7, "polynomial annihilation", [("identities", {
        "cases": 0, "annihilation": {"r": [1, 2, 3, 4], "levels": [5, 8], "dims": [1]}}),
        ("identities", {"cases": 0, "annihilation": {"r": [1, 2, 3, 4], "levels": [4], "dims": [2]}})]),
    Criterion(8, "entropy monotonicity, calculus and 1-d law", [
        ("entropy", {"mode": "exact_law", "src": ONE_SRC, "dst": ONE_DST,
                     "k_range": [1, 2, 3, 4, 5, 6, 7], "cloud_size": 512, "seeds": [0, 1, 2]}),
        ("entropy", {"mode": "exact_law", "src": ONE_SRC, "dst": ONE_DST, "scale": 3.0,
                     "k_range": [1, 2, 3, 4, 5, 6, 7], "cloud_size": 512, "seeds": [0]}),
        ("entropy", {"mode": "calculus", "cloud_size": 2048, "seeds": [0, 1]})]),
    Criterion(9, "entropy rate", [("entropy", {
        "mode": "rate", "src": SEQ_SRC, "dst": SEQ_DST, "k_range": [2, 3, 4, 5, 6, 7],
        "cloud_size": 4096, "seeds": [0, 1, 2]})]),
    Criterion(10, "multiplier lambda-uniformity", [("multiplier", {
        "params": [{"s": 0.5, "p": 2, "q": 2}, {"s": 1.25, "p": 2, "q": 2},
                   {"s": 0.75, "p": "inf", "q": "inf"}, {"s": 0.8, "p": 2, "q": 2, "family": "F"}],
        "m_max": 3, "base_level": 6, "profile": "cutoff", "plateau_check": True})]),
    Criterion(11, "bounded-domain embedding probe", [("embed", {
        "corpus": {"kind": "smooth", "dim": 1, "radius": 1.0, "extent": 1.0}, "levels": [5, 6, 7],
        "pairs": [{"src": {"s": 1.5, "p": 2, "q": 2}, "dst": {"s": 0.5, "p": 2, "q": 2}}]}),
        ("embed", {
            "corpus": {"kind": "standard", "dim": 1, "radius": 1.0, "extent": 1.0},
            "levels": [5, 6, 7],
            "pairs": [{"src": {"s": 1.0, "p": "inf", "q": "inf"}, "dst": {"s": 0.5, "p": 1, "q": "inf"}},
                      {"src": {"s": 1.25, "p": 1, "q": 2}, "dst": {"s": 0.5, "p": 2, "q": 2}}],
            "refuse": [{"src": {"s": 1.0, "p": 1, "q": 2}, "dst": {"s": 0.5, "p": 2, "q": 2}},
                       {"src": {"s": 0.5, "p": 2, "q": 2}, "dst": {"s": 0.5, "p": 2, "q": 2}}]})]),
]


@dataclass
class CriterionResult:
    id: int
    title: str
    passed: bool
    outcomes: list[Outcome] = field(default_factory=list)

    def summary(self) -> dict:
        failed = [a["name"] for o in self.outcomes for a in o.report["assertions"] if not a["passed"]]
        return {"id": self.id, "title": self.title, "passed": self.passed, "failed_assertions": failed}


def criteria(only=None) -> list[Criterion]:
    if only is None:
        return list(SUITE)
    ids = {c.id for c in SUITE}
    bad = set(only) - ids
    if bad:
        raise ConfigError(f"unknown criterion ids {sorted(bad)}")
    return [c for c in SUITE if c.id in set(only)]


def _with_tolerances(command: str, cfg: dict, overrides: dict) -> dict:
    cfg = copy.deepcopy(cfg)
    if command in overrides:
        cfg.setdefault("tolerances", {}).update(overrides[command])
    return cfg


def prepare_criterion(c: Criterion, overrides: dict | None = None):
    """Validate every run of a criterion; returns a callable producing its result."""
    overrides = overrides or {}
    runners = [prepare(cmd, _with_tolerances(cmd, cfg, overrides)) for cmd, cfg in c.runs]

    def run() -> CriterionResult:
        outs = [r() for r in runners]
        return CriterionResult(c.id, c.title, all(o.passed for o in outs), outs)
    return run


def run_criterion(cid: int, overrides: dict | None = None) -> CriterionResult:
    return prepare_criterion(criteria([cid])[0], overrides)()


def run_suite(out_dir: str | None = None, overrides: dict | None = None, only=None,
              log=None) -> list[CriterionResult]:
    """Run the acceptance grid sequentially; write reports if ``out_dir`` is given."""
    overrides = overrides or {}
    if not isinstance(overrides, dict) or any(not isinstance(v, dict) for v in overrides.values()):
        raise ConfigError("tolerance overrides must map command names to objects")
    for command, extra in overrides.items():
        if command not in DEFAULT_TOLERANCES:
            raise ConfigError(f"no tolerances for unknown command {command!r}")
        tolerances(command, {"tolerances": extra})
    selected = criteria(only)
    runners = [(c, prepare_criterion(c, overrides)) for c in selected]
    results = []
    for c, run in runners:
        t0 = time.perf_counter()
        res = run()
        results.append(res)
        if log is not None:
            log(f"criterion {c.id:2d} {'PASS' if res.passed else 'FAIL'} "
                f"{c.title} ({time.perf_counter() - t0:.1f}s)")
        if out_dir is not None:
            for i, o in enumerate(res.outcomes):
                sub = os.path.join(out_dir, f"c{c.id:02d}", f"{i}_{o.report['command']}")
                write_outputs(sub, o)
    if out_dir is not None:
        summary = {"passed": all(r.passed for r in results),
                   "criteria": [r.summary() for r in results]}
        write_text_atomic(os.path.join(out_dir, "suite_report.json"),
                          dumps(summary))
    return results
