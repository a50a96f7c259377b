import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from fslab import (ResourceError, SeqElement, SeqSpaceParams, UsageError, embedding_map,
                   entropy_calculus_check, entropy_curve, entropy_estimate, entropy_rate_fit,
                   map_entropy_numbers, seq_norm)
from fslab.seqspace import (Metric, cover_radii, covering_radius, entropy_csv, entropy_manifest,
                            farthest_point_centers, predicted_entropy_slope, unit_ball_cloud)

INF = math.inf
SRC = SeqSpaceParams(2.0, 1.0, 2, 2, 1, (1, 2, 4))
DST = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 2, 4))


def random_element(seed, P):
    return SeqElement(P, np.random.default_rng(seed).standard_normal(P.size))


def test_params_validation():
    with pytest.raises(UsageError):
        SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 8))  # M_1 far from 2^1
    with pytest.raises(UsageError):
        SeqSpaceParams(0.0, 0.0, 2, 2, 1, (1,))
    with pytest.raises(UsageError):
        SeqSpaceParams(1.0, -1.0, 2, 2, 1, (1,))
    P = SeqSpaceParams(1.0, 0.5, 2, 2, 1, (1, 2), B_max=1, beta_dim=2)
    assert P.betas() == [(0, 0), (0, 1), (1, 0)]
    assert P.size == 9


def test_single_coefficient_norms():
    P = SeqSpaceParams(1.5, 0.75, 2, 2, 1, (1, 2, 4), B_max=1)
    for j, m in [(0, 1), (1, 2), (2, 3)]:
        assert seq_norm(SeqElement.single(P, 0, j, m), P) == pytest.approx(2.0 ** (j * 1.0), rel=1e-15)
        assert seq_norm(SeqElement.single(P, 1, j, m), P) == pytest.approx(2.0 ** 0.75 * 2.0**j, rel=1e-15)


def test_weighted_l2_cross_check():
    P = SeqSpaceParams(1.25, 0.0, 2, 2, 1, (1, 2, 4))
    x = random_element(3, P)
    w = np.concatenate([np.full(m, 2.0 ** (j * 0.75)) for j, m in enumerate(P.M)])
    assert seq_norm(x, P) == pytest.approx(np.linalg.norm(w * x.coeffs), rel=1e-14)


@given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 2.0, INF]), st.sampled_from([0.5, 1.0, 2.0, INF]),
       st.integers(0, 2))
def test_seq_norm_matches_nested_loops(seed, p, q, B_max):
    P = SeqSpaceParams(1.25, 0.5, p, q, 1, (1, 2, 4), B_max=B_max)
    x = random_element(seed, P)
    assert seq_norm(x, P) == pytest.approx(oracles.seq_norm(P, list(x.coeffs)), rel=1e-13)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 2.0, INF]),
       st.floats(-50, 50, allow_nan=False))
def test_seq_norm_homogeneity_and_triangle(s1, s2, p, c):
    P = SeqSpaceParams(1.0, 0.5, p, p, 1, (1, 2, 4), B_max=1)
    x, y = random_element(s1, P), random_element(s2, P)
    assert seq_norm(SeqElement(P, c * x.coeffs), P) == pytest.approx(abs(c) * seq_norm(x, P),
                                                                     rel=1e-13, abs=1e-300)
    u = min(1.0, p)
    lhs = seq_norm(SeqElement(P, x.coeffs + y.coeffs), P) ** u
    assert lhs <= (seq_norm(x, P) ** u + seq_norm(y, P) ** u) * (1 + 1e-12)


def test_seq_norm_index_mismatch():
    x = random_element(0, SRC)
    with pytest.raises(UsageError):
        seq_norm(x, SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 2)))
    with pytest.raises(UsageError):
        SeqElement(SRC, np.zeros(3))
    with pytest.raises(UsageError):
        SeqElement.single(SRC, 0, 3, 1)


def test_embedding_map_is_identity_with_ratio_formula():
    src = SeqSpaceParams(2.0, 1.0, 1, 2, 1, (1, 2, 4), B_max=2)
    dst = SeqSpaceParams(1.0, 0.25, 2, 2, 1, (1, 2, 4), B_max=2)
    x = random_element(1, src)
    assert np.array_equal(embedding_map(x, src, dst).coeffs, x.coeffs)
    for beta, j, m in [(0, 0, 1), (0, 2, 4), (1, 1, 2), (2, 2, 1)]:
        e = SeqElement.single(src, beta, j, m, 3.0)
        ratio = seq_norm(embedding_map(e, src, dst), dst) / seq_norm(e, src)
        expected = 2.0 ** ((dst.rho - src.rho) * beta) * 2.0 ** (j * ((1.0 - 0.5) - (2.0 - 1.0)))
        assert ratio == pytest.approx(expected, rel=1e-14)


def test_embedding_map_refusals():
    x = random_element(0, SRC)
    bad = [
        SeqSpaceParams(1.0, 1.0, 2, 2, 1, (1, 2, 4)),    # rho not decreasing
        SeqSpaceParams(1.0, 0.0, 1, 2, 1, (1, 2, 4)),    # p2 < p1
        SeqSpaceParams(2.0, 0.0, 2, 2, 1, (1, 2, 4)),    # delta = 0
        SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 2)),       # different index set
    ]
    for dst in bad:
        with pytest.raises(UsageError):
            embedding_map(x, SRC, dst)


def test_m_j_invariant_holds_for_declared_constants():
    for n in (1, 2):
        M = tuple(2 ** (j * n) for j in range(3))
        P = SeqSpaceParams(1.0, 0.0, 2, 2, n, M)
        for j, m in enumerate(P.M):
            assert P.c1 * 2 ** (j * n) <= m <= P.c2 * 2 ** (j * n)


@pytest.mark.parametrize("seed", range(6))
def test_gonzalez_within_factor_two_of_optimum(seed):
    P = SeqSpaceParams(1.0, 0.0, [1.0, 2.0, INF][seed % 3], [1.0, 2.0, INF][seed % 3], 1, (1, 2))
    metric = Metric(P)
    rng = np.random.default_rng(seed)
    pts = metric.prepare(rng.standard_normal((12, P.size)))
    dist = lambda a, b: float(metric.pairwise(a[None], b[None])[0, 0])
    for k in (1, 2, 3, 4):
        greedy = covering_radius(pts, farthest_point_centers(pts, k, metric), metric)
        opt = oracles.kcenter_exhaustive(pts, k, dist)
        assert opt <= greedy * (1 + 1e-12)
        assert greedy <= 2 * opt * (1 + 1e-12)
        refined = cover_radii(pts, [int(math.log2(k)) + 1], metric)[0] if k in (1, 2, 4) else None
        if refined is not None:
            assert opt * (1 - 1e-6) <= refined <= greedy * (1 + 1e-12)


def test_one_dimensional_exact_law():
    src = SeqSpaceParams(2.0, 1.0, 2, 2, 1, (1,))
    dst = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1,))
    est = entropy_curve(src, dst, range(1, 8), 512, 0)
    w = 1.0  # single coordinate at j = 0: both norms equal |x|
    for e in est:
        assert e.method == "exact_1d" and e.centers_used == 2 ** (e.k - 1)
        assert e.value == w * 2.0 ** (-(e.k - 1))
        assert e.value == pytest.approx(oracles.interval_cover_radius(-w, w, 2 ** (e.k - 1)), rel=1e-12)
    greedy = entropy_curve(src, dst, range(1, 8), 512, 0, method="greedy_cover")
    for g, e in zip(greedy, est):
        assert abs(g.value / e.value - 1) <= 0.15


def test_scaled_one_dimensional_law():
    src = SeqSpaceParams(2.0, 1.0, 2, 2, 1, (1,))
    dst = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1,))
    est = map_entropy_numbers([[3.0]], src, dst, [1, 2, 3], 64, 0)
    assert [e.value for e in est] == [3.0, 1.5, 0.75]


def test_entropy_monotone_and_e1_bound():
    ks = list(range(1, 7))
    est = entropy_curve(SRC, DST, ks, 1024, 2)
    vals = [e.value for e in est]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    cloud = unit_ball_cloud(SRC, 1024, 2)
    assert vals[0] <= DST.norm(cloud).max() * (1 + 1e-12)
    assert all(e.method == "greedy_cover" for e in est)


def test_entropy_deterministic_given_seed():
    a = entropy_curve(SRC, DST, [1, 3, 5], 512, 7)
    b = entropy_curve(SRC, DST, [1, 3, 5], 512, 7)
    assert [e.value for e in a] == [e.value for e in b]
    single = entropy_estimate(SRC, DST, 3, 512, 7)
    assert single.k == 3 and single.centers_used == 4


def test_unit_ball_cloud_properties():
    cloud = unit_ball_cloud(SRC, 1000, 0)
    norms = SRC.norm(cloud)
    assert np.all(norms <= 1 + 1e-12)
    assert np.all(cloud[0] == 0)
    assert np.sum(np.isclose(norms, 1.0)) >= SRC.size * 2
    # closed under x -> -x
    keys = {tuple(r) for r in np.round(cloud, 12)}
    assert all(tuple(-r) in keys for r in np.round(cloud, 12))
    assert len(unit_ball_cloud(SRC, 1000, 0)) == len(cloud)
    assert not np.array_equal(unit_ball_cloud(SRC, 1000, 1), cloud)


def test_entropy_errors():
    with pytest.raises(UsageError):
        entropy_estimate(SRC, DST, 6, 16, 0)
    big = SeqSpaceParams(2.0, 1.0, 2, 2, 1, (1, 2, 4, 8, 16, 32))
    big_dst = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 2, 4, 8, 16, 32))
    with pytest.raises(ResourceError):
        entropy_estimate(big, big_dst, 2, 64, 0)
    with pytest.raises(ResourceError):
        entropy_estimate(SRC, DST, 14, 10**4, 0)
    with pytest.raises(UsageError):
        entropy_estimate(SRC, DST, 0, 64, 0)
    with pytest.raises(UsageError):
        map_entropy_numbers(np.eye(3), SRC, DST, [1], 64, 0)


def test_rate_fit_refuses_single_level():
    one_s = SeqSpaceParams(2.0, 1.0, 2, 2, 1, (1,))
    one_d = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1,))
    with pytest.raises(UsageError):
        entropy_rate_fit(one_s, one_d, [1, 2, 3, 4], 64, 0)
    with pytest.raises(UsageError):
        entropy_rate_fit(SRC, DST, [1, 2, 3], 64, 0)


def test_predicted_slope():
    assert predicted_entropy_slope(SRC, DST) == -1.0
    src = SeqSpaceParams(2.0, 1.0, 1, 2, 1, (1, 2, 4))
    dst = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 2, 4))
    # delta = 1 - (1 - 1/2) = 0.5, plus 1/2 - 1
    assert predicted_entropy_slope(src, dst) == -1.0


def test_small_instance_rate():
    fit = entropy_rate_fit(SRC, DST, list(range(2, 9)), 2048, 0)
    assert fit.predicted_slope == -1.0
    assert abs(fit.slope + 1.0) <= 0.4
    assert len(fit.extras["estimates"]) == 7
    csv = entropy_csv(entropy_curve(SRC, DST, [1, 2], 64, 0)).splitlines()
    assert csv[0] == "k,e_k" and csv[1].startswith("1,")
    man = json.loads(entropy_manifest(SRC, DST, [2, 3], 64, 0, fit))
    assert {"src", "dst", "k_range", "cloud_size", "seed", "slope", "predicted_slope"} == set(man)


def test_calculus_zero_plus_t_reduces_to_monotonicity():
    X = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 2))
    T = np.diag([1.0, 0.5, 0.25])
    rep = entropy_calculus_check(np.zeros((3, 3)), T, np.eye(3), X, X, X, [(1, 1), (1, 3)], 512, 0)
    assert rep.all_hold
    add = [c for c in rep.checks if c["name"] == "additivity"]
    assert all(c["lhs"] <= c["rhs"] * (1 + 1e-12) for c in add)


def test_calculus_scaling_exact_1d():
    X = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1,))
    c = 3.0
    rep = entropy_calculus_check([[0.0]], [[1.0]], [[c]], X, X, X, [(1, 1), (2, 3), (4, 2)], 64, 0,
                                 slack=1.0)
    for chk in rep.checks:
        if chk["name"] == "multiplicativity":
            j, k = chk["j"], chk["k"]
            assert chk["lhs"] == c * 2.0 ** (-(j + k - 2))
            assert chk["rhs"] == c * 2.0 ** (-(j - 1)) * 2.0 ** (-(k - 1))
    assert rep.all_hold


def test_calculus_diagonal_2d():
    X = SeqSpaceParams(1.0, 0.0, 2, 2, 1, (1, 1), c1=0.5, c2=2.0)
    S = np.diag([0.5, 0.25])
    T = np.diag([1.0, 0.3])
    R = np.diag([0.8, 2.0])
    rep = entropy_calculus_check(S, T, R, X, X, X, [(1, 1), (2, 2), (2, 3)], 2048, 1)
    assert rep.all_hold
