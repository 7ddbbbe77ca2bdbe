import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy.special import zeta

from randcover import estimators as est
from randcover.errors import InvalidInputError, ResolutionTooFineError
from randcover.singular import ShapeSequence
from randcover.torus import TorusRectangle, random_frame


def brute_count(corners, edges, j):
    """Cells [k/L, (k+1)/L)^d meeting some half-open box [c, c+e) mod 1."""
    L = 2**j
    d = corners.shape[1]
    hit = set()
    for cell in itertools.product(range(L), repeat=d):
        lo = np.array(cell) / L
        for c, e in zip(corners, edges):
            ok = True
            for ax in range(d):
                # overlap of [lo, lo+1/L) with [c, c+e) on the circle: test shifts by -1, 0
                a = c[ax]
                ok_ax = any(max(lo[ax], a + s) < min(lo[ax] + 1 / L, a + s + e[ax]) for s in (-1.0, 0.0))
                ok = ok and ok_ax
            if ok:
                hit.add(cell)
                break
    return len(hit)


def test_single_interval_counts():
    assert est.box_count(([[0.25]], [[0.25]]), 2) == 1
    assert est.box_count(([[0.25]], [[0.25]]), 3) == 2
    assert est.box_count(([[0.9]], [[0.2]]), 3) == 2  # wraps through 0
    assert est.box_count(([[0.0, 0.0]], [[1.0, 1.0]]), 4) == 256


@settings(max_examples=25)
@given(
    st.integers(1, 2),
    st.integers(1, 4),
    arrays(float, (4, 2), elements=st.floats(0, 1, exclude_max=True)),
    arrays(float, (4, 2), elements=st.floats(0.001, 0.6)),
)
def test_box_count_matches_brute_force(d, j, corners, edges):
    c, e = corners[:, :d], edges[:, :d]
    assert est.box_count((c, e), j) == brute_count(c, e, j)


@settings(max_examples=20)
@given(arrays(float, (30, 2), elements=st.floats(0, 1, exclude_max=True)), arrays(float, (30, 2), elements=st.floats(1e-4, 0.05)), st.integers(3, 9))
def test_sparse_path_equals_dense(corners, edges, j):
    dense = est.box_count((corners, edges), j)
    old = est.DENSE_BUDGET
    try:
        est.DENSE_BUDGET = 0
        assert est.box_count((corners, edges), j) == dense
    finally:
        est.DENSE_BUDGET = old


@settings(max_examples=20)
@given(st.integers(0, 2**31), st.integers(2, 7))
def test_rotated_rectangle_obeys_minkowski_bounds(seed, j):
    rng = np.random.default_rng(seed)
    r = TorusRectangle(rng.random(2), random_frame(rng, 2), rng.uniform(0.02, 0.3, 2))
    h = 2.0**-j
    n = est.box_count([r], j)
    # cells meeting R lie in the h*sqrt(2)-neighbourhood of R
    a, b = r.edges
    upper = (a * b + 2 * (a + b) * h * math.sqrt(2) + math.pi * 2 * h * h) / (h * h)
    assert r.volume() / (h * h) <= n <= upper + 4


def test_axis_aligned_rectangle_object_matches_arrays():
    r = TorusRectangle.axis_aligned([0.8, 0.1], [0.3, 0.05])
    assert est.box_count([r], 5) == est.box_count(([[0.8, 0.1]], [[0.3, 0.05]]), 5)


def test_resolution_limit():
    with pytest.raises(ResolutionTooFineError):
        est.box_count(([[0.1]], [[1e-20]]), est.MAX_J + 1)
    assert est.box_count(([[0.1]], [[1e-20]]), est.MAX_J) == 1
    with pytest.raises(InvalidInputError):
        est.box_count(([[0.1]], [[0.1]]), 0)


def dyadic_cantor(depth):
    """Base-4 digits in {0, 2}: a self-similar set of dimension 1/2."""
    starts = np.array([0.0])
    for k in range(1, depth + 1):
        starts = (starts[:, None] + np.array([0.0, 2.0]) * 4.0**-k).reshape(-1)
    return starts[:, None], np.full((starts.size, 1), 4.0**-depth)


def test_dimension_of_self_similar_set():
    boxes = dyadic_cantor(8)
    series = est.box_count_series(boxes, range(2, 17, 2))
    assert series.counts.tolist() == [2**m for m in range(1, 9)]
    rep = est.box_dim_fit(series, target=0.5)
    assert rep.slope == pytest.approx(0.5) and rep.verdict == "consistent"
    assert series.check() == []


def test_fit_edge_cases():
    flat = est.BoxCountSeries([1, 2, 3], [1, 1, 1], 1)
    with pytest.warns(UserWarning):
        assert est.box_dim_fit(flat).slope == 0.0
    with pytest.raises(InvalidInputError):
        est.box_dim_fit(est.BoxCountSeries([1, 2], [1, 2], 1))
    bad = est.BoxCountSeries([1, 2, 3], [2, 1, 20], 1)
    assert "counts decrease" in bad.check() and "count exceeds cell total" in bad.check()


@pytest.mark.parametrize("a, s, N", [(2.0, 0.75, 10), (3.0, 0.5, 1000), (2.0, 1.0, 5)])
def test_tail_sum_against_hurwitz_zeta(a, s, N):
    seq = ShapeSequence.power_law([a])
    assert est.tail_cover_sum(seq, s, N) == pytest.approx(zeta(a * s, N), rel=1e-4)


def test_tail_sum_two_dimensional_factor():
    # Phi^1.5 = n^-1 (n^-1)^0.5 for equal exponents 1; factor 2 * 2^(0.75)
    seq = ShapeSequence.power_law([1.0, 1.0])
    got = est.tail_cover_sum(seq, 1.5, 100)
    assert got == pytest.approx(2 * 2**0.75 * zeta(1.5, 100), rel=1e-4)
    assert est.tail_cover_sum(ShapeSequence.power_law([1.0]), 0.9, 10) == math.inf


def test_uniform_energy_oracle():
    e = est.energy_mc(est.uniform_sampler(1), 0.5, A=1e12, samples=200_000, seed=2)
    assert abs(e.mean - 2 * math.sqrt(2)) <= 4 * e.stderr


def test_energy_is_reproducible_and_pools_exactly():
    a = est.energy_mc(est.uniform_sampler(2), 1.0, samples=10_000, seed=1, workers=3)
    b = est.energy_mc(est.uniform_sampler(2), 1.0, samples=10_000, seed=1, workers=3)
    assert a == b and a.n_samples == 10_000
    x = np.random.default_rng(0).random(1000)
    parts = [est.EnergyEstimate(1.0, 1.0, 500, float(h.mean()), float(((h - h.mean()) ** 2).sum())) for h in (x[:500], x[500:])]
    pooled = parts[0].merge(parts[1])
    assert pooled.mean == pytest.approx(x.mean())
    assert pooled.m2 == pytest.approx(((x - x.mean()) ** 2).sum())


def test_truncated_kernel_caps():
    k = est.truncated_kernel(np.array([[0.0], [0.0]]), np.array([[0.0], [0.25]]), 1.0, 100.0)
    assert k.tolist() == [100.0, 4.0]


def test_falconer_scalar_product():
    r = est.falconer_check([[0.3]], 0.5, samples=100_000, seed=1)
    assert abs(r.product - 2.0) <= 4 * r.product_stderr
    assert r.reliable
    with pytest.raises(InvalidInputError):
        est.falconer_check(np.eye(2) * 0.5, 1.0)


def test_ball_like_dimension_and_transform():
    assert est.ball_like_dimension(ShapeSequence.power_law([2.0]), 2) == 0.5
    assert est.ball_like_dimension(ShapeSequence.power_law([0.25]), 3) == 3.0
    assert est.mtp_transform(0.0625, 1.0, 2) == 0.25


def test_write_csv(tmp_path):
    est.write_csv(tmp_path / "b.csv", est.BOX_COLUMNS, [(1, 2), (2, 4)])
    assert (tmp_path / "b.csv").read_text() == "j,N_j\n1,2\n2,4\n"
