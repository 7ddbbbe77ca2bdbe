import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randcover import cover
from randcover.errors import InvalidInputError
from randcover.singular import ShapeSequence
from randcover.torus import box_contains


def cfg(exps=(1.0,), scales=None, n_max=5000, seed=3):
    return cover.CoverConfig(ShapeSequence.power_law(list(exps), scales), n_max, seed)


def test_generate_cover_uses_the_xi_stream():
    c = cfg((1.0, 2.0), (0.3, 0.5))
    g = cover.generate_cover(c, 7)
    assert np.allclose(g.corner, cover.sample_xi(3, 2, 7))
    assert np.allclose(g.edges, [0.3 / 7, 0.5 / 49])


@settings(max_examples=15)
@given(st.integers(1, 2), st.integers(2, 5), st.integers(0, 2**32))
def test_rasterisation_matches_brute_force(d, j, seed):
    c = cfg((0.8,) * d, (0.4,) * d, n_max=300, seed=seed)
    grid = cover.coverage_grid(c, (1, 300), j)
    pts = cover.grid_points(j, d)
    brute = cover.covering_number(c, pts, 300)
    counts = grid.counts.reshape(-1)
    assert counts.min() == brute.c_min and counts.max() == brute.c_max
    assert counts.mean() == pytest.approx(brute.c_mean)


def test_grid_merge_is_additive():
    c = cfg(n_max=2000)
    a = cover.coverage_grid(c, (1, 800), 6)
    b = cover.coverage_grid(c, (801, 2000), 6)
    whole = cover.coverage_grid(c, (1, 2000), 6)
    assert np.array_equal(a.merge(b).counts, whole.counts)
    with pytest.raises(Exception):
        a.merge(cover.coverage_grid(c, (900, 2000), 6))


def test_checkpoints_match_single_runs():
    c = cfg(n_max=3000)
    pts = np.linspace(0, 1, 57, endpoint=False)[:, None]
    rows = cover.covering_number(c, pts, [100, 3000])
    assert rows[0] == cover.covering_number(c, pts, 100)
    assert rows[1] == cover.covering_number(c, pts, 3000)


def test_coverage_fraction_oracle():
    # union of G_n, n in [a, b], misses a point with probability prod (1 - l_n)
    c = cfg((1.0,), (0.5,), n_max=4000, seed=11)
    frac = cover.coverage_fraction(c, (1000, 4000), 12)
    assert frac == pytest.approx(1 - np.prod(1 - 0.5 / np.arange(1000, 4001)), abs=0.02)


def test_mean_count_matches_expectation():
    c = cfg((1.0,), (0.5,), n_max=4000, seed=12)
    grid = cover.coverage_grid(c, (1, 4000), 12)
    assert grid.counts.mean() == pytest.approx(cover.expected_coverage(c.shape, 4000), rel=0.05)


def test_shepp_verdicts():
    assert cover.shepp_partial_sum(ShapeSequence.power_law([1.0], [1.0]), 1000)[1] == "diverges"
    assert cover.shepp_partial_sum(ShapeSequence.power_law([1.0], [0.9]), 1000)[1] == "converges"
    assert cover.shepp_partial_sum(ShapeSequence.power_law([0.5]), 100)[1] == "diverges"
    v, verdict = cover.shepp_partial_sum(ShapeSequence.power_law([2.0]), 1)
    assert v == pytest.approx(math.e) and verdict == "converges"
    with pytest.raises(InvalidInputError):
        cover.shepp_partial_sum(ShapeSequence.power_law([1.0, 1.0]), 10)


def test_stats_csv(tmp_path):
    rows = [cover.CoverageStats(10, 0.0, 1.5, 3.0, 0.5)]
    cover.write_stats_csv(rows, tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == ",".join(cover.STATS_COLUMNS) and lines[1].startswith("10,")


def test_rasterize_matches_box_contains_on_wrapped_box():
    out = cover.rasterize_centres(np.array([[0.9, 0.95]]), np.array([[0.3, 0.2]]), 4)
    pts = cover.grid_points(4, 2)
    assert np.array_equal(out.reshape(-1) > 0, box_contains([0.9, 0.95], [0.3, 0.2], pts))
