import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from randcover.errors import DoesNotFitError, InvalidInputError, UnsupportedGeometryError
from randcover.torus import (
    TorusRectangle,
    assign_edges,
    box_contains,
    place_copy_inside,
    random_frame,
    shrink_similar,
    torus_distance,
    translate,
    wrap,
)

unit = st.floats(0, 1, exclude_max=True, allow_nan=False)


def rects(d):
    return st.tuples(
        arrays(float, d, elements=unit), arrays(float, d, elements=st.floats(0.01, 0.3)), st.integers(0, 2**31)
    ).map(lambda t: TorusRectangle(t[0], random_frame(np.random.default_rng(t[2]), d), t[1] / np.sqrt(d)))


def test_wrap_and_distance():
    assert np.allclose(wrap([1.25, -0.25, 1.0]), [0.25, 0.75, 0.0])
    assert torus_distance([0.05], [0.95]) == pytest.approx(0.1)
    assert torus_distance([0.0, 0.0], [0.5, 0.5]) == pytest.approx(np.sqrt(0.5))


@given(rects(2), st.integers(0, 2**31))
def test_samples_are_contained(r, seed):
    pts = r.sample(np.random.default_rng(seed), 50)
    assert np.all(r.contains_point(pts, tol=1e-9))


@given(rects(3), arrays(float, 3, elements=st.floats(-3, 3)))
def test_translation_preserves_containment(r, xi):
    pts = r.sample(np.random.default_rng(0), 20)
    assert np.all(translate(r, xi).contains_point(wrap(pts + xi), tol=1e-9))


@given(rects(2), st.floats(0.05, 1.0))
def test_shrink_keeps_centre_and_nests(r, a):
    s = shrink_similar(r, a)
    assert torus_distance(wrap(s.center), wrap(r.center)) < 1e-12
    assert np.allclose(s.edges, r.edges * a)
    assert np.all(r.contains_point(s.vertices() % 1.0, tol=1e-9))


@given(rects(3), st.floats(0.1, 1.0), st.integers(0, 100))
def test_place_copy_inside_fits(r, frac, seed):
    inner = np.random.default_rng(seed).permutation(r.spectrum * frac)
    c = place_copy_inside(r, inner)
    assert np.allclose(np.sort(c.edges)[::-1], np.sort(inner)[::-1])
    assert np.all(r.contains_point(c.vertices() % 1.0, tol=1e-9))


def test_place_copy_rejects_oversized():
    r = TorusRectangle.axis_aligned([0, 0], [0.2, 0.1])
    with pytest.raises(DoesNotFitError):
        place_copy_inside(r, [0.15, 0.15])


def test_geometry_limits():
    with pytest.raises(UnsupportedGeometryError):
        TorusRectangle.axis_aligned([0, 0], [0.4, 0.4])
    with pytest.raises(InvalidInputError):
        TorusRectangle.axis_aligned([0], [1.0])
    with pytest.raises(InvalidInputError):
        TorusRectangle([0, 0], [[1, 1], [0, 1]], [0.1, 0.1])
    wide = TorusRectangle.wide_box([0.9], [0.6])
    assert wide.contains_point([0.3]) and not wide.contains_point([0.6])


@given(arrays(float, (30, 2), elements=st.floats(0.01, 0.34)), arrays(float, 2, elements=st.floats(0.01, 0.34)))
def test_assign_edges_matches_scalar_placement(outer, inner):
    inner = np.sort(inner)[::-1]
    got = assign_edges(outer, inner)
    for row, e in zip(outer, got):
        r = TorusRectangle.axis_aligned([0, 0], row)
        if np.all(inner <= r.spectrum):
            assert np.allclose(place_copy_inside(r, inner).edges, e)


@given(arrays(float, (5, 2), elements=unit), arrays(float, (5, 2), elements=st.floats(0.01, 0.3)), arrays(float, (40, 2), elements=unit))
def test_box_contains_matches_rectangles(corners, edges, pts):
    got = box_contains(corners[None], edges[None], pts[:, None])
    for i in range(5):
        r = TorusRectangle.axis_aligned(corners[i], edges[i])
        # points within rounding of a face may go either way
        u = r.frame_coords(pts)
        clear = np.all((np.abs(u) > 1e-9) & (np.abs(u - r.edges) > 1e-9), axis=1)
        assert np.array_equal(got[clear, i], r.contains_point(pts)[clear])
