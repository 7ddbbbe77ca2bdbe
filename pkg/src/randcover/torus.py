"""Points and oriented rectangles on the flat torus T^d = R^d / Z^d.

Points are plain float64 arrays with coordinates in [0, 1). Rectangles are
immutable values: a corner, an orthonormal frame whose columns are the edge
directions, and the edge lengths in frame order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .errors import DoesNotFitError, InvalidInputError, UnsupportedGeometryError

FRAME_TOL = 1e-10


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def wrap(coords) -> np.ndarray:
    """Reduce coordinates mod 1 into [0, 1).

    Works on a single point or on an array of points (last axis = d).
    """
    x = np.asarray(coords, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("non-finite coordinate")
    out = np.mod(x, 1.0)
    # np.mod(-1e-18, 1.0) rounds to 1.0
    out[out >= 1.0] = 0.0
    return out


def torus_distance(x, y) -> np.ndarray | float:
    """Euclidean distance on T^d using the minimal image in every coordinate.

    Broadcasts over leading axes; returns a float for single points.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape[-1:] != y.shape[-1:]:
        raise InvalidInputError(f"dimension mismatch: {x.shape[-1:]} vs {y.shape[-1:]}")
    delta = np.abs(x - y) % 1.0
    delta = np.minimum(delta, 1.0 - delta)
    dist = np.sqrt(np.sum(delta * delta, axis=-1))
    return float(dist) if dist.ndim == 0 else dist


def check_frame(frame) -> np.ndarray:
    f = np.asarray(frame, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise InvalidInputError(f"frame must be square, got shape {f.shape}")
    if not np.allclose(f.T @ f, np.eye(f.shape[0]), atol=FRAME_TOL, rtol=0.0):
        raise InvalidInputError("frame columns are not orthonormal")
    return f


def random_frame(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


@dataclass(frozen=True, eq=False)
class TorusRectangle:
    corner: np.ndarray
    frame: np.ndarray
    edges: np.ndarray
    _spectrum: np.ndarray = field(init=False, repr=False)

    _wide: bool = field(default=False, repr=False, kw_only=True)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.float64)
        if edges.ndim != 1 or edges.size == 0:
            raise InvalidInputError("edges must be a non-empty vector")
        d = edges.size
        frame = check_frame(self.frame)
        if frame.shape[0] != d:
            raise InvalidInputError("frame and edges disagree on dimension")
        corner = wrap(self.corner)
        if corner.shape != (d,):
            raise InvalidInputError("corner and edges disagree on dimension")
        if not np.all((edges > 0) & (edges < 1)):
            raise InvalidInputError(f"edge lengths must lie in (0, 1): {edges}")
        wide_ok = self._wide and np.array_equal(frame, np.eye(d))
        if np.sqrt(np.sum(edges**2)) >= 0.5 and not wide_ok:
            raise UnsupportedGeometryError(
                f"diameter {np.sqrt(np.sum(edges**2)):.4g} >= 1/2; lifting is ambiguous"
            )
        object.__setattr__(self, "corner", _frozen(corner))
        object.__setattr__(self, "frame", _frozen(frame))
        object.__setattr__(self, "edges", _frozen(edges))
        # stable sort on -edges: ties keep axis order
        order = np.argsort(-edges, kind="stable")
        object.__setattr__(self, "_spectrum", _frozen(edges[order]))

    @classmethod
    def axis_aligned(cls, corner, edges) -> "TorusRectangle":
        edges = np.asarray(edges, dtype=np.float64)
        return cls(corner, np.eye(edges.size), edges)

    @classmethod
    def wide_box(cls, corner, edges) -> "TorusRectangle":
        """Axis-aligned box exempt from the diameter limit.

        With the identity frame each coordinate lifts independently, so any
        edges in (0, 1) give an unambiguous nearest-lift containment test.
        """
        edges = np.asarray(edges, dtype=np.float64)
        return cls(corner, np.eye(edges.size), edges, _wide=True)

    @property
    def d(self) -> int:
        return self.edges.size

    @property
    def spectrum(self) -> np.ndarray:
        """Edge lengths in descending order."""
        return self._spectrum

    @property
    def axis_order(self) -> np.ndarray:
        return np.argsort(-self.edges, kind="stable")

    def volume(self) -> float:
        return float(np.prod(self.edges))

    def diam(self) -> float:
        return float(np.sqrt(np.sum(self.edges**2)))

    @cached_property
    def center(self) -> np.ndarray:
        """Centre of the rectangle, unwrapped (the lift next to the corner)."""
        return self.corner + self.frame @ (self.edges / 2)

    def vertices(self) -> np.ndarray:
        """All 2^d vertices, lifted consistently with ``center`` (not wrapped)."""
        signs = np.array(list(product((0.0, 1.0), repeat=self.d)))
        return self.corner + (signs * self.edges) @ self.frame.T

    def frame_coords(self, points) -> np.ndarray:
        """Coordinates of the lifts nearest the centre, in the rectangle's frame."""
        p = np.asarray(points, dtype=np.float64)
        # measured from the corner so that the corner itself maps to exactly 0
        rel = p - self.corner
        rel -= np.round(rel - self.frame @ (self.edges / 2))
        return rel @ self.frame

    def contains_point(self, p, tol: float = 0.0) -> bool | np.ndarray:
        """Closed containment test; vectorised over a leading axis of points."""
        u = self.frame_coords(p)
        inside = np.all((u >= -tol) & (u <= self.edges + tol), axis=-1)
        return bool(inside) if np.ndim(inside) == 0 else inside

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random((size, self.d)) * self.edges
        return wrap(self.corner + u @ self.frame.T)

    def as_dict(self) -> dict:
        return {
            "corner": self.corner.tolist(),
            "edges": self.edges.tolist(),
            "frame": self.frame.reshape(-1).tolist(),
        }


def translate(rect: TorusRectangle, xi) -> TorusRectangle:
    return TorusRectangle(
        wrap(rect.corner + np.asarray(xi, dtype=np.float64)), rect.frame, rect.edges, _wide=rect._wide
    )


def shrink_similar(rect: TorusRectangle, a: float) -> TorusRectangle:
    """Similar copy with ratio ``a`` and the same centre."""
    if not 0.0 < a <= 1.0:
        raise InvalidInputError(f"similarity ratio must lie in (0, 1], got {a}")
    if a == 1.0:
        return rect
    edges = rect.edges * a
    corner = rect.center - rect.frame @ (edges / 2)
    return TorusRectangle(wrap(corner), rect.frame, edges, _wide=rect._wide)


def place_copy_inside(outer: TorusRectangle, inner_edges) -> TorusRectangle:
    """Corner-anchored isometric copy of a rectangle with ``inner_edges`` inside ``outer``.

    The i-th largest inner edge goes on the axis carrying the i-th largest outer
    edge, which fits whenever the sorted inner edges are dominated.
    """
    inner = np.asarray(inner_edges, dtype=np.float64)
    if inner.shape != outer.edges.shape:
        raise InvalidInputError("dimension mismatch")
    inner_sorted = np.sort(inner)[::-1]
    if np.any(inner_sorted > outer.spectrum):
        raise DoesNotFitError(f"edges {inner_sorted} not dominated by {outer.spectrum}")
    edges = np.empty_like(inner)
    edges[outer.axis_order] = inner_sorted
    if np.array_equal(edges, outer.edges):
        return outer
    return TorusRectangle(outer.corner, outer.frame, edges, _wide=outer._wide)


def assign_edges(outer_edges: np.ndarray, inner_spectrum: np.ndarray) -> np.ndarray:
    """Vectorised form of the axis matching in ``place_copy_inside``.

    ``outer_edges`` has shape (n, d) in frame order, ``inner_spectrum`` shape (d,)
    sorted descending. No domination check.
    """
    order = np.argsort(-outer_edges, axis=1, kind="stable")
    out = np.empty_like(outer_edges)
    np.put_along_axis(out, order, np.broadcast_to(inner_spectrum, outer_edges.shape), axis=1)
    return out


def box_contains(corners, edges, points, tol: float = 0.0) -> np.ndarray:
    """Closed containment for axis-aligned boxes; arrays broadcast row-wise.

    Unlike ``TorusRectangle`` this accepts any edges in (0, inf): an edge >= 1
    wraps the whole circle along that axis.
    """
    rel = np.mod(np.asarray(points) - np.asarray(corners), 1.0)
    # a point just below the corner wraps to ~1; count it when within tol
    near = (1.0 - rel) <= tol
    ok = (rel <= np.asarray(edges) + tol) | near | (np.asarray(edges) >= 1.0)
    return np.all(ok, axis=-1)
