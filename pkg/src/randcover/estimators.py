"""Dimension estimates: box counting, covering-sum tails, truncated energies.

Dyadic cells are half-open, [m 2^-j, (m+1) 2^-j) per axis, and rectangles are
rasterised as half-open boxes [c, c+e), so a box flush with the grid counts
exactly the cells it fills.
"""
from __future__ import annotations

import csv
import logging
import math
import warnings
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, ResolutionTooFineError
from .rng import substreams
from .singular import ShapeSequence, jacobi_singular_values, log_phi_s, scalar_exponent
from .torus import TorusRectangle, torus_distance

log = logging.getLogger(__name__)

MAX_J = 52  # finer cells than the float64 grid of coordinates in [0, 1)
DENSE_BUDGET = 1 << 24  # cells in a dense occupancy grid
SPARSE_BUDGET = 1 << 25  # enumerated (rectangle, cell) pairs


# ---------------------------------------------------------------------------
# box counting


def _as_boxes(rects) -> tuple[np.ndarray, np.ndarray, list[TorusRectangle]]:
    """Split input into axis-aligned (corners, edges) arrays and rotated rectangles."""
    if isinstance(rects, tuple) and len(rects) == 2:
        c, e = (np.atleast_2d(np.asarray(x, dtype=np.float64)) for x in rects)
        return c, e, []
    if hasattr(rects, "corners") and hasattr(rects, "edges") and not isinstance(rects, TorusRectangle):
        return np.asarray(rects.corners), np.asarray(rects.edges), []
    if isinstance(rects, TorusRectangle):
        rects = [rects]
    rects = list(rects)
    if not rects:
        raise InvalidInputError("no rectangles")
    d = rects[0].d
    aligned = [r for r in rects if np.array_equal(r.frame, np.eye(d))]
    rotated = [r for r in rects if not np.array_equal(r.frame, np.eye(d))]
    c = np.array([r.corner for r in aligned]).reshape(-1, d)
    e = np.array([r.edges for r in aligned]).reshape(-1, d)
    return c, e, rotated


def _aligned_ranges(c: np.ndarray, e: np.ndarray, j: int):
    """Unwrapped cell index ranges [lo, hi] of half-open boxes along each axis."""
    L = 2**j
    lo = np.floor(c * L).astype(np.int64)
    hi = np.ceil((c + e) * L).astype(np.int64) - 1
    # c + e can round to c for tiny edges; the corner cell is always met
    hi = np.maximum(hi, lo)
    full = (hi - lo + 1 >= L) | (e >= 1.0)
    lo = np.where(full, 0, lo)
    hi = np.where(full, L - 1, hi)
    return lo, hi


def _cells_aligned(c: np.ndarray, e: np.ndarray, j: int) -> np.ndarray:
    """All (wrapped) cell multi-indices hit by the boxes, with repeats, shape (k, d)."""
    L = 2**j
    lo, hi = _aligned_ranges(c, e, j)
    cnt = hi - lo + 1
    total = int(np.prod(cnt, axis=1).sum())
    if total > SPARSE_BUDGET:
        raise ResolutionTooFineError(f"{total} cell visits at j={j}")
    d = c.shape[1]
    per = np.prod(cnt, axis=1)
    owner = np.repeat(np.arange(c.shape[0]), per)
    offset = np.arange(total) - np.repeat(np.cumsum(per) - per, per)
    out = np.empty((total, d), np.int64)
    for ax in range(d - 1, -1, -1):
        out[:, ax] = (lo[owner, ax] + offset % cnt[owner, ax]) % L
        offset //= cnt[owner, ax]
    return out


def _rotated_cells(rect: TorusRectangle, j: int) -> np.ndarray:
    """Cells whose half-open square meets the rectangle (separating-axis test)."""
    d = rect.d
    if d > 3:
        raise InvalidInputError("rotated box counting supports d <= 3")
    h = 2.0**-j
    verts = rect.vertices()
    lo = np.floor(verts.min(axis=0) / h).astype(np.int64)
    hi = np.ceil(verts.max(axis=0) / h).astype(np.int64) - 1
    cnt = hi - lo + 1
    if int(np.prod(cnt)) > SPARSE_BUDGET:
        raise ResolutionTooFineError(f"{int(np.prod(cnt))} candidate cells at j={j}")
    grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
    cells = np.stack([g.reshape(-1) for g in grids], axis=1)
    axes = [np.eye(d)[i] for i in range(d)] + [rect.frame[:, i] for i in range(d)]
    if d == 3:
        axes += [np.cross(np.eye(3)[i], rect.frame[:, k]) for i in range(3) for k in range(3)]
    cube = np.array(list(product((0.0, 1.0), repeat=d)))
    keep = np.ones(cells.shape[0], bool)
    for ax in axes:
        nrm = np.linalg.norm(ax)
        if nrm < 1e-12:
            continue
        ax = ax / nrm
        pv = verts @ ax
        cv = (cube * h) @ ax
        base = (cells * h) @ ax
        # open overlap: boundary contact alone does not count
        keep &= (base + cv.min() < pv.max()) & (base + cv.max() > pv.min())
    return np.mod(cells[keep], 2**j)


def box_count(rects, j: int) -> int:
    """Number of half-open dyadic cells of side 2^-j meeting the union of the rectangles.

    ``rects`` may be TorusRectangles, a (corners, edges) pair of axis-aligned
    boxes, or any object with ``corners`` and ``edges`` arrays.
    """
    if j < 1:
        raise InvalidInputError("j must be >= 1")
    if j > MAX_J:
        raise ResolutionTooFineError(f"j={j} is finer than float64 coordinates resolve")
    c, e, rotated = _as_boxes(rects)
    d = c.shape[1] if c.size else rotated[0].d
    L = 2**j
    if j * d <= 62 and L**d <= DENSE_BUDGET and not rotated:
        occ = np.zeros((L + 1,) * d, np.int64)
        lo, hi = _aligned_ranges(c, e, j)
        cnt = hi - lo + 1
        lo0 = np.mod(lo, L)
        hi0 = lo0 + cnt - 1
        pieces = []
        for ax in range(d):
            split = hi0[:, ax] >= L
            p1 = (lo0[:, ax], np.minimum(hi0[:, ax], L - 1))
            p2 = (np.where(split, 0, 1), np.where(split, hi0[:, ax] - L, 0))
            pieces.append((p1, p2))
        for choice in product((0, 1), repeat=d):
            los = [pieces[ax][choice[ax]][0] for ax in range(d)]
            his = [pieces[ax][choice[ax]][1] for ax in range(d)]
            keep = np.all([h >= l for l, h in zip(los, his)], axis=0)
            if not keep.any():
                continue
            for vert in product((0, 1), repeat=d):
                idx = tuple((his[ax][keep] + 1) if vert[ax] else los[ax][keep] for ax in range(d))
                np.add.at(occ, idx, (-1) ** sum(vert))
        for ax in range(d):
            occ = np.cumsum(occ, axis=ax)
        return int(np.count_nonzero(occ[(slice(0, L),) * d]))
    parts = []
    if c.size:
        for lo in range(0, c.shape[0], 1 << 16):
            parts.append(_cells_aligned(c[lo : lo + (1 << 16)], e[lo : lo + (1 << 16)], j))
    for r in rotated:
        parts.append(_rotated_cells(r, j))
    cells = np.concatenate(parts)
    if j * d <= 62:
        flat = np.zeros(cells.shape[0], np.int64)
        for ax in range(d):
            flat = flat * L + cells[:, ax]
        return int(np.unique(flat).size)
    return int(np.unique(cells, axis=0).shape[0])


@dataclass
class BoxCountSeries:
    j: np.ndarray
    counts: np.ndarray
    d: int

    def __post_init__(self):
        self.j = np.asarray(self.j, dtype=np.int64)
        self.counts = np.asarray(self.counts, dtype=np.int64)

    def check(self) -> list[str]:
        """Structural invariants; returns a list of violations."""
        out = []
        if np.any(np.diff(self.counts) < 0):
            out.append("counts decrease")
        if np.any(self.counts > 2.0 ** (self.j * self.d)):
            out.append("count exceeds cell total")
        consecutive = np.diff(self.j) == 1
        if np.any(self.counts[1:][consecutive] > 2**self.d * self.counts[:-1][consecutive]):
            out.append("refinement more than 2^d per cell")
        return out

    def rows(self):
        return list(zip(self.j.tolist(), self.counts.tolist()))


def box_count_series(rects, js: Iterable[int], d: int | None = None) -> BoxCountSeries:
    js = list(js)
    counts = [box_count(rects, j) for j in js]
    if d is None:
        c, _, rot = _as_boxes(rects)
        d = c.shape[1] if c.size else rot[0].d
    return BoxCountSeries(js, counts, d)


@dataclass
class DimReport:
    slope: float
    j_min: int
    j_max: int
    residual: float
    target: float | None = None
    verdict: str = ""

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "j_min": self.j_min,
            "j_max": self.j_max,
            "residual": self.residual,
            "target": self.target,
            "verdict": self.verdict,
        }


def box_dim_fit(series: BoxCountSeries, j_range: tuple[int, int] | None = None, target: float | None = None, tol: float = 0.15) -> DimReport:
    """Least-squares slope of log2 N_j against j over ``j_range`` (inclusive)."""
    j, n = series.j, series.counts
    if j_range is not None:
        sel = (j >= j_range[0]) & (j <= j_range[1])
        j, n = j[sel], n[sel]
    if j.size < 3:
        raise InvalidInputError("need at least 3 resolutions in the fit range")
    y = np.log2(n.astype(np.float64))
    if np.all(y == y[0]):
        warnings.warn("constant box counts; slope set to 0", stacklevel=2)
        slope, resid = 0.0, 0.0
    else:
        A = np.vstack([j, np.ones_like(j)]).T.astype(np.float64)
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        slope = float(coef[0])
        resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    slope = min(max(slope, 0.0), float(series.d))
    verdict = ""
    if target is not None:
        verdict = "consistent" if abs(slope - target) <= tol else "inconsistent"
    return DimReport(slope, int(j[0]), int(j[-1]), resid, target, verdict)


# ---------------------------------------------------------------------------
# covering sums


def _settled_from(shape: ShapeSequence) -> int:
    """Index after which edges are ordered by exponent (power laws)."""
    n0 = 1
    c, a = shape.scales, shape.exponents
    for i in range(shape.d):
        for k in range(shape.d):
            if a[k] > a[i] and c[k] > c[i]:
                n0 = max(n0, math.ceil((c[k] / c[i]) ** (1.0 / (a[k] - a[i]))))
    return n0


def tail_cover_sum(shape: ShapeSequence, s: float, N: int, n_max: int = 10**6) -> float:
    """sum_{n >= N} 2^(m-1) d^(s/2) Phi^s(g_n), the Hausdorff pre-measure bound.

    Terms up to ``n_max`` are summed exactly; for power laws the rest is
    bounded by the integral of C x^-beta(s). Returns inf when beta(s) <= 1.
    Explicit sequences contribute only their available terms.
    """
    d = shape.d
    if not 0 < s <= d:
        raise InvalidInputError(f"s must lie in (0, {d}]")
    if N < 1:
        raise InvalidInputError("N must be >= 1")
    m = math.ceil(s)
    factor = 2.0 ** (m - 1) * math.sqrt(d) ** s
    if shape.kind == "power":
        n_max = max(n_max, _settled_from(shape), N)
    else:
        n_max = min(n_max, shape.length)
    total = 0.0
    step = 1 << 20
    for lo in range(N, n_max + 1, step):
        idx = np.arange(lo, min(lo + step, n_max + 1))
        total += float(np.exp(log_phi_s(shape.alphas(idx), s)).sum())
    if shape.kind == "power":
        a = np.asarray(shape.exponents)
        order = np.lexsort((-np.asarray(shape.scales), a))
        beta = float(np.sum(a[order][: m - 1]) + (s - m + 1) * a[order][m - 1])
        if beta <= 1.0:
            return math.inf
        C = float(np.exp(log_phi_s(shape.alphas(n_max), s))) * n_max**beta
        total += C * n_max ** (1.0 - beta) / (beta - 1.0)
    return factor * total


# ---------------------------------------------------------------------------
# Monte-Carlo energies


@dataclass
class EnergyEstimate:
    """Mean of min(|X - Y|^-s, A) over i.i.d. pairs, with pooled variance."""

    s: float
    A: float
    n_samples: int
    mean: float
    m2: float  # sum of squared deviations

    @property
    def stderr(self) -> float:
        if self.n_samples < 2:
            return math.inf
        return math.sqrt(self.m2 / (self.n_samples - 1) / self.n_samples)

    def merge(self, other: "EnergyEstimate") -> "EnergyEstimate":
        if (self.s, self.A) != (other.s, other.A):
            raise InvalidInputError("cannot pool estimates of different energies")
        n = self.n_samples + other.n_samples
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n_samples / n
        m2 = self.m2 + other.m2 + delta**2 * self.n_samples * other.n_samples / n
        return EnergyEstimate(self.s, self.A, n, mean, m2)

    def row(self) -> tuple:
        return (self.s, self.A, self.mean, self.stderr, self.n_samples)


def truncated_kernel(x, y, s: float, A: float) -> np.ndarray:
    r = np.asarray(torus_distance(x, y))
    with np.errstate(divide="ignore"):
        k = np.where(r > 0, r ** (-s), np.inf)
    return np.minimum(k, A)


def energy_mc(
    sampler: Callable[[int, np.random.Generator], np.ndarray],
    s: float,
    A: float = 1e3,
    samples: int = 10**5,
    seed: int = 0,
    workers: int = 1,
    batch: int = 1 << 16,
) -> EnergyEstimate:
    """Truncated s-energy of the law of ``sampler`` on the torus.

    The budget is split over ``workers`` independent substreams whose partial
    estimates are pooled, so the result depends on ``workers`` but never on
    scheduling.
    """
    if s <= 0:
        raise InvalidInputError("s must be positive")
    if A < 1:
        raise InvalidInputError("truncation A must be >= 1")
    if samples < 2:
        raise InvalidInputError("need at least two samples")
    gens = substreams(seed, workers)
    share = [samples // workers + (w < samples % workers) for w in range(workers)]
    est = None
    for gen, count in zip(gens, share):
        done = 0
        while done < count:
            b = min(batch, count - done)
            k = truncated_kernel(sampler(b, gen), sampler(b, gen), s, A)
            part = EnergyEstimate(s, A, b, float(k.mean()), float(((k - k.mean()) ** 2).sum()))
            est = part if est is None else est.merge(part)
            done += b
    return est


def uniform_sampler(d: int):
    def draw(n, rng):
        return rng.random((n, d))

    return draw


@dataclass
class FalconerResult:
    s: float
    integral: float
    stderr: float
    phi: float
    product: float
    trunc_share: float

    @property
    def product_stderr(self) -> float:
        return self.stderr * self.phi

    @property
    def reliable(self) -> bool:
        return self.trunc_share <= 0.1

    def row(self) -> tuple:
        return (self.s, self.integral, self.phi, self.product, self.trunc_share)


def falconer_check(matrix, s: float, samples: int = 10**5, seed: int = 0, A: float = 1e6) -> FalconerResult:
    """Monte-Carlo integral of |T x|^-s over [0,1]^d and its product with Phi^s(T).

    The kernel is capped at A; ``trunc_share`` is the fraction of the estimate
    contributed by capped samples.
    """
    T = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    d = T.shape[0]
    if not 0 < s < d or float(s).is_integer():
        raise InvalidInputError("s must be non-integral in (0, d)")
    sv = jacobi_singular_values(T)
    if sv[-1] <= 1e-14:
        raise InvalidInputError("T must be injective")
    phi = float(np.exp(log_phi_s(sv, s)))
    rng = substreams(seed, 1)[0]
    x = rng.random((samples, d))
    r = np.linalg.norm(x @ T.T, axis=1)
    with np.errstate(divide="ignore"):
        val = np.where(r > 0, r ** (-s), np.inf)
    capped = val >= A
    val = np.minimum(val, A)
    integral = float(val.mean())
    stderr = float(val.std(ddof=1) / math.sqrt(samples))
    share = float(val[capped].sum() / val.sum())
    res = FalconerResult(s, integral, stderr, phi, integral * phi, share)
    if not res.reliable:
        log.warning("Falconer integral dominated by truncation (share %.3f)", share)
    return res


# ---------------------------------------------------------------------------
# ball-like sets


def mtp_transform(r, s: float, d: int):
    """Radius of the dilated ball B^s = B(x, r^(s/d))."""
    return np.power(r, s / d)


def ball_like_dimension(rho: ShapeSequence, d: int, window: tuple[int, int] | None = None) -> float:
    """min{t0, d} with t0 = inf{t : sum rho_n^t < inf} for ball-like covers of radii rho_n."""
    if d < 1:
        raise InvalidInputError("d must be positive")
    return min(scalar_exponent(rho, window), float(d))


# ---------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])


BOX_COLUMNS = ("j", "N_j")
ENERGY_COLUMNS = ("s", "A", "mean", "stderr", "n_samples")
FALCONER_COLUMNS = ("s", "integral", "phi", "product", "trunc_share")
