"""Singular values, the singular value function and the convergence exponent s0.

For a contraction with singular values a_1 >= ... >= a_d and 0 < s <= d,

    Phi^s = a_1 ... a_{m-1} * a_m^(s - m + 1),    m = ceil(s).

The exponent s0 of a sequence of shapes is the infimum of s with
sum_n Phi^s(n) < inf, taken to be d when even the volume series diverges.
The numeric solver works with the index function

    f(s) = limsup_n log n / (-log Phi^s(n)),

which is > 1 below s0 and < 1 above it, so bisection on ``f(s) >= 1``
locates s0 without summing slowly divergent series.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    InvalidInputError,
    NotContractiveError,
    NotContractiveYetError,
    NotInjectiveError,
    UnsupportedError,
    WindowTooSmallError,
)

JACOBI_TOL = 1e-12
INJECTIVE_FLOOR = 1e-14
GEOMETRIC_RATIO = 1.1
MIN_LIST_TERMS = 10_000


# ---------------------------------------------------------------------------
# Jacobi SVD


def jacobi_singular_values(matrices, tol: float = JACOBI_TOL, max_sweeps: int = 64) -> np.ndarray:
    """Singular values by one-sided cyclic Jacobi, batched over a leading axis.

    Plane rotations of column pairs diagonalise M^T M implicitly; iteration
    stops once every normalised off-diagonal entry of M^T M is <= ``tol``.
    Returns values sorted descending with shape (..., d).
    """
    a = np.array(matrices, dtype=np.float64)
    single = a.ndim == 2
    if single:
        a = a[None]
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise InvalidInputError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("non-finite matrix entry")
    d = a.shape[-1]
    for _ in range(max_sweeps):
        worst = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                ap = a[:, :, p]
                aq = a[:, :, q]
                alpha = np.einsum("bi,bi->b", ap, ap)
                beta = np.einsum("bi,bi->b", aq, aq)
                gamma = np.einsum("bi,bi->b", ap, aq)
                scale = np.sqrt(alpha * beta)
                with np.errstate(divide="ignore", invalid="ignore"):
                    off = np.where(scale > 0, np.abs(gamma) / scale, 0.0)
                worst = max(worst, float(off.max(initial=0.0)))
                rot = off > tol
                if not rot.any():
                    continue
                g = np.where(rot, gamma, 1.0)
                zeta = (beta - alpha) / (2.0 * g)
                t = np.sign(zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
                t = np.where(zeta == 0, 1.0, t)
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_p = c[:, None] * ap - s[:, None] * aq
                new_q = s[:, None] * ap + c[:, None] * aq
                a[:, :, p] = new_p
                a[:, :, q] = new_q
        if worst <= tol:
            break
    sv = np.sort(np.sqrt(np.einsum("bij,bij->bj", a, a)), axis=-1)[:, ::-1]
    return sv[0] if single else sv


@dataclass(frozen=True)
class SingularSpectrum:
    alphas: tuple[float, ...]

    def __post_init__(self):
        al = tuple(float(x) for x in self.alphas)
        if not al:
            raise InvalidInputError("empty spectrum")
        if any(b > a for a, b in zip(al, al[1:])):
            raise InvalidInputError(f"spectrum must be descending: {al}")
        if not (0.0 < al[-1] and al[0] < 1.0):
            raise InvalidInputError(f"spectrum must lie in (0, 1): {al}")
        object.__setattr__(self, "alphas", al)

    @property
    def d(self) -> int:
        return len(self.alphas)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.alphas, dtype=dtype)


def singular_values(matrix) -> SingularSpectrum:
    sv = jacobi_singular_values(matrix)
    if sv[-1] <= INJECTIVE_FLOOR:
        raise NotInjectiveError(f"smallest singular value {sv[-1]:.3g}")
    if sv[0] >= 1.0:
        raise NotContractiveError(f"largest singular value {sv[0]:.6g} >= 1")
    return SingularSpectrum(tuple(sv))


# ---------------------------------------------------------------------------
# singular value function


def _check_s(s: float, d: int) -> int:
    if not 0.0 < s <= d:
        raise InvalidInputError(f"s must lie in (0, {d}], got {s}")
    return math.ceil(s)


def log_phi_s(alphas, s: float) -> np.ndarray | float:
    """log Phi^s for descending spectra; vectorised over leading axes."""
    a = np.asarray(alphas, dtype=np.float64)
    m = _check_s(s, a.shape[-1])
    la = np.log(a)
    out = la[..., : m - 1].sum(axis=-1) + (s - (m - 1)) * la[..., m - 1]
    return float(out) if np.ndim(out) == 0 else out


def phi_s(spec, s: float) -> np.ndarray | float:
    """Singular value function Phi^s of a spectrum (or array of spectra)."""
    a = np.asarray(spec, dtype=np.float64)
    m = _check_s(s, a.shape[-1])
    out = np.prod(a[..., : m - 1], axis=-1) * a[..., m - 1] ** (s - (m - 1))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# shape sequences


@dataclass(frozen=True, eq=False)
class ShapeSequence:
    """Sequence of rectangle shapes g_1, g_2, ... given by their edge lengths.

    ``kind`` is "power" (edge_i(n) = scales_i * n^-exponents_i), "list"
    (explicit edges, row n-1 for index n) or "matrix" (edges are the singular
    values of the given matrices). Edges are kept per axis; ``alphas`` returns
    them sorted descending.
    """

    kind: str
    d: int
    scales: tuple[float, ...] | None = None
    exponents: tuple[float, ...] | None = None
    values: np.ndarray | None = field(default=None, repr=False)
    force: bool = False

    def __post_init__(self):
        if self.kind == "power":
            if self.exponents is None or len(self.exponents) != self.d:
                raise InvalidInputError("power law needs one exponent per axis")
            scales = self.scales if self.scales is not None else (1.0,) * self.d
            if len(scales) != self.d:
                raise InvalidInputError("power law needs one scale per axis")
            if min(self.exponents) <= 0 or min(scales) <= 0:
                raise InvalidInputError("scales and exponents must be positive")
            object.__setattr__(self, "scales", tuple(float(c) for c in scales))
            object.__setattr__(self, "exponents", tuple(float(a) for a in self.exponents))
        elif self.kind in ("list", "matrix"):
            vals = np.asarray(self.values, dtype=np.float64)
            if vals.ndim != 2 or vals.shape[1] != self.d or vals.shape[0] < 1:
                raise InvalidInputError(f"values must have shape (N, {self.d})")
            if not np.all(vals > 0):
                raise InvalidInputError("edge lengths must be positive")
            vals.setflags(write=False)
            object.__setattr__(self, "values", vals)
            self.check_monotone()
        else:
            raise InvalidInputError(f"unknown shape kind {self.kind!r}")

    # constructors

    @classmethod
    def power_law(cls, exponents: Sequence[float], scales: Sequence[float] | None = None) -> "ShapeSequence":
        exponents = tuple(exponents)
        return cls("power", len(exponents), tuple(scales) if scales is not None else None, exponents)

    @classmethod
    def from_values(cls, values, force: bool = False) -> "ShapeSequence":
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim == 1:
            vals = vals[:, None]
        return cls("list", vals.shape[1], values=vals, force=force)

    @classmethod
    def from_matrices(cls, matrices, force: bool = False) -> "ShapeSequence":
        mats = np.asarray(matrices, dtype=np.float64)
        sv = jacobi_singular_values(mats)
        if sv.ndim == 1:
            sv = sv[None]
        if np.any(sv[:, -1] <= INJECTIVE_FLOOR):
            raise NotInjectiveError("a matrix in the sequence is singular")
        return cls("matrix", mats.shape[-1], values=sv, force=force)

    # evaluation

    @property
    def length(self) -> int | None:
        return None if self.kind == "power" else int(self.values.shape[0])

    def edges(self, n) -> np.ndarray:
        """Per-axis edge lengths for index n (scalar or array), shape (..., d)."""
        n_arr = np.asarray(n)
        if np.any(n_arr < 1):
            raise InvalidInputError("indices start at 1")
        if self.kind == "power":
            nf = n_arr.astype(np.float64)[..., None]
            return np.asarray(self.scales) * nf ** (-np.asarray(self.exponents))
        if np.any(n_arr > self.values.shape[0]):
            raise InvalidInputError(f"index beyond explicit list of length {self.values.shape[0]}")
        return self.values[n_arr.astype(np.int64) - 1]

    def alphas(self, n) -> np.ndarray:
        return -np.sort(-self.edges(n), axis=-1)

    def volume(self, n) -> np.ndarray | float:
        v = np.prod(self.edges(n), axis=-1)
        return float(v) if np.ndim(v) == 0 else v

    def diam(self, n) -> np.ndarray | float:
        e = self.edges(n)
        v = np.sqrt(np.sum(e * e, axis=-1))
        return float(v) if np.ndim(v) == 0 else v

    def first_contractive(self) -> int:
        """Smallest n with every edge below 1 (for power laws; lists scan)."""
        if self.kind == "power":
            n = 1
            for c, a in zip(self.scales, self.exponents):
                if c >= 1:
                    n = max(n, math.floor(c ** (1 / a)) + 1)
            return n
        ok = np.all(self.values < 1.0, axis=1)
        bad = np.nonzero(~ok)[0]
        return int(bad[-1]) + 2 if bad.size else 1

    def check_monotone(self) -> None:
        """Edges must be non-increasing; for explicit lists checked on a geometric subsample."""
        if self.kind == "power":
            return
        idx = geometric_indices(1, self.values.shape[0])
        sample = self.values[idx - 1]
        if np.any(np.diff(sample, axis=0) > 0):
            msg = "edge sequence is not non-increasing on the sampled prefix"
            if not self.force:
                raise InvalidInputError(msg + " (pass force=True to explore anyway)")
            warnings.warn(msg + "; dimension conclusions do not apply", stacklevel=3)

    def to_dict(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "scales": list(self.scales), "exponents": list(self.exponents)}
        return {"kind": "list", "values": self.values.tolist()}


def geometric_indices(n_min: int, n_max: int, ratio: float = GEOMETRIC_RATIO) -> np.ndarray:
    """Integers from n_min to n_max (both included) spaced by ``ratio``."""
    if n_min < 1 or n_max < n_min:
        raise InvalidInputError(f"bad window [{n_min}, {n_max}]")
    count = int(math.floor(math.log(n_max / n_min) / math.log(ratio))) + 1
    pts = np.floor(n_min * ratio ** np.arange(count) + 1e-9).astype(np.int64)
    pts = np.unique(np.concatenate([pts, [n_min, n_max]]))
    return pts[(pts >= n_min) & (pts <= n_max)]


# ---------------------------------------------------------------------------
# index function f and the exponent s0


@dataclass
class ExponentReport:
    s0: float
    method: str
    f_values: list[tuple[float, float]]
    window: tuple[int, int] | None
    forced: bool = False

    def to_dict(self) -> dict:
        return {
            "s0": self.s0,
            "method": self.method,
            "f_values": [list(p) for p in self.f_values],
            "window": list(self.window) if self.window else None,
            "forced": self.forced,
        }


def _power_rate(exponents: Sequence[float], s: float) -> float:
    """beta(s) with Phi^s(n) ~ C n^-beta(s) for a power law."""
    a = sorted(exponents)
    m = math.ceil(s)
    return sum(a[: m - 1]) + (s - (m - 1)) * a[m - 1]


def default_window(seq: ShapeSequence) -> tuple[int, int]:
    if seq.kind == "power":
        return max(1000, seq.first_contractive()), 10**12
    return max(2, seq.length // 100), seq.length


def f_hat(seq: ShapeSequence, s: float, window: tuple[int, int] | None = None, analytic: bool | None = None) -> float:
    """Estimate f(s) = limsup log n / (-log Phi^s(n)).

    Power laws return the exact limit 1/beta(s) unless ``analytic=False``;
    otherwise the limsup is the maximum over a geometric subsample of the window.
    """
    _check_s(s, seq.d)
    if analytic is None:
        analytic = seq.kind == "power"
    if analytic:
        if seq.kind != "power":
            raise UnsupportedError("analytic f(s) needs a power law")
        return 1.0 / _power_rate(seq.exponents, s)
    n_min, n_max = window if window is not None else default_window(seq)
    if n_min < 2:
        raise InvalidInputError("window must start at N_min >= 2")
    ns = geometric_indices(n_min, n_max)
    lp = log_phi_s(seq.alphas(ns), s)
    if np.any(lp >= 0):
        bad = int(ns[np.argmax(lp >= 0)])
        raise NotContractiveYetError(f"Phi^{s} >= 1 at n={bad}; raise N_min")
    return float(np.max(np.log(ns) / -lp))


def s0_analytic(family: ShapeSequence) -> ExponentReport:
    if family.kind != "power":
        raise UnsupportedError("analytic exponent needs a power-law family")
    a = sorted(family.exponents)
    d = family.d
    s0 = float(d)
    acc = 0.0
    for m in range(1, d + 1):
        if acc + a[m - 1] >= 1.0:
            s0 = (m - 1) + (1.0 - acc) / a[m - 1]
            break
        acc += a[m - 1]
    samples = [(d * k / 8, 1.0 / _power_rate(a, d * k / 8)) for k in range(1, 9)]
    return ExponentReport(s0, "analytic", samples, None)


def s0_numeric(seq: ShapeSequence, tol: float = 1e-3, window: tuple[int, int] | None = None) -> ExponentReport:
    """Bisection on f_hat(s) >= 1 using windowed (never analytic) estimates."""
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    if seq.kind != "power" and seq.length < MIN_LIST_TERMS:
        raise InvalidInputError(f"explicit sequences need at least {MIN_LIST_TERMS} terms")
    window = tuple(window) if window is not None else default_window(seq)
    d = seq.d

    def f(s):
        return f_hat(seq, s, window, analytic=False)

    grid = [d * k / 8 for k in range(1, 9)]
    samples = [(s, f(s)) for s in grid]
    vals = [v for _, v in samples]
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise WindowTooSmallError(f"f_hat not decreasing on {samples}")
    forced = bool(seq.force)
    if vals[-1] >= 1.0:
        return ExponentReport(float(d), "bisection", samples, window, forced)
    lo, hi = 0.0, float(d)
    # tighten using the grid before bisecting
    for s, v in samples:
        if v >= 1.0:
            lo = s
        else:
            hi = s
            break
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        v = f(mid)
        samples.append((mid, v))
        if v >= 1.0:
            lo = mid
        else:
            hi = mid
    return ExponentReport(0.5 * (lo + hi), "bisection", sorted(samples), window, forced)


def scalar_exponent(seq: ShapeSequence, window: tuple[int, int] | None = None) -> float:
    """inf{t >= 0 : sum rho_n^t < inf} for a one-parameter sequence, not clamped.

    Equals limsup log n / (-log rho_n) for decreasing rho_n.
    """
    if seq.d != 1:
        raise InvalidInputError("scalar exponent needs a one-parameter sequence")
    if seq.kind == "power":
        return 1.0 / seq.exponents[0]
    n_min, n_max = window if window is not None else default_window(seq)
    ns = geometric_indices(max(2, n_min), n_max)
    lr = np.log(seq.alphas(ns)[:, 0])
    if np.any(lr >= 0):
        raise NotContractiveYetError("rho_n >= 1 inside window")
    return float(np.max(np.log(ns) / -lr))
