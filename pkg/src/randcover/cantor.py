"""Randomised Cantor subsets of the covering set.

Level k keeps N_k disjointly labelled copies of g_{n_k}. Each level-(k-1)
rectangle G owns a block of m_k consecutive cover indices; the indices whose
translation lands in the shrunk copy a_{k-1} G are its hits, and the first
M_k hits become children, each an isometric copy of g_{n_k} anchored at
xi_i inside G_i. The level fails (event Omega(k) does not occur) when some
parent collects too few hits.

All covers are axis-aligned, so rectangles are stored as corner/edge arrays
with an identity frame.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .errors import DegeneratePlanError, FeasibilityError, InvalidInputError
from .rng import XiStream, check_seed
from .singular import ShapeSequence, f_hat
from .torus import assign_edges, box_contains

log = logging.getLogger(__name__)

INDEX_CEILING = 2**63
CHUNK = 1 << 20
CONTAIN_TOL = 1e-12


# ---------------------------------------------------------------------------
# shrink ratios


@dataclass(frozen=True)
class ShrinkSequence:
    """a_0 = 1/2 and a_l = 1 - 2^-(l+1) unless explicit values are given."""

    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.values is None:
            return
        vals = tuple(float(v) for v in self.values)
        if not all(0.5 < v < 1.0 for v in vals):
            raise InvalidInputError("a_l must lie in (1/2, 1) for l >= 1")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise InvalidInputError("a_l must be strictly increasing")
        object.__setattr__(self, "values", vals)

    def __call__(self, l: int) -> float:
        if l < 0:
            raise InvalidInputError("negative level")
        if l == 0:
            return 0.5
        if self.values is None:
            return 1.0 - 2.0 ** -(l + 1)
        if l > len(self.values):
            raise InvalidInputError(f"a_{l} not supplied")
        return self.values[l - 1]

    def inverse_product(self, upto: int = 64) -> float:
        """prod_{l=1}^{upto} 1/a_l (an upper bound for the infinite product when upto = 64)."""
        top = upto if self.values is None else min(upto, len(self.values))
        return float(np.prod([1.0 / self(l) for l in range(1, top + 1)]))


# ---------------------------------------------------------------------------
# level plan


def footprint_edges(shape: ShapeSequence, n) -> np.ndarray:
    """Per-axis edges of g_n clipped to 1 (an edge >= 1 wraps the whole axis); g_0 = T^d."""
    n_arr = np.asarray(n)
    out = np.ones(n_arr.shape + (shape.d,))
    pos = n_arr >= 1
    if np.any(pos):
        out[pos] = np.minimum(shape.edges(n_arr[pos]), 1.0)
    return out


@dataclass
class LevelPlan:
    """Deterministic level indices n_k and counts m_k, M_k, N_k (index 0 is level 0).

    ``binding[k]`` names the conditions that fixed n_k; ``cond8[k]`` records
    whether the exponent condition holds at level k (enforced only in strict mode).
    """

    shape: ShapeSequence
    s: float
    f: float
    mode: str
    a: ShrinkSequence
    n: list[int]
    m: list[int]
    M: list[int]
    N: list[int]
    binding: list[tuple[str, ...]]
    cond8: list[bool]
    growth: float = 4.0
    hits_floor: tuple[float, ...] = ()
    p_max: float | None = None

    @property
    def K(self) -> int:
        return len(self.n) - 1

    @property
    def d(self) -> int:
        return self.shape.d

    def vol(self, n: int) -> float:
        return float(np.prod(footprint_edges(self.shape, n)))

    def parent_volume(self, k: int) -> float:
        """L(g_{n_{k-1}})."""
        return self.vol(self.n[k - 1])

    def shrunk_volume(self, k: int) -> float:
        """v = L(a_{k-1} g_{n_{k-1}})."""
        return self.a(k - 1) ** self.d * self.parent_volume(k)

    def threshold(self, k: int) -> float:
        """Hits a parent must exceed for Omega(k)."""
        return 0.5 * self.shrunk_volume(k) * self.m[k]

    def expected_hits(self, k: int) -> float:
        return self.m[k] * self.shrunk_volume(k)

    def spectrum(self, k: int) -> np.ndarray:
        return np.sort(footprint_edges(self.shape, self.n[k]))[::-1]

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "f": self.f,
            "mode": self.mode,
            "n": self.n,
            "m": self.m,
            "M": self.M,
            "N": self.N,
            "binding": [list(b) for b in self.binding],
            "cond8": self.cond8,
            "p": [failure_bound(self, k) for k in range(1, self.K + 1)],
        }


def _smallest(pred, lo: int, hi: int = INDEX_CEILING) -> int | None:
    """Smallest n in [lo, hi) with a monotone predicate true, or None."""
    if pred(lo):
        return lo
    step = 1
    prev = lo
    while True:
        cand = lo + step
        if cand >= hi:
            if not pred(hi - 1):
                return None
            cand = hi - 1
            break
        if pred(cand):
            break
        prev = cand
        step *= 2
    lo_, hi_ = prev, cand  # pred(lo_) false, pred(hi_) true
    while hi_ - lo_ > 1:
        mid = (lo_ + hi_) // 2
        if pred(mid):
            hi_ = mid
        else:
            lo_ = mid
    return hi_


def _log_ceiling_bound(log_n: float, name: str, k: int, bounds: dict, overflow: list):
    if log_n >= math.log(INDEX_CEILING):
        overflow.append((k, name))
    else:
        bounds[name] = max(1, math.ceil(math.exp(log_n) - 1e-9))


def plan_levels(
    shape: ShapeSequence,
    s: float,
    K: int,
    mode: str = "relaxed",
    *,
    a: ShrinkSequence | None = None,
    growth: float = 4.0,
    hits_floor: float | Sequence[float] = 12.0,
    p_max: float | None = None,
) -> LevelPlan:
    """Pick the smallest admissible n_1 < ... < n_K.

    Condition labels used in reports: "7" diameter margin, "8" exponent
    growth, "9" log n_k >= n_{k-1}. strict enforces all of these and
    M_k >= 1. relaxed enforces "7", n_k >= growth * n_{k-1}, M_k >= 1 and a
    floor on the expected hits per parent m_k L(a_{k-1} g_{n_{k-1}}); a scalar
    floor applies from level 2, a sequence level by level. An optional
    p_max caps the failure bound. "8" is evaluated and reported only.
    """
    if K < 1:
        raise InvalidInputError("need at least one level")
    if mode not in ("strict", "relaxed"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    a = a or ShrinkSequence()
    f = f_hat(shape, s)
    if not f > 1.0:
        raise InvalidInputError(f"s = {s} is not below s0 (f(s) = {f:.4g} <= 1)")
    if np.ndim(hits_floor) == 0:
        # a scalar floor leaves level 1 alone
        floors = (0.0,) + (float(hits_floor),) * (K - 1)
    else:
        floors = tuple(float(h) for h in np.broadcast_to(np.asarray(hits_floor, dtype=float), (K,)))
    d = shape.d
    e8 = (3.0 + f) / (2.0 + 2.0 * f)
    cap = INDEX_CEILING if shape.length is None else shape.length + 1

    n, m, M, N = [0], [0], [1], [1]
    binding: list[tuple[str, ...]] = [()]
    cond8: list[bool] = [True]
    plan = LevelPlan(shape, s, f, mode, a, n, m, M, N, binding, cond8, growth, floors, p_max)

    def diam(x):
        return float(np.sqrt(np.sum(footprint_edges(shape, x) ** 2)))

    for k in range(1, K + 1):
        n_prev, N_prev = n[-1], N[-1]
        vol_prev = plan.vol(n_prev)
        ad_prev = float(np.min(footprint_edges(shape, n_prev)))
        a_prev = a(k - 1)
        v = a_prev**d * vol_prev
        bounds: dict[str, int] = {}
        overflow: list[tuple[int, str]] = []

        target = 0.5 * (1 - a_prev) * ad_prev
        b7 = _smallest(lambda x: diam(x) <= target, max(1, n_prev + 1), cap)
        if b7 is None:
            overflow.append((k, "7"))
        else:
            bounds["7"] = b7

        def M_of(x):
            mk = (x - n_prev) // N_prev
            return math.floor(0.5 * v * mk + 1e-12)

        # M_k >= 1  <=>  m_k >= ceil(2 / v)
        need_m = math.ceil(2.0 / v - 1e-12)
        _log_ceiling_bound(math.log(n_prev + N_prev * need_m), "M>=1", k, bounds, overflow)

        if mode == "strict":
            # exponent growth: x^(1-e8) >= 1/vol_prev
            _log_ceiling_bound(-math.log(vol_prev) / (1.0 - e8), "8", k, bounds, overflow)
            # log x >= n_prev
            if n_prev > 0:
                _log_ceiling_bound(float(n_prev), "9", k, bounds, overflow)
        else:
            if k >= 2:
                bounds["growth"] = math.ceil(growth * n_prev)
            if floors[k - 1] > 0:
                need = math.ceil(floors[k - 1] / v - 1e-9)
                _log_ceiling_bound(math.log(n_prev + N_prev * need), "hits", k, bounds, overflow)
                if p_max is not None:
                    extra = 8.0 * N_prev**2 * (1 - v) / (v * p_max)
                    _log_ceiling_bound(math.log(n_prev + extra), "p", k, bounds, overflow)

        if overflow:
            conds = list(overflow)
            if mode == "strict":
                # every later level needs log n_{k+1} >= n_k > 2^63 as well
                conds += [(kk, "9") for kk in range(k + 1, K + 1)]
            names = ", ".join(f"({c})" if c[0].isdigit() else c for _, c in overflow)
            raise FeasibilityError(
                f"level {k} needs n_{k} beyond 2^63 by condition {names}", k, conds
            )
        nk = max(bounds.values())
        nk = max(nk, n_prev + 1)
        if nk >= cap:
            raise FeasibilityError(f"level {k} needs n_{k} beyond the shape list", k, [(k, "list")])
        # floors in m_k can leave M_k one short of the bound; nudge upward
        while M_of(nk) < 1:
            nk += N_prev
        mk = (nk - n_prev) // N_prev
        Mk = M_of(nk)
        n.append(int(nk))
        m.append(int(mk))
        M.append(int(Mk))
        N.append(int(N_prev * Mk))
        binding.append(tuple(name for name, b in bounds.items() if b == nk) or ("M>=1",))
        cond8.append(bool(nk * vol_prev >= nk**e8 * (1 - 1e-12)))
    return plan


def chebyshev_bound(n: int, vol: float) -> float:
    """Bound on P(#hits <= n vol / 2) for n uniform points and a set of volume ``vol``."""
    if n < 1:
        raise InvalidInputError("n must be positive")
    if not 0.0 < vol < 1.0:
        raise InvalidInputError("vol must lie in (0, 1)")
    return 4.0 * (1.0 - vol) / (n * vol)


def failure_bound(plan: LevelPlan, k: int) -> float:
    """p_k = min(1, N_{k-1}^2 8(1-v) / ((n_k - n_{k-1}) v)), v = L(a_{k-1} g_{n_{k-1}})."""
    if not 1 <= k <= plan.K:
        raise InvalidInputError(f"level {k} not in plan")
    v = plan.shrunk_volume(k)
    # level 1 draws from g_0 = T^d: every translation is a hit
    if k == 1 or v >= 1.0:
        return 0.0
    p = plan.N[k - 1] ** 2 * 8.0 * (1.0 - v) / ((plan.n[k] - plan.n[k - 1]) * v)
    return min(1.0, p)


# ---------------------------------------------------------------------------
# levels


@dataclass
class CantorLevel:
    """Level k of the construction as parallel arrays in word order."""

    k: int
    words: np.ndarray  # (N_k, k) digits, 1-based
    corners: np.ndarray  # (N_k, d)
    edges: np.ndarray  # (N_k, d)
    cover_index: np.ndarray  # (N_k,) originating cover index i (0 at level 0)
    parent: np.ndarray  # (N_k,) row of the parent in the previous level

    @classmethod
    def root(cls, d: int) -> "CantorLevel":
        return cls(0, np.zeros((1, 0), np.int64), np.zeros((1, d)), np.ones((1, d)), np.zeros(1, np.int64), np.zeros(1, np.int64))

    @property
    def d(self) -> int:
        return self.corners.shape[1]

    def __len__(self) -> int:
        return self.corners.shape[0]

    @property
    def frames(self) -> np.ndarray:
        return np.broadcast_to(np.eye(self.d), (len(self), self.d, self.d))

    def word(self, row: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.words[row])

    def row_of(self, word: Sequence[int]) -> int:
        hit = np.nonzero(np.all(self.words == np.asarray(word), axis=1))[0]
        if hit.size != 1:
            raise KeyError(word)
        return int(hit[0])

    def contains(self, points, tol: float = CONTAIN_TOL) -> np.ndarray:
        """(n_points,) mask: point lies in some rectangle of the level."""
        pts = np.atleast_2d(points)
        out = np.zeros(pts.shape[0], bool)
        for lo in range(0, len(self), 4096):
            sl = slice(lo, lo + 4096)
            out |= box_contains(self.corners[None, sl], self.edges[None, sl], pts[:, None, :], tol).any(axis=1)
        return out

    def to_json(self) -> list[dict]:
        frame = np.eye(self.d).reshape(-1).tolist()
        return [
            {"word": self.word(r), "corner": self.corners[r].tolist(), "edges": self.edges[r].tolist(), "frame": frame}
            for r in range(len(self))
        ]


def shrunk_boxes(level: CantorLevel, a: float) -> tuple[np.ndarray, np.ndarray]:
    """Corners and edges of a * G for every rectangle G of ``level`` (same centres)."""
    return level.corners + 0.5 * (1.0 - a) * level.edges, a * level.edges


@dataclass
class LevelReport:
    k: int
    omega_ok: bool
    p_k: float
    hits: np.ndarray
    threshold: float

    def to_dict(self) -> dict:
        return {"k": self.k, "omega_ok": self.omega_ok, "p_k": self.p_k, "hits": self.hits.tolist()}


@dataclass
class BuildReport:
    seed: int
    entries: list[LevelReport] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return all(e.omega_ok for e in self.entries)

    @property
    def levels_built(self) -> int:
        return sum(e.omega_ok for e in self.entries)

    def to_json(self) -> list[dict]:
        return [e.to_dict() for e in self.entries]


def build_level(parent: CantorLevel, plan: LevelPlan, seed: int, chunk: int = CHUNK) -> tuple[CantorLevel | None, LevelReport]:
    """Build level k = parent.k + 1 from the xi block (n_{k-1}, n_{k-1} + N_{k-1} m_k].

    Indices past the last full block are never drawn; random access into the
    stream keeps every later cover aligned with its index.
    """
    k = parent.k + 1
    if k > plan.K:
        raise InvalidInputError(f"plan has only {plan.K} levels")
    if plan.M[k] < 1:
        raise DegeneratePlanError(f"M_{k} = 0: level {k} would be empty")
    if len(parent) != plan.N[k - 1]:
        raise InvalidInputError("parent size disagrees with the plan")
    shape, d = plan.shape, plan.d
    mk, Mk, n_prev = plan.m[k], plan.M[k], plan.n[k - 1]
    threshold = plan.threshold(k)
    n_par = len(parent)
    stream = XiStream(seed, d)
    start, stop = n_prev + 1, n_prev + n_par * mk + 1

    scorners, sedges = shrunk_boxes(parent, plan.a(k - 1))
    counts = np.zeros(n_par, np.int64)
    kept_idx, kept_xi = [], []
    for first, xi in stream.chunks(start, stop, chunk):
        idx = np.arange(first, first + xi.shape[0])
        pid = (idx - start) // mk
        if k == 1:
            hit = np.ones(idx.shape[0], bool)
        else:
            rel = xi - scorners[pid]
            np.mod(rel, 1.0, out=rel)
            hit = np.all(rel <= sedges[pid], axis=1)
        h_idx, h_pid = idx[hit], pid[hit]
        if h_idx.size == 0:
            continue
        # rank of each hit within its parent (pid is non-decreasing in idx)
        grp_start = np.r_[0, np.flatnonzero(np.diff(h_pid)) + 1]
        grp_len = np.diff(np.r_[grp_start, h_pid.size])
        rank = np.arange(h_pid.size) - np.repeat(grp_start, grp_len) + counts[h_pid]
        counts += np.bincount(h_pid, minlength=n_par)
        keep = rank < Mk
        kept_idx.append(h_idx[keep])
        kept_xi.append(xi[hit][keep])

    omega = bool(np.all(counts > threshold))
    report = LevelReport(k, omega, failure_bound(plan, k), counts, threshold)
    if not omega:
        return None, report

    idx = np.concatenate(kept_idx)
    xi = np.concatenate(kept_xi)
    par = (idx - start) // mk
    digit = np.arange(idx.size) - np.repeat(np.arange(n_par) * Mk, Mk) + 1
    words = np.concatenate([parent.words[par], digit[:, None]], axis=1)
    edges = assign_edges(footprint_edges(shape, idx), plan.spectrum(k))
    return CantorLevel(k, words, xi, edges, idx, par), report


def build(plan: LevelPlan, seed: int, levels: int | None = None) -> tuple[list[CantorLevel], BuildReport]:
    """Levels 0..K (or up to the first failure)."""
    seed = check_seed(seed)
    out = [CantorLevel.root(plan.d)]
    report = BuildReport(seed)
    for _ in range(levels or plan.K):
        nxt, entry = build_level(out[-1], plan, seed)
        report.entries.append(entry)
        if nxt is None:
            break
        out.append(nxt)
    return out, report


# ---------------------------------------------------------------------------
# verification


@dataclass
class Check:
    prop: str
    ok: bool
    violations: list[str] = field(default_factory=list)


def verify_level(child: CantorLevel, parent: CantorLevel, plan: LevelPlan, tol: float = CONTAIN_TOL) -> list[Check]:
    """Structural checks for one level, labelled "10" to "14".

    "10" count bounds, "11" nesting, "12" word tree, "13" edge spectrum,
    "14" inside the originating cover.
    """
    k = child.k
    d = plan.d
    checks = []
    vol = plan.parent_volume(k)
    span = plan.n[k] - plan.n[k - 1]
    Nk = len(child)
    lo = 0.125 * plan.a(k - 1) ** d * span * vol
    hi = span * vol
    ok10 = Nk == plan.N[k] and lo <= Nk <= hi
    checks.append(Check("10", ok10, [] if ok10 else [f"N_{k}={Nk}, plan {plan.N[k]}, bounds [{lo:.4g}, {hi:.4g}]"]))

    # nesting: all 2^d vertices of each child inside its parent
    bad = []
    pc, pe = parent.corners[child.parent], parent.edges[child.parent]
    for vert in product((0.0, 1.0), repeat=d):
        v = child.corners + np.asarray(vert) * child.edges
        inside = box_contains(pc, pe, v, tol)
        bad.extend(np.flatnonzero(~inside).tolist())
    bad = sorted(set(bad))
    checks.append(Check("11", not bad, [f"word {child.word(r)} leaves its parent" for r in bad[:20]]))

    # word tree: exactly M_k children per parent, words extend the parent word
    per = np.bincount(child.parent, minlength=len(parent))
    wrong = np.flatnonzero(per != plan.M[k])
    msgs = [f"parent {parent.word(r)} has {per[r]} children" for r in wrong[:20]]
    prefix_bad = np.flatnonzero(np.any(child.words[:, :-1] != parent.words[child.parent], axis=1))
    msgs += [f"word {child.word(r)} does not extend its parent" for r in prefix_bad[:20]]
    digits_bad = np.flatnonzero((child.words[:, -1] < 1) | (child.words[:, -1] > plan.M[k]))
    msgs += [f"word {child.word(r)} digit out of range" for r in digits_bad[:20]]
    checks.append(Check("12", not msgs, msgs))

    # spectrum: edge multiset equals alpha(n_k)
    spec = plan.spectrum(k)
    dev = np.abs(np.sort(child.edges, axis=1)[:, ::-1] - spec).max(axis=1)
    bad13 = np.flatnonzero(dev > 1e-12)
    checks.append(Check("13", bad13.size == 0, [f"word {child.word(r)} edges {child.edges[r]}" for r in bad13[:20]]))

    # cover membership: child inside G_i for its cover index i in (n_{k-1}, n_k]
    idx = child.cover_index
    in_range = (idx > plan.n[k - 1]) & (idx <= plan.n[k])
    bad14 = set(np.flatnonzero(~in_range).tolist())
    ok_rows = np.flatnonzero(in_range)
    if ok_rows.size:
        g_edges = footprint_edges(plan.shape, idx[ok_rows])
        dom = np.all(np.sort(child.edges[ok_rows], axis=1) <= np.sort(g_edges, axis=1) + tol, axis=1)
        bad14 |= set(ok_rows[~dom].tolist())
    checks.append(Check("14", not bad14, [f"word {child.word(r)} not inside G_{idx[r]}" for r in sorted(bad14)[:20]]))
    return checks


def verify_cover_membership(level: CantorLevel, plan: LevelPlan, seed: int, tol: float = CONTAIN_TOL) -> Check:
    """Cover membership against regenerated covers: every vertex of G'_i lies in G_i = g_i + xi_i."""
    stream = XiStream(seed, plan.d)
    idx = level.cover_index
    xi = np.stack([stream.xi(int(i)) for i in idx]) if len(idx) <= 2048 else _xi_rows(stream, idx)
    g_edges = footprint_edges(plan.shape, idx)
    bad = set()
    for vert in product((0.0, 1.0), repeat=plan.d):
        v = level.corners + np.asarray(vert) * level.edges
        bad |= set(np.flatnonzero(~box_contains(xi, g_edges, v, tol)).tolist())
    bad |= set(np.flatnonzero((idx <= plan.n[level.k - 1]) | (idx > plan.n[level.k])).tolist())
    return Check("14", not bad, [f"word {level.word(r)} not inside G_{idx[r]}" for r in sorted(bad)[:20]])


def _xi_rows(stream: XiStream, idx: np.ndarray) -> np.ndarray:
    order = np.argsort(idx)
    out = np.empty((idx.size, stream.d))
    lo, hi = int(idx.min()), int(idx.max()) + 1
    for first, blk in stream.chunks(lo, hi):
        sel = (idx[order] >= first) & (idx[order] < first + blk.shape[0])
        out[order[sel]] = blk[idx[order][sel] - first]
    return out


def verify_build(levels: list[CantorLevel], plan: LevelPlan, seed: int) -> list[Check]:
    checks = []
    for parent, child in zip(levels, levels[1:]):
        for c in verify_level(child, parent, plan):
            if c.prop == "14":
                c2 = verify_cover_membership(child, plan, seed)
                c = Check("14", c.ok and c2.ok, c.violations + c2.violations)
            c.violations = [f"level {child.k}: {v}" for v in c.violations]
            checks.append(Check(f"{c.prop}@{child.k}", c.ok, c.violations))
    return checks


# ---------------------------------------------------------------------------
# measures and repeated builds


def sample_mu(level: CantorLevel, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draws from mu_l: a uniform rectangle of the level, then a uniform point in it."""
    rows = rng.integers(0, len(level), size)
    u = rng.random((size, level.d))
    return np.mod(level.corners[rows] + u * level.edges[rows], 1.0)


@dataclass
class SeedSummary:
    plan: LevelPlan
    seeds: list[int]
    reached: np.ndarray  # (K,) builds that attempted level k
    failed: np.ndarray  # (K,) builds where Omega(k) failed

    def failure_rate(self, k: int) -> float:
        """Empirical P(Omega(k) fails | Omega(1..k-1))."""
        r = self.reached[k - 1]
        return float(self.failed[k - 1]) / r if r else 0.0

    def q_hat(self, k: int) -> float:
        return 1.0 - self.failure_rate(k)


def run_seeds(plan: LevelPlan, seeds: Sequence[int], verify: bool = False, on_build=None) -> SeedSummary:
    """Build once per seed; tallies Omega(k) failures and optionally verifies successes."""
    K = plan.K
    reached = np.zeros(K, np.int64)
    failed = np.zeros(K, np.int64)
    for seed in seeds:
        levels, report = build(plan, seed)
        for e in report.entries:
            reached[e.k - 1] += 1
            if not e.omega_ok:
                failed[e.k - 1] += 1
        if on_build is not None:
            on_build(seed, levels, report)
        if verify and report.success:
            bad = [c for c in verify_build(levels, plan, seed) if not c.ok]
            if bad:
                raise AssertionError(f"seed {seed}: {bad[0].prop}: {bad[0].violations[:3]}")
    return SeedSummary(plan, list(seeds), reached, failed)


def dump_level(level: CantorLevel, path) -> None:
    with open(path, "w") as fh:
        json.dump(level.to_json(), fh)
