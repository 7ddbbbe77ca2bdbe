"""Command-line driver: ``randcover <command> [--preset NAME | --config FILE] ...``.

Data goes to files under ``--out`` (and short tables to stdout); progress
goes to stderr. Exit status: 0 success, 1 internal error or failed property
check, 2 infeasible or invalid experiment.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import cantor, cover, estimators
from .config import VERSION, ExperimentConfig, apply_policy, RunManifest, preset, preset_names
from .errors import FeasibilityError, RandCoverError
from .singular import ShapeSequence, s0_analytic, s0_numeric

log = logging.getLogger("randcover")


class Run:
    """Output directory bookkeeping for one command."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.outputs: list[str] = []
        self.t0 = time.perf_counter()

    def path(self, name: str) -> Path:
        self.outputs.append(name)
        return self.dir / name

    def write_json(self, name: str, obj) -> None:
        with open(self.path(name), "w") as fh:
            json.dump(obj, fh, indent=1, sort_keys=True)
            fh.write("\n")

    def finish(self) -> None:
        m = RunManifest(self.cfg.hash(), VERSION, sorted(set(self.outputs)), time.perf_counter() - self.t0, self.cfg.to_dict())
        with open(self.dir / "manifest.json", "w") as fh:
            fh.write(m.to_json() + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_s0(cfg: ExperimentConfig, args) -> int:
    seq = cfg.shape_sequence()
    if seq.kind == "power" and not getattr(args, "numeric", False):
        rep = s0_analytic(seq)
    else:
        rep = s0_numeric(seq, tol=getattr(args, "tol", 1e-3) or 1e-3)
    run = Run(cfg)
    run.write_json("s0.json", rep.to_dict())
    print("s\tf(s)")
    for s, f in rep.f_values:
        print(f"{s:.6g}\t{f:.6g}")
    print(f"s0\t{rep.s0!r}")
    run.finish()
    return 0


def _lattice(count: int, d: int) -> np.ndarray:
    side = round(count ** (1.0 / d))
    g = (np.arange(side) + 0.5) / side
    return np.stack(np.meshgrid(*([g] * d), indexing="ij"), axis=-1).reshape(-1, d)


def cmd_cover(cfg: ExperimentConfig, args) -> int:
    seq = cfg.shape_sequence()
    p = cfg.params
    n_a, n_b = p.get("window", [1, 10**4])
    checkpoints = sorted(p.get("checkpoints", [n_b]))
    conf = cover.CoverConfig(seq, n_b, cfg.seed)
    rows = []
    if "points" in p:
        if n_a != 1:
            raise RandCoverError("explicit sample points need a window starting at 1")
        pts = _lattice(int(p["points"]), cfg.d)
        rows = cover.covering_number(conf, pts, checkpoints)
    else:
        j = cfg.budgets.grid_j
        grid = None
        lo = n_a
        for cp in checkpoints:
            part = cover.coverage_grid(conf, (lo, cp), j)
            grid = part if grid is None else grid.merge(part)
            rows.append(cover._stats(cp, grid.counts.reshape(-1)))
            log.info("N=%d covered fraction %.4f", cp, rows[-1].frac)
            lo = cp + 1
    run = Run(cfg)
    cover.write_stats_csv(rows, run.path("coverage.csv"))
    print("N\tc_min/logN\tc_max/logN\tfrac")
    for r in rows:
        lg = math.log(r.N) if r.N > 1 else float("nan")
        print(f"{r.N}\t{r.c_min / lg:.4f}\t{r.c_max / lg:.4f}\t{r.frac:.6f}")
    run.finish()
    return 0


def _plan(cfg: ExperimentConfig) -> cantor.LevelPlan:
    p = cfg.params
    kw = {}
    for key in ("hits_floor", "growth", "p_max"):
        if key in p:
            kw[key] = p[key]
    return cantor.plan_levels(cfg.shape_sequence(), cfg.resolve_s(), cfg.levels, cfg.mode, **kw)


def cmd_cantor(cfg: ExperimentConfig, args) -> int:
    run = Run(cfg)
    try:
        plan = _plan(cfg)
    except FeasibilityError as exc:
        run.write_json(
            "feasibility.json",
            {"level": exc.level, "conditions": [[k, c] for k, c in exc.conditions], "message": str(exc)},
        )
        run.finish()
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    run.write_json("plan.json", plan.to_dict())
    seeds = [cfg.seed + i for i in range(cfg.budgets.seeds)]
    failed_checks = []

    def on_build(seed, levels, report):
        if seed != cfg.seed:
            return
        run.write_json("report.json", report.to_json())
        for lev in levels[1:]:
            run.write_json(f"level_{lev.k}.json", lev.to_json())
        if report.success:
            checks = cantor.verify_build(levels, plan, seed)
            run.write_json("checks.json", [{"prop": c.prop, "ok": c.ok, "violations": c.violations} for c in checks])
            failed_checks.extend(c for c in checks if not c.ok)

    summary = cantor.run_seeds(plan, seeds, verify=len(seeds) > 1, on_build=on_build)
    run.write_json(
        "summary.json",
        [
            {
                "k": k,
                "p_k": cantor.failure_bound(plan, k),
                "reached": int(summary.reached[k - 1]),
                "failed": int(summary.failed[k - 1]),
                "failure_rate": summary.failure_rate(k),
            }
            for k in range(1, plan.K + 1)
        ],
    )
    print("k\tn_k\tN_k\tp_k\tfailure_rate")
    for k in range(1, plan.K + 1):
        print(f"{k}\t{plan.n[k]}\t{plan.N[k]}\t{cantor.failure_bound(plan, k):.4g}\t{summary.failure_rate(k):.4g}")
    run.finish()
    if failed_checks:
        for c in failed_checks:
            print(f"property {c.prop} failed: {c.violations[:3]}", file=sys.stderr)
        return 1
    return 0


def level_fit_range(level: cantor.CantorLevel) -> tuple[int, int]:
    """j from 1 to the finest dyadic scale strictly above the smallest edge (at least 3 points)."""
    j_hi = math.ceil(math.log2(1.0 / float(level.edges.min()))) - 1
    return 1, min(estimators.MAX_J, max(3, j_hi))


def first_success(plan: cantor.LevelPlan, seed: int, tries: int):
    for t in range(tries):
        levels, report = cantor.build(plan, seed + t)
        if report.success:
            return seed + t, levels
    raise RandCoverError(f"no successful build in {tries} seeds")


def cmd_dim(cfg: ExperimentConfig, args) -> int:
    run = Run(cfg)
    p = cfg.params
    seq = cfg.shape_sequence()
    result: dict = {}
    A = float(p.get("A", 1e3))
    if p.get("selftest"):
        est = estimators.energy_mc(estimators.uniform_sampler(cfg.d), cfg.resolve_s(), A=float(p.get("A", 1e12)), samples=cfg.budgets.mc_samples, seed=cfg.seed)
        estimators.write_csv(run.path("energy_uniform.csv"), estimators.ENERGY_COLUMNS, [est.row()])
        result["selftest"] = {"mean": est.mean, "stderr": est.stderr}
    if cfg.levels:
        plan = _plan(cfg)
        seed, levels = first_success(plan, cfg.seed, max(1, cfg.budgets.seeds))
        result["seed"] = seed
        reports = []
        for lev in levels[1:]:
            j_lo, j_hi = level_fit_range(lev)
            series = estimators.box_count_series(lev, range(j_lo, j_hi + 1))
            estimators.write_csv(run.path(f"box_level_{lev.k}.csv"), estimators.BOX_COLUMNS, series.rows())
            rep = estimators.box_dim_fit(series, target=plan.s)
            reports.append({"level": lev.k, **rep.to_dict()})
            log.info("level %d slope %.4f", lev.k, rep.slope)
        result["box"] = reports
        s_e = apply_policy(cfg.s_policy, cfg.s0()) if cfg.s_policy else plan.s
        rows = []
        for lev in levels[1:]:
            est = estimators.energy_mc(lambda n, g, L=lev: cantor.sample_mu(L, n, g), s_e, A=A, samples=cfg.budgets.mc_samples, seed=cfg.seed)
            rows.append(est.row())
        estimators.write_csv(run.path("energy.csv"), estimators.ENERGY_COLUMNS, rows)
        result["energy"] = [{"level": i + 1, "mean": r[2], "stderr": r[3]} for i, r in enumerate(rows)]
    if "tail_policy" in p:
        s_t = apply_policy(p["tail_policy"], cfg.s0())
        tails = [(int(N), estimators.tail_cover_sum(seq, min(s_t, cfg.d), int(N), n_max=max(int(N), 10**6))) for N in p.get("tail_N", [10**6])]
        estimators.write_csv(run.path("tail.csv"), ("N", "tail"), tails)
        result["tail"] = {"s": s_t, "values": [[n, v] for n, v in tails]}
    run.write_json("dim.json", result)
    print(json.dumps(result, sort_keys=True))
    run.finish()
    return 0


def cmd_shepp(cfg: ExperimentConfig, args) -> int:
    seq = cfg.shape_sequence()
    value, verdict = cover.shepp_partial_sum(seq, int(cfg.params.get("K", 10**6)))
    run = Run(cfg)
    run.write_json("shepp.json", {"value": value, "verdict": verdict, "K": int(cfg.params.get("K", 10**6))})
    print(f"S_K\t{value!r}\nverdict\t{verdict}")
    run.finish()
    return 0


def cmd_falconer(cfg: ExperimentConfig, args) -> int:
    p = cfg.params
    s = cfg.resolve_s()
    mats = [np.asarray(m, dtype=float) for m in p.get("matrices", [])]
    fam = p.get("diagonal_family")
    if fam:
        rng = np.random.default_rng(cfg.seed)
        mats += [np.diag(rng.uniform(fam["low"], fam["high"], cfg.d)) for _ in range(int(fam["count"]))]
    rows = [estimators.falconer_check(T, s, cfg.budgets.mc_samples, seed=cfg.seed + i) for i, T in enumerate(mats)]
    run = Run(cfg)
    estimators.write_csv(run.path("falconer.csv"), estimators.FALCONER_COLUMNS, [r.row() for r in rows])
    prods = [r.product for r in rows]
    print(f"maps\t{len(rows)}\nproduct_min\t{min(prods)!r}\nproduct_max\t{max(prods)!r}")
    run.finish()
    return 0


COMMANDS = {
    "s0": cmd_s0,
    "cover": cmd_cover,
    "cantor": cmd_cantor,
    "dim": cmd_dim,
    "shepp": cmd_shepp,
    "falconer": cmd_falconer,
}


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="64-bit seed (overrides the config)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--preset", help=f"built-in config: {', '.join(preset_names())}")
    common.add_argument("--config", help="JSON config or manifest file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="randcover", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    s0 = sub.add_parser("s0", parents=[common], help="convergence exponent of a shape sequence")
    s0.add_argument("--d", type=int)
    s0.add_argument("--power-law", help="comma-separated exponents a_1,...,a_d")
    s0.add_argument("--scales", help="comma-separated scales c_1,...,c_d")
    s0.add_argument("--numeric", action="store_true", help="bisection even for power laws")
    s0.add_argument("--tol", type=float, default=1e-3)
    for name in ("cover", "cantor", "dim", "shepp", "falconer"):
        sub.add_parser(name, parents=[common], help=f"{name} experiment")
    return parser


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def resolve_config(args) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.load(args.config)
    elif args.preset:
        cfg = preset(args.preset)
    elif args.command == "s0" and args.power_law:
        exps = _floats(args.power_law)
        d = args.d or len(exps)
        if len(exps) != d:
            raise RandCoverError(f"--power-law gives {len(exps)} exponents for d={d}")
        scales = _floats(args.scales) if args.scales else [1.0] * d
        if args.seed is None:
            args.seed = 0  # s0 draws no random numbers
        cfg = ExperimentConfig("s0", d, {"kind": "power", "scales": scales, "exponents": exps}, seed=args.seed)
    else:
        raise RandCoverError("give --preset, --config or (for s0) --power-law")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out:
        cfg.out = args.out
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except (RandCoverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - reported as internal error
        log.exception("internal error: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
