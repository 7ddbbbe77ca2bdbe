"""Decay of the covering sum sum_{n>=N} 2^(m-1) d^(s/2) Phi^s(g_n) at s = s0 + delta.

    python3 scripts/tail_decay.py [--delta 0.1]

For a power law the tail behaves like C N^(1 - beta) / (beta - 1), so the N
at which it falls below a threshold is also reported (analytic estimate).
"""
import argparse
import math

from randcover import estimators
from randcover.config import preset, preset_names


def main(argv=None) -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--threshold", type=float, default=1e-2)
    args = ap.parse_args(argv)
    print("preset\ts\ttail(1e3)\ttail(1e6)\tlog10 N needed")
    for name in preset_names():
        cfg = preset(name)
        if cfg.shape["kind"] != "power":
            continue
        s = cfg.s0() + args.delta
        if s > cfg.d:
            continue
        seq = cfg.shape_sequence()
        t3 = estimators.tail_cover_sum(seq, s, 10**3)
        t6 = estimators.tail_cover_sum(seq, s, 10**6)
        # tail(N) ~ t6 (N / 1e6)^(1 - beta); solve for the threshold
        rate = math.log(t3 / t6) / math.log(1e3)
        need = 6 + math.log10(t6 / args.threshold) / rate if t6 > args.threshold else float("nan")
        print(f"{name}\t{s:.4f}\t{t3:.4g}\t{t6:.4g}\t{need:.1f}")


if __name__ == "__main__":
    main()
