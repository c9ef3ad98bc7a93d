"""Success rate and timing of group_order over the corpus.

    python scripts/order_sweep.py --runs 20 --epsilon 0.05
"""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from qsolvable import corpus
from qsolvable.classical import closure
from qsolvable.solvable_order import group_order


@dataclass
class SweepConfig:
    runs: int = 20
    epsilon: float = 0.05
    seed: int = 0


def sweep(cfg: SweepConfig) -> list[tuple[str, int, int, float, int]]:
    rows = []
    for i, name in enumerate(corpus.order_corpus()):
        o = corpus.oracle(name)
        truth = len(closure(o, o.generators))
        rng = np.random.default_rng([cfg.seed, i])
        hits, slowest, restarts = 0, 0.0, 0
        for _ in range(cfg.runs):
            t0 = time.perf_counter()
            res = group_order(o, o.generators, cfg.epsilon, rng)
            slowest = max(slowest, time.perf_counter() - t0)
            hits += res.order == truth
            restarts += res.restarts
        rows.append((name, truth, hits, slowest, restarts))
    return rows


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--runs", type=int, default=SweepConfig.runs)
    p.add_argument("--epsilon", type=float, default=SweepConfig.epsilon)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    cfg = SweepConfig(**vars(p.parse_args()))
    print(f"{'group':10} {'|G|':>4} {'hits':>9} {'slowest':>9} {'restarts':>8}")
    for name, truth, hits, slowest, restarts in sweep(cfg):
        print(f"{name:10} {truth:4d} {hits:4d}/{cfg.runs:<4d} {slowest:8.3f}s {restarts:8d}")


if __name__ == "__main__":
    main()
