"""Empirical NoCoprimeOutcome rate of the copy conversion against its target delta."""

import argparse
from dataclasses import dataclass, field

import numpy as np

from qsolvable import corpus, qsim
from qsolvable.errors import NoCoprimeOutcome
from qsolvable.statesynth import choose_l, convert_copies


@dataclass
class RateConfig:
    trials: int = 500
    deltas: list[float] = field(default_factory=lambda: [0.1, 0.25])
    orders: list[int] = field(default_factory=lambda: [2, 3, 4, 6, 12])
    seed: int = 0


def failure_rate(r: int, delta: float, trials: int, rng: np.random.Generator) -> float:
    o = corpus.oracle("Z12")
    one = qsim.uniform_state([o.identity], qsim.group_register("R", o))
    l = choose_l(r, delta)
    fails = 0
    for _ in range(trials):
        try:
            convert_copies(o, 12 // r, r, [one] * l, delta, rng)
        except NoCoprimeOutcome:
            fails += 1
    return fails / trials


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--trials", type=int, default=RateConfig.trials)
    p.add_argument("--seed", type=int, default=RateConfig.seed)
    cfg = RateConfig(**vars(p.parse_args()))
    rng = np.random.default_rng(cfg.seed)
    print(f"{'r':>3} {'delta':>6} {'l':>3} {'rate':>7}")
    for r in cfg.orders:
        for delta in cfg.deltas:
            rate = failure_rate(r, delta, cfg.trials, rng)
            print(f"{r:3d} {delta:6.2f} {choose_l(r, delta):3d} {rate:7.3f}")


if __name__ == "__main__":
    main()
