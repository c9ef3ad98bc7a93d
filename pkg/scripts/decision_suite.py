"""Agreement of the four decision procedures with closure ground truth."""

import argparse
import zlib
from dataclasses import dataclass

import numpy as np

from qsolvable import corpus
from qsolvable.reductions import groups_equal, is_member, is_normal, is_subgroup


@dataclass
class SuiteConfig:
    runs: int = 10
    epsilon: float = 0.05


def decide(case, eps, rng):
    o = corpus.oracle(case.group)
    if case.kind == "member":
        return is_member(o, case.first, case.second[0], eps, rng).answer
    fn = {"subgroup": is_subgroup, "equal": groups_equal, "normal": is_normal}[case.kind]
    return fn(o, case.first, case.second, eps, rng).answer


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--runs", type=int, default=SuiteConfig.runs)
    p.add_argument("--epsilon", type=float, default=SuiteConfig.epsilon)
    cfg = SuiteConfig(**vars(p.parse_args()))
    for case in corpus.decision_cases():
        truth = corpus.decision_truth(case)
        right = 0
        for run in range(cfg.runs):
            rng = np.random.default_rng([zlib.crc32(case.label.encode()), run])
            right += decide(case, cfg.epsilon, rng) == truth
        print(f"{right:3d}/{cfg.runs:<3d} truth={str(truth):5}  {case.label}")


if __name__ == "__main__":
    main()
