"""Peak metered workspace versus n for each solver, at a few fixed budgets."""
import argparse
import random
import statistics
from dataclasses import dataclass, field

from sublcs import approximate_lcs, classic_lcs, exact_lcs
from sublcs.cli import planted_corpus
from sublcs.meter import WorkspaceMeter


@dataclass
class Config:
    sizes: list[int] = field(default_factory=lambda: [1000, 2000, 4000, 8000])
    taus: list[int] = field(default_factory=lambda: [16, 64])
    seeds: int = 3
    sigma: int = 26


def peak(fn) -> int:
    meter = WorkspaceMeter()
    fn(meter)
    return meter.peak


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=Config.seeds)
    cfg = Config(seeds=p.parse_args().seeds)
    print("n\talgorithm\ttau\tpeak_words\twords_per_tau_or_n")
    for n in cfg.sizes:
        cs = [planted_corpus(n, 4, 2, cfg.sigma, 3 * min(cfg.taus), random.Random(s * 7919 + n))
              for s in range(cfg.seeds)]
        for tau in cfg.taus:
            w = statistics.median(peak(lambda mt: exact_lcs(c, tau, meter=mt)) for c in cs)
            print(f"{n}\texact\t{tau}\t{w:.0f}\t{w / tau:.1f}")
        w = peak(lambda mt: approximate_lcs(cs[0], min(cfg.taus), meter=mt))
        print(f"{n}\tapprox\t{min(cfg.taus)}\t{w}\t-")
        w = peak(lambda mt: classic_lcs(cs[0], meter=mt))
        print(f"{n}\tclassic\t-\t{w}\t{w / cs[0].n:.1f}")


if __name__ == "__main__":
    main()
