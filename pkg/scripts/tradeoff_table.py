"""Time/space trade-off of the exact solver across budgets, plus the two reference points."""
import argparse
import sys
from dataclasses import asdict, dataclass, field, fields

from sublcs.cli import bench


@dataclass
class Config:
    sizes: list[int] = field(default_factory=lambda: [1000, 2000, 4000])
    taus: list[int] = field(default_factory=lambda: [4, 16, 64, 256, 1024])
    m: int = 4
    d: int = 2
    sigma: int = 4
    plant: int = 60
    seed: int = 0
    repeat: int = 3


def main() -> None:
    cfg = Config()
    p = argparse.ArgumentParser(description=__doc__)
    for f in fields(cfg):
        default = getattr(cfg, f.name)
        if isinstance(default, list):
            p.add_argument(f"--{f.name}", type=lambda s: [int(x) for x in s.split(",")], default=default)
        else:
            p.add_argument(f"--{f.name}", type=int, default=default)
    cfg = Config(**vars(p.parse_args()))
    rows = bench(cfg.sizes, cfg.taus, cfg.m, cfg.d, cfg.sigma, cfg.plant, cfg.seed, cfg.repeat)
    cols = list(asdict(rows[0]))
    print("\t".join(cols))
    for r in rows:
        print("\t".join(str(v) for v in asdict(r).values()))
    sys.stdout.flush()


if __name__ == "__main__":
    main()
