"""``sublcs`` command line: solve, verify and benchmark."""
from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
import time
from dataclasses import asdict, dataclass

from .approx import approximate_lcs
from .corpus import Corpus, CorpusError, DocSpan, load_corpus
from .exact import InvariantViolation, exact_lcs
from .matcher import count_containing_documents
from .meter import METER
from .oracle import brute_force_lcs, classic_lcs

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 2, 3
ALGORITHMS = ("exact", "approx", "classic", "oracle")


@dataclass
class RunRecord:
    algorithm: str
    length: int
    doc: int
    start: int
    count_verified: int
    peak_words: int
    millis: float


@dataclass
class BenchRecord:
    n: int
    m: int
    d: int
    sigma: int
    tau: int
    algorithm: str
    millis: float
    peak_words: int
    length: int


def solve(c: Corpus, algorithm: str, tau: int | None = None) -> tuple[DocSpan, int, int, float]:
    """Run one algorithm under the meter: (span, length, peak words, milliseconds)."""
    METER.reset()
    base = METER.peak
    t0 = time.perf_counter()
    if algorithm == "exact":
        r = exact_lcs(c, 1 if tau is None else tau)
        span, length = r.span, r.length
    elif algorithm == "approx":
        r = approximate_lcs(c, 1 if tau is None else tau)
        span, length = r.span, r.span.len
    elif algorithm == "classic":
        r = classic_lcs(c)
        span, length = r.span, r.length
    elif algorithm == "oracle":
        r = brute_force_lcs(c)
        span, length = r.span, r.length
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    millis = (time.perf_counter() - t0) * 1000
    return span, length, METER.peak - base, millis


def run_record(c: Corpus, algorithm: str, tau: int | None = None) -> RunRecord:
    span, length, peak, millis = solve(c, algorithm, tau)
    verified = count_containing_documents(c, c.text(span)) if length else 0
    if length and verified < c.d:
        raise InvariantViolation(f"{algorithm} returned a span found in {verified} < d documents")
    return RunRecord(algorithm, length, span.doc, span.start, verified, peak, round(millis, 3))


def planted_corpus(n: int, m: int, d: int, sigma: int, plant: int, rng: random.Random) -> Corpus:
    """Random documents of total length ``n`` with a secret string of length ``plant`` in ``d`` of them."""
    size = max(n // m, plant)
    docs = [[rng.randrange(sigma) for _ in range(size)] for _ in range(m)]
    secret = [rng.randrange(sigma) for _ in range(plant)]
    for j in rng.sample(range(m), d):
        p = rng.randrange(size - plant + 1)
        docs[j][p:p + plant] = secret
    return Corpus.from_docs(docs, d, sigma=sigma)


def warm_up() -> None:
    """Trigger JIT compilation so the first timed cell is not charged for it."""
    c = planted_corpus(60, 3, 2, 3, 25, random.Random(0))
    for alg, tau in (("exact", 1), ("exact", 4), ("exact", 60), ("approx", 2), ("classic", None)):
        solve(c, alg, tau)


def bench(sizes, taus, m: int, d: int, sigma: int, plant: int, seed: int, repeat: int,
          algorithms=("exact", "approx", "classic")) -> list[BenchRecord]:
    warm_up()
    out = []
    for n in sizes:
        c = planted_corpus(n, m, d, sigma, plant, random.Random(seed * 1_000_003 + n))
        for alg in algorithms:
            for tau in (taus if alg in ("exact", "approx") else [0]):
                if tau > c.n:
                    continue
                runs = [solve(c, alg, tau) for _ in range(repeat)]
                out.append(BenchRecord(c.n, c.m, c.d, c.sigma, tau, alg,
                                       round(statistics.median(r[3] for r in runs), 3),
                                       max(r[2] for r in runs), runs[0][1]))
    return out


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _byte(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v <= 255:
        raise argparse.ArgumentTypeError("separator must be a byte value")
    return v


def parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=2, help="documents a substring must occur in")
    common.add_argument("--sep", type=_byte, default=0x1F, help="document separator byte inside one file")
    common.add_argument("--alphabet", choices=("byte", "decimal"), default="byte")
    common.add_argument("--seed", type=int, default=0)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--tsv", dest="fmt", action="store_const", const="tsv")

    p = argparse.ArgumentParser(prog="sublcs", description="Longest substring common to d of m documents.")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in ("exact", "approx"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--tau", type=int, required=True)
        s.add_argument("inputs", nargs="+")
    for name in ("classic", "oracle"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("inputs", nargs="+")
    s = sub.add_parser("verify", parents=[common], help="run every algorithm and check they agree")
    s.add_argument("--tau", type=int, default=None, help="budget for exact and approx (default: several)")
    s.add_argument("inputs", nargs="+")
    s = sub.add_parser("bench", parents=[common], help="time/space table on planted synthetic corpora")
    s.add_argument("--sizes", type=_ints, default=[1000, 2000])
    s.add_argument("--tau-list", type=_ints, default=[16, 64, 256])
    s.add_argument("--m", type=int, default=4)
    s.add_argument("--sigma", type=int, default=4)
    s.add_argument("--plant", type=int, default=50)
    s.add_argument("--repeat", type=int, default=3)
    s.add_argument("--algorithms", default="exact,approx,classic")
    return p


def _emit(rows: list, fmt: str | None, default: str) -> None:
    fmt = fmt or default
    dicts = [asdict(r) for r in rows]
    if fmt == "json":
        for row in dicts:
            print(json.dumps(row))
        return
    print("\t".join(dicts[0]))
    for row in dicts:
        print("\t".join(str(v) for v in row.values()))


def run(argv: list[str] | None = None) -> int:
    args = parser().parse_args(argv)
    try:
        if args.cmd == "bench":
            algs = tuple(a for a in args.algorithms.split(",") if a)
            if any(a not in ALGORITHMS for a in algs):
                raise ValueError(f"unknown algorithm in {args.algorithms!r}")
            if not 2 <= args.d <= args.m:
                raise ValueError("need 2 <= d <= m")
            rows = bench(args.sizes, args.tau_list, args.m, args.d, args.sigma, args.plant,
                         args.seed, args.repeat, algs)
            if rows:
                _emit(rows, args.fmt, "tsv")
            return EXIT_OK
        c = load_corpus(args.inputs, args.d, args.alphabet, args.sep)
        if args.cmd == "verify":
            taus = [args.tau] if args.tau else sorted({1, 4, 16, 64, c.n} - {0})
            rows = [run_record(c, "oracle"), run_record(c, "classic"), run_record(c, "approx", 1)]
            rows += [run_record(c, "exact", t) for t in taus if 1 <= t <= max(c.n, 1)]
            _emit(rows, args.fmt, "json")
            lengths = {r.length for r in rows}
            if len(lengths) != 1:
                print(f"sublcs: algorithms disagree on the length: {sorted(lengths)}", file=sys.stderr)
                return EXIT_INVARIANT
            return EXIT_OK
        rec = run_record(c, args.cmd, getattr(args, "tau", None))
        _emit([rec], args.fmt, "json")
        return EXIT_OK
    except InvariantViolation as e:
        print(f"sublcs: invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (CorpusError, ValueError, OSError) as e:
        print(f"sublcs: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
