"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line."""
import random
import statistics
import time

import numpy as np
import pytest
from numba import njit

from acceptance_data import acceptance_corpus, taus_for
from laws import check_case, make_case
from sublcs import Corpus, approximate_lcs, decide, exact_lcs
from sublcs.cli import planted_corpus
from sublcs.matcher import count_containing_documents, period_capped, shortest_period_capped
from sublcs.meter import WorkspaceMeter
from sublcs.oracle import (bidistinct_direct, bidistinct_reduction, brute_force_lcs, brute_force_period,
                           classic_lcs)
from sublcs.stree import count_distinct_colors

SEED = 20261016


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def corpora():
    rng = random.Random(SEED)
    out = []
    for _ in range(520):
        c = acceptance_corpus(rng)
        out.append((c, brute_force_lcs(c).length))
    return out


def test_oracle_equivalence(corpora, report):
    runs = bad = 0
    sigmas = set()
    for c, L in corpora:
        sigmas.add("huge" if c.sigma >= 2 * c.n * c.n else c.sigma)
        for tau in taus_for(c):
            r = exact_lcs(c, tau)
            runs += 1
            ok = r.length == L and (L == 0 or count_containing_documents(c, c.text(r.span)) >= c.d)
            bad += not ok
    report("oracle equivalence", bad == 0 and len(corpora) >= 500 and {2, 4, 26, "huge"} <= sigmas,
           f"{len(corpora)} corpora, {runs} exact runs, {bad} mismatches")


def test_approximation_guarantee(corpora, report):
    runs = bad = 0
    for c, L in corpora:
        for tau in taus_for(c):
            r = approximate_lcs(c, tau)
            runs += 1
            ok = r.span.len >= L - tau + 1 and (tau > 1 or r.span.len == L)
            if r.span.len:
                ok &= count_containing_documents(c, c.text(r.span)) >= c.d
            bad += not ok
    report("approximation guarantee", bad == 0, f"{runs} runs, {bad} violations")


def test_decision_contract(report):
    rng = random.Random(SEED + 1)
    checks = bad = 0
    for _ in range(150):
        m = rng.randint(2, 5)
        k = rng.choice([2, 3, 26])
        docs = [[rng.randrange(k) for _ in range(rng.randint(0, 15))] for _ in range(m)]
        secret = [rng.randrange(k) for _ in range(rng.randint(1, 10))]
        for doc in rng.sample(docs, rng.randint(2, m)):
            doc[len(doc) // 2:len(doc) // 2] = secret
        c = Corpus.from_docs(docs, rng.randint(2, m), sigma=k)
        L = brute_force_lcs(c).length
        for ell in range(1, min(c.n, 20)):
            for r in range(ell + 1, min(c.n, 20) + 1):
                dec = decide(c, ell, r)
                checks += 1
                if (L >= r and not dec) or (L < ell and dec):
                    bad += 1
                elif dec and count_containing_documents(c, c.text(dec.witness)) < c.d:
                    bad += 1
    report("decision contract", bad == 0, f"{checks} (ell, r) checks, {bad} violations")


def test_compression_laws(report):
    rng = random.Random(SEED + 2)
    cats = {"periodic": 0, "hash": 0, "qp=8tau": 0, "qp=12tau-1": 0, "|S|=|Q|+4tau": 0}
    n = 12000
    for _ in range(n):
        tau, comp, S = make_case(rng)
        check_case(comp, S, rng)
        cats["periodic" if comp.per else "hash"] += 1
        cats["qp=8tau"] += comp.per is not None and len(comp.Qp) == 8 * tau
        cats["qp=12tau-1"] += comp.per is not None and len(comp.Qp) == 12 * tau - 1
        cats["|S|=|Q|+4tau"] += len(S) == len(comp.Q) + 4 * tau
    report("compression laws", all(cats.values()), f"{n} cases, {cats}")


@njit(cache=True)
def _naive_period(x, L):
    for p in range(1, L):
        ok = True
        for i in range(L - p):
            if x[i] != x[i + p]:
                ok = False
                break
        if ok:
            return p
    return L


@njit(cache=True)
def _exhaustive(maxlen):
    bad = 0
    cases = 0
    x = np.zeros(maxlen, dtype=np.int64)
    for L in range(2, maxlen + 1):
        for code in range(1 << L):
            for i in range(L):
                x[i] = (code >> i) & 1
            p = _naive_period(x, L)
            for cap in range(1, L // 2 + 1):
                got = period_capped(x, 0, L, cap)
                cases += 1
                if got != (p if p <= cap else 0):
                    bad += 1
    return cases, bad


def test_period_computation(report):
    cases, bad = _exhaustive(20)
    rng = random.Random(SEED + 3)
    for _ in range(3000):
        L = rng.randint(21, 40)
        unit = [rng.randrange(2) for _ in range(rng.randint(1, L))]
        q = (unit * L)[:L]
        if rng.random() < 0.3:
            q[rng.randrange(L)] ^= 1
        p = brute_force_period(q)
        for cap in range(1, L // 2 + 1):
            cases += 1
            bad += shortest_period_capped(q, cap) != (p if p <= cap else None)
    for _ in range(200):
        L = rng.randint(41, 10_000)
        unit = [rng.randrange(rng.choice([2, 4])) for _ in range(rng.randint(1, 300))]
        q = (unit * (L // len(unit) + 1))[:L]
        if rng.random() < 0.3:
            q[rng.randrange(L)] = 7
        p = brute_force_period(q)
        for cap in {1, min(max(1, p - 1), L // 2), min(p, L // 2), L // 4 or 1, L // 2}:
            cases += 1
            bad += shortest_period_capped(q, cap) != (p if p <= cap else None)
    report("period computation", bad == 0, f"{cases} (string, cap) checks, {bad} mismatches")


def _peak(fn):
    meter = WorkspaceMeter()
    fn(meter)
    return meter.peak


def _within(values, tol=0.10):
    mid = statistics.median(values)
    return all(abs(v - mid) <= tol * mid for v in values)


def test_space_scaling(report):
    sizes = (1000, 2000, 4000)
    exact_peaks, approx_peaks, classic_per_n = {}, set(), []
    for n in sizes:
        cs = [planted_corpus(n, 4, 2, 26, 48, random.Random(SEED + 10 * n + s)) for s in range(3)]
        exact_peaks[n] = statistics.median(_peak(lambda mt: exact_lcs(c, 16, meter=mt)) for c in cs)
        for tau in (1, 16, 256):
            approx_peaks.add(_peak(lambda mt: approximate_lcs(cs[0], tau, meter=mt)))
        classic_per_n.append(_peak(lambda mt: classic_lcs(cs[0], meter=mt)) / cs[0].n)
    ok = _within(list(exact_peaks.values())) and len(approx_peaks) == 1 and _within(classic_per_n)
    report("space scaling", ok,
           f"exact(tau=16) peaks {exact_peaks}; approx peaks {sorted(approx_peaks)}; "
           f"classic words/n {[round(x, 1) for x in classic_per_n]}")


def test_time_scaling(report):
    c = planted_corpus(4000, 4, 2, 4, 50, random.Random(SEED + 4))
    exact_lcs(c, 256)  # compile outside the timing

    def median_time(tau):
        times = []
        for _ in range(3):
            t0 = time.perf_counter()
            exact_lcs(c, tau)
            times.append(time.perf_counter() - t0)
        return statistics.median(times)

    t16, t256 = median_time(16), median_time(256)
    ratio = t16 / t256
    report("time scaling", ratio >= 4, f"n=4000: tau=16 {t16:.3f}s, tau=256 {t256:.3f}s, ratio {ratio:.1f}x")


def test_bidistinctness_reduction(report):
    rng = random.Random(SEED + 5)
    bad = 0
    trials = 1200
    both = [0, 0]
    for _ in range(trials):
        n = rng.randint(1, 30)
        D = 2 * n * n + rng.randint(0, 10)
        pairs = [(rng.randrange(D), rng.randrange(D)) for _ in range(n)]
        if rng.random() < 0.3:
            i, j = rng.randrange(n), rng.randrange(n)
            pairs[i] = (pairs[j][1], pairs[i][1])
        direct = bidistinct_direct(pairs)
        both[direct] += 1
        bad += direct != bidistinct_reduction(pairs, tau=rng.randint(1, 2 * n))
    report("EB reduction", bad == 0 and min(both) > 0,
           f"{trials} vectors ({both[1]} bidistinct, {both[0]} not), {bad} disagreements")


def test_hui_counting(report):
    rng = random.Random(SEED + 6)
    bad = 0
    trees = 1200
    for _ in range(trees):
        R = rng.randint(1, 150)
        parent = [-1] + [rng.randrange(v) for v in range(1, R)]
        leaves = rng.randint(1, 200)
        att = [rng.randrange(R) for _ in range(leaves)]
        col = [rng.randrange(rng.randint(1, 12)) for _ in range(leaves)]
        sets = [set() for _ in range(R)]
        for v, cc in zip(att, col):
            while v != -1:
                sets[v].add(cc)
                v = parent[v]
        bad += count_distinct_colors(parent, att, col).tolist() != [len(s) for s in sets]
    report("Hui counting", bad == 0, f"{trees} random colored trees, {bad} mismatches")
