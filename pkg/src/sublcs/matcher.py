"""Constant-workspace exact matching and the capped shortest period.

Patterns and texts are views ``(array, offset, length)`` into int64 arrays, so
nothing is copied. The matcher is the two-way algorithm of Crochemore and
Perrin: a critical factorization computed from two maximal suffixes, then a
left-to-right scan of the right half and a right-to-left check of the left
half. Its state is the pair ``(shift, memory)``, which lets callers pull
occurrences one at a time.
"""
from __future__ import annotations

from typing import Iterator

from numba import njit

from .corpus import Corpus, as_symbols
from .meter import METER

# scalar frame of a matcher call, charged to the meter by the Python wrappers
MATCH_WORDS = 16


@njit(cache=True, inline="always")
def _maxsuf(x, xs, m, reverse):
    ms = -1
    j = 0
    k = 1
    p = 1
    while j + k < m:
        a = x[xs + j + k]
        b = x[xs + ms + k]
        if reverse:
            a, b = b, a
        if a < b:
            j += k
            k = 1
            p = j - ms
        elif a == b:
            if k != p:
                k += 1
            else:
                j += p
                k = 1
        else:
            ms = j
            j = ms + 1
            k = 1
            p = 1
    return ms, p


@njit(cache=True)
def factorize(x, xs, m):
    """Critical position ``ell`` (0-based, may be -1), shift ``per`` and the periodic flag."""
    i, p = _maxsuf(x, xs, m, False)
    j, q = _maxsuf(x, xs, m, True)
    if i > j:
        ell, per = i, p
    else:
        ell, per = j, q
    periodic = per + ell < m
    if periodic:
        for t in range(ell + 1):
            if x[xs + t] != x[xs + per + t]:
                periodic = False
                break
    if not periodic:
        per = max(ell + 1, m - ell - 1) + 1
    return ell, per, periodic


@njit(cache=True)
def tw_next(x, xs, m, y, ys, n, ell, per, periodic, j, mem):
    """Next occurrence of ``x[xs:xs+m]`` in ``y[ys:ys+n]`` at shift >= ``j``.

    Returns ``(occ, j, mem)``; ``occ`` is the 0-based shift or -1, and the
    other two are the state to pass to the following call.
    """
    if periodic:
        while j <= n - m:
            i = max(ell, mem) + 1
            while i < m and x[xs + i] == y[ys + i + j]:
                i += 1
            if i >= m:
                i = ell
                while i > mem and x[xs + i] == y[ys + i + j]:
                    i -= 1
                if i <= mem:
                    return j, j + per, m - per - 1
                j += per
                mem = m - per - 1
            else:
                j += i - ell
                mem = -1
    else:
        while j <= n - m:
            i = ell + 1
            while i < m and x[xs + i] == y[ys + i + j]:
                i += 1
            if i >= m:
                i = ell
                while i >= 0 and x[xs + i] == y[ys + i + j]:
                    i -= 1
                if i < 0:
                    return j, j + per, -1
                j += per
            else:
                j += i - ell
    return -1, j, mem


@njit(cache=True)
def find_first(x, xs, m, y, ys, n):
    if m > n:
        return -1
    ell, per, periodic = factorize(x, xs, m)
    occ, _, _ = tw_next(x, xs, m, y, ys, n, ell, per, periodic, 0, -1)
    return occ


@njit(cache=True)
def count_docs(S, offsets, lengths, ps, plen, stop):
    """Number of documents containing ``S[ps:ps+plen]``, giving up once ``stop`` is reached."""
    ell, per, periodic = factorize(S, ps, plen)
    count = 0
    m = len(lengths)
    for j in range(m):
        if count >= stop:
            break
        if count + (m - j) < stop:
            break
        n = lengths[j]
        if n < plen:
            continue
        occ, _, _ = tw_next(S, ps, plen, S, offsets[j], n, ell, per, periodic, 0, -1)
        if occ >= 0:
            count += 1
    return count


@njit(cache=True)
def period_capped(q, qs, qlen, cap):
    """Shortest period of ``q[qs:qs+qlen]`` if it is at most ``cap``, else 0."""
    half = (qlen + 1) // 2
    # second occurrence of the prefix of length ceil(|q|/2)
    occ = find_first(q, qs, half, q, qs + 1, qlen - 1)
    if occ < 0:
        return 0
    p = occ + 1
    if p > cap:
        return 0
    for i in range(qlen - p):
        if q[qs + i] != q[qs + i + p]:
            return 0
    return p


def find_occurrences(pattern, text) -> Iterator[int]:
    """Yield the 1-based start positions of ``pattern`` in ``text`` in ascending order."""
    x = as_symbols(pattern)
    y = as_symbols(text)
    m, n = len(x), len(y)
    if m == 0:
        raise ValueError("pattern must be non-empty")
    if m > n:
        return
    with METER.scope() as ws:
        ws.charge(MATCH_WORDS)
        ell, per, periodic = factorize(x, 0, m)
        j, mem = 0, -1
        while True:
            occ, j, mem = tw_next(x, 0, m, y, 0, n, ell, per, periodic, j, mem)
            if occ < 0:
                return
            yield occ + 1


def count_containing_documents(c: Corpus, pattern) -> int:
    """How many documents of ``c`` contain ``pattern`` (sentinels never match)."""
    x = as_symbols(pattern)
    if len(x) == 0:
        raise ValueError("pattern must be non-empty")
    with METER.scope() as ws:
        ws.charge(MATCH_WORDS)
        count = 0
        for j in range(c.m):
            if find_first(x, 0, len(x), c.S, int(c.offsets[j]), int(c.lengths[j])) >= 0:
                count += 1
        return count


def count_span_documents(c: Corpus, start: int, length: int, stop: int | None = None) -> int:
    """Document count for the pattern ``S[start:start+length]`` of the joined corpus."""
    with METER.scope() as ws:
        ws.charge(MATCH_WORDS)
        return int(count_docs(c.S, c.offsets, c.lengths, start, length, c.m if stop is None else stop))


def shortest_period_capped(q, cap: int) -> int | None:
    """``per(q)`` when it is at most ``cap``; ``None`` otherwise. Requires ``|q| >= 2*cap``."""
    x = as_symbols(q)
    if cap < 1 or len(x) < 2 * cap:
        raise ValueError(f"need cap >= 1 and |q| >= 2*cap (|q|={len(x)}, cap={cap})")
    with METER.scope() as ws:
        ws.charge(MATCH_WORDS)
        p = int(period_capped(x, 0, len(x), cap))
    return p or None
