"""Reference solutions used to validate the space-efficient solvers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus, DocSpan, as_symbols
from .meter import METER, WorkspaceMeter
from .stree import LocalAlphabet, SuffixTree, hui


@dataclass(frozen=True)
class Answer:
    span: DocSpan
    length: int


def _span_at(c: Corpus, p: int, length: int) -> DocSpan:
    j = int(c.offsets.searchsorted(p, side="right")) - 1
    return DocSpan(j + 1, p - int(c.offsets[j]) + 1, length)


def classic_lcs(c: Corpus, meter: WorkspaceMeter = METER) -> Answer:
    """Deepest node of the generalized suffix tree with leaves from ``>= d`` documents. Linear space."""
    with meter.scope() as ws:
        S = c.S
        n = len(S)
        if c.n == 0:
            return Answer(DocSpan.empty(), 0)
        term = S >= c.sigma
        alphabet = LocalAlphabet(ws.track(np.unique(S[~term])))
        codes = ws.empty(n)
        codes[~term] = np.searchsorted(alphabet.symbols, S[~term])
        codes[term] = alphabet.a + 1 + (S[term] - c.sigma)
        t = SuffixTree(S, codes, alphabet, alphabet.a + 1 + c.m, ws)
        R = t.nodes
        leaf = ws.track(np.flatnonzero(t.fchild[:R] == -1))
        pos = t.wit[leaf]
        keep = ~term[pos]
        att_node = ws.track(leaf[keep].astype(np.int64))
        att_color = ws.track(np.searchsorted(c.offsets, pos[keep], side="right") - 1)
        P = len(att_node)
        head, cnt, dup, uf, out = (ws.empty(R) for _ in range(5))
        nxt, last = ws.empty(max(P, 1)), ws.empty(c.m)
        stack = ws.empty(2 * R + 1)
        hui(R, t.parent, t.fchild, t.nsib, att_node, att_color, P, c.m,
            head, nxt, cnt, dup, uf, last, stack, out)
        internal = np.flatnonzero((t.fchild[:R] != -1) & (out[:R] >= c.d))
        internal = internal[internal != 0]
        if len(internal) == 0:
            return Answer(DocSpan.empty(), 0)
        v = int(internal[np.argmax(t.depth[internal])])
        length = int(t.depth[v])
        return Answer(_span_at(c, int(t.wit[v]), length), length)


def _common_at(docs: list[np.ndarray], L: int, d: int) -> tuple[int, int] | None:
    seen: dict[bytes, set[int]] = {}
    for j, doc in enumerate(docs):
        raw = doc.tobytes()
        for i in range(len(doc) - L + 1):
            key = raw[8 * i:8 * (i + L)]
            owners = seen.setdefault(key, set())
            owners.add(j)
            if len(owners) >= d:
                return j, i
    return None


def brute_force_lcs(c: Corpus) -> Answer:
    """Dictionary of all substrings of one length, binary-searched over the length."""
    docs = [np.ascontiguousarray(x) for x in c.docs]
    lo, hi = 0, int(np.sort(c.lengths)[::-1][c.d - 1])
    best = DocSpan.empty()
    while lo < hi:
        mid = (lo + hi + 1) // 2
        hit = _common_at(docs, mid, c.d)
        if hit is None:
            hi = mid - 1
        else:
            lo = mid
            best = DocSpan(hit[0] + 1, hit[1] + 1, mid)
    if lo and best.len != lo:
        j, i = _common_at(docs, lo, c.d)
        best = DocSpan(j + 1, i + 1, lo)
    return Answer(best, lo)


def brute_force_period(q) -> int:
    """Smallest ``p >= 1`` with ``q[i] == q[i+p]`` for all valid ``i``."""
    x = as_symbols(q)
    for p in range(1, len(x)):
        if np.array_equal(x[p:], x[:-p]):
            return p
    return len(x)


def brute_force_lcs_length(docs: Sequence, d: int) -> int:
    return brute_force_lcs(Corpus.from_docs([as_symbols(x) for x in docs], d)).length


def bidistinct_direct(pairs: Sequence[tuple[int, int]]) -> bool:
    """Every ``x, y`` (including ``x = y``) has ``x1 != y2`` and ``x2 != y1``."""
    for x1, x2 in pairs:
        for y1, y2 in pairs:
            if x1 == y2 or x2 == y1:
                return False
    return True


def bidistinct_reduction(pairs: Sequence[tuple[int, int]], tau: int = 1) -> bool:
    """Same answer through the exact solver: bidistinct iff the two coordinate strings share no symbol."""
    from .exact import exact_lcs

    if not pairs:
        return True
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    _, ranks = np.unique(arr, return_inverse=True)
    ranks = ranks.reshape(-1, 2)
    c = Corpus.from_docs([ranks[:, 0], ranks[:, 1]], 2)
    return exact_lcs(c, min(tau, c.n)).length == 0


def element_bidistinctness(pairs: Sequence[tuple[int, int]], tau: int = 1) -> bool:
    """Bidistinctness decided both directly and through the exact solver; the two must agree."""
    direct = bidistinct_direct(pairs)
    reduced = bidistinct_reduction(pairs, tau)
    if direct != reduced:
        raise AssertionError(f"bidistinctness mismatch on {list(pairs)!r}")
    return direct
