"""Constant-workspace decision procedure and additive approximation of |LCS|."""
from __future__ import annotations

from dataclasses import dataclass

from numba import njit

from .corpus import Corpus, DocSpan
from .matcher import MATCH_WORDS, count_docs
from .meter import METER, WorkspaceMeter

YES, NO = "YES", "NO"
APPROX_WORDS = 16


@dataclass(frozen=True)
class Decision:
    verdict: str
    witness: DocSpan | None = None

    def __bool__(self) -> bool:
        return self.verdict == YES


@dataclass(frozen=True)
class ApproxResult:
    span: DocSpan
    interval: tuple[int, int]
    steps: int = 0


@njit(cache=True)
def scan(S, offsets, lengths, ell, stride, d):
    """First grid window ``S[k*stride : k*stride+ell]`` found in ``>= d`` documents, or -1.

    Windows running into a sentinel are skipped: they occur in one document at most.
    """
    j = 0
    m = len(lengths)
    p = 0
    while p + ell <= len(S):
        while j < m - 1 and p >= offsets[j + 1]:
            j += 1
        if p + ell <= offsets[j] + lengths[j]:
            if count_docs(S, offsets, lengths, p, ell, d) >= d:
                return p
        p += stride
    return -1


def _span_at(c: Corpus, p: int, ell: int) -> DocSpan:
    j = int(c.offsets.searchsorted(p, side="right")) - 1
    return DocSpan(j + 1, p - int(c.offsets[j]) + 1, ell)


def decide(c: Corpus, ell: int, r: int, meter: WorkspaceMeter = METER) -> Decision:
    """YES if ``|LCS| >= r``, NO if ``|LCS| < ell``; either answer in between.

    A YES carries a witness of length ``ell`` common to ``>= d`` documents.
    """
    if not 1 <= ell < r:
        raise ValueError(f"need 1 <= ell < r, got ell={ell}, r={r}")
    with meter.scope() as ws:
        ws.charge(MATCH_WORDS)
        p = int(scan(c.S, c.offsets, c.lengths, ell, r - ell, c.d))
    if p < 0:
        return Decision(NO)
    return Decision(YES, _span_at(c, p, ell))


def approximate_lcs(c: Corpus, tau: int, meter: WorkspaceMeter = METER,
                    trace: list | None = None) -> ApproxResult:
    """Witness of length ``>= |LCS| - tau + 1`` by ternary search over decide calls.

    The bracket ``[lo, hi]`` starts at ``[0, n // d]`` (0 stands for the empty
    answer) and shrinks by about a third per call until at most ``tau`` wide.
    A NO at stride 1 tested every window, so it bounds ``|LCS|`` below ``ell``.
    ``trace`` collects the bracket after every step.
    """
    if not 1 <= tau <= max(c.n, 1):
        raise ValueError(f"tau={tau} must satisfy 1 <= tau <= n={c.n}")
    with meter.scope() as ws:
        ws.charge(APPROX_WORDS)
        lo, hi = 0, c.n // c.d
        span = DocSpan.empty()
        steps = 0
        if trace is not None:
            trace.append((lo, hi))
        while hi - lo + 1 > tau:
            size = hi - lo + 1
            ell = lo + max(1, size // 3)
            r = min(max(lo + -(-2 * size // 3), ell + 1), hi + 1)
            dec = decide(c, ell, r, meter)
            steps += 1
            if dec:
                lo, span = ell, dec.witness
            elif r - ell == 1:
                hi = ell - 1
            else:
                hi = r - 1
            if trace is not None:
                trace.append((lo, hi))
        return ApproxResult(span, (lo, hi), steps)
