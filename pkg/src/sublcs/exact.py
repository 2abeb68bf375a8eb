"""Exact LCS in O(tau) words and O(n^2/tau) time.

Pipeline: the constant-space approximation brackets ``|LCS|`` in
``[ell, ell + tau)``. The documents are then cut into O(n/tau) windows that are
never stored; they are regenerated from a small cursor on every pass. For each
window ``S_k`` the suffix tree of ``S_k`` is built, nodes shared with earlier
windows are excluded, and candidate nodes (explicit nodes, and points where
suffixes of later windows branch out of the tree) are marked. Batches of at
most ``tau`` marked nodes are counted against every window at once; a node
found in ``>= d`` documents is excluded with its ancestors, otherwise with its
descendants, so every candidate label is counted exactly once.

When ``ell > 10*tau`` windows have length ``ell + 2*tau``; each one, and every
window it is compared with, is shortened by replacing the first occurrence of
the anchor ``Q_k = S_k[2*tau+1 .. ell]`` with a short stand-in (a few periods
of ``Q_k``, or a single reserved letter when its period exceeds ``4*tau``).
Occurrences of long strings containing the anchor are preserved position by
position, so the same machinery runs on strings of length ``O(tau)``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from numba import njit

from .approx import approximate_lcs
from .corpus import LONG_SLICE, SHORT_GROUP, Corpus, DocSpan, Window, as_symbols, resolve
from .matcher import factorize, find_first, period_capped, tw_next
from .meter import METER, Scope, WorkspaceMeter
from .stree import (LocalAlphabet, NodeRef, SuffixTree, excl_anc, excl_desc, excluded, hget, hput,
                    hui, ms_loci)

SMALL, GENERAL = 0, 1
SHORT_KIND, LONG_KIND = 1, 2

# parameter vector
P_MODE, P_ELL, P_TAU, P_W, P_SHORT_LO, P_SHORT_HI, P_LONG_MIN, P_SIGMA, P_M, P_HASH = range(10)
P_QS, P_QLEN, P_QPLEN, P_TWELL, P_TWPER, P_TWPERIODIC, P_KINDS = range(10, 17)
P_SIZE = 17
# window cursor
C_PHASE, C_DOC, C_POS, C_TWDOC, C_TWJ, C_TWMEM, C_OCC = range(7)
C_SIZE = 7
# produced window
I_KIND, I_DOC, I_END, I_POS, I_LEN = range(5)
I_SIZE = 5
# marking state
S_STAGE, S_IDX, S_QPOS = range(3)

FRAME_WORDS = 64


class InvariantViolation(RuntimeError):
    pass


# -- window lists ------------------------------------------------------------------

@njit(cache=True, inline="always")
def _is_short(P, L):
    return P[P_SHORT_LO] <= L < P[P_SHORT_HI]


@njit(cache=True)
def advance(lens, P, cur, info):
    """Coordinates of the next window of the list; 0 when the list is exhausted."""
    m = len(lens)
    while True:
        phase = cur[C_PHASE]
        if phase == 0:
            j = cur[C_DOC]
            while j < m and not _is_short(P, lens[j]):
                j += 1
            if j == m:
                cur[C_PHASE] = 1
                cur[C_DOC] = 0
                cur[C_POS] = 0
                continue
            first = j
            total = 0
            glen = 0
            while j < m:
                if _is_short(P, lens[j]):
                    total += lens[j]
                    glen += lens[j] + 1
                    j += 1
                    if total >= P[P_TAU]:
                        break
                else:
                    j += 1
            cur[C_DOC] = j
            info[I_KIND] = 0
            info[I_DOC] = first
            info[I_END] = j
            info[I_POS] = 0
            info[I_LEN] = glen - 1
            return 1
        if phase == 1:
            j = cur[C_DOC]
            if j < m and lens[j] < P[P_LONG_MIN]:
                while j < m and lens[j] < P[P_LONG_MIN]:
                    j += 1
                cur[C_DOC] = j
                cur[C_POS] = 0
            if j == m:
                cur[C_PHASE] = 2
                return 0
            s = cur[C_POS]
            L = lens[j]
            W = P[P_W]
            info[I_KIND] = 1
            info[I_DOC] = j
            info[I_END] = j + 1
            info[I_POS] = s
            info[I_LEN] = min(W, L - s)
            if s + W >= L:
                cur[C_DOC] = j + 1
                cur[C_POS] = 0
            else:
                cur[C_POS] = s + P[P_TAU]
            return 1
        return 0


@njit(cache=True)
def copy_window(S, off, lens, P, info, buf, col):
    """Materialize a window with its sentinels; ``col`` is the group-local document index."""
    k = 0
    if info[I_KIND] == 0:
        g = 0
        for j in range(info[I_DOC], info[I_END]):
            if not _is_short(P, lens[j]):
                continue
            o = off[j]
            for x in range(lens[j]):
                buf[k] = S[o + x]
                col[k] = g
                k += 1
            buf[k] = S[o + lens[j]]
            col[k] = -1
            k += 1
            g += 1
        return k
    j = info[I_DOC]
    o = off[j] + info[I_POS]
    for x in range(info[I_LEN]):
        buf[k] = S[o + x]
        col[k] = 0
        k += 1
    buf[k] = P[P_SIGMA] + j
    col[k] = -1
    return k + 1


@njit(cache=True)
def compress_window(S, off, lens, P, cur, info, buf, col):
    """Write the image of a long-document slice under the anchor replacement; 0 if it lacks the anchor."""
    j = info[I_DOC]
    s = info[I_POS]
    ln = info[I_LEN]
    qs = P[P_QS]
    qlen = P[P_QLEN]
    if cur[C_TWDOC] != j:
        cur[C_TWDOC] = j
        cur[C_TWJ] = s
        cur[C_TWMEM] = -1
        cur[C_OCC] = -2
    occ = cur[C_OCC]
    while occ == -2 or (occ >= 0 and occ < s):
        occ, tj, tm = tw_next(S, qs, qlen, S, off[j], lens[j], P[P_TWELL], P[P_TWPER],
                              P[P_TWPERIODIC] == 1, cur[C_TWJ], cur[C_TWMEM])
        cur[C_TWJ] = tj
        cur[C_TWMEM] = tm
    cur[C_OCC] = occ
    if occ < 0 or occ + qlen > s + ln:
        return 0
    o = off[j]
    k = 0
    for x in range(s, occ):
        buf[k] = S[o + x]
        k += 1
    qp = P[P_QPLEN]
    if qp == 0:
        buf[k] = P[P_HASH]
        k += 1
    else:
        for x in range(qp):
            buf[k] = S[qs + x]
            k += 1
    for x in range(occ + qlen, s + ln):
        buf[k] = S[o + x]
        k += 1
    buf[k] = P[P_SIGMA] + j
    k += 1
    for x in range(k - 1):
        col[x] = 0
    col[k - 1] = -1
    return k


@njit(cache=True)
def next_peer(S, off, lens, P, cur, info, buf, col):
    """Advance ``cur`` and materialize the window: length, 0 if it maps to the empty string, -1 at the end."""
    if advance(lens, P, cur, info) == 0:
        return -1
    if P[P_MODE] == 0:
        return copy_window(S, off, lens, P, info, buf, col)
    return compress_window(S, off, lens, P, cur, info, buf, col)


# -- local alphabet ------------------------------------------------------------------

@njit(cache=True)
def encode_peer(buf, blen, dic, a, out):
    for i in range(blen):
        x = buf[i]
        k = np.searchsorted(dic[:a], x)
        out[i] = k if k < a and dic[k] == x else a


@njit(cache=True)
def encode_window(buf, blen, dic, a, sigma, m, out):
    """Local codes of the window; each sentinel gets a private code. Returns the code count."""
    nxt = a + 1
    for i in range(blen):
        x = buf[i]
        if sigma <= x < sigma + m:
            out[i] = nxt
            nxt += 1
        else:
            out[i] = np.searchsorted(dic[:a], x)
    return nxt


# -- exclusion of earlier windows and marking -------------------------------------------

@njit(cache=True)
def phase_exclude(S, off, lens, P, k, cur, info, pbuf, pcol, pcodes, dic, a,
                  t_text, t_start, t_depth, t_link, t_hk, t_hv, A, t_parent, top, lnode, ldepth):
    """Exclude, with their ancestors, the nodes shared with each of the first ``k`` windows."""
    for _ in range(k):
        ln = next_peer(S, off, lens, P, cur, info, pbuf, pcol)
        if ln <= 0:
            continue
        encode_peer(pbuf, ln, dic, a, pcodes)
        ms_loci(t_text, t_start, t_depth, t_link, t_hk, t_hv, A, pcodes, 0, ln, lnode, ldepth)
        for q in range(ln):
            if ldepth[q] > 0:
                excl_anc(t_parent, t_depth, top, lnode[q], ldepth[q])


@njit(cache=True)
def collect(S, off, lens, P, state, bcur, wcur, info, pbuf, pcol, pcodes, dic, a,
            t_text, t_start, t_depth, t_link, t_hk, t_hv, A, t_fchild, nn,
            top, bot, hi_d, lnode, ldepth, mk_node, mk_depth, hk, hv, cap):
    """Mark up to ``cap`` non-excluded candidate nodes, resuming from ``state``; returns the count."""
    for i in range(len(hk)):
        hk[i] = -1
    stride = hi_d + 1
    B = 0
    if state[S_STAGE] == 0:
        v = state[S_IDX]
        while v < nn:
            if v != 0 and t_fchild[v] != -1:
                dl = t_depth[v]
                if dl < hi_d and not excluded(top, bot, v, dl):
                    key = v * stride + dl
                    if hget(hk, hv, key) == -1:
                        hput(hk, hv, key, B)
                        mk_node[B] = v
                        mk_depth[B] = dl
                        B += 1
                        if B == cap:
                            state[S_IDX] = v + 1
                            return B
            v += 1
        state[S_STAGE] = 1
        state[S_QPOS] = 0
    if state[S_STAGE] == 2:
        return B
    while True:
        for x in range(C_SIZE):
            wcur[x] = bcur[x]
        ln = next_peer(S, off, lens, P, wcur, info, pbuf, pcol)
        if ln == -1:
            state[S_STAGE] = 2
            return B
        if ln > 0:
            encode_peer(pbuf, ln, dic, a, pcodes)
            ms_loci(t_text, t_start, t_depth, t_link, t_hk, t_hv, A, pcodes, 0, ln, lnode, ldepth)
            q = state[S_QPOS]
            while q < ln:
                dl = ldepth[q]
                c = lnode[q]
                if dl < hi_d and not excluded(top, bot, c, dl):
                    key = c * stride + dl
                    if hget(hk, hv, key) == -1:
                        hput(hk, hv, key, B)
                        mk_node[B] = c
                        mk_depth[B] = dl
                        B += 1
                        if B == cap:
                            state[S_QPOS] = q + 1
                            return B
                q += 1
        for x in range(C_SIZE):
            bcur[x] = wcur[x]
        state[S_IDX] += 1
        state[S_QPOS] = 0


# -- batched document counting ------------------------------------------------------------

@njit(cache=True)
def refine(nn, t_parent, t_depth, B, sn, sd, sidx, ebeg, eend, rparent, rfchild, rnsib, rnode):
    """Tree of explicit nodes plus the batch's implicit nodes spliced into their edges.

    ``sn, sd`` hold the batch sorted by (edge, depth) and ``sidx`` the original
    batch positions. Implicit node ``i`` of the sorted list becomes ``nn + i``;
    ``rnode[b]`` is the refined id of batch item ``b``. Returns the node count.
    """
    for v in range(nn):
        ebeg[v] = 0
        eend[v] = 0
        rparent[v] = t_parent[v]
    for v in range(nn, nn + B):
        rparent[v] = -1
    i = 0
    while i < B:
        c = sn[i]
        j = i
        while j < B and sn[j] == c:
            j += 1
        # implicit items of this edge are sn[i:j] with sd < depth[c], possibly followed by the explicit one
        e = j
        if sd[e - 1] == t_depth[c]:
            rnode[sidx[e - 1]] = c
            e -= 1
        ebeg[c] = i
        eend[c] = e
        prev = t_parent[c]
        for x in range(i, e):
            rparent[nn + x] = prev
            rnode[sidx[x]] = nn + x
            prev = nn + x
        rparent[c] = prev
        i = j
    R = nn + B
    for v in range(R):
        rfchild[v] = -1
        rnsib[v] = -1
    for v in range(R - 1, 0, -1):
        p = rparent[v]
        if p >= 0:
            rnsib[v] = rfchild[p]
            rfchild[p] = v
    return R


@njit(cache=True)
def _attach(c, dl, nn, t_depth, rparent, sd, ebeg, eend):
    lo = ebeg[c]
    hi = eend[c]
    while lo < hi:
        mid = (lo + hi) // 2
        if sd[mid] < dl:
            lo = mid + 1
        else:
            hi = mid
    if lo < eend[c]:
        u = nn + lo
        if sd[lo] == dl:
            return u
        return rparent[u]
    if dl == t_depth[c]:
        return c
    return rparent[c]


@njit(cache=True)
def count_batch(S, off, lens, P, cur, info, pbuf, pcol, pcodes, dic, a,
                t_text, t_start, t_depth, t_link, t_hk, t_hv, A, nn,
                B, mk_depth, min_d, sd, ebeg, eend, rparent, rfchild, rnsib, rnode, R,
                lnode, ldepth, att_node, att_color,
                head, nxt, hcnt, dup, uf, last, stack, out, cnt, mdoc, stop):
    """Add to ``cnt[b]`` the number of documents containing the label of each batch item.

    Counting ends early once every item has reached ``stop``.
    """
    kinds = P[P_KINDS]
    done = 0
    for b in range(B):
        if cnt[b] >= stop:
            done += 1
    while done < B:
        ln = next_peer(S, off, lens, P, cur, info, pbuf, pcol)
        if ln == -1:
            break
        if ln == 0:
            continue
        short = info[I_KIND] == 0
        if short and (kinds & 1) == 0:
            continue
        if not short and (kinds & 2) == 0:
            continue
        encode_peer(pbuf, ln, dic, a, pcodes)
        ms_loci(t_text, t_start, t_depth, t_link, t_hk, t_hv, A, pcodes, 0, ln, lnode, ldepth)
        npts = 0
        ncol = 1
        for q in range(ln):
            dl = ldepth[q]
            if dl < min_d or pcol[q] < 0:
                continue
            att_node[npts] = _attach(lnode[q], dl, nn, t_depth, rparent, sd, ebeg, eend)
            att_color[npts] = pcol[q] if short else 0
            if att_color[npts] + 1 > ncol:
                ncol = att_color[npts] + 1
            npts += 1
        if npts == 0:
            continue
        hui(R, rparent, rfchild, rnsib, att_node, att_color, npts, ncol,
            head, nxt, hcnt, dup, uf, last, stack, out)
        if short:
            for b in range(B):
                x = out[rnode[b]]
                if x > 0:
                    if cnt[b] < stop <= cnt[b] + x:
                        done += 1
                    cnt[b] += x
        else:
            doc = info[I_DOC]
            for b in range(B):
                if out[rnode[b]] > 0 and mdoc[b] != doc:
                    cnt[b] += 1
                    mdoc[b] = doc
                    if cnt[b] == stop:
                        done += 1


@njit(cache=True)
def apply_batch(B, mk_node, mk_depth, cnt, d, t_parent, t_depth, t_fchild, t_nsib, top, bot, xstack, accepted):
    for b in range(B):
        if cnt[b] >= d:
            accepted[b] = 1
            excl_anc(t_parent, t_depth, top, mk_node[b], mk_depth[b])
        else:
            accepted[b] = 0
            excl_desc(t_parent, t_depth, t_fchild, t_nsib, bot, xstack, mk_node[b], mk_depth[b])


# -- Python surface ---------------------------------------------------------------------------

@dataclass
class WindowLists:
    """The (never stored) window list for a bracket ``ell`` and budget ``tau``."""

    corpus: Corpus
    ell: int
    tau: int
    params: np.ndarray

    @property
    def general(self) -> bool:
        return self.params[P_MODE] == GENERAL

    @property
    def window_len(self) -> int:
        return int(self.params[P_W])

    def cursor(self, scope: Scope | None = None) -> np.ndarray:
        cur = np.zeros(C_SIZE, dtype=np.int64) if scope is None else scope.zeros(C_SIZE)
        cur[C_TWDOC] = -1
        return cur

    def window(self, wid: int, info: np.ndarray) -> Window:
        c = self.corpus
        if info[I_KIND] == 0:
            members = tuple(j + 1 for j in range(int(info[I_DOC]), int(info[I_END]))
                            if _is_short(self.params, c.lengths[j]))
            return Window(wid, 0, 1, int(info[I_LEN]), c.sentinel(members[-1]), SHORT_GROUP, members)
        j = int(info[I_DOC]) + 1
        return Window(wid, j, int(info[I_POS]) + 1, int(info[I_LEN]), c.sentinel(j), LONG_SLICE)

    def __iter__(self) -> Iterator[Window]:
        cur = self.cursor()
        info = np.zeros(I_SIZE, dtype=np.int64)
        wid = 0
        while advance(self.corpus.lengths, self.params, cur, info):
            yield self.window(wid, info)
            wid += 1

    @property
    def short(self) -> list[Window]:
        return [w for w in self if w.kind == SHORT_GROUP]

    @property
    def long(self) -> list[Window]:
        return [w for w in self if w.kind == LONG_SLICE]


def build_window_lists(c: Corpus, ell: int, tau: int, scope: Scope | None = None,
                       general: bool | None = None) -> WindowLists:
    """Window list for ``ell <= |LCS| < ell + tau``.

    With ``ell <= 10*tau``, documents shorter than ``ell`` are dropped (when
    ``ell > 1``), documents shorter than ``max(tau, ell)`` are packed greedily
    into groups of total length at least ``tau``, and the others are cut into
    slices of length ``ell + 2*tau - 1`` at stride ``tau``. Otherwise only
    documents of length ``>= ell`` are kept and sliced with length ``ell + 2*tau``.
    ``general`` overrides the choice between the two layouts.
    """
    if tau < 1 or ell < 1:
        raise ValueError("need tau >= 1 and ell >= 1")
    P = np.zeros(P_SIZE, dtype=np.int64) if scope is None else scope.zeros(P_SIZE)
    if general is None:
        general = ell > 10 * tau
    P[P_MODE] = GENERAL if general else SMALL
    P[P_ELL] = ell
    P[P_TAU] = tau
    P[P_SIGMA] = c.sigma
    P[P_M] = c.m
    P[P_HASH] = c.hash_symbol
    P[P_KINDS] = SHORT_KIND | LONG_KIND
    P[P_SHORT_LO] = max(ell, 1)
    if general:
        P[P_W] = ell + 2 * tau
        P[P_SHORT_HI] = ell
        P[P_LONG_MIN] = ell
    else:
        P[P_W] = ell + 2 * tau - 1
        P[P_SHORT_HI] = max(tau, ell)
        P[P_LONG_MIN] = max(tau, ell)
    return WindowLists(c, ell, tau, P)


@dataclass
class Compressor:
    """Anchor ``Q``, its stand-in ``Qp`` (a prefix of ``Q``, or the reserved letter) and the shift."""

    Q: np.ndarray
    Qp: np.ndarray
    per: int | None
    delta: int


def stand_in_length(qlen: int, per: int, tau: int) -> int:
    """Length of ``rho^t' rho'`` with ``t'`` minimal such that it is at least ``8*tau``."""
    tail = qlen % per
    reps = max(0, -(-(8 * tau - tail) // per))
    return reps * per + tail


def make_compressor(Sk, ell: int, tau: int, hash_symbol: int) -> Compressor:
    """Compressor of a window ``Sk`` (its first ``ell`` symbols must be ordinary)."""
    if ell <= 10 * tau:
        raise ValueError("compression needs ell > 10*tau")
    s = as_symbols(Sk)
    Q = s[2 * tau:ell]
    per = int(period_capped(Q, 0, len(Q), 4 * tau)) or None
    if per is None:
        Qp = np.array([hash_symbol], dtype=np.int64)
    else:
        Qp = Q[:stand_in_length(len(Q), per, tau)]
    return Compressor(Q, Qp, per, len(Q) - len(Qp))


def apply_compression(comp: Compressor, s) -> np.ndarray:
    """Replace the first occurrence of the anchor by its stand-in; empty if there is none."""
    s = as_symbols(s)
    q = comp.Q
    occ = int(find_first(q, 0, len(q), s, 0, len(s))) if len(q) <= len(s) else -1
    if occ < 0:
        return s[:0].copy()
    return np.concatenate([s[:occ], comp.Qp, s[occ + len(q):]])


def remap_alphabet(w, peers=(), terminal=None) -> LocalAlphabet:
    """Rank map of the window's ordinary symbols; peers' other symbols share one catch-all code.

    ``peers`` are accepted for symmetry with the callers and never enlarge the map.
    """
    return LocalAlphabet.of(w, terminal)


@dataclass
class MarkedBatch:
    node: np.ndarray
    depth: np.ndarray
    count: np.ndarray
    last_doc: np.ndarray

    @property
    def size(self) -> int:
        return len(self.node)


@dataclass
class ExactResult:
    span: DocSpan
    length: int
    windows: int = 0
    batches: int = 0
    candidates: int = 0
    mode: str = "small"
    bracket: tuple[int, int] = (0, 0)
    stats: dict = field(default_factory=dict)


def _audit_enabled(audit: bool | None) -> bool:
    if audit is not None:
        return audit
    return os.environ.get("SUBLCS_DEBUG_LABEL_LOG", "") not in ("", "0")


class WindowContext:
    """Everything held while window ``k`` is processed: its tree, exclusions and peer buffers."""

    def __init__(self, lists: WindowLists, k: int, info: np.ndarray, ws: Scope) -> None:
        c = lists.corpus
        P = lists.params
        tau = lists.tau
        self.lists, self.k, self.ws = lists, k, ws
        self.info = ws.track(info.copy())
        self.window = lists.window(k, self.info)
        general = lists.general
        pcap = 16 * tau + 4 if general else max(lists.window_len + 1, 4 * tau + 4)
        self.pbuf, self.pcol, self.pcodes = ws.empty(pcap), ws.empty(pcap), ws.empty(pcap)
        self.lnode, self.ldepth = ws.empty(pcap), ws.empty(pcap)
        self.peer_info = ws.zeros(I_SIZE)
        self.delta = 0
        kbuf, kcol = ws.empty(pcap), ws.empty(pcap)
        if general:
            self._set_anchor()
            tmp = lists.cursor(ws)
            blen = int(compress_window(c.S, c.offsets, c.lengths, P, tmp, self.info, kbuf, kcol))
            assert blen > 0
        else:
            blen = int(copy_window(c.S, c.offsets, c.lengths, P, self.info, kbuf, kcol))
        self.kbuf = kbuf[:blen]
        terminal = (self.kbuf >= c.sigma) & (self.kbuf < c.sigma + c.m)
        self.alphabet = LocalAlphabet(ws.track(np.unique(self.kbuf[~terminal])))
        codes = ws.empty(blen)
        A = int(encode_window(self.kbuf, blen, self.alphabet.symbols, self.alphabet.a, c.sigma, c.m, codes))
        self.tree = SuffixTree(self.kbuf, codes, self.alphabet, A, ws)
        t = self.tree
        self.top, self.bot, self.xstack = ws.empty(t.nodes), ws.empty(t.nodes), ws.empty(t.nodes)
        self.top[1:] = t.depth[t.parent[1:t.nodes]]
        self.top[0] = 0
        self.bot[:] = t.depth[:t.nodes] + 1
        if general:
            qp = max(int(P[P_QPLEN]), 1)
            self.lo_d, self.hi_d = qp + 2 * tau, qp + 3 * tau
        else:
            self.lo_d, self.hi_d = lists.ell, lists.ell + tau
        np.maximum(self.top, np.minimum(t.depth[:t.nodes], self.lo_d - 1), out=self.top)

    def _set_anchor(self) -> None:
        lists, P, tau, ell = self.lists, self.lists.params, self.lists.tau, self.lists.ell
        c = lists.corpus
        qs = int(c.offsets[self.info[I_DOC]] + self.info[I_POS]) + 2 * tau
        qlen = ell - 2 * tau
        per = int(period_capped(c.S, qs, qlen, 4 * tau))
        P[P_QS], P[P_QLEN] = qs, qlen
        P[P_QPLEN] = stand_in_length(qlen, per, tau) if per else 0
        ell_c, per_c, periodic = factorize(c.S, qs, qlen)
        P[P_TWELL], P[P_TWPER], P[P_TWPERIODIC] = ell_c, per_c, int(periodic)
        self.delta = qlen - max(int(P[P_QPLEN]), 1)
        self.per = per or None

    def _tree_args(self):
        t = self.tree
        return (t.text, t.start, t.depth, t.link, t.hk, t.hv, t.A)

    def exclude_earlier(self) -> np.ndarray:
        """Exclude nodes shared with earlier windows; returns the cursor positioned at this window."""
        lists, c = self.lists, self.lists.corpus
        cur = lists.cursor(self.ws)
        phase_exclude(c.S, c.offsets, c.lengths, lists.params, self.k, cur, self.peer_info,
                      self.pbuf, self.pcol, self.pcodes, self.alphabet.symbols, self.alphabet.a,
                      *self._tree_args(), self.tree.parent, self.top, self.lnode, self.ldepth)
        return cur

    def marker(self, start_cursor: np.ndarray):
        """Generator of marked batches (node, depth arrays) of at most ``tau`` items."""
        lists, c, ws, t = self.lists, self.lists.corpus, self.ws, self.tree
        tau = lists.tau
        state = ws.zeros(3)
        bcur = ws.track(start_cursor.copy())
        wcur = ws.empty(C_SIZE)
        mk_node, mk_depth = ws.empty(tau), ws.empty(tau)
        hcap = 1 << max(2 * tau + 1, 2).bit_length()
        hk, hv = ws.empty(hcap), ws.empty(hcap)
        while True:
            B = int(collect(c.S, c.offsets, c.lengths, lists.params, state, bcur, wcur, self.peer_info,
                            self.pbuf, self.pcol, self.pcodes, self.alphabet.symbols, self.alphabet.a,
                            *self._tree_args(), t.fchild, t.nodes, self.top, self.bot, self.hi_d,
                            self.lnode, self.ldepth, mk_node, mk_depth, hk, hv, tau))
            if B:
                yield mk_node[:B], mk_depth[:B]
            if state[S_STAGE] == 2:
                return

    def count(self, node: np.ndarray, depth: np.ndarray, kinds: int = SHORT_KIND | LONG_KIND,
              scope: Scope | None = None, stop: int | None = None) -> MarkedBatch:
        """Documents containing each marked label, over the chosen window kinds.

        The returned batch lives in ``scope`` (default: the window's scope).
        With ``stop`` set, counts are only exact below it.
        """
        lists, c, t = self.lists, self.lists.corpus, self.tree
        out_scope = scope or self.ws
        B = len(node)
        with self.ws.scope() as bs:
            order = bs.track(np.lexsort((depth, node)))
            sn, sd = bs.track(node[order]), bs.track(depth[order])
            nn = t.nodes
            ebeg, eend = bs.empty(nn), bs.empty(nn)
            R = nn + B
            rparent, rfchild, rnsib = bs.empty(R), bs.empty(R), bs.empty(R)
            rnode = bs.empty(B)
            refine(nn, t.parent, t.depth, B, sn, sd, bs.track(order.astype(np.int64)), ebeg, eend,
                   rparent, rfchild, rnsib, rnode)
            pcap = len(self.pbuf)
            att_node, att_color = bs.empty(pcap), bs.empty(pcap)
            head, hcnt, dup, uf, out = (bs.empty(R) for _ in range(5))
            nxt, last = bs.empty(pcap), bs.empty(pcap)
            stack = bs.empty(2 * R + 1)
            cnt, mdoc = out_scope.zeros(B), out_scope.full(B, -1)
            cur = lists.cursor(bs)
            saved = int(lists.params[P_KINDS])
            lists.params[P_KINDS] = kinds
            try:
                count_batch(c.S, c.offsets, c.lengths, lists.params, cur, self.peer_info,
                            self.pbuf, self.pcol, self.pcodes, self.alphabet.symbols, self.alphabet.a,
                            *self._tree_args(), nn, B, depth, int(depth.min()), sd, ebeg, eend,
                            rparent, rfchild, rnsib, rnode, R, self.lnode, self.ldepth, att_node, att_color,
                            head, nxt, hcnt, dup, uf, last, stack, out, cnt, mdoc,
                            c.m + 1 if stop is None else stop)
            finally:
                lists.params[P_KINDS] = saved
        return MarkedBatch(out_scope.track(node.copy()), out_scope.track(depth.copy()), cnt, mdoc)

    def apply(self, batch: MarkedBatch, d: int) -> np.ndarray:
        t = self.tree
        with self.ws.scope() as bs:
            accepted = bs.zeros(batch.size)
            apply_batch(batch.size, batch.node, batch.depth, batch.count, d, t.parent, t.depth,
                        t.fchild, t.nsib, self.top, self.bot, self.xstack, accepted)
            return accepted.astype(bool)

    def original(self, node: int, depth: int) -> tuple[int, int]:
        """0-based window offset and original length of a marked label."""
        return int(self.tree.wit[node]), int(depth) + self.delta

    def span(self, node: int, depth: int) -> DocSpan:
        pos, length = self.original(node, depth)
        return resolve(self.lists.corpus, self.window, pos + 1, length)

    def label_bytes(self, node: int, depth: int) -> bytes:
        span = self.span(node, depth)
        return self.lists.corpus.text(span).tobytes()

    def is_excluded(self, ref: NodeRef) -> bool:
        return bool(excluded(self.top, self.bot, ref.edge, self.tree.depth_of(ref)))


def count_batch_short(ctx: WindowContext, node, depth) -> MarkedBatch:
    """Counts over the groups of short documents only."""
    return ctx.count(np.asarray(node, np.int64), np.asarray(depth, np.int64), SHORT_KIND)


def count_batch_long(ctx: WindowContext, node, depth) -> MarkedBatch:
    """Counts over the slices of long documents only (one per document, however many slices hit)."""
    return ctx.count(np.asarray(node, np.int64), np.asarray(depth, np.int64), LONG_KIND)


def window_contexts(lists: WindowLists, ws: Scope) -> Iterator[WindowContext]:
    c = lists.corpus
    outer = lists.cursor(ws)
    info = ws.zeros(I_SIZE)
    k = 0
    while advance(c.lengths, lists.params, outer, info):
        with ws.scope() as wk:
            yield WindowContext(lists, k, info, wk)
        k += 1


def exact_lcs(c: Corpus, tau: int, meter: WorkspaceMeter = METER, audit: bool | None = None) -> ExactResult:
    """A longest string common to at least ``c.d`` documents, in O(tau) words of workspace."""
    if not 1 <= tau <= max(c.n, 1):
        raise ValueError(f"tau={tau} must satisfy 1 <= tau <= n={c.n}")
    seen: set[bytes] | None = set() if _audit_enabled(audit) else None
    with meter.scope() as ws:
        ws.charge(FRAME_WORDS)
        approx = approximate_lcs(c, tau, meter=meter)
        lo, hi = approx.interval
        if hi == 0:
            return ExactResult(DocSpan.empty(), 0, bracket=(lo, hi))
        ell = max(lo, 1)
        lists = build_window_lists(c, ell, tau, ws)
        best_len, best_span = 0, DocSpan.empty()
        windows = batches = candidates = 0
        for ctx in window_contexts(lists, ws):
            windows += 1
            start = ctx.exclude_earlier()
            for node, depth in ctx.marker(start):
                with ctx.ws.scope() as bs:
                    batch = ctx.count(node, depth, scope=bs, stop=c.d)
                    batches += 1
                    candidates += batch.size
                    if seen is not None:
                        for v, dl in zip(batch.node, batch.depth):
                            key = ctx.label_bytes(int(v), int(dl))
                            if key in seen:
                                raise InvariantViolation(
                                    f"label counted twice (window {ctx.k}, length {len(key) // 8})")
                            seen.add(key)
                    accepted = ctx.apply(batch, c.d)
                    for b in np.flatnonzero(accepted):
                        _, length = ctx.original(int(batch.node[b]), int(batch.depth[b]))
                        if length > best_len:
                            best_len = length
                            best_span = ctx.span(int(batch.node[b]), int(batch.depth[b]))
        return ExactResult(best_span, best_len, windows, batches, candidates,
                           "general" if lists.general else "small", (lo, hi))
