"""Suffix trees of single windows.

A tree is a struct of int64 arrays built by Ukkonen's algorithm over a local
alphabet: the window's distinct ordinary symbols are ranked ``0..a-1``, ``a``
is a catch-all for symbols the window does not contain, and every terminal
symbol (sentinel) of the window gets its own code above ``a``. Child lookup is
an open-addressing table keyed by ``node * A + code``, so the tree takes
``O(|window|)`` words whatever the size of the input alphabet.

Node ``0`` is the root. A node of the underlying trie is addressed by the edge
it lies on (the id of the edge's lower endpoint) and its string depth; the
public :class:`NodeRef` uses the offset above the lower endpoint instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .corpus import as_symbols
from .meter import METER, Scope

NO = -1


# -- child table ---------------------------------------------------------------

@njit(cache=True, inline="always")
def _slot(key, mask):
    h = key * 2654435761
    h ^= h >> 15
    return h & mask


@njit(cache=True)
def hget(hk, hv, key):
    mask = len(hk) - 1
    i = _slot(key, mask)
    while True:
        k = hk[i]
        if k == key:
            return hv[i]
        if k == -1:
            return -1
        i = (i + 1) & mask


@njit(cache=True)
def hput(hk, hv, key, val):
    mask = len(hk) - 1
    i = _slot(key, mask)
    while True:
        k = hk[i]
        if k == key or k == -1:
            hk[i] = key
            hv[i] = val
            return
        i = (i + 1) & mask


# -- construction --------------------------------------------------------------

@njit(cache=True)
def ukkonen(t, n, A, start, end, link, hk, hv):
    """Build the suffix tree of ``t[:n]``; ``t[n-1]`` must be unique. Returns the node count."""
    for i in range(len(hk)):
        hk[i] = -1
    start[0] = 0
    end[0] = 0
    link[0] = 0
    nn = 1
    an = 0
    ae = 0
    al = 0
    rem = 0
    for i in range(n):
        rem += 1
        last = -1
        while rem > 0:
            if al == 0:
                ae = i
            c = t[ae]
            nxt = hget(hk, hv, an * A + c)
            if nxt == -1:
                leaf = nn
                nn += 1
                start[leaf] = i
                end[leaf] = n
                link[leaf] = 0
                hput(hk, hv, an * A + c, leaf)
                if last != -1:
                    link[last] = an
                    last = -1
            else:
                el = min(end[nxt], i + 1) - start[nxt]
                if al >= el:
                    ae += el
                    al -= el
                    an = nxt
                    continue
                if t[start[nxt] + al] == t[i]:
                    if last != -1 and an != 0:
                        link[last] = an
                        last = -1
                    al += 1
                    break
                split = nn
                nn += 1
                start[split] = start[nxt]
                end[split] = start[nxt] + al
                link[split] = 0
                hput(hk, hv, an * A + c, split)
                leaf = nn
                nn += 1
                start[leaf] = i
                end[leaf] = n
                link[leaf] = 0
                hput(hk, hv, split * A + t[i], leaf)
                start[nxt] += al
                hput(hk, hv, split * A + t[start[nxt]], nxt)
                if last != -1:
                    link[last] = split
                last = split
            rem -= 1
            if an == 0 and al > 0:
                al -= 1
                ae = i - rem + 1
            elif an != 0:
                an = link[an]
    return nn


@njit(cache=True)
def finish(nn, n, A, start, end, hk, hv, parent, depth, fchild, nsib, pre, size, order, wit, stack):
    """Parent/child lists, string depths, preorder numbers, subtree sizes and one occurrence per node."""
    for v in range(nn):
        fchild[v] = -1
        nsib[v] = -1
    parent[0] = -1
    for s in range(len(hk)):
        key = hk[s]
        if key >= 0:
            u = key // A
            c = hv[s]
            parent[c] = u
            nsib[c] = fchild[u]
            fchild[u] = c
    depth[0] = 0
    top = 1
    stack[0] = 0
    cnt = 0
    while top > 0:
        top -= 1
        v = stack[top]
        pre[v] = cnt
        order[cnt] = v
        cnt += 1
        c = fchild[v]
        while c != -1:
            depth[c] = depth[v] + end[c] - start[c]
            stack[top] = c
            top += 1
            c = nsib[c]
    for v in range(nn):
        size[v] = 1
        wit[v] = n - depth[v] if fchild[v] == -1 else n
    for idx in range(nn - 1, 0, -1):
        v = order[idx]
        p = parent[v]
        size[p] += size[v]
        if wit[v] < wit[p]:
            wit[p] = wit[v]


# -- matching statistics -------------------------------------------------------

@njit(cache=True)
def ms_loci(t, start, depth, link, hk, hv, A, p, ps, plen, out_node, out_depth):
    """For each suffix of ``p[ps:ps+plen]`` the locus ``(edge, depth)`` where it leaves the tree."""
    u = 0
    L = 0
    for q in range(plen):
        while q + L < plen:
            r = L - depth[u]
            ch = p[ps + q + L]
            if r == 0:
                c = hget(hk, hv, u * A + ch)
                if c == -1:
                    break
                L += 1
                if depth[c] == L:
                    u = c
            else:
                c = hget(hk, hv, u * A + p[ps + q + depth[u]])
                if t[start[c] + r] == ch:
                    L += 1
                    if depth[c] == L:
                        u = c
                else:
                    break
        if L == depth[u]:
            out_node[q] = u
        else:
            out_node[q] = hget(hk, hv, u * A + p[ps + q + depth[u]])
        out_depth[q] = L
        if L == 0:
            continue
        if u != 0:
            u = link[u]
        L -= 1
        while L > depth[u]:
            c = hget(hk, hv, u * A + p[ps + q + 1 + depth[u]])
            if depth[c] <= L:
                u = c
            else:
                break


# -- Hui's distinct colour counting ---------------------------------------------

@njit(cache=True, inline="always")
def _find(uf, x):
    r = x
    while uf[r] != r:
        r = uf[r]
    while uf[x] != r:
        nx = uf[x]
        uf[x] = r
        x = nx
    return r


@njit(cache=True)
def hui(R, parent, fchild, nsib, att_node, att_color, P, ncol,
        head, nxt, cnt, dup, uf, last, stack, out):
    """Distinct colours below every node of a rooted tree (root 0) with coloured leaves attached.

    Attachment ``i`` hangs a leaf of colour ``att_color[i]`` under node
    ``att_node[i]``. Consecutive same-coloured leaves in DFS order contribute a
    duplicate at their lowest common ancestor, found by Tarjan's offline
    union-find; ``out[v]`` is leaves minus duplicates in the subtree of ``v``.
    """
    for v in range(R):
        head[v] = -1
        cnt[v] = 0
        dup[v] = 0
        uf[v] = v
    for c in range(ncol):
        last[c] = -1
    for i in range(P):
        v = att_node[i]
        nxt[i] = head[v]
        head[v] = i
        cnt[v] += 1
    top = 1
    stack[0] = 0
    while top > 0:
        top -= 1
        e = stack[top]
        if e >= 0:
            i = head[e]
            while i != -1:
                col = att_color[i]
                if last[col] != -1:
                    dup[_find(uf, last[col])] += 1
                last[col] = e
                i = nxt[i]
            stack[top] = -e - 1
            top += 1
            c = fchild[e]
            while c != -1:
                stack[top] = c
                top += 1
                c = nsib[c]
        else:
            v = -e - 1
            out[v] = cnt[v] - dup[v]
            p = parent[v]
            if p >= 0:
                uf[v] = p
                cnt[p] += cnt[v]
                dup[p] += dup[v]


# -- exclusion intervals ---------------------------------------------------------

@njit(cache=True)
def excl_anc(parent, depth, top, c, dl):
    """Exclude the node at depth ``dl`` on edge ``c`` together with all its ancestors."""
    if c == 0:
        return
    if dl > top[c]:
        top[c] = dl
    x = parent[c]
    while x > 0:
        if top[x] >= depth[x]:
            break
        top[x] = depth[x]
        x = parent[x]


@njit(cache=True)
def excl_desc(parent, depth, fchild, nsib, bot, stack, c, dl):
    """Exclude the node at depth ``dl`` on edge ``c`` together with its whole subtree."""
    if c != 0 and dl < bot[c]:
        bot[c] = dl
    sp = 0
    ch = fchild[c]
    while ch != -1:
        stack[sp] = ch
        sp += 1
        ch = nsib[ch]
    while sp > 0:
        sp -= 1
        e = stack[sp]
        full = depth[parent[e]] + 1
        if bot[e] <= full:
            continue
        bot[e] = full
        ch = fchild[e]
        while ch != -1:
            stack[sp] = ch
            sp += 1
            ch = nsib[ch]


@njit(cache=True, inline="always")
def excluded(top, bot, c, dl):
    return c == 0 or dl <= top[c] or dl >= bot[c]


# -- Python surface ----------------------------------------------------------------

class LocalAlphabet:
    """Rank map of a window's ordinary symbols; everything else goes to one catch-all code."""

    def __init__(self, symbols: np.ndarray) -> None:
        self.symbols = np.asarray(symbols, dtype=np.int64)  # sorted, distinct
        self.a = len(self.symbols)

    @classmethod
    def of(cls, window, terminal=None) -> "LocalAlphabet":
        w = as_symbols(window)
        mask = np.zeros(len(w), dtype=bool) if terminal is None else np.asarray(terminal, dtype=bool)
        return cls(np.unique(w[~mask]))

    @property
    def catch_all(self) -> int:
        return self.a

    def __len__(self) -> int:
        return self.a + 1

    def __getitem__(self, symbol: int) -> int:
        k = int(np.searchsorted(self.symbols, symbol))
        return k if k < self.a and self.symbols[k] == symbol else self.a

    def encode(self, s) -> np.ndarray:
        s = as_symbols(s)
        k = np.searchsorted(self.symbols, s)
        hit = k < self.a
        hit[hit] = self.symbols[k[hit]] == s[hit]
        return np.where(hit, k, self.a).astype(np.int64)

    def as_dict(self) -> dict[int, int]:
        return {int(x): i for i, x in enumerate(self.symbols)}


@dataclass(frozen=True)
class NodeRef:
    """Edge (lower endpoint id) and distance above that endpoint; offset 0 is explicit."""

    edge: int
    offset: int = 0


def _pow2_at_least(x: int) -> int:
    return 1 << max(int(x) - 1, 1).bit_length()


class SuffixTree:
    """Suffix tree of one terminated window, sized ``O(|window|)`` words."""

    def __init__(self, source: np.ndarray, codes: np.ndarray, alphabet: LocalAlphabet,
                 A: int, scope: Scope | None = None) -> None:
        n = len(codes)
        own = scope is None
        self._scope = METER.scope() if own else scope
        ws = self._scope
        cap = 2 * n + 1
        self.source = source
        self.alphabet = alphabet
        self.text = codes
        self.A = A
        self.n = n
        self.start = ws.empty(cap)
        self.end = ws.empty(cap)
        self.link = ws.empty(cap)
        self.parent = ws.empty(cap)
        self.depth = ws.empty(cap)
        self.fchild = ws.empty(cap)
        self.nsib = ws.empty(cap)
        self.pre = ws.empty(cap)
        self.size = ws.empty(cap)
        self.order = ws.empty(cap)
        self.wit = ws.empty(cap)
        hcap = _pow2_at_least(2 * cap)
        self.hk = ws.empty(hcap)
        self.hv = ws.empty(hcap)
        stack = ws.empty(cap)
        self.nodes = int(ukkonen(codes, n, A, self.start, self.end, self.link, self.hk, self.hv))
        finish(self.nodes, n, A, self.start, self.end, self.hk, self.hv, self.parent, self.depth,
               self.fchild, self.nsib, self.pre, self.size, self.order, self.wit, stack)

    def release(self) -> None:
        self._scope.close()

    # structure
    def children(self, v: int) -> list[int]:
        out = []
        c = int(self.fchild[v])
        while c != NO:
            out.append(c)
            c = int(self.nsib[c])
        return out

    def is_leaf(self, v: int) -> bool:
        return self.fchild[v] == NO

    def leaves(self) -> list[int]:
        return [v for v in range(self.nodes) if self.fchild[v] == NO]

    def internal_nodes(self) -> list[int]:
        return [v for v in range(1, self.nodes) if self.fchild[v] != NO]

    def suffix_start(self, leaf: int) -> int:
        """0-based start of the suffix ending at ``leaf``."""
        return self.n - int(self.depth[leaf])

    # addressing
    def ref(self, edge: int, depth: int) -> NodeRef:
        return NodeRef(int(edge), int(self.depth[edge]) - int(depth))

    def depth_of(self, ref: NodeRef) -> int:
        return int(self.depth[ref.edge]) - ref.offset

    def label(self, ref: NodeRef) -> tuple[int, ...]:
        w = int(self.wit[ref.edge])
        return tuple(int(x) for x in self.source[w:w + self.depth_of(ref)])

    def locate(self, x) -> NodeRef | None:
        """NodeRef of the string ``x`` or ``None`` when it is not a substring of the window."""
        codes = self.alphabet.encode(x)
        if np.any(codes == self.alphabet.catch_all):
            return None
        u, L = 0, 0
        while L < len(codes):
            c = int(hget(self.hk, self.hv, u * self.A + int(codes[L])))
            if c == NO:
                return None
            k = int(self.start[c])
            stop = min(int(self.depth[c]), len(codes))
            while L < stop:
                if self.text[k] != codes[L]:
                    return None
                k += 1
                L += 1
            if L == self.depth[c]:
                u = c
            else:
                return NodeRef(c, int(self.depth[c]) - L)
        return NodeRef(u, 0)

    def all_refs(self) -> Iterable[NodeRef]:
        """Every explicit and implicit node except the root."""
        for c in range(1, self.nodes):
            for off in range(int(self.depth[c] - self.depth[self.parent[c]])):
                yield NodeRef(c, off)

    def export(self) -> str:
        """One line per non-root node in preorder: ``id parent depth label``."""
        lines = []
        for idx in range(1, self.nodes):
            v = int(self.order[idx])
            s, e = int(self.start[v]), int(self.end[v])
            lab = " ".join(str(int(x)) for x in self.source[s:e])
            lines.append(f"{v} {int(self.parent[v])} {int(self.depth[v])} {lab}")
        return "\n".join(lines)


def build(w, alphabet: LocalAlphabet | None = None, terminal=None, scope: Scope | None = None) -> SuffixTree:
    """Suffix tree of a window whose last symbol is a terminal.

    ``terminal`` flags the window's terminal (sentinel) positions; by default
    only the last one. Terminals get private codes and never match anything.
    """
    src = as_symbols(w)
    if len(src) == 0:
        raise ValueError("window must be non-empty")
    if terminal is None:
        terminal = np.zeros(len(src), dtype=bool)
        terminal[-1] = True
    terminal = np.asarray(terminal, dtype=bool)
    if not terminal[-1]:
        raise ValueError("window must end with a terminal")
    if alphabet is None:
        alphabet = LocalAlphabet.of(src, terminal)
    codes = alphabet.encode(src)
    if np.any(codes[~terminal] == alphabet.catch_all):
        raise ValueError("symbol outside the local alphabet")
    codes[terminal] = alphabet.a + 1 + np.arange(int(terminal.sum()))
    A = alphabet.a + 1 + int(terminal.sum())
    return SuffixTree(src, codes, alphabet, A, scope)


@dataclass
class Overlay:
    """Where each suffix of an added string leaves the base tree.

    ``node[q], depth[q]`` is the locus of the longest prefix of suffix ``q`` of
    the added string that occurs in the base window; these loci are the nodes
    of the generalized tree of both strings that lie in the base tree.
    """

    tree: SuffixTree
    node: np.ndarray
    depth: np.ndarray
    colors: np.ndarray

    def branch_points(self) -> list[NodeRef]:
        return [self.tree.ref(c, d) for c, d in zip(self.node, self.depth) if d > 0]

    def shared_nodes(self) -> set[NodeRef]:
        """Explicit nodes of the generalized tree whose labels are substrings of the base."""
        refs = {NodeRef(v, 0) for v in self.tree.internal_nodes()}
        refs.update(self.branch_points())
        return refs

    def shared_substrings(self) -> set[tuple[int, ...]]:
        out = set()
        for ref in self.branch_points():
            lab = self.tree.label(ref)
            for L in range(1, len(lab) + 1):
                for i in range(len(lab) - L + 1):
                    out.add(lab[i:i + L])
        return out


def add_string(t: SuffixTree, s, colors: Sequence[int] | None = None) -> Overlay:
    """Overlay the string ``s`` on ``t``; the base tree is not modified."""
    codes = t.alphabet.encode(s)
    n = len(codes)
    node = np.empty(n, dtype=np.int64)
    dep = np.empty(n, dtype=np.int64)
    ms_loci(t.text, t.start, t.depth, t.link, t.hk, t.hv, t.A, codes, 0, n, node, dep)
    col = np.zeros(n, dtype=np.int64) if colors is None else np.asarray(colors, dtype=np.int64)
    return Overlay(t, node, dep, col)


def count_distinct_colors(parent: Sequence[int], att_node: Sequence[int], att_color: Sequence[int]) -> np.ndarray:
    """Distinct colours below each node of the tree given by ``parent`` (root 0, ``parent[0] = -1``)."""
    parent = np.asarray(parent, dtype=np.int64)
    R = len(parent)
    fchild = np.full(R, -1, dtype=np.int64)
    nsib = np.full(R, -1, dtype=np.int64)
    for v in range(R - 1, 0, -1):
        p = parent[v]
        nsib[v] = fchild[p]
        fchild[p] = v
    att_node = np.asarray(att_node, dtype=np.int64)
    att_color = np.asarray(att_color, dtype=np.int64)
    _, col = np.unique(att_color, return_inverse=True)
    col = col.astype(np.int64).reshape(-1)
    P = len(att_node)
    ncol = int(col.max()) + 1 if P else 0
    out = np.zeros(R, dtype=np.int64)
    hui(R, parent, fchild, nsib, att_node, col, P, ncol,
        np.empty(R, np.int64), np.empty(max(P, 1), np.int64), np.empty(R, np.int64),
        np.empty(R, np.int64), np.empty(R, np.int64), np.empty(max(ncol, 1), np.int64),
        np.empty(2 * R + 1, np.int64), out)
    return out


def tree_colors(t: SuffixTree, overlays: Iterable[Overlay]) -> np.ndarray:
    """Distinct overlay colours below every explicit node of ``t``.

    A locus strictly inside an edge counts for the edge's upper endpoint and above.
    """
    nodes, cols = [], []
    for ov in overlays:
        for c, d, col in zip(ov.node, ov.depth, ov.colors):
            c = int(c)
            nodes.append(c if d == t.depth[c] else int(t.parent[c]))
            cols.append(int(col))
    parent = t.parent[:t.nodes].copy()
    return count_distinct_colors(parent, nodes, cols) if nodes else np.zeros(t.nodes, dtype=np.int64)


class ExclusionSet:
    """Per-edge interval of non-excluded depths, ``(top[c], bot[c])`` exclusive."""

    def __init__(self, t: SuffixTree, scope: Scope | None = None) -> None:
        ws = scope or t._scope
        self.tree = t
        self.top = ws.empty(t.nodes)
        self.bot = ws.empty(t.nodes)
        self._stack = ws.empty(t.nodes)
        par = t.parent[:t.nodes]
        self.top[1:] = t.depth[par[1:]]
        self.top[0] = 0
        self.bot[:] = t.depth[:t.nodes] + 1

    def is_excluded(self, ref: NodeRef) -> bool:
        t = self.tree
        return bool(excluded(self.top, self.bot, ref.edge, t.depth_of(ref)))

    def exclude_with_ancestors(self, ref: NodeRef) -> None:
        t = self.tree
        excl_anc(t.parent, t.depth, self.top, ref.edge, t.depth_of(ref))

    def exclude_with_descendants(self, ref: NodeRef) -> None:
        t = self.tree
        excl_desc(t.parent, t.depth, t.fchild, t.nsib, self.bot, self._stack, ref.edge, t.depth_of(ref))

    def exclude_shallower(self, bound: int) -> None:
        """Exclude every node of depth below ``bound`` (an ancestor-closed set)."""
        t = self.tree
        np.maximum(self.top, np.minimum(t.depth[:t.nodes], bound - 1), out=self.top)
