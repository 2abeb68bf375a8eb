"""Documents, sentinels and coordinate mapping.

The corpus is held as one flat read-only array ``S = T_1 $_1 T_2 $_2 ... T_m $_m``
so every document, window and pattern is a view given by index arithmetic.
Symbols of documents lie in ``[0, sigma)``; document ``j`` (0-based) is
terminated by the sentinel ``sigma + j`` and ``sigma + m`` is reserved for the
separator letter used by the compressed windows of the exact solver.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SHORT_GROUP = "short-group"
LONG_SLICE = "long-slice"
DEFAULT_SEP = 0x1F


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class DocSpan:
    """A substring of the input: 1-based ``doc`` and ``start``, ``len`` symbols.

    The empty answer is ``DocSpan(0, 0, 0)``.
    """

    doc: int
    start: int
    len: int

    @classmethod
    def empty(cls) -> "DocSpan":
        return cls(0, 0, 0)


@dataclass(frozen=True)
class Window:
    """One string of the window lists: a view plus its terminating sentinel.

    ``doc`` is 0 for a group of short documents (``members`` lists them), else
    the 1-based source document. ``start`` is the 1-based offset of the view in
    that document (1 for groups); ``len`` excludes the final sentinel but
    includes the inner sentinels of a group.
    """

    id: int
    doc: int
    start: int
    len: int
    sentinel: int
    kind: str
    members: tuple[int, ...] = field(default=())


@dataclass(frozen=True, eq=False)
class Corpus:
    S: np.ndarray
    offsets: np.ndarray
    lengths: np.ndarray
    sigma: int
    d: int

    @classmethod
    def from_docs(cls, docs: Sequence[Sequence[int]], d: int, sigma: int | None = None) -> "Corpus":
        if len(docs) == 0:
            raise CorpusError("at least one document is required")
        arrays = [_as_symbols(doc) for doc in docs]
        top = max((int(a.max()) for a in arrays if a.size), default=-1)
        if any(a.size and int(a.min()) < 0 for a in arrays):
            raise CorpusError("symbols must be non-negative integers")
        if sigma is None:
            sigma = top + 1 if top >= 0 else 1
        if top >= sigma:
            raise CorpusError(f"symbol {top} outside alphabet of size {sigma}")
        m = len(arrays)
        if not 2 <= d <= m:
            raise CorpusError(f"d={d} must satisfy 2 <= d <= m={m}")
        lengths = np.array([a.size for a in arrays], dtype=np.int64)
        offsets = np.zeros(m, dtype=np.int64)
        offsets[1:] = np.cumsum(lengths + 1)[:-1]
        S = np.empty(int(lengths.sum()) + m, dtype=np.int64)
        for j, a in enumerate(arrays):
            S[offsets[j]:offsets[j] + a.size] = a
            S[offsets[j] + a.size] = sigma + j
        S.setflags(write=False)
        return cls(S, offsets, lengths, int(sigma), int(d))

    @property
    def m(self) -> int:
        return len(self.lengths)

    @property
    def n(self) -> int:
        return int(self.lengths.sum())

    @property
    def hash_symbol(self) -> int:
        return self.sigma + self.m

    def sentinel(self, doc: int) -> int:
        """Sentinel of the 1-based document ``doc``."""
        return self.sigma + doc - 1

    def doc(self, j: int) -> np.ndarray:
        """Read-only view of the 1-based document ``j``."""
        o = int(self.offsets[j - 1])
        return self.S[o:o + int(self.lengths[j - 1])]

    @property
    def docs(self) -> list[np.ndarray]:
        return [self.doc(j) for j in range(1, self.m + 1)]

    def text(self, span: DocSpan) -> np.ndarray:
        if span.len == 0:
            return self.S[:0]
        return self.doc(span.doc)[span.start - 1:span.start - 1 + span.len]

    def with_d(self, d: int) -> "Corpus":
        if not 2 <= d <= self.m:
            raise CorpusError(f"d={d} must satisfy 2 <= d <= m={self.m}")
        return Corpus(self.S, self.offsets, self.lengths, self.sigma, int(d))

    def __repr__(self) -> str:
        return f"Corpus(m={self.m}, n={self.n}, sigma={self.sigma}, d={self.d})"


def _as_symbols(x) -> np.ndarray:
    if isinstance(x, str):
        return np.frombuffer(x.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)
    if isinstance(x, (bytes, bytearray, memoryview)):
        return np.frombuffer(bytes(x), dtype=np.uint8).astype(np.int64)
    return np.asarray(x, dtype=np.int64).reshape(-1)


def as_symbols(x) -> np.ndarray:
    """Coerce str/bytes/sequences of ints to a 1-D int64 array."""
    return _as_symbols(x)


def _split_bytes(data: bytes, sep: int | None) -> list[bytes]:
    if sep is None:
        return [data]
    return data.split(bytes([sep]))


def _parse_decimal(data: bytes) -> list[list[int]]:
    docs = []
    for chunk in data.decode("ascii").split("|"):
        doc = []
        for tok in chunk.split():
            try:
                v = int(tok)
            except ValueError:
                raise CorpusError(f"not a decimal symbol: {tok!r}") from None
            if v < 0:
                raise CorpusError(f"negative symbol {v}")
            doc.append(v)
        docs.append(doc)
    return docs


def _read_sources(sources) -> list[bytes]:
    out = []
    for src in sources:
        if isinstance(src, (bytes, bytearray)):
            out.append(bytes(src))
            continue
        path = Path(src)
        if path.is_dir():
            out.extend(p.read_bytes() for p in sorted(path.iterdir()) if p.is_file())
        else:
            out.append(path.read_bytes())
    return out


def load_corpus(sources: Iterable[bytes | str | os.PathLike], d: int,
                alphabet: str = "byte", sep: int | None = DEFAULT_SEP) -> Corpus:
    """Ingest documents from byte streams or files.

    Each source holds one document, or several separated by the byte ``sep``
    (byte mode) or by ``|`` (decimal mode, whitespace-separated integers).
    Directories contribute their files in name order.
    """
    blobs = _read_sources(list(sources))
    if not blobs:
        raise CorpusError("empty input set")
    if alphabet == "byte":
        docs = [list(part) for blob in blobs for part in _split_bytes(blob, sep)]
        return Corpus.from_docs(docs, d, sigma=256)
    if alphabet == "decimal":
        docs = [doc for blob in blobs for doc in _parse_decimal(blob)]
        return Corpus.from_docs(docs, d)
    raise CorpusError(f"unknown alphabet mode {alphabet!r}")


def resolve(c: Corpus, w: Window, offset: int, length: int) -> DocSpan:
    """Map the 1-based range ``[offset, offset+length-1]`` of window ``w`` to a DocSpan."""
    if length < 1 or offset < 1 or offset + length - 1 > w.len:
        raise CorpusError(f"range ({offset}, {length}) outside window of length {w.len}")
    if w.kind == LONG_SLICE:
        return DocSpan(w.doc, w.start + offset - 1, length)
    pos = offset
    for j in w.members:
        size = int(c.lengths[j - 1])
        if pos <= size:
            if pos + length - 1 > size:
                raise CorpusError("range crosses a sentinel")
            return DocSpan(j, pos, length)
        pos -= size + 1
        if pos == 0:
            raise CorpusError("range starts on a sentinel")
    raise CorpusError("range outside the group")
