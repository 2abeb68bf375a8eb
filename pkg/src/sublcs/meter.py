"""Word-granular workspace accounting.

Every array the algorithms allocate is obtained through a :class:`Scope`, which
charges its size (in 8-byte words) to a :class:`WorkspaceMeter` and releases it
when the scope closes. Input corpora and the returned record are never charged.
Numba kernels allocate nothing themselves; their scalar frame is charged as a
fixed constant by the caller.
"""
from __future__ import annotations

import numpy as np

WORD_BYTES = 8


def words_of(arr: np.ndarray) -> int:
    return -(-arr.nbytes // WORD_BYTES)


class WorkspaceMeter:
    def __init__(self) -> None:
        self.current = 0
        self.peak = 0

    def alloc(self, words: int) -> None:
        if words < 0:
            raise ValueError("negative allocation")
        self.current += words
        if self.current > self.peak:
            self.peak = self.current

    def free(self, words: int) -> None:
        if words > self.current:
            raise RuntimeError(f"meter underflow: freeing {words} of {self.current}")
        self.current -= words

    def reset(self) -> None:
        """Restart the high-water mark from the current level."""
        self.peak = self.current

    def scope(self) -> "Scope":
        return Scope(self)

    def __repr__(self) -> str:
        return f"WorkspaceMeter(current={self.current}, peak={self.peak})"


class Scope:
    """Allocation arena; everything charged here is released on exit."""

    def __init__(self, meter: WorkspaceMeter) -> None:
        self.meter = meter
        self.words = 0

    def __enter__(self) -> "Scope":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        self.meter.free(self.words)
        self.words = 0

    def charge(self, words: int) -> None:
        self.meter.alloc(words)
        self.words += words

    def track(self, arr: np.ndarray) -> np.ndarray:
        self.charge(words_of(arr))
        return arr

    def empty(self, n: int, dtype=np.int64) -> np.ndarray:
        return self.track(np.empty(max(int(n), 0), dtype=dtype))

    def full(self, n: int, value, dtype=np.int64) -> np.ndarray:
        return self.track(np.full(max(int(n), 0), value, dtype=dtype))

    def zeros(self, n: int, dtype=np.int64) -> np.ndarray:
        return self.full(n, 0, dtype)

    def scope(self) -> "Scope":
        return Scope(self.meter)


# process-wide default; the CLI and the tests read its peak
METER = WorkspaceMeter()
