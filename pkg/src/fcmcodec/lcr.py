"""Lexicographic combinatorial rank coding of channel-index subsets.

A strictly increasing k-subset of {0..N-1} is identified by its zero-based
position in the lexicographic enumeration of all k-subsets. Ranks are exact
arbitrary-precision integers: C(256, 128) alone needs 252 bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, RankRangeError


def binomial(n: int, r: int) -> int:
    """Exact C(n, r); 0 whenever r < 0 or r > n."""
    if n < 0:
        raise DomainError(f"binomial needs n >= 0, got {n}")
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


@dataclass(frozen=True)
class ChannelIndexSet:
    """Strictly increasing channel indices drawn from [0, total_channels)."""

    indices: tuple[int, ...]
    total_channels: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if self.total_channels < 0:
            raise DomainError("total_channels must be >= 0")
        for a, b in zip(idx, idx[1:]):
            if a >= b:
                raise DomainError(f"indices not strictly increasing: {a} >= {b}")
        if idx and (idx[0] < 0 or idx[-1] >= self.total_channels):
            raise DomainError(
                f"indices must lie in [0, {self.total_channels}), got {idx}"
            )
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class LcrCode:
    """(k, rank) pair identifying one k-subset."""

    k: int
    rank: int

    def __post_init__(self):
        if self.k < 0 or self.rank < 0:
            raise DomainError("k and rank must be non-negative")


def lcr_encode(s: ChannelIndexSet) -> LcrCode:
    """Rank a subset: count combinations skipped before each chosen index."""
    n = s.total_channels
    k = len(s)
    rank = 0
    prev = -1
    for t, i_t in enumerate(s.indices):
        for j in range(prev + 1, i_t):
            rank += binomial(n - j - 1, k - t - 1)
        prev = i_t
    return LcrCode(k=k, rank=rank)


def lcr_decode(code: LcrCode, total_channels: int) -> ChannelIndexSet:
    """Invert lcr_encode: walk candidate indices, subtracting block sizes."""
    n = total_channels
    k = code.k
    if k > n:
        raise DomainError(f"k={k} exceeds total channels N={n}")
    if code.rank >= binomial(n, k):
        raise RankRangeError(f"rank {code.rank} >= C({n}, {k})")
    temp = code.rank
    x = 0
    out = []
    for t in range(k):
        while binomial(n - x - 1, k - t - 1) <= temp:
            temp -= binomial(n - x - 1, k - t - 1)
            x += 1
        out.append(x)
        x += 1
    return ChannelIndexSet(tuple(out), n)
