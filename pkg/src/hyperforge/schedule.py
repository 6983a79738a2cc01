"""Round bookkeeping: pairings of round numbers with tuples, and target cycling."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import FiniteSeq
from .errors import ConfigError


class PairOrder:
    """Bijection between round numbers r >= 1 and pairs (m, l) in N x N.

    Pairs are ordered by m + l, then by m ascending (diagonal enumeration), so
    r = 1 -> (1, 1), r = 2 -> (1, 2), r = 3 -> (2, 1), r = 4 -> (1, 3), ...
    """

    def index(self, m: int, l: int) -> int:
        if m < 1 or l < 1:
            raise ValueError("pair entries must be >= 1")
        d = m + l
        return (d - 2) * (d - 1) // 2 + m

    def decode(self, r: int) -> tuple[int, int]:
        if r < 1:
            raise ValueError("round numbers start at 1")
        x = (math.isqrt(8 * r - 7) - 1) // 2
        while x * (x + 1) // 2 >= r:
            x -= 1
        while (x + 1) * (x + 2) // 2 < r:
            x += 1
        m = r - x * (x + 1) // 2
        l = (x + 2) - m
        return m, l

    def max_degree_before(self, r: int) -> int:
        """max m' over all rounds r' < r (0 when r == 1)."""
        best = 0
        for rp in range(1, r):
            best = max(best, self.decode(rp)[0])
        return best


class TripleOrder:
    """Bijection between r >= 1 and triples (m, l, nu), ordered by total sum,
    then m ascending, then l ascending."""

    def index(self, m: int, l: int, nu: int) -> int:
        if min(m, l, nu) < 1:
            raise ValueError("triple entries must be >= 1")
        s = m + l + nu
        r = math.comb(s - 1, 3)
        for mp in range(1, m):
            r += s - mp - 1
        return r + l

    def decode(self, r: int) -> tuple[int, int, int]:
        if r < 1:
            raise ValueError("round numbers start at 1")
        s = 3
        while math.comb(s, 3) < r:
            s += 1
        rem = r - math.comb(s - 1, 3)
        for m in range(1, s - 1):
            block = s - m - 1
            if rem <= block:
                return m, rem, s - m - rem
            rem -= block
        raise AssertionError("triple decode fell through")

    def max_degree_before(self, r: int) -> int:
        best = 0
        for rp in range(1, r):
            best = max(best, self.decode(rp)[0])
        return best


@dataclass
class TargetSchedule:
    """Assignment l -> y^(l) cycling a finite base list of nonzero targets.

    With a partition into K residue classes, l belongs to class ((l-1) mod K)+1
    and the base index advances once per full sweep of classes, so every class
    cycles through all base targets in order.
    """

    targets: list[FiniteSeq]
    K: int = 1
    _smax: int = field(init=False, repr=False)

    def __post_init__(self):
        if not self.targets:
            raise ConfigError("target schedule needs at least one target")
        if any(t.is_zero for t in self.targets):
            raise ConfigError("targets must be nonzero finite sequences")
        if self.K < 1:
            raise ConfigError("partition size K must be >= 1")
        self._smax = max(t.max_index for t in self.targets)

    def target(self, l: int) -> FiniteSeq:
        if l < 1:
            raise ValueError("target labels start at 1")
        return self.targets[((l - 1) // self.K) % len(self.targets)]

    def class_of(self, l: int) -> int:
        return (l - 1) % self.K + 1

    def s(self, l: int) -> int:
        """Largest index of the nonzero coordinates of y^(l)."""
        return self.target(l).max_index

    @property
    def max_support(self) -> int:
        return self._smax
