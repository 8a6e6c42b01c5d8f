"""Opens of the Sorgenfrey line as finite unions of rational half-open intervals ``[a, b[``.

Finite unions of half-open intervals are closed under union, intersection
and difference, so the Boolean ring machinery applies directly.  Countable
opens only occur as outputs of the refuters and carry an upper bound on
their measure instead of an exact value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import PreconditionError
from .scalar import rational
from .valuation import SPACE_RL, Valuation


def _pair(p) -> tuple[Fraction, Fraction]:
    a, b = p
    return rational(a), rational(b)


def _normalize(pairs) -> tuple:
    ivs = sorted((a, b) for a, b in pairs if a < b)
    out: list[list[Fraction]] = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


@dataclass(frozen=True)
class RlOpen:
    """Sorted, pairwise disjoint, non-adjacent intervals ``[a, b[``."""

    intervals: tuple = ()
    space = SPACE_RL

    def __post_init__(self):
        prev = None
        for a, b in self.intervals:
            if not a < b:
                raise PreconditionError(f"empty interval [{a},{b}[ in normal form")
            if prev is not None and not prev < a:
                raise PreconditionError("intervals must be sorted and non-adjacent; use normalize")
            prev = b

    def __contains__(self, x) -> bool:
        return self.interval_of(x) is not None

    def interval_of(self, x):
        """The interval ``(a, b)`` of the normal form containing ``x``, or None."""
        x = rational(x)
        lo, hi = 0, len(self.intervals)
        while lo < hi:
            mid = (lo + hi) // 2
            a, b = self.intervals[mid]
            if x < a:
                hi = mid
            elif x >= b:
                lo = mid + 1
            else:
                return (a, b)
        return None

    def is_empty(self) -> bool:
        return not self.intervals

    def union(self, other: "RlOpen") -> "RlOpen":
        return RlOpen(_normalize(self.intervals + other.intervals))

    def intersect(self, other: "RlOpen") -> "RlOpen":
        out = []
        i = j = 0
        A, B = self.intervals, other.intervals
        while i < len(A) and j < len(B):
            lo = max(A[i][0], B[j][0])
            hi = min(A[i][1], B[j][1])
            if lo < hi:
                out.append((lo, hi))
            if A[i][1] < B[j][1]:
                i += 1
            else:
                j += 1
        return RlOpen(_normalize(out))

    def difference(self, other: "RlOpen") -> "RlOpen":
        out = []
        for a, b in self.intervals:
            cur = a
            for c, d in other.intervals:
                if d <= cur or c >= b:
                    continue
                if c > cur:
                    out.append((cur, c))
                cur = max(cur, d)
                if cur >= b:
                    break
            if cur < b:
                out.append((cur, b))
        return RlOpen(_normalize(out))

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def issubset(self, other: "RlOpen") -> bool:
        for a, b in self.intervals:
            iv = other.interval_of(a)
            if iv is None or iv[1] < b:
                return False
        return True

    def bottom(self) -> "RlOpen":
        return RlOpen()

    def sort_key(self):
        return self.intervals

    def endpoints(self) -> list[Fraction]:
        return [x for iv in self.intervals for x in iv]

    def __repr__(self):
        body = " + ".join(f"[{a},{b}[" for a, b in self.intervals)
        return f"RlOpen({body or 'empty'})"


def normalize(raw: Iterable) -> RlOpen:
    """Canonical form of a list of ``(a, b)`` pairs; pairs with ``a >= b`` are dropped."""
    return RlOpen(_normalize(_pair(p) for p in raw))


def interval(a, b) -> RlOpen:
    return normalize([(a, b)])


def lambda_eval(U: RlOpen) -> Fraction:
    return sum((b - a for a, b in U.intervals), Fraction(0))


class LebesgueRl(Valuation):
    """The Lebesgue measure restricted to the opens of the Sorgenfrey line."""

    tag = "lebesgue"
    space = SPACE_RL

    def evaluate(self, U):
        return lambda_eval(U)

    def __repr__(self):
        return "LebesgueRl()"


LAMBDA = LebesgueRl()


def shrink_interval(x, bound, U: RlOpen) -> Fraction:
    """``min(bound, b - x)`` for the interval ``[a, b[`` of ``U`` holding ``x``."""
    x, bound = rational(x), rational(bound)
    if bound <= 0:
        raise PreconditionError("bound must be positive")
    iv = U.interval_of(x)
    if iv is None:
        raise PreconditionError(f"point-not-in-open: {x} not in {U!r}")
    return min(bound, iv[1] - x)


# -- countable opens --------------------------------------------------------

@dataclass(frozen=True)
class TailFamily:
    """Intervals ``[x_{start+t}, x_{start+t} + scale / 2^(stride*t)[`` for ``t >= 0``.

    ``x_j`` are the points of a descending geometric chain (any object with
    ``point(j)``, ``limit`` and ``direction``).  ``stride`` lets several
    chains share one global geometric budget when they are enumerated
    interleaved.
    """

    chain: object
    start: int
    scale: Fraction
    stride: int = 1

    def __post_init__(self):
        if self.chain.direction != "descending":
            raise PreconditionError("tails are only anchored on descending chains")
        if self.start < 0 or self.stride < 1 or self.scale <= 0:
            raise PreconditionError("bad tail parameters")

    @classmethod
    def geometric(cls, chain, s, start: int = 0) -> "TailFamily":
        """Lengths ``s / 2^(j+1)`` at chain index ``j >= start``."""
        return cls(chain, start, rational(s) / 2 ** (start + 1), 1)

    def anchor(self, t: int) -> Fraction:
        return self.chain.point(self.start + t)

    def length(self, t: int) -> Fraction:
        return self.scale / 2 ** (self.stride * t)

    def total(self) -> Fraction:
        """Closed form of the sum of all lengths."""
        return self.scale / (1 - Fraction(1, 2 ** self.stride))

    def __contains__(self, x) -> bool:
        x = rational(x)
        if x <= self.chain.limit:
            return False
        t = 0
        while self.anchor(t) > x:
            t += 1
        # from the first anchor at or below x on, the gap x - anchor grows
        # while the lengths shrink, so only this piece can hold x
        return x - self.anchor(t) < self.length(t)


@dataclass(frozen=True)
class CountableRlOpen:
    finite_part: RlOpen
    tails: tuple = ()

    def __contains__(self, x) -> bool:
        return x in self.finite_part or any(x in tf for tf in self.tails)

    def pieces(self, per_tail: int = 8) -> list[tuple[Fraction, Fraction]]:
        """The finite intervals plus the first ``per_tail`` pieces of every tail."""
        out = list(self.finite_part.intervals)
        for tf in self.tails:
            out.extend((tf.anchor(t), tf.anchor(t) + tf.length(t)) for t in range(per_tail))
        return out


def measure_upper_bound(V) -> Fraction:
    """``lambda(finite part)`` plus the closed-form sum of every tail."""
    if isinstance(V, RlOpen):
        return lambda_eval(V)
    return lambda_eval(V.finite_part) + sum((tf.total() for tf in V.tails), Fraction(0))
