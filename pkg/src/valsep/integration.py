"""Layer-cake integration of monotone maps on finite posets, and the Fubini check."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping

from .errors import PreconditionError
from .poset import FinitePoset, UpSetFin
from .scalar import INF, Scalar, scalar
from .valuation import Valuation, check_same_space


def _as_map(h, P: FinitePoset) -> dict:
    if callable(h) and not isinstance(h, Mapping):
        h = {x: h(x) for x in P.elements}
    out = {}
    for x in P.elements:
        if x not in h:
            raise PreconditionError(f"integrand undefined at {x!r}")
        v = scalar(h[x])
        if v is INF:
            raise PreconditionError("infinite-value integrand")
        out[x] = v
    return out


def check_monotone(h: Mapping, P: FinitePoset):
    for a, b in P.relation():
        if h[a] > h[b]:
            raise PreconditionError(f"non-monotone integrand: h({a!r}) > h({b!r})")


def integrate(h, nu: Valuation, P: FinitePoset) -> Scalar:
    """``sum_i (v_i - v_{i-1}) * nu({h >= v_i})`` over the sorted values of ``h``, with ``v_0 = 0``."""
    check_same_space(nu.space, P)
    hm = _as_map(h, P)
    check_monotone(hm, P)
    levels = sorted(set(hm.values()) | {Fraction(0)})
    total = Fraction(0)
    for lo, hi in zip(levels, levels[1:]):
        level_set = UpSetFin(P, P.mask_of(x for x, v in hm.items() if v >= hi), check=False)
        m = nu(level_set)
        if m is INF:
            raise PreconditionError("infinite-value: valuation is infinite on a level set")
        total += (hi - lo) * m
    return total


@dataclass(frozen=True)
class FubiniVerdict:
    equal: bool
    lhs: Scalar
    rhs: Scalar

    def __bool__(self):
        return self.equal


def fubini_check(h: Callable | Mapping, nu: Valuation, xi: Valuation,
                 P: FinitePoset, Q: FinitePoset) -> FubiniVerdict:
    """Compare the two iterated integrals of ``h`` on ``P x Q``.

    ``h`` is a mapping from pairs ``(x, y)`` (or a two-argument callable);
    it must be monotone in each argument.
    """
    get = h if callable(h) and not isinstance(h, Mapping) else (lambda x, y: h[(x, y)])
    table = {(x, y): scalar(get(x, y)) for x in P.elements for y in Q.elements}
    for (x, y), v in table.items():
        for x2 in P.elements:
            if P.leq(x, x2) and table[(x2, y)] < v:
                raise PreconditionError(f"non-monotone integrand at {(x, y)!r}")
        for y2 in Q.elements:
            if Q.leq(y, y2) and table[(x, y2)] < v:
                raise PreconditionError(f"non-monotone integrand at {(x, y)!r}")
    # x outside, y inside
    inner_y = {x: integrate({y: table[(x, y)] for y in Q.elements}, xi, Q) for x in P.elements}
    lhs = integrate(inner_y, nu, P)
    inner_x = {y: integrate({x: table[(x, y)] for x in P.elements}, nu, P) for y in Q.elements}
    rhs = integrate(inner_x, xi, Q)
    return FubiniVerdict(lhs == rhs, lhs, rhs)


# -- monotone maps with few value levels ------------------------------------

def _upsets_inside(P: FinitePoset, within: int):
    """Upset masks of ``P`` contained in the upset mask ``within``, top-down recursion order."""
    order = [i for i in sorted(range(len(P)), key=lambda i: -bin(P._down[i]).count("1"))
             if within >> i & 1]
    n = len(order)

    def rec(k, mask):
        if k == n:
            yield mask
            return
        i = order[k]
        yield from rec(k + 1, mask)
        if P._up[i] & ~(1 << i) & ~mask == 0:
            yield from rec(k + 1, mask | 1 << i)

    return rec(0, 0)


def monotone_level_maps(P: FinitePoset, levels) -> Iterator[dict]:
    """Every monotone map ``P -> levels`` (an ascending list of 1 to 3 values).

    A monotone map into a chain of ``k`` values is a descending chain of
    ``k - 1`` upsets; maps come out ordered by the outer upset in canonical
    order.
    """
    levels = [scalar(v) for v in levels]
    if not 1 <= len(levels) <= 3 or levels != sorted(set(levels)):
        raise PreconditionError("levels must be 1 to 3 strictly ascending values")
    elems = P.elements
    if len(levels) == 1:
        yield {x: levels[0] for x in elems}
        return
    for outer in P.upset_masks():
        inners = _upsets_inside(P, outer) if len(levels) == 3 else [0]
        for inner in inners:
            yield {x: levels[(outer >> i & 1) + (inner >> i & 1)] if len(levels) == 3
                   else levels[outer >> i & 1] for i, x in enumerate(elems)}


def count_level_maps(P: FinitePoset) -> int:
    """Number of monotone maps from ``P`` into a 3-chain, without enumerating them.

    Sums, over upsets ``U``, the number of antichains of ``U``; those
    antichains are the minimal sets of the upsets inside ``U``.
    """
    comp = [P._up[i] | P._down[i] for i in range(len(P))]
    memo = {0: 1}

    def antichains(S):
        if S in memo:
            return memo[S]
        i = S.bit_length() - 1
        rest = S & ~(1 << i)
        val = antichains(rest) + antichains(rest & ~comp[i])
        memo[S] = val
        return val

    return sum(antichains(m) for m in P.upset_masks())
