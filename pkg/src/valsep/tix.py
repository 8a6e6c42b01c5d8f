"""Finitely-valued valuations on finite posets as combinations of irreducible characteristics.

Inputs here are explicit tables (one value per upset) rather than
:class:`~valsep.valuation.Valuation` nodes, because peeling produces
arbitrary intermediate tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NotIrreducible, PreconditionError, VerificationFailed
from .poset import ClosedSetFin, FinitePoset, UpSetFin, all_upsets, is_irreducible
from .scalar import INF, scalar
from .valuation import LinComb, Valuation, Zero, check_axioms, check_same_space


class IrredChar(Valuation):
    """``U -> 1`` if ``U`` meets the irreducible closed set ``C``, else 0."""

    tag = "irred_char"

    def __init__(self, C: ClosedSetFin):
        self.closed = C
        self.space = C.space

    def evaluate(self, U):
        return Fraction(1) if U.mask & self.closed.mask else Fraction(0)

    def __repr__(self):
        return f"IrredChar({self.closed!r})"


def egame(C: ClosedSetFin) -> IrredChar:
    if not is_irreducible(C.space, C):
        raise NotIrreducible(f"{C!r} is not irreducible")
    return IrredChar(C)


class ValuationTable(Valuation):
    """A valuation on a finite poset given by its value on every upset."""

    tag = "table"

    def __init__(self, P: FinitePoset, values: Mapping):
        self.space = P
        vals = {}
        for key, v in values.items():
            if isinstance(key, UpSetFin):
                check_same_space(key.space, P)
                m = key.mask
            elif isinstance(key, int):
                m = key
            else:
                m = P.mask_of(key)
            if not P.is_up_mask(m):
                raise PreconditionError(f"table key {sorted(P.points_of(m), key=str)} is not an upset")
            vals[m] = scalar(v)
        vals.setdefault(0, Fraction(0))
        missing = [m for m in P.upset_masks() if m not in vals]
        if missing:
            raise PreconditionError(f"table misses {len(missing)} upsets")
        self.values = vals

    @classmethod
    def of(cls, nu: Valuation, P: FinitePoset) -> "ValuationTable":
        return cls(P, {U.mask: nu(U) for U in all_upsets(P)})

    def evaluate(self, U):
        return self.values[U.mask]

    def __getitem__(self, U):
        return self.values[U.mask if isinstance(U, UpSetFin) else self.space.mask_of(U)]

    def __eq__(self, other):
        return (isinstance(other, ValuationTable) and other.space == self.space
                and other.values == self.values)

    def nonzero_values(self) -> set:
        """``Val(nu)``: values other than 0 and inf."""
        return {v for v in self.values.values() if v != 0 and v is not INF}

    def is_bounded(self) -> bool:
        return self.values[self.space.full_mask] is not INF

    def items(self):
        """(upset, value) pairs in canonical upset order."""
        return [(UpSetFin(self.space, m, check=False), self.values[m])
                for m in self.space.upset_masks()]

    def __repr__(self):
        body = ", ".join(f"{sorted(U.carrier, key=str)}: {v}" for U, v in self.items())
        return f"ValuationTable({{{body}}})"


@dataclass(frozen=True)
class TixDecomposition:
    terms: tuple  # of (Fraction, ClosedSetFin)

    def valuation(self, P: FinitePoset) -> Valuation:
        if not self.terms:
            return Zero(P)
        return LinComb((a, IrredChar(C)) for a, C in self.terms)

    def __len__(self):
        return len(self.terms)


def _require_valid(nu: ValuationTable):
    verdict = check_axioms(nu, all_upsets(nu.space))
    if not verdict:
        raise PreconditionError(f"input table violates {verdict.kind} on {verdict.witness}")


def _peel(nu: ValuationTable):
    P = nu.space
    vals = nu.values
    r = min(nu.nonzero_values())
    masks = P.upset_masks()
    u_r = next(m for m in masks if vals[m] == r)
    u_star = 0
    for m in masks:
        if vals[m & u_r] == 0:
            u_star |= m
    C = ClosedSetFin(P, P.full_mask & ~u_star, check=False)
    rest = {}
    for m in masks:
        v = vals[m]
        if m & C.mask:
            if v is not INF and v < r:
                raise VerificationFailed("peeling produced a negative value", m)
            v = v - r
        rest[m] = v
    return r, C, ValuationTable(P, rest)


def peel_least(nu: ValuationTable):
    """Split off ``r * egame(C)`` for the least nonzero value ``r``.

    Returns ``(r, C, nu - r * egame(C))``.
    """
    if not nu.is_bounded():
        raise PreconditionError("peel_least needs a bounded table")
    if not nu.nonzero_values():
        raise PreconditionError("zero-valuation: nothing to peel")
    _require_valid(nu)
    return _peel(nu)


def tix_decompose(nu: ValuationTable, *, verify: bool = True) -> TixDecomposition:
    """Write a bounded table as ``sum_i a_i * egame(C_i)`` by repeated peeling."""
    if not nu.is_bounded():
        raise PreconditionError("non-finite-valued input; use split_infinite")
    _require_valid(nu)
    terms = []
    cur = nu
    while cur.nonzero_values():
        before = len(cur.nonzero_values())
        r, C, cur = _peel(cur)
        terms.append((r, C))
        if len(cur.nonzero_values()) >= before:
            raise VerificationFailed("peeling did not shrink the value set")
    out = TixDecomposition(tuple(terms))
    if verify:
        for m in nu.space.upset_masks():
            got = sum((a for a, C in terms if m & C.mask), Fraction(0))
            if got != nu.values[m]:
                raise VerificationFailed("decomposition does not reproduce the table",
                                         UpSetFin(nu.space, m, check=False))
    return out


@dataclass(frozen=True)
class InfiniteSplit:
    finite_part: ValuationTable
    infinite_part: ValuationTable
    u_s: UpSetFin
    c_infinity: ClosedSetFin
    s: Fraction


def split_infinite(nu: ValuationTable) -> InfiniteSplit:
    """``nu = nu|U_s + (0 inside U_s, inf elsewhere)``, ``s`` the greatest finite value.

    With no nonzero finite value, ``s = 0`` and ``U_s`` is the union of the
    null opens.
    """
    P = nu.space
    if nu.is_bounded():
        raise PreconditionError("no-infinite-value: use tix_decompose")
    _require_valid(nu)
    finite = [v for v in nu.values.values() if v is not INF]
    s = max(finite)
    u_s = 0
    for m, v in nu.values.items():
        if v is not INF and v <= s:
            u_s |= m
    if nu.values[u_s] is INF:
        raise VerificationFailed("union of finite-valued opens has infinite value",
                                 UpSetFin(P, u_s, check=False))
    finite_part = ValuationTable(P, {m: nu.values[m & u_s] for m in P.upset_masks()})
    infinite_part = ValuationTable(
        P, {m: (Fraction(0) if m & ~u_s == 0 else INF) for m in P.upset_masks()})
    for m in P.upset_masks():
        if finite_part.values[m] + infinite_part.values[m] != nu.values[m]:
            raise VerificationFailed("split does not recombine", UpSetFin(P, m, check=False))
    return InfiniteSplit(finite_part, infinite_part, UpSetFin(P, u_s, check=False),
                         ClosedSetFin(P, P.full_mask & ~u_s, check=False), s)


def point_continuity_table(nu: Valuation, U: UpSetFin, r) -> frozenset:
    """Smallest (then canonically first) ``A <= U`` with ``nu(V) > r`` for all opens ``V >= A``.

    On a finite poset the least open containing ``A`` is its upper closure,
    so only that open needs to be evaluated.
    """
    P = U.space
    r = scalar(r)
    val = nu(U)
    if not r < val:
        raise PreconditionError(f"need r < nu(U), got r={r}, nu(U)={val}")
    pts = [x for x in P.elements if x in U]
    for k in range(len(pts) + 1):
        for A in itertools.combinations(pts, k):
            V = UpSetFin(P, P.up_closure_mask(P.mask_of(A)), check=False)
            if nu(V) > r:
                return frozenset(A)
    raise VerificationFailed("no finite witness found; nu is not a valuation", U)


def table_from_terms(P: FinitePoset, terms: Iterable[tuple]) -> ValuationTable:
    """Table of ``sum c * egame(C)`` for (coefficient, closed set) pairs."""
    terms = [(scalar(c), C) for c, C in terms]
    return ValuationTable(P, {m: sum((c for c, C in terms if m & C.mask), Fraction(0))
                              for m in P.upset_masks()})
