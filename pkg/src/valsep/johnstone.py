"""Johnstone's dcpo J and the cofinite naturals, with their valuation decompositions.

Points of J are pairs ``(column, height)`` with height a natural or
``OMEGA``; ``(a, b) <= (c, d)`` iff ``a == c and b <= d`` or ``d`` is
``OMEGA`` and ``b <= c``.  A Scott open is determined by one threshold per
column: column ``n`` meets the open in ``{(n, m) : m >= t_n} + {(n, OMEGA)}``
or not at all.  :class:`JOpen` stores eventually constant threshold maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import PreconditionError, VerificationFailed
from .ring import Crescent, Restrict, RingElement, atom_at
from .scalar import INF, scalar
from .valuation import (SPACE_J, SPACE_NCOF, ConstOne, DiscreteDeclared, FunctionValuation,
                        Valuation, stochastic_leq_probe)


class _Omega:
    __slots__ = ()

    def __repr__(self):
        return "OMEGA"

    def __reduce__(self):
        return (_omega, ())


def _omega():
    return OMEGA


OMEGA = _Omega()


class JPoint(NamedTuple):
    col: int
    height: object  # int or OMEGA

    @property
    def is_maximal(self) -> bool:
        return self.height is OMEGA

    def __repr__(self):
        return f"({self.col},{'w' if self.is_maximal else self.height})"


def jpoint(col, height) -> JPoint:
    if isinstance(height, str) and height.lower() in ("w", "omega", "inf"):
        height = OMEGA
    if not isinstance(col, int) or col < 0:
        raise PreconditionError(f"column must be a natural, got {col!r}")
    if height is not OMEGA and (not isinstance(height, int) or height < 0):
        raise PreconditionError(f"height must be a natural or OMEGA, got {height!r}")
    return JPoint(col, height)


def j_leq(p: JPoint, q: JPoint) -> bool:
    if p.is_maximal:
        return p == q
    if p.col == q.col and (q.is_maximal or p.height <= q.height):
        return True
    return q.is_maximal and p.height <= q.col


def point_key(p: JPoint):
    """Canonical order: finite points diagonally, then maximal points by column."""
    if p.is_maximal:
        return (1, p.col, 0)
    return (0, p.col + p.height, p.col)


# -- cofinite naturals ------------------------------------------------------

@dataclass(frozen=True)
class NcofOpen:
    """Empty (``excluded is None``) or the complement of a finite set."""

    excluded: frozenset | None
    space = SPACE_NCOF

    @classmethod
    def empty(cls) -> "NcofOpen":
        return cls(None)

    @classmethod
    def cofinite(cls, excluded: Iterable[int] = ()) -> "NcofOpen":
        ex = frozenset(excluded)
        if any(not isinstance(i, int) or i < 0 for i in ex):
            raise PreconditionError("excluded points must be naturals")
        return cls(ex)

    def __contains__(self, i) -> bool:
        return self.excluded is not None and i not in self.excluded

    def is_empty(self) -> bool:
        return self.excluded is None

    def union(self, other: "NcofOpen") -> "NcofOpen":
        if self.excluded is None:
            return other
        if other.excluded is None:
            return self
        return NcofOpen(self.excluded & other.excluded)

    def intersect(self, other: "NcofOpen") -> "NcofOpen":
        if self.excluded is None or other.excluded is None:
            return NcofOpen(None)
        return NcofOpen(self.excluded | other.excluded)

    __or__ = union
    __and__ = intersect

    def issubset(self, other: "NcofOpen") -> bool:
        if self.excluded is None:
            return True
        return other.excluded is not None and other.excluded <= self.excluded

    def bottom(self) -> "NcofOpen":
        return NcofOpen(None)

    def sort_key(self):
        if self.excluded is None:
            return (0, ())
        return (1, len(self.excluded), tuple(sorted(self.excluded)))

    def __repr__(self):
        if self.excluded is None:
            return "NcofOpen(empty)"
        return f"NcofOpen(N - {sorted(self.excluded)})"


BETA = ConstOne(SPACE_NCOF)


# -- Scott opens of J ---------------------------------------------------------

def _thr_le(a, b) -> bool:
    """Threshold order with None (excluded) as +infinity."""
    if b is None:
        return True
    return a is not None and a <= b


def _thr_min(a, b):
    return b if a is None else a if b is None else min(a, b)


def _thr_max(a, b):
    return None if a is None or b is None else max(a, b)


@dataclass(frozen=True)
class JOpen:
    """Scott open of J with per-column thresholds ``overrides`` and a ``tail``.

    ``overrides`` is a sorted tuple of ``(column, threshold)`` pairs where a
    threshold is a natural or ``None`` (column excluded); columns without an
    override use ``tail``.  Instances are always canonical: no override equals
    the tail.  Use :meth:`make` to build one.
    """

    overrides: tuple
    tail: int | None
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)
    space = SPACE_J

    def __post_init__(self):
        object.__setattr__(self, "_lookup", dict(self.overrides))
        finite = [t for _, t in self.overrides if t is not None]
        if self.tail is not None:
            finite.append(self.tail)
        if finite:
            m0 = min(finite)
            if self.tail is None:
                raise PreconditionError("nonempty Scott open must have a finite tail threshold")
            bad = [c for c, t in self.overrides if t is None and c >= m0]
            if bad:
                raise PreconditionError(
                    f"not Scott open: column {bad[0]} excluded but threshold {m0} occurs")

    @classmethod
    def make(cls, overrides=(), tail=None) -> "JOpen":
        items = dict(overrides.items() if isinstance(overrides, dict) else overrides)
        for c, t in items.items():
            if not isinstance(c, int) or c < 0 or (t is not None and (not isinstance(t, int) or t < 0)):
                raise PreconditionError(f"bad override {c!r}: {t!r}")
        if tail is not None and (not isinstance(tail, int) or tail < 0):
            raise PreconditionError(f"bad tail threshold {tail!r}")
        canon = tuple(sorted((c, t) for c, t in items.items() if t != tail))
        return cls(canon, tail)

    @property
    def cutoff(self) -> int:
        return self.overrides[-1][0] + 1 if self.overrides else 0

    def threshold(self, col: int):
        return self._lookup.get(col, self.tail)

    def __contains__(self, p) -> bool:
        t = self.threshold(p.col)
        if t is None:
            return False
        return p.is_maximal or t <= p.height

    def is_empty(self) -> bool:
        return self.tail is None

    def _combine(self, other, fn) -> "JOpen":
        cols = set(self._lookup) | set(other._lookup)
        return JOpen.make({c: fn(self.threshold(c), other.threshold(c)) for c in cols},
                          fn(self.tail, other.tail))

    def union(self, other: "JOpen") -> "JOpen":
        return self._combine(other, _thr_min)

    def intersect(self, other: "JOpen") -> "JOpen":
        return self._combine(other, _thr_max)

    __or__ = union
    __and__ = intersect

    def issubset(self, other: "JOpen") -> bool:
        cols = set(self._lookup) | set(other._lookup)
        return (all(_thr_le(other.threshold(c), self.threshold(c)) for c in cols)
                and _thr_le(other.tail, self.tail))

    def bottom(self) -> "JOpen":
        return EMPTY_J

    def sort_key(self):
        def k(t):
            return (1, 0) if t is None else (0, t)
        return (k(self.tail), tuple((c, k(t)) for c, t in self.overrides))

    def excluded_columns(self) -> frozenset:
        if self.tail is None:
            raise PreconditionError("the empty open excludes every column")
        return frozenset(c for c, t in self.overrides if t is None)

    def members(self):
        """Members in canonical order: finite points diagonally (an infinite generator)."""
        d = 0
        while True:
            for c in range(d + 1):
                p = JPoint(c, d - c)
                if p in self:
                    yield p
            d += 1

    def least_member(self) -> JPoint:
        if self.is_empty():
            raise PreconditionError("empty-open has no members")
        return next(self.members())

    def __repr__(self):
        ov = ", ".join(f"{c}:{'x' if t is None else t}" for c, t in self.overrides)
        return f"JOpen({{{ov}}}, tail={'x' if self.tail is None else self.tail})"


EMPTY_J = JOpen((), None)
FULL_J = JOpen((), 0)
MU = ConstOne(SPACE_J)


def up_level(i: int) -> JOpen:
    """The upper set of level ``i``: every point of height at least ``i``."""
    return JOpen.make((), i)


def u_k(k: int) -> JOpen:
    """``J`` minus the down-closure of the first ``k + 1`` columns."""
    return JOpen.make({c: None for c in range(k + 1)}, k + 1)


def up_point(p: JPoint) -> JOpen:
    """A canonical Scott-open neighbourhood of a finite-height point.

    ``(c, h)`` keeps its own column from height ``h``; every column ``j >= h``
    is kept from height ``h`` too, as the upper set of ``(c, h)`` contains
    ``(j, OMEGA)`` and Scott-openness forces finite points below it.
    Maximal points have no least neighbourhood and are rejected.
    """
    if p.is_maximal:
        raise PreconditionError("maximal points have no canonical Scott neighbourhood")
    c, h = p
    ov = {j: None for j in range(h) if j != c}
    ov[c] = h
    return JOpen.make(ov, h)


def largest_open_for_trace(W: NcofOpen) -> JOpen:
    """The largest Scott open whose maximal points are ``{(i, OMEGA) : i in W}``."""
    if W.is_empty():
        return EMPTY_J
    F = W.excluded
    return JOpen.make({i: None for i in F}, max(F) + 1 if F else 0)


def trace_on_maximal(U: JOpen) -> NcofOpen:
    """``U`` intersected with the maximal points, read as an open of the cofinite naturals."""
    if U.is_empty():
        return NcofOpen.empty()
    return NcofOpen.cofinite(U.excluded_columns())


def singleton_crescent_j(a: JPoint) -> Crescent:
    """``({a} + up(L_{n+1})) \\ up(L_{n+1})`` for ``a`` at height ``n``."""
    if a.is_maximal:
        raise PreconditionError("maximal-point-input: maximal singletons are not crescents of opens")
    inner = up_level(a.height + 1)
    outer = JOpen.make({a.col: a.height}, a.height + 1)
    return Crescent(outer, inner)


def dirac_j(p) -> "DiscreteDeclared":
    return DiscreteDeclared([(1, p)], SPACE_J)


def discrete_j(mapping) -> DiscreteDeclared:
    items = mapping.items() if isinstance(mapping, dict) else mapping
    return DiscreteDeclared([(c, p) for p, c in items if scalar(c) != 0], SPACE_J)


# -- decompositions -------------------------------------------------------

def ncof_probe_family(support: Iterable[int], extras: int = 8) -> list[NcofOpen]:
    S = sorted(set(support))
    z = (max(S) + 1) if S else 0
    fam = {NcofOpen.empty(), NcofOpen.cofinite(), NcofOpen.cofinite(S)}
    if len(S) <= 6:
        for k in range(len(S) + 1):
            for F in itertools.combinations(S, k):
                fam.add(NcofOpen.cofinite(F))
    else:
        for k in (1, 2):
            for F in itertools.combinations(S, k):
                fam.add(NcofOpen.cofinite(F))
                fam.add(NcofOpen.cofinite(set(S) - set(F)))
    extra = [
        {z}, {z, z + 1}, set(S) | {z}, set(S) | {z + 1, z + 2},
        {z + 3}, set(S[:1]) | {z + 4}, set(S[1:]) | {z}, set(range(z + 5)),
    ]
    for F in extra[:extras]:
        fam.add(NcofOpen.cofinite(F))
    return sorted(fam, key=NcofOpen.sort_key)


def decompose_ncof(nu: Valuation, support_hint: Iterable[int]):
    """Recover ``(alpha, r)`` with ``nu = alpha + r * beta`` on the cofinite naturals.

    ``alpha``'s mass at ``i`` is ``nu(N) - nu(N - {i})``; ``r = nu(N - S)``.
    The caller guarantees that the discrete part lives on ``support_hint``;
    the result is verified on a probe family and :class:`VerificationFailed`
    is raised with the offending open otherwise.
    """
    S = sorted(set(support_hint))
    full = nu(NcofOpen.cofinite())
    if full is INF:
        raise PreconditionError("decompose_ncof needs a bounded valuation")
    alpha = {}
    for i in S:
        a = full - nu(NcofOpen.cofinite({i}))
        if a < 0:
            raise VerificationFailed(f"negative atom at {i}", NcofOpen.cofinite({i}))
        if a:
            alpha[i] = a
    r = nu(NcofOpen.cofinite(S))
    alpha_v = DiscreteDeclared([(c, i) for i, c in alpha.items()], SPACE_NCOF)
    for U in ncof_probe_family(S):
        want = alpha_v(U) + r * BETA(U)
        if nu(U) != want:
            raise VerificationFailed(f"nu({U!r}) = {nu(U)} but alpha + r*beta gives {want}", U)
    return alpha_v, r


def nu_star(nu: Valuation, support_hint: Iterable[JPoint]) -> FunctionValuation:
    """``nu`` minus its atoms at the finite-height points of ``support_hint``.

    Each atom is the restriction of ``nu`` to the singleton crescent of the
    point; maximal points in the hint are ignored.
    """
    atoms = [Restrict(nu, RingElement([singleton_crescent_j(a)], SPACE_J))
             for a in sorted(set(support_hint), key=point_key) if not a.is_maximal]

    def value(U):
        v = nu(U)
        for atom in atoms:
            x = atom(U)
            if x > v:
                raise VerificationFailed("negative-intermediate: hint misses part of nu", U)
            v = v - x
        return v

    return FunctionValuation(value, SPACE_J, "nu*")


def j_probe_family(points: Iterable[JPoint], extra: int = 2) -> list[JOpen]:
    """Opens that separate the given points, for verification and domination checks."""
    pts = sorted(set(points), key=point_key)
    idx = [p.col for p in pts] + [p.height for p in pts if not p.is_maximal]
    K = (max(idx) if idx else 0) + extra
    fam = {EMPTY_J, FULL_J}
    for i in range(K + 1):
        fam.add(up_level(i))
        fam.add(u_k(i))
    for c in range(min(K, 6) + 1):
        for h in range(min(K, 6) + 1):
            fam.add(up_point(JPoint(c, h)))
    maxcols = sorted({p.col for p in pts if p.is_maximal})
    for k in range(min(len(maxcols), 2) + 1):
        for F in itertools.combinations(maxcols, k):
            fam.add(largest_open_for_trace(NcofOpen.cofinite(F)))
    fam.add(largest_open_for_trace(NcofOpen.cofinite(maxcols)))
    for p in pts:
        if not p.is_maximal:
            cr = singleton_crescent_j(p)
            fam.add(cr.outer)
            fam.add(cr.inner)
            fam.add(up_point(p))
        fam.add(largest_open_for_trace(NcofOpen.cofinite({p.col})))
    return sorted(fam, key=JOpen.sort_key)


def decompose_johnstone(nu: Valuation, support_hint: Iterable[JPoint]):
    """Recover ``(theta, r)`` with ``nu = theta + r * mu`` on J.

    Finite-height atoms come from singleton crescents.  The remainder ``nu*``
    is transported to the maximal points via ``W -> nu*(U_W)`` and split
    there by :func:`decompose_ncof`, which yields the maximal atoms and
    ``r``.  The result is verified on :func:`j_probe_family` of the hint.
    """
    hint = sorted(set(support_hint), key=point_key)
    if nu(FULL_J) is INF:
        raise PreconditionError("decompose_johnstone needs a bounded valuation")
    theta = {}
    for a in hint:
        if not a.is_maximal:
            m = atom_at(nu, singleton_crescent_j(a))
            if m:
                theta[a] = m
    star = nu_star(nu, hint)
    nu_inf = FunctionValuation(lambda W: star(largest_open_for_trace(W)), SPACE_NCOF, "nu_inf")
    alpha, r = decompose_ncof(nu_inf, [a.col for a in hint if a.is_maximal])
    for c, i in alpha.terms:
        theta[JPoint(i, OMEGA)] = c
    theta_v = discrete_j(theta)
    for U in j_probe_family(hint):
        want = theta_v(U) + r * MU(U)
        got = nu(U)
        if got != want:
            raise VerificationFailed(f"nu({U!r}) = {got} but theta + r*mu gives {want}", U)
    return theta_v, r


# -- Borel masses and the escape argument -----------------------------------

@dataclass(frozen=True)
class FiniteSet:
    points: frozenset

    def __contains__(self, p):
        return p in self.points


@dataclass(frozen=True)
class MBand:
    """Maximal points ``(i, OMEGA)`` with ``k < i <= l``."""

    k: int
    l: int

    def __post_init__(self):
        if not self.k < self.l:
            raise PreconditionError("MBand needs k < l")

    def __contains__(self, p):
        return p.is_maximal and self.k < p.col <= self.l


@dataclass(frozen=True)
class MTail:
    """Maximal points ``(i, OMEGA)`` with ``i > k``."""

    k: int

    def __contains__(self, p):
        return p.is_maximal and p.col > self.k


@dataclass(frozen=True)
class UpD:
    """Upper closure of columns ``0..k``: those columns plus every maximal point."""

    k: int

    def __contains__(self, p):
        return p.col <= self.k or p.is_maximal


@dataclass(frozen=True)
class DownD:
    """Down-closure of columns ``0..k``: those columns plus finite points of height ``<= k``."""

    k: int

    def __contains__(self, p):
        return p.col <= self.k or (not p.is_maximal and p.height <= self.k)


@dataclass(frozen=True)
class UkOpen:
    """Complement of :class:`DownD`; the same set as :func:`u_k`."""

    k: int

    def __contains__(self, p):
        return p not in DownD(self.k)


def borel_mass(tau: DiscreteDeclared, B) -> Fraction:
    """Measure of ``B`` under the measure extending the discrete valuation ``tau``."""
    return sum((c for c, p in tau.terms if p in B), Fraction(0))


def _indices(p: JPoint):
    return [p.col] if p.is_maximal else [p.col, p.height]


@dataclass(frozen=True)
class EscapeResult:
    k: int
    witness: JOpen
    gap: Fraction
    target: Fraction
    family_values: tuple


def escape_falsifier(theta: DiscreteDeclared, r, family: Iterable[DiscreteDeclared]) -> EscapeResult:
    """One open on which every family member falls short of ``theta + r*mu`` by at least ``r``.

    ``k`` exceeds every index in every support, so all the members (and
    ``theta``) give ``u_k(k)`` mass 0 while ``mu`` gives it 1.  Domination
    of each member by ``theta + r*mu`` is checked first on a probe family.
    """
    r = scalar(r)
    if r is INF or r <= 0:
        raise PreconditionError("escape_falsifier needs a finite r > 0")
    family = list(family)
    target_v = theta + r * MU
    pts = set(theta.support)
    for tau in family:
        pts.update(tau.support)
    probes = j_probe_family(pts)
    for tau in family:
        verdict = stochastic_leq_probe(tau, target_v, probes)
        if not verdict:
            raise VerificationFailed(f"family-not-dominated: {tau!r} exceeds target on "
                                     f"{verdict.witness!r}", verdict.witness)
    idx = [i for p in pts for i in _indices(p)]
    k = max(idx) + 1 if idx else 0
    witness = u_k(k)
    target = target_v(witness)
    vals = tuple(tau(witness) for tau in family)
    gap = target - max(vals, default=Fraction(0))
    if gap < r:
        raise VerificationFailed(f"gap {gap} below r = {r}", witness)
    return EscapeResult(k, witness, gap, target, vals)


def pc_witness_mu(U: JOpen, r) -> frozenset:
    """Finite ``A <= U`` such that every open containing ``A`` has ``mu`` above ``r``."""
    r = scalar(r)
    if U.is_empty():
        raise PreconditionError("empty-open: mu(U) = 0 leaves no r to witness")
    if not (0 <= r < 1):
        raise PreconditionError("r-out-of-range: need 0 <= r < 1")
    return frozenset({U.least_member()})
