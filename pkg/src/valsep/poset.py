"""Finite posets, their Scott topologies (upset lattices) and sobriety checks.

Subsets of a poset are stored internally as integer bitmasks over the
element list, so set operations on opens are single machine operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator

from .errors import PreconditionError, SizeLimitExceeded, VariantMismatch

DEFAULT_MAX_POINTS = 16


class FinitePoset:
    """A finite partial order.

    ``leq`` may be any relation; its reflexive-transitive closure is taken,
    and a :class:`PreconditionError` is raised if that closure is not
    antisymmetric (i.e. the input has a cycle).
    """

    def __init__(self, elements: Iterable[Hashable], leq: Iterable[tuple] = (), *,
                 max_points: int = DEFAULT_MAX_POINTS):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PreconditionError("duplicate point identifiers")
        if len(self.elements) > max_points:
            raise SizeLimitExceeded(
                f"{len(self.elements)} points exceeds the bound {max_points}")
        self.max_points = max_points
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        up = [1 << i for i in range(n)]
        for a, b in leq:
            if a not in self.index or b not in self.index:
                raise PreconditionError(f"unknown point in relation {a!r} <= {b!r}")
            up[self.index[a]] |= 1 << self.index[b]
        # Warshall closure on bit rows
        for k in range(n):
            kbit = 1 << k
            for i in range(n):
                if up[i] & kbit:
                    up[i] |= up[k]
        for i in range(n):
            for j in range(i + 1, n):
                if up[i] >> j & 1 and up[j] >> i & 1:
                    raise PreconditionError(
                        f"cycle between {self.elements[i]!r} and {self.elements[j]!r}")
        self._up = tuple(up)
        down = [0] * n
        for i in range(n):
            for j in range(n):
                if up[i] >> j & 1:
                    down[j] |= 1 << i
        self._down = tuple(down)
        self.full_mask = (1 << n) - 1
        self._upsets = None

    # -- basic structure -------------------------------------------------
    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinitePoset({list(self.elements)!r}, {sorted(self.relation())!r})"

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self):
        return hash((self.elements, self._up))

    def leq(self, a, b) -> bool:
        return bool(self._up[self.index[a]] >> self.index[b] & 1)

    def relation(self) -> set[tuple]:
        """The full order relation as a set of pairs (reflexive included)."""
        return {(a, b) for a in self.elements for b in self.elements if self.leq(a, b)}

    def up_mask(self, x) -> int:
        return self._up[self.index[x]]

    def down_mask(self, x) -> int:
        return self._down[self.index[x]]

    def mask_of(self, points: Iterable) -> int:
        m = 0
        for p in points:
            try:
                m |= 1 << self.index[p]
            except KeyError:
                raise PreconditionError(f"{p!r} is not a point of this poset") from None
        return m

    def points_of(self, mask: int) -> frozenset:
        return frozenset(x for i, x in enumerate(self.elements) if mask >> i & 1)

    def is_up_mask(self, mask: int) -> bool:
        return all(self._up[i] & ~mask == 0 for i in range(len(self)) if mask >> i & 1)

    def is_down_mask(self, mask: int) -> bool:
        return all(self._down[i] & ~mask == 0 for i in range(len(self)) if mask >> i & 1)

    def up_closure_mask(self, mask: int) -> int:
        out = 0
        for i in range(len(self)):
            if mask >> i & 1:
                out |= self._up[i]
        return out

    def down_closure_mask(self, mask: int) -> int:
        out = 0
        for i in range(len(self)):
            if mask >> i & 1:
                out |= self._down[i]
        return out

    # -- opens and closed sets --------------------------------------------
    def upset(self, points: Iterable) -> "UpSetFin":
        return UpSetFin(self, self.mask_of(points))

    def closed(self, points: Iterable) -> "ClosedSetFin":
        return ClosedSetFin(self, self.mask_of(points))

    def up(self, x) -> "UpSetFin":
        return UpSetFin(self, self.up_mask(x))

    def down(self, x) -> "ClosedSetFin":
        return ClosedSetFin(self, self.down_mask(x))

    def empty_open(self) -> "UpSetFin":
        return UpSetFin(self, 0)

    def full_open(self) -> "UpSetFin":
        return UpSetFin(self, self.full_mask)

    def upset_masks(self) -> list[int]:
        """All upsets as bitmasks, in canonical order (see :func:`all_upsets`)."""
        if self._upsets is None:
            self._upsets = _enumerate_upset_masks(self)
        return self._upsets


def _mask_key(mask: int) -> tuple:
    bits = tuple(i for i in range(mask.bit_length()) if mask >> i & 1)
    return (len(bits), bits)


def _enumerate_upset_masks(P: FinitePoset) -> list[int]:
    n = len(P)
    # decide points from the top down, so "x in U" can require all of its upper set
    order = sorted(range(n), key=lambda i: -bin(P._down[i]).count("1"))
    out = []

    def rec(k, mask):
        if k == n:
            out.append(mask)
            return
        i = order[k]
        rec(k + 1, mask)
        if P._up[i] & ~(1 << i) & ~mask == 0:
            rec(k + 1, mask | 1 << i)

    rec(0, 0)
    out.sort(key=_mask_key)
    return out


@dataclass(frozen=True, eq=False)
class UpSetFin:
    """An upward-closed subset (= Scott open) of a :class:`FinitePoset`."""

    space: FinitePoset
    mask: int
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.check and not self.space.is_up_mask(self.mask):
            raise PreconditionError(f"{sorted(map(repr, self.carrier))} is not upward closed")

    @property
    def carrier(self) -> frozenset:
        return self.space.points_of(self.mask)

    def __contains__(self, x) -> bool:
        i = self.space.index.get(x)
        return i is not None and bool(self.mask >> i & 1)

    def __eq__(self, other):
        return (isinstance(other, UpSetFin) and other.space == self.space
                and other.mask == self.mask)

    def __hash__(self):
        return hash(("UpSetFin", self.mask))

    def __repr__(self):
        return f"UpSetFin({sorted(self.carrier, key=self.space.index.get)!r})"

    def _same(self, other):
        if not isinstance(other, UpSetFin) or other.space != self.space:
            raise VariantMismatch("opens of different finite posets")

    def union(self, other: "UpSetFin") -> "UpSetFin":
        self._same(other)
        return UpSetFin(self.space, self.mask | other.mask, check=False)

    def intersect(self, other: "UpSetFin") -> "UpSetFin":
        self._same(other)
        return UpSetFin(self.space, self.mask & other.mask, check=False)

    __or__ = union
    __and__ = intersect

    def issubset(self, other: "UpSetFin") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def is_empty(self) -> bool:
        return self.mask == 0

    def bottom(self) -> "UpSetFin":
        return UpSetFin(self.space, 0, check=False)

    def sort_key(self):
        return _mask_key(self.mask)

    def complement(self) -> "ClosedSetFin":
        return ClosedSetFin(self.space, self.space.full_mask & ~self.mask, check=False)

    def meets(self, C: "ClosedSetFin") -> bool:
        return bool(self.mask & C.mask)


@dataclass(frozen=True, eq=False)
class ClosedSetFin:
    """A downward-closed subset (= Scott closed set) of a :class:`FinitePoset`."""

    space: FinitePoset
    mask: int
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.check and not self.space.is_down_mask(self.mask):
            raise PreconditionError(f"{sorted(map(repr, self.carrier))} is not downward closed")

    @property
    def carrier(self) -> frozenset:
        return self.space.points_of(self.mask)

    def __contains__(self, x) -> bool:
        i = self.space.index.get(x)
        return i is not None and bool(self.mask >> i & 1)

    def __eq__(self, other):
        return (isinstance(other, ClosedSetFin) and other.space == self.space
                and other.mask == self.mask)

    def __hash__(self):
        return hash(("ClosedSetFin", self.mask))

    def __repr__(self):
        return f"ClosedSetFin({sorted(self.carrier, key=self.space.index.get)!r})"

    def complement(self) -> UpSetFin:
        return UpSetFin(self.space, self.space.full_mask & ~self.mask, check=False)

    def greatest(self):
        """The greatest element of the set, or ``None``."""
        for x in self.carrier:
            if self.mask & ~self.space.down_mask(x) == 0:
                return x
        return None

    def is_principal(self) -> bool:
        top = self.greatest()
        return top is not None and self.space.down_mask(top) == self.mask


def all_upsets(P: FinitePoset, max_points: int | None = None) -> list[UpSetFin]:
    """Every upset of ``P`` exactly once, ordered by size, then by point positions."""
    bound = P.max_points if max_points is None else max_points
    if len(P) > bound:
        raise SizeLimitExceeded(f"{len(P)} points exceeds the bound {bound}")
    return [UpSetFin(P, m, check=False) for m in P.upset_masks()]


def all_closed(P: FinitePoset) -> list[ClosedSetFin]:
    return [U.complement() for U in all_upsets(P)]


def is_irreducible(P: FinitePoset, C: ClosedSetFin) -> bool:
    """Nonempty, and any two opens meeting ``C`` meet it in their intersection.

    The opens meeting ``C`` are closed under pairwise intersection iff their
    common intersection still meets ``C`` (the family is finite), which is
    what is tested.
    """
    if C.space != P:
        raise VariantMismatch("closed set from a different poset")
    if C.mask == 0:
        return False
    common = P.full_mask
    for m in P.upset_masks():
        if m & C.mask:
            common &= m
    return bool(common & C.mask)


@dataclass(frozen=True)
class SoberVerdict:
    sober: bool
    witness: ClosedSetFin | None = None

    def __bool__(self):
        return self.sober


def sober_check(P: FinitePoset) -> SoberVerdict:
    """Is every irreducible closed set the closure of exactly one point?"""
    principal = {P.down_mask(x) for x in P.elements}
    for C in all_closed(P):
        if is_irreducible(P, C) and C.mask not in principal:
            return SoberVerdict(False, C)
    # distinct points with equal closures would break T0; antisymmetry rules it out
    return SoberVerdict(True)


def product_poset(P: FinitePoset, Q: FinitePoset, *, max_points: int | None = None) -> FinitePoset:
    """Componentwise order on ``P x Q``; points are pairs."""
    pts = [(x, y) for x in P.elements for y in Q.elements]
    rel = [((x, y), (x2, y)) for x in P.elements for x2 in P.elements if P.leq(x, x2)
           for y in Q.elements]
    rel += [((x, y), (x, y2)) for y in Q.elements for y2 in Q.elements if Q.leq(y, y2)
            for x in P.elements]
    bound = max_points or max(len(pts), DEFAULT_MAX_POINTS)
    return FinitePoset(pts, rel, max_points=bound)


# -- text format ----------------------------------------------------------

def parse_poset(text: str, *, max_points: int = DEFAULT_MAX_POINTS) -> FinitePoset:
    """Load ``points: a b c`` followed by lines ``a <= b``.

    Blank lines and ``#`` comments are ignored.
    """
    points = None
    rel = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("points:"):
            if points is not None:
                raise PreconditionError(f"line {lineno}: second 'points:' line")
            points = line[len("points:"):].split()
            continue
        if "<=" not in line:
            raise PreconditionError(f"line {lineno}: expected 'a <= b', got {raw!r}")
        a, b = (s.strip() for s in line.split("<=", 1))
        if not a or not b or " " in a or " " in b:
            raise PreconditionError(f"line {lineno}: malformed relation {raw!r}")
        rel.append((a, b))
    if points is None:
        raise PreconditionError("missing 'points:' line")
    return FinitePoset(points, rel, max_points=max_points)


def format_poset(P: FinitePoset) -> str:
    """Inverse of :func:`parse_poset`, emitting only the covering relation."""
    lines = ["points: " + " ".join(map(str, P.elements))]
    for a, b in sorted(_covers(P), key=lambda ab: (P.index[ab[0]], P.index[ab[1]])):
        lines.append(f"{a} <= {b}")
    return "\n".join(lines) + "\n"


def _covers(P: FinitePoset):
    strict = [(a, b) for a, b in P.relation() if a != b]
    for a, b in strict:
        if not any(P.leq(a, c) and P.leq(c, b) and c != a and c != b for c in P.elements):
            yield a, b


def covers(P: FinitePoset) -> list[tuple]:
    """The covering pairs of ``P`` in element order."""
    return sorted(_covers(P), key=lambda ab: (P.index[ab[0]], P.index[ab[1]]))


# -- catalogs -------------------------------------------------------------

def chain(n: int) -> FinitePoset:
    return FinitePoset(range(n), [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> FinitePoset:
    return FinitePoset(range(n))


def posets_up_to_iso(n: int) -> Iterator[FinitePoset]:
    """One representative of every isomorphism class of posets on ``n`` points.

    Every finite poset has a linear extension, so it suffices to enumerate
    transitive relations contained in ``{(i, j) : i < j}`` and keep the
    first member of each isomorphism class.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    perms = list(itertools.permutations(range(n)))
    seen = set()
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        canon = min(tuple(sorted((p[a], p[b]) for a, b in rel)) for p in perms)
        if canon in seen:
            continue
        seen.add(canon)
        yield FinitePoset(range(n), sorted(rel))
