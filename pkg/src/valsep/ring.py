"""The Boolean ring generated by opens: crescents ``U \\ V`` and disjoint unions of them.

Only the open-set protocol (union, intersection, inclusion) is needed: a
crescent ``U \\ V`` is empty iff ``U <= V``, and two crescents are disjoint
iff ``U1 & U2 <= V1 | V2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InvariantViolation, PreconditionError, UnboundedRestriction, VariantMismatch
from .scalar import INF, Scalar
from .valuation import Valuation, check_same_space

_PROTOCOL = ("union", "intersect", "issubset", "is_empty", "sort_key", "space")


def _supports_ring(U) -> bool:
    return all(hasattr(U, name) for name in _PROTOCOL)


@dataclass(frozen=True)
class Crescent:
    """``outer \\ inner`` with ``inner <= outer``."""

    outer: object
    inner: object

    def __post_init__(self):
        check_same_space(self.outer.space, self.inner.space)
        if not self.inner.issubset(self.outer):
            raise PreconditionError("crescent inner open must be contained in the outer open")

    @classmethod
    def of(cls, U, V) -> "Crescent":
        """``U \\ V`` for arbitrary opens, normalized to ``U \\ (U & V)``."""
        return cls(U, U.intersect(V))

    @property
    def space(self):
        return self.outer.space

    def is_empty(self) -> bool:
        return self.outer.issubset(self.inner)

    def __contains__(self, x) -> bool:
        return x in self.outer and x not in self.inner

    def disjoint(self, other: "Crescent") -> bool:
        return self.outer.intersect(other.outer).issubset(self.inner.union(other.inner))

    def intersect(self, other: "Crescent") -> "Crescent":
        outer = self.outer.intersect(other.outer)
        return Crescent(outer, outer.intersect(self.inner.union(other.inner)))

    def minus(self, other: "Crescent") -> list["Crescent"]:
        """``self \\ other`` as at most two disjoint crescents."""
        U1, V1, U2, V2 = self.outer, self.inner, other.outer, other.inner
        outside = Crescent(U1, V1.union(U1.intersect(U2)))
        inside_hole = Crescent(U1.intersect(V2), V1.intersect(V2))
        return [c for c in (outside, inside_hole) if not c.is_empty()]

    def sort_key(self):
        return (self.outer.sort_key(), self.inner.sort_key())


class RingElement:
    """A finite disjoint union of nonempty crescents, sorted canonically."""

    def __init__(self, crescents: Iterable[Crescent] = (), space=None, *, check: bool = True):
        cs = [c for c in crescents if not c.is_empty()]
        if check:
            for i, a in enumerate(cs):
                for b in cs[i + 1:]:
                    check_same_space(a.space, b.space)
                    if not a.disjoint(b):
                        raise PreconditionError("ring element crescents must be pairwise disjoint")
        self.crescents = tuple(sorted(cs, key=Crescent.sort_key))
        self.space = cs[0].space if cs else space

    def __repr__(self):
        return "RingElement(" + ", ".join(f"{c.outer!r} \\ {c.inner!r}" for c in self.crescents) + ")"

    def __iter__(self):
        return iter(self.crescents)

    def __len__(self):
        return len(self.crescents)

    def __contains__(self, x) -> bool:
        return any(x in c for c in self.crescents)

    def __eq__(self, other):
        """Syntactic equality of normal forms; see :meth:`same_set` for denotations."""
        return isinstance(other, RingElement) and self.crescents == other.crescents

    def __hash__(self):
        return hash(self.crescents)

    def is_empty(self) -> bool:
        return not self.crescents

    def _pair(self, other: "RingElement"):
        if self.space is not None and other.space is not None:
            check_same_space(self.space, other.space)
        return self.space if self.space is not None else other.space

    def minus(self, other: "RingElement") -> "RingElement":
        space = self._pair(other)
        pieces = list(self.crescents)
        for b in other.crescents:
            pieces = [p for a in pieces for p in a.minus(b)]
        return RingElement(pieces, space, check=False)

    def intersect(self, other: "RingElement") -> "RingElement":
        space = self._pair(other)
        return RingElement((a.intersect(b) for a in self.crescents for b in other.crescents),
                           space, check=False)

    def union(self, other: "RingElement") -> "RingElement":
        space = self._pair(other)
        return RingElement(self.crescents + other.minus(self).crescents, space, check=False)

    def disjoint_union(self, other: "RingElement") -> "RingElement":
        """Concatenate crescent lists; raises if the operands overlap."""
        space = self._pair(other)
        return RingElement(self.crescents + other.crescents, space)

    def issubset(self, other: "RingElement") -> bool:
        return self.minus(other).is_empty()

    def same_set(self, other: "RingElement") -> bool:
        return self.issubset(other) and other.issubset(self)

    def disjoint(self, other: "RingElement") -> bool:
        return self.intersect(other).is_empty()

    @classmethod
    def from_open(cls, U) -> "RingElement":
        return cls([Crescent(U, U.bottom())], U.space)


# -- set expressions --------------------------------------------------------

class SetExpr:
    """A formula over opens built with ``|``, ``&`` and ``-``."""

    def __or__(self, other):
        return Op("union", self, as_expr(other))

    def __and__(self, other):
        return Op("inter", self, as_expr(other))

    def __sub__(self, other):
        return Op("diff", self, as_expr(other))

    def leaves(self) -> list:
        raise NotImplementedError

    def truth(self, inside: dict) -> bool:
        raise NotImplementedError

    def by_ring_ops(self) -> RingElement:
        """Evaluate with ring-element operations instead of the atom expansion."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Leaf(SetExpr):
    open: object

    def leaves(self):
        return [self.open]

    def truth(self, inside):
        return inside[self.open]

    def by_ring_ops(self):
        return RingElement.from_open(self.open)


@dataclass(frozen=True, eq=False)
class Op(SetExpr):
    op: str
    left: SetExpr
    right: SetExpr

    def leaves(self):
        return self.left.leaves() + self.right.leaves()

    def truth(self, inside):
        a, b = self.left.truth(inside), self.right.truth(inside)
        if self.op == "union":
            return a or b
        if self.op == "inter":
            return a and b
        return a and not b

    def by_ring_ops(self):
        a, b = self.left.by_ring_ops(), self.right.by_ring_ops()
        if self.op == "union":
            return a.union(b)
        if self.op == "inter":
            return a.intersect(b)
        return a.minus(b)


def as_expr(x) -> SetExpr:
    return x if isinstance(x, SetExpr) else Leaf(x)


def to_ring_element(expr) -> RingElement:
    """Normal form of a set expression as disjoint crescents.

    The leaves ``U_1..U_n`` cut the space into atoms indexed by the set
    ``S`` of leaves containing a point; the atom is the crescent
    ``(meet of U_i, i in S) \\ (union of U_j, j not in S)``.  The expression's
    set is the union of the nonempty atoms on which it evaluates to true.
    Atoms with empty outer open are pruned together with all supersets of ``S``.
    """
    expr = as_expr(expr)
    leaves = []
    for U in expr.leaves():
        if not _supports_ring(U):
            raise PreconditionError(f"unsupported open variant {type(U).__name__}")
        if U not in leaves:
            leaves.append(U)
    space = leaves[0].space
    for U in leaves:
        if U.space != space:
            raise VariantMismatch("set expression mixes spaces")
    leaves.sort(key=lambda U: U.sort_key())
    n = len(leaves)
    out = []

    def rec(start, chosen, outer):
        # outer = meet of the chosen leaves, nonempty here
        inside = {U: (k in chosen) for k, U in enumerate(leaves)}
        if chosen and expr.truth(inside):
            rest = [leaves[k] for k in range(n) if k not in chosen]
            inner = outer.bottom()
            for U in rest:
                inner = inner.union(outer.intersect(U))
            c = Crescent(outer, inner)
            if not c.is_empty():
                out.append(c)
        for k in range(start, n):
            nxt = outer.intersect(leaves[k]) if chosen else leaves[k]
            if not nxt.is_empty():
                rec(k + 1, chosen | {k}, nxt)

    rec(0, frozenset(), None)
    return RingElement(out, space, check=False)


# -- restriction valuations -------------------------------------------------

class Restrict(Valuation):
    """``W -> sum_i nu(W & U_i) - nu(W & V_i)`` over the crescents ``U_i \\ V_i`` of ``A``."""

    tag = "restrict"

    def __init__(self, base: Valuation, A: RingElement):
        if A.space is not None:
            check_same_space(base.space, A.space)
        self.base = base
        self.ring = A
        self.space = base.space

    def evaluate(self, W) -> Scalar:
        total = Fraction(0)
        for c in self.ring:
            outer = self.base(W.intersect(c.outer))
            if outer is INF:
                raise UnboundedRestriction("restriction of a valuation that is infinite on a crescent")
            inner = self.base(W.intersect(c.inner))
            if inner > outer:
                raise InvariantViolation(f"inner value {inner} exceeds outer value {outer}")
            total += outer - inner
        return total

    def __repr__(self):
        return f"Restrict({self.base!r}, {self.ring!r})"


def restrict(nu: Valuation, A) -> Restrict:
    if isinstance(A, Crescent):
        A = RingElement([A], A.space)
    elif not isinstance(A, RingElement):
        A = to_ring_element(A)
    return Restrict(nu, A)


def atom_at(nu: Valuation, crescent: Crescent) -> Scalar:
    """Mass of ``nu`` on a crescent certified to be a singleton."""
    outer = nu(crescent.outer)
    if outer is INF:
        raise UnboundedRestriction("atom of an unbounded valuation")
    inner = nu(crescent.inner)
    if inner > outer:
        raise InvariantViolation(f"inner value {inner} exceeds outer value {outer}")
    return outer - inner
