"""Valuations as evaluation strategies over a space's opens.

Every open-set class in this package exposes the same small protocol:
``space`` (a tag shared by all opens of one space), ``union``,
``intersect``, ``issubset``, ``is_empty``, ``bottom`` (the empty open of the
same space), ``sort_key`` and ``__contains__`` for points.  Valuations are
callables on those opens and carry the same ``space`` tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import PreconditionError, SizeLimitExceeded, VariantMismatch
from .scalar import INF, Scalar, scalar

SPACE_J = "J"
SPACE_NCOF = "Ncof"
SPACE_RL = "Rl"
SPACE_SMYTH = "Smyth"


def space_name(space) -> str:
    return space if isinstance(space, str) else "finite"


def check_same_space(a, b):
    if a != b:
        raise VariantMismatch(f"space mismatch: {space_name(a)} vs {space_name(b)}")


class Valuation:
    """Base class.  Subclasses implement :meth:`evaluate`."""

    space = None
    tag = "abstract"

    def __call__(self, U) -> Scalar:
        check_same_space(getattr(U, "space", None), self.space)
        return self.evaluate(U)

    def evaluate(self, U) -> Scalar:
        raise NotImplementedError

    def __add__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        check_same_space(self.space, other.space)
        return LinComb([(1, self), (1, other)])

    def __rmul__(self, c):
        return LinComb([(c, self)])

    def __mul__(self, c):
        return LinComb([(c, self)])


class Zero(Valuation):
    tag = "zero"

    def __init__(self, space):
        self.space = space

    def evaluate(self, U):
        return Fraction(0)

    def __repr__(self):
        return f"Zero({space_name(self.space)})"


class Dirac(Valuation):
    tag = "dirac"

    def __init__(self, point, space):
        self.point = point
        self.space = space

    def evaluate(self, U):
        return Fraction(1) if self.point in U else Fraction(0)

    def __repr__(self):
        return f"Dirac({self.point!r})"


def _terms(terms, *, finite_positive=True):
    out = []
    for c, x in terms:
        c = scalar(c)
        if finite_positive and (c is INF or c == 0):
            raise PreconditionError(f"coefficients must be finite and positive, got {c}")
        out.append((c, x))
    return tuple(out)


class Simple(Valuation):
    """``sum_i c_i * delta_{x_i}``; repeated points are merged."""

    tag = "simple"

    def __init__(self, terms: Iterable[tuple], space):
        merged: dict = {}
        for c, x in _terms(terms):
            merged[x] = merged.get(x, Fraction(0)) + c
        self.terms = tuple((c, x) for x, c in merged.items())
        self.space = space

    @property
    def support(self):
        return [x for _, x in self.terms]

    def coefficient(self, x) -> Fraction:
        for c, y in self.terms:
            if y == x:
                return c
        return Fraction(0)

    def as_dict(self) -> dict:
        return {x: c for c, x in self.terms}

    def total_mass(self) -> Fraction:
        return sum((c for c, _ in self.terms), Fraction(0))

    def evaluate(self, U):
        total = Fraction(0)
        for c, x in self.terms:
            if x in U:
                total += c
        return total

    def __repr__(self):
        return f"{type(self).__name__}({list(self.terms)!r})"


class DiscreteDeclared(Simple):
    """A discrete valuation given by an explicitly declared finite support."""

    tag = "discrete"


class ConstOne(Valuation):
    """1 on every nonempty open, 0 on the empty one.

    On Johnstone's dcpo this is the valuation usually called mu, on the
    cofinite naturals it is beta; on a finite poset it is the
    characteristic valuation of the whole space.
    """

    tag = "const_one"

    def __init__(self, space):
        self.space = space

    def evaluate(self, U):
        return Fraction(0) if U.is_empty() else Fraction(1)

    def __repr__(self):
        return f"ConstOne({space_name(self.space)})"


class LinComb(Valuation):
    """Finite nonnegative combination; ``0 * inf`` is taken as 0."""

    tag = "lincomb"

    def __init__(self, terms: Iterable[tuple]):
        flat = []
        for c, nu in terms:
            c = scalar(c)
            if c is INF:
                raise PreconditionError("LinComb coefficients must be finite")
            if isinstance(nu, LinComb):
                flat.extend((c * c2, nu2) for c2, nu2 in nu.terms)
            else:
                flat.append((c, nu))
        if not flat:
            raise PreconditionError("empty linear combination; use Zero")
        for _, nu in flat:
            check_same_space(nu.space, flat[0][1].space)
        self.terms = tuple(flat)
        self.space = flat[0][1].space

    def evaluate(self, U):
        total = Fraction(0)
        for c, nu in self.terms:
            total = total + c * nu.evaluate(U)
        return total

    def __repr__(self):
        return " + ".join(f"{c}*{nu!r}" for c, nu in self.terms)


class FunctionValuation(Valuation):
    """Wraps an arbitrary callable on opens.

    Used both for black-box inputs (the decomposition algorithms may only
    query values) and for deliberately broken test doubles.
    """

    tag = "function"

    def __init__(self, fn: Callable, space, name: str = "black box"):
        self.fn = fn
        self.space = space
        self.name = name

    def evaluate(self, U):
        return self.fn(U)

    def __repr__(self):
        return f"<{self.name} on {space_name(self.space)}>"


def black_box(nu: Valuation, name: str = "black box") -> FunctionValuation:
    """Hide ``nu``'s structure, exposing only evaluation."""
    return FunctionValuation(nu.evaluate, nu.space, name)


# -- probe sets -----------------------------------------------------------

class ProbeSet:
    """Nonempty finite family of opens of one space, kept in canonical order."""

    def __init__(self, opens: Iterable):
        uniq = {}
        for U in opens:
            uniq.setdefault(U, U)
        if not uniq:
            raise PreconditionError("a probe set must be nonempty")
        ops = list(uniq)
        space = ops[0].space
        for U in ops:
            check_same_space(U.space, space)
        self.space = space
        self.opens = sorted(ops, key=lambda U: U.sort_key())

    def __iter__(self):
        return iter(self.opens)

    def __len__(self):
        return len(self.opens)

    def closed(self, limit: int = 4096) -> "ProbeSet":
        """Close under pairwise union and intersection (and add the empty open)."""
        seen = set(self.opens)
        seen.add(self.opens[0].bottom())
        frontier = list(seen)
        while frontier:
            new = []
            current = list(seen)
            for U in frontier:
                for V in current:
                    for W in (U.union(V), U.intersect(V)):
                        if W not in seen:
                            seen.add(W)
                            new.append(W)
                if len(seen) > limit:
                    raise SizeLimitExceeded(f"probe closure exceeds {limit} opens")
            frontier = new
        return ProbeSet(seen)

    def is_closed(self) -> bool:
        s = set(self.opens)
        return all(U.union(V) in s and U.intersect(V) in s for U in s for V in s)


def _probes(probes) -> ProbeSet:
    return probes if isinstance(probes, ProbeSet) else ProbeSet(probes)


@dataclass(frozen=True)
class AxiomVerdict:
    ok: bool
    kind: str | None = None
    witness: tuple = ()
    values: tuple = ()

    def __bool__(self):
        return self.ok


def check_axioms(nu: Valuation, probes) -> AxiomVerdict:
    """Strictness, monotonicity and modularity of ``nu`` on the closed probe family."""
    P = _probes(probes)
    check_same_space(P.space, nu.space)
    if not P.is_closed() or P.opens[0].bottom() not in set(P.opens):
        P = P.closed()
    ops = P.opens
    vals = {U: nu(U) for U in ops}
    empty = ops[0].bottom()
    if vals[empty] != 0:
        return AxiomVerdict(False, "strictness", (empty,), (vals[empty],))
    for i, U in enumerate(ops):
        for V in ops[i + 1:]:
            for A, B in ((U, V), (V, U)):
                if A.issubset(B) and not vals[A] <= vals[B]:
                    return AxiomVerdict(False, "monotonicity", (A, B), (vals[A], vals[B]))
    for i, U in enumerate(ops):
        for V in ops[i + 1:]:
            lhs = vals[U] + vals[V]
            rhs = vals[U.union(V)] + vals[U.intersect(V)]
            if lhs != rhs:
                return AxiomVerdict(False, "modularity", (U, V), (lhs, rhs))
    return AxiomVerdict(True)


@dataclass(frozen=True)
class OrderVerdict:
    """Result of a stochastic-order probe; falsy iff a counterexample was found."""

    holds: bool
    witness: object = None
    left: Scalar | None = None
    right: Scalar | None = None

    def __bool__(self):
        return self.holds


def stochastic_leq_probe(nu1: Valuation, nu2: Valuation, probes) -> OrderVerdict:
    """Search the probes for an open with ``nu1(U) > nu2(U)``.

    Finding none is evidence, not proof, unless the probes are all opens.
    """
    check_same_space(nu1.space, nu2.space)
    for U in _probes(probes):
        a, b = nu1(U), nu2(U)
        if a > b:
            return OrderVerdict(False, U, a, b)
    return OrderVerdict(True)


def evaluation_equal(nu1: Valuation, nu2: Valuation, probes: Sequence) -> bool:
    return all(nu1(U) == nu2(U) for U in probes)
