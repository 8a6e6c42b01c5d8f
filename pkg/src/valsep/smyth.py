"""Finitely presented compact subsets of the Sorgenfrey line and the Smyth powerdomain over it.

A candidate is a finite list of blocks: finite sets of rationals and
geometric chains ``limit +/- c * q^j``.  A subset of the Sorgenfrey line is
compact iff it is well-founded for ``>=`` and contains the infimum of each
of its nonempty subsets; for this representation that comes down to: no
ascending chain, and the limit of every descending chain belongs to the set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import PreconditionError, VerificationFailed
from .scalar import rational
from .sorgenfrey import (CountableRlOpen, RlOpen, TailFamily, lambda_eval, measure_upper_bound,
                         normalize, shrink_interval)
from .valuation import SPACE_SMYTH, Valuation

DESCENDING = "descending"
ASCENDING = "ascending"


@dataclass(frozen=True)
class FiniteBlock:
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted({rational(x) for x in self.points})))

    def __contains__(self, x) -> bool:
        return rational(x) in self.points

    def finite_points(self) -> tuple:
        return self.points


@dataclass(frozen=True)
class ChainRl:
    """``{limit + c*q^j}`` (descending) or ``{limit - c*q^j}`` (ascending), ``j >= 0``.

    ``include_limit`` adds the limit itself; ``prefix`` adds finitely many
    extra points, which must be off the generated sequence.
    """

    limit: Fraction
    c: Fraction
    q: Fraction
    direction: str = DESCENDING
    include_limit: bool = True
    prefix: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "limit", rational(self.limit))
        object.__setattr__(self, "c", rational(self.c))
        object.__setattr__(self, "q", rational(self.q))
        object.__setattr__(self, "prefix", tuple(sorted({rational(x) for x in self.prefix})))
        if self.c <= 0:
            raise PreconditionError("chain coefficient must be positive")
        if not 0 < self.q < 1:
            raise PreconditionError("chain ratio must lie strictly between 0 and 1")
        if self.direction not in (DESCENDING, ASCENDING):
            raise PreconditionError(f"unknown chain direction {self.direction!r}")
        for x in self.prefix:
            if self.index_of(x) is not None:
                raise PreconditionError(f"prefix point {x} lies on the generated sequence")

    @property
    def sign(self) -> int:
        return 1 if self.direction == DESCENDING else -1

    def point(self, j: int) -> Fraction:
        return self.limit + self.sign * self.c * self.q ** j

    def index_of(self, x) -> int | None:
        """``j`` with ``point(j) == x``, or None."""
        d = self.sign * (rational(x) - self.limit)
        if d <= 0 or d > self.c:
            return None
        v, j = self.c, 0
        while v > d:
            v *= self.q
            j += 1
        return j if v == d else None

    def __contains__(self, x) -> bool:
        x = rational(x)
        return (self.index_of(x) is not None or x in self.prefix
                or (self.include_limit and x == self.limit))

    def finite_points(self) -> tuple:
        pts = set(self.prefix)
        if self.include_limit:
            pts.add(self.limit)
        return tuple(sorted(pts))

    def first_index_below(self, b) -> int:
        """Least ``j`` with ``point(j) < b``; needs a descending chain with ``limit < b``."""
        if self.direction != DESCENDING or not self.limit < b:
            raise PreconditionError("first_index_below needs a descending chain with limit < b")
        j = 0
        while not self.point(j) < b:
            j += 1
        return j


@dataclass(frozen=True)
class CompactCandidate:
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        for blk in self.blocks:
            if not isinstance(blk, (FiniteBlock, ChainRl)):
                raise PreconditionError(f"unknown block {blk!r}")

    def __contains__(self, x) -> bool:
        return any(x in blk for blk in self.blocks)

    def chains(self) -> list[ChainRl]:
        return [b for b in self.blocks if isinstance(b, ChainRl)]

    def finite_points(self) -> list[Fraction]:
        """All points that are not generated chain points, ascending and distinct."""
        return sorted({x for blk in self.blocks for x in blk.finite_points()})

    def is_empty(self) -> bool:
        return not self.chains() and not self.finite_points()

    def points(self, n: int) -> list[Fraction]:
        """The first ``n`` points of the canonical enumeration."""
        fin = self.finite_points()
        chains = self.chains()
        out = fin[:n]
        t = 0
        while len(out) < n and chains:
            for ch in chains:
                if len(out) < n:
                    out.append(ch.point(t))
            t += 1
        return out


def membership(x, cand: CompactCandidate) -> bool:
    return rational(x) in cand


# -- compactness decision ---------------------------------------------------

@dataclass(frozen=True)
class MissingInfimum:
    """The chain ``blocks[chain_index]`` converges down to ``limit``, which is not in the set."""

    chain_index: int
    limit: Fraction


@dataclass(frozen=True)
class AscendingCover:
    """``]-inf, r_0[``, ``[r_n, r_{n+1}[`` for ``n >= 0`` and ``[limit, inf[``.

    A cover of the whole line by Sorgenfrey opens; each middle piece holds
    exactly one chain point, so no finite subfamily covers the chain.
    """

    chain: ChainRl

    def pieces(self, n: int) -> list[tuple]:
        """The two unbounded pieces and the first ``n`` middle ones (None is infinity)."""
        ch = self.chain
        out = [(None, ch.point(0))]
        out += [(ch.point(k), ch.point(k + 1)) for k in range(n)]
        out.append((ch.limit, None))
        return out

    def piece_of(self, x):
        """Which piece holds ``x``: "left", a middle index ``n``, or "right"."""
        ch = self.chain
        x = rational(x)
        if x < ch.point(0):
            return "left"
        if x >= ch.limit:
            return "right"
        n = 0
        while not x < ch.point(n + 1):
            n += 1
        return n


@dataclass(frozen=True)
class AscendingChain:
    chain_index: int
    cover: AscendingCover


@dataclass(frozen=True)
class CompactnessVerdict:
    compact: bool
    reason: object = None

    def __bool__(self):
        return self.compact

    @property
    def status(self) -> str:
        return "Compact" if self.compact else "NotCompact"


def is_compact(cand: CompactCandidate) -> CompactnessVerdict:
    for i, blk in enumerate(cand.blocks):
        if isinstance(blk, ChainRl) and blk.direction == ASCENDING:
            return CompactnessVerdict(False, AscendingChain(i, AscendingCover(blk)))
    for i, blk in enumerate(cand.blocks):
        # the limit may be supplied by any block, not only by the chain itself
        if isinstance(blk, ChainRl) and blk.limit not in cand:
            return CompactnessVerdict(False, MissingInfimum(i, blk.limit))
    return CompactnessVerdict(True)


@dataclass(frozen=True)
class SmythElem:
    """A nonempty compact (hence saturated) subset of the Sorgenfrey line."""

    rep: CompactCandidate

    def __post_init__(self):
        verdict = is_compact(self.rep)
        if not verdict:
            raise PreconditionError(f"candidate is not compact: {verdict.reason!r}")
        if self.rep.is_empty():
            raise PreconditionError("the Smyth powerdomain has no empty element")

    def __contains__(self, x) -> bool:
        return x in self.rep

    @classmethod
    def of(cls, *blocks) -> "SmythElem":
        return cls(CompactCandidate(blocks))

    @classmethod
    def finite(cls, points: Iterable) -> "SmythElem":
        return cls(CompactCandidate((FiniteBlock(tuple(points)),)))


# -- inclusion between candidates --------------------------------------------

def _factor(n: int) -> dict:
    from sympy import factorint  # deferred: only chain-in-chain inclusion needs it

    return dict(factorint(n))


def _vec(x: Fraction) -> dict:
    v = dict(_factor(x.numerator))
    for p, e in _factor(x.denominator).items():
        v[p] = v.get(p, 0) - e
    return v


def _exact_power(x: Fraction, q: Fraction) -> int | None:
    """``e >= 0`` with ``q^e == x``, or None."""
    if x > 1 or x <= 0:
        return None
    v, e = Fraction(1), 0
    while v > x:
        v *= q
        e += 1
    return e if v == x else None


def _matching_indices(ch2: ChainRl, ch1: ChainRl):
    """Indices ``j`` of ``ch2`` lying on ``ch1`` (same limit and direction).

    Returns None, ``(t0, 0)`` for a single index, or ``(t0, p)`` for the
    progression ``t0 + p*N``.  Solves ``c2 q2^j = c1 q1^e`` over exponent
    vectors of primes.
    """
    A, B = _vec(ch1.q), _vec(ch2.q)
    keys = set(A) | set(B)
    ratios = {Fraction(B.get(k, 0), A[k]) if A.get(k) else None for k in keys}
    if None not in ratios and len(ratios) == 1:
        ratio = ratios.pop()
        p = ratio.denominator
        j0 = 0
        while ch2.c * ch2.q ** j0 > ch1.c:
            j0 += 1
        for j in range(j0, j0 + p):
            if _exact_power(ch2.c * ch2.q ** j / ch1.c, ch1.q) is not None:
                return (j, p)
        return None
    C = _vec(ch2.c / ch1.c)
    keys = sorted(keys | set(C))
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1:]:
            a1, a2, b1, b2 = A.get(k1, 0), A.get(k2, 0), B.get(k1, 0), B.get(k2, 0)
            det = a1 * b2 - b1 * a2
            if det:
                c1, c2 = C.get(k1, 0), C.get(k2, 0)
                j = Fraction(c1 * a2 - a1 * c2, det)
                e = Fraction(c1 * b2 - b1 * c2, det)
                if (j.denominator == 1 and e.denominator == 1 and j >= 0 and e >= 0
                        and ch2.c * ch2.q ** int(j) == ch1.c * ch1.q ** int(e)):
                    return (int(j), 0)
                return None
    return None


def _chain_subset(ch2: ChainRl, cand: CompactCandidate) -> bool:
    """Are all generated points of ``ch2`` in ``cand``?

    Past an index bound only chains with the same limit and direction can
    hold points of ``ch2``, and they do so periodically; checking one
    period beyond the bound decides the question.
    """
    bounds = [0]
    periods = []
    for x in cand.finite_points():
        j = ch2.index_of(x)
        if j is not None:
            bounds.append(j + 1)
    for ch1 in cand.chains():
        if ch1.limit == ch2.limit:
            if ch1.direction == ch2.direction:
                hit = _matching_indices(ch2, ch1)
                if hit is not None:
                    bounds.append(hit[0] + 1)
                    if hit[1]:
                        periods.append(hit[1])
            continue
        delta = abs(ch1.limit - ch2.limit) / 2
        j = 0
        while ch2.c * ch2.q ** j >= delta:
            j += 1
        bounds.append(j)
        e = 0
        while ch1.c * ch1.q ** e >= delta:
            k = ch2.index_of(ch1.point(e))
            if k is not None:
                bounds.append(k + 1)
            e += 1
    period = math.lcm(*periods) if periods else 1
    return all(ch2.point(j) in cand for j in range(max(bounds) + period))


def candidate_subset(small: CompactCandidate, big: CompactCandidate) -> bool:
    if not all(x in big for x in small.finite_points()):
        return False
    return all(_chain_subset(ch, big) for ch in small.chains())


def smyth_leq(Q1: SmythElem, Q2: SmythElem) -> bool:
    """Smyth order: ``Q1 <= Q2`` iff ``Q2`` is a subset of ``Q1``."""
    return candidate_subset(Q2.rep, Q1.rep)


def smyth_equal(Q1: SmythElem, Q2: SmythElem) -> bool:
    return smyth_leq(Q1, Q2) and smyth_leq(Q2, Q1)


def in_box(Q, U: RlOpen) -> bool:
    """Is ``Q`` contained in ``U``?  Chains are settled by locating their tail inside ``U``."""
    rep = Q.rep if isinstance(Q, SmythElem) else Q
    if not all(x in U for x in rep.finite_points()):
        return False
    for ch in rep.chains():
        if ch.direction != DESCENDING:
            raise PreconditionError("in_box needs a compact set; ascending chain found")
        iv = U.interval_of(ch.limit)
        if iv is None:
            return False
        J = ch.first_index_below(iv[1])
        if not all(ch.point(j) in U for j in range(J)):
            return False
    return True


# -- Box opens and the image of lambda --------------------------------------

@dataclass(frozen=True)
class SmythOpen:
    """Union of ``Box U_i``: all compact sets inside some ``U_i``.

    ``boxes`` is a non-redundant, sorted family of nonempty Sorgenfrey
    opens; build instances with :meth:`of`.
    """

    boxes: tuple = ()
    space = SPACE_SMYTH

    @classmethod
    def of(cls, opens: Iterable[RlOpen]) -> "SmythOpen":
        ops = sorted({U for U in opens if not U.is_empty()}, key=RlOpen.sort_key)
        keep = [U for U in ops if not any(U != V and U.issubset(V) for V in ops)]
        return cls(tuple(keep))

    def __contains__(self, Q) -> bool:
        return any(in_box(Q, U) for U in self.boxes)

    def is_empty(self) -> bool:
        return not self.boxes

    def union(self, other: "SmythOpen") -> "SmythOpen":
        return SmythOpen.of(self.boxes + other.boxes)

    def intersect(self, other: "SmythOpen") -> "SmythOpen":
        return SmythOpen.of(U.intersect(V) for U in self.boxes for V in other.boxes)

    __or__ = union
    __and__ = intersect

    def issubset(self, other: "SmythOpen") -> bool:
        # Box U lies in a union of boxes iff U lies in one of them: two points
        # escaping two different members would form a compact set escaping both
        return all(any(U.issubset(V) for V in other.boxes) for U in self.boxes)

    def bottom(self) -> "SmythOpen":
        return SmythOpen()

    def sort_key(self):
        return tuple(U.sort_key() for U in self.boxes)

    def trace(self) -> RlOpen:
        """Intersection with the embedded singletons, read back as a Sorgenfrey open."""
        out = RlOpen()
        for U in self.boxes:
            out = out.union(U)
        return out


def box(U: RlOpen) -> SmythOpen:
    return SmythOpen.of([U])


def lambda_bar(W: SmythOpen) -> Fraction:
    return lambda_eval(W.trace())


class SmythImageLambda(Valuation):
    """``W -> lambda(W restricted to singletons)`` on Box opens."""

    tag = "lambda_bar"
    space = SPACE_SMYTH

    def evaluate(self, W):
        return lambda_bar(W)

    def __repr__(self):
        return "SmythImageLambda()"


LAMBDA_BAR = SmythImageLambda()


# -- refuters -------------------------------------------------------------

@dataclass(frozen=True)
class ContainmentProof:
    """How the points of ``A[element]`` end up inside ``V``.

    ``finite_points`` and the first ``threshold`` points of each chain lie in
    ``V.finite_part``; chain points from ``threshold`` on anchor the tail
    ``V.tails[tail]``.  ``chains`` holds ``(chain position, threshold, tail)``.
    """

    element: int
    finite_points: tuple
    chains: tuple


@dataclass(frozen=True)
class PCRefutationCertificate:
    U: RlOpen
    r: Fraction
    A: tuple
    V: CountableRlOpen
    bound: Fraction
    containments: tuple
    checks: tuple = field(default=(), compare=False)


def _tail_inside(tf: TailFamily, U: RlOpen) -> bool:
    iv = U.interval_of(tf.chain.limit)
    if iv is None:
        return False
    b = iv[1]
    x0 = tf.anchor(0)
    return x0 < b and tf.length(0) <= b - x0


def _contained(Q: SmythElem, proof: ContainmentProof, V: CountableRlOpen) -> bool:
    chains = Q.rep.chains()
    if tuple(Q.rep.finite_points()) != proof.finite_points:
        return False
    if not all(x in V.finite_part for x in proof.finite_points):
        return False
    if sorted(k for k, _, _ in proof.chains) != list(range(len(chains))):
        return False
    for k, T, ti in proof.chains:
        ch = chains[k]
        if not all(ch.point(t) in V.finite_part for t in range(T)):
            return False
        if not (0 <= ti < len(V.tails)):
            return False
        tf = V.tails[ti]
        if tf.chain != ch or tf.start != T:
            return False
    return True


def verify_pc_certificate(cert: PCRefutationCertificate) -> tuple:
    """Re-check every claim of a certificate; returns ``(check, passed)`` pairs."""
    U, V = cert.U, cert.V
    checks = [
        ("r below lambda(U)", 0 < cert.r < lambda_eval(U)),
        ("bound is the upper bound of V", cert.bound == measure_upper_bound(V)),
        ("bound at most r", cert.bound <= cert.r),
        ("every element of A inside U", all(in_box(Q, U) for Q in cert.A)),
        ("proof for every element", [p.element for p in cert.containments] == list(range(len(cert.A)))),
        ("every element of A inside V",
         all(_contained(Q, p, V) for Q, p in zip(cert.A, cert.containments))),
        ("finite part of V inside U", V.finite_part.issubset(U)),
        ("tails of V inside U", all(_tail_inside(tf, U) for tf in V.tails)),
    ]
    return tuple(checks)


def refute_point_continuity(U: RlOpen, r, A: Iterable[SmythElem]) -> PCRefutationCertificate:
    """An open ``V`` around every member of ``A`` with measure bound at most ``r``.

    With ``m = |A|`` and ``s = r/m``, the ``j``-th point of each element gets
    the interval ``[x, x + eps[`` with ``eps = shrink_interval(x, s/2^(j+1), U)``.
    Chain points past the threshold where the bound alone keeps the interval
    inside ``U`` are grouped into a geometric tail.
    """
    r = rational(r)
    A = tuple(A)
    lam = lambda_eval(U)
    if not 0 < r < lam:
        raise PreconditionError(f"r-out-of-range: need 0 < r < {lam}, got {r}")
    for i, Q in enumerate(A):
        if not in_box(Q, U):
            raise PreconditionError(f"element-not-in-box: A[{i}] is not inside U")
    pieces, tails, proofs = [], [], []
    s = r / len(A) if A else r
    for i, Q in enumerate(A):
        fin = Q.rep.finite_points()
        chains = Q.rep.chains()
        F, mc = len(fin), len(chains)
        for n, x in enumerate(fin):
            pieces.append((x, x + shrink_interval(x, s / 2 ** (n + 1), U)))
        chain_proofs = []
        for k, ch in enumerate(chains):
            b = U.interval_of(ch.limit)[1]

            def budget(t, k=k):
                return s / 2 ** (F + k + mc * t + 1)

            t = 0
            while not (ch.point(t) < b and budget(t) <= b - ch.point(t)):
                x = ch.point(t)
                pieces.append((x, x + shrink_interval(x, budget(t), U)))
                t += 1
            tails.append(TailFamily(ch, t, budget(t), mc))
            chain_proofs.append((k, t, len(tails) - 1))
        proofs.append(ContainmentProof(i, tuple(fin), tuple(chain_proofs)))
    V = CountableRlOpen(normalize(pieces), tuple(tails))
    cert = PCRefutationCertificate(U, r, A, V, measure_upper_bound(V), tuple(proofs))
    checks = verify_pc_certificate(cert)
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise VerificationFailed(f"certificate check failed: {failed}", cert)
    return PCRefutationCertificate(U, r, A, V, cert.bound, tuple(proofs), checks)


@dataclass(frozen=True)
class ConsonanceCertificate:
    Q: SmythElem
    r: Fraction
    V: CountableRlOpen
    bound: Fraction
    checks: tuple = field(default=(), compare=False)


def consonance_refuter(Q: SmythElem, r) -> ConsonanceCertificate:
    """``V = union of [x_n, x_n + r/2^(n+1)[`` over the canonical enumeration of ``Q``."""
    r = rational(r)
    if r <= 0:
        raise PreconditionError("r must be positive")
    fin = Q.rep.finite_points()
    chains = Q.rep.chains()
    F, mc = len(fin), len(chains)
    finite = normalize((x, x + r / 2 ** (n + 1)) for n, x in enumerate(fin))
    tails = tuple(TailFamily(ch, 0, r / 2 ** (F + k + 1), mc) for k, ch in enumerate(chains))
    V = CountableRlOpen(finite, tails)
    bound = measure_upper_bound(V)
    proof = ContainmentProof(0, tuple(fin), tuple((k, 0, k) for k in range(mc)))
    checks = (
        ("bound is the upper bound of V", bound == measure_upper_bound(V)),
        ("bound at most r", bound <= r),
        ("Q inside V", _contained(Q, proof, V)),
    )
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise VerificationFailed(f"certificate check failed: {failed}")
    return ConsonanceCertificate(Q, r, V, bound, checks)


@dataclass(frozen=True)
class AgreementVerdict:
    agree: bool
    rows: tuple  # (x, x in U, {x} in Box U)

    def __bool__(self):
        return self.agree

    @property
    def disagreements(self) -> list:
        return [x for x, a, b in self.rows if a != b]


def dcpo_model_agreement(U: RlOpen, samples: Iterable) -> AgreementVerdict:
    """Compare ``x in U`` with ``{x} in Box U`` on each sample point."""
    B = box(U)
    rows = []
    for x in sorted({rational(x) for x in samples}):
        rows.append((x, x in U, SmythElem.finite([x]) in B))
    return AgreementVerdict(all(a == b for _, a, b in rows), tuple(rows))
