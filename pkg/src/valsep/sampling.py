"""Seeded random generators for every input type (used by the CLI demos, scripts and tests)."""

from __future__ import annotations

import random
from fractions import Fraction

from .johnstone import OMEGA, JOpen, JPoint, NcofOpen, discrete_j
from .poset import FinitePoset
from .smyth import ASCENDING, ChainRl, CompactCandidate, FiniteBlock, SmythElem
from .sorgenfrey import RlOpen, normalize
from .valuation import SPACE_NCOF, DiscreteDeclared, Simple

RATIOS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4))


def rng_of(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def frac(rng: random.Random, lo, hi, denominators=(1, 2, 3, 4, 8)) -> Fraction:
    """A random rational in ``[lo, hi]`` with one of the given denominators."""
    d = rng.choice(denominators)
    lo_n = -(-Fraction(lo) * d // 1)
    hi_n = Fraction(hi) * d // 1
    return Fraction(rng.randint(int(lo_n), int(hi_n)), d)


def positive(rng, hi=4, denominators=(1, 2, 3, 4, 8)) -> Fraction:
    while True:
        x = frac(rng, 0, hi, denominators)
        if x > 0:
            return x


# -- finite posets ------------------------------------------------------

def random_poset(rng, n: int, density: float = 0.4) -> FinitePoset:
    rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    perm = list(range(n))
    rng.shuffle(perm)
    return FinitePoset(range(n), [(perm[a], perm[b]) for a, b in rel])


def random_simple(rng, P: FinitePoset, k: int | None = None) -> Simple:
    if not P.elements:
        return Simple([], P)
    k = rng.randint(1, max(1, len(P))) if k is None else k
    return Simple([(positive(rng), rng.choice(P.elements)) for _ in range(k)], P)


# -- Johnstone's dcpo -----------------------------------------------------

def random_jpoint(rng, K: int = 6, p_max: float = 0.3) -> JPoint:
    c = rng.randint(0, K)
    return JPoint(c, OMEGA) if rng.random() < p_max else JPoint(c, rng.randint(0, K))


def random_theta(rng, size: int | None = None, K: int = 6) -> DiscreteDeclared:
    size = rng.randint(0, 10) if size is None else size
    pts = set()
    while len(pts) < size:
        pts.add(random_jpoint(rng, K))
    return discrete_j({p: positive(rng, 3) for p in pts})


def random_unit(rng, denominators=(1, 2, 3, 4, 5, 8)) -> Fraction:
    return frac(rng, 0, 1, denominators)


def random_jopen(rng, K: int = 6, p_empty: float = 0.0) -> JOpen:
    if rng.random() < p_empty:
        return JOpen.make((), None)
    m0 = rng.randint(0, K)
    ov = {}
    for col in range(rng.randint(0, K + 2)):
        if col < m0 and rng.random() < 0.5:
            ov[col] = None
        else:
            ov[col] = rng.randint(m0, K + 3)
    return JOpen.make(ov, rng.randint(m0, K + 3))


def dominated_family(rng, theta: DiscreteDeclared, r, size: int | None = None,
                     K: int = 6) -> list[DiscreteDeclared]:
    """Discrete valuations below ``theta + r*mu``.

    Each member keeps part of ``theta``'s masses and adds fresh point masses
    of total at most ``r``; since ``mu`` is 1 on every nonempty open, that
    stays below the target.
    """
    size = rng.randint(1, 8) if size is None else size
    fam = []
    for _ in range(size):
        masses: dict = {}
        for c, p in theta.terms:
            if rng.random() < 0.7:
                masses[p] = c * Fraction(rng.randint(0, 4), 4)
        budget = Fraction(r) * Fraction(rng.randint(0, 4), 4)
        for _ in range(rng.randint(0, 3)):
            if budget <= 0:
                break
            m = budget * Fraction(rng.randint(1, 4), 4)
            p = random_jpoint(rng, K + 4)
            masses[p] = masses.get(p, Fraction(0)) + m
            budget -= m
        fam.append(discrete_j({p: c for p, c in masses.items() if c}))
    return fam


# -- cofinite naturals ----------------------------------------------------

def random_alpha(rng, size: int | None = None, K: int = 12) -> DiscreteDeclared:
    size = rng.randint(0, 10) if size is None else size
    pts = rng.sample(range(K + 1), min(size, K + 1))
    return DiscreteDeclared([(positive(rng, 3), i) for i in pts], SPACE_NCOF)


def random_ncof_open(rng, K: int = 12, p_empty: float = 0.1) -> NcofOpen:
    if rng.random() < p_empty:
        return NcofOpen.empty()
    return NcofOpen.cofinite(i for i in range(K + 1) if rng.random() < 0.3)


# -- Sorgenfrey line ------------------------------------------------------

def random_rlopen(rng, max_intervals: int = 4, lo=-2, hi=3) -> RlOpen:
    pairs = []
    for _ in range(rng.randint(0, max_intervals)):
        a = frac(rng, lo, hi)
        pairs.append((a, a + positive(rng, 2)))
    return normalize(pairs)


def random_chain_inside(rng, a, b) -> ChainRl:
    """A descending chain with its limit and all its points inside ``[a, b[``."""
    a, b = Fraction(a), Fraction(b)
    width = b - a
    limit = a + width * Fraction(rng.randint(0, 3), 4)
    room = b - limit
    c = room * Fraction(rng.randint(1, 7), 8)
    return ChainRl(limit, c, rng.choice(RATIOS))


def random_smyth_inside(rng, U: RlOpen, max_blocks: int = 3) -> SmythElem:
    """A random compact subset of ``U`` mixing finite blocks and chains."""
    blocks = []
    for _ in range(rng.randint(1, max_blocks)):
        a, b = rng.choice(U.intervals)
        if rng.random() < 0.5:
            pts = [a + (b - a) * Fraction(rng.randint(0, 7), 8) for _ in range(rng.randint(1, 3))]
            blocks.append(FiniteBlock(tuple(pts)))
        else:
            blocks.append(random_chain_inside(rng, a, b))
    return SmythElem(CompactCandidate(tuple(blocks)))


def random_candidate(rng, max_blocks: int = 4) -> CompactCandidate:
    """Candidates of every kind: compact, with omitted limits, or with ascending chains."""
    blocks = []
    for _ in range(rng.randint(1, max_blocks)):
        kind = rng.random()
        if kind < 0.35:
            blocks.append(FiniteBlock(tuple(frac(rng, -2, 2) for _ in range(rng.randint(1, 3)))))
        else:
            direction = ASCENDING if rng.random() < 0.2 else "descending"
            blocks.append(ChainRl(frac(rng, -2, 2), positive(rng, 2), rng.choice(RATIOS),
                                  direction, rng.random() < 0.6))
    return CompactCandidate(tuple(blocks))
