from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from valsep.johnstone import OMEGA, JOpen, JPoint, NcofOpen
from valsep.poset import FinitePoset
from valsep.smyth import ChainRl, CompactCandidate, FiniteBlock, SmythElem
from valsep.sorgenfrey import normalize

DENOMS = (1, 2, 3, 4, 8)


@st.composite
def fractions(draw, lo=-2, hi=3, denominators=DENOMS):
    d = draw(st.sampled_from(denominators))
    n = draw(st.integers(lo * d, hi * d))
    return Fraction(n, d)


@st.composite
def positive_fractions(draw, hi=3):
    d = draw(st.sampled_from(DENOMS))
    return Fraction(draw(st.integers(1, hi * d)), d)


@st.composite
def raw_pairs(draw, max_size=4):
    out = []
    for _ in range(draw(st.integers(0, max_size))):
        a = draw(fractions())
        out.append((a, a + draw(positive_fractions(2))))
    return out


def rlopens(max_size=4):
    return raw_pairs(max_size).map(normalize)


@st.composite
def posets(draw, max_points=5):
    n = draw(st.integers(0, max_points))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return FinitePoset(range(n), chosen)


@st.composite
def simple_terms(draw, P, max_terms=4):
    if not P.elements:
        return []
    return draw(st.lists(st.tuples(positive_fractions(), st.sampled_from(P.elements)),
                         min_size=1, max_size=max_terms))


@st.composite
def jpoints(draw, K=6):
    c = draw(st.integers(0, K))
    if draw(st.booleans()) and draw(st.booleans()):
        return JPoint(c, OMEGA)
    return JPoint(c, draw(st.integers(0, K)))


@st.composite
def jopens(draw, K=6, allow_empty=True):
    if allow_empty and draw(st.integers(0, 9)) == 0:
        return JOpen.make((), None)
    m0 = draw(st.integers(0, K))
    ov = {}
    for col in range(draw(st.integers(0, K + 2))):
        if col < m0 and draw(st.booleans()):
            ov[col] = None
        else:
            ov[col] = draw(st.integers(m0, K + 3))
    return JOpen.make(ov, draw(st.integers(m0, K + 3)))


@st.composite
def ncof_opens(draw, K=10):
    if draw(st.integers(0, 9)) == 0:
        return NcofOpen.empty()
    return NcofOpen.cofinite(draw(st.sets(st.integers(0, K), max_size=5)))


RATIOS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4))


@st.composite
def chains_inside(draw, a=Fraction(0), b=Fraction(1)):
    limit = a + (b - a) * Fraction(draw(st.integers(0, 3)), 4)
    c = (b - limit) * Fraction(draw(st.integers(1, 7)), 8)
    return ChainRl(limit, c, draw(st.sampled_from(RATIOS)))


@st.composite
def smyth_inside(draw, a=Fraction(0), b=Fraction(1), max_blocks=3):
    blocks = []
    for _ in range(draw(st.integers(1, max_blocks))):
        if draw(st.booleans()):
            pts = draw(st.lists(st.integers(0, 7), min_size=1, max_size=3))
            blocks.append(FiniteBlock(tuple(a + (b - a) * Fraction(k, 8) for k in pts)))
        else:
            blocks.append(draw(chains_inside(a, b)))
    return SmythElem(CompactCandidate(tuple(blocks)))
