from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import grid_points, rl_member
from strategies import jopens, posets, rlopens
from valsep.errors import PreconditionError, UnboundedRestriction
from valsep.johnstone import MU, JPoint, singleton_crescent_j
from valsep.poset import all_upsets
from valsep.ring import Crescent, Leaf, RingElement, atom_at, restrict, to_ring_element
from valsep.scalar import INF
from valsep.sorgenfrey import LAMBDA, RlOpen, interval
from valsep.valuation import SPACE_J, Dirac, FunctionValuation


def test_restrict_lebesgue_to_crescent():
    A = Crescent(interval(0, 1), interval(0, Fraction(1, 2)))
    assert restrict(LAMBDA, A)(interval(0, Fraction(3, 4))) == Fraction(1, 4)


def test_noncontained_difference_normalizes():
    U, V = interval(0, 2), interval(1, 3)
    R = to_ring_element(Leaf(U) - Leaf(V))
    assert len(R) == 1
    (c,) = R
    assert (c.outer, c.inner) == (U, U & V)


def test_self_difference_is_empty():
    U = interval(0, 2)
    assert to_ring_element(Leaf(U) - Leaf(U)).is_empty()


def test_two_disjoint_crescents():
    expr = (Leaf(interval(0, 2)) - Leaf(interval(1, 2))) | Leaf(interval(3, 4))
    R = to_ring_element(expr)
    assert len(R) == 2
    a, b = R
    assert a.disjoint(b)
    expected = [(0, 1), (3, 4)]
    for x in grid_points(expected):
        assert (x in R) == rl_member(expected, x)


def test_crescent_requires_inner_inside_outer():
    with pytest.raises(PreconditionError):
        Crescent(interval(0, 1), interval(0, 2))


def test_point_crescent_atoms_on_j():
    a = JPoint(0, 0)
    cr = singleton_crescent_j(a)
    nu = Dirac(a, SPACE_J) + Fraction(1, 2) * MU
    assert atom_at(Dirac(a, SPACE_J), cr) == 1
    assert atom_at(Dirac(JPoint(1, 0), SPACE_J), cr) == 0
    assert atom_at(nu, cr) == 1
    assert atom_at(MU, cr) == 0


def test_unbounded_restriction():
    inf_nu = FunctionValuation(lambda U: Fraction(0) if U.is_empty() else INF, LAMBDA.space, "inf")
    with pytest.raises(UnboundedRestriction):
        restrict(inf_nu, Crescent(interval(0, 1), RlOpen()))(interval(0, 1))


def test_full_space_restriction_is_identity():
    R = RingElement([Crescent(interval(-10, 10), RlOpen())])
    for W in (interval(0, 1), interval(-20, 0), interval(9, 11)):
        assert restrict(LAMBDA, R)(W) == LAMBDA(W & interval(-10, 10))


def _expressions(leaves):
    ops = st.sampled_from(["union", "inter", "diff"])
    base = st.sampled_from(leaves).map(Leaf)
    return st.recursive(base, lambda sub: st.builds(lambda o, a, b: {"union": a | b, "inter": a & b,
                                                                         "diff": a - b}[o],
                                                       ops, sub, sub), max_leaves=5)


@given(st.lists(rlopens(3), min_size=1, max_size=4), st.data())
def test_normal_form_preserves_denotation_rl(opens, data):
    expr = data.draw(_expressions(opens))
    R = to_ring_element(expr)
    cs = list(R)
    assert all(a.disjoint(b) for i, a in enumerate(cs) for b in cs[i + 1:])
    assert R.same_set(expr.by_ring_ops())
    pairs = [iv for U in opens for iv in U.intervals]
    for x in grid_points(pairs, extra=[0]):
        assert (x in R) == expr.truth({U: x in U for U in opens})


@given(posets(4), st.data())
def test_normal_form_preserves_denotation_finite(P, data):
    ups = all_upsets(P)
    leaves = data.draw(st.lists(st.sampled_from(ups), min_size=1, max_size=4))
    expr = data.draw(_expressions(leaves))
    R = to_ring_element(expr)
    for x in P.elements:
        assert (x in R) == expr.truth({U: x in U for U in leaves})


@given(st.lists(jopens(K=4), min_size=1, max_size=3), st.data())
def test_normal_form_preserves_denotation_j(opens, data):
    expr = data.draw(_expressions(opens))
    R = to_ring_element(expr)
    grid = [JPoint(c, h) for c in range(9) for h in range(9)]
    for p in grid:
        assert (p in R) == expr.truth({U: p in U for U in opens})


@given(st.lists(rlopens(3), min_size=2, max_size=4), rlopens(3))
def test_restriction_additivity_and_monotonicity(opens, W):
    A = to_ring_element(Leaf(opens[0]) - Leaf(opens[1]))
    B = to_ring_element(Leaf(opens[1]))
    nu = LAMBDA + 2 * Dirac(opens[0].intervals[0][0] if opens[0].intervals else 0, LAMBDA.space)
    AuB = A.disjoint_union(B)
    assert restrict(nu, AuB)(W) == restrict(nu, A)(W) + restrict(nu, B)(W)
    assert restrict(nu, A)(W) <= restrict(nu, AuB)(W)
