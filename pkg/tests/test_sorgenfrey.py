from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import grid_points, lebesgue, rl_member
from strategies import fractions, raw_pairs, rlopens
from valsep.errors import PreconditionError
from valsep.smyth import ChainRl
from valsep.sorgenfrey import (LAMBDA, CountableRlOpen, RlOpen, TailFamily, interval, lambda_eval,
                               measure_upper_bound, normalize, shrink_interval)
from valsep.valuation import ProbeSet, check_axioms

F = Fraction


def _pairs(U):
    return [tuple(iv) for iv in U.intervals]


def test_normalize_examples():
    assert _pairs(normalize([(0, 1), (1, 2)])) == [(0, 2)]
    assert _pairs(normalize([(0, 2), (1, 3)])) == [(0, 3)]
    assert _pairs(normalize([(3, 4), (0, 1)])) == [(0, 1), (3, 4)]


def test_normal_form_is_validated():
    with pytest.raises(PreconditionError):
        RlOpen(((F(0), F(1)), (F(1), F(2))))
    with pytest.raises(PreconditionError):
        RlOpen(((F(1), F(1)),))


def test_lambda_examples():
    assert lambda_eval(interval(0, 1)) == 1
    assert lambda_eval(normalize([(0, 1), (2, F(5, 2))])) == F(3, 2)
    assert lambda_eval(RlOpen()) == 0


def test_set_op_examples():
    assert _pairs(interval(0, 2) - interval(1, 3)) == [(0, 1)]
    assert (interval(0, 1) & interval(1, 2)).is_empty()
    assert interval(F(1, 2), 1).issubset(interval(0, 1))
    assert 0 in interval(0, 1) and 1 not in interval(0, 1)


def test_shrink_examples():
    assert shrink_interval(0, F(1, 4), interval(0, 1)) == F(1, 4)
    assert shrink_interval(F(1, 2), 2, interval(0, 1)) == F(1, 2)
    assert shrink_interval(3, F(1, 8), normalize([(0, 1), (3, F(7, 2))])) == F(1, 8)
    with pytest.raises(PreconditionError):
        shrink_interval(1, F(1, 8), interval(0, 1))


def test_measure_upper_bound_examples():
    U = normalize([(0, 1), (2, 3)])
    assert measure_upper_bound(CountableRlOpen(U)) == 2
    ch = ChainRl(F(0), F(1), F(1, 2))
    assert measure_upper_bound(CountableRlOpen(RlOpen(), (TailFamily.geometric(ch, F(1, 2)),))) == F(1, 2)
    two = (TailFamily.geometric(ch, F(1, 4)), TailFamily.geometric(ChainRl(F(5), F(1), F(1, 3)), F(1, 4)))
    assert measure_upper_bound(CountableRlOpen(RlOpen(), two)) == F(1, 2)


def test_tail_membership():
    ch = ChainRl(F(0), F(1), F(1, 2))  # points 1, 1/2, 1/4, ...
    tf = TailFamily.geometric(ch, F(1, 2))  # lengths 1/4, 1/8, ...
    V = CountableRlOpen(RlOpen(), (tf,))
    assert 1 in V and F(5, 4) - F(1, 1000) in V and F(5, 4) not in V
    assert F(1, 2) in V and F(3, 4) not in V and 0 not in V
    for j in range(1, 12):
        assert ch.point(j) in V


def test_tails_need_descending_chains():
    with pytest.raises(PreconditionError):
        TailFamily.geometric(ChainRl(F(1), F(1), F(1, 2), direction="ascending"), F(1))


@given(raw_pairs())
def test_normalize_preserves_membership_and_is_idempotent(pairs):
    U = normalize(pairs)
    assert normalize(U.intervals) == U
    for x in grid_points(pairs):
        assert (x in U) == rl_member(pairs, x)
    assert lambda_eval(U) == lebesgue(pairs)


@given(rlopens(), rlopens())
def test_set_ops_match_membership(U, V):
    pts = grid_points(list(U.intervals) + list(V.intervals), extra=[0])
    for x in pts:
        assert (x in U | V) == (x in U or x in V)
        assert (x in U & V) == (x in U and x in V)
        assert (x in U - V) == (x in U and x not in V)
    assert (U - V) | (U & V) == U
    assert ((U - V) & V).is_empty()
    assert lambda_eval(U) + lambda_eval(V) == lambda_eval(U | V) + lambda_eval(U & V)
    assert U.issubset(V) == (U | V == V)


@given(st.lists(rlopens(3), min_size=1, max_size=3))
def test_lambda_axioms(opens):
    assert check_axioms(LAMBDA, ProbeSet(opens).closed())


@given(rlopens(), fractions(), st.integers(1, 8))
def test_shrink_stays_inside(U, x, d):
    bound = F(1, d)
    if x not in U:
        with pytest.raises(PreconditionError):
            shrink_interval(x, bound, U)
        return
    eps = shrink_interval(x, bound, U)
    assert 0 < eps <= bound and interval(x, x + eps).issubset(U)


@given(rlopens(2), st.sampled_from([F(1, 2), F(1, 3), F(3, 4)]), st.integers(0, 3),
       st.integers(1, 3))
def test_upper_bound_dominates_finite_subunions(U, q, start, stride):
    ch = ChainRl(F(0), F(1), q)
    tf = TailFamily(ch, start, F(1, 4), stride)
    V = CountableRlOpen(U, (tf,))
    for n in (1, 4, 12):
        assert lambda_eval(normalize(V.pieces(n))) <= measure_upper_bound(V)
        for a, b in V.pieces(n):
            assert a in V
