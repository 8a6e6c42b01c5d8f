"""Acceptance suite: one test per criterion, each timed against its budget.

Every test records a pass/fail line (see ``acceptance_log``) that the
terminal summary prints after the run.
"""

from __future__ import annotations

import time
from fractions import Fraction

from acceptance_log import Criterion
from oracles import chain_points_brute
from valsep.errors import SizeLimitExceeded
from valsep.integration import count_level_maps, fubini_check, monotone_level_maps
from valsep.johnstone import (BETA, MU, UkOpen, borel_mass, decompose_johnstone,
                              decompose_ncof, escape_falsifier, pc_witness_mu, up_point)
from valsep.poset import all_upsets, is_irreducible, posets_up_to_iso, product_poset, sober_check
from valsep.ring import Leaf, restrict, to_ring_element
from valsep.sampling import (dominated_family, frac, positive, random_alpha, random_candidate,
                             random_jopen, random_ncof_open, random_poset, random_rlopen,
                             random_simple, random_smyth_inside, random_theta, random_unit, rng_of)
from valsep.smyth import (ASCENDING, LAMBDA_BAR, AscendingChain, ChainRl, CompactCandidate,
                          FiniteBlock, MissingInfimum, SmythElem, SmythOpen, box, consonance_refuter,
                          in_box, is_compact, lambda_bar, refute_point_continuity,
                          verify_pc_certificate)
from valsep.sorgenfrey import LAMBDA, interval, lambda_eval, measure_upper_bound, normalize
from valsep.tix import ValuationTable, tix_decompose
from valsep.valuation import (SPACE_RL, SPACE_SMYTH, DiscreteDeclared, Dirac, ProbeSet,
                              black_box, check_axioms)

F = Fraction


# -- random valuations and opens per space variant ---------------------------

def _nonempty_rlopen(rng, k):
    while True:
        U = random_rlopen(rng, k)
        if not U.is_empty():
            return U


def _finite_variant(rng):
    P = random_poset(rng, rng.randint(1, 5))
    opens = all_upsets(P)
    nu = random_simple(rng, P)
    return nu, lambda: rng.choice(opens)


def _j_variant(rng):
    nu = random_theta(rng, K=5) + random_unit(rng) * MU
    return nu, lambda: random_jopen(rng, K=5, p_empty=0.1)


def _ncof_variant(rng):
    nu = random_alpha(rng, K=8) + random_unit(rng) * BETA
    return nu, lambda: random_ncof_open(rng, K=8)


def _rl_variant(rng):
    pts = [(positive(rng, 2), frac(rng, -2, 3)) for _ in range(rng.randint(0, 3))]
    nu = random_unit(rng) * LAMBDA
    if pts:
        nu = nu + DiscreteDeclared(pts, SPACE_RL)
    return nu, lambda: random_rlopen(rng, 3)


def _smyth_variant(rng):
    nu = random_unit(rng) * LAMBDA_BAR
    for _ in range(rng.randint(0, 2)):
        nu = nu + positive(rng, 2) * Dirac(random_smyth_inside(rng, _nonempty_rlopen(rng, 2)), SPACE_SMYTH)
    return nu, lambda: SmythOpen.of(random_rlopen(rng, 2) for _ in range(rng.randint(1, 2)))


VARIANTS = {"finite": _finite_variant, "J": _j_variant, "Ncof": _ncof_variant,
            "Rl": _rl_variant, "Smyth": _smyth_variant}


def _closed_probes(rng, draw, limit=12):
    while True:
        seeds = [draw() for _ in range(rng.randint(1, 3))]
        try:
            return ProbeSet(seeds).closed(limit=limit)
        except SizeLimitExceeded:
            continue


# -- criteria ------------------------------------------------------------------

def test_criterion_01_valuation_axioms():
    with Criterion(1, "valuation axioms on closed probe sets", 10) as c:
        rng = rng_of(101)
        count, largest = 0, 0
        for name, make in VARIANTS.items():
            for _ in range(40):
                nu, draw = make(rng)
                probes = _closed_probes(rng, draw)
                largest = max(largest, len(probes))
                assert probes.is_closed() and len(probes) <= 12
                verdict = check_axioms(nu, probes)
                assert verdict, f"{name}: {verdict}"
                count += 1
        assert count >= 200
        c.detail = f"{count} valuations over {len(VARIANTS)} variants, probe sets up to {largest}"


def test_criterion_02_tix_oracle():
    with Criterion(2, "tix decomposition on every poset with at most 5 points", 30) as c:
        rng = rng_of(202)
        posets = [P for n in range(6) for P in posets_up_to_iso(n)]
        tables = 0
        for P in posets:
            ups = all_upsets(P)
            sober = bool(sober_check(P))
            for _ in range(50):
                nu = ValuationTable.of(random_simple(rng, P), P) if len(P) else ValuationTable(P, {})
                dec = tix_decompose(nu, verify=False)
                for U in ups:
                    assert sum((a for a, C in dec.terms if U.mask & C.mask), F(0)) == nu(U)
                for a, C in dec.terms:
                    assert is_irreducible(P, C)
                    if sober:
                        assert C.is_principal()
                tables += 1
        c.detail = f"{len(posets)} posets up to isomorphism, {tables} tables"


def _theta_r_samples(n=120, seed=303):
    rng = rng_of(seed)
    return [(random_theta(rng, rng.randint(0, 10)), random_unit(rng)) for _ in range(n)]


def test_criterion_03_johnstone_round_trip():
    with Criterion(3, "decomposition round trips on J and the cofinite naturals", 10) as c:
        samples = _theta_r_samples()
        for theta, r in samples:
            got, got_r = decompose_johnstone(black_box(theta + r * MU), theta.support)
            assert got.as_dict() == theta.as_dict() and got_r == r
        rng = rng_of(304)
        for _ in range(120):
            alpha, r = random_alpha(rng, rng.randint(0, 10)), random_unit(rng)
            got, got_r = decompose_ncof(black_box(alpha + r * BETA), alpha.support)
            assert got.as_dict() == alpha.as_dict() and got_r == r
        c.detail = f"{len(samples)} J samples, 120 cofinite samples"


def test_criterion_04_escape():
    with Criterion(4, "escape falsifier gap at least r", 10) as c:
        rng = rng_of(404)
        samples = [(t, r) for t, r in _theta_r_samples(200) if r > 0]
        families = 0
        worst = None
        for theta, r in samples[:100]:
            fam = dominated_family(rng, theta, r, size=rng.randint(1, 8))
            res = escape_falsifier(theta, r, fam)
            assert res.gap >= r
            for v, tau in zip(res.family_values, fam):
                assert v == borel_mass(tau, UkOpen(res.k))
            families += 1
            slack = res.gap - r
            worst = slack if worst is None else min(worst, slack)
        assert families >= 100
        c.detail = f"{families} families, least gap - r = {worst}"


def test_criterion_05_mu_point_continuity():
    with Criterion(5, "point-continuity witnesses for mu", 5) as c:
        rng = rng_of(505)
        checked = 0
        for _ in range(100):
            U = random_jopen(rng, p_empty=0.0)
            r = F(rng.randint(0, 99), 100)
            A = pc_witness_mu(U, r)
            assert len(A) == 1 and all(a in U for a in A)
            (a,) = A
            supers = [up_point(a)] + [random_jopen(rng).union(up_point(a)) for _ in range(5)]
            for V in supers:
                assert a in V and MU(V) == 1 > r
                checked += 1
        c.detail = f"100 opens, {checked} superset opens"


def test_criterion_06_lebesgue():
    with Criterion(6, "Lebesgue exactness and monotone convergence", 5) as c:
        assert lambda_eval(interval(0, 1)) == 1
        rng = rng_of(606)
        for _ in range(500):
            U, V = random_rlopen(rng), random_rlopen(rng)
            assert lambda_eval(U) + lambda_eval(V) == lambda_eval(U | V) + lambda_eval(U & V)
        vals = [lambda_bar(box(interval(0, 1 - F(1, 2 ** n)))) for n in range(1, 21)]
        assert vals == [1 - F(1, 2 ** n) for n in range(1, 21)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert lambda_bar(box(interval(0, 1))) == 1 and all(v < 1 for v in vals)
        c.detail = "500 modular pairs, 20 box values below the supremum 1"


def _oracle_compact(cand: CompactCandidate) -> bool:
    """No ascending chain, and every chain limit is among the denoted points."""
    pts = set()
    for blk in cand.blocks:
        if isinstance(blk, FiniteBlock):
            pts.update(blk.points)
        else:
            pts.update(chain_points_brute(blk.limit, blk.c, blk.q, blk.sign, n=80))
            pts.update(blk.prefix)
            if blk.include_limit:
                pts.add(blk.limit)
    chains = [b for b in cand.blocks if isinstance(b, ChainRl)]
    return all(b.direction != ASCENDING for b in chains) and all(b.limit in pts for b in chains)


def test_criterion_07_compactness():
    with Criterion(7, "compactness decision", 5) as c:
        halves = ChainRl(F(0), F(1), F(1, 2))
        assert is_compact(CompactCandidate((halves,)))
        v = is_compact(CompactCandidate((ChainRl(F(0), F(1), F(1, 2), include_limit=False),)))
        assert isinstance(v.reason, MissingInfimum)
        asc = ChainRl(F(1), F(1), F(1, 2), direction=ASCENDING)
        v = is_compact(CompactCandidate((asc, FiniteBlock((F(1),)))))
        assert isinstance(v.reason, AscendingChain)
        cover = v.reason.cover
        assert [cover.piece_of(asc.point(j)) for j in range(20)] == list(range(20))
        rng = rng_of(707)
        agree, compact = 0, 0
        for _ in range(150):
            cand = random_candidate(rng)
            got = bool(is_compact(cand))
            assert got == _oracle_compact(cand), cand
            agree += 1
            compact += got
        c.detail = f"3 paradigms, {agree} random candidates ({compact} compact)"


def test_criterion_08_point_continuity_refutation():
    with Criterion(8, "lambda-bar is not point-continuous at Box [0,1[", 10) as c:
        U, r = interval(0, 1), F(1, 2)
        cert = refute_point_continuity(U, r, [SmythElem.finite([0, F(1, 2)])])
        assert cert.V.finite_part == normalize([(0, F(1, 4)), (F(1, 2), F(5, 8))])
        assert not cert.V.tails and cert.bound == F(3, 8)
        rng = rng_of(808)
        worst = F(0)
        for _ in range(200):
            A = [random_smyth_inside(rng, U) for _ in range(rng.randint(1, 5))]
            cert = refute_point_continuity(U, r, A)
            assert all(ok for _, ok in verify_pc_certificate(cert))
            assert cert.bound <= r
            assert all(in_box(Q, U) for Q in A)
            for Q in A:
                assert all(x in cert.V for x in Q.rep.points(30))
            worst = max(worst, cert.bound)
        c.detail = f"worked example exact, 200 random families, largest bound {worst}"


def test_criterion_09_consonance():
    with Criterion(9, "consonance refuter", 5) as c:
        rng = rng_of(909)
        for _ in range(60):
            Q = random_smyth_inside(rng, _nonempty_rlopen(rng, 3))
            r = positive(rng, 2)
            cert = consonance_refuter(Q, r)
            assert cert.bound <= r and cert.bound == measure_upper_bound(cert.V)
            assert all(ok for _, ok in cert.checks)
            assert all(x in cert.V for x in Q.rep.points(30))
        c.detail = "60 random (Q, r)"


def test_criterion_10_fubini():
    """Every monotone map with at most three levels, on every product of two posets with at
    most four points each, against 100 random pairs of simple valuations per product.
    """
    budget = 30.0
    with Criterion(10, "Fubini on all products of posets with at most 4 points", budget) as c:
        catalog = [P for n in range(1, 5) for P in posets_up_to_iso(n)]
        pairs = [(P, Q) for i, P in enumerate(catalog) for Q in catalog[i:]]
        total_maps = sum(count_level_maps(product_poset(P, Q)) for P, Q in pairs)
        required = total_maps * 100
        rng = rng_of(1010)
        done, products_done, unequal = 0, 0, []
        start = time.perf_counter()
        out_of_time = False
        for P, Q in pairs:
            R = product_poset(P, Q)
            vals = [(random_simple(rng, P), random_simple(rng, Q)) for _ in range(100)]
            a = positive(rng, 2)
            levels = [F(0), a, a + positive(rng, 2)]
            for h in monotone_level_maps(R, levels):
                for nu, xi in vals:
                    v = fubini_check(h, nu, xi, P, Q)
                    if not v.equal:
                        unequal.append((P, Q, h, nu, xi))
                    done += 1
                if time.perf_counter() - start > budget:
                    out_of_time = True
                    break
            if out_of_time:
                break
            products_done += 1
        c.ok = not unequal and done == required
        c.detail = (f"{done} of {required} checks ({products_done} of {len(pairs)} products "
                    f"complete, {total_maps} maps in all), {len(unequal)} unequal")
        assert not unequal, unequal[0]
        assert done == required, "enumeration did not finish inside the time budget"


def _ring_samples(name, make, rng, n):
    for _ in range(n):
        nu, draw = make(rng)
        U1, U2, U3, W = draw(), draw(), draw(), draw()
        yield nu, U1, U2, U3, W


def test_criterion_11_restriction_calculus():
    with Criterion(11, "restriction calculus per space variant", 10) as c:
        rng = rng_of(1111)
        counts = {}
        for name, make in VARIANTS.items():
            k = 0
            for nu, U1, U2, U3, W in _ring_samples(name, make, rng, 200):
                A_expr = Leaf(U1) - Leaf(U2)
                A = to_ring_element(A_expr)
                B = to_ring_element(Leaf(U3) & Leaf(U2))
                AB = A.disjoint_union(B)
                assert restrict(nu, AB)(W) == restrict(nu, A)(W) + restrict(nu, B)(W)
                value = restrict(nu, A)(W)
                for alt in (A_expr.by_ring_ops(),
                            to_ring_element((Leaf(U1) | Leaf(U2)) - Leaf(U2)),
                            to_ring_element(Leaf(U1) - (Leaf(U1) & Leaf(U2)))):
                    assert restrict(nu, alt)(W) == value
                k += 1
            counts[name] = k
        assert all(v >= 200 for v in counts.values())
        c.detail = ", ".join(f"{k}: {v}" for k, v in counts.items())
