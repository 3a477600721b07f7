from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thetacert.thetaprod import (RawProduct, ThetaError, eprod_expand, parse_eproduct,
                                 parse_pochhammer)
from thetacert.weierstrass import (SignedMonomial, WeierstrassInstance, eproduct_value,
                                   instantiate_tadd, q_, reduce_threl, rewrite_euler,
                                   search_specialization, tadd_terms, threl_sides)

INSTANCES = """
35 q^10 q^3 q^14 q^6
35 q^15 q^3 q^17 q^14
35 q^14 q^9 q^15 q^13
35 q^7 q^15 q q^2
35 q^5 q^14 q^2 q^4
35 q^7 q^16 q^3 q^5
40 -q^9 q^16 -q -q^5
40 -q^8 q^5 q^17 q^7
40 -q^16 q^11 q^19 q^15
40 -q^13 -q^15 -q^3 q^8
20 q^5 q^2 q^12 q^4
20 q^5 q^2 q^6 q^4
10 -q^3 q q^4 q^3
""".strip().splitlines()


def inst_from_row(row):
    base, *vals = row.split()
    return WeierstrassInstance(int(base), *(SignedMonomial.parse(v) for v in vals))


def test_monomial_parse():
    assert SignedMonomial.parse("-q^3") == q_(3, -1)
    assert SignedMonomial.parse("q") == q_(1)
    assert SignedMonomial.parse("1") == q_(0)
    assert SignedMonomial.parse("q^(-5/2)") == q_(Fraction(-5, 2))
    with pytest.raises(ValueError):
        SignedMonomial.parse("x^2")


def test_instance_parse_roundtrip():
    inst = inst_from_row(INSTANCES[6])
    assert WeierstrassInstance.parse(str(inst)) == inst


@pytest.mark.parametrize("row", INSTANCES)
def test_known_instances_hold(row):
    inst = inst_from_row(row)
    report = instantiate_tadd(inst, 6 * inst.base)
    assert report["holds"], report
    assert report["zero_factors"] == []


small_instance = st.integers(2, 20).flatmap(lambda b: st.builds(
    WeierstrassInstance, st.just(b),
    *[st.builds(SignedMonomial, st.sampled_from([1, -1]), st.integers(0, 2 * b)) for _ in range(4)]))


@given(small_instance)
@settings(max_examples=200, deadline=None)
def test_relation_holds_for_random_instances(inst):
    # vanishing theta factors simply remove terms; the relation must still hold
    report = instantiate_tadd(inst, 3 * inst.base)
    assert report["holds"], report


def test_x_equals_y_kills_first_term():
    inst = WeierstrassInstance(12, q_(5), q_(2), q_(3), q_(3))
    terms = tadd_terms(inst)
    assert terms[0].is_zero()
    assert instantiate_tadd(inst, 60)["holds"]


def test_broken_relation_is_detected():
    # flipping the sign of the right-hand prefactor must break the relation
    inst = inst_from_row(INSTANCES[0])
    terms = tadd_terms(inst)
    total = None
    for k, t in enumerate(terms):
        s = eprod_expand(t.eproduct(inst.base), 100)
        if k == 2:
            s = s * -1
        total = s if total is None else total + s
    assert not total.is_zero()


THREL_CASES = ([(1, 35, q_(e)) for e in (26, 19, 33, 23, 31, 24, 32, 18, 29, 34, 27, 22)]
               + [(1, 40, q_(e, -1)) for e in (33, 23, 31, 39, 37, 27, 29)]
               + [(2, 40, q_(59, -1)), (1, 8, q_(7)), (2, 8, q_(11))])


@pytest.mark.parametrize("which, N, u", THREL_CASES)
def test_threl_known_cases(which, N, u):
    lhs, rhs, ok = reduce_threl(which, N, u, 6 * N)
    assert ok
    assert len(lhs) == 2


def specialization(which, N, u):
    M = 3 * N
    k = which * N
    return WeierstrassInstance(M, u, q_(k) / u, q_(k), (u ** 2) / q_(k))


threl_args = st.tuples(st.sampled_from([1, 2]), st.integers(2, 12), st.data())


@given(threl_args)
@settings(max_examples=50, deadline=None)
def test_threl_agrees_with_specialization(args):
    which, N, data = args
    u = SignedMonomial(data.draw(st.sampled_from([1, -1])), data.draw(st.integers(1, 4 * N)))
    try:
        lhs, rhs, ok = reduce_threl(which, N, u, 4 * N)
    except ThetaError:
        return
    # the reduction is a rewriting of the relation at this specialization
    assert ok
    assert instantiate_tadd(specialization(which, N, u), 4 * N)["holds"]


def test_threl_degenerate():
    with pytest.raises(ThetaError):
        threl_sides(1, 5, q_(5))
    with pytest.raises(ValueError):
        threl_sides(3, 5, q_(1))


def test_eproduct_value_matches_expansion():
    p = parse_eproduct("20: E1 E6 / E4")
    s = eprod_expand(p, 80)
    q = 0.3
    approx = sum(float(c) * q ** float(e) for e, c in s.to_dict().items())
    assert abs(eproduct_value(p, q) - approx) < 1e-9


# -- rediscovery by search ---------------------------------------------------


THETA_RATIO = "(q^4,q^16,q^8,q^12;q^20)/(q^2,q^18,q^6,q^14;q^20)"


def test_search_base20():
    target = [parse_pochhammer(THETA_RATIO).to_eproduct(), parse_pochhammer("-q").to_eproduct()]
    hits = search_specialization(target, 20, 12, 120)
    assert WeierstrassInstance(20, q_(5), q_(2), q_(12), q_(4)) in hits
    for h in hits[:25]:
        assert instantiate_tadd(h, 120)["holds"]


@pytest.mark.parametrize("other", ["-q^2", "-q^3"])
def test_search_rejects_perturbed_target(other):
    target = [parse_pochhammer(THETA_RATIO).to_eproduct(), parse_pochhammer(other).to_eproduct()]
    assert search_specialization(target, 20, 12, 120) == []


# -- Euler rewriting ---------------------------------------------------------


def test_rewrite_euler():
    raw = RawProduct(Fraction(1), Fraction(0), Counter({(1, Fraction(1), Fraction(2)): -1,
                                                        (-1, Fraction(3), Fraction(6)): -1,
                                                        (1, Fraction(2), Fraction(4)): 1}))
    out = rewrite_euler(raw)
    assert all(c > 0 for c in out.pochs.values())
    assert out.pochs[(-1, Fraction(1), Fraction(1))] == 1
    assert out.pochs[(1, Fraction(3), Fraction(6))] == 1
    assert out.pochs[(-1, Fraction(6), Fraction(6))] == 1
    assert eprod_expand(out.to_eproduct(), 60).first_difference(
        eprod_expand(raw.to_eproduct(), 60)) is None
