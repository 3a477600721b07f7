from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from thetacert.series import poch_expand, series_div, series_mul
from thetacert.thetaprod import (EProduct, NotAnEProduct, ThetaError, ThetaMonomial, blowup,
                                 eprod_expand, format_eproduct, parse_eproduct, parse_pochhammer,
                                 prefactor, theta_expand, theta_normalize)

from oracles import naive_poch, poly_inv, poly_mul, raw_theta, square_generating


def test_prefactor_level3():
    assert prefactor(1, 3) == Fraction(-1, 12)


def test_eproduct_symmetric_key():
    a = EProduct(7, {2: 1})
    b = EProduct(7, {5: 1})
    assert a == b
    assert eprod_expand(a, 30).first_difference(eprod_expand(b, 30)) is None


def test_zero_index_rejected():
    with pytest.raises(ThetaError):
        EProduct(7, {0: 1})
    with pytest.raises(ThetaError):
        EProduct(7, {7: 1})


def test_half_exponent_only_at_midpoint():
    EProduct(20, {10: Fraction(1, 2)})
    with pytest.raises(ThetaError):
        EProduct(20, {3: Fraction(1, 2)})


def test_840m361_rhs_expansion():
    rhs = parse_pochhammer("(q,q^6,q^7;q^7) / (q,q^4;q^5)").to_eproduct()
    signs = dict(zip([19, 61, 79, 89, 121, 131, 149, 191], [1, 1, -1, 1, -1, 1, -1, -1]))

    def sign_of(S):
        k, r = divmod(S, 210)
        return signs[r] * (-1) ** k

    brute = square_generating(840, 361, sign_of, 21)
    assert eprod_expand(rhs, 21).to_dict() == brute
    assert brute == {0: 1, 4: 1, 7: -1, 9: 1, 17: -1, 20: 1}


def test_840m361_rhs_naive_products():
    num = [1] + [0] * 39
    for e in (1, 6, 7):
        num = poly_mul(num, naive_poch(e, 1, 7, 40), 40)
    den = poly_mul(naive_poch(1, 1, 5, 40), naive_poch(4, 1, 5, 40), 40)
    expected = poly_mul(num, poly_inv(den, 40), 40)
    rhs = parse_pochhammer("(q,q^6,q^7;q^7)/(q,q^4;q^5)").to_eproduct()
    assert eprod_expand(rhs, 40).integer_coeffs(40) == expected


# -- theta normalization -----------------------------------------------------


def test_theta_quasi_period():
    scalar, shift, canon = theta_normalize(ThetaMonomial(20, 24))
    assert (scalar, shift, canon) == (-1, -4, ThetaMonomial(20, 4))


def test_theta_reflection():
    assert theta_normalize(ThetaMonomial(20, 16)) == (1, 0, ThetaMonomial(20, 4))
    scalar, shift, canon = theta_normalize(ThetaMonomial(40, 25, -1))
    assert (scalar, shift, canon) == (1, 0, ThetaMonomial(40, 15, -1))
    lhs = theta_expand(ThetaMonomial(40, 25, -1), 60)
    assert lhs.first_difference(theta_expand(ThetaMonomial(40, 15, -1), 60)) is None


def test_theta_zero():
    with pytest.raises(ThetaError):
        theta_normalize(ThetaMonomial(20, 40))
    with pytest.raises(ThetaError):
        theta_normalize(ThetaMonomial(20, 0))
    # theta(-1) is fine
    theta_normalize(ThetaMonomial(20, 0, -1))


@given(st.integers(1, 8), st.integers(-24, 24), st.sampled_from([1, -1]))
@settings(max_examples=100, deadline=None)
def test_theta_normalization_sound(M, a, sign):
    assume(not (sign == 1 and a % M == 0))
    scalar, shift, canon = theta_normalize(ThetaMonomial(M, a, sign))
    assert 0 <= canon.exponent <= Fraction(M, 2)
    T = 4 * M
    got = theta_expand(ThetaMonomial(M, a, sign), T).to_dict()
    assert got == raw_theta(M, a, sign, T)


# -- products ----------------------------------------------------------------


def small_eproduct(N):
    keys = st.integers(1, N // 2 if N % 2 else N // 2 - 1)
    return st.builds(lambda fs, eta, c: EProduct(N, {g: e for g, e in fs.items() if e}, c, 0, eta),
                     st.dictionaries(keys, st.integers(-2, 2), max_size=3),
                     st.integers(-1, 1), st.integers(-3, 3).filter(bool))


@given(small_eproduct(12), small_eproduct(12))
@settings(max_examples=30, deadline=None)
def test_expansion_homomorphism(p, r):
    lhs = eprod_expand(p * r, 30)
    rhs = series_mul(eprod_expand(p, 30), eprod_expand(r, 30))
    assert lhs.first_difference(rhs) is None


@given(small_eproduct(6), st.sampled_from([2, 3, 5]))
@settings(max_examples=30, deadline=None)
def test_blowup_sound(p, k):
    target = p.level * k
    b = blowup(p, target)
    assert b.level == target
    T = 2 * target
    assert eprod_expand(b, T).first_difference(eprod_expand(p, T)) is None


def test_blowup_identity_and_domain():
    p = EProduct(5, {1: 1})
    assert blowup(p, 5) is p
    with pytest.raises(ThetaError):
        blowup(p, 12)


def test_blowup_mod5_to_105():
    p = parse_pochhammer("(q,q^4;q^5)").to_eproduct()
    b = blowup(p, 105)
    keys = {g for g, _ in b.factors}
    assert keys == {g for g in range(1, 53) if g % 5 in (1, 4)}
    assert eprod_expand(b, 40).first_difference(eprod_expand(p, 40)) is None
    direct = poly_mul(naive_poch(1, 1, 5, 40), naive_poch(4, 1, 5, 40), 40)
    assert eprod_expand(b, 40).integer_coeffs(40) == direct


def test_blowup_840m361_rhs_golden():
    rhs = parse_pochhammer("(q,q^6,q^7;q^7)/(q,q^4;q^5)").to_eproduct()
    b = blowup(rhs, 105)
    num = {g for g, e in b.factors if e > 0}
    den = {g for g, e in b.factors if e < 0}
    assert num == {7, 8, 13, 15, 20, 22, 27, 28, 35, 42, 43, 48, 50}
    assert den == {4, 9, 11, 16, 19, 24, 26, 31, 39, 44, 46, 51}


def test_pochhammer_negative_arguments():
    # (-q;q^2) (q^2;q^4) ... compare with direct products
    raw = parse_pochhammer("(-q;q^2)")
    p = raw.to_eproduct()
    assert eprod_expand(p, 30).integer_coeffs(30) == naive_poch(1, -1, 2, 30)
    p = parse_pochhammer("(-1;q^3)").to_eproduct()
    expected = [2 * c for c in naive_poch(3, -1, 3, 30)]
    assert eprod_expand(p, 30).integer_coeffs(30) == expected


def test_pochhammer_unpaired_is_rejected():
    with pytest.raises(NotAnEProduct):
        parse_pochhammer("(q^4,q^16,q^8,q^12;q^20)/(q^2,q^18,q^6,q^15;q^20)").to_eproduct()


def test_format_parse_roundtrip():
    texts = ["105: E22 / E43", "-1 * 20: E1 E6 E9 E10 / E3 E4 E7 E8",
             "105: E43 * q^1657/420 * eta^1", "3/2 * 20: E2^2 E10^1/2 / E4"]
    for t in texts:
        p = parse_eproduct(t)
        assert parse_eproduct(format_eproduct(p)) == p


def test_parse_eproduct_errors():
    for bad in ["E22 / E43", "105: F22", "105: E22 / / E4", "0: E1"]:
        with pytest.raises((ThetaError, ValueError)):
            parse_eproduct(bad)


def test_same_product_across_levels():
    p = parse_eproduct("21: E1 / E4")
    assert p.same_product(blowup(p, 105))
    assert not p.same_product(p.scale(-1))
    assert not p.same_product(parse_eproduct("105: E13 / E43"))


def test_division_of_expansions():
    p = parse_eproduct("20: E1 E3 / E2")
    r = parse_eproduct("20: E4 E5")
    lhs = eprod_expand(p / r, 40)
    rhs = series_div(eprod_expand(p, 40), eprod_expand(r, 40))
    assert lhs.first_difference(rhs) is None


def test_eta_factor_expansion():
    p = EProduct(7, {}, 1, 0, 1)
    assert eprod_expand(p, 30).first_difference(poch_expand(7, 1, 7, 30)) is None
