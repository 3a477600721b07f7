from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thetacert.series import (QSeries, SeriesError, jtp_bilateral, poch_expand, product_expand,
                              series_div, series_mul, square_sum_series)

from oracles import naive_poch, partition_count


def coeffs(s, n):
    return s.integer_coeffs(n)


# -- poch_expand -------------------------------------------------------------


def test_poch_zero_factor():
    assert poch_expand(0, 1, 1, 10).is_zero()


def test_poch_euler_product():
    assert coeffs(poch_expand(1, 1, 1, 13), 13) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]


def test_poch_negative_sign():
    assert coeffs(poch_expand(1, -1, 2, 6), 6) == naive_poch(1, -1, 2, 6)
    assert coeffs(poch_expand(1, -1, 2, 6), 6)[:6] == [1, 1, 0, 1, 1, 1]


def test_poch_bad_modulus():
    with pytest.raises(SeriesError):
        poch_expand(1, 1, 0, 10)
    with pytest.raises(SeriesError):
        poch_expand(1, 1, -2, 10)


def test_poch_rational_exponents():
    s = poch_expand(Fraction(1, 2), 1, Fraction(3, 2), 5)
    expected = {Fraction(0): 1, Fraction(1, 2): -1, Fraction(2): -1, Fraction(5, 2): 1,
                Fraction(7, 2): -1, Fraction(4): 1}
    # (1 - q^(1/2))(1 - q^2)(1 - q^(7/2)) below q^5
    assert s.to_dict() == expected


@given(st.integers(1, 6), st.integers(1, 5), st.sampled_from([1, -1]))
@settings(max_examples=40, deadline=None)
def test_poch_matches_naive(e, M, sign):
    assert coeffs(poch_expand(e, sign, M, 30), 30) == naive_poch(e, sign, M, 30)


# -- multiplication and division ---------------------------------------------


def test_mul_identity():
    s = poch_expand(2, -1, 3, 20)
    assert series_mul(QSeries.one(20), s).first_difference(s) is None


def test_geometric_telescoping():
    geo = QSeries.from_dict({k: 1 for k in range(20)}, 20)
    one_minus_q = QSeries.from_dict({0: 1, 1: -1}, 20)
    assert series_mul(one_minus_q, geo).to_dict() == {Fraction(0): 1}


def test_euler_odd_parts():
    lhs = series_mul(poch_expand(1, 1, 1, 20), poch_expand(1, -1, 1, 20))
    assert lhs.first_difference(poch_expand(2, 1, 2, 20)) is None


def test_partition_numbers():
    s = series_div(QSeries.one(11), poch_expand(1, 1, 1, 11))
    assert coeffs(s, 11) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert coeffs(s, 11) == [partition_count(n) for n in range(11)]


def test_division_gives_distinct_parts():
    s = series_div(poch_expand(2, 1, 2, 20), poch_expand(1, 1, 1, 20))
    assert s.first_difference(poch_expand(1, -1, 1, 20)) is None


def test_division_by_one():
    s = poch_expand(1, -1, 3, 15)
    assert series_div(s, QSeries.one(15)).first_difference(s) is None


def test_division_errors():
    with pytest.raises(SeriesError):
        series_div(QSeries.one(10), QSeries.zero(10))
    with pytest.raises(SeriesError):
        series_div(QSeries.one(10), QSeries.from_dict({0: 2}, 10))


def test_laurent_division_shifts_valuation():
    a = QSeries.from_dict({3: 1, 4: 1}, 10)
    b = QSeries.from_dict({1: 1}, 10)
    s = series_div(a, b)
    assert s.valuation() == 2
    # never claims more than a/q and 1/b support (q^9); the relative bound may be conservative
    assert 8 <= s.truncation <= 9
    assert s.to_dict() == {2: 1, 3: 1}


def test_truncation_is_enforced():
    s = poch_expand(1, 1, 1, 5)
    with pytest.raises(SeriesError):
        s.coeff(5)


def test_rescale_preserves_data():
    s = poch_expand(Fraction(1, 3), -1, 1, 4)
    r = s.rescale(s.denom * 4)
    assert r.to_dict() == s.to_dict()
    assert r.simplify_grid().to_dict() == s.to_dict()


# -- bilateral sums and square sums ------------------------------------------


def test_jtp_degenerate_is_zero():
    assert jtp_bilateral(Fraction(1, 2), Fraction(1, 2), True, 10).is_zero()


def test_jtp_pentagonal():
    assert jtp_bilateral(Fraction(3, 2), Fraction(1, 2), True, 15).first_difference(
        poch_expand(1, 1, 1, 15)) is None


def test_jtp_theta3():
    s = jtp_bilateral(1, 0, False, 17)
    assert s.to_dict() == {0: 1, 1: 2, 4: 2, 9: 2, 16: 2}


def test_jtp_bad_quadratic():
    with pytest.raises(SeriesError):
        jtp_bilateral(0, 1, True, 10)


def test_square_sums():
    assert square_sum_series("squares", 1, 10).to_dict() == {1: 1, 4: 1, 9: 1}
    assert square_sum_series("triangular", 5, 31).to_dict() == {0: 1, 10: 1, 30: 1}
    assert square_sum_series("squares", 5, 21).to_dict() == {5: 1, 20: 1}


def triple_product(A, B, alternating, T):
    s = 1 if alternating else -1
    return series_mul(poch_expand(2 * A, 1, 2 * A, T),
                      series_mul(poch_expand(A + B, s, 2 * A, T), poch_expand(A - B, s, 2 * A, T)))


jtp_params = st.tuples(
    st.integers(1, 12), st.sampled_from([1, 2]), st.integers(0, 12), st.booleans()
).filter(lambda t: t[2] <= t[0] and not (t[2] == t[0] and t[3]))


@given(jtp_params)
@settings(max_examples=50, deadline=None)
def test_jtp_matches_triple_product(params):
    a, d, b, alternating = params
    A, B = Fraction(a, d), Fraction(b, d)
    lhs = jtp_bilateral(A, B, alternating, 60)
    assert lhs.first_difference(triple_product(A, B, alternating, 60)) is None


# -- ring laws ---------------------------------------------------------------


poch_args = st.tuples(st.integers(0, 5), st.sampled_from([1, -1]), st.integers(1, 4)).filter(
    lambda t: not (t[0] == 0 and t[1] == 1))


def build(args, T=40):
    e, s, M = args
    return poch_expand(e, s, M, T)


@given(poch_args, poch_args, poch_args)
@settings(max_examples=30, deadline=None)
def test_ring_laws(x, y, z):
    a, b, c = build(x), build(y), build(z)
    assert series_mul(series_mul(a, b), c).first_difference(series_mul(a, series_mul(b, c))) is None
    assert series_mul(a, b + c).first_difference(series_mul(a, b) + series_mul(a, c)) is None
    assert series_mul(a, b).first_difference(series_mul(b, a)) is None
    assert (a + b - b).first_difference(a) is None


unit_poch_args = poch_args.filter(lambda t: t[0] > 0)


@given(poch_args, unit_poch_args)
@settings(max_examples=30, deadline=None)
def test_division_inverts_multiplication(x, y):
    a, b = build(x), build(y)
    assert series_div(series_mul(a, b), b).first_difference(a) is None


def test_product_expand_exponents():
    # (1 - q)^-1 (1 - q^2)^2
    s = product_expand({1: -1, 2: 2}, 8)
    assert coeffs(s, 8) == [1, 1, -1, -1, 0, 0, 0, 0]
