"""Goncharov polylogarithm words, series, shuffles, and integration."""

import random
from fractions import Fraction as F

import pytest

from hyperred.errors import UncancelledPole, UnsupportedClass
from hyperred.gpl import (GplCombo, GplWord, PolyLogExpr, gpl_series, gpl_word_series,
                          partial_fractions, rf_from_coeffs, rf_monomial,
                          shuffle_words)


def test_g1_is_log():
    # G(1; z) = ln(1-z) = -sum z^j / j
    assert gpl_word_series((1,), 6) == [0] + [F(-1, j) for j in range(1, 7)]


def test_g01_is_minus_li2():
    assert gpl_word_series((0, 1), 5) == [0] + [F(-1, j * j) for j in range(1, 6)]


def test_empty_expression_is_zero_series():
    e = PolyLogExpr({}, 0)
    assert gpl_series(e, 5) == [0] * 6


def test_trailing_zero_rejected():
    with pytest.raises(ValueError):
        GplWord((1, 0))
    with pytest.raises(ValueError):
        GplWord((0,))


def test_weight():
    e = PolyLogExpr({GplWord((0, 1)): F(2), GplWord((1,)): F(1)}, 5)
    assert e.weight == 2


def test_shuffle_count():
    assert len(shuffle_words((1,), (0, 1))) == 3
    assert sorted(shuffle_words((1,), (1,))) == [(1, 1), (1, 1)]


def test_shuffle_product_matches_series():
    rng = random.Random(5)
    words = [(1,), (-1,), (0, 1), (0, -1), (1, 1), (0, 0, 1)]
    for _ in range(12):
        w1, w2 = rng.choice(words), rng.choice(words)
        e1 = PolyLogExpr({GplWord(w1): F(rng.randint(1, 3))}, rng.randint(0, 2))
        e2 = PolyLogExpr({GplWord(w2): F(rng.randint(-3, -1))}, rng.randint(0, 1))
        prod = e1 * e2
        N = 14
        s1, s2 = e1.series(N), e2.series(N)
        direct = [sum(s1[i] * s2[j - i] for i in range(j + 1)) for j in range(N + 1)]
        assert prod.series(N) == direct, (w1, w2)


def test_partial_fractions_round_trip():
    r = rf_from_coeffs([F(1), F(0), F(3)]) / (rf_monomial(F(0), 1) * rf_monomial(F(1), 2))
    poly, poles = partial_fractions(r, [F(1)])
    acc = rf_from_coeffs(poly or [F(0)])
    for (a, m), c in poles.items():
        acc = acc + rf_monomial(a, -m) * c
    assert acc == r


def test_partial_fractions_rejects_foreign_pole():
    r = rf_from_coeffs([F(1)]) / rf_monomial(F(2), 1)
    with pytest.raises(UnsupportedClass):
        partial_fractions(r, [F(1)])


def test_integrate_prepends_letters():
    letters = (F(1),)
    c = GplCombo.rational(rf_monomial(F(1), -1), letters)
    assert c.integrate().series(8) == gpl_word_series((1,), 8)
    c2 = GplCombo({(F(1),): rf_monomial(F(0), -1)}, letters)
    assert c2.integrate().series(8) == gpl_word_series((0, 1), 8)


def test_integrate_polynomial_ibp():
    letters = (F(1),)
    c = GplCombo({(F(1),): rf_from_coeffs([F(0), F(1)])}, letters)
    got = c.integrate().series(10)
    g1 = gpl_word_series((1,), 10)
    expect = [F(0)] * 11
    for j in range(1, 9):
        expect[j + 2] = g1[j] / (j + 2)
    expect[2] = g1[0] / 2
    assert got == expect


def test_integrate_divergent_raises():
    letters = (F(1),)
    c = GplCombo.rational(rf_monomial(F(0), -1), letters)   # int dt/t
    with pytest.raises(UncancelledPole):
        c.integrate()
    c2 = GplCombo({(F(1),): rf_monomial(F(0), -2)}, letters)  # int G(1;t)/t^2
    with pytest.raises(UncancelledPole):
        c2.integrate()


def test_theta_of_combo():
    letters = (F(1),)
    c = GplCombo.word((1,), letters)
    t = c.theta()
    # theta G(1; z) = z/(z-1)
    s = t.series(8)
    # z/(z-1) = -z (1 + z + z^2 + ...)
    assert s == [F(0)] + [F(-1)] * 8


def test_value_at_zero_with_pole_prefactor():
    letters = (F(1),)
    c = GplCombo({(F(1),): rf_monomial(F(0), -1)}, letters)  # G(1;z)/z
    assert c.value_at_zero() == -1


def test_to_polylog_requires_constant_coefficients():
    letters = (F(1),)
    good = GplCombo.word((1,), letters).scale_q(F(3, 2))
    e = good.to_polylog()
    assert e == PolyLogExpr({GplWord((1,)): F(3, 2)})
    bad = GplCombo({(F(1),): rf_from_coeffs([F(0), F(1)])}, letters)
    with pytest.raises(UnsupportedClass):
        bad.to_polylog()
