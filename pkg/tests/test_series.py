"""Series oracle: Pochhammer expansion, hypergeometric series, truncation."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from hyperred.errors import PoleAtEpsZero, UncancelledPole
from hyperred.hyper import HyperFn
from hyperred.scalars import EpsLin
from hyperred.series import (BiSeries, EpsPoly, compose_z_series, inv_pochhammer_eps,
                             pochhammer_eps, series_of_hyper)


def test_pochhammer_half_plus_eps():
    # (1/2 + eps)(3/2 + eps) = 3/4 + 2 eps + eps^2
    p = pochhammer_eps(EpsLin(F(1, 2), 1), 2, 2)
    assert p.coeffs == (F(3, 4), F(2), F(1))


def test_pochhammer_empty_product():
    assert pochhammer_eps(EpsLin(F(7, 3), 5), 0, 3).coeffs == (1, 0, 0, 0)


def test_pochhammer_pure_eps():
    # (a e)(1 + a e)(2 + a e): eps^1 coefficient is 2! a
    for a in (F(1), F(3, 2), F(-2)):
        p = pochhammer_eps(EpsLin(0, a), 3, 1)
        assert p.coeffs == (0, 2 * a)


def test_inv_pochhammer_geometric():
    p = inv_pochhammer_eps(EpsLin(1, 1), 1, 2)
    assert p.coeffs == (F(1), F(-1), F(1))
    assert inv_pochhammer_eps(EpsLin(1, 7), 0, 2).coeffs == (1, 0, 0)


def test_inv_pochhammer_pole():
    # (-1 + c e)(c e) vanishes at eps = 0
    with pytest.raises(PoleAtEpsZero):
        inv_pochhammer_eps(EpsLin(-1, 1), 2, 1)


@settings(max_examples=30, deadline=None)
@given(st.builds(F, st.integers(-5, 5), st.integers(1, 3)),
       st.builds(F, st.integers(-3, 3), st.integers(1, 2)),
       st.integers(0, 6))
def test_pochhammer_recurrence(c, e, j):
    x = EpsLin(c, e)
    lhs = pochhammer_eps(x, j + 1, 3)
    rhs = pochhammer_eps(x, j, 3) * EpsPoly.from_epslin(x + j, 3)
    assert lhs == rhs


def test_series_2f1_112():
    s = series_of_hyper(HyperFn([1, 1], [2]), 8, 0)
    assert [s.get(j, 0) for j in range(9)] == [F(1, j + 1) for j in range(9)]


def test_series_constant_term_is_one():
    f = HyperFn([EpsLin(F(1, 2), 3), EpsLin(0, -2)], [EpsLin(F(4, 3), 1)])
    s = series_of_hyper(f, 5, 3)
    assert s.get(0, 0) == 1 and all(s.get(0, k) == 0 for k in (1, 2, 3))


def test_series_eps2_z2_coefficient():
    # 2F1(a e, b e; 1 + c e; z): coefficient of eps^2 z^2 is a b / 4
    for a, b, c in ((F(1), F(1), F(0)), (F(2), F(3), F(5)), (F(-1, 2), F(1, 3), F(1))):
        f = HyperFn([EpsLin(0, a), EpsLin(0, b)], [EpsLin(1, c)])
        s = series_of_hyper(f, 3, 2)
        # oracle by hand: (a e)_2 (b e)_2 / ((1 + c e)_2 2!) -> eps^2: a b (1)(1) / 2 / 2
        assert s.get(2, 2) == a * b / 4
        assert s.get(2, 1) == 0


def test_series_lower_pole_raises():
    with pytest.raises(PoleAtEpsZero):
        series_of_hyper(HyperFn([1, 1], [EpsLin(0, 1)]), 5, 2)
    with pytest.raises(PoleAtEpsZero):
        series_of_hyper(HyperFn([1, 1], [EpsLin(-2, 1)]), 5, 2)


def test_series_kappa_absorbed():
    f = HyperFn([1, 1], [2], kappa=F(-1, 4))
    s = series_of_hyper(f, 4, 0)
    assert [s.get(j, 0) for j in range(5)] == [
        F(1, j + 1) * F(-1, 4) ** j for j in range(5)]


def test_biseries_truncation_minimum():
    a = BiSeries.zeros(10, 3)
    b = BiSeries.zeros(5, 2)
    c = a + b
    assert c.z_order == 5 and c.eps_order == 2
    d = a * b
    assert d.z_order == 5 and d.eps_order == 2


def test_biseries_mul_exact():
    # (1 + z)^2 = 1 + 2z + z^2 with eps payloads
    rows = ((F(1), F(2)), (F(1), F(0)), (F(0), F(0)))
    s = BiSeries(rows)
    sq = s * s
    assert sq.get(0, 0) == 1 and sq.get(1, 0) == 2 and sq.get(2, 0) == 1
    # z^0: (1+2e)^2 -> eps coeff 4; z^1: 2(1+2e)(1) -> eps coeff 4
    assert sq.get(0, 1) == 4 and sq.get(1, 1) == 4


def test_biseries_div_z_pole():
    s = BiSeries(((F(1), F(0)), (F(0), F(0))))
    with pytest.raises(UncancelledPole):
        s.div_z(1)
    t = BiSeries(((F(0), F(0)), (F(3), F(1))))
    assert t.div_z(1).get(0, 0) == 3


def test_biseries_invert():
    # 1/(1 - z) = sum z^j
    N = 6
    rows = [[F(1)]] + [[F(-1)]] + [[F(0)] for _ in range(N - 1)]
    s = BiSeries(tuple(tuple(r) for r in rows))
    inv = s.invert()
    assert all(inv.get(j, 0) == 1 for j in range(N + 1))


def test_compose_z_series():
    # F(z) = 1/(1-z); z = w^2: composed = sum w^(2m)
    N = 6
    s = BiSeries(tuple((F(1),) for _ in range(N + 1)))
    # s = sum z^j: composition with z(w) = w^2 to order 8
    zser = [F(0), F(0), F(1)]
    out = compose_z_series(s, zser, 8)
    assert [out.get(j, 0) for j in range(9)] == [1, 0, 1, 0, 1, 0, 1, 0, 1]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 4), st.integers(0, 2))
def test_ring_axioms_biseries(n, k):
    import random
    rng = random.Random(n * 7 + k)
    def rand(N, K):
        return BiSeries(tuple(tuple(F(rng.randint(-4, 4), rng.randint(1, 3))
                                    for _ in range(K + 1)) for _ in range(N + 1)))
    a, b, c = rand(4, 2), rand(4, 2), rand(4, 2)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
