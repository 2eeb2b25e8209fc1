import random
from decimal import Decimal
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermat_catalan import diophantine as dio
from fermat_catalan.ntcore import PrimePair


def test_solution_triple_invariant():
    pair = PrimePair(3, 5)
    with pytest.raises(ValueError, match="does not satisfy"):
        dio.SolutionTriple(1, 2, 3, pair)
    s = dio.SolutionTriple(8, 8, 4, pair)
    assert not s.is_primitive
    s = dio.SolutionTriple(1, -1, 0, pair)
    assert s.is_trivial and not s.is_primitive


def test_iroot():
    assert dio.iroot(3**41, 41) == (3, True)
    assert dio.iroot(-(7**5), 5) == (-7, True)
    assert dio.iroot(1000001, 3) == (100, False)
    with pytest.raises(ValueError):
        dio.iroot(-4, 2)


@pytest.mark.parametrize("x,y,n,g", [(2, 1, 3, 3), (3, 2, 5, 5), (4, 1, 3, 1)])
def test_euler_gcd_examples(x, y, n, g):
    assert dio.euler_gcd(x, y, n) == g


@settings(max_examples=500)
@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(1, 49).map(lambda k: 2 * k + 1))
def test_euler_gcd_divides_n(x, y, n):
    if gcd(x, y) != 1 or x + y == 0:
        return
    assert n % dio.euler_gcd(x, y, n) == 0


def test_euler_gcd_rejects():
    with pytest.raises(ValueError):
        dio.euler_gcd(2, 4, 3)
    with pytest.raises(ValueError):
        dio.euler_gcd(2, 1, 4)


def test_barlow_abel_case_two_engineered():
    # x + y = 3^4 = p^(q-1) A^q with A = 1, p = 3, q = 5
    shape = dio.barlow_abel_shape(1, 80, 3, 5)
    assert shape.e == 1 and shape.vp_sum == 4 and shape.vp_quotient == 1
    assert dio.case_two_consistent(shape, 5)
    shape = dio.barlow_abel_shape(1, 8, 3, 5)
    assert shape.vp_sum == 2 and not dio.case_two_consistent(shape, 5)


def test_barlow_abel_case_one_engineered():
    # x + y = 2^5 but the quotient is not a fifth power
    shape = dio.barlow_abel_shape(1, 31, 3, 5)
    assert shape.e == 0 and shape.first_factor_power and not shape.second_factor_power
    assert not shape.consistent


def test_classify_rejects():
    with pytest.raises(ValueError):
        dio.classify_case(dio.SolutionTriple(8, 8, 4, PrimePair(3, 5)))
    sol = dio.SolutionTriple(1, 0, 1, PrimePair(3, 5), dio.EquationKind.HOMFC)
    with pytest.raises(ValueError):
        dio.classify_case(sol)


def test_f_tag():
    assert dio._f_tag(25, 7, 5) == (0, False)
    assert dio._f_tag(3, 22, 5) == (1, False)
    assert dio._f_tag(3, 28, 5) == (-1, False)
    assert dio._f_tag(3, 50, 5) == (0, True)
    assert dio._f_tag(2, 3, 5) == (None, False)


def test_lift_worked_instance():
    lift = dio.lift_noncoprime(1, 1, PrimePair(3, 5))
    assert (lift.D, lift.z, lift.exponents) == (8, 4, {2: 3})
    assert 8**3 + 8**3 == 4**5


def test_lift_prime_sum():
    # -1 + 8 = 7: the exponent 1 of 7 needs a = 2 since 1 + 2 * 3 = 7
    lift = dio.lift_noncoprime(-1, 2, PrimePair(3, 7))
    assert lift.exponents == {7: 2} and lift.D == 49 and lift.z == 7


def test_lift_perfect_power_gives_d_one():
    lift = dio.lift_noncoprime(1, 0, PrimePair(3, 5))
    assert (lift.D, lift.z, lift.exponents) == (1, 1, {})
    lift = dio.lift_noncoprime(-1, 0, PrimePair(3, 5))
    assert (lift.D, lift.z) == (1, -1)


@pytest.mark.parametrize("p,q", [(3, 5), (5, 3), (3, 7)])
def test_lift_minimality(p, q):
    rng = random.Random(p * 100 + q)
    pair = PrimePair(p, q)
    for _ in range(100):
        x, y = rng.randint(-50, 50), rng.randint(1, 50)
        if gcd(x, y) != 1 or x**p + y**p == 0:
            continue
        lift = dio.lift_noncoprime(x, y, pair)
        assert (lift.D * x) ** p + (lift.D * y) ** p == lift.z**q
        v = x**p + y**p
        for ell, a in lift.exponents.items():
            m = 0
            while v % ell ** (m + 1) == 0:
                m += 1
            assert (m + a * p) % q == 0
            assert all((m + b * p) % q for b in range(1, a))


def test_rational_catalan_trivial():
    pair = PrimePair(3, 5)
    sol = dio.rational_to_integer_catalan(1, 0, 1, 1, pair)
    assert (sol.x, sol.y, sol.z) == (1, 0, 1)
    assert dio.integer_to_rational_catalan(sol) == (Fraction(1), Fraction(0))


def test_rational_catalan_errors():
    pair = PrimePair(3, 5)
    with pytest.raises(ValueError, match=r"c\^p != d\^q"):
        dio.rational_to_integer_catalan(1, 1, 2, 3, pair)
    with pytest.raises(ValueError):
        dio.rational_to_integer_catalan(2, 1, 4, 1, pair)


@pytest.mark.parametrize("X,Y", [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(0), Fraction(-1))])
def test_rational_round_trip(X, Y):
    for pair in (PrimePair(3, 5), PrimePair(5, 3)):
        if X**pair.p + Y**pair.q != 1:
            continue
        sol = dio.rational_to_integer_catalan(X.numerator, Y.numerator, X.denominator, Y.denominator, pair)
        assert dio.integer_to_rational_catalan(sol) == (X, Y)


@pytest.mark.parametrize("p,q", [(3, 5), (5, 3)])
def test_search_empty(p, q):
    r = dio.search_fc(PrimePair(p, q), 200)
    assert r.solutions == ()
    assert r.trivial_count >= 1


def test_search_matches_brute_force():
    pair = PrimePair(3, 7)
    got = dio.search_fc(pair, 60, strips=3)
    brute = []
    for y in range(1, 61):
        for x in range(-y, y + 1):
            if x == 0 or x == -y or gcd(x, y) != 1:
                continue
            z, exact = dio.iroot(x**3 + y**3, 7)
            if exact:
                brute.append((x, y, z))
    assert [(s.x, s.y, s.z) for s in got.solutions] == sorted(brute)


def test_search_workers_agree():
    pair = PrimePair(5, 3)
    assert dio.search_fc(pair, 120, workers=1) == dio.search_fc(pair, 120, workers=2)


def test_c1():
    assert dio.c1(5) > Decimal("0.5")
    assert str(dio.c1(5))[:7] == "0.62474"
    assert dio.c1(7) > dio.c1(5)


@pytest.mark.parametrize(
    "p,q,lowb",
    [(5, 3, "-4.766"), (7, 5, "-2.837"), (13, 3, "-8.94"), (11, 13, "57.41"), (37, 23, "731.8")],
)
def test_lowb_values(p, q, lowb):
    assert str(dio.bound_lowb(PrimePair(p, q))).startswith(lowb)


def test_bound_main2_values():
    r = dio.bound_report(PrimePair(7, 5))
    assert str(r.bound).startswith("9.84") and str(r.bound1).startswith("22.42")
    assert str(dio.bound_main2(PrimePair(13, 5))).startswith("21.61")
    with pytest.raises(ValueError):
        dio.bound_main2(PrimePair(13, 5), 4)


def test_lowb_direct_small_case():
    # (5, 3): (1/2) ((1/20) (3^(1/2)/2)^3)^3, computed in floats
    import math

    v = 0.5 * ((1 / 20) * (math.sqrt(3) / 2) ** 3) ** 3
    assert abs(float(dio.bound_lowb(PrimePair(5, 3))) - math.log10(v)) < 1e-12


def test_bounds_reproducible():
    a = dio.bound_report(PrimePair(41, 29))
    b = dio.bound_report(PrimePair(41, 29))
    assert a == b


def test_vq_binom_examples():
    for q in (3, 5, 7, 11):
        assert dio.vq_binom(q, q) == -q - 1
        assert dio.vq_binom(1, q) == -1
    assert dio.vq_binom(5, 5) == -6


@pytest.mark.parametrize("q", [3, 5, 7])
def test_vq_binom_two_path(q):
    for n in range(1, 31):
        direct = dio.rational_valuation(dio.binom_fraction(Fraction(1, q), n), q)
        assert dio.vq_binom(n, q) == direct
