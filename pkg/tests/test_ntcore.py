from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermat_catalan.ntcore import (
    PrimePair,
    case_IIa_base,
    exponent_gap_ok,
    factorize,
    fermat_quotient,
    gap_threshold,
    is_prime,
    is_wieferich,
    minus_one_in_cyclic_subgroup,
    multiplicative_order,
    odd_primes_between,
    primitive_root,
    real_splitting_criterion,
    wieferich_case_Ia,
    wieferich_case_IIa,
    wieferich_case_IIb,
)

SMALL_PRIMES = odd_primes_between(3, 100)


def sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(n**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = [False] * len(flags[i * i :: i])
    return flags


def test_is_prime_matches_sieve():
    flags = sieve(20000)
    assert all(is_prime(n) == flags[n] for n in range(20001))


def test_is_prime_large_and_carmichael():
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime(561)


def test_orders_and_roots():
    assert multiplicative_order(2, 7) == 3
    assert primitive_root(23) == 5
    assert factorize(360) == {2: 3, 3: 2, 5: 1}


def test_prime_pair_invariants():
    pair = PrimePair(37, 23)
    assert (22 % pair.ord_q_of_p, 36 % pair.ord_p_of_q) == (0, 0)
    assert pair.swapped() == PrimePair(23, 37)


@pytest.mark.parametrize("p,q,msg", [(4, 5, "p must be an odd prime"), (2, 5, "p must be an odd prime"), (5, 9, "q must be an odd prime"), (5, 5, "distinct")])
def test_prime_pair_rejects(p, q, msg):
    with pytest.raises(ValueError, match=msg):
        PrimePair(p, q)


def test_wieferich_examples():
    assert is_wieferich(1, 5)
    assert is_wieferich(2, 1093)
    assert not is_wieferich(2, 5)
    assert not wieferich_case_Ia(PrimePair(7, 5))
    # 11^70 = 1 mod 71^2, checked by direct modpow
    assert wieferich_case_IIb(PrimePair(11, 71)) == (pow(11, 70, 71**2) == 1) is True
    assert case_IIa_base(PrimePair(3, 11)) == 108
    assert wieferich_case_IIa(PrimePair(3, 11)) == (pow(108, 10, 121) == 1) is False


def test_wieferich_rejects_bad_input():
    with pytest.raises(ValueError):
        is_wieferich(10, 5)
    with pytest.raises(ValueError):
        is_wieferich(2, 9)


def test_fermat_quotient_examples():
    for q in SMALL_PRIMES:
        assert fermat_quotient(1, q) == 0
        assert fermat_quotient(-1, q) == 0
    assert fermat_quotient(2, 1093) == 0
    assert fermat_quotient(2, 5) == (32 - 2) // 5 % 5


@settings(max_examples=300)
@given(st.sampled_from(SMALL_PRIMES), st.integers(1, 10**6), st.integers(-(10**6), 10**6))
def test_fermat_quotient_depends_on_residue_mod_q2(q, k, a):
    if a % q == 0:
        a += 1
    assert fermat_quotient(a + k * q * q, q) == fermat_quotient(a, q)


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 29, 97])
def test_wieferich_iff_quotient_zero(q):
    for a in range(1, q * q):
        if a % q:
            assert is_wieferich(a, q) == (fermat_quotient(a, q) == 0)


def test_minus_one_membership_brute_force():
    for m in odd_primes_between(3, 199):
        for g in range(1, m):
            powers = set()
            x = 1
            for _ in range(m):
                powers.add(x)
                x = x * g % m
            assert minus_one_in_cyclic_subgroup(g, m) == (m - 1 in powers)


def test_minus_one_examples():
    assert minus_one_in_cyclic_subgroup(2, 5)
    assert not minus_one_in_cyclic_subgroup(2, 7)
    assert all(minus_one_in_cyclic_subgroup(m - 1, m) for m in SMALL_PRIMES)
    with pytest.raises(ValueError):
        minus_one_in_cyclic_subgroup(10, 5)


def test_real_splitting():
    # <3 mod 5> = {3, 4, 2, 1} contains 4; <5 mod 11> = {1, 3, 4, 5, 9} does not contain 10
    assert real_splitting_criterion(PrimePair(3, 5))
    assert not real_splitting_criterion(PrimePair(5, 11))


def test_gap_examples():
    assert exponent_gap_ok(PrimePair(7, 5))
    assert not exponent_gap_ok(PrimePair(5, 7))
    assert exponent_gap_ok(PrimePair(37, 23))
    assert gap_threshold(101) == Fraction(101 * 81, 16)


def test_gap_exact_at_boundary():
    # p(p-20)/16 is never an integer-free float issue: compare with Fraction directly
    for p in odd_primes_between(21, 499):
        thr = max(Fraction(p), Fraction(p * (p - 20), 16))
        for q in odd_primes_between(3, 499):
            if q != p:
                assert exponent_gap_ok(PrimePair(p, q)) == (thr > q)


def test_gap_monotone_in_q():
    primes = odd_primes_between(3, 499)
    for p in primes:
        ok = [exponent_gap_ok(PrimePair(p, q)) for q in primes if q != p]
        # once false, stays false as q grows
        assert ok == sorted(ok, reverse=True)
