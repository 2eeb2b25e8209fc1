"""Elementary modular arithmetic for odd prime exponent pairs.

Primality, multiplicative orders, cyclic subgroup membership, Fermat
quotients and the Wieferich-type congruences that kill individual cases
of x^p + y^p = z^q.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

# Deterministic Miller-Rabin for n < 3.3 * 10^24 (covers all 64-bit inputs).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes in the closed interval [lo, hi]."""
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


def odd_primes_between(lo: int, hi: int) -> list[int]:
    return [n for n in primes_between(lo, hi) if n != 2]


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; only meant for small n (orders, conductors)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    r = n
    for ell in factorize(n):
        r = r // ell * (ell - 1)
    return r


def multiplicative_order(g: int, m: int) -> int:
    """Order of g in (Z/mZ)^x; m need not be prime."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    g %= m
    if gcd(g, m) != 1:
        raise ValueError(f"{g} is not a unit modulo {m}")
    lam = euler_phi(m)
    order = lam
    for ell, e in factorize(lam).items():
        for _ in range(e):
            if pow(g, order // ell, m) == 1:
                order //= ell
            else:
                break
    return order


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 1
    ells = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in ells):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def discrete_log(a: int, g: int, p: int) -> int:
    """k with g^k = a mod p, by table lookup (p is small here)."""
    a %= p
    x = 1
    for k in range(p - 1):
        if x == a:
            return k
        x = x * g % p
    raise ValueError(f"{a} is not a power of {g} modulo {p}")


def _require_odd_prime(n: int, name: str) -> None:
    if n < 3 or not is_prime(n):
        raise ValueError(f"{name} must be an odd prime, got {n}")


@dataclass(frozen=True)
class PrimePair:
    """Two distinct odd primes (p, q) with their mutual multiplicative orders."""

    p: int
    q: int
    ord_q_of_p: int = field(init=False)
    ord_p_of_q: int = field(init=False)

    def __post_init__(self):
        _require_odd_prime(self.p, "p")
        _require_odd_prime(self.q, "q")
        if self.p == self.q:
            raise ValueError("p and q must be distinct primes")
        object.__setattr__(self, "ord_q_of_p", multiplicative_order(self.p, self.q))
        object.__setattr__(self, "ord_p_of_q", multiplicative_order(self.q, self.p))

    def swapped(self) -> "PrimePair":
        return PrimePair(self.q, self.p)

    @property
    def p_is_1_mod_q(self) -> bool:
        return self.p % self.q == 1

    @property
    def q_is_1_mod_p(self) -> bool:
        return self.q % self.p == 1


@dataclass(frozen=True)
class FermatQuotient:
    base: int
    q: int
    value: int


def _check_unit(a: int, q: int) -> None:
    _require_odd_prime(q, "q")
    if a % q == 0:
        raise ValueError(f"gcd({a}, {q}) != 1")


def fermat_quotient(a: int, q: int) -> int:
    """Residue of (a^q - a)/q mod q, from a^q mod q^2.

    Negative a are reduced modulo q^2 first.
    """
    _check_unit(a, q)
    q2 = q * q
    a %= q2
    return ((pow(a, q, q2) - a) % q2) // q


def fermat_quotient_record(a: int, q: int) -> FermatQuotient:
    return FermatQuotient(a, q, fermat_quotient(a, q))


def is_wieferich(a: int, q: int) -> bool:
    """True iff a^(q-1) = 1 mod q^2."""
    _check_unit(a, q)
    return pow(a, q - 1, q * q) == 1


def wieferich_case_Ia(pair: PrimePair) -> bool:
    return is_wieferich(2, pair.q)


def wieferich_case_IIb(pair: PrimePair) -> bool:
    return is_wieferich(pair.p, pair.q)


def case_IIa_base(pair: PrimePair) -> int:
    q2 = pair.q * pair.q
    return pow(2, pair.p - 1, q2) * pow(pair.p, pair.p, q2) % q2


def wieferich_case_IIa(pair: PrimePair) -> bool:
    return is_wieferich(case_IIa_base(pair), pair.q)


def minus_one_in_cyclic_subgroup(g: int, m: int) -> bool:
    """Whether -1 is a power of g modulo the odd prime m."""
    _require_odd_prime(m, "m")
    if g % m == 0:
        raise ValueError(f"gcd({g}, {m}) != 1")
    d = multiplicative_order(g, m)
    return d % 2 == 0 and pow(g, d // 2, m) == m - 1


def real_splitting_criterion(pair: PrimePair) -> bool:
    """-1 in <p mod q>.

    Equivalent (by Kummer's splitting theorem) to p splitting into real
    prime ideals of Q(zeta_q); only the residue side is computed here.
    """
    return minus_one_in_cyclic_subgroup(pair.p, pair.q)


def gap_threshold(p: int) -> Fraction:
    """max{p, p(p-20)/16} as an exact rational."""
    return max(Fraction(p), Fraction(p * (p - 20), 16))


def exponent_gap_ok(pair: PrimePair) -> bool:
    return gap_threshold(pair.p) > pair.q


def valuation(n: int, ell: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    n = abs(n)
    while n % ell == 0:
        n //= ell
        v += 1
    return v
