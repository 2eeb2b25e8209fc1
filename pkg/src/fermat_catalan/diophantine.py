"""Desk-scale solution search and the explicit bounds for x^p + y^p = z^q.

Also: Barlow-Abel case classification, the non-coprime lifting
construction, and the passage between rational points of X^p + Y^q = 1
and coprime solutions of x^p + y^q = z^(pq).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal, localcontext
from enum import Enum
from fractions import Fraction
from math import gcd

import numpy as np
from sympy import factorint, integer_nthroot

from .ntcore import PrimePair, is_prime, valuation

LOG_PRECISION = 50


class EquationKind(str, Enum):
    FC = "FC"  # x^p + y^p = z^q
    HOMFC = "HOMFC"  # x^p + y^q = z^(pq)


def _holds(x, y, z, pair, kind):
    p, q = pair.p, pair.q
    if kind is EquationKind.FC:
        return x**p + y**p == z**q
    return x**p + y**q == z ** (p * q)


@dataclass(frozen=True)
class SolutionTriple:
    x: int
    y: int
    z: int
    pair: PrimePair
    equation_kind: EquationKind = EquationKind.FC

    def __post_init__(self):
        if not _holds(self.x, self.y, self.z, self.pair, self.equation_kind):
            raise ValueError(f"({self.x}, {self.y}, {self.z}) does not satisfy the {self.equation_kind.value} equation")

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.x, self.y), self.z) == 1 and self.x * self.y * self.z != 0

    @property
    def is_trivial(self) -> bool:
        return self.x * self.y * self.z == 0 or abs(self.x) == abs(self.y) == abs(self.z) == 1


def iroot(n: int, k: int) -> tuple[int, bool]:
    """Integer k-th root of n (k odd allowed for negative n) and exactness flag."""
    if n < 0:
        if k % 2 == 0:
            raise ValueError("even root of a negative number")
        r, exact = integer_nthroot(-n, k)
        return -int(r), exact
    r, exact = integer_nthroot(n, k)
    return int(r), exact


def euler_gcd(x: int, y: int, n: int) -> int:
    """gcd((x^n + y^n)/(x + y), x + y); always divides n."""
    if gcd(x, y) != 1:
        raise ValueError("x and y must be coprime")
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and > 1")
    s = x + y
    if s == 0:
        raise ValueError("x + y must be nonzero")
    d = gcd((x**n + y**n) // s, s)
    assert n % d == 0, "gcd does not divide n"
    return d


# --- case classification -----------------------------------------------------


@dataclass(frozen=True)
class BarlowAbelShape:
    """Valuation and power data of x + y and (x^p + y^p)/(x + y)."""

    e: int
    first_factor_power: bool  # case I: x + y is a q-th power
    second_factor_power: bool  # case I: the quotient is a q-th power
    vp_sum: int | None  # case II: v_p(x + y)
    vp_quotient: int | None  # case II: v_p of the quotient

    @property
    def consistent(self) -> bool:
        if self.e == 0:
            return self.first_factor_power and self.second_factor_power
        return self.vp_quotient == 1 and self.vp_sum is not None


def barlow_abel_shape(x: int, y: int, p: int, q: int) -> BarlowAbelShape:
    """Shape data for coprime x, y with x + y != 0; no equation is assumed."""
    s = x + y
    quot = (x**p + y**p) // s
    if s % p:
        return BarlowAbelShape(0, iroot(s, q)[1], iroot(quot, q)[1], None, None)
    return BarlowAbelShape(1, False, False, valuation(s, p), valuation(quot, p))


def case_two_consistent(shape: BarlowAbelShape, q: int) -> bool:
    """Case II: v_p(x + y) = -1 mod q and v_p of the quotient is exactly 1."""
    return shape.e == 1 and (shape.vp_sum + 1) % q == 0 and shape.vp_quotient == 1


@dataclass(frozen=True)
class CaseTag:
    e: int
    f: int | None  # None: no f in {-1, 0, 1} with x + f y = 0 mod q^2
    swapped: bool = False  # f = 0 realized by q^2 | y rather than q^2 | x


def _f_tag(x, y, q):
    q2 = q * q
    for f in (-1, 0, 1):
        if (x + f * y) % q2 == 0:
            return f, False
    if y % q2 == 0:
        return 0, True
    return None, False


def classify_case(sol: SolutionTriple) -> CaseTag:
    if sol.equation_kind is not EquationKind.FC:
        raise ValueError("case classification applies to x^p + y^p = z^q")
    if not sol.is_primitive:
        raise ValueError("classification needs a primitive triple")
    p, q = sol.pair.p, sol.pair.q
    shape = barlow_abel_shape(sol.x, sol.y, p, q)
    e = 1 if sol.z % p == 0 else 0
    if shape.e != e:
        raise AssertionError("p | z and p | x + y disagree")
    if e == 0 and not shape.consistent:
        raise AssertionError("case I factors are not both q-th powers")
    if e == 1 and not case_two_consistent(shape, q):
        raise AssertionError("case II valuations violate the Barlow-Abel relations")
    f, swapped = _f_tag(sol.x, sol.y, q)
    return CaseTag(e, f, swapped)


# --- lifting non-coprime solutions ------------------------------------------


@dataclass(frozen=True)
class Lift:
    D: int
    z: int
    exponents: dict  # prime -> a


def lift_noncoprime(x: int, y: int, pair: PrimePair) -> Lift:
    """D and z with (D x)^p + (D y)^p = z^q, for coprime x, y."""
    p, q = pair.p, pair.q
    if gcd(x, y) != 1:
        raise ValueError("x and y must be coprime")
    v = x**p + y**p
    if v == 0:
        raise ValueError("x^p + y^p = 0 has no lift")
    sign = -1 if v < 0 else 1
    D, z = 1, sign
    exps = {}
    for ell, m in factorint(abs(v)).items():
        n = m % q
        a = 0
        if n:
            a = next(a for a in range(1, q) if (n + a * p) % q == 0)
            exps[ell] = a
        D *= ell**a
        z *= ell ** ((m - n) // q + (n + a * p) // q)
    if (D * x) ** p + (D * y) ** p != z**q:
        raise AssertionError("lifting identity failed")
    return Lift(D, z, exps)


# --- rational Catalan --------------------------------------------------------


def rational_to_integer_catalan(a: int, b: int, c: int, d: int, pair: PrimePair) -> SolutionTriple:
    """X = a/c, Y = b/d in lowest terms with X^p + Y^q = 1  ->  (a, b, u), a^p + b^q = u^(pq)."""
    p, q = pair.p, pair.q
    if c <= 0 or d <= 0:
        raise ValueError("denominators must be positive")
    if gcd(a, c) != 1 or gcd(b, d) != 1:
        raise ValueError("inputs must be in lowest terms")
    if c**p != d**q:
        raise ValueError("c^p != d^q: not a rational solution")
    if Fraction(a, c) ** p + Fraction(b, d) ** q != 1:
        raise ValueError("X^p + Y^q != 1")
    u, exact = iroot(c, q)
    if not exact or u**p != d:
        raise AssertionError("c^p = d^q but c is not a q-th power")
    return SolutionTriple(a, b, u, pair, EquationKind.HOMFC)


def integer_to_rational_catalan(sol: SolutionTriple) -> tuple[Fraction, Fraction]:
    if sol.equation_kind is not EquationKind.HOMFC:
        raise ValueError("expected a solution of x^p + y^q = z^(pq)")
    if gcd(gcd(sol.x, sol.y), sol.z) != 1:
        raise ValueError("expected a primitive triple")
    p, q = sol.pair.p, sol.pair.q
    return Fraction(sol.x, sol.z**q), Fraction(sol.y, sol.z**p)


# --- search ------------------------------------------------------------------


def _filter_primes(q, count=4):
    out, ell = [], 1
    while len(out) < count:
        ell += 2 * q
        if is_prime(ell):
            out.append(ell)
    return out


def _qth_power_mask(ell, q):
    mask = np.zeros(ell, dtype=bool)
    mask[0] = True
    mask[[pow(a, q, ell) for a in range(1, ell)]] = True
    return mask


def _strip(args):
    p, q, y_lo, y_hi, H = args
    found, trivial = [], 0
    # residues of q-th powers modulo primes ell = 1 mod q cut candidates by ~q each
    filters = [
        (ell, _qth_power_mask(ell, q), np.array([pow(v, p, ell) for v in range(ell)], dtype=np.int64))
        for ell in _filter_primes(q)
    ]
    xs = np.arange(1, H + 1, dtype=np.int64)
    for y in range(y_lo, y_hi):
        ax = xs[:y]
        for sgn in (1, -1):
            x = sgn * ax
            keep = np.gcd(ax, y) == 1
            for ell, mask, r in filters:
                val = (r[x % ell] + r[y % ell]) % ell
                keep &= mask[val]
            for xv in x[keep]:
                xv = int(xv)
                if xv == -y:
                    trivial += 1
                    continue
                z, exact = iroot(xv**p + y**p, q)
                if exact:
                    found.append((xv, y, z))
    return found, trivial


@dataclass(frozen=True)
class SearchResult:
    pair: PrimePair
    height: int
    solutions: tuple
    trivial_count: int


def search_fc(pair: PrimePair, height: int, workers: int = 1, strips: int = 8) -> SearchResult:
    """All primitive x^p + y^p = z^q with 1 <= |x| <= y <= height (z sign absorbs the rest).

    The pairs y = -x give z = 0 and are only counted.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    p, q = pair.p, pair.q
    edges = np.linspace(1, height + 1, min(strips, height) + 1).astype(int)
    jobs = [(p, q, int(a), int(b), height) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_strip, jobs))
    else:
        parts = [_strip(j) for j in jobs]
    sols, trivial = [], 0
    for found, t in parts:
        trivial += t
        for x, y, z in found:
            sol = SolutionTriple(x, y, z, pair)
            if sol.is_trivial:
                trivial += 1
            elif sol.is_primitive:
                sols.append(sol)
    sols.sort(key=lambda s: (s.x, s.y, s.z))
    return SearchResult(pair, height, tuple(sols), trivial)


# --- bounds ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """log10 of the lower bounds on solutions, at `precision` significant digits."""

    pair: PrimePair
    lowb: Decimal
    bound: Decimal
    bound1: Decimal
    c1_of_q: Decimal
    precision: int = LOG_PRECISION


def _ctx(prec):
    ctx = Context(prec=prec, rounding=ROUND_HALF_EVEN)
    return localcontext(ctx)


def c_inverse(q: int, prec: int = LOG_PRECISION) -> Decimal:
    """c(q)^-1 = (4/q)(1 + 16 q^-2 ln(1 + 2/q^q))."""
    with _ctx(prec):
        qd = Decimal(q)
        return (4 / qd) * (1 + 16 / qd**2 * (1 + 2 / qd**q).ln())


def c1(q: int, prec: int = LOG_PRECISION) -> Decimal:
    with _ctx(prec):
        return 1 / c_inverse(q, prec) / 2


def bound_lowb(pair: PrimePair, prec: int = LOG_PRECISION) -> Decimal:
    """log10 of (1/2) ((1/(p(p-1))) (q^((q-2)/(q-1)) / 2)^(p-2))^q."""
    p, q = pair.p, pair.q
    with _ctx(prec):
        lq = Decimal(q).log10()
        l2 = Decimal(2).log10()
        inner = -Decimal(p * (p - 1)).log10() + (p - 2) * (Decimal(q - 2) / (q - 1) * lq - l2)
        return -l2 + q * inner


def bound_main2(pair: PrimePair, k: int = 2, prec: int = LOG_PRECISION) -> Decimal:
    """log10 of c1(q) (q^(m(p-1))/p)^(q-2) with m = 1 for k = 2 and m = 2 for k = 3."""
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    p, q = pair.p, pair.q
    m = k - 1
    with _ctx(prec):
        return c1(q, prec).log10() + (q - 2) * (m * (p - 1) * Decimal(q).log10() - Decimal(p).log10())


def bound_report(pair: PrimePair, prec: int = LOG_PRECISION) -> BoundReport:
    return BoundReport(pair, bound_lowb(pair, prec), bound_main2(pair, 2, prec), bound_main2(pair, 3, prec), c1(pair.q, prec), prec)


def legendre_valuation(n: int, q: int) -> int:
    """v_q(n!)."""
    v, m = 0, n
    while m:
        m //= q
        v += m
    return v


def vq_binom(n: int, q: int) -> int:
    """v_q of binomial(1/q, n) = -n - v_q(n!)."""
    if n < 1:
        raise ValueError("n must be positive")
    return -n - legendre_valuation(n, q)


def binom_fraction(x: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= (x - i) / (i + 1)
    return out


def rational_valuation(r: Fraction, q: int) -> int:
    return valuation(r.numerator, q) - valuation(r.denominator, q)
