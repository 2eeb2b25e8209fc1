"""Dirichlet characters, generalized Bernoulli numbers and relative class numbers.

A character modulo m (m an odd prime or a product of two distinct odd
primes) is stored by the exponents e_i with chi(g_i) = zeta_N^e_i, where
g_i are the CRT lifts of the smallest primitive roots of the prime
factors and N is the exponent of (Z/mZ)^x.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm, prod

from .ntcore import (
    PrimePair,
    discrete_log,
    euler_phi,
    factorize,
    is_prime,
    primitive_root,
    valuation,
)

DEFAULT_H_MINUS_BOUND = 250


# --- integer polynomials modulo cyclotomic polynomials ------------------------


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    # X^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(a, b):
    a = list(a)
    db = len(b) - 1
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] // b[-1]
        quot[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return quot


def reduce_mod_cyclotomic(coeffs, n):
    """Reduce a polynomial (rational or integer coefficients) modulo the monic Phi_n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, deg - 1, -1):
        top = c[k]
        if top:
            for i in range(deg + 1):
                c[k - deg + i] -= top * phi[i]
    c = c[:deg] + [0] * max(0, deg - len(c))
    return c


def _mul_mod_cyclotomic(a, b, n):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return reduce_mod_cyclotomic(out, n)


def _galois_image(coeffs, j, n):
    out = [0] * n
    for i, c in enumerate(coeffs):
        out[i * j % n] += c
    return reduce_mod_cyclotomic(out, n)


def norm_by_conjugates(coeffs, n):
    """N_{Q(zeta_n)/Q} of sum c_i zeta_n^i as the product of all conjugates."""
    coeffs = reduce_mod_cyclotomic(coeffs, n)
    acc = [1] + [0] * (len(coeffs) - 1)
    for j in range(1, n + 1):
        if gcd(j, n) == 1:
            acc = _mul_mod_cyclotomic(acc, _galois_image(coeffs, j, n), n)
    if any(acc[1:]):
        raise AssertionError("norm is not rational; reduction bug")
    return acc[0]


_BIG_PRIME_BITS = 61


@lru_cache(maxsize=None)
def _split_primes(n: int, count: int) -> tuple:
    """Primes ell = 1 mod n just below 2^61, with a primitive n-th root of unity mod ell."""
    out = []
    k = ((1 << _BIG_PRIME_BITS) - 1) // n
    ells = list(factorize(n)) if n > 1 else []
    while len(out) < count:
        ell = k * n + 1
        k -= 1
        if not is_prime(ell):
            continue
        for h in range(2, ell):
            r = pow(h, (ell - 1) // n, ell)
            if all(pow(r, n // s, ell) != 1 for s in ells):
                out.append((ell, r))
                break
    return tuple(out)


def norm_multimodular(coeffs, n):
    """Same value as `norm_by_conjugates`, via CRT over split primes."""
    ints = reduce_mod_cyclotomic([int(c) for c in coeffs], n)
    deg = euler_phi(n)
    bound = sum(abs(c) for c in ints) ** deg
    if bound == 0:
        return 0
    # need modulus > 2 * bound
    count = (2 * bound).bit_length() // (_BIG_PRIME_BITS - 1) + 1
    residues = []
    for ell, r in _split_primes(n, count):
        val = 1
        for j in range(1, n + 1):
            if gcd(j, n) == 1:
                x = pow(r, j, ell)
                acc = 0
                for c in reversed(ints):
                    acc = (acc * x + c) % ell
                val = val * acc % ell
        residues.append((val, ell))
    total, modulus = 0, 1
    for val, ell in residues:
        t = (val - total) * pow(modulus, -1, ell) % ell
        total += modulus * t
        modulus *= ell
    if total > modulus // 2:
        total -= modulus
    return total


# --- characters --------------------------------------------------------------


def _check_modulus(m):
    fac = factorize(m)
    if m < 3 or len(fac) > 2 or any(e > 1 for e in fac.values()) or 2 in fac:
        raise ValueError(f"unsupported modulus {m}: need an odd prime or a product of two odd primes")
    return tuple(sorted(fac))


@lru_cache(maxsize=None)
def _group_data(m):
    primes = _check_modulus(m)
    roots = tuple(primitive_root(ell) for ell in primes)
    gens = []
    for i, ell in enumerate(primes):
        other = m // ell
        # g = root mod ell, 1 mod the other prime
        g = (roots[i] * other * pow(other, -1, ell) + ell * pow(ell, -1, other)) % m if other > 1 else roots[i]
        gens.append(g)
    orders = tuple(ell - 1 for ell in primes)
    return primes, roots, tuple(gens), orders, lcm(*orders)


@dataclass(frozen=True)
class DirichletChar:
    modulus: int
    images: tuple  # chi(g_i) = zeta_N^images[i], N = exponent_base
    exponent_base: int
    primes: tuple = field(repr=False)
    roots: tuple = field(repr=False)
    component_orders: tuple = field(repr=False)

    @property
    def order(self) -> int:
        return self.exponent_base // gcd(self.exponent_base, *self.images)

    @property
    def is_trivial(self) -> bool:
        return not any(self.images)

    @property
    def parity(self) -> str:
        N = self.exponent_base
        # -1 = g_i^(n_i/2) in every component
        e = sum(img * (n // 2) for img, n in zip(self.images, self.component_orders)) % N
        assert e in (0, N // 2)
        return "even" if e == 0 else "odd"

    @property
    def is_odd(self) -> bool:
        return self.parity == "odd"

    @property
    def conductor(self) -> int:
        return prod(ell for ell, img in zip(self.primes, self.images) if img % self.exponent_base)

    def exponent_at(self, a: int):
        """Exponent k with chi(a) = zeta_N^k, or None when gcd(a, m) > 1."""
        a %= self.modulus
        if gcd(a, self.modulus) != 1:
            return None
        k = 0
        for ell, g, img in zip(self.primes, self.roots, self.images):
            k += img * discrete_log(a % ell, g, ell)
        return k % self.exponent_base

    def order_exponent_at(self, a: int):
        """Exponent j with chi(a) = zeta_d^j, d = order; None off the unit group."""
        k = self.exponent_at(a)
        if k is None:
            return None
        return k // (self.exponent_base // self.order)

    def inverse(self) -> "DirichletChar":
        return self.power(-1)

    def power(self, a: int) -> "DirichletChar":
        N = self.exponent_base
        return DirichletChar(self.modulus, tuple(img * a % N for img in self.images), N, self.primes, self.roots, self.component_orders)

    def mul(self, other: "DirichletChar") -> "DirichletChar":
        if other.modulus != self.modulus:
            raise ValueError("characters of different moduli")
        N = self.exponent_base
        return DirichletChar(self.modulus, tuple((a + b) % N for a, b in zip(self.images, other.images)), N, self.primes, self.roots, self.component_orders)

    def primitive(self) -> "DirichletChar":
        """The character modulo the conductor inducing this one."""
        f = self.conductor
        if f == self.modulus:
            return self
        if f == 1:
            raise ValueError("the trivial character has no primitive modulus > 1")
        keep = [i for i, img in enumerate(self.images) if img % self.exponent_base]
        (i,) = keep
        ell = self.primes[i]
        # re-express with base N' = ell - 1
        N = self.exponent_base
        n_i = self.component_orders[i]
        k = self.images[i] // (N // n_i)
        return DirichletChar(ell, (k,), n_i, (ell,), (self.roots[i],), (n_i,))

    def from_components(self):
        """Exponents k_i with chi(g_i) = zeta_{n_i}^k_i."""
        N = self.exponent_base
        return tuple(img // (N // n) for img, n in zip(self.images, self.component_orders))


def make_character(m: int, component_exponents) -> DirichletChar:
    """Character with chi(g_i) = zeta_{ell_i - 1}^k_i for the given k_i."""
    primes, roots, _, orders, N = _group_data(m)
    if len(component_exponents) != len(primes):
        raise ValueError("one exponent per prime factor required")
    images = tuple(k % n * (N // n) for k, n in zip(component_exponents, orders))
    return DirichletChar(m, images, N, primes, roots, orders)


def characters_mod(m: int) -> list[DirichletChar]:
    primes, _, _, orders, _ = _group_data(m)
    if len(primes) == 1:
        return [make_character(m, (k,)) for k in range(orders[0])]
    return [make_character(m, (k1, k2)) for k1 in range(orders[0]) for k2 in range(orders[1])]


def character_value_exact(chi: DirichletChar, a: int):
    """chi(a) as (j, d): zeta_d^j with d the order; None if gcd(a, m) > 1."""
    j = chi.order_exponent_at(a)
    return None if j is None else (j, chi.order)


# --- Bernoulli numbers -------------------------------------------------------


@dataclass(frozen=True)
class BernoulliValue:
    """Exact element of Q(zeta_d) stored as Fraction coefficients modulo Phi_d."""

    char: DirichletChar
    d: int
    coeffs: tuple

    def norm(self) -> Fraction:
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        return Fraction(norm_multimodular(ints, self.d), den ** euler_phi(self.d))


def bernoulli_sum(chi: DirichletChar):
    """(f, integer coefficients of sum_{a<=f} a chi(a) in Z[zeta_d] reduced mod Phi_d)."""
    prim = chi.primitive()
    f = prim.modulus
    d = chi.order
    raw = [0] * d
    for a in range(1, f + 1):
        j = prim.order_exponent_at(a)
        if j is not None:
            raw[j % d] += a
    return f, reduce_mod_cyclotomic(raw, d)


def bernoulli_b1(chi: DirichletChar) -> BernoulliValue:
    """B_{1,chi} = (1/f) sum_{a=1}^{f} a chi(a) over the conductor f."""
    if chi.is_trivial:
        raise ValueError("B_{1,chi} is only computed for nontrivial characters")
    f, ints = bernoulli_sum(chi)
    value = BernoulliValue(chi, chi.order, tuple(Fraction(c, f) for c in ints))
    if chi.is_odd and not any(value.coeffs):
        raise AssertionError(f"B_1 vanishes for the odd character {chi}")
    return value


def conjugate_value(v: BernoulliValue) -> tuple:
    """Image of v under zeta_d -> zeta_d^-1, reduced."""
    d = v.d
    raw = [Fraction(0)] * d
    for i, c in enumerate(v.coeffs):
        raw[(-i) % d] += c
    return tuple(reduce_mod_cyclotomic(raw, d))


# --- relative class numbers --------------------------------------------------


@dataclass
class ClassNumberReport:
    modulus: int
    h_minus: int
    orbit_factors: list  # (representative images, N(B_{1,chi}) as Fraction, orbit size)
    formula_constants: dict
    computed_by: str = "analytic"


def galois_orbits(chars):
    """Partition characters into orbits chi -> chi^a, gcd(a, ord chi) = 1."""
    seen = set()
    orbits = []
    for chi in chars:
        if chi.images in seen:
            continue
        d = chi.order
        orbit = {chi.power(a).images: chi.power(a) for a in range(1, d + 1) if gcd(a, d) == 1}
        seen.update(orbit)
        rep = orbit[min(orbit)]
        orbits.append((rep, len(orbit)))
    return orbits


@lru_cache(maxsize=None)
def h_minus(m: int) -> ClassNumberReport:
    """h^- of Q(zeta_m) = Q w prod_{chi odd} (-B_{1,chi}/2)."""
    primes = _check_modulus(m)
    Q = 1 if len(primes) == 1 else 2
    w = 2 * m
    odd = [chi for chi in characters_mod(m) if chi.is_odd]
    total = Fraction(Q * w)
    factors = []
    for rep, size in galois_orbits(odd):
        nb = bernoulli_b1(rep).norm()
        factors.append((rep.images, nb, size))
        total *= nb * Fraction(-1, 2) ** size
    if total.denominator != 1:
        raise AssertionError(f"h^-({m}) assembled to a non-integer {total}")
    if total <= 0:
        raise AssertionError(f"h^-({m}) assembled to a non-positive value {total}")
    return ClassNumberReport(m, int(total), factors, {"Q": Q, "w": w, "normalization": "1/f"})


def _bareiss_det(rows):
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def maillet_determinant(p: int) -> int:
    """det of (R(i * j^-1)) for 1 <= i, j <= (p-1)/2, R the least positive residue mod p."""
    h = (p - 1) // 2
    rows = [[i * pow(j, -1, p) % p for j in range(1, h + 1)] for i in range(1, h + 1)]
    return _bareiss_det(rows)


def h_minus_maillet(p: int) -> int:
    """h_p^- from det(Maillet) = +/- p^((p-3)/2) h_p^-."""
    if p < 3 or not is_prime(p):
        raise ValueError("Maillet's determinant needs an odd prime")
    det = abs(maillet_determinant(p))
    scale = p ** ((p - 3) // 2)
    if det % scale:
        raise AssertionError("Maillet determinant not divisible by the expected power of p")
    return det // scale


@dataclass(frozen=True)
class DivisibilityVerdict:
    """Outcome of 'q | N' where N may be out of computational reach (divides is None)."""

    q: int
    modulus: int
    divides: bool | None
    detail: str

    @property
    def known(self) -> bool:
        return self.divides is not None


def q_divides_h_minus(m: int, q: int, bound: int = DEFAULT_H_MINUS_BOUND) -> DivisibilityVerdict:
    if m > bound:
        return DivisibilityVerdict(q, m, None, f"modulus {m} exceeds the h^- bound {bound}")
    h = h_minus(m).h_minus
    return DivisibilityVerdict(q, m, h % q == 0, f"h^-({m}) = {h}")


# --- reflection quantity B_omega ---------------------------------------------


def _teichmuller(a: int, q: int, prec: int) -> int:
    """Teichmuller lift of a mod q, modulo q^prec."""
    mod = q**prec
    x = a % mod
    for _ in range(prec):
        x = pow(x, q, mod)
    return x


def _poly_mulmod(a, b, q_len, mod):
    out = [0] * (2 * q_len)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    # reduce modulo Y^q - 1, then Phi_q
    cyc = [0] * q_len
    for i, c in enumerate(out):
        cyc[i % q_len] += c
    top = cyc[-1]
    return [(c - top) % mod for c in cyc[:-1]] + [0]


@dataclass(frozen=True)
class BOmegaReport:
    pair: PrimePair
    empty: bool  # no characters of order q modulo p
    valuation: int | None  # q-adic valuation of B_omega at the chosen place
    embedding: int
    precision: int

    @property
    def q_divides(self) -> bool:
        return (not self.empty) and self.valuation > 0


def b_omega(pair: PrimePair, embedding: int = 1, max_precision: int = 4096) -> BOmegaReport:
    """q-adic valuation of prod_{chi of order q mod p} B_{1, chi^-1 omega}.

    omega is realized through zeta_{q-1} -> Teichmuller(g_q)^embedding in Z_q,
    with g_q the smallest primitive root mod q; embedding = 1 gives the
    Teichmuller character itself (omega(a) = a mod q). The product over chi
    is the relative norm from Q(zeta_{q(q-1)}) to Q(zeta_{q-1}), computed in
    (Z/q^N)[Y]/Phi_q(Y).
    """
    p, q = pair.p, pair.q
    if (p - 1) % q:
        return BOmegaReport(pair, True, 0, embedding, 0)
    if gcd(embedding, q - 1) != 1:
        raise ValueError("embedding exponent must be prime to q - 1")
    gp = primitive_root(p)
    gq = primitive_root(q)
    prec = 2 * q
    while True:
        mod = q**prec
        teich = _teichmuller(pow(gq, embedding, q), q, prec)
        # S(Y) = sum_a a * omega(a) * Y^(-dlog_p(a)), chi(g_p) = Y
        S = [0] * q
        for a in range(1, p * q):
            if a % p == 0 or a % q == 0:
                continue
            k = discrete_log(a % q, gq, q)
            j = (-discrete_log(a % p, gp, p)) % q
            S[j] = (S[j] + a * pow(teich, k, mod)) % mod
        top = S[-1]
        S = [(c - top) % mod for c in S[:-1]] + [0]
        acc = [1] + [0] * (q - 1)
        for j in range(1, q):
            img = [0] * q
            for i, c in enumerate(S):
                img[i * j % q] += c
            t = img[-1]
            img = [(c - t) % mod for c in img[:-1]] + [0]
            acc = _poly_mulmod(acc, img, q, mod)
        if any(acc[1:]):
            raise AssertionError("relative norm is not Galois invariant")
        n = acc[0] % mod
        if n:
            # B = S / (pq); p is a q-unit
            return BOmegaReport(pair, False, valuation(n, q) - (q - 1), embedding, prec)
        if prec >= max_precision:
            raise ArithmeticError("q-adic precision exhausted for B_omega")
        prec *= 2


@dataclass(frozen=True)
class ReflectionReport:
    pair: PrimePair
    h_p_minus: DivisibilityVerdict
    b_omega: BOmegaReport
    divides: bool | None  # q | h(p, q)

    @property
    def known(self) -> bool:
        return self.divides is not None


def h_pq_reflection(pair: PrimePair, bound: int = DEFAULT_H_MINUS_BOUND) -> ReflectionReport:
    """Verdict on q | h(p, q) = h_p^- * B_omega."""
    hv = q_divides_h_minus(pair.p, pair.q, bound)
    bw = b_omega(pair)
    if hv.divides is True or bw.q_divides:
        div = True
    elif hv.divides is None:
        div = None
    else:
        div = False
    return ReflectionReport(pair, hv, bw, div)
