"""Dense polynomials over F_q and the extension fields F_q[Y]/(g(Y)).

Polynomials are lists of residues, lowest degree first, with no trailing
zeros (the zero polynomial is the empty list).
"""

from functools import lru_cache
from itertools import product

import numpy as np

from .ntcore import factorize, multiplicative_order


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod_q(a, q):
    return trim(c % q for c in a)


def poly_sub(a, b, q):
    n = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n))


def poly_mul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_mod_q(out, q)


def poly_divmod(a, b, q):
    """Quotient and remainder of a by b over F_q."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = poly_mod_q(a, q)
    inv_lead = pow(b[-1], -1, q)
    db = len(b) - 1
    quot = [0] * max(len(a) - db, 0)
    rem = list(a)
    for k in range(len(a) - 1 - db, -1, -1):
        c = rem[k + db] * inv_lead % q
        quot[k] = c
        if c:
            for i, bi in enumerate(b):
                rem[k + i] = (rem[k + i] - c * bi) % q
    return trim(quot), trim(rem[:db])


def poly_gcdex(a, b, q):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = poly_mod_q(a, q), poly_mod_q(b, q)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        quo, rem = poly_divmod(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_sub(s0, poly_mul(quo, s1, q), q)
        t0, t1 = t1, poly_sub(t0, poly_mul(quo, t1, q), q)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, q)
    return ([c * inv % q for c in r0], [c * inv % q for c in s0], [c * inv % q for c in t0])


class GFExt:
    """The field F_q[Y]/(g(Y)) for a monic irreducible g of degree d.

    Elements are int64 numpy vectors of length d. Multiplication reduces
    the length 2d-1 product with a precomputed table of Y^k mod g.
    """

    def __init__(self, q, modulus):
        modulus = poly_mod_q(modulus, q)
        if modulus[-1] != 1:
            raise ValueError("field modulus must be monic")
        self.q = q
        self.modulus = tuple(modulus)
        self.d = d = len(modulus) - 1
        # rows k = 0..d-2 hold Y^(d+k) mod g
        red = np.zeros((max(d - 1, 0), d), dtype=np.int64)
        neg = np.array([(-c) % q for c in modulus[:d]], dtype=np.int64)
        cur = neg.copy()
        for k in range(d - 1):
            red[k] = cur
            top = cur[-1]
            cur[1:] = cur[:-1]
            cur[0] = 0
            cur = (cur + top * neg) % q
        self._red = red

    @property
    def order(self):
        return self.q ** self.d

    def zero(self):
        return np.zeros(self.d, dtype=np.int64)

    def one(self):
        e = self.zero()
        e[0] = 1
        return e

    def from_int(self, n):
        e = self.zero()
        e[0] = n % self.q
        return e

    def from_coeffs(self, coeffs):
        e = self.zero()
        c = list(coeffs)
        if len(c) > self.d:
            _, r = poly_divmod(c, list(self.modulus), self.q)
            c = r
        for i, x in enumerate(c):
            e[i] = x % self.q
        return e

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def scale(self, a, n):
        return a * (n % self.q) % self.q

    def mul(self, a, b):
        prod_ = np.convolve(a, b) % self.q
        d = self.d
        if d == 1:
            return prod_[:1] % self.q
        low = prod_[:d]
        high = prod_[d:]
        return (low + high @ self._red) % self.q

    def pow(self, a, n):
        if n < 0:
            a = self.inv(a)
            n = -n
        result = self.one()
        base = a.copy()
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def inv(self, a):
        if not a.any():
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.order - 2)

    def eq(self, a, b):
        return bool(np.array_equal(a % self.q, b % self.q))

    def is_zero(self, a):
        return not a.any()

    def is_one(self, a):
        return self.eq(a, self.one())

    def element_of_order(self, n):
        """Deterministic element of exact multiplicative order n (n | q^d - 1)."""
        big = self.order - 1
        if big % n:
            raise ValueError(f"{n} does not divide {big}")
        ells = list(factorize(n)) if n > 1 else []
        for coeffs in _lex_elements(self.q, self.d):
            h = self.from_coeffs(coeffs)
            if self.is_zero(h):
                continue
            r = self.pow(h, big // n)
            if all(not self.is_one(self.pow(r, n // ell)) for ell in ells):
                return r
        raise AssertionError("no element of the requested order found")


def _lex_elements(q, d):
    for tail in product(range(q), repeat=d):
        yield list(reversed(tail))


def _np_trim(a):
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def poly_gcd_degree(a, b, q):
    """Degree of gcd(a, b) over F_q (-1 when both vanish); no cofactors."""
    a = _np_trim(np.asarray(a, dtype=np.int64) % q)
    b = _np_trim(np.asarray(b, dtype=np.int64) % q)
    while b.size:
        inv = pow(int(b[-1]), -1, q)
        nb = b.size
        r = a.copy()
        for k in range(r.size - nb, -1, -1):
            c = r[k + nb - 1] * inv % q
            if c:
                r[k : k + nb] = (r[k : k + nb] - c * b) % q
        a, b = b, _np_trim(r[: nb - 1])
    return a.size - 1


def _has_root(g, q):
    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in reversed(g):
        acc = (acc * xs + c) % q
    return bool((acc == 0).any())


def is_irreducible(g, q):
    """Ben-Or test: no factor of degree <= deg(g)/2."""
    g = poly_mod_q(g, q)
    d = len(g) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if _has_root(g, q):
        return False
    field = GFExt(q, g)
    x = field.from_coeffs([0, 1])
    h = field.pow(x, q)
    # degree-1 factors are excluded above; gcds are taken over blocks of
    # doubling length, so most reducible inputs die after a few Frobenius steps
    acc = field.one()
    next_check = 2
    for i in range(2, d // 2 + 1):
        h = field.pow(h, q)
        diff = field.sub(h, x)
        if not diff.any():
            return False
        acc = field.mul(acc, diff)
        if i == next_check or i == d // 2:
            if not acc.any() or poly_gcd_degree(g, acc, q) > 0:
                return False
            acc = field.one()
            next_check = 2 * i
    return True


@lru_cache(maxsize=None)
def first_irreducible(q, d):
    """Lexicographically first monic irreducible polynomial of degree d over F_q."""
    for tail in _lex_elements(q, d):
        g = list(tail) + [1]
        if g[0] == 0 and d > 1:
            continue
        if is_irreducible(g, q):
            return tuple(g)
    raise AssertionError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def extension_field(q, d):
    return GFExt(q, first_irreducible(q, d))


def splitting_degree(q, n):
    """Degree of the smallest extension of F_q containing the n-th roots of unity."""
    if n % q == 0:
        raise ValueError("n must be prime to the characteristic")
    return 1 if n == 1 else multiplicative_order(q, n)
