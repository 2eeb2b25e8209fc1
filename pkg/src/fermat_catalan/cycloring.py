"""Arithmetic in Z[zeta_p]/(q) = F_q[X]/(Phi_p(X)).

Elements are stored in the power basis {1, zeta, ..., zeta^(p-2)} with
zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)). Some statements are more
natural in the basis {zeta, ..., zeta^(p-1)}; see `to_shifted_basis`.
"""

from dataclasses import dataclass

import numpy as np

from . import gfpoly
from .ntcore import PrimePair, multiplicative_order, primitive_root


class NonUnitError(ArithmeticError):
    """Raised when inverting an element that shares a factor with Phi_p mod q."""

    def __init__(self, elem, witness):
        super().__init__(f"{elem!r} is not a unit: gcd with Phi_p mod q is {witness}")
        self.witness = witness


def _dtype_for(p, q):
    # products are summed over at most p terms before reduction
    return np.int64 if p * (q - 1) ** 2 < 2**62 else object


def _canonical(vec, p, q):
    """Reduce a length-p coefficient vector (basis 1..zeta^(p-1)) modulo Phi_p and q."""
    vec = np.asarray(vec)
    out = (vec[: p - 1] - vec[p - 1]) % q
    return tuple(int(c) for c in out)


@dataclass(frozen=True)
class CycloElem:
    p: int
    q: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise ValueError(f"expected {self.p - 1} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.q for c in self.coeffs):
            raise ValueError("coefficients must be reduced modulo q")

    def _check(self, other):
        if not isinstance(other, CycloElem):
            raise TypeError(f"cannot combine CycloElem with {type(other).__name__}")
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("elements live in different rings")
        return other

    def _cyclic(self):
        v = np.zeros(self.p, dtype=_dtype_for(self.p, self.q))
        v[: self.p - 1] = self.coeffs
        return v

    def __add__(self, other):
        other = self._check(other)
        return CycloElem(self.p, self.q, tuple((a + b) % self.q for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        other = self._check(other)
        return CycloElem(self.p, self.q, tuple((a - b) % self.q for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycloElem(self.p, self.q, tuple((-a) % self.q for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElem(self.p, self.q, tuple(a * other % self.q for a in self.coeffs))
        other = self._check(other)
        p, q = self.p, self.q
        full = np.convolve(self._cyclic(), other._cyclic())
        cyc = full[:p].copy()
        cyc[: len(full) - p] += full[p:]
        return CycloElem(p, q, _canonical(cyc % q, p, q))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return inverse(self) ** (-n)
        result = one(self.p, self.q)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def __repr__(self):
        return f"CycloElem(p={self.p}, q={self.q}, coeffs={list(self.coeffs)})"


def elem(p, q, poly_coeffs):
    """Element with the given coefficients on 1, zeta, zeta^2, ... (any length)."""
    v = [0] * p
    for i, c in enumerate(poly_coeffs):
        v[i % p] += c
    return CycloElem(p, q, _canonical(np.array(v, dtype=object) % q, p, q))


def const(p, q, c):
    return elem(p, q, [c])


def one(p, q):
    return const(p, q, 1)


def zeta_power(p, q, k):
    v = [0] * p
    v[k % p] = 1
    return CycloElem(p, q, _canonical(np.array(v, dtype=object), p, q))


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    return a * b


def _phi_p(p):
    return [1] * p


def inverse(a: CycloElem) -> CycloElem:
    g, s, _ = gfpoly.poly_gcdex(list(a.coeffs), _phi_p(a.p), a.q)
    if g != [1]:
        raise NonUnitError(a, g)
    return elem(a.p, a.q, s)


def galois(a: CycloElem, c: int) -> CycloElem:
    """Image of a under sigma_c : zeta -> zeta^c."""
    p, q = a.p, a.q
    if c % p == 0:
        raise ValueError("c must be prime to p")
    v = [0] * p
    for i, x in enumerate(a.coeffs):
        v[i * c % p] += x
    return CycloElem(p, q, _canonical(np.array(v, dtype=object) % q, p, q))


def conj(a: CycloElem) -> CycloElem:
    return galois(a, -1)


def trace(a: CycloElem) -> int:
    total = const(a.p, a.q, 0)
    for c in range(1, a.p):
        total = total + galois(a, c)
    if not total.is_rational():
        raise AssertionError(f"trace is not rational: {total!r}")
    return total.coeffs[0]


def norm(a: CycloElem) -> int:
    total = one(a.p, a.q)
    for c in range(1, a.p):
        total = total * galois(a, c)
    if not total.is_rational():
        raise AssertionError(f"norm is not rational: {total!r}")
    return total.coeffs[0]


def to_shifted_basis(a: CycloElem) -> tuple:
    """Coordinates (b_1, ..., b_{p-1}) with a = sum b_k zeta^k."""
    a0 = a.coeffs[0]
    q = a.q
    return tuple((a.coeffs[k] - a0) % q for k in range(1, a.p - 1)) + ((-a0) % q,)


def from_shifted_basis(p, q, b) -> CycloElem:
    if len(b) != p - 1:
        raise ValueError(f"expected {p - 1} coordinates")
    return elem(p, q, [0] + list(b))


def gamma_unit(pair: PrimePair, m: int | None = None) -> CycloElem:
    """((1 - zeta)^(p-1) / p)^m with m(p-1) = 1 mod q, 0 < m < q."""
    p, q = pair.p, pair.q
    if pair.p_is_1_mod_q:
        raise ValueError(f"p = 1 mod q: no m with m(p-1) = 1 mod {q}")
    if m is None:
        m = pow(p - 1, -1, q)
    if not (0 < m < q and m * (p - 1) % q == 1):
        raise ValueError(f"m = {m} does not satisfy m(p-1) = 1 mod q")
    base = (one(p, q) - zeta_power(p, q, 1)) ** (p - 1) * pow(p, -1, q)
    return base ** m


@dataclass(frozen=True)
class ResolventMatrix:
    """Circulant matrix with entry(i, j) = sigma^(i+j)(1/(1 - zeta)).

    sigma is zeta -> zeta^g for the smallest primitive root g mod p.
    """

    p: int
    q: int
    generator: int
    orbit: tuple  # sigma^k(1/(1-zeta)) for k = 0..p-2

    def entry(self, i, j):
        return self.orbit[(i + j) % (self.p - 1)]


def inverse_basis_matrix(pair: PrimePair) -> ResolventMatrix:
    p, q = pair.p, pair.q
    g = primitive_root(p)
    base = inverse(one(p, q) - zeta_power(p, q, 1))
    orbit = tuple(galois(base, pow(g, k, p)) for k in range(p - 1))
    return ResolventMatrix(p, q, g, orbit)


def det_mod(rows, q):
    """Determinant and rank of a square integer matrix over F_q."""
    m = [[x % q for x in r] for r in rows]
    n = len(m)
    det = 1
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if m[r][col]), None)
        if piv is None:
            det = 0
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
            det = -det
        det = det * m[rank][col] % q
        inv = pow(m[rank][col], -1, q)
        for r in range(rank + 1, n):
            f = m[r][col] * inv % q
            if f:
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[rank])]
        rank += 1
    return det % q, rank


def inverse_basis_determinant(pair: PrimePair) -> tuple[int, int]:
    """(det mod q, rank) of the matrix whose columns are 1/(1 - zeta^c) in the power basis."""
    p, q = pair.p, pair.q
    cols = [inverse(one(p, q) - zeta_power(p, q, c)).coeffs for c in range(1, p)]
    rows = [[cols[j][i] for j in range(p - 1)] for i in range(p - 1)]
    return det_mod(rows, q)


def inverse_basis_invertible(pair: PrimePair) -> bool:
    det, _ = inverse_basis_determinant(pair)
    return det != 0


# --- resolvents over F_{q^d} -------------------------------------------------


def _prime_to(n, q):
    while n % q == 0:
        n //= q
    return n


@dataclass
class ResolventField:
    """F_{q^d} holding a primitive p-th root zeta and the image w of zeta_{p-1}."""

    pair: PrimePair
    field: gfpoly.GFExt
    zeta: np.ndarray
    w: np.ndarray
    w_order: int

    def w_pow(self, k):
        return self._w_powers[k % self.w_order]

    def __post_init__(self):
        pw = [self.field.one()]
        for _ in range(self.w_order - 1):
            pw.append(self.field.mul(pw[-1], self.w))
        self._w_powers = pw


def resolvent_field(pair: PrimePair) -> ResolventField:
    p, q = pair.p, pair.q
    # Phi_{p-1} mod q has the primitive m'-th roots as its roots, m' the q-free part.
    m_prime = _prime_to(p - 1, q)
    d = multiplicative_order(q, p * m_prime)
    field = gfpoly.extension_field(q, d)
    return ResolventField(pair, field, field.element_of_order(p), field.element_of_order(m_prime), m_prime)


def _batch_inverse(field, elems):
    prefix = [field.one()]
    for e in elems:
        prefix.append(field.mul(prefix[-1], e))
    inv = field.inv(prefix[-1])
    out = [None] * len(elems)
    for i in range(len(elems) - 1, -1, -1):
        out[i] = field.mul(inv, prefix[i])
        inv = field.mul(inv, elems[i])
    return out


def _bernoulli_in_field(value, rf: ResolventField, p):
    """Map an exact element of Q(zeta_d), d | p-1, into F_{q^d}."""
    from fractions import Fraction

    F, q = rf.field, rf.field.q
    step = (p - 1) // value.d
    acc = F.zero()
    for i, c in enumerate(value.coeffs):
        c = Fraction(c)
        if c == 0:
            continue
        if c.denominator % q == 0:
            raise ArithmeticError("Bernoulli value is not q-integral")
        r = c.numerator * pow(c.denominator, -1, q)
        acc = F.add(acc, F.scale(rf.w_pow(step * i), r))
    return acc


@dataclass(frozen=True)
class ResolventCheck:
    exponent: int  # psi(g) = zeta_{p-1}^exponent
    lhs: tuple
    rhs: tuple
    holds: bool


def resolvent_checks(pair: PrimePair, include_trivial=False) -> list[ResolventCheck]:
    """For each character psi mod p compare sum psi(x)/(1-zeta^x) with -tau(psi) B_{1,psi^-1}."""
    from .characters import bernoulli_b1, characters_mod

    p = pair.p
    rf = resolvent_field(pair)
    F = rf.field
    g = primitive_root(p)
    zeta_pows = [F.one()]
    for _ in range(p - 1):
        zeta_pows.append(F.mul(zeta_pows[-1], rf.zeta))
    # dlog table: x = g^k
    xs = [pow(g, k, p) for k in range(p - 1)]
    inv_one_minus = _batch_inverse(F, [F.sub(F.one(), zeta_pows[x]) for x in xs])
    out = []
    for chi in characters_mod(p):
        if chi.is_trivial and not include_trivial:
            continue
        e_full = chi.images[0]  # psi(g) = zeta_{p-1}^e_full
        lhs = F.zero()
        tau = F.zero()
        for k, x in enumerate(xs):
            v = rf.w_pow(e_full * k)
            lhs = F.add(lhs, F.mul(v, inv_one_minus[k]))
            tau = F.add(tau, F.mul(v, zeta_pows[x]))
        if chi.is_trivial:
            # (1/p) sum_{i<p} i, the value the sum formula gives for psi = 1
            b = F.from_int((p - 1) * pow(2, -1, F.q))
        else:
            b = _bernoulli_in_field(bernoulli_b1(chi.inverse()), rf, p)
        rhs = F.sub(F.zero(), F.mul(tau, b))
        out.append(ResolventCheck(e_full % (p - 1), tuple(int(c) for c in lhs), tuple(int(c) for c in rhs), F.eq(lhs, rhs)))
    return out


def resolvent_bernoulli_check(pair: PrimePair) -> bool:
    return all(c.holds for c in resolvent_checks(pair))
