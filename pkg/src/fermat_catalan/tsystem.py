"""Difference operators on F_q-valued sequences and the congruence system in t.

For coprime x, y prime to q, write t = -y/x mod q^2. The congruence

    -(zeta^q - zeta^-q) phi(t) = sum_{k=1}^{q-1} (t^k - t^(2-k))/k (zeta^k - zeta^-k)

in F_q[X]/(Phi_p) splits, in the basis zeta^k - zeta^-k (k = 1..(p-1)/2),
into a linear system whose solutions are computed exhaustively here.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import cycloring
from .cycloring import CycloElem
from .ntcore import PrimePair, fermat_quotient


# --- sequences and operators -------------------------------------------------


@dataclass(frozen=True)
class FqSequence:
    """Terms a_start, ..., a_(start+len-1) in F_q, with a parameter t."""

    q: int
    t: int
    start: int
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(a % self.q for a in self.terms))
        object.__setattr__(self, "t", self.t % self.q)

    @property
    def stop(self) -> int:
        return self.start + len(self.terms)

    def __getitem__(self, n):
        if not self.start <= n < self.stop:
            raise IndexError(f"index {n} outside window [{self.start}, {self.stop})")
        return self.terms[n - self.start]

    def indices(self):
        return range(self.start, self.stop)

    @classmethod
    def from_function(cls, q, t, start, length, fn):
        return cls(q, t, start, tuple(fn(n) for n in range(start, start + length)))


def _shift_op(s: FqSequence, a: int, b: int) -> FqSequence:
    # b_n = a * s_n + b * s_(n-1), defined for n >= start + 1
    if len(s.terms) < 2:
        raise ValueError("window too short for a difference operator")
    q = s.q
    terms = tuple((a * s.terms[i] + b * s.terms[i - 1]) % q for i in range(1, len(s.terms)))
    return FqSequence(q, s.t, s.start + 1, terms)


def theta_plus(s: FqSequence) -> FqSequence:
    """a_n - t a_(n-1)."""
    return _shift_op(s, 1, -s.t)


def theta_minus(s: FqSequence) -> FqSequence:
    """t a_n - a_(n-1)."""
    return _shift_op(s, s.t, -1)


def theta_big(s: FqSequence) -> FqSequence:
    if len(s.terms) < 3:
        raise ValueError("window too short for Theta")
    return theta_plus(theta_minus(s))


def iterate(op, s: FqSequence, k: int) -> FqSequence:
    for _ in range(k):
        s = op(s)
    return s


def falling(n: int, k: int) -> int:
    """Falling power n (n-1) ... (n-k+1); zero when k < 0."""
    if k < 0:
        return 0
    out = 1
    for i in range(k):
        out *= n - i
    return out


def t_power(t: int, e: int, q: int) -> int:
    return pow(t, e, q) if e >= 0 else pow(pow(t, -1, q), -e, q)


# --- the congruence -----------------------------------------------------------


def _antisym(p, q, k) -> CycloElem:
    return cycloring.zeta_power(p, q, k) - cycloring.zeta_power(p, q, -k)


@dataclass(frozen=True)
class PonderResidue:
    pair: PrimePair
    t: int
    phi: int
    lhs: CycloElem
    rhs: CycloElem

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def ponder_residue(pair: PrimePair, t: int) -> PonderResidue:
    """Both sides of the congruence for an integer t; phi uses t modulo q^2."""
    p, q = pair.p, pair.q
    if t % q == 0:
        raise ValueError("t must be prime to q (t = 0 is the q | x case)")
    phi = fermat_quotient(t, q)
    lhs = _antisym(p, q, q) * (-phi % q)
    rhs = cycloring.const(p, q, 0)
    for k in range(1, q):
        c = (t_power(t, k, q) - t_power(t, 2 - k, q)) * pow(k, -1, q) % q
        if c:
            rhs = rhs + _antisym(p, q, k) * c
    return PonderResidue(pair, t, phi, lhs, rhs)


def ponder_holds(pair: PrimePair, t: int) -> bool:
    return ponder_residue(pair, t).holds


def nu_index(pair: PrimePair) -> tuple[int, int]:
    """(nu, sign) with 0 < nu <= (p-1)/2 and q = sign * nu mod p."""
    p, q = pair.p, pair.q
    r = q % p
    return (r, 1) if r <= (p - 1) // 2 else (p - r, -1)


def _basis_weights(p, q):
    """Matrix W (q-1) x (p-1)/2: zeta^k - zeta^-k = sum_m W[k-1, m-1] (zeta^m - zeta^-m)."""
    h = (p - 1) // 2
    W = np.zeros((q - 1, h), dtype=np.int64)
    for k in range(1, q):
        r = k % p
        if r == 0:
            continue
        if r <= h:
            W[k - 1, r - 1] = 1
        else:
            W[k - 1, p - r - 1] = -1
    return W


def rhs_coefficient_table(pair: PrimePair) -> np.ndarray:
    """Rows t = 1..q-1: coefficients of zeta^m - zeta^-m (m = 1..(p-1)/2) on the right side."""
    p, q = pair.p, pair.q
    ts = np.arange(1, q, dtype=np.int64)
    ks = np.arange(1, q, dtype=np.int64)
    inv_t = np.array([pow(int(t), -1, q) for t in ts], dtype=np.int64)
    inv_k = np.array([pow(int(k), -1, q) for k in ks], dtype=np.int64)
    # powers t^e for e = 0..q-1 by repeated multiplication
    pw = np.ones((q - 1, q), dtype=np.int64)
    ipw = np.ones((q - 1, q), dtype=np.int64)
    for e in range(1, q):
        pw[:, e] = pw[:, e - 1] * ts % q
        ipw[:, e] = ipw[:, e - 1] * inv_t % q
    tk = pw[:, 1:]  # t^k
    # t^(2-k): k = 1 -> t, k = 2 -> 1, k >= 3 -> t^-(k-2)
    t2k = np.empty_like(tk)
    t2k[:, 0] = pw[:, 1]
    t2k[:, 1] = 1
    t2k[:, 2:] = ipw[:, 1 : q - 2]
    r = (tk - t2k) % q * inv_k % q
    return (r @ _basis_weights(p, q)) % q


@dataclass(frozen=True)
class TSolutions:
    pair: PrimePair
    values: frozenset  # residues t in [0, q); 0 stands for q | x
    phi_required: dict  # t -> the phi(t) value forced by the nu-th equation

    @property
    def extra(self) -> frozenset:
        """Solutions outside {0, 1, q-1}."""
        return self.values - {0, 1, self.pair.q - 1}


def solve_t(pair: PrimePair) -> TSolutions:
    """All t in F_q for which some lift of t to Z/q^2 satisfies the congruence, plus 0.

    phi depends on the lift: phi(t + q s) = phi(t) - s, so a residue t is a
    solution iff every equation except the nu-th is homogeneous-zero, with
    phi then fixed by the nu-th one.
    """
    p, q = pair.p, pair.q
    nu, sign = nu_index(pair)
    R = rhs_coefficient_table(pair)
    others = np.delete(R, nu - 1, axis=1)
    ok = ~others.any(axis=1)
    sols = {0}
    phi = {}
    for i in np.flatnonzero(ok):
        t = int(i) + 1
        sols.add(t)
        # -sign * phi = R[t, nu]
        phi[t] = int(-sign * R[i, nu - 1] % q)
    return TSolutions(pair, frozenset(sols), phi)


def solve_t_bruteforce(pair: PrimePair) -> frozenset:
    """Reference path: test every lift phi in F_q with the ring arithmetic."""
    p, q = pair.p, pair.q
    sols = {0}
    for t in range(1, q):
        for s in range(q):
            if ponder_holds(pair, t + q * s):
                sols.add(t)
                break
    return frozenset(sols)


@dataclass(frozen=True)
class LsysCoefficients:
    pair: PrimePair
    t: int
    nu: int
    sign: int
    coefficients: tuple  # entry k-1: coefficient of zeta^k - zeta^-k in rhs - lhs

    @property
    def all_zero(self) -> bool:
        return not any(self.coefficients)


def _lsys_direct(pair: PrimePair, t: int, phi: int, nu: int, sign: int):
    p, q = pair.p, pair.q
    out = []
    for k in range(1, (p - 1) // 2 + 1):
        total = Fraction(0)
        for start in (k, p - k):
            j = 0
            while j * p + start < q:
                e = j * p + start
                term = (t_power(t, e, q) - t_power(t, 2 - e, q)) * pow(e, -1, q)
                total += term if start == k else -term
                j += 1
        if k == nu:
            total += sign * phi
        out.append(int(total) % q)
    return tuple(out)


def lsys_coefficients(pair: PrimePair, t: int) -> LsysCoefficients:
    """Coefficients of the linear system, by extraction and by the explicit sums.

    The sign of the phi term depends on whether q = nu or q = -nu mod p.
    """
    p, q = pair.p, pair.q
    res = ponder_residue(pair, t)
    diff = cycloring.to_shifted_basis(res.rhs - res.lhs)  # entries on zeta^1..zeta^(p-1)
    h = (p - 1) // 2
    extracted = tuple(diff[k - 1] for k in range(1, h + 1))
    if any((diff[k - 1] + diff[p - k - 1]) % q for k in range(1, h + 1)):
        raise AssertionError("difference is not antisymmetric under conjugation")
    nu, sign = nu_index(pair)
    direct = _lsys_direct(pair, t, res.phi, nu, sign)
    if direct != extracted:
        raise AssertionError(f"linear system mismatch for t={t}: {extracted} != {direct}")
    return LsysCoefficients(pair, t, nu, sign, extracted)


class Regime(str, Enum):
    P_GT_Q = "p_gt_q"
    NU_HIGH = "nu_high"
    NU_LOW = "nu_low"
    OUTSIDE = "outside"


def threshold_regime(pair: PrimePair) -> Regime:
    p, q = pair.p, pair.q
    if p > q:
        return Regime.P_GT_Q
    nu, _ = nu_index(pair)
    # exact integer forms of nu > p/4, q < p^2/16, q < p(p-20)/16
    if 4 * nu > p and 16 * q < p * p:
        return Regime.NU_HIGH
    if 4 * nu < p and 16 * q < p * (p - 20):
        return Regime.NU_LOW
    return Regime.OUTSIDE
