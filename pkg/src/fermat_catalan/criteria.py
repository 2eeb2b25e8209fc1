"""Theorem-level evaluators.

Each evaluator re-derives its hypotheses from the lower modules and
reports them as pass/fail/unknown conditions. A conclusion other than
INCONCLUSIVE is only ever emitted when every required condition passes.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum

from . import characters, diophantine, ntcore, tsystem
from .ntcore import PrimePair

THEOREMS = ("main", "main1", "main2", "catg1", "trc")


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"


class Conclusion(str, Enum):
    NO_SOLUTIONS_BELOW_BOUND = "no_solutions_below_bound"
    NO_RATIONAL_SOLUTIONS = "no_rational_solutions"
    CASES_RESTRICTED = "cases_restricted"
    INCONCLUSIVE = "inconclusive"


def _v(flag) -> Verdict:
    if flag is None:
        return Verdict.UNKNOWN
    return Verdict.PASS if flag else Verdict.FAIL


@dataclass(frozen=True)
class Condition:
    name: str
    verdict: Verdict
    witness: str
    required: bool = True


@dataclass
class CriterionReport:
    pair: PrimePair
    theorem: str
    conditions: list
    conclusion: Conclusion = Conclusion.INCONCLUSIVE
    bounds: dict = field(default_factory=dict)  # name -> log10 value
    notes: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return all(c.verdict is Verdict.PASS for c in self.conditions if c.required)

    @property
    def has_unknown(self) -> bool:
        return any(c.verdict is Verdict.UNKNOWN for c in self.conditions)

    def is_sound(self) -> bool:
        if self.conclusion is Conclusion.INCONCLUSIVE:
            return True
        return self.hypotheses_hold and not self.has_unknown

    def to_dict(self) -> dict:
        return {
            "p": self.pair.p,
            "q": self.pair.q,
            "theorem": self.theorem,
            "conditions": [
                {"name": c.name, "verdict": c.verdict.value, "witness": c.witness, "required": c.required}
                for c in self.conditions
            ],
            "conclusion": self.conclusion.value,
            "bounds": {k: str(v) for k, v in self.bounds.items()},
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class EvalConfig:
    h_minus_cutoff: int = characters.DEFAULT_H_MINUS_BOUND
    accept_draft_lemmas: bool = False
    catg1_printed_direction: bool = False  # test "-1 not in <p mod q>" instead
    class_numbers: dict | None = None  # read-only m -> h^-(m), e.g. from the cache


def h_minus_value(m: int, config: EvalConfig):
    """Exact h^-(m), or None beyond the cutoff (and not cached)."""
    if config.class_numbers and m in config.class_numbers:
        return config.class_numbers[m]
    if m > config.h_minus_cutoff:
        return None
    return characters.h_minus(m).h_minus


def _h_condition(name, m, ell, config):
    h = h_minus_value(m, config)
    if h is None:
        return Condition(name, Verdict.UNKNOWN, f"h^-({m}) beyond cutoff {config.h_minus_cutoff}")
    return Condition(name, _v(h % ell != 0), f"h^-({m}) = {h}")


def _finalize(report: CriterionReport, conclusion: Conclusion) -> CriterionReport:
    if report.hypotheses_hold and not report.has_unknown:
        report.conclusion = conclusion
    else:
        report.conclusion = Conclusion.INCONCLUSIVE
    return report


def _gap_condition(pair, name="max{p, p(p-20)/16} > q"):
    thr = ntcore.gap_threshold(pair.p)
    return Condition(name, _v(ntcore.exponent_gap_ok(pair)), f"threshold {thr} vs q = {pair.q}")


def _big_primes_condition(pair):
    return Condition("p, q > 3", _v(pair.p > 3 and pair.q > 3), f"p = {pair.p}, q = {pair.q}")


def _minus_one_condition(g, m, want_in=True):
    inside = ntcore.minus_one_in_cyclic_subgroup(g, m)
    order = ntcore.multiplicative_order(g, m)
    name = f"-1 {'in' if want_in else 'not in'} <{g} mod {m}>"
    return Condition(name, _v(inside == want_in), f"ord = {order}, -1 {'in' if inside else 'not in'} subgroup")


def _wieferich_condition(a_label, base, q, required):
    w = ntcore.is_wieferich(base, q)
    return Condition(
        f"{a_label}^(q-1) != 1 mod q^2",
        _v(not w),
        f"fermat quotient {ntcore.fermat_quotient(base, q)}",
        required,
    )


def _wieferich_conditions(pair, required):
    return [
        _wieferich_condition("2", 2, pair.q, required),
        _wieferich_condition("p", pair.p, pair.q, required),
        _wieferich_condition("(2^(p-1) p^p)", ntcore.case_IIa_base(pair), pair.q, required),
    ]


# --- evaluators --------------------------------------------------------------


def eval_main(pair: PrimePair, config: EvalConfig = EvalConfig()) -> CriterionReport:
    conds = [_gap_condition(pair), _h_condition("q does not divide h_p^-", pair.p, pair.q, config)]
    rep = CriterionReport(pair, "main", conds)
    sols = tsystem.solve_t(pair)
    rep.notes.append(f"solve_t = {sorted(sols.values)}; regime {tsystem.threshold_regime(pair).value}")
    if sols.extra and rep.hypotheses_hold:
        rep.notes.append(f"FINDING: extra t solutions {sorted(sols.extra)}")
    return _finalize(rep, Conclusion.CASES_RESTRICTED)


def eval_main1(pair: PrimePair, config: EvalConfig = EvalConfig()) -> CriterionReport:
    hp = h_minus_value(pair.p, config)
    bw = characters.b_omega(pair)
    if hp is not None and hp % pair.q == 0:
        div, wit = True, f"h^-({pair.p}) = {hp}"
    elif bw.q_divides:
        div, wit = True, f"v_q(B_omega) = {bw.valuation}"
    elif hp is None:
        div, wit = None, f"h^-({pair.p}) beyond cutoff {config.h_minus_cutoff}"
    else:
        extra = "empty character set" if bw.empty else f"v_q(B_omega) = {bw.valuation}"
        div, wit = False, f"h^-({pair.p}) = {hp}; {extra}"
    conds = [
        Condition("q does not divide h(p,q)", _v(None if div is None else not div), wit),
        Condition("p != 1 mod q", _v(pair.p % pair.q != 1), f"p mod q = {pair.p % pair.q}"),
        _gap_condition(pair),
    ]
    rep = CriterionReport(pair, "main1", conds)
    _finalize(rep, Conclusion.NO_SOLUTIONS_BELOW_BOUND)
    if rep.conclusion is not Conclusion.INCONCLUSIVE:
        rep.bounds["lowb"] = diophantine.bound_lowb(pair)
    return rep


def main2_bound_exponent(pair: PrimePair, config: EvalConfig) -> int:
    """k = v_q(x) lower bound feeding the B-part estimate."""
    return 3 if pair.q % pair.p == 1 and config.accept_draft_lemmas else 2


def eval_main2(pair: PrimePair, config: EvalConfig = EvalConfig()) -> CriterionReport:
    conds = [
        _big_primes_condition(pair),
        _minus_one_condition(pair.p, pair.q),
        _gap_condition(pair),
        _h_condition("q does not divide h_pq^-", pair.p * pair.q, pair.q, config),
    ]
    conds += _wieferich_conditions(pair, required=False)
    rep = CriterionReport(pair, "main2", conds)
    if not (rep.hypotheses_hold and not rep.has_unknown):
        rep.conclusion = Conclusion.INCONCLUSIVE
        return rep
    if any(c.verdict is Verdict.FAIL for c in conds if not c.required):
        rep.notes.append("a Wieferich congruence holds; only the case split applies")
        rep.conclusion = Conclusion.CASES_RESTRICTED
        return rep
    k = main2_bound_exponent(pair, config)
    if pair.q % pair.p == 1 and not config.accept_draft_lemmas:
        rep.notes.append("q = 1 mod p: the q^3 | xy strengthening is draft-gated; using the q^2 bound")
    rep.bounds["bound" if k == 2 else "bound1"] = diophantine.bound_main2(pair, k)
    rep.conclusion = Conclusion.NO_SOLUTIONS_BELOW_BOUND
    return rep


def catg1_exponent(pair: PrimePair, config: EvalConfig) -> int:
    return 2 if pair.q % pair.p == 1 and config.accept_draft_lemmas else 1


def catg1_magnitude_exact(pair: PrimePair, C: int, e: int) -> bool:
    """|C| < (1/2) (q^(e(p-1))/p)^(q-2), by integers."""
    p, q = pair.p, pair.q
    return 2 * abs(C) * p ** (q - 2) < q ** (e * (p - 1) * (q - 2))


def catg1_log_bound(pair: PrimePair, e: int) -> Decimal:
    p, q = pair.p, pair.q
    with diophantine._ctx(diophantine.LOG_PRECISION):
        return -Decimal(2).log10() + (q - 2) * (e * (p - 1) * Decimal(q).log10() - Decimal(p).log10())


def catg1_magnitude_log(pair: PrimePair, C: int, e: int) -> bool:
    if C == 0:
        return True
    with diophantine._ctx(diophantine.LOG_PRECISION):
        return Decimal(abs(C)).log10() < catg1_log_bound(pair, e)


def eval_catg1(pair: PrimePair, C: int, config: EvalConfig = EvalConfig()) -> CriterionReport:
    want_in = not config.catg1_printed_direction
    e = catg1_exponent(pair, config)
    conds = [
        _big_primes_condition(pair),
        _minus_one_condition(pair.p, pair.q, want_in),
        _h_condition("q does not divide h_pq^-", pair.p * pair.q, pair.q, config),
        _gap_condition(pair),
    ]
    conds += _wieferich_conditions(pair, required=True)
    conds.append(
        Condition(
            "|C| below bound",
            _v(catg1_magnitude_exact(pair, C, e)),
            f"log10 bound {catg1_log_bound(pair, e):.6f}, |C| = {abs(C)}",
        )
    )
    rep = CriterionReport(pair, "catg1", conds)
    rep.notes.append(f"C = {C}; -1 {'in' if want_in else 'not in'} <p mod q> required")
    _finalize(rep, Conclusion.NO_SOLUTIONS_BELOW_BOUND)
    if rep.conclusion is not Conclusion.INCONCLUSIVE:
        rep.bounds["catg1"] = catg1_log_bound(pair, e)
    return rep


def eval_trc(pair: PrimePair, config: EvalConfig = EvalConfig()) -> CriterionReport:
    p, q = pair.p, pair.q
    sw = pair.swapped()
    m = p * q
    h = h_minus_value(m, config)
    if h is None:
        c2 = Condition("2. (pq, h_pq^-) = 1", Verdict.UNKNOWN, f"h^-({m}) beyond cutoff {config.h_minus_cutoff}")
    else:
        c2 = Condition("2. (pq, h_pq^-) = 1", _v(h % p != 0 and h % q != 0), f"h^-({m}) = {h}")

    def both(a, b):
        return _v(a and b)

    conds = [
        _big_primes_condition(pair),
        Condition(
            "1. -1 in <p mod q> and -1 in <q mod p>",
            both(ntcore.minus_one_in_cyclic_subgroup(p, q), ntcore.minus_one_in_cyclic_subgroup(q, p)),
            f"ord_q(p) = {pair.ord_q_of_p}, ord_p(q) = {pair.ord_p_of_q}",
        ),
        c2,
        Condition(
            "3. 2 is not Wieferich for p nor q",
            both(not ntcore.is_wieferich(2, p), not ntcore.is_wieferich(2, q)),
            f"fermat quotients {ntcore.fermat_quotient(2, p)}, {ntcore.fermat_quotient(2, q)}",
        ),
        Condition(
            "4. (2^(p-1) p^p)^(q-1) != 1 mod q^2 and symmetric",
            both(not ntcore.wieferich_case_IIa(pair), not ntcore.wieferich_case_IIa(sw)),
            f"bases {ntcore.case_IIa_base(pair)} mod q^2, {ntcore.case_IIa_base(sw)} mod p^2",
        ),
        Condition(
            "5. p^(q-1) != 1 mod q^2 and q^(p-1) != 1 mod p^2",
            both(not ntcore.wieferich_case_IIb(pair), not ntcore.wieferich_case_IIb(sw)),
            f"fermat quotients {ntcore.fermat_quotient(p, q)}, {ntcore.fermat_quotient(q, p)}",
        ),
        Condition(
            "6. gap in both orders",
            both(ntcore.exponent_gap_ok(pair), ntcore.exponent_gap_ok(sw)),
            f"thresholds {ntcore.gap_threshold(p)} vs {q}, {ntcore.gap_threshold(q)} vs {p}",
        ),
    ]
    rep = CriterionReport(pair, "trc", conds)
    return _finalize(rep, Conclusion.NO_RATIONAL_SOLUTIONS)


EVALUATORS = {
    "main": eval_main,
    "main1": eval_main1,
    "main2": eval_main2,
    "trc": eval_trc,
}


def evaluate(pair: PrimePair, theorem: str, config: EvalConfig = EvalConfig(), C: int = 1) -> CriterionReport:
    if theorem == "catg1":
        return eval_catg1(pair, C, config)
    try:
        return EVALUATORS[theorem](pair, config)
    except KeyError:
        raise ValueError(f"unknown theorem {theorem!r}") from None


def observe_main2_implies_main(pair: PrimePair, config: EvalConfig = EvalConfig()):
    """If main2's hypotheses hold, check main's; returns a finding string or None."""
    r2 = eval_main2(pair, config)
    if not r2.hypotheses_hold or r2.has_unknown:
        return None
    r = eval_main(pair, config)
    if r.conclusion is Conclusion.INCONCLUSIVE:
        failed = [c.name for c in r.conditions if c.verdict is not Verdict.PASS]
        return f"main2 hypotheses hold for ({pair.p}, {pair.q}) but main fails on {failed}"
    return None
