import pytest

from fermat_catalan import criteria as cr
from fermat_catalan import diophantine
from fermat_catalan.criteria import Conclusion, EvalConfig, Verdict
from fermat_catalan.ntcore import PrimePair, odd_primes_between

PRIMES = odd_primes_between(3, 40)
GRID = [PrimePair(p, q) for p in PRIMES for q in PRIMES if p != q]


def verdicts(rep):
    return {c.name: c.verdict for c in rep.conditions}


def test_main_examples():
    r = cr.eval_main(PrimePair(37, 23))
    assert r.conclusion is Conclusion.CASES_RESTRICTED
    assert any(n.startswith("solve_t") for n in r.notes)
    r = cr.eval_main(PrimePair(5, 7))
    assert verdicts(r)["max{p, p(p-20)/16} > q"] is Verdict.FAIL
    assert r.conclusion is Conclusion.INCONCLUSIVE
    r = cr.eval_main(PrimePair(23, 3))
    assert verdicts(r)["q does not divide h_p^-"] is Verdict.FAIL


def test_main_unknown_beyond_cutoff():
    r = cr.eval_main(PrimePair(37, 23), EvalConfig(h_minus_cutoff=30))
    assert r.has_unknown and r.conclusion is Conclusion.INCONCLUSIVE


def test_main1_examples():
    r = cr.eval_main1(PrimePair(7, 5))
    assert r.conclusion is Conclusion.NO_SOLUTIONS_BELOW_BOUND
    assert str(r.bounds["lowb"]).startswith("-2.837")
    r = cr.eval_main1(PrimePair(7, 3))
    assert verdicts(r)["p != 1 mod q"] is Verdict.FAIL
    r = cr.eval_main1(PrimePair(11, 5))
    assert verdicts(r)["q does not divide h(p,q)"] is Verdict.FAIL
    r = cr.eval_main1(PrimePair(37, 5), EvalConfig(h_minus_cutoff=30))
    assert r.conclusion is Conclusion.INCONCLUSIVE


def test_main1_reproducible():
    a, b = cr.eval_main1(PrimePair(7, 3)), cr.eval_main1(PrimePair(7, 3))
    assert a.to_dict() == b.to_dict()


def test_main2_examples():
    r = cr.eval_main2(PrimePair(13, 5))
    assert r.conclusion is Conclusion.NO_SOLUTIONS_BELOW_BOUND
    assert str(r.bounds["bound"]).startswith("21.61")
    # 7^4 = 2401 = 1 mod 25
    r = cr.eval_main2(PrimePair(7, 5))
    assert r.conclusion is Conclusion.CASES_RESTRICTED
    assert verdicts(r)["p^(q-1) != 1 mod q^2"] is Verdict.FAIL
    r = cr.eval_main2(PrimePair(5, 7))
    assert r.conclusion is Conclusion.INCONCLUSIVE


def test_main2_exponent_selection():
    pair = PrimePair(5, 11)  # 11 = 1 mod 5
    assert cr.main2_bound_exponent(pair, EvalConfig()) == 2
    assert cr.main2_bound_exponent(pair, EvalConfig(accept_draft_lemmas=True)) == 3
    assert cr.main2_bound_exponent(PrimePair(13, 5), EvalConfig(accept_draft_lemmas=True)) == 2


def test_main2_wieferich_sweep_below_100():
    hits = []
    for p in odd_primes_between(3, 100):
        for q in odd_primes_between(3, 100):
            if p != q:
                r = cr.eval_main2(PrimePair(p, q), EvalConfig(h_minus_cutoff=0, class_numbers={}))
                hits += [(p, q, c.name) for c in r.conditions if not c.required and c.verdict is Verdict.FAIL]
    oracle = []
    for p in odd_primes_between(3, 100):
        for q in odd_primes_between(3, 100):
            if p != q:
                m = q * q
                base = pow(2, p - 1, m) * pow(p, p, m) % m
                for label, a in (("2", 2), ("p", p), ("(2^(p-1) p^p)", base)):
                    if pow(a, q - 1, m) == 1:
                        oracle.append((p, q, f"{label}^(q-1) != 1 mod q^2"))
    assert hits == oracle
    assert (7, 5, "p^(q-1) != 1 mod q^2") in hits and (11, 71, "p^(q-1) != 1 mod q^2") in hits
    assert not any(name.startswith("2^") for _, _, name in hits)


def test_catg1():
    r = cr.eval_catg1(PrimePair(13, 5), 1)
    assert r.conclusion is Conclusion.NO_SOLUTIONS_BELOW_BOUND
    assert str(r.bounds["catg1"]).startswith("21.52")
    r = cr.eval_catg1(PrimePair(13, 5), 1, EvalConfig(catg1_printed_direction=True))
    assert r.conclusion is Conclusion.INCONCLUSIVE
    r = cr.eval_catg1(PrimePair(13, 5), 10**30)
    assert verdicts(r)["|C| below bound"] is Verdict.FAIL


def test_catg1_wieferich_failure():
    r = cr.eval_catg1(PrimePair(5, 1093), 1)
    assert verdicts(r)["2^(q-1) != 1 mod q^2"] is Verdict.FAIL


@pytest.mark.parametrize("pair", GRID[:60])
def test_catg1_log_vs_exact(pair):
    for e in (1, 2):
        bound = cr.catg1_log_bound(pair, e)
        for C in (0, 1, 7, 10**5, 10**40, 10**200):
            exact = cr.catg1_magnitude_exact(pair, C, e)
            assert cr.catg1_magnitude_log(pair, C, e) == exact


def test_trc_examples():
    r = cr.eval_trc(PrimePair(5, 7))
    names = verdicts(r)
    assert names["6. gap in both orders"] is Verdict.FAIL
    r = cr.eval_trc(PrimePair(5, 1093))
    assert verdicts(r)["3. 2 is not Wieferich for p nor q"] is Verdict.FAIL
    r = cr.eval_trc(PrimePair(41, 47))
    assert verdicts(r)["2. (pq, h_pq^-) = 1"] is Verdict.UNKNOWN
    assert r.conclusion is Conclusion.INCONCLUSIVE


@pytest.mark.parametrize("pair", GRID)
def test_trc_symmetric(pair):
    a, b = cr.eval_trc(pair), cr.eval_trc(pair.swapped())
    assert a.conclusion == b.conclusion
    assert [c.verdict for c in a.conditions] == [c.verdict for c in b.conditions]


@pytest.mark.parametrize("theorem", cr.THEOREMS)
def test_soundness_over_grid(theorem):
    for pair in GRID:
        rep = cr.evaluate(pair, theorem)
        assert rep.is_sound()
        if rep.has_unknown:
            assert rep.conclusion is Conclusion.INCONCLUSIVE


def test_main1_consistent_with_search():
    for p in odd_primes_between(3, 13):
        for q in odd_primes_between(3, 13):
            if p == q:
                continue
            pair = PrimePair(p, q)
            rep = cr.eval_main1(pair)
            if rep.conclusion is Conclusion.NO_SOLUTIONS_BELOW_BOUND:
                h = int(min(200, max(1, 10 ** min(float(rep.bounds["lowb"]), 3))))
                assert diophantine.search_fc(pair, h).solutions == ()


def test_main2_implies_main_observation():
    findings = [f for pair in GRID if (f := cr.observe_main2_implies_main(pair))]
    assert all(isinstance(f, str) and "main fails" in f for f in findings)


def test_unknown_theorem():
    with pytest.raises(ValueError):
        cr.evaluate(PrimePair(5, 7), "nope")


def test_report_dict_shape():
    d = cr.eval_trc(PrimePair(7, 5)).to_dict()
    assert set(d) == {"p", "q", "theorem", "conditions", "conclusion", "bounds", "notes"}
    assert all(set(c) == {"name", "verdict", "witness", "required"} for c in d["conditions"])
