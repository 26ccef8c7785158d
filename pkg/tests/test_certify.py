import json

import pytest

from terracert.certify import (AH_EXCEPTIONS, CertifyConfig, Defectivity,
                               TheoremId, Verdict, certify, certify_ip1, certify_ip3,
                               certify_ip5, certify_ipx, closed_form_e1, closed_form_ii2,
                               closed_form_ip4, e1_kmax, ii1_bound, ii2_bound, ii2_kmax,
                               max_k_sweep, numeric_condition, unbalanced_check,
                               veronese_defectivity)
from terracert.terracini import Witness, WitnessProvider, secant_dim_witness
from terracert.varieties import GaussianMoment1D, Segre, SegreVeronese, Veronese, ambient

STRONG = Verdict.CERTIFIED_NOT_WEAKLY_DEFECTIVE


@pytest.fixture(scope="module")
def prov():
    return WitnessProvider()


class Deficient:
    """Witness stub reporting a rank deficit at every level above ``from_level``."""

    def __init__(self, from_level=0):
        self.from_level = from_level
        self.calls = []

    def __call__(self, spec, level):
        self.calls.append(level)
        a = ambient(spec)
        exp = min(level * (a.n + 1), a.N)
        bad = level > self.from_level
        return Witness(spec, level, 0, 0, exp - bad, exp, not bad, 3)


def test_numeric_condition_examples(prov):
    nc = numeric_condition(Segre([1] * 7), 9, prov)
    assert nc.holds and nc.level == 15 and nc.expected_dim == 119 and nc.r == 127
    assert nc.witness.rank == 120
    stub = Deficient()
    nc = numeric_condition(Segre(2, 2, 5), 5, stub)
    assert not nc.holds and nc.level == 13 and "level 13" in nc.reason
    assert stub.calls == []
    nc = numeric_condition(Veronese(2, 4), 4, stub)
    assert not nc.holds and stub.calls == []


def test_numeric_condition_budget(prov):
    nc = numeric_condition(Segre([1] * 7), 9, prov, max_rows=100)
    assert not nc.holds and nc.witness is None and "budget" in nc.reason


def test_ip1(prov):
    c = certify_ip1(Veronese(2, 5), 3, prov)
    assert c.verdict is STRONG and c.theorem is TheoremId.IP1 and c.witness.achieved
    c = certify_ip1(Segre(1, 1, 1), 1, prov)
    assert c.verdict is Verdict.INCONCLUSIVE and "uniruled" in c.reasons[0]
    c = certify_ip1(GaussianMoment1D(20), 5, prov)
    assert c.verdict is STRONG and c.witness.level == 6 and c.witness.rank == 18
    assert certify_ip1(GaussianMoment1D(3), 1, prov).verdict is Verdict.INCONCLUSIVE


def test_ip3(prov):
    c = certify_ip3(Segre([1] * 7), 9, prov)
    assert c.verdict is STRONG and c.theorem is TheoremId.IP3
    c = certify_ip3(Segre(2, 2, 5), 5, prov)
    assert c.verdict is Verdict.INCONCLUSIVE
    assert any("[5]" in r for r in c.reasons) and any("level 13" in r for r in c.reasons)
    assert certify_ip3(Segre(3, 3), 1, prov).verdict is (
        STRONG if numeric_condition(Segre(3, 3), 1, prov).holds else Verdict.INCONCLUSIVE)
    assert certify_ip3(Veronese(2, 3), 1, prov).reasons == ["IP3: wrong family (Segre only)"]
    # lone factor, numeric condition satisfied
    c = certify_ip3(Segre(1, 1, 2, 3, 3), 1, prov)
    assert c.verdict is Verdict.INCONCLUSIVE and c.theorem is None


def test_ip5(prov):
    c = certify_ip5(SegreVeronese((1, 1), (3, 3)), 2, prov)
    assert c.verdict is STRONG and c.theorem is TheoremId.IP5
    c = certify_ip5(SegreVeronese((2, 2, 3), (1, 1, 2)), 1, prov)
    assert c.verdict is (STRONG if numeric_condition(
        SegreVeronese((2, 2, 3), (1, 1, 2)), 1, prov).holds else Verdict.INCONCLUSIVE)
    assert c.verdict is STRONG
    c = certify_ip5(SegreVeronese((2, 3), (1, 2)), 1, prov)
    assert c.verdict is Verdict.INCONCLUSIVE and "partner" in c.reasons[0]


def test_ipx(prov):
    c = certify_ipx(Segre([1] * 7), 9, prov)
    assert c.verdict is Verdict.CERTIFIED_IDENTIFIABLE and c.witness.level == 15
    assert certify_ipx(Segre(2, 2, 5), 5, prov).verdict is Verdict.INCONCLUSIVE
    c = certify_ipx(Segre(1, 1, 1, 1, 1), 1, prov)
    assert c.certified and c.witness.level == 5 and c.witness.rank == 30
    assert c.bounds["expected_dim"] == 29 < c.bounds["r"] == 31


@pytest.mark.parametrize("s, k", [(5, 1), (7, 9), (10, 84)])
def test_closed_form_ip4(s, k):
    assert closed_form_ip4(s) == k


def test_closed_form_ip4_matches_inequality():
    for s in range(5, 13):
        ks = [k for k in range(1, 2**s) if (k + s - 1) * (s + 1) <= 2**s - 1]
        assert closed_form_ip4(s) == max(ks, default=0)
        # same as the rank-condition arithmetic (k+n-1)(n+1)-1 < r
        ks2 = [k for k in range(1, 2**s) if (k + s - 1) * (s + 1) - 1 < 2**s - 1]
        assert ks == ks2
    with pytest.raises(ValueError):
        closed_form_ip4(4)


@pytest.mark.parametrize("m, s, kmax", [(3, 4, 5), (2, 4, 1), (2, 5, 12)])
def test_closed_form_e1(m, s, kmax):
    assert e1_kmax(m, s) == kmax
    assert closed_form_e1(m, s, kmax) and not closed_form_e1(m, s, kmax + 1)


def test_closed_form_e1_three_factors():
    # only the refinement 3m(k+3m-1) < (m+1)^3 can fire for s = 3
    for m in range(2, 12):
        want = max((k for k in range(1, (m + 1) ** 3)
                    if 3 * m * (k + 3 * m - 1) < (m + 1) ** 3), default=0)
        assert e1_kmax(m, 3) >= want
    assert e1_kmax(6, 3) == 2


def test_unbalanced():
    assert unbalanced_check((6, 2, 2))
    assert not unbalanced_check((5, 2, 2))
    assert not unbalanced_check((1, 1, 1))
    assert unbalanced_check((2, 6, 2))


def test_ii2():
    assert ii2_bound((1, 1), (3, 3), (2, 2), (1, 1)) == 4
    assert ii2_bound((2,), (4,), (3,), (1,)) == 3
    assert closed_form_ii2((1, 1), (3, 3), (2, 2), (1, 1), 4)
    assert not closed_form_ii2((1, 1), (3, 3), (2, 2), (1, 1), 5)
    with pytest.raises(ValueError):
        ii2_bound((1, 1), (3, 3), (3, 3), (0, 0))
    with pytest.raises(ValueError):
        ii2_bound((1,), (3,), (0,), (3,))
    assert ii2_kmax((1, 1), (3, 3))[0] == 4
    assert ii2_kmax((2,), (4,)) == (3, ((3,), (1,)))


def test_ii1_bound(rng):
    assert ii1_bound(4, 10, 2) == 4
    assert ii1_bound(100, 5, 2) == 1
    for n in range(1, 6):
        assert ii1_bound(1, n + 3, n) == 1
    for _ in range(100):
        h, v, n = rng.randint(1, 500), rng.randint(1, 500), rng.randint(1, 50)
        assert ii1_bound(h, v, n) == max(0, min(h, v - n - 2))


@pytest.mark.parametrize("n, d, k, expect", [
    (2, 4, 5, Defectivity.KNOWN_DEFECTIVE),
    (3, 3, 5, Defectivity.NON_DEFECTIVE),
    (5, 2, 3, Defectivity.KNOWN_DEFECTIVE),
    (5, 2, 6, Defectivity.NON_DEFECTIVE),
    (4, 4, 14, Defectivity.KNOWN_DEFECTIVE),
])
def test_veronese_defectivity(n, d, k, expect):
    assert veronese_defectivity(n, d, k) is expect
    w = secant_dim_witness(Veronese(n, d), k)
    assert w.achieved == (expect is Defectivity.NON_DEFECTIVE)


def test_veronese_table_reproduced_by_witness():
    for n, d, k in AH_EXCEPTIONS:
        w = secant_dim_witness(Veronese(n, d), k)
        assert not w.achieved and w.deficit >= 1
    with pytest.raises(ValueError):
        veronese_defectivity(2, 1, 1)


def test_certify_examples():
    c = certify(Segre(2, 2, 5), 5)
    assert c.verdict is Verdict.INCONCLUSIVE
    assert any("numeric condition fails at level 13" in r for r in c.reasons)
    assert any("almost-unbalanced diagnostic" in r for r in c.reasons)
    c = certify(SegreVeronese((1, 1), (3, 3)), 2)
    assert c.verdict is STRONG and c.theorem is TheoremId.IP1
    assert c.witness.level == 3 and c.bounds["expected_dim"] == 8
    c = certify(Segre(1, 1, 1, 1), 3)
    assert c.verdict is Verdict.OBSERVED_DEFECTIVE and c.probabilistic
    assert (c.witness.level, c.witness.rank, c.bounds["deficit"]) == (3, 14, 1)


def test_certify_literature_paths_when_witnesses_skipped():
    cfg = CertifyConfig(max_witness_rows=10)
    c = certify(Segre([1] * 7), 9, cfg)
    assert c.theorem is TheoremId.IP4_CLOSED and c.evidence == "literature-backed"
    c = certify(Segre(3, 3, 3, 3), 5, cfg)
    assert c.theorem is TheoremId.E1_CLOSED
    assert not certify(Segre(3, 3, 3, 3), 6, cfg).certified


def test_certify_char_free():
    c = certify(SegreVeronese((1, 1), (3, 3)), 4, CertifyConfig(char_free=True))
    assert c.theorem is TheoremId.II2_CLOSED and c.evidence == "char-free"
    assert c.bounds["ii2_kmax"] == c.bounds["ii1_bound"] == 4 and c.witness is None
    c = certify(SegreVeronese((1, 1), (3, 3)), 5, CertifyConfig(char_free=True))
    assert c.verdict is Verdict.INCONCLUSIVE
    assert not certify(Segre(1, 1, 1), 1, CertifyConfig(char_free=True)).certified


SOUNDNESS_CASES = [(Segre([1] * 7), 9), (Segre(1, 1, 1, 1, 1), 1), (Segre([1] * 6), 3),
                   (Veronese(2, 5), 3), (GaussianMoment1D(20), 5),
                   (SegreVeronese((1, 1), (3, 3)), 2), (SegreVeronese((2, 2, 3), (1, 1, 2)), 1)]


def _witness_free(c):
    return c.witness is None and c.theorem is TheoremId.II2_CLOSED


@pytest.mark.parametrize("spec, k", SOUNDNESS_CASES, ids=lambda x: str(x))
def test_soundness_gate(spec, k):
    assert certify(spec, k).certified
    has_ii2 = isinstance(spec, SegreVeronese) and max(spec.degs) >= 2
    # only the characteristic-free closed form may survive a deficient provider
    c = certify(spec, k, provider=Deficient(from_level=k))
    assert c.verdict is Verdict.INCONCLUSIVE or has_ii2 and _witness_free(c), c
    c = certify(spec, k, provider=Deficient())
    assert not c.certified or has_ii2 and _witness_free(c), c
    # with witnesses priced out, anything certified must not claim witness evidence
    c = certify(spec, k, CertifyConfig(max_witness_rows=10), Deficient(from_level=k))
    assert not c.certified or c.witness is None and c.evidence != "witness-backed"


def test_strength_order_on_segre_matrix(prov):
    matrix = [Segre(*d) for d in [(1,) * 5, (1,) * 6, (2, 2, 2, 2), (1, 1, 2, 2), (3, 3, 3),
                                  (2, 2, 2, 2, 2), (1, 1, 1, 1, 2, 2), (4, 4, 4)]]
    for spec in matrix:
        for k in range(1, 12):
            strong = [certify_ip1(spec, k, prov), certify_ip3(spec, k, prov)]
            if any(c.certified for c in strong):
                assert certify_ipx(spec, k, prov).certified


def test_sweeps():
    out = max_k_sweep(Segre([1] * 7))
    assert [c.certified for c in out[:9]] == [True] * 9
    assert out[9].k == 10 and out[9].verdict is Verdict.INCONCLUSIVE
    out = max_k_sweep(GaussianMoment1D(20))
    assert [c.k for c in out if c.certified] == [1, 2, 3, 4, 5]
    assert all(c.theorem is TheoremId.IP1 for c in out if c.certified)
    out = max_k_sweep(Veronese(2, 4))
    assert out[-1].k == 5 and out[-1].verdict is Verdict.OBSERVED_DEFECTIVE


def test_sweep_backfills_downward():
    class Flaky(WitnessProvider):
        def __call__(self, spec, level):
            w = super().__call__(spec, level)
            if level == 8:
                return Witness(spec, level, w.prime, w.seed, w.expected - 1, w.expected,
                               False, 3)
            return w

    out = max_k_sweep(Segre([1] * 7), provider=Flaky())
    assert [c.certified for c in out] == [True] * 3
    assert out[1].evidence == "implied" and out[1].witness.level == 9
    assert out[0].evidence == "witness-backed"


def test_certificate_record_is_exact_and_deterministic():
    a = certify(Segre([1] * 7), 9, CertifyConfig(seed=3))
    b = certify(Segre([1] * 7), 9, CertifyConfig(seed=3))
    assert a.to_json() == b.to_json()
    rec = json.loads(a.to_json())
    assert set(rec) >= {"spec_string", "k", "verdict", "theorem", "witness", "bounds",
                        "reasons", "tool_version", "config"}
    assert set(rec["witness"]) >= {"prime", "seed", "level", "rank", "expected", "retries"}
    assert rec["config"]["prime_list"][0] == a.witness.prime

    def no_floats(x):
        if isinstance(x, dict):
            return all(no_floats(v) for v in x.values())
        if isinstance(x, list):
            return all(no_floats(v) for v in x)
        return not isinstance(x, float)

    assert no_floats(rec)


def test_gauss_discrepancy_surfaced():
    c = certify(GaussianMoment1D(20), 6)
    assert not c.certified
    assert any("2(k+1) < 20 only" in r for r in c.reasons)
    assert any("2(k+1)" in r for r in certify(GaussianMoment1D(20), 2).reasons)
