from fractions import Fraction

import numpy as np
import pytest

from descent_sets.beta import build_beta_table, build_residue_table, rho
from descent_sets.cdindex import (
    AbPolynomial,
    CdPolynomial,
    NotCdPolynomialError,
    ab_index,
    ab_to_cd,
    all_word_values,
    cd_index,
    cd_words,
    expand_cd_to_ab,
    functional_L,
    functional_root,
    iter_middle_level_values,
    middle_level_closed_form,
    signature,
    verify_phi2_double_factor,
    verify_phi2p_double_factor_2q,
    verify_phi2p_factor_q_plus_1,
    weight,
)
from descent_sets.cyclotomic import CyclotomicInt


def ab(poly_str_terms, degree):
    out = {}
    for word, c in poly_str_terms.items():
        out[sum(1 << i for i, ch in enumerate(word) if ch == "b")] = c
    return AbPolynomial(degree, out)


def test_ab_index_examples():
    assert str(ab_index(3)) == "1·aa + 2·ab + 2·ba + 1·bb"
    assert str(ab_index(2)) == "1·a + 1·b"
    assert [ab_index(4)[k] for k in range(8)] == [1, 3, 5, 3, 3, 5, 3, 1]


def test_expand_examples():
    assert expand_cd_to_ab("c") == ab({"a": 1, "b": 1}, 1)
    assert expand_cd_to_ab("cd") == ab({"aab": 1, "aba": 1, "bab": 1, "bba": 1}, 3)
    for k in range(1, 6):
        poly = expand_cd_to_ab("d" * k)
        assert len(poly.terms) == 2**k
        assert all(bin(mask).count("1") == k for mask in poly.terms)


def test_cd_index_examples():
    assert str(cd_index(3)) == "c^2 + d"
    assert str(cd_index(4)) == "c^3 + 2cd + 2dc"
    assert cd_index(4)["cd"] == 2


def test_not_cd_polynomial():
    with pytest.raises(NotCdPolynomialError):
        ab_to_cd(ab({"a": 1}, 1))


def test_words_and_signatures():
    for w in range(1, 14):
        words = cd_words(w)
        assert all(weight(x) == w for x in words)
        assert len(set(signature(x) for x in words)) == len(words)
    assert cd_words(4) == ("cccc", "ccd", "cdc", "dcc", "dd")
    with pytest.raises(ValueError):
        weight("cab")


def test_round_trip_and_positivity():
    for n in range(1, 13):
        psi = ab_index(n)
        cd = ab_to_cd(psi)
        assert cd.to_ab() == psi
        assert all(c > 0 for c in cd.terms.values())


def test_cd_polynomial_validation():
    with pytest.raises(ValueError):
        CdPolynomial(3, {"cc": 1})
    assert str(CdPolynomial(2, {"d": -1, "cc": 3})) == "3c^2 - d"


def brute_functional(word, table, m):
    counts = [0] * m
    for mask in expand_cd_to_ab(word).terms:
        counts[int(table.values[mask]) % m] += 1
    return CyclotomicInt.from_exponent_counts(m, counts)


def test_functional_root_against_direct_sum():
    for n, m in [(6, 6), (7, 4), (8, 10), (9, 18)]:
        table = build_beta_table(n)
        words, vals = all_word_values(table, m)
        for i, w in enumerate(words):
            want = brute_functional(w, table, m)
            assert functional_root(w, table, m) == want
            assert tuple(int(x) for x in vals[i]) == want.coeffs


def test_functional_root_examples():
    t6 = build_beta_table(6)
    assert functional_root(ab_index(t6), t6, 6).is_zero()
    assert functional_root(cd_index(t6), t6, 6).is_zero()
    t5 = build_beta_table(5)
    single = AbPolynomial(4, {0: 1})
    assert functional_root(single, t5, 7) == CyclotomicInt.root_power(7, 1)
    with pytest.raises(ValueError):
        functional_root("cc", t5, 7)


def test_functional_L_examples():
    assert functional_L("cd") == -4
    assert functional_L("ccc") == -8
    for w in cd_words(5):
        assert functional_L(w) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_middle_level_formula(n):
    for word, direct, closed in iter_middle_level_values(n):
        assert direct == closed, word
        j = word.count("d")
        assert closed == Fraction(2 ** (2 * n - j - 1)) * (1 - 2 * rho(n))


def test_phi2_double_factor():
    for n2 in (6, 10, 12, 14):
        r = verify_phi2_double_factor(n2)
        assert r.passed and r.skipped is None, r.first_failure()
    vac = verify_phi2_double_factor(8)
    assert vac.skipped and vac.passed
    with pytest.raises(ValueError):
        verify_phi2_double_factor(7)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_phi2p_double_factor_2q(q):
    r = verify_phi2p_double_factor_2q(q)
    assert r.passed, r.first_failure()
    assert r.skipped is None
    names = {c.name for c in r.checks}
    assert "Phi_2p multiplicity >= 2" in names


@pytest.mark.parametrize("q", [5, 9, 11, 13])
def test_phi2p_factor_q_plus_1(q):
    r = verify_phi2p_factor_q_plus_1(q)
    assert r.passed, r.first_failure()
    mult = next(c for c in r.checks if c.name == "Phi_2p multiplicity >= 2")
    assert mult.asserted == (q % 4 == 3)


@pytest.mark.parametrize("q", [3, 7])
def test_phi2p_factor_q_plus_1_literal_hypothesis_gap(q):
    r = verify_phi2p_factor_q_plus_1(q)
    assert r.skipped is not None
    assert any("discrepancy" in note for note in r.notes)
    assert r.passed


def test_verifier_rejects_non_prime_power():
    with pytest.raises(ValueError):
        verify_phi2p_double_factor_2q(6)
    with pytest.raises(ValueError):
        verify_phi2p_factor_q_plus_1(15)


def test_report_json_shape():
    d = verify_phi2p_double_factor_2q(3).as_dict()
    assert set(d) == {"statement", "params", "passed", "skipped", "notes", "checks"}
    assert all(set(c) == {"name", "passed", "asserted", "detail"} for c in d["checks"])


def test_middle_level_closed_form_values():
    assert middle_level_closed_form("c") == functional_L("c") == -2
    assert middle_level_closed_form("ccc") == -8
