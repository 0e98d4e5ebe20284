"""Acceptance criteria, one test per criterion (or sub-criterion).

Run alone with ``pytest tests/test_acceptance.py -v``; a summary section
lists one PASS/FAIL line per criterion.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from descent_sets import expected, tables
from descent_sets.beta import build_beta_table, rho, verify_macmahon
from descent_sets.cdindex import (
    ab_index,
    ab_to_cd,
    cd_index,
    iter_middle_level_values,
    verify_phi2_double_factor,
    verify_phi2p_double_factor_2q,
    verify_phi2p_factor_q_plus_1,
)
from descent_sets.combinat import euler_zigzag, mask_from_elements
from descent_sets.cyclotomic import divides, multiplicity_at_least_2
from descent_sets.delta import verify_euler_parity
from descent_sets.qsym import beta_table_mod_p_via_qsym, verify_closed_form, verify_eleven_mod_3
from descent_sets.witnesses import cross_check_witnesses, exponent_classes_two_digit, find_witnesses
from oracles import brute_force_beta

criterion = pytest.mark.criterion


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@criterion("1 rho(1), rho(3), rho(7), rho(15) exact, < 1 s")
def test_c1_rho():
    with Timer() as t:
        got = {n: rho(n) for n in (1, 3, 7, 15)}
    assert got == {1: 1, 3: Fraction(1, 2), 7: Fraction(1, 2), 15: Fraction(29, 2**6)}
    assert t.elapsed < 1


@criterion("1 long run: rho(31) = 3991/2^13 (bit-packed mod 2)")
def test_c1_rho_31():
    assert rho(31) == Fraction(3991, 2**13)


@criterion("2 factors for 3 <= n <= 16, m_max = 3000, < 10 min")
def test_c2_table6():
    with Timer() as t:
        res = tables.verify_table6(3, 16, 3000)
    assert res.passed, res.problems
    rows = {r["n"]: r for r in res.rows}
    assert "Φ_2860" in rows[16]["factors"]
    assert rows[14]["factors"].count("(unexplained)") == 2
    assert t.elapsed < 600


@criterion("2 stretch: factors for 17 <= n <= 20, m_max = 10^4")
def test_c2_table6_stretch():
    res = tables.verify_table6(17, 20, 10_000)
    assert res.passed, res.problems
    row20 = res.rows[-1]["factors"].split(", ")
    assert len(row20) == 16 and row20[-1] == "Φ_9690"


@criterion("3 max beta = euler_zigzag(n) for 3 <= n <= 16, exact degrees through 13")
def test_c3_degrees():
    for n in range(3, 17):
        degree = build_beta_table(n).max()
        assert degree == euler_zigzag(n)
        if n in expected.DEGREES_EXACT:
            assert degree == expected.DEGREES_EXACT[n]
    assert [expected.DEGREES_EXACT[n] for n in range(3, 14)] == [
        2, 5, 16, 61, 272, 1385, 7936, 50521, 353792, 2702765, 22368256
    ]


@criterion("4 table equals permutation enumeration for n <= 10, < 30 s")
def test_c4_brute_force():
    with Timer() as t:
        for n in range(1, 11):
            assert np.array_equal(build_beta_table(n).values.astype(np.int64), brute_force_beta(n))
    assert t.elapsed < 30


@criterion("5 MacMahon identity for all (S, k), n <= 12, < 1 min")
def test_c5_macmahon():
    with Timer() as t:
        for n in range(1, 13):
            assert verify_macmahon(n).passed
    assert t.elapsed < 60


@criterion("6 beta mod 2 = face-count parity, n in {6, 11, 12, 16}, < 1 min")
def test_c6_parity():
    with Timer() as t:
        for n in (6, 11, 12, 16):
            r = verify_euler_parity(n)
            assert r.passed, (n, r.counterexample)
    assert t.elapsed < 60


@criterion("7 qsym route, congruence families, closed forms at q = 9, < 2 min")
def test_c7_qsym():
    with Timer() as t:
        for n, p in [(11, 3), (12, 3), (14, 7), (10, 5)]:
            assert np.array_equal(beta_table_mod_p_via_qsym(n, p), build_beta_table(n).residues(p))
        fam = verify_eleven_mod_3(build_beta_table(11).values)
        assert fam.passed and fam.checked == 4 * 64
        two_q = verify_closed_form(9, "2q")
        assert two_q.passed and two_q.checked == 131072
        assert verify_closed_form(9, "q+1").passed
    assert t.elapsed < 120


@criterion("8 cd-index values, ab/cd round trip n <= 12, middle-level formula n <= 6, < 2 min")
def test_c8_cd_index():
    with Timer() as t:
        assert str(cd_index(3)) == "c^2 + d"
        assert str(cd_index(4)) == "c^3 + 2cd + 2dc"
        for n in range(1, 13):
            psi = ab_index(n)
            assert ab_to_cd(psi).to_ab() == psi
        for n in range(2, 7):
            for word, direct, closed in iter_middle_level_values(n):
                assert direct == closed, (n, word)
    assert t.elapsed < 120


@criterion("9 double factors: Phi_2, Phi_2p in Q_2q, Phi_2p in Q_q+1, < 15 min")
def test_c9_double_factors():
    with Timer() as t:
        for n in (6, 10, 12, 14, 18, 20, 22):
            table = build_beta_table(n)
            if divides(table, 2):
                assert multiplicity_at_least_2(table, 2), n
                assert verify_phi2_double_factor(n).passed
        for q, m in [(3, 6), (5, 10), (7, 14), (9, 6), (11, 22)]:
            r = verify_phi2p_double_factor_2q(q)
            assert r.passed and r.params["m"] == m, r.first_failure()
            assert multiplicity_at_least_2(2 * q, m)
        for q, double in [(11, True), (13, False), (17, False), (19, True)]:
            r = verify_phi2p_factor_q_plus_1(q)
            assert r.passed, r.first_failure()
            m = r.params["m"]
            assert divides(q + 1, m)
            assert multiplicity_at_least_2(q + 1, m) is double
    assert t.elapsed < 900


@criterion("10 Phi_6 divides Q_11 by the exact root test, < 1 s after build")
def test_c10_phi6_q11():
    table = build_beta_table(11)
    with Timer() as t:
        assert divides(table, 6)
    assert t.elapsed < 1


def _reconstructed(ns):
    return {(w.n, w.s, w.k) for n in ns for w in find_witnesses(n)}


@criterion("11 finder: printed rows (with the two corrected one-digit rows), exponent classes, cross-check n <= 22")
def test_c11_finder():
    with Timer() as t:
        one = expected.expand_rows(expected.ONE_DIGIT_ROWS)
        one = (one - set(expected.ONE_DIGIT_ERRATA)) | set(expected.ONE_DIGIT_ERRATA.values())
        assert one <= _reconstructed([4, 8, 16, 32])
        two = expected.expand_rows(expected.TWO_DIGIT_ROWS)
        assert two <= _reconstructed({r[0] for r in two})
        three = expected.expand_rows(expected.THREE_DIGIT_ROWS) - expected.THREE_DIGIT_SPECIAL
        assert three <= _reconstructed({r[0] for r in three})
        assert tables.table5().passed  # includes the special mod-3 row
        for spot in [(8, 7, 2), (18, 153, 4), (20, 4845, 6), (14, 91, 3), (21, 21, 2), (22, 77, 3),
                     (528, 31, 3), (1088, 5, 9), (32802, 11, 7)]:
            assert spot in one | two | three
        for p, (g, classes) in expected.EXPONENT_CLASSES.items():
            assert exponent_classes_two_digit(p) == classes
        for n in range(3, 23):
            assert cross_check_witnesses(n).passed, n
    assert t.elapsed < 300


@criterion("11 literal: one-digit rows exactly as printed")
@pytest.mark.xfail(strict=True, reason="two printed one-digit rows have swapped k; 15 does not divide C(16,5), 39 does not divide C(16,2)")
def test_c11_printed_one_digit_rows_literal():
    printed = expected.expand_rows(expected.ONE_DIGIT_ROWS)
    assert math.comb(16, 5) % 15 != 0 and math.comb(16, 2) % 39 != 0
    assert printed <= _reconstructed([4, 8, 16, 32])


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
