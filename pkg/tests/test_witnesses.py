import pytest

from descent_sets.combinat import (
    binomial,
    divisors_from_factorization,
    factorize,
    is_essential,
    multiplicative_order,
)
from descent_sets.cyclotomic import divides
from descent_sets.witnesses import (
    RULES,
    cross_check_witnesses,
    exponent_classes_two_digit,
    find_one_digit_witnesses,
    find_three_digit_witnesses,
    find_two_digit_witnesses,
    find_witnesses,
    in_two_digit_class,
    predicted_indices,
    rule_witness,
    rules_explaining,
    theorem_rule_witness,
    witness_holds,
)


def pairs(ws):
    return {(w.s, w.k) for w in ws}


def test_one_digit_examples():
    assert (7, 2) in pairs(find_one_digit_witnesses(3))
    p16 = pairs(find_one_digit_witnesses(4))
    for s in (5, 11, 13, 55, 65, 143, 715):
        assert (s, 7) in p16
    assert (3, 5) in p16
    # the printed k for s = 15 and s = 39 are swapped; the valid pairs are these
    assert (15, 2) in p16 and (39, 5) in p16
    assert (15, 5) not in p16 and (39, 2) not in p16
    s32 = {s for s, k in pairs(find_one_digit_witnesses(5)) if k == 15}
    assert s32 == set(divisors_from_factorization(factorize(3**2 * 5 * 19 * 23 * 29 * 31)))
    assert len(s32) == 96
    assert all(w.m == 4 * w.s for w in find_one_digit_witnesses(4))


def test_two_digit_examples():
    p18 = pairs(find_two_digit_witnesses(18))
    assert {(s, 4) for s in (1, 3, 9, 17, 51, 153)} <= p18
    p20 = pairs(find_two_digit_witnesses(20))
    assert {(s, 6) for s in divisors_from_factorization(factorize(4845))} <= p20
    assert (15, 3) in pairs(find_two_digit_witnesses(10))
    assert all(w.m == 2 * w.s for w in find_two_digit_witnesses(12))
    with pytest.raises(ValueError):
        find_two_digit_witnesses(7)


def test_three_digit_examples():
    assert {(1, 2), (3, 2), (7, 2), (21, 2)} <= pairs(find_three_digit_witnesses(21))
    assert {(7, 3), (11, 3), (77, 3)} <= pairs(find_three_digit_witnesses(22))
    assert (91, 3) in pairs(find_three_digit_witnesses(14))
    with pytest.raises(ValueError):
        find_three_digit_witnesses(12)


def test_every_witness_rechecks():
    for n in range(4, 65):
        if bin(n).count("1") > 3:
            continue
        for w in find_witnesses(n):
            assert witness_holds(w)
            assert binomial(n, w.k) % w.s == 0
            assert not is_essential(w.k, n, 2)


def test_primes_only_beyond_full_lattice():
    ws = find_witnesses(528)
    assert all(factorize(w.s) == {w.s: 1} for w in ws if w.s > 1)
    assert (31, 3) in pairs(ws)


@pytest.mark.parametrize("p,size", [(3, 2), (5, 6), (11, 30), (17, 20)])
def test_exponent_class_sizes(p, size):
    assert len(exponent_classes_two_digit(p)) == size


@pytest.mark.parametrize("p", [7, 31, 127])
def test_mersenne_single_class(p):
    g = multiplicative_order(2, p)
    assert exponent_classes_two_digit(p) == {(g - 1, g - 1)}


def test_exponent_class_well_defined():
    for p in (3, 5, 11, 13, 17, 19):
        g = multiplicative_order(2, p)
        classes = exponent_classes_two_digit(p)
        for a in range(2 * g):
            for b in range(2 * g):
                assert in_two_digit_class(p, a, b) == in_two_digit_class(p, b, a)
                assert in_two_digit_class(p, a, b) == in_two_digit_class(p, a + g, b)
                assert in_two_digit_class(p, a, b) == ((min(a % g, b % g), max(a % g, b % g)) in classes)


def test_exponent_class_means_non_essential():
    for p in (3, 5, 11, 17):
        for a in range(12):
            for b in range(a + 1, 12):
                n = 2**a + 2**b
                if in_two_digit_class(p, a, b):
                    assert not is_essential(2**a, n, p)


@pytest.mark.parametrize(
    "n,rule,p,k",
    [
        (528, "two-digit last/last", 31, 3),
        (1088, "two-digit half/half", 5, 9),
        (32802, "three-digit one/half/half", 11, 7),
        (6, "two-digit zero/half", 3, 5),
        (9, "two-digit zero/half", 3, 7),
        (4108, "three-digit sparse prime", 13, 7),
        (16576, "three-digit g-2/g-2/g-1", 17, 3),
        (14, "three-digit sparse prime", 7, 13),
    ],
)
def test_rule_witnesses(n, rule, p, k):
    w = rule_witness(n, rule, p)
    assert w is not None and w.k == k and w.m == 2 * p and w.rule == rule
    assert rule in rules_explaining(n, p, k)


def test_rule_absent_when_hypotheses_fail():
    assert rule_witness(528, "two-digit half/half", 31) is None
    assert rule_witness(11, "two-digit zero/half", 3) is None
    assert theorem_rule_witness is rule_witness
    assert len(RULES) == 6


def test_cross_check_examples():
    r12 = cross_check_witnesses(12, 250)
    assert set(predicted_indices(12)) >= {6, 10, 22, 110, 18, 66, 198}
    assert r12.passed and set(r12.confirmed) == set(r12.predicted)
    assert 28 in cross_check_witnesses(8).confirmed
    r22 = cross_check_witnesses(22)
    assert {14, 22, 154} <= set(r22.confirmed) and r22.passed


def test_cross_check_all_in_range():
    for n in range(3, 23):
        r = cross_check_witnesses(n)
        assert r.passed, (n, r.failed)
        for m in r.confirmed:
            assert divides(n, m)
