"""Published reference values, embedded so verification needs no network."""

from __future__ import annotations

from fractions import Fraction

# proportion of odd beta_n(S) for n = 2^c - 1
RHO = {
    1: Fraction(1),
    3: Fraction(1, 2),
    7: Fraction(1, 2),
    15: Fraction(29, 2**6),
    31: Fraction(3991, 2**13),
}
RHO_LONG_RUN = {31}

# degree of Q_n(t): exact through 13, four significant digits after that
DEGREES_EXACT = {
    3: 2, 4: 5, 5: 16, 6: 61, 7: 272, 8: 1385, 9: 7936, 10: 50521,
    11: 353792, 12: 2702765, 13: 22368256,
}
DEGREES_APPROX = {
    14: "1.993e8", 15: "1.904e9", 16: "1.939e10", 17: "2.099e11", 18: "2.405e12",
    19: "2.909e13", 20: "3.704e14", 21: "4.951e15", 22: "6.935e16", 23: "1.015e18",
}

# cyclotomic factors of Q_n(t): index -> multiplicity (2 means "2+")
FACTORS: dict[int, dict[int, int]] = {
    3: {2: 1},
    4: {4: 2},
    5: {2: 2, 10: 1},
    6: {2: 2, 6: 2, 10: 1},
    7: {2: 1},
    8: {4: 2, 28: 1},
    9: {2: 2, 6: 1, 18: 1},
    10: {2: 2, 6: 1, 10: 2, 18: 1, 30: 1},
    11: {2: 1, 6: 1, 22: 1},
    12: {2: 2, 6: 1, 10: 1, 18: 1, 22: 2, 66: 1, 110: 1, 198: 1},
    13: {2: 1, 26: 1},
    14: {2: 2, 4: 1, 14: 2, 26: 1, 28: 1, 182: 1},
    15: {},
    16: {4: 2, 12: 1, 20: 1, 44: 1, 52: 1, 60: 1, 156: 1, 220: 1, 260: 1, 572: 1, 2860: 1},
    17: {2: 2, 34: 1},
    18: {2: 2, 6: 2, 18: 1, 34: 1, 102: 1, 306: 1},
    19: {2: 1, 38: 1},
    20: {
        2: 2, 6: 1, 10: 1, 30: 1, 34: 1, 38: 2, 102: 1, 114: 1, 170: 1, 190: 1,
        510: 1, 570: 1, 646: 1, 1938: 1, 3230: 1, 9690: 1,
    },
    21: {2: 1, 6: 1, 14: 1, 42: 1},
    22: {2: 2, 14: 1, 22: 2, 154: 1},
    23: {},
}
UNEXPLAINED = {14: {4, 28}}

# one binary digit: (n, s values, k)
ONE_DIGIT_ROWS = [
    (4, [1], 1),
    (8, [1], 1),
    (8, [7], 2),
    (16, [1], 1),
    (16, [5, 11, 13, 55, 65, 143, 715], 7),
    (16, [3, 15], 5),
    (16, [39], 2),
    (32, "divisors of 17678835", 15),
]
ONE_DIGIT_S32 = 17678835  # 3^2 * 5 * 19 * 23 * 29 * 31

# Printed (n, s, k) rows where s does not divide C(n, k); the two k values
# are swapped between the rows.  Maps printed -> corrected.
ONE_DIGIT_ERRATA = {(16, 15, 5): (16, 15, 2), (16, 39, 2): (16, 39, 5)}

# two binary digits: (n, s values, k, explanation)
TWO_DIGIT_ROWS = [
    (6, [3], 5, "zero/half rule, small-n override k = 5"),
    (6, [5], 3, "exponent class"),
    (9, [3], 7, "rule: two-digit zero/half"),
    (9, [9], 2, "divisor family"),
    (10, [3], 5, "rule: two-digit half/half"),
    (10, [5], 1, "exponent class"),
    (10, [9], 5, "divisor family"),
    (10, [15], 3, "divisor family"),
    (12, [3], 7, "rule: two-digit zero/half"),
    (12, [5], 3, "exponent class"),
    (12, [11], 2, "exponent class"),
    (12, [55], 3, "divisor family"),
    (12, [9, 33, 99], 5, "divisor family"),
    (17, [17], 7, "rule: two-digit zero/half"),
    (18, [17], 3, "exponent class"),
    (18, [9, 51, 153], 4, "divisor family"),
    (20, [3], 3, "digit carry modulo the order of 2 mod 9"),
    (20, [5], 7, "rule: two-digit zero/half"),
    (20, [17], 5, "exponent class"),
    (20, [15, 19, 51, 57, 85, 95, 255, 285, 323, 969, 1615, 4845], 6, "divisor family"),
    (72, [3], 7, "rule: two-digit zero/half"),
    (528, [31], 3, "rule: two-digit last/last"),
    (1088, [5], 9, "rule: two-digit half/half"),
]

# three binary digits: (n, s values, k, explanation)
THREE_DIGIT_ROWS = [
    (11, [3], 3, "special: mod-3 congruence families"),
    (11, [11], 7, "rule: three-digit sparse prime"),
    (13, [13], 7, "rule: three-digit sparse prime"),
    (14, [7], 13, "rule: three-digit sparse prime"),
    (14, [13], 3, "exponent class"),
    (14, [91], 3, "divisor family"),
    (19, [19], 7, "rule: three-digit sparse prime"),
    (21, [3], 2, "exponent class"),
    (21, [7], 13, "rule: three-digit sparse prime"),
    (21, [21], 2, "divisor family"),
    (22, [7], 3, "rule: three-digit g-2/g-2/g-1"),
    (22, [11], 7, "exponent class"),
    (22, [77], 3, "divisor family"),
    (56, [3], 3, "digit carry modulo the order of 2 mod 9"),
    (4108, [13], 7, "rule: three-digit sparse prime"),
    (16576, [17], 3, "rule: three-digit g-2/g-2/g-1"),
    (32802, [11], 7, "rule: three-digit one/half/half"),
]
# rows not produced by the three-digit hypotheses themselves
THREE_DIGIT_SPECIAL = {(11, 3, 3)}

# exponent classes {a, b} mod g making 2^a non-essential in base p
EXPONENT_CLASSES = {
    3: (2, {(0, 1), (1, 1)}),
    5: (4, {(0, 2), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)}),
    11: (10, {
        (0, 5), (1, 5), (1, 6), (2, 3), (2, 5), (2, 6), (2, 7), (3, 4), (3, 3), (3, 5),
        (3, 6), (3, 7), (3, 8), (3, 9), (4, 5), (4, 6), (4, 7), (4, 9), (5, 5), (5, 6),
        (5, 7), (5, 8), (5, 9), (6, 6), (6, 7), (6, 8), (6, 9), (7, 7), (7, 9), (9, 9),
    }),
    17: (8, {
        (0, 4), (1, 4), (1, 5), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6), (3, 7),
        (4, 4), (4, 5), (4, 6), (4, 7), (5, 5), (5, 6), (5, 7), (6, 6), (6, 7), (7, 7),
    }),
}


def expand_rows(rows) -> set[tuple[int, int, int]]:
    """Flatten (n, s-list, k, ...) rows into (n, s, k) triples."""
    from .combinat import divisors_from_factorization, factorize

    out = set()
    for n, svals, k, *_ in rows:
        if isinstance(svals, str):
            svals = divisors_from_factorization(factorize(ONE_DIGIT_S32))
        out.update((n, s, k) for s in svals)
    return out
