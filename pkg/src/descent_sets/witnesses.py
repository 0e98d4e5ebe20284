"""Search for the (s, k) witnesses that predict cyclotomic factors.

Three digit-count families:

* one binary digit, n = 2^a: odd s | C(n, n/2) and s | C(n, k) for some
  k != n/2 predicts Phi_{4s};
* two binary digits, n = 2^b + 2^a: odd s | C(n, 2^a) and s | C(n, k) for
  some k that is non-essential in base 2 predicts Phi_{2s};
* three binary digits: odd s dividing all three C(n, 2^x) and some C(n, k)
  with k non-essential in base 2 predicts Phi_{2s}.

The prime rules (``RULES``) give closed-form k for s = p from congruences of
the binary exponents of n modulo the order of 2 mod p.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .combinat import (
    binomial,
    binomial_factorization,
    divisors_from_factorization,
    is_essential,
    is_prime,
    multiplicative_order,
)

TAGS = ("one-digit", "two-digit", "three-digit")
FULL_LATTICE_MAX_N = 64
DEFAULT_K_MAX = 64


@dataclass(frozen=True, order=True)
class FactorWitness:
    n: int
    s: int
    k: int
    tag: str
    m: int  # predicted cyclotomic index, 4s or 2s
    rule: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def binary_exponents(n: int) -> list[int]:
    return [i for i in range(n.bit_length()) if n >> i & 1]


def _tag_for(n: int) -> str:
    ones = bin(n).count("1")
    if ones > 3:
        raise ValueError(f"{n} has {ones} binary ones; only 1 to 3 are covered")
    return TAGS[ones - 1]


def _anchor_ks(n: int) -> list[int]:
    """The k whose binomials s must divide, by digit family."""
    tag = _tag_for(n)
    if tag == "one-digit":
        return [n // 2]
    exps = binary_exponents(n)
    return [1 << exps[0]] if tag == "two-digit" else [1 << e for e in exps]


def _k_allowed(n: int, k: int) -> bool:
    if not 1 <= k <= n - 1:
        return False
    if _tag_for(n) == "one-digit":
        return k != n // 2
    return not is_essential(k, n, 2)


def _predicted(n: int, s: int) -> int:
    return 4 * s if _tag_for(n) == "one-digit" else 2 * s


def witness_holds(w: FactorWitness) -> bool:
    """Re-check every hypothesis of the tagged family with exact arithmetic."""
    if w.tag != _tag_for(w.n) or w.s % 2 == 0 or w.s < 1:
        return False
    if w.tag == "one-digit" and (w.n < 4 or w.n & (w.n - 1)):
        return False
    if w.m != _predicted(w.n, w.s) or not _k_allowed(w.n, w.k):
        return False
    if any(binomial(w.n, j) % w.s for j in _anchor_ks(w.n)):
        return False
    if binomial(w.n, w.k) % w.s:
        return False
    if w.rule is not None:
        p = w.s
        if not is_prime(p) or is_essential(w.k, w.n, p):
            return False
        if any(is_essential(j, w.n, p) for j in _anchor_ks(w.n)):
            return False
    return True


def _odd_gcd_factorization(n: int) -> dict[int, int]:
    facs = [binomial_factorization(n, j) for j in _anchor_ks(n)]
    common = set(facs[0]).intersection(*facs[1:]) - {2}
    return {p: min(f[p] for f in facs) for p in sorted(common)}


def find_witnesses(
    n: int,
    primes_only: bool | None = None,
    k_max: int | None = None,
    s_filter: Callable[[int], bool] | None = None,
) -> list[FactorWitness]:
    """Every (s, k) pair satisfying the family hypotheses for n.

    For n up to FULL_LATTICE_MAX_N the whole odd divisor lattice is searched
    over all k.  Beyond that the default is primes s and k <= DEFAULT_K_MAX.
    """
    tag = _tag_for(n)
    if tag == "one-digit" and n < 4:
        raise ValueError("one-digit family needs n = 2^a with a >= 2")
    if primes_only is None:
        primes_only = n > FULL_LATTICE_MAX_N
    if k_max is None:
        k_max = n - 1 if n <= FULL_LATTICE_MAX_N else min(n - 1, DEFAULT_K_MAX)
    common = _odd_gcd_factorization(n)
    out = []
    for k in range(1, k_max + 1):
        if not _k_allowed(n, k):
            continue
        if primes_only:
            # p | C(n, k) iff adding k and n - k in base p carries
            candidates = [p for p in common if is_essential(k, n, p) is False]
        else:
            g = math.gcd(math.prod(p**e for p, e in common.items()), binomial(n, k))
            sub = {p: e for p, e in binomial_factorization(n, k).items() if p in common}
            sub = {p: min(e, common[p]) for p, e in sub.items()}
            assert math.prod(p**e for p, e in sub.items()) == g
            candidates = divisors_from_factorization(sub)
        for s in candidates:
            if s_filter is None or s_filter(s):
                out.append(FactorWitness(n, s, k, tag, _predicted(n, s)))
    return sorted(out)


def find_one_digit_witnesses(a: int, **kw) -> list[FactorWitness]:
    if a < 2:
        raise ValueError("exponent must be >= 2")
    return find_witnesses(1 << a, **kw)


def find_two_digit_witnesses(n: int, **kw) -> list[FactorWitness]:
    if bin(n).count("1") != 2:
        raise ValueError(f"{n} does not have exactly two binary ones")
    return find_witnesses(n, **kw)


def find_three_digit_witnesses(n: int, **kw) -> list[FactorWitness]:
    if bin(n).count("1") != 3:
        raise ValueError(f"{n} does not have exactly three binary ones")
    return find_witnesses(n, **kw)


# ---------------------------------------------------------------------------
# exponent classes and prime rules
# ---------------------------------------------------------------------------


def exponent_classes_two_digit(p: int) -> set[tuple[int, int]]:
    """Pairs x <= y mod g whose last base-p digits of 2^x, 2^y sum to at least p.

    Then the last digit of 2^x + 2^y is smaller than both, so both powers
    are non-essential for n in base p.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    g = multiplicative_order(2, p)
    res = [pow(2, x, p) for x in range(g)]
    return {(x, y) for x in range(g) for y in range(x, g) if res[x] + res[y] >= p}


def in_two_digit_class(p: int, a: int, b: int) -> bool:
    g = multiplicative_order(2, p)
    x, y = sorted((a % g, b % g))
    return (x, y) in exponent_classes_two_digit(p)


@dataclass(frozen=True)
class Rule:
    name: str
    digits: int
    description: str
    applies: Callable[[int, int, int, list[int]], bool]  # (n, p, g, exponents)
    k: Callable[[int, int], int]  # (n, p) -> canonical k


def _residues(exps: list[int], g: int) -> list[int]:
    return sorted(e % g for e in exps)


def _sparse_prime(p: int) -> tuple[int, int] | None:
    """(d, e) with p = 2^e + 2^d + 1 and e > d >= 1."""
    rest = p - 1
    if bin(rest).count("1") != 2 or rest & 1:
        return None
    d, e = binary_exponents(rest)
    return d, e


def _sparse_prime_applies(n: int, p: int, g: int, exps: list[int]) -> bool:
    de = _sparse_prime(p)
    if de is None or n <= 7:
        return False
    return _residues(exps, g) == sorted([0, de[0] % g, de[1] % g])


# Canonical k may be patched for a specific (n, p); the zero/half rule
# uses 5 instead of 7 at n = 6, p = 3.
K_OVERRIDES: dict[tuple[str, int, int], int] = {("two-digit zero/half", 6, 3): 5}

RULES: dict[str, Rule] = {
    r.name: r
    for r in [
        Rule(
            "two-digit zero/half",
            2,
            "g even, {a, b} = {0, g/2} mod g, n >= 9; k = 7",
            lambda n, p, g, ex: g % 2 == 0 and _residues(ex, g) == sorted([0, g // 2])
            and (n >= 9 or (n, p) == (6, 3)),
            lambda n, p: 7,
        ),
        Rule(
            "two-digit half/half",
            2,
            "g even, a = b = g/2 mod g, n > 2p - 1; k = 2p - 1",
            lambda n, p, g, ex: g % 2 == 0 and _residues(ex, g) == [g // 2, g // 2] and n > 2 * p - 1,
            lambda n, p: 2 * p - 1,
        ),
        Rule(
            "two-digit last/last",
            2,
            "p > 3, a = b = g - 1 mod g, n >= 5; k = 3",
            lambda n, p, g, ex: p > 3 and _residues(ex, g) == [g - 1, g - 1] and n >= 5,
            lambda n, p: 3,
        ),
        Rule(
            "three-digit one/half/half",
            3,
            "g even, {a, b, c} = {1, g/2, g/2} mod g, n >= 11; k = 7",
            lambda n, p, g, ex: g % 2 == 0 and _residues(ex, g) == sorted([1 % g, g // 2, g // 2]) and n >= 11,
            lambda n, p: 7,
        ),
        Rule(
            "three-digit g-2/g-2/g-1",
            3,
            "p >= 5, {a, b, c} = {g-2, g-2, g-1} mod g; k = 3",
            lambda n, p, g, ex: p >= 5 and _residues(ex, g) == sorted([g - 2, g - 2, g - 1]),
            lambda n, p: 3,
        ),
        Rule(
            "three-digit sparse prime",
            3,
            "p = 2^e + 2^d + 1, {a, b, c} = {0, d, e} mod g, n > 7; k = 7, or 13 when p = 7",
            _sparse_prime_applies,
            lambda n, p: 13 if p == 7 else 7,
        ),
    ]
}


def rule_witness(n: int, rule: str, p: int) -> FactorWitness | None:
    """The rule's canonical witness for s = p, or None when its hypotheses fail.

    The congruence test is followed by a full digit-vector check that k and
    the anchor powers of two really are non-essential in the required bases.
    """
    spec = RULES[rule]
    if not is_prime(p) or p == 2:
        raise ValueError(f"{p} is not an odd prime")
    exps = binary_exponents(n)
    if len(exps) != spec.digits:
        return None
    g = multiplicative_order(2, p)
    if not spec.applies(n, p, g, exps):
        return None
    k = K_OVERRIDES.get((rule, n, p), spec.k(n, p))
    w = FactorWitness(n, p, k, TAGS[spec.digits - 1], 2 * p, rule)
    return w if witness_holds(w) else None


theorem_rule_witness = rule_witness


def rules_explaining(n: int, p: int, k: int) -> list[str]:
    return [
        name for name in RULES
        if (w := rule_witness(n, name, p)) is not None and w.k == k
    ]


def digit_carry_explains(n: int, p: int, k: int) -> bool:
    """Generalized non-essentiality on full base-p digit vectors.

    Covers the congruence classes modulo the order of 2 mod p^l, where the
    carry happens in a higher digit than the last one.
    """
    anchors = _anchor_ks(n)
    return (
        _k_allowed(n, k)
        and not is_essential(k, n, p)
        and all(not is_essential(j, n, p) for j in anchors)
    )


# ---------------------------------------------------------------------------
# closing the loop with the scanner
# ---------------------------------------------------------------------------


@dataclass
class CrossCheckReport:
    n: int
    m_max: int
    predicted: list[int] = field(default_factory=list)
    confirmed: list[int] = field(default_factory=list)
    failed: list[int] = field(default_factory=list)
    out_of_range: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failed

    def as_dict(self) -> dict:
        return asdict(self)


def predicted_indices(n: int) -> list[int]:
    if n < 3 or bin(n).count("1") > 3 or n == 2:
        return []
    if bin(n).count("1") == 1 and n < 4:
        return []
    return sorted({w.m for w in find_witnesses(n)})


def cross_check_witnesses(n: int, m_max: int = 10_000) -> CrossCheckReport:
    from .cyclotomic import divides

    report = CrossCheckReport(n, m_max)
    for m in predicted_indices(n):
        report.predicted.append(m)
        if m > m_max:
            report.out_of_range.append(m)
        elif divides(n, m):
            report.confirmed.append(m)
        else:
            report.failed.append(m)
    return report


def iter_rows(witnesses: Iterable[FactorWitness]) -> Iterable[tuple[int, int, int]]:
    for w in witnesses:
        yield w.n, w.s, w.k
