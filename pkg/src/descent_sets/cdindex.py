"""ab-index of the Boolean algebra, its cd-form, and the root-of-unity functionals.

An ab-monomial of degree d is stored as a mask: letter i (1-based) is b iff
bit i-1 is set, so u_S has mask S.  cd-words are strings over "cd" with
weight #c + 2 #d.

The functional x -> sum_u coeff(u) zeta^{beta(u)} (zeta a primitive m-th
root) is evaluated exactly in Z[zeta].  For m = 2p its real and imaginary
parts are the cosine and sine functionals; "sine part vanishes" is tested as
invariance under complex conjugation and "cosine part vanishes" as
anti-invariance.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .beta import BetaTable, build_beta_table, build_residue_table, rho
from .combinat import euler_phi, prime_power_base
from .cyclotomic import (
    CyclotomicInt,
    _power_basis_table,
    divides,
    multiplicity_at_least_2,
)


class NotCdPolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# ab- and cd-polynomials
# ---------------------------------------------------------------------------


def ab_word(mask: int, degree: int) -> str:
    return "".join("b" if mask >> i & 1 else "a" for i in range(degree))


@dataclass(frozen=True)
class AbPolynomial:
    degree: int
    terms: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): int(v) for k, v in self.terms.items() if v}
        if any(k < 0 or k >> self.degree for k in clean):
            raise ValueError(f"monomial outside degree {self.degree}")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __getitem__(self, mask: int) -> int:
        return self.terms.get(mask, 0)

    def __add__(self, other: "AbPolynomial") -> "AbPolynomial":
        if other.degree != self.degree:
            raise ValueError("degrees differ")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return AbPolynomial(self.degree, out)

    def scale(self, c: int) -> "AbPolynomial":
        return AbPolynomial(self.degree, {k: c * v for k, v in self.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted((ab_word(k, self.degree), v) for k, v in self.terms.items())
        return " + ".join(f"{v}·{w}" for w, v in items)


def weight(word: str) -> int:
    if set(word) - {"c", "d"}:
        raise ValueError(f"not a cd-word: {word!r}")
    return len(word) + word.count("d")


@functools.lru_cache(maxsize=64)
def cd_words(w: int) -> tuple[str, ...]:
    """All cd-words of weight w, by number of d's then lexicographically (c < d)."""
    out = []

    def extend(prefix: str, left: int):
        if left == 0:
            out.append(prefix)
            return
        extend(prefix + "c", left - 1)
        if left >= 2:
            extend(prefix + "d", left - 2)

    extend("", w)
    return tuple(sorted(out, key=lambda s: (s.count("d"), s)))


def _render_word(word: str) -> str:
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        out.append(word[i] if j - i == 1 else f"{word[i]}^{j - i}")
        i = j
    return "".join(out)


@dataclass(frozen=True)
class CdPolynomial:
    degree: int
    terms: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: int(v) for k, v in self.terms.items() if v}
        for k in clean:
            if weight(k) != self.degree:
                raise ValueError(f"word {k!r} does not have weight {self.degree}")
        order = {w: i for i, w in enumerate(cd_words(self.degree))}
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: order[kv[0]])))

    def __getitem__(self, word: str) -> int:
        return self.terms.get(word, 0)

    def to_ab(self) -> AbPolynomial:
        out: dict[int, int] = {}
        for word, c in self.terms.items():
            for mask in expansion_masks(word):
                out[int(mask)] = out.get(int(mask), 0) + c
        return AbPolynomial(self.degree, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for word, c in self.terms.items():
            body = _render_word(word)
            if c == 1:
                chunks.append(body)
            elif c == -1:
                chunks.append("-" + body)
            else:
                chunks.append(f"{c}{body}")
        return " + ".join(chunks).replace("+ -", "- ")


def expansion_masks(word: str) -> np.ndarray:
    """Masks of the ab-monomials in the expansion of a cd-word (c = a+b, d = ab+ba)."""
    masks = np.zeros(1, dtype=np.int64)
    pos = 0
    for letter in word:
        if letter == "c":
            masks = np.concatenate([masks, masks | (1 << pos)])
            pos += 1
        elif letter == "d":
            masks = np.concatenate([masks | (1 << (pos + 1)), masks | (1 << pos)])
            pos += 2
        else:
            raise ValueError(f"not a cd-word: {word!r}")
    return masks


def expand_cd_to_ab(word: str) -> AbPolynomial:
    return AbPolynomial(weight(word), {int(m): 1 for m in expansion_masks(word)})


def signature(word: str) -> int:
    """Leading monomial used by the elimination: c -> a, d -> ab."""
    mask = 0
    pos = 0
    for letter in word:
        if letter == "d":
            mask |= 1 << (pos + 1)
            pos += 2
        else:
            pos += 1
    return mask


def ab_index(n: int | BetaTable) -> AbPolynomial:
    """Psi(B_n) = sum_S beta_n(S) u_S."""
    table = n if isinstance(n, BetaTable) else build_beta_table(n)
    return AbPolynomial(table.n - 1, {s: int(v) for s, v in enumerate(table.values.tolist())})


def ab_to_cd(poly: AbPolynomial) -> CdPolynomial:
    """Greedy elimination over cd-words ordered by number of d's, then lexicographically.

    A later word never contains an earlier word's signature in its expansion,
    so the residual coefficient at the signature is exactly the cd-coefficient.
    """
    d = poly.degree
    words = cd_words(d)
    sigs = [signature(w) for w in words]
    if len(set(sigs)) != len(sigs):
        raise AssertionError("cd-word signatures are not distinct")
    residual = np.zeros(1 << d, dtype=object)
    for k, v in poly.terms.items():
        residual[k] = v
    out: dict[str, int] = {}
    for word, sig in zip(words, sigs):
        c = residual[sig]
        if c:
            out[word] = int(c)
            residual[expansion_masks(word)] -= c
    if any(residual):
        raise NotCdPolynomialError("not a cd-polynomial: nonzero residual after elimination")
    return CdPolynomial(d, out)


def cd_index(n: int | BetaTable) -> CdPolynomial:
    return ab_to_cd(ab_index(n))


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------


def _root_matrix(m: int, dtype=np.int64) -> np.ndarray:
    """Row r = zeta^r in the power basis."""
    return np.array(_power_basis_table(m), dtype=dtype).reshape(m, euler_phi(m))


def _conjugation_matrix(m: int) -> np.ndarray:
    rows = _root_matrix(m)
    return np.stack([rows[(-i) % m] for i in range(euler_phi(m))])


def _fold(arr: np.ndarray, letter: str) -> np.ndarray:
    """Sum out the lowest one (c) or two (d) letters of the mask index."""
    phi = arr.shape[1]
    if letter == "c":
        return arr.reshape(-1, 2, phi).sum(axis=1)
    quad = arr.reshape(-1, 4, phi)
    # index 1 = "ba", index 2 = "ab"
    return quad[:, 1] + quad[:, 2]


def _residues_for(table: BetaTable | np.ndarray, m: int) -> tuple[np.ndarray, int]:
    if isinstance(table, BetaTable):
        return table.residues(m).astype(np.int64), table.n
    values = np.asarray(table)
    n = int(len(values)).bit_length()
    return (values % np.uint64(m)).astype(np.int64) if values.dtype == np.uint64 else values % m, n


def _initial_array(res: np.ndarray, m: int) -> np.ndarray:
    rows = _root_matrix(m)
    bound = int(np.abs(rows).max()) * len(res)
    dtype = np.int32 if bound < 2**31 else np.int64
    return rows.astype(dtype)[res]


def _check_degree(word: str, n: int):
    if weight(word) != n - 1:
        raise ValueError(f"word of weight {weight(word)} does not match degree {n - 1}")


def functional_root(
    x: str | AbPolynomial | CdPolynomial, table: BetaTable | np.ndarray, m: int
) -> CyclotomicInt:
    """sum over ab-monomials u of coeff(u) * zeta_m^{beta(u)}."""
    if m < 2:
        raise ValueError("m must be >= 2")
    res, n = _residues_for(table, m)
    if isinstance(x, str):
        _check_degree(x, n)
        arr = _initial_array(res, m)
        for letter in x:
            arr = _fold(arr, letter)
        return CyclotomicInt(m, tuple(int(v) for v in arr[0]))
    if isinstance(x, CdPolynomial):
        x = x.to_ab()
    if x.degree != n - 1:
        raise ValueError(f"polynomial of degree {x.degree} does not match degree {n - 1}")
    counts = [0] * m
    for mask, c in x.terms.items():
        counts[int(res[mask])] += c
    return CyclotomicInt.from_exponent_counts(m, counts)


def functional_L(word: str, table: BetaTable | None = None) -> int:
    """sum over u in the expansion of word of (-1)^{beta_{2n}(u)}, weight 2n-1."""
    w = weight(word)
    if w % 2 == 0:
        raise ValueError("weight must be odd (2n - 1)")
    if table is None:
        table = build_residue_table(w + 1, 2)
    return functional_root(word, table, 2).coeffs[0]


def middle_level_closed_form(word: str) -> int:
    """2^{2n-j-1} (1 - 2 rho(n)) for a cd-word of weight 2n-1 with j d's."""
    w = weight(word)
    n = (w + 1) // 2
    val = Fraction(2 ** (2 * n - word.count("d") - 1)) * (1 - 2 * rho(n))
    assert val.denominator == 1
    return int(val)


def all_word_values(table: BetaTable | np.ndarray, m: int) -> tuple[tuple[str, ...], np.ndarray]:
    """functional_root of every cd-word of full weight, in one depth-first pass.

    Folding a letter only touches the lowest mask bits, so words sharing a
    prefix share work.  Returns words in cd_words order and an int64 array
    of power-basis vectors.
    """
    res, n = _residues_for(table, m)
    total = n - 1
    results: dict[str, np.ndarray] = {}

    def walk(arr: np.ndarray, prefix: str, left: int):
        if left == 0:
            results[prefix] = arr[0].astype(np.int64)
            return
        walk(_fold(arr, "c"), prefix + "c", left - 1)
        if left >= 2:
            walk(_fold(arr, "d"), prefix + "d", left - 2)

    walk(_initial_array(res, m), "", total)
    words = cd_words(total)
    return words, np.stack([results[w] for w in words])


def conjugate_vectors(values: np.ndarray, m: int) -> np.ndarray:
    return values @ _conjugation_matrix(m)


# ---------------------------------------------------------------------------
# verifiers for the cyclotomic factor statements
# ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    asserted: bool = True

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "asserted": self.asserted, "detail": self.detail}


@dataclass
class VerificationReport:
    statement: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    skipped: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.asserted)

    def add(self, name: str, passed: bool, detail: str = "", asserted: bool = True):
        self.checks.append(Check(name, bool(passed), detail, asserted))

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.asserted and not c.passed), None)

    def as_dict(self) -> dict:
        return {
            "statement": self.statement,
            "params": self.params,
            "passed": self.passed,
            "skipped": self.skipped,
            "notes": self.notes,
            "checks": [c.as_dict() for c in self.checks],
        }


def _odd_prime_power(q: int) -> int:
    p = prime_power_base(q)
    if p is None or p == 2:
        raise ValueError(f"{q} is not an odd prime power")
    return p


def _word_check(report, name, words, ok, selector, asserted=True):
    chosen = [i for i, w in enumerate(words) if selector(w)]
    bad = [words[i] for i in chosen if not ok[i]]
    detail = f"{len(chosen)} words" + (f"; first failure {_render_word(bad[0])}" if bad else "")
    report.add(name, not bad, detail, asserted)


def _flip_check(values: np.ndarray, n: int, positions, m: int) -> tuple[bool, str]:
    """beta(S) + beta(S xor {i}) = 0 mod m for every S and every listed i."""
    res = values % m if values.dtype != np.uint64 else (values % np.uint64(m)).astype(np.int64)
    idx = np.arange(len(res))
    for i in positions:
        partner = res[idx ^ (1 << (i - 1))]
        if np.any((res + partner) % m):
            return False, f"position {i}"
    return True, f"positions {list(positions)}"


def verify_phi2_double_factor(n2: int) -> VerificationReport:
    if n2 % 2 or n2 < 2:
        raise ValueError("expects an even n")
    n = n2 // 2
    report = VerificationReport("double factor Phi_2", {"n": n2})
    table = build_beta_table(n2)
    if not divides(table, 2):
        report.skipped = f"Phi_2 does not divide Q_{n2}; statement is vacuous"
        report.add("Phi_2 divides", False, "vacuous", asserted=False)
        return report
    report.add("Phi_2 divides", True)
    r = rho(n)
    report.add("rho(n) = 1/2", r == Fraction(1, 2), f"rho({n}) = {r}")
    words, vals = all_word_values(table, 2)
    report.add("L vanishes on every cd-word", not np.any(vals), f"{len(words)} words")
    report.add("Phi_2 multiplicity >= 2", multiplicity_at_least_2(table, 2))
    return report


def verify_phi2p_double_factor_2q(q: int) -> VerificationReport:
    p = _odd_prime_power(q)
    if 2 * q > 24:
        raise ValueError("needs an exact table for 2q <= 24")
    m = 2 * p
    report = VerificationReport("double factor Phi_2p in Q_2q", {"q": q, "p": p, "m": m})
    r = rho(q)
    report.add("hypothesis rho(q) = 1/2", r == Fraction(1, 2), f"rho({q}) = {r}")
    if r != Fraction(1, 2):
        report.skipped = "hypothesis fails"
        return report
    table = build_beta_table(2 * q)
    res = table.residues(m).astype(np.int64)
    report.add(
        "beta_2q = (-1)^|S - {q}| mod p",
        _closed_form_ok(q, "2q", table),
    )
    odd = res % 2 == 1
    report.add(
        "cosine of each monomial is -cos(pi/p)(-1)^beta",
        bool(np.all(np.isin(res[odd], [1, m - 1])) and np.all(np.isin(res[~odd], [p - 1, p + 1]))),
    )
    words, vals = all_word_values(table, m)
    conj = conjugate_vectors(vals, m)
    is_real = np.all(conj == vals, axis=1)
    is_imag = np.all(conj == -vals, axis=1)
    _word_check(report, "cosine functional vanishes on every cd-word", words, is_imag, lambda w: True)
    ok, detail = _flip_check(table.values, 2 * q, [i for i in range(1, 2 * q, 2) if i != q], m)
    report.add("sign flip at odd positions other than q, mod 2p", ok, detail)
    special = "d" * ((q - 1) // 2) + "c" + "d" * ((q - 1) // 2)
    _word_check(report, "sine functional vanishes off the middle-c word", words, is_real, lambda w: w != special)
    _word_check(report, "sine functional vanishes on the middle-c word", words, is_real, lambda w: w == special)
    root_val = functional_root(ab_index(table), table, m)
    report.add("(C + iS)(Psi(B_2q)) = 0", root_val.is_zero())
    report.add("Phi_2p divides Q_2q", divides(table, m))
    report.add("Phi_2p multiplicity >= 2", multiplicity_at_least_2(table, m))
    return report


def verify_phi2p_factor_q_plus_1(q: int) -> VerificationReport:
    p = _odd_prime_power(q)
    if q + 1 > 24:
        raise ValueError("needs an exact table for q + 1 <= 24")
    m = 2 * p
    n = q + 1
    report = VerificationReport("factor Phi_2p in Q_q+1", {"q": q, "p": p, "m": m})
    literal, used = rho(q), rho(n)
    table = build_beta_table(n)
    report.notes.append(
        f"hypothesis read as rho(q+1) = 1/2 (rho({n}) = {used}); "
        f"literal rho(q) = 1/2 is {'true' if literal == Fraction(1, 2) else 'false'} (rho({q}) = {literal})"
    )
    if used != Fraction(1, 2):
        if literal == Fraction(1, 2) and not divides(table, m):
            report.notes.append(
                f"discrepancy: rho({q}) = 1/2 yet Phi_{m} does not divide Q_{n}; the literal hypothesis is insufficient"
            )
        report.skipped = f"rho({n}) = {used} != 1/2"
        return report
    double = q % 4 == 3
    res = table.residues(m).astype(np.int64)
    report.add("beta_q+1 closed form mod p", _closed_form_ok(q, "q+1", table))
    words, vals = all_word_values(table, m)
    conj = conjugate_vectors(vals, m)
    is_real = np.all(conj == vals, axis=1)
    is_imag = np.all(conj == -vals, axis=1)
    h = (q - 1) // 2
    _word_check(report, "cosine vanishes on words starting or ending with c", words, is_imag,
                lambda w: w[0] == "c" or w[-1] == "c")
    _word_check(report, "cosine vanishes on words starting or ending with d", words, is_imag,
                lambda w: w[0] == "d" or w[-1] == "d", asserted=double)
    ok, detail = _flip_check(table.values, n, range(3, q - 1, 2), m)
    report.add("sign flip at odd positions 3..q-2, mod 2p", ok, detail)
    exceptions = {"c" + "d" * h, "d" * h + "c"}
    exceptions |= {"c" + "d" * i + "c" + "d" * (h - 1 - i) + "c" for i in range(h)}
    _word_check(report, "sine vanishes off the exceptional words", words, is_real, lambda w: w not in exceptions)
    _word_check(report, "sine vanishes on words starting and ending with c", words, is_real,
                lambda w: w[0] == "c" and w[-1] == "c")
    _word_check(report, "sine vanishes on c d^h and d^h c", words, is_real,
                lambda w: w in {"c" + "d" * h, "d" * h + "c"}, asserted=double)
    report.add("Phi_2p divides Q_q+1", divides(table, m))
    mult = multiplicity_at_least_2(table, m)
    report.add("Phi_2p multiplicity >= 2", mult, "q = 3 mod 4" if double else "not claimed", asserted=double)
    if double:
        report.add("functional vanishes on every cd-word", bool(np.all(is_real & is_imag)))
    del res
    return report


def _closed_form_ok(q: int, which: str, table: BetaTable) -> bool:
    from .qsym import verify_closed_form

    p = _odd_prime_power(q)
    return verify_closed_form(q, which, table.residues(p).astype(np.int64)).passed


def iter_middle_level_values(n: int) -> Iterator[tuple[str, int, int]]:
    """(word, direct L value, closed-form value) for every cd-word of weight 2n-1."""
    table = build_residue_table(2 * n, 2)
    words, vals = all_word_values(table, 2)
    for w, v in zip(words, vals[:, 0]):
        yield w, int(v), middle_level_closed_form(w)
