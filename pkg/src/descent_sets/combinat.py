"""Exact integer machinery shared by every other module.

Bit convention used throughout the package: element ``i`` of ``[n-1]`` is
bit ``i - 1`` of a mask.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


# ---------------------------------------------------------------------------
# Descent sets and compositions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DescentSet:
    """A subset of ``[n-1]`` stored as a bit mask."""

    n: int
    mask: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.mask < 0 or self.mask >> max(self.n - 1, 0):
            raise ValueError(f"mask {self.mask:#x} has bits outside [1, {self.n - 1}]")

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> "DescentSet":
        mask = 0
        for i in elements:
            if not 1 <= i <= n - 1:
                raise ValueError(f"element {i} not in [1, {n - 1}]")
            mask |= 1 << (i - 1)
        return cls(n, mask)

    @classmethod
    def from_composition(cls, parts: Sequence[int]) -> "DescentSet":
        comp = Composition(tuple(parts))
        return cls(comp.total, composition_to_mask(comp.parts))

    def elements(self) -> list[int]:
        return mask_elements(self.mask)

    def composition(self) -> "Composition":
        return Composition(mask_to_composition(self.n, self.mask))

    def reverse(self) -> "DescentSet":
        return DescentSet(self.n, reverse_mask(self.n, self.mask))

    def complement(self) -> "DescentSet":
        return DescentSet(self.n, self.mask ^ ((1 << (self.n - 1)) - 1))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return i >= 1 and bool(self.mask >> (i - 1) & 1)


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("a composition needs at least one part")
        if any(c < 1 for c in self.parts):
            raise ValueError(f"parts must be positive: {self.parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    def descent_set(self) -> DescentSet:
        return DescentSet(self.total, composition_to_mask(self.parts))


def mask_elements(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_from_elements(elements: Iterable[int]) -> int:
    mask = 0
    for i in elements:
        mask |= 1 << (i - 1)
    return mask


def mask_to_composition(n: int, mask: int) -> tuple[int, ...]:
    parts = []
    prev = 0
    for s in mask_elements(mask):
        parts.append(s - prev)
        prev = s
    parts.append(n - prev)
    return tuple(parts)


def composition_to_mask(parts: Sequence[int]) -> int:
    mask = 0
    acc = 0
    for c in parts[:-1]:
        acc += c
        mask |= 1 << (acc - 1)
    return mask


def reverse_mask(n: int, mask: int) -> int:
    return mask_from_elements(n - s for s in mask_elements(mask))


# ---------------------------------------------------------------------------
# Binomials, multinomials, digits
# ---------------------------------------------------------------------------


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(parts: Sequence[int] | Composition) -> int:
    if isinstance(parts, Composition):
        parts = parts.parts
    result = 1
    total = 0
    for c in parts:
        total += c
        result *= math.comb(total, c)
    return result


@dataclass(frozen=True)
class BasePDigits:
    """Little-endian base-``base`` digits of a non-negative integer."""

    base: int
    digits: tuple[int, ...]

    @classmethod
    def of(cls, value: int, base: int) -> "BasePDigits":
        return cls(base, tuple(to_digits(value, base)))

    @property
    def value(self) -> int:
        return sum(d * self.base**i for i, d in enumerate(self.digits))

    def __getitem__(self, i: int) -> int:
        return self.digits[i] if i < len(self.digits) else 0


def to_digits(value: int, base: int) -> list[int]:
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if value < 0:
        raise ValueError("negative values have no digit expansion here")
    if value == 0:
        return [0]
    out = []
    while value:
        value, r = divmod(value, base)
        out.append(r)
    return out


def is_essential(k: int, n: int, p: int) -> bool:
    """True when every base-``p`` digit of ``k`` is at most the matching digit of ``n``."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} outside [1, {n - 1}]")
    return carry_count(k, n - k, p) == 0


def carry_count(k: int, l: int, p: int) -> int:
    """Number of carries when adding ``k`` and ``l`` in base ``p``."""
    if p < 2:
        raise ValueError(f"base must be >= 2, got {p}")
    carries = 0
    carry = 0
    while k or l or carry:
        k, dk = divmod(k, p)
        l, dl = divmod(l, p)
        carry = 1 if dk + dl + carry >= p else 0
        carries += carry
    return carries


def p_adic_valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def is_prime(x: int) -> bool:
    if x < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if x % q == 0:
            return x == q
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for x < 3.3e24
    for a in small:
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(s - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def binomial_mod_p_lucas(n: int, k: int, p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        result = result * math.comb(ni, ki) % p
    return result


def multiplicative_order(a: int, modulus: int) -> int:
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(a, modulus) != 1:
        raise ValueError(f"{a} is not a unit modulo {modulus}")
    a %= modulus
    g, x = 1, a
    while x != 1:
        x = x * a % modulus
        g += 1
    return g


def factorize(x: int) -> dict[int, int]:
    """Trial-division factorization; fine for the magnitudes used here."""
    if x < 1:
        raise ValueError(f"cannot factor {x}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= x:
        while x % d == 0:
            out[d] = out.get(d, 0) + 1
            x //= d
        d += 1 if d == 2 else 2
    if x > 1:
        out[x] = out.get(x, 0) + 1
    return out


def binomial_factorization(n: int, k: int) -> dict[int, int]:
    """Prime factorization of C(n, k) read off from Kummer carries."""
    if not 0 <= k <= n:
        raise ValueError("C(n, k) is zero")
    out = {}
    for p in primes_up_to(n):
        v = carry_count(k, n - k, p)
        if v:
            out[p] = v
    return out


@functools.lru_cache(maxsize=None)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return tuple(int(x) for x in np.flatnonzero(flags))


def primes_up_to(limit: int) -> tuple[int, ...]:
    return _sieve(limit)


def divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in sorted(fac.items()):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def prime_power_base(q: int) -> int | None:
    """Return p when q = p^r with r >= 1, else None."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    return next(iter(fac))


def mobius(x: int) -> int:
    fac = factorize(x) if x > 1 else {}
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(x: int) -> int:
    result = x
    for p in factorize(x) if x > 1 else {}:
        result = result // p * (p - 1)
    return result


# ---------------------------------------------------------------------------
# Integer polynomials and cyclotomic polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Little-endian integer coefficients; the zero polynomial is ``()``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if not self.coeffs or not other.coeffs:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def divmod_monic(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        if not divisor.coeffs or divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial(()), self
        quot = [0] * (len(rem) - dd)
        dc = divisor.coeffs
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                quot[i - dd] = c
                for j in range(dd + 1):
                    rem[i - dd + j] -= c * dc[j]
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:dd]))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        head_sign, head = terms[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _mul_binomial(poly: np.ndarray, d: int) -> np.ndarray:
    # poly * (t^d - 1)
    out = np.zeros(len(poly) + d, dtype=poly.dtype)
    out[d:] += poly
    out[: len(poly)] -= poly
    return out


def _div_binomial(poly: np.ndarray, d: int) -> np.ndarray:
    # exact poly / (t^d - 1): q[i] = q[i-d] - p[i]
    qlen = len(poly) - d
    blocks = -(-qlen // d)
    padded = np.zeros(blocks * d, dtype=poly.dtype)
    padded[:qlen] = poly[:qlen]
    q = -np.cumsum(padded.reshape(blocks, d), axis=0).reshape(-1)[:qlen]
    check = _mul_binomial(q, d)
    if not np.array_equal(check, poly):
        raise ArithmeticError(f"polynomial not divisible by t^{d} - 1")
    return q


@functools.lru_cache(maxsize=None)
def _cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    # Phi_m = prod_{d | m} (t^d - 1)^{mu(m/d)}; all multiplications first so
    # every intermediate stays a polynomial. At most 2^5 factors for m < 30030.
    divs = divisors_from_factorization(factorize(m)) if m > 1 else [1]
    poly = np.array([1], dtype=np.int64)
    for d in divs:
        if mobius(m // d) == 1:
            poly = _mul_binomial(poly, d)
    for d in divs:
        if mobius(m // d) == -1:
            poly = _div_binomial(poly, d)
    if np.abs(poly).max() > 2**52:
        raise OverflowError(f"cyclotomic coefficients of Phi_{m} too large for fast path")
    return tuple(int(x) for x in poly)


def cyclotomic_polynomial(m: int) -> IntPolynomial:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return IntPolynomial(_cyclotomic_coeffs(m))


# ---------------------------------------------------------------------------
# Euler zigzag numbers
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def euler_zigzag(n: int) -> int:
    """Number of alternating permutations of ``[n]`` (boustrophedon triangle)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    row = [1]
    for _ in range(n):
        new = [0]
        for x in reversed(row):
            new.append(new[-1] + x)
        row = new
    return row[-1]


def subsets_of(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
