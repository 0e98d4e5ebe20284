"""Exact detection of cyclotomic factors of Q_n(t) = sum_S t^{beta_n(S)}.

Q_n(omega) for a primitive m-th root omega only depends on the residue
histogram a_{m,j}.  Two exact routes decide whether it vanishes:

* power basis: reduce sum_j a_j t^j modulo Phi_m(t) by long division
  (``reduce_mod_cyclotomic``), giving a canonical ``CyclotomicInt``;
* tensor basis: split Z[zeta_m] into the tensor product of
  Z[zeta_q] over the prime powers q || m and eliminate one coset per
  prime (``vanishes_at_primitive_root``).  Linear time in m, which is what
  the scanner uses.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .beta import BetaTable, build_beta_table, grouped_sums
from .combinat import IntPolynomial, cyclotomic_polynomial, euler_phi, factorize


@dataclass(frozen=True)
class CyclotomicInt:
    """An element of Z[t]/Phi_m(t) in the power basis 1, t, ..., t^(phi(m)-1)."""

    m: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != euler_phi(self.m):
            raise ValueError(f"need {euler_phi(self.m)} coefficients for m={self.m}")

    @classmethod
    def zero(cls, m: int) -> "CyclotomicInt":
        return cls(m, (0,) * euler_phi(m))

    @classmethod
    def root_power(cls, m: int, e: int) -> "CyclotomicInt":
        return cls(m, _power_basis_table(m)[e % m])

    @classmethod
    def from_exponent_counts(cls, m: int, counts: Sequence[int]) -> "CyclotomicInt":
        """sum_j counts[j] * zeta^j."""
        return reduce_mod_cyclotomic(IntPolynomial(tuple(int(c) for c in counts)), m)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check(other)
        return CyclotomicInt(self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check(other)
        return CyclotomicInt(self.m, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.m, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "CyclotomicInt | int") -> "CyclotomicInt":
        if isinstance(other, int):
            return CyclotomicInt(self.m, tuple(a * other for a in self.coeffs))
        self._check(other)
        prod = IntPolynomial(self.coeffs) * IntPolynomial(other.coeffs)
        return reduce_mod_cyclotomic(prod, self.m)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicInt":
        """Image under zeta -> zeta^{-1} (complex conjugation)."""
        table = _power_basis_table(self.m)
        out = [0] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                for k, v in enumerate(table[(-i) % self.m]):
                    out[k] += c * v
        return CyclotomicInt(self.m, tuple(out))

    def is_real(self) -> bool:
        return self.conjugate() == self

    def is_imaginary(self) -> bool:
        return self.conjugate() == -self

    def _check(self, other: "CyclotomicInt"):
        if other.m != self.m:
            raise ValueError(f"mismatched roots of unity: {self.m} vs {other.m}")

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return str(IntPolynomial(self.coeffs)).replace("t", "w")


def reduce_mod_cyclotomic(pol: IntPolynomial | Sequence[int], m: int) -> CyclotomicInt:
    if not isinstance(pol, IntPolynomial):
        pol = IntPolynomial(tuple(pol))
    phi = cyclotomic_polynomial(m)
    deg = phi.degree
    coeffs = list(pol.coeffs)
    if len(coeffs) > m and m > 1:
        # t^m = 1 modulo Phi_m; fold first, which keeps the division short
        folded = [0] * m
        for j, c in enumerate(coeffs):
            folded[j % m] += c
        coeffs = folded
    if len(coeffs) <= deg:
        return CyclotomicInt(m, tuple(coeffs) + (0,) * (deg - len(coeffs)))
    rem = np.array(coeffs, dtype=object)
    dc = np.array(phi.coeffs, dtype=object)
    for i in range(len(rem) - 1, deg - 1, -1):
        c = rem[i]
        if c:
            rem[i - deg : i + 1] -= c * dc
    return CyclotomicInt(m, tuple(int(x) for x in rem[:deg]))


@functools.lru_cache(maxsize=256)
def _power_basis_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row r holds t^r reduced modulo Phi_m, for 0 <= r < m."""
    phi = cyclotomic_polynomial(m)
    deg = phi.degree
    rows = []
    cur = [0] * deg
    cur[0] = 1 if deg else 0
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by t and reduce the overflow coefficient
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1] if deg else []
        if top:
            for k in range(deg):
                cur[k] -= top * phi.coeffs[k]
    return tuple(rows)


# ---------------------------------------------------------------------------
# tensor-basis zero test
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _tensor_layout(m: int):
    fac = sorted(factorize(m).items())
    qs = [p**e for p, e in fac]
    ps = [p for p, _ in fac]
    # zeta_m^j = prod_i zeta_{q_i}^{x_i j}, x_i = (m/q_i)^{-1} mod q_i
    units = [pow(m // q, -1, q) for q in qs]
    j = np.arange(m)
    flat = np.zeros(m, dtype=np.int64)
    for q, x in zip(qs, units):
        flat = flat * q + (x * j) % q
    return tuple(qs), tuple(ps), flat


def _tensor_reduce(counts: np.ndarray, m: int) -> np.ndarray:
    if m == 1:
        return counts.reshape(1)
    qs, ps, flat = _tensor_layout(m)
    arr = np.zeros(m, dtype=counts.dtype)
    arr[flat] = counts
    arr = arr.reshape(qs)
    for axis, (q, p) in enumerate(zip(qs, ps)):
        shape = arr.shape
        arr = arr.reshape(shape[:axis] + (p, q // p) + shape[axis + 1 :])
        # sum_u zeta_q^{u q/p + v} = 0: drop coset u = p-1 into the others
        last = np.take(arr, [p - 1], axis=axis)
        keep = np.take(arr, range(p - 1), axis=axis) - last
        arr = keep.reshape(shape[:axis] + ((p - 1) * (q // p),) + shape[axis + 1 :])
    return arr.reshape(-1)


def vanishes_at_primitive_root(counts: Sequence[int] | np.ndarray, m: int) -> bool:
    """True iff sum_j counts[j] zeta_m^j == 0, counts indexed by j mod m."""
    arr = np.asarray(counts)
    if arr.dtype.kind not in "iu":
        arr = np.array([int(c) for c in counts], dtype=object)
    elif arr.dtype.kind == "u":
        arr = arr.astype(np.int64)
    if len(arr) != m:
        raise ValueError(f"expected {m} counts, got {len(arr)}")
    return not np.any(_tensor_reduce(arr, m))


# ---------------------------------------------------------------------------
# Q_n at roots of unity
# ---------------------------------------------------------------------------


def _table(n: int | BetaTable) -> BetaTable:
    return n if isinstance(n, BetaTable) else build_beta_table(n)


def residue_counts(table: BetaTable, m: int) -> np.ndarray:
    return np.bincount(table.residues(m).astype(np.int64), minlength=m)


def q_at_root(n: int | BetaTable, m: int) -> CyclotomicInt:
    """Q_n(omega) for a primitive m-th root omega, as an exact element of Z[omega]."""
    table = _table(n)
    return CyclotomicInt.from_exponent_counts(m, residue_counts(table, m).tolist())


def divides(n: int | BetaTable, m: int) -> bool:
    table = _table(n)
    return vanishes_at_primitive_root(residue_counts(table, m), m)


def derivative_weights(table: BetaTable, m: int) -> list[int]:
    """b_j = sum of beta over S with beta = j mod m; omega Q'(omega) = sum_j b_j omega^j."""
    return grouped_sums(table.values, table.residues(m).astype(np.int64), m)


def multiplicity_at_least_2(n: int | BetaTable, m: int) -> bool:
    table = _table(n)
    if not divides(table, m):
        return False
    weights = np.array(derivative_weights(table, m), dtype=object)
    return vanishes_at_primitive_root(weights, m)


def reflection_conditions_hold(counts: Sequence[int], m: int | None = None) -> bool:
    """a_j = a_{-j} and a_j = a_{m/2 - j} for all j (sufficient for Phi_m | Q_n)."""
    if hasattr(counts, "counts"):
        m = counts.m
        counts = counts.counts
    m = len(counts) if m is None else m
    if m % 2:
        raise ValueError("the reflection conditions need an even modulus")
    half = m // 2
    return all(counts[j] == counts[-j % m] and counts[j] == counts[(half - j) % m] for j in range(m))


# ---------------------------------------------------------------------------
# scanning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorEntry:
    m: int
    multiplicity: str  # "1", "2+" or "?" when multiplicity was not tested


@dataclass
class FactorReport:
    n: int
    m_max: int
    even_only: bool
    entries: list[FactorEntry] = field(default_factory=list)

    def indices(self) -> list[int]:
        return [e.m for e in self.entries]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m_max": self.m_max,
            "even_only": self.even_only,
            "factors": [{"m": e.m, "multiplicity": e.multiplicity} for e in self.entries],
        }


def candidate_indices(m_max: int, even_only: bool = True) -> list[int]:
    if even_only:
        return [1] + list(range(2, m_max + 1, 2))
    return list(range(1, m_max + 1))


def scan_factors(
    n: int | BetaTable,
    m_max: int = 10_000,
    even_only: bool = True,
    with_multiplicity: bool = True,
    workers: int = 1,
) -> FactorReport:
    """All m <= m_max with Phi_m | Q_n, tagged with multiplicity 1 or 2+."""
    table = _table(n)
    values = table.values

    def test(m: int) -> FactorEntry | None:
        res = (values % np.uint64(m)).astype(np.int64)
        counts = np.bincount(res, minlength=m)
        if not vanishes_at_primitive_root(counts, m):
            return None
        if not with_multiplicity:
            return FactorEntry(m, "?")
        weights = np.array(grouped_sums(values, res, m), dtype=object)
        return FactorEntry(m, "2+" if vanishes_at_primitive_root(weights, m) else "1")

    candidates = candidate_indices(m_max, even_only)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(test, candidates))
    else:
        results = [test(m) for m in candidates]
    entries = [r for r in results if r is not None]
    return FactorReport(table.n, m_max, even_only, entries)
