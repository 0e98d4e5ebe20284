"""Exact and modular tables of descent set statistics.

Tables are numpy arrays indexed by descent-set mask in plain binary order.
Exact tables hold uint64 values; the bulk transform runs in wraparound
arithmetic, which is sound because every final value is below 2**64 for
n <= 24 even though intermediate flag f-vector entries are not.
"""

from __future__ import annotations

import functools
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .combinat import DescentSet, binomial, mask_to_composition, multinomial, subsets_of

EXACT_MAX_N = 24


class ExactRangeError(ValueError):
    """Raised when exact mode is asked for n beyond EXACT_MAX_N."""


class CacheFormatError(ValueError):
    pass


@dataclass(frozen=True)
class BetaTable:
    n: int
    values: np.ndarray  # uint64, length 2**(n-1)

    def __post_init__(self):
        if len(self.values) != 1 << (self.n - 1):
            raise ValueError(f"table for n={self.n} needs {1 << (self.n - 1)} entries")
        self.values.flags.writeable = False

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, s: int | DescentSet) -> int:
        mask = s.mask if isinstance(s, DescentSet) else s
        return int(self.values[mask])

    def residues(self, m: int) -> np.ndarray:
        return self.values % np.uint64(m)

    def max(self) -> int:
        return int(self.values.max())

    def total(self) -> int:
        """Exact sum of all entries (n! by construction)."""
        return exact_sum(self.values)


@dataclass(frozen=True)
class ResidueHistogram:
    n: int
    m: int
    counts: tuple[int, ...]

    def __getitem__(self, j: int) -> int:
        return self.counts[j % self.m]


@dataclass(frozen=True)
class WeightedHistogram:
    n: int
    m: int
    sums: tuple[int, ...]

    def __getitem__(self, j: int) -> int:
        return self.sums[j % self.m]


# ---------------------------------------------------------------------------
# single-entry routes
# ---------------------------------------------------------------------------


def flag_f(n: int, s: DescentSet | int) -> int:
    mask = s.mask if isinstance(s, DescentSet) else s
    return multinomial(mask_to_composition(n, mask))


def beta_single(n: int, s: DescentSet | int) -> int:
    """Inclusion-exclusion over the subsets of S with exact signed integers."""
    mask = s.mask if isinstance(s, DescentSet) else s
    size = mask.bit_count()
    total = 0
    for t in subsets_of(mask):
        term = multinomial(mask_to_composition(n, t))
        total += -term if (size - t.bit_count()) & 1 else term
    return total


# ---------------------------------------------------------------------------
# bulk routes
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _flag_f_wrapped(n: int) -> np.ndarray:
    # masks whose largest element is s occupy [2^(s-1), 2^s) and equal
    # C(n, s) times the flag f-vector of B_s on the lower bits
    out = np.empty(1 << (n - 1), dtype=np.uint64)
    out[0] = 1
    for s in range(1, n):
        lo = 1 << (s - 1)
        c = np.uint64(binomial(n, s) % (1 << 64))
        out[lo : 2 * lo] = _flag_f_wrapped(s) * c
    out.flags.writeable = False
    return out


def _flag_f_mod(n: int, m: int) -> np.ndarray:
    tables = [None, np.ones(1, dtype=np.uint64)]
    mm = np.uint64(m)
    for k in range(2, n + 1):
        t = np.empty(1 << (k - 1), dtype=np.uint64)
        t[0] = 1 % m
        for s in range(1, k):
            lo = 1 << (s - 1)
            t[lo : 2 * lo] = tables[s] * np.uint64(binomial(k, s) % m) % mm
        tables.append(t)
    return tables[n] % mm


def _signed_subset_transform(values: np.ndarray, n: int, m: int | None = None) -> None:
    """In place: v[S] <- sum over T subset of S of (-1)^|S-T| v[T]."""
    bits = n - 1
    for i in range(bits):
        view = values.reshape(-1, 2, 1 << i)
        if m is None:
            view[:, 1, :] -= view[:, 0, :]
        else:
            mm = np.uint64(m)
            view[:, 1, :] = (view[:, 1, :] + (mm - view[:, 0, :])) % mm


@functools.lru_cache(maxsize=4)
def build_beta_table(n: int) -> BetaTable:
    if not 1 <= n <= EXACT_MAX_N:
        raise ExactRangeError(
            f"exact tables stop at n={EXACT_MAX_N}; use build_residue_table for n={n}"
        )
    values = _flag_f_wrapped(n).copy()
    _signed_subset_transform(values, n)
    return BetaTable(n, values)


def build_residue_table(n: int, m: int) -> np.ndarray:
    """beta_n(S) mod m for every mask, computed entirely in modular arithmetic."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m >= 1 << 32:
        raise ValueError("residue mode keeps products below 2**64; m must be < 2**32")
    if n < 1:
        raise ValueError("n must be >= 1")
    values = _flag_f_mod(n, m)
    _signed_subset_transform(values, n, m)
    return values


# ---------------------------------------------------------------------------
# parity in bit-packed form
# ---------------------------------------------------------------------------

_INTRA_WORD_MASKS = (
    0x5555555555555555,
    0x3333333333333333,
    0x0F0F0F0F0F0F0F0F,
    0x00FF00FF00FF00FF,
    0x0000FFFF0000FFFF,
    0x00000000FFFFFFFF,
)


def _carry_free_masks(n: int) -> list[int]:
    """Masks S whose composition has pairwise disjoint binary supports.

    These are exactly the S with f_S odd: ordered set partitions of the
    binary digits of n, read off as partial sums.
    """
    powers = [1 << i for i in range(n.bit_length()) if n >> i & 1]
    out = []

    def extend(remaining: list[int], acc: int, mask: int):
        if not remaining:
            out.append(mask)
            return
        k = len(remaining)
        for pick in range(1, 1 << k):
            block = sum(remaining[j] for j in range(k) if pick >> j & 1)
            rest = [remaining[j] for j in range(k) if not pick >> j & 1]
            new_acc = acc + block
            extend(rest, new_acc, mask | (1 << (new_acc - 1)) if rest else mask)

    extend(powers, 0, 0)
    return out


def parity_bits(n: int) -> np.ndarray:
    """beta_n(S) mod 2 packed one bit per mask into uint64 words (little-endian bit order)."""
    nbits = n - 1
    words = np.zeros(max(1, (1 << nbits) >> 6), dtype=np.uint64)
    for mask in _carry_free_masks(n):
        words[mask >> 6] |= np.uint64(1 << (mask & 63))
    # mod 2 the signed transform is the plain subset-sum (zeta) transform
    for i in range(min(nbits, 6)):
        sel = np.uint64(_INTRA_WORD_MASKS[i])
        words ^= (words & sel) << np.uint64(1 << i)
    for i in range(6, nbits):
        view = words.reshape(-1, 2, 1 << (i - 6))
        view[:, 1, :] ^= view[:, 0, :]
    if nbits < 6:
        words &= np.uint64((1 << (1 << nbits)) - 1)
    return words


def odd_count(n: int) -> int:
    """Number of S in [n-1] with beta_n(S) odd."""
    return int(np.bitwise_count(parity_bits(n)).sum(dtype=np.int64))


def rho(n: int) -> Fraction:
    """Proportion of subsets with odd descent statistic."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(odd_count(n), 1 << (n - 1))


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------


def _limbs(values: np.ndarray):
    # 16-bit limbs keep float64 bincount exact: 2**16 * 2**30 entries < 2**53
    for limb in range(4):
        yield 16 * limb, ((values >> np.uint64(16 * limb)) & np.uint64(0xFFFF)).astype(np.float64)


def exact_sum(values: np.ndarray) -> int:
    return sum(int(part.sum()) << shift for shift, part in _limbs(values))


def grouped_sums(values: np.ndarray, bins: np.ndarray, m: int) -> list[int]:
    """Exact per-bin sums of uint64 values, bins in [0, m)."""
    out = [0] * m
    for shift, part in _limbs(values):
        sums = np.bincount(bins, weights=part, minlength=m)
        for j in np.flatnonzero(sums):
            out[j] += int(sums[j]) << shift
    return out


def residue_histogram(table: BetaTable | np.ndarray, m: int, n: int | None = None) -> ResidueHistogram:
    if isinstance(table, BetaTable):
        n = table.n
        res = table.residues(m)
    else:
        res = table % np.uint64(m)
        if n is None:
            n = len(table).bit_length()
    counts = np.bincount(res.astype(np.int64), minlength=m)
    return ResidueHistogram(n, m, tuple(int(c) for c in counts))


def weighted_histogram(table: BetaTable, m: int) -> WeightedHistogram:
    res = table.residues(m).astype(np.int64)
    return WeightedHistogram(table.n, m, tuple(grouped_sums(table.values, res, m)))


# ---------------------------------------------------------------------------
# MacMahon's multiplication theorem
# ---------------------------------------------------------------------------


@dataclass
class MacMahonReport:
    n: int
    checked: int
    passed: bool
    counterexample: tuple[int, int] | None = None


def verify_macmahon(n: int) -> MacMahonReport:
    """beta(S) + beta(S sym-diff {k}) = C(n,k) beta_k(S cap [k-1]) beta_{n-k}(shifted tail)."""
    if n > 14:
        raise ExactRangeError("MacMahon sweep is budgeted for n <= 14")
    tables = {j: [int(x) for x in build_beta_table(j).values] for j in range(1, n + 1)}
    big = tables[n]
    checked = 0
    for mask in range(1 << (n - 1)):
        for k in range(1, n):
            bit = 1 << (k - 1)
            lhs = big[mask] + big[mask ^ bit]
            head = mask & (bit - 1)
            tail = mask >> k
            rhs = binomial(n, k) * tables[k][head] * tables[n - k][tail]
            checked += 1
            if lhs != rhs:
                return MacMahonReport(n, checked, False, (mask, k))
    return MacMahonReport(n, checked, True)


# ---------------------------------------------------------------------------
# cache files
# ---------------------------------------------------------------------------

_EXACT_MAGIC = b"DSBT"
_RESIDUE_MAGIC = b"DSRT"
_VERSION = 1


def save_table(table: BetaTable, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = len(table.values)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_EXACT_MAGIC)
        fh.write(struct.pack("<IIQ", _VERSION, table.n, count))
        fh.write(table.values.astype("<u8").tobytes())
    tmp.replace(path)


def load_table(path: str | Path) -> BetaTable:
    data = Path(path).read_bytes()
    if len(data) < 20 or data[:4] != _EXACT_MAGIC:
        raise CacheFormatError(f"{path}: bad magic, not a beta table")
    version, n, count = struct.unpack_from("<IIQ", data, 4)
    if version != _VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if not 1 <= n <= 64 or count != 1 << (n - 1):
        raise CacheFormatError(f"{path}: header n={n} does not match count={count}")
    payload = data[20:]
    if len(payload) != 8 * count:
        raise CacheFormatError(f"{path}: payload has {len(payload)} bytes, expected {8 * count}")
    values = np.frombuffer(payload, dtype="<u8").astype(np.uint64)
    return BetaTable(n, values)


def _residue_width(m: int) -> int:
    return max(1, ((m - 1).bit_length() + 7) // 8)


def save_residue_table(values: np.ndarray, n: int, m: int, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    width = _residue_width(m)
    count = len(values)
    if count != 1 << (n - 1):
        raise ValueError("residue table length does not match n")
    raw = values.astype("<u8").view(np.uint8).reshape(count, 8)[:, :width]
    with open(path, "wb") as fh:
        fh.write(_RESIDUE_MAGIC)
        fh.write(struct.pack("<IIQQ", _VERSION, n, m, count))
        fh.write(np.ascontiguousarray(raw).tobytes())


def load_residue_table(path: str | Path) -> tuple[int, int, np.ndarray]:
    data = Path(path).read_bytes()
    if len(data) < 28 or data[:4] != _RESIDUE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic, not a residue table")
    version, n, m, count = struct.unpack_from("<IIQQ", data, 4)
    if version != _VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if not 1 <= n <= 64 or count != 1 << (n - 1) or m < 1:
        raise CacheFormatError(f"{path}: inconsistent header")
    width = _residue_width(m)
    payload = data[28:]
    if len(payload) != width * count:
        raise CacheFormatError(f"{path}: truncated payload")
    raw = np.zeros((count, 8), dtype=np.uint8)
    raw[:, :width] = np.frombuffer(payload, dtype=np.uint8).reshape(count, width)
    values = raw.reshape(-1).view("<u8").astype(np.uint64)
    if count and int(values.max()) >= m:
        raise CacheFormatError(f"{path}: residue out of range for m={m}")
    return n, m, values


__all__ = [
    "EXACT_MAX_N",
    "BetaTable",
    "CacheFormatError",
    "ExactRangeError",
    "MacMahonReport",
    "ResidueHistogram",
    "WeightedHistogram",
    "beta_single",
    "build_beta_table",
    "build_residue_table",
    "flag_f",
    "load_residue_table",
    "load_table",
    "odd_count",
    "parity_bits",
    "residue_histogram",
    "rho",
    "save_residue_table",
    "save_table",
    "verify_macmahon",
    "weighted_histogram",
    "exact_sum",
    "grouped_sums",
]

