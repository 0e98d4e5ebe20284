"""Descent set statistics of permutations and the cyclotomic factors of Q_n(t)."""

from .beta import (
    EXACT_MAX_N,
    BetaTable,
    CacheFormatError,
    ExactRangeError,
    beta_single,
    build_beta_table,
    build_residue_table,
    flag_f,
    load_residue_table,
    load_table,
    odd_count,
    residue_histogram,
    rho,
    save_residue_table,
    save_table,
    verify_macmahon,
    weighted_histogram,
)
from .cdindex import AbPolynomial, CdPolynomial, NotCdPolynomialError, ab_index, ab_to_cd, cd_index
from .combinat import Composition, DescentSet, IntPolynomial, cyclotomic_polynomial, euler_zigzag
from .cyclotomic import (
    CyclotomicInt,
    FactorReport,
    divides,
    multiplicity_at_least_2,
    q_at_root,
    scan_factors,
)
from .delta import complex_census, reduced_euler_char_mod2, verify_euler_parity
from .qsym import QsymModP, beta_mod_p_via_qsym, boolean_qsym_mod_p, quasi_shuffle_product
from .tables import verify_table6
from .witnesses import (
    FactorWitness,
    cross_check_witnesses,
    exponent_classes_two_digit,
    find_one_digit_witnesses,
    find_three_digit_witnesses,
    find_two_digit_witnesses,
    rule_witness,
)

__version__ = "0.1.0"
