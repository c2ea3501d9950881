"""Limiting distributions, covariance structure, and named constants.

Reference functions are double precision at the surface; anything entering
an exactness test is computed with rationals internally (the alternating
covariance series cancels catastrophically in floats for larger indices).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# limit laws
# ---------------------------------------------------------------------------

def weibull2_pdf(x: float) -> float:
    """Density 2x exp(-x^2) for x > 0, else 0 (first-match limit law)."""
    if x <= 0.0:
        return 0.0
    return 2.0 * x * math.exp(-x * x)


def weibull2_cdf(x: float) -> float:
    """CDF 1 - exp(-x^2) for x >= 0, else 0."""
    if x <= 0.0:
        return 0.0
    return -math.expm1(-x * x)


def joint_block_limit_pdf(xs) -> float:
    """Joint density of the first k normalized block lengths:
    2^k x1 (x1+x2) ... (x1+...+xk) exp(-(x1+...+xk)^2) on the nonnegative
    orthant, zero elsewhere."""
    xs = tuple(float(x) for x in xs)
    k = len(xs)
    if k == 0:
        raise ValueError("need at least one coordinate")
    if any(x < 0 for x in xs):
        return 0.0
    prod = 1.0
    acc = 0.0
    for x in xs:
        acc += x
        prod *= acc
    return 2.0**k * prod * math.exp(-acc * acc)


def poisson_ln2_pmf(k: int) -> float:
    """pmf of Poisson(ln 2): (ln 2)^k / (2 k!) (lucky-move limit law)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return LN2**k / (2.0 * math.factorial(k))


def normal_cdf(x: float, mean: float = 0.0, sd: float = 1.0) -> float:
    return 0.5 * (1.0 + math.erf((x - mean) / (sd * math.sqrt(2.0))))


@dataclass(frozen=True)
class LimitLaw:
    """A named limit law with its parameters, for report metadata."""

    kind: str  # weibull2 | joint_k | gaussian_blocks | game_length_normal | poisson_ln2
    params: tuple = ()

    def cdf(self, x: float) -> float:
        if self.kind == "weibull2":
            return weibull2_cdf(x)
        if self.kind == "game_length_normal":
            mean, sd = self.params
            return normal_cdf(x, mean, sd)
        raise ValueError(f"no cdf for law {self.kind}")

    def pmf(self, k: int) -> float:
        if self.kind == "poisson_ln2":
            return poisson_ln2_pmf(k)
        raise ValueError(f"no pmf for law {self.kind}")


# ---------------------------------------------------------------------------
# block-count covariance matrix
# ---------------------------------------------------------------------------

def _fall3(i: int) -> int:
    return i * (i + 1) * (i + 2)


def _falling(top: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= top - j
    return out


def block_cov_exact(i: int, j: int) -> Fraction:
    """Limit covariance of normalized block counts, closed form, exact.

    Indexing a type-0 coordinate gives a degenerate (zero) entry.
    """
    if i < 0 or j < 0:
        raise ValueError("indices must be >= 0")
    if i == 0 or j == 0:
        return Fraction(0)
    if i == j:
        f3 = _fall3(j)
        return Fraction(4, f3) + Fraction(16, f3 * f3) - Fraction(24, _falling(2 * j + 2, 4))
    return Fraction(16, _fall3(i) * _fall3(j)) - Fraction(24, _falling(i + j + 2, 4))


def block_cov(i: int, j: int) -> float:
    return float(block_cov_exact(i, j))


def block_cov_doublesum_exact(i: int, j: int) -> Fraction:
    """The same covariance through the alternating double sum inherited from
    the urn eigen-decomposition; exact rationals throughout, since the terms
    reach 10^15 while the result is order 10^-3."""
    if i < 1 or j < 1:
        raise ValueError("indices must be >= 1")
    total = Fraction(0)
    for k in range(i):
        for l in range(j):
            sign = -1 if (k + l) % 2 else 1
            coef = Fraction(
                sign * math.comb(i - 1, k) * math.comb(j - 1, l), k + l + 4
            )
            inner = (
                Fraction(2 * math.factorial(k + l + 4),
                         math.factorial(k + 3) * math.factorial(l + 3))
                - 1
                - Fraction((k + 1) * (l + 1), (k + 3) * (l + 3))
            )
            total += coef * inner
    return 2 * total


def block_cov_doublesum(i: int, j: int) -> float:
    return float(block_cov_doublesum_exact(i, j))


def block_cov_matrix(k: int) -> np.ndarray:
    """Leading k x k minor of the covariance matrix as floats."""
    return np.array([[block_cov(i, j) for j in range(1, k + 1)] for i in range(1, k + 1)])


# ---------------------------------------------------------------------------
# variance of the even-block count
# ---------------------------------------------------------------------------

def even_block_var_limit() -> float:
    """(4 ln 2)^2 + 8 ln 2 - 13, the published closed constant (~0.2324)."""
    return (4 * LN2) ** 2 + 8 * LN2 - 13


def even_block_var_consistent() -> float:
    """(4 ln 2)^2 - 8 ln 2 - 2 (~0.1421): the value the covariance matrix
    itself sums to.

    Summing block_cov(2i, 2j) over all i, j >= 1 in closed form gives this
    constant, not the published one; the two derivations in the source
    differ in the cross-term denominator, and simulation sides with the
    covariance matrix.  Both constants are exposed so the discrepancy stays
    visible and testable.
    """
    return (4 * LN2) ** 2 - 8 * LN2 - 2


def even_block_var_series(kmax: int = 2000) -> float:
    """Truncated sum of block_cov(2i, 2j) over 1 <= i, j <= kmax.

    The tail decays like kmax^-2 through the alternating cross terms, so
    kmax = 2000 is far inside 1e-6.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    i = np.arange(1, kmax + 1, dtype=np.float64)
    f3 = 1.0 / ((2 * i + 2) * (2 * i + 1) * (2 * i))
    diag = 4.0 * f3.sum() + 16.0 * float(f3.sum()) ** 2
    # cross terms - 24 / (2i + 2j + 2)_4 grouped by m = i + j
    m = np.arange(2, 2 * kmax + 1, dtype=np.float64)
    cnt = np.minimum(m - 1, 2 * kmax - m + 1)
    top = 2 * m + 2
    third = (cnt / (top * (top - 1) * (top - 2) * (top - 3))).sum()
    return diag - 24.0 * third


def even_block_var_display_sums(kmax: int = 2000) -> float:
    """The three partial-fraction sums exactly as displayed in the source
    derivation of the constant, truncated at kmax.

    Its cross term uses (2i+2j+4)_4 and therefore reproduces
    even_block_var_limit(), not the covariance-matrix sum.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    i = np.arange(1, kmax + 1, dtype=np.float64)
    f3 = 1.0 / ((2 * i + 2) * (2 * i + 1) * (2 * i))
    m = np.arange(2, 2 * kmax + 1, dtype=np.float64)
    cnt = m - 1
    cnt = np.minimum(cnt, 2 * kmax - m + 1)
    top = 2 * m + 4
    third = (cnt / (top * (top - 1) * (top - 2) * (top - 3))).sum()
    return 4.0 * f3.sum() + 16.0 * float(f3.sum()) ** 2 - 24.0 * third


# ---------------------------------------------------------------------------
# named constants
# ---------------------------------------------------------------------------

def block_fraction_limit(i: int) -> float:
    """Limit fraction of blocks of length i per pair: 4 / (i(i+1)(i+2))."""
    if i < 1:
        raise ValueError("i must be >= 1")
    return 4.0 / _fall3(i)


def named_constants() -> dict[str, float]:
    """The closed constants used as Monte Carlo targets."""
    return {
        "even_block_mean_rate": 3.0 - 4.0 * LN2,   # mean even-length blocks per pair
        "game_length_rate": 3.0 - 2.0 * LN2,       # mean rounds per pair
        "good_interval_rate": 2.0 * LN2,           # mean good intervals per pair
        "first_match_mean_scaled": math.sqrt(math.pi) / 2.0,
        "lucky_mean": LN2,
        "even_block_var": even_block_var_limit(),
        "even_block_var_consistent": even_block_var_consistent(),
    }
