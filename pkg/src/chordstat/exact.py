"""Exact rational laws and moments for the first-match position and block
counts; ground-truth oracles for the Monte Carlo suites.

Everything here is computed with arbitrary-precision integers and
fractions; asymptotic or floating-point companions are named ``*_leading``
or ``*_upper``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import binomial, double_factorial_odd, falling_factorial

TABLE_CAP = 2000


# ---------------------------------------------------------------------------
# first-match counts a(n, j): standard deals whose first block has length j
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FirstMatchTable:
    """Rows n = 1..n_max of first-match counts, row n covering 2 <= j <= n+1.

    Row n counts the standard deals of n pairs whose first red card sits at
    position j; each row sums to (2n-1)!!.
    """

    n_max: int
    rows: tuple[tuple[int, ...], ...]

    def count(self, n: int, j: int) -> int:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n={n} outside table range 1..{self.n_max}")
        if j < 2 or j > n + 1:
            return 0
        return self.rows[n - 1][j - 2]

    def row(self, n: int) -> tuple[int, ...]:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n={n} outside table range 1..{self.n_max}")
        return self.rows[n - 1]

    def row_sum(self, n: int) -> int:
        return sum(self.row(n))


def first_match_counts(n_max: int, cap: int = TABLE_CAP) -> FirstMatchTable:
    """Build the count table by the two-term recurrence
    a(n,j) = (2n-1-j) a(n-1,j) + (j-1) a(n-1,j-1), a(1,2) = 1."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > cap:
        raise ValueError(f"n_max={n_max} exceeds table cap {cap}")
    rows: list[tuple[int, ...]] = [(1,)]
    prev = {2: 1}
    for n in range(2, n_max + 1):
        cur: dict[int, int] = {}
        for j in range(2, n + 2):
            cur[j] = (2 * n - 1 - j) * prev.get(j, 0) + (j - 1) * prev.get(j - 1, 0)
        rows.append(tuple(cur[j] for j in range(2, n + 2)))
        prev = cur
    return FirstMatchTable(n_max=n_max, rows=tuple(rows))


def first_match_pmf(n: int, t: int) -> Fraction:
    """P(first block has length t), exactly:
    ((t-1)/(2n-t+1)) * 2^(t-1) (n)_(t-1) / (2n)_(t-1); zero outside 2..n+1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t < 2 or t > n + 1:
        return Fraction(0)
    num = (t - 1) * 2 ** (t - 1) * falling_factorial(n, t - 1)
    den = (2 * n - t + 1) * falling_factorial(2 * n, t - 1)
    return Fraction(num, den)


def joint_first_blocks_pmf(n: int, ts) -> Fraction:
    """Exact joint probability that the first k blocks have lengths ts.

    Infeasible length vectors get probability zero rather than an error.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ts = tuple(int(t) for t in ts)
    k = len(ts)
    if k == 0:
        raise ValueError("need at least one block length")
    if k > n or any(t < 1 for t in ts):
        return Fraction(0)
    t = sum(ts)
    if t > 2 * n:
        return Fraction(0)
    # number of admissible positions for each successive blue partner
    positions = 1
    tau = 0
    for j, tj in enumerate(ts, start=1):
        tau += tj
        factor = tau - (2 * j - 1)
        if factor <= 0:
            return Fraction(0)
        positions *= factor
    num = 2 ** (t - k) * falling_factorial(n, t - k) * positions
    den = falling_factorial(2 * n, t - k) * falling_factorial(2 * n - t + k, k)
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# moments of the first-match position
# ---------------------------------------------------------------------------

def first_match_mean(n: int) -> Fraction:
    """E[first match] = 4^n / C(2n, n), exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(4**n, binomial(2 * n, n))


def first_match_factorial_moment(n: int, r: int) -> Fraction:
    """r-th falling-factorial moment of the first-match position.

    Uses the coupled recurrence
    E_n(r) = ((2n-1+r)/(2n-1)) E_{n-1}(r) + (r(r-1)/(2n-1)) E_{n-1}(r-1)
    with the size-1 game deterministic at position 2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if r < 0:
        raise ValueError("r must be >= 0")
    # moments[s] = E[(D_{m,1})_s] for the current m
    moments = [Fraction(falling_factorial(2, s)) for s in range(r + 1)]
    for m in range(2, n + 1):
        new = [Fraction(1)]
        for s in range(1, r + 1):
            new.append(
                Fraction(2 * m - 1 + s, 2 * m - 1) * moments[s]
                + Fraction(s * (s - 1), 2 * m - 1) * moments[s - 1]
            )
        moments = new
    return moments[r]


def first_match_second_moment_closed(n: int) -> Fraction:
    """Closed form 2(2n+1) - ((2n+1)/(n+1)) 4^(n+1) / C(2n+2, n+1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2 * (2 * n + 1) - Fraction(2 * n + 1, n + 1) * Fraction(
        4 ** (n + 1), binomial(2 * n + 2, n + 1)
    )


def first_match_third_moment_closed(n: int) -> Fraction:
    """Closed form 6 ((n+2) n! 2^n / (2n-1)!! - 4n - 2).

    Equivalent to the Gamma-function form with Gamma(n + 1/2) expanded as
    sqrt(pi) (2n-1)!! / 2^n, so the whole expression stays rational.  Grows
    like 6 sqrt(pi) n^(3/2).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lead = Fraction((n + 2) * math.factorial(n) * 2**n, double_factorial_odd(n))
    return 6 * (lead - 4 * n - 2)


def first_match_var(n: int) -> Fraction:
    """var = E[(D)_2] + E[D] - E[D]^2, exactly; ~ (4 - pi) n."""
    m1 = first_match_mean(n)
    m2 = first_match_factorial_moment(n, 2)
    return m2 + m1 - m1 * m1


def first_match_mean_float(n: int) -> float:
    """Log-gamma fast path for 4^n / C(2n, n); good far beyond table sizes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    log_c = math.lgamma(2 * n + 1) - 2 * math.lgamma(n + 1)
    return math.exp(n * math.log(4.0) - log_c)


def first_match_var_float(n: int) -> float:
    """Floating-point variance via the closed second moment; ~ (4 - pi) n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    log_c = math.lgamma(2 * n + 3) - 2 * math.lgamma(n + 2)
    m2 = 2 * (2 * n + 1) - (2 * n + 1) / (n + 1) * math.exp(
        (n + 1) * math.log(4.0) - log_c
    )
    m1 = first_match_mean_float(n)
    return m2 + m1 - m1 * m1


# ---------------------------------------------------------------------------
# expected block counts
# ---------------------------------------------------------------------------

def _pair_term_first(n: int, i: int) -> Fraction:
    """Expected indicator that two fixed red cards delimit an interior block
    of length i with both leading blue partners before the first of them."""
    num = 2 ** (i + 2) * falling_factorial(n - 2, i - 1)
    den = i * (i + 1) * (i + 2) * falling_factorial(2 * n, i)
    return Fraction(num, den)


def _pair_term_second(n: int, i: int) -> Fraction:
    """Companion term for configurations with a straddling blue partner;
    present only for 2 <= i <= n."""
    num = 2**i * falling_factorial(n - 2, i - 2)
    den = i * falling_factorial(2 * n, i)
    return Fraction(num, den)


def block_count_mean(n: int, i: int) -> Fraction:
    """E[number of blocks of length i] for a uniform deal of n pairs, exact.

    Sum of the first-block indicator and n(n-1) times the interior pair
    terms; the second pair term exists only for 2 <= i <= n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if i < 1 or i > n + 1:
        return Fraction(0)
    xi = first_match_pmf(n, i)
    pair = _pair_term_first(n, i)
    if 2 <= i <= n:
        pair += _pair_term_second(n, i)
    return xi + n * (n - 1) * pair


def block_count_mean_combined(n: int, i: int) -> Fraction:
    """Merged closed form of the two interior pair terms (valid for i >= 2):
    (4n/(i+2)_3) * (2^i (n)_i / (2n)_i) * (1 + (i^2 - i + 2)/(4n))."""
    if i < 2:
        raise ValueError("combined form needs i >= 2")
    lead = Fraction(4 * n, i * (i + 1) * (i + 2))
    ratio = Fraction(2**i * falling_factorial(n, i), falling_factorial(2 * n, i))
    return lead * ratio * (1 + Fraction(i * i - i + 2, 4 * n))


def block_count_mean_leading(n: int, i: int) -> float:
    """Leading-order mean 4n / (i(i+1)(i+2))."""
    if i < 1:
        return 0.0
    return 4.0 * n / (i * (i + 1) * (i + 2))


def block_count_mean_upper(n: int, i: int) -> float:
    """Rigorous upper bound: first-block term plus 4 e^(1/2) n / (i(i+1)(i+2))."""
    if i < 1 or i > n + 1:
        return 0.0
    return float(first_match_pmf(n, i)) + 4.0 * math.exp(0.5) * n / (
        i * (i + 1) * (i + 2)
    )
