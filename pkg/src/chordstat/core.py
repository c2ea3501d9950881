"""Shared domain types and exact combinatorial primitives.

All counting functions return Python integers (arbitrary precision) and are
safe to use inside exact rational computations.  Floating-point fast paths
are provided separately and clearly named (``log_*``, ``*_approx``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Deal:
    """A row of 2n cards, each label in 1..n appearing exactly twice.

    Colors are derived, never stored: the first occurrence of a label is the
    "blue" card, the second the "red" one.
    """

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) % 2 != 0 or not self.labels:
            raise ValueError("a deal needs a positive even number of cards")
        n = len(self.labels) // 2
        seen: dict[int, int] = {}
        for lab in self.labels:
            if not 1 <= lab <= n:
                raise ValueError(f"label {lab} outside 1..{n}")
            seen[lab] = seen.get(lab, 0) + 1
        if any(c != 2 for c in seen.values()) or len(seen) != n:
            raise ValueError("every label must appear exactly twice")

    @property
    def n(self) -> int:
        return len(self.labels) // 2

    def red_positions(self) -> tuple[int, ...]:
        """1-based positions of second occurrences, in row order."""
        seen: set[int] = set()
        reds = []
        for pos, lab in enumerate(self.labels, start=1):
            if lab in seen:
                reds.append(pos)
            else:
                seen.add(lab)
        return tuple(reds)

    def is_standard(self) -> bool:
        """True if red cards appear in increasing label order."""
        seen: set[int] = set()
        expect = 1
        for lab in self.labels:
            if lab in seen:
                if lab != expect:
                    return False
                expect += 1
            else:
                seen.add(lab)
        return True

    def to_json(self) -> list[int]:
        return list(self.labels)

    @classmethod
    def from_json(cls, data: Iterable[int]) -> "Deal":
        return cls(tuple(int(x) for x in data))


@dataclass(frozen=True)
class ChordDiagram:
    """A perfect matching of the points 1..2n, each pair stored (left, right)."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        m = 2 * len(pairs)
        points = set()
        for left, right in pairs:
            if not left < right:
                raise ValueError(f"pair ({left},{right}) must satisfy left < right")
            points.update((left, right))
        if points != set(range(1, m + 1)):
            raise ValueError("pairs must partition 1..2n")

    @property
    def n(self) -> int:
        return len(self.pairs)

    def to_json(self) -> list[list[int]]:
        return [[a, b] for a, b in self.pairs]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[int]]) -> "ChordDiagram":
        return cls(tuple((int(a), int(b)) for a, b in data))


@dataclass(frozen=True)
class BlockProfile:
    """Block lengths of a deal in row order, plus the count of each length.

    The k-th block ends at the k-th red card, so a deal of n pairs has
    exactly n blocks whose lengths sum to 2n.
    """

    lengths: tuple[int, ...]
    counts: dict[int, int] = field(compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(self.lengths))
        counts: dict[int, int] = {}
        for length in self.lengths:
            counts[length] = counts.get(length, 0) + 1
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return len(self.lengths)

    def count(self, i: int) -> int:
        return self.counts.get(i, 0)

    def even_count(self) -> int:
        """Total number of blocks of even length."""
        return sum(c for length, c in self.counts.items() if length % 2 == 0)


@dataclass(frozen=True)
class GameStats:
    """Outcome of optimal play: total rounds, lucky moves, first-match position."""

    length: int
    lucky: int
    first_match: int
    trace: tuple | None = None


# ---------------------------------------------------------------------------
# exact integer primitives
# ---------------------------------------------------------------------------

def binomial(n: int, k: int) -> int:
    """C(n, k), with value 0 outside 0 <= k <= n (including n < 0).

    The free-range convention keeps summation identities clean: sums over k
    may run over any range without explicit bounds handling.
    """
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling_factorial(n: int, m: int) -> int:
    """n(n-1)...(n-m+1); equals 1 when m == 0, and 0 once a factor hits zero."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = 1
    for j in range(m):
        out *= n - j
    return out


def double_factorial_odd(n: int) -> int:
    """(2n-1)!! = 1*3*5*...*(2n-1), the number of perfect matchings of 2n points."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1
    for j in range(1, 2 * n, 2):
        out *= j
    return out


def log_falling_factorial(n: int, m: int) -> float:
    """Floating-point fast path: log of (n)_m via log-gamma.  Needs 0 <= m <= n."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    if m == 0:
        return 0.0
    return math.lgamma(n + 1) - math.lgamma(n - m + 1)


@dataclass(frozen=True)
class FallingFactorialApprox:
    """Approximation of (n)_m by n^m * exp(-C(m,2)/n), with log form and error bound."""

    value: float
    log_value: float
    rel_error_bound: float


def falling_factorial_ratio_approx(n: int, m: int) -> FallingFactorialApprox:
    """Approximate (n)_m by n^m * exp(-C(m,2)/n).

    The relative error is of order m^3/n^2 (reported as the bound); it is 0
    for m <= 1 where the approximation is exact.  ``value`` is ``inf`` when
    n^m overflows a double; ``log_value`` is always finite.
    """
    if m < 0 or m > n:
        raise ValueError("need 0 <= m <= n")
    if n <= 0:
        raise ValueError("n must be positive")
    log_value = m * math.log(n) - (m * (m - 1) / 2) / n
    try:
        value = math.exp(log_value)
    except OverflowError:
        value = math.inf
    bound = 0.0 if m <= 1 else m**3 / n**2
    return FallingFactorialApprox(value=value, log_value=log_value, rel_error_bound=bound)


# ---------------------------------------------------------------------------
# binomial sum identities
# ---------------------------------------------------------------------------

def binomial_sum_single(N: int, i: int, j: int) -> int:
    """Closed form C(N+1, i+j+1) of the diagonal convolution sum
    sum_k C(N-k, i) * C(k, j)."""
    if min(N, i, j) < 0:
        raise ValueError("arguments must be nonnegative")
    return binomial(N + 1, i + j + 1)


def binomial_sum_single_terms(N: int, i: int, j: int) -> int:
    """Term-by-term evaluation of sum_k C(N-k, i) * C(k, j) (test oracle)."""
    if min(N, i, j) < 0:
        raise ValueError("arguments must be nonnegative")
    return sum(binomial(N - k, i) * binomial(k, j) for k in range(N + 1))


def binomial_sum_double(N: int, i: int, j: int, l: int) -> int:
    """Closed form C(i+j, i) * C(N+1, i+j+l+1) of
    sum_k C(k, l) * C(N-k, i) * C(N-k-i, j)."""
    if min(N, i, j, l) < 0:
        raise ValueError("arguments must be nonnegative")
    return binomial(i + j, i) * binomial(N + 1, i + j + l + 1)


def binomial_sum_double_terms(N: int, i: int, j: int, l: int) -> int:
    """Term-by-term evaluation of sum_k C(k, l) * C(N-k, i) * C(N-k-i, j)."""
    if min(N, i, j, l) < 0:
        raise ValueError("arguments must be nonnegative")
    return sum(
        binomial(k, l) * binomial(N - k, i) * binomial(N - k - i, j)
        for k in range(N + 1)
    )


def split_allocation_count(x: int, y: int) -> int:
    """6*C(x+y-1, y) + 3*C(x+y, y+1) + C(x+y+1, y+2).

    Two mirrored evaluations combine into a pure factorial ratio:
    split_allocation_count(i, j) + split_allocation_count(j, i)
    == (i+j+4)! / ((i+2)! (j+2)!)
    for every (i, j) except the degenerate corner (0, 0), where no integer
    value of the left-hand side can make the identity true.
    """
    if x < 0 or y < 0:
        raise ValueError("arguments must be nonnegative")
    return (
        6 * binomial(x + y - 1, y)
        + 3 * binomial(x + y, y + 1)
        + binomial(x + y + 1, y + 2)
    )


def split_allocation_identity_rhs(i: int, j: int) -> Fraction:
    """(i+j+4)! / ((i+2)! (j+2)!) as an exact rational (always an integer)."""
    return Fraction(
        math.factorial(i + j + 4), math.factorial(i + 2) * math.factorial(j + 2)
    )
