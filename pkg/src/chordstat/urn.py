"""Generalized Polya urn with an immigration ball.

Ball types are 0, 1, 2, ...; the single type-0 ball is never consumed.
Drawing is activity-weighted: a type-i ball is drawn with weight i, the
type-0 ball with weight 1.  Drawing type i >= 1 replaces the ball by one of
type 1 and one of type i+1; drawing type 0 returns it along with a type-2
ball.  Driven by the gap choices of the insertion sampler this reproduces
the block-count evolution of a growing deal exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .sampler import RngStream, _as_generator


# ---------------------------------------------------------------------------
# state and replacement rule
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UrnState:
    """Value-type urn state: sorted (type, count) pairs plus the draw count."""

    counts: tuple[tuple[int, int], ...] = ((0, 1),)
    draws: int = 0

    def __post_init__(self) -> None:
        d = dict(self.counts)
        if d.get(0) != 1:
            raise ValueError("the urn must hold exactly one type-0 ball")
        if any(t < 0 or c < 0 for t, c in d.items()):
            raise ValueError("types and counts must be nonnegative")
        if sum(c for t, c in d.items() if t >= 1) != self.draws:
            raise ValueError("non-immigration ball count must equal the draw count")
        object.__setattr__(
            self, "counts", tuple(sorted((t, c) for t, c in d.items() if c > 0))
        )

    def count(self, typ: int) -> int:
        return dict(self.counts).get(typ, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def total_weight(self) -> int:
        """Total activity weight; grows by 2 per draw."""
        return 2 * self.draws + 1


def apply_draw(state: UrnState, typ: int) -> UrnState:
    """Replacement rule for a drawn type (the randomness-free half of a step)."""
    d = state.as_dict()
    if typ == 0:
        d[2] = d.get(2, 0) + 1
    else:
        if d.get(typ, 0) < 1:
            raise ValueError(f"no ball of type {typ} to draw")
        d[typ] -= 1
        d[1] = d.get(1, 0) + 1
        d[typ + 1] = d.get(typ + 1, 0) + 1
    return UrnState(counts=tuple(d.items()), draws=state.draws + 1)


def urn_step(state: UrnState, rng) -> tuple[UrnState, int]:
    """One activity-weighted draw plus replacement; returns (state', type)."""
    gen = _as_generator(rng)
    u = int(gen.integers(0, state.total_weight))
    if u == 0:
        typ = 0
    else:
        acc = 1
        typ = -1
        for t, c in state.counts:
            if t == 0:
                continue
            acc += t * c
            if u < acc:
                typ = t
                break
        assert typ >= 1
    return apply_draw(state, typ), typ


def urn_simulate(n: int, rng) -> UrnState:
    """n draws from the initial single-immigration-ball state.

    Keeps a Fenwick tree of activity weights so each draw costs O(log M)
    where M is the largest type seen.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    gen = _as_generator(rng)
    cap = 16
    counts = np.zeros(cap, dtype=np.int64)
    counts[0] = 1
    tree = _Fenwick(cap)
    tree.add(0, 1)  # type 0 has weight 1
    for k in range(1, n + 1):
        u = int(gen.integers(0, 2 * k - 1))
        typ = tree.search(u)
        if typ == 0:
            counts[2] += 1
            tree.add(2, 2)
            continue
        counts[typ] -= 1
        counts[1] += 1
        if typ + 1 >= cap:
            cap *= 2
            counts = np.concatenate([counts, np.zeros(cap // 2, dtype=np.int64)])
            counts[typ + 1] += 1
            weights = counts * np.arange(cap)
            weights[0] = 1
            tree = _Fenwick.from_weights(weights)
        else:
            counts[typ + 1] += 1
            tree.add(typ, -typ)
            tree.add(1, 1)
            tree.add(typ + 1, typ + 1)
    pairs = tuple((int(t), int(c)) for t, c in enumerate(counts) if c > 0)
    return UrnState(counts=pairs, draws=n)


class _Fenwick:
    """Integer Fenwick tree over slots 0..size-1 (size a power of two)."""

    def __init__(self, size: int):
        if size & (size - 1):
            raise ValueError("size must be a power of two")
        self.size = size
        self.tree = [0] * (size + 1)

    @classmethod
    def from_weights(cls, weights) -> "_Fenwick":
        size = len(weights)
        fw = cls(size)
        tree = fw.tree
        for i in range(1, size + 1):
            tree[i] += int(weights[i - 1])
            j = i + (i & -i)
            if j <= size:
                tree[j] += tree[i]
        return fw

    def add(self, pos: int, delta: int) -> None:
        pos += 1
        while pos <= self.size:
            self.tree[pos] += delta
            pos += pos & -pos

    def search(self, value: int) -> int:
        """Smallest slot whose cumulative weight exceeds ``value``."""
        pos = 0
        rem = value
        bit = self.size
        while bit:
            nxt = pos + bit
            if nxt <= self.size and self.tree[nxt] <= rem:
                rem -= self.tree[nxt]
                pos = nxt
            bit >>= 1
        return pos


# ---------------------------------------------------------------------------
# batch simulation (vectorized Fenwick across trials)
# ---------------------------------------------------------------------------

def urn_counts_batch(
    n: int,
    trials: int,
    seed: int,
    base_index: int = 0,
    max_type: int = 1024,
    chunk: int = 8192,
) -> np.ndarray:
    """(trials x max_type) final counts after n draws; row t uses stream
    (seed, base_index + t).

    The Fenwick layers are shared numpy arrays, so one draw step costs
    O(log max_type) vector operations for a whole chunk of trials.  Raises
    if any trial outgrows ``max_type`` (double it in that case).
    """
    if n < 0 or trials < 1:
        raise ValueError("need n >= 0 and trials >= 1")
    M = 1
    while M < max_type:
        M *= 2
    step_block = 2048  # uniforms are drawn this many steps at a time
    out = np.empty((trials, M), dtype=np.int32)
    for start in range(0, trials, chunk):
        stop = min(start + chunk, trials)
        T = stop - start
        gens = [RngStream(seed, base_index + start + t).generator() for t in range(T)]
        uniforms = np.empty((T, min(step_block, n)))
        counts = np.zeros((T, M), dtype=np.int32)
        counts[:, 0] = 1
        tree = np.zeros((T, M + 1), dtype=np.int32)
        _batch_fenwick_add(tree, np.zeros(T, dtype=np.int64), np.ones(T, dtype=np.int32))
        rows = np.arange(T)
        for k in range(1, n + 1):
            off = (k - 1) % step_block
            if off == 0:
                width = min(step_block, n - k + 1)
                for t in range(T):
                    uniforms[t, :width] = gens[t].random(width)
            total = 2 * k - 1
            u = np.minimum((uniforms[:, off] * total).astype(np.int64), total - 1)
            typ = _batch_fenwick_search(tree, u)
            if (typ >= M - 2).any():
                raise ValueError(f"type {int(typ.max())} reached max_type={M}")
            zero = typ == 0
            grow = ~zero
            if zero.any():
                zr = rows[zero]
                counts[zr, 2] += 1
                _batch_fenwick_add(tree, np.full(zr.size, 2, dtype=np.int64),
                                   np.full(zr.size, 2, dtype=np.int32), rows=zr)
            if grow.any():
                gr = rows[grow]
                tg = typ[grow]
                counts[gr, tg] -= 1
                counts[gr, 1] += 1
                counts[gr, tg + 1] += 1
                _batch_fenwick_add(tree, tg, (-tg).astype(np.int32), rows=gr)
                _batch_fenwick_add(tree, np.ones(gr.size, dtype=np.int64),
                                   np.ones(gr.size, dtype=np.int32), rows=gr)
                _batch_fenwick_add(tree, tg + 1, (tg + 1).astype(np.int32), rows=gr)
        out[start:stop] = counts
    return out


def _batch_fenwick_add(tree: np.ndarray, pos: np.ndarray, delta: np.ndarray,
                       rows: np.ndarray | None = None) -> None:
    """Vectorized Fenwick point update; ``pos`` is 0-based and aligned with
    ``rows`` (default: all rows)."""
    size = tree.shape[1] - 1
    if rows is None:
        rows = np.arange(tree.shape[0])
    p = pos + 1
    live = p <= size
    while live.any():
        tree[rows[live], p[live]] += delta[live]
        p = p + (p & -p)
        live = p <= size


def _batch_fenwick_search(tree: np.ndarray, value: np.ndarray) -> np.ndarray:
    """Per-row smallest slot with cumulative weight > value (0-based)."""
    T, size1 = tree.shape
    size = size1 - 1
    rows = np.arange(T)
    pos = np.zeros(T, dtype=np.int64)
    rem = value.astype(np.int64).copy()
    bit = size
    while bit:
        nxt = pos + bit
        node = tree[rows, np.minimum(nxt, size)]
        ok = (nxt <= size) & (node <= rem)
        rem -= node * ok
        pos += bit * ok
        bit >>= 1
    return pos


# ---------------------------------------------------------------------------
# truncated replacement matrix and its spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReplacementMatrix:
    """Truncated (M+1) x (M+1) replacement matrix in activity-weight units.

    Column i is the weight change applied when type i is drawn; the last
    type M absorbs all larger types, so every column sums to 2 (each draw
    adds two gaps).
    """

    truncation: int
    entries: tuple[tuple[int, ...], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.entries)


def replacement_matrix(M: int) -> ReplacementMatrix:
    if M < 2:
        raise ValueError("M must be >= 2")
    A = [[0] * (M + 1) for _ in range(M + 1)]
    A[2][0] = 2  # immigration draw adds one type-2 ball (weight 2)
    for i in range(1, M):
        A[1][i] += 1
        A[i][i] += -i
        A[i + 1][i] += i + 1
    A[1][M] += 1
    A[M][M] += 1
    return ReplacementMatrix(truncation=M, entries=tuple(tuple(r) for r in A))


def char_poly(M: int) -> tuple[int, ...]:
    """Exact coefficients, ascending in x, of det(A0 - x I) for the
    truncated replacement matrix A0."""
    A = replacement_matrix(M).as_array().tolist()
    desc = _berkowitz_charpoly(A)  # det(x I - A0), descending
    m = len(desc) - 1
    asc = [desc[m - k] for k in range(m + 1)]
    if m % 2:  # det(A0 - xI) = (-1)^m det(xI - A0)
        asc = [-c for c in asc]
    return tuple(asc)


def char_poly_closed(M: int) -> tuple[int, ...]:
    """Closed form (-1)^(M-1) (x - 2) prod_{j=0}^{M-1} (x + j), ascending.

    Note the product already contributes the factor x (at j = 0); spelled
    with a separate leading x the formula would have degree M+2, one more
    than an (M+1) x (M+1) matrix allows.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    poly = [-2, 1]  # (x - 2)
    for j in range(M):
        # multiply by (x + j)
        new = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            new[d] += c * j
            new[d + 1] += c
        poly = new
    if (M - 1) % 2:
        poly = [-c for c in poly]
    return tuple(poly)


def _berkowitz_charpoly(A: list[list[int]]) -> list[int]:
    """Division-free characteristic polynomial det(x I - A), coefficients in
    descending powers, leading coefficient 1."""
    m = len(A)
    poly = [1, -A[0][0]]
    for i in range(1, m):
        a = A[i][i]
        row = A[i][:i]
        col = [A[r][i] for r in range(i)]
        sub = [r[:i] for r in A[:i]]
        t = [1, -a]
        v = col[:]
        for j in range(i):
            t.append(-sum(row[x] * v[x] for x in range(i)))
            if j < i - 1:
                v = [sum(sub[r][x] * v[x] for x in range(i)) for r in range(i)]
        new = [0] * (len(poly) + 1)
        for s in range(len(new)):
            acc = 0
            for u_ in range(len(t)):
                if 0 <= s - u_ < len(poly):
                    acc += t[u_] * poly[s - u_]
            new[s] = acc
        poly = new
    return poly


def leading_eigenvector(M: int) -> tuple[Fraction, ...]:
    """Eigenvector of A0 for eigenvalue 2, normalized to sum 1, exact:
    v_0 = 0, v_j = 2/((j+1)(j+2)) for j < M, v_M = 2/(M+1)."""
    if M < 2:
        raise ValueError("M must be >= 2")
    v = [Fraction(0)]
    v += [Fraction(2, (j + 1) * (j + 2)) for j in range(1, M)]
    v.append(Fraction(2, M + 1))
    return tuple(v)


def eigen_residual(M: int) -> tuple[Fraction, ...]:
    """(A0 - 2I) v for the leading eigenvector, exact (all zeros)."""
    A = replacement_matrix(M).entries
    v = leading_eigenvector(M)
    out = []
    for r in range(M + 1):
        acc = sum(Fraction(A[r][c]) * v[c] for c in range(M + 1)) - 2 * v[r]
        out.append(acc)
    return tuple(out)
