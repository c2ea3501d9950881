"""Uniform deals and chord diagrams: three samplers, block decomposition,
standardization, exhaustive enumeration, and vectorized batch kernels.

Scalar sampling functions are pure given an explicit :class:`RngStream`:
calling one twice with the same (seed, index) yields the identical object.
Batch kernels derive one stream per trial index, so results do not depend
on chunking or thread scheduling.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import BlockProfile, ChordDiagram, Deal

ENUMERATION_CAP = 8  # (2*8-1)!! ~ 2.0e6 deals


# ---------------------------------------------------------------------------
# reproducible streams
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RngStream:
    """A value object naming one random stream: (seed, stream index).

    The pair fully determines the sample path; streams with different
    indices are independent splits of the same master seed.
    """

    seed: int
    index: int = 0

    def __post_init__(self) -> None:
        if self.seed < 0 or self.index < 0:
            raise ValueError("seed and index must be nonnegative")

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(self.index,))
        )


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError("rng must be an RngStream or numpy Generator")


# ---------------------------------------------------------------------------
# scalar samplers
# ---------------------------------------------------------------------------

def sample_deal_shuffle(n: int, rng) -> Deal:
    """Uniform deal of n pairs: a shuffle of the multiset {1,1,...,n,n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _as_generator(rng)
    base = np.repeat(np.arange(1, n + 1), 2)
    return Deal(tuple(int(x) for x in gen.permutation(base)))


def sample_chord_diagram(n: int, rng) -> ChordDiagram:
    """Uniform perfect matching of 1..2n.

    Pairs the smallest unmatched point with a uniformly chosen unmatched
    partner, repeatedly; every matching arises with probability 1/(2n-1)!!.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _as_generator(rng)
    free = list(range(1, 2 * n + 1))
    pairs = []
    while free:
        a = free.pop(0)
        b = free.pop(int(gen.integers(0, len(free))))
        pairs.append((a, b))
    return ChordDiagram(tuple(pairs))


@dataclass(frozen=True)
class InsertionTrace:
    """Step-by-step record of the sequential pair-insertion sampler.

    ``drawn_types[k-1]`` is the length of the block that received the k-th
    blue card (0 when it landed in the final gap), and ``good_counts[k-1]``
    is the number of good intervals after k pairs are down.
    """

    drawn_types: tuple[int, ...]
    good_counts: tuple[int, ...]


def sample_deal_insertion(n: int, rng, keep_rows: bool = False):
    """Uniform standard deal built by sequential pair insertion.

    Pair k places its blue card into one of the 2k-1 gaps uniformly at
    random and appends its red card at the end of the row.  Each gap except
    the final one belongs to the block of the card immediately to its
    right, so a block of length i owns i gaps; the final gap has type 0.

    Returns (deal, trace); with ``keep_rows=True`` returns
    (deal, trace, rows) where rows[k-1] is the row after k insertions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _as_generator(rng)
    row: list[int] = []
    block_lens: list[int] = []
    drawn_types: list[int] = []
    good_counts: list[int] = []
    rows: list[tuple[int, ...]] = []
    s = 1  # the empty row has a single (good) interval
    for k in range(1, n + 1):
        g = int(gen.integers(0, 2 * k - 1))
        if g == 2 * (k - 1):  # final gap
            drawn = 0
            row.append(k)
            row.append(k)
            block_lens.append(2)
            s += 1
        else:
            # locate the block owning gap g (the one covering row slot g)
            b = 0
            acc = block_lens[0]
            while acc <= g:
                b += 1
                acc += block_lens[b]
            drawn = block_lens[b]
            row.insert(g, k)
            row.append(k)
            block_lens[b] += 1
            block_lens.append(1)
            s += 2 if drawn % 2 == 0 else 1
        drawn_types.append(drawn)
        good_counts.append(s)
        if keep_rows:
            rows.append(tuple(row))
    deal = Deal(tuple(row))
    trace = InsertionTrace(tuple(drawn_types), tuple(good_counts))
    if keep_rows:
        return deal, trace, rows
    return deal, trace


# ---------------------------------------------------------------------------
# deterministic transforms
# ---------------------------------------------------------------------------

def _labels_of(deal) -> tuple[int, ...]:
    if isinstance(deal, Deal):
        return deal.labels
    return tuple(deal)


def standardize(deal) -> Deal:
    """Relabel so that red (second-occurrence) cards appear in increasing
    label order.  Idempotent; the block structure is unchanged."""
    labels = _labels_of(deal)
    seen: set[int] = set()
    rank: dict[int, int] = {}
    for lab in labels:
        if lab in seen:
            rank[lab] = len(rank) + 1
        else:
            seen.add(lab)
    return Deal(tuple(rank[lab] for lab in labels))


def blocks(deal) -> BlockProfile:
    """Decompose a deal into its blocks; the k-th block ends at the k-th red."""
    labels = _labels_of(deal)
    seen: set[int] = set()
    lengths = []
    start = 0
    for pos, lab in enumerate(labels):
        if lab in seen:
            lengths.append(pos - start + 1)
            start = pos + 1
        else:
            seen.add(lab)
    return BlockProfile(tuple(lengths))


def good_interval_count(deal) -> int:
    """Number of good insertion gaps of the row.

    Scans left to right: the first interval is good, intervals alternate
    good/bad across blue cards, and every interval following a red card is
    good again.  Inserting an adjacent matching pair into a good interval
    is exactly what produces a lucky move.
    """
    labels = _labels_of(deal)
    seen: set[int] = set()
    good = 1
    state = 0
    for lab in labels:
        if lab in seen:
            state = 0
        else:
            seen.add(lab)
            state += 1
        if state % 2 == 0:
            good += 1
    return good


def good_interval_sets(deal) -> list[set[int]]:
    """Literal recursive construction of the interval classes S_0, S_1, ...

    Interval i (1-based, before the i-th card; 2m+1 intervals for m pairs)
    is in S_0 if it is the first interval or follows a red card, and in S_t
    if it follows a blue card whose preceding interval is in S_{t-1}.
    Kept as an independent oracle for :func:`good_interval_count`.
    """
    labels = _labels_of(deal)
    m2 = len(labels)
    seen: set[int] = set()
    is_red = []
    for lab in labels:
        is_red.append(lab in seen)
        seen.add(lab)
    level: dict[int, int] = {1: 0}
    for i in range(2, m2 + 2):
        if is_red[i - 2]:
            level[i] = 0
        else:
            level[i] = level[i - 1] + 1
    n_levels = max(level.values()) + 1
    sets: list[set[int]] = [set() for _ in range(n_levels)]
    for i, t in level.items():
        sets[t].add(i)
    return sets


def deal_from_chords(cd: ChordDiagram) -> Deal:
    """The standard deal of a chord diagram: chord endpoints become the two
    occurrences of one label, labels ordered by right endpoint."""
    by_right = sorted(cd.pairs, key=lambda p: p[1])
    labels = [0] * (2 * cd.n)
    for lab, (left, right) in enumerate(by_right, start=1):
        labels[left - 1] = lab
        labels[right - 1] = lab
    return Deal(tuple(labels))


def chords_from_deal(deal) -> ChordDiagram:
    """Inverse of :func:`deal_from_chords`: occurrence positions of each
    label become one chord."""
    labels = _labels_of(deal)
    first: dict[int, int] = {}
    pairs = []
    for pos, lab in enumerate(labels, start=1):
        if lab in first:
            pairs.append((first[lab], pos))
        else:
            first[lab] = pos
    pairs.sort()
    return ChordDiagram(tuple(pairs))


def enumerate_standard_deals(n: int, cap: int = ENUMERATION_CAP) -> Iterator[Deal]:
    """Yield every standard deal of n pairs exactly once ((2n-1)!! of them).

    Deals are generated by inserting pair k into each of the 2k-1 gaps in
    ascending gap order, giving a fixed deterministic ordering.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise ValueError(f"n={n} exceeds enumeration cap {cap}")

    def rec(row: list[int], k: int) -> Iterator[tuple[int, ...]]:
        if k > n:
            yield tuple(row)
            return
        for g in range(2 * k - 1):
            if g == 2 * (k - 1):
                new = row + [k, k]
            else:
                new = row[:g] + [k] + row[g:] + [k]
            yield from rec(new, k + 1)

    for labels in rec([], 1):
        yield Deal(labels)


# ---------------------------------------------------------------------------
# batch kernels (one RngStream per trial index)
# ---------------------------------------------------------------------------

def sample_deals_batch(
    n: int, trials: int, seed: int, base_index: int = 0, rng=None
) -> np.ndarray:
    """(trials x 2n) int32 matrix of uniform deals.

    Row t uses stream (seed, base_index + t); passing ``rng`` instead draws
    everything from that one generator (faster for huge batches of small
    deals, at the cost of per-trial reproducibility).
    """
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    base = np.repeat(np.arange(1, n + 1, dtype=np.int32), 2)
    if rng is not None:
        gen = _as_generator(rng)
        return gen.permuted(np.tile(base, (trials, 1)), axis=1)
    out = np.empty((trials, 2 * n), dtype=np.int32)
    for t in range(trials):
        gen = RngStream(seed, base_index + t).generator()
        out[t] = gen.permutation(base)
    return out


def pair_positions(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row 0-based positions of first and second occurrences by label.

    Column j of the outputs refers to label j+1.
    """
    order = np.argsort(labels, axis=1, kind="stable")
    return order[:, 0::2], order[:, 1::2]


def match_matrix(labels: np.ndarray) -> np.ndarray:
    """match[t, p] = position of the other card with the same label."""
    firsts, seconds = pair_positions(labels)
    match = np.empty_like(labels, dtype=np.int64)
    rows = np.arange(labels.shape[0])[:, None]
    match[rows, firsts] = seconds
    match[rows, seconds] = firsts
    return match


def block_lengths_matrix(labels: np.ndarray) -> np.ndarray:
    """(trials x n) block lengths in row order, from a batch of deals."""
    _, seconds = pair_positions(labels)
    reds = np.sort(seconds, axis=1)
    return np.diff(reds, axis=1, prepend=-1)


def good_interval_counts_from_lengths(lengths: np.ndarray) -> np.ndarray:
    """Good-interval count per row: 1 + sum over blocks of ceil(length/2)."""
    return 1 + ((lengths + 1) // 2).sum(axis=1)


def standardize_batch(labels: np.ndarray) -> np.ndarray:
    """Vectorized standardization of a batch of deals."""
    _, seconds = pair_positions(labels)
    rank = np.argsort(np.argsort(seconds, axis=1), axis=1).astype(np.int32) + 1
    return np.take_along_axis(rank, labels.astype(np.int64) - 1, axis=1)


def insertion_deals_batch(
    n: int, trials: int, seed: int, base_index: int = 0, rng=None
) -> np.ndarray:
    """(trials x 2n) matrix of insertion-sampled standard deals.

    Vectorized across trials; meant for small n (distribution tests), as the
    row shifting costs O(n) numpy work per insertion step.  ``rng`` switches
    from per-trial streams to one shared generator.
    """
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    if rng is not None:
        uniforms = _as_generator(rng).random((trials, n))
    else:
        uniforms = np.empty((trials, n))
        for t in range(trials):
            uniforms[t] = RngStream(seed, base_index + t).generator().random(n)
    rows = np.zeros((trials, 2 * n), dtype=np.int32)
    width = 0
    for k in range(1, n + 1):
        opts = 2 * k - 1
        g = np.minimum((uniforms[:, k - 1] * opts).astype(np.int64), opts - 1)
        # shift the tail right by one and drop the blue card into gap g
        pos = np.arange(width + 1)[None, :]
        src = pos - (pos > g[:, None])
        shifted = np.take_along_axis(rows[:, : width + 1], np.maximum(src, 0), axis=1)
        np.put_along_axis(shifted, g[:, None], k, axis=1)
        rows[:, : width + 1] = shifted
        rows[:, width + 1] = k  # red card at the end
        width += 2
    return rows


@dataclass(frozen=True)
class InsertionBatch:
    """Final state of a batch of insertion runs (no row materialization)."""

    good_counts: np.ndarray          # (trials,) good intervals after n pairs
    block_lengths: np.ndarray        # (trials, n) lengths, creation order
    drawn_types: np.ndarray | None   # (trials, n) when requested


def insertion_process_batch(
    n: int,
    trials: int,
    seed: int,
    base_index: int = 0,
    keep_types: bool = False,
    chunk: int = 1024,
) -> InsertionBatch:
    """Run the insertion dynamics for many trials without building rows.

    Each unit gap is one slot: slot tables map the 2k-2 real gaps to the
    block owning them, and the final gap is virtual (index 2k-2).  Choosing
    a uniform slot is exactly the uniform-gap choice of the row sampler,
    at O(1) work per step.
    """
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    s_out = np.empty(trials, dtype=np.int64)
    len_out = np.empty((trials, n), dtype=np.int32)
    types_out = np.empty((trials, n), dtype=np.int32) if keep_types else None
    for start in range(0, trials, chunk):
        stop = min(start + chunk, trials)
        T = stop - start
        uniforms = np.empty((T, n))
        for t in range(T):
            gen = RngStream(seed, base_index + start + t).generator()
            uniforms[t] = gen.random(n)
        slots = np.zeros((T, 2 * n), dtype=np.int32)   # slot -> owning block id
        lens = np.zeros((T, n + 1), dtype=np.int32)    # block id -> length
        s = np.ones(T, dtype=np.int64)
        rows = np.arange(T)
        for k in range(1, n + 1):
            opts = 2 * k - 1
            u = np.minimum((uniforms[:, k - 1] * opts).astype(np.int64), opts - 1)
            final = u == opts - 1
            b = slots[rows, np.minimum(u, max(opts - 2, 0))]
            typ = np.where(final, 0, lens[rows, b])
            grow = ~final
            lens[rows[grow], b[grow]] += 1
            lens[:, k] = np.where(final, 2, 1)
            slots[rows, 2 * k - 2] = np.where(final, k, b)
            slots[rows, 2 * k - 1] = k
            s += 1 + ((typ > 0) & (typ % 2 == 0))
            if keep_types:
                types_out[start:stop, k - 1] = typ
        s_out[start:stop] = s
        len_out[start:stop] = lens[:, 1:]
    return InsertionBatch(good_counts=s_out, block_lengths=len_out, drawn_types=types_out)
