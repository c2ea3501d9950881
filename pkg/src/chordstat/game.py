"""Deterministic optimal play of the memory game.

The perfect-memory strategy scans the row left to right.  First flips
therefore happen in position order, and every round is one of three kinds:

* the next unflipped card is a second occurrence: flip it, flip its known
  partner, remove the pair;
* it is a first occurrence: flip it and the following unflipped card; if
  they match each other the move is lucky and the pair is removed;
* a pair became known at the end of the previous round (its second card was
  just revealed, its first card seen earlier): remove it, flipping nothing
  new.

This gives an O(n) simulation with O(1) work per round; ``play_batch`` runs
the same automaton in lockstep across many deals with numpy.
"""
from __future__ import annotations

import numpy as np

from .core import Deal, GameStats
from .sampler import blocks, match_matrix, _labels_of


def _match_positions(labels) -> list[int]:
    first: dict[int, int] = {}
    match = [0] * len(labels)
    for pos, lab in enumerate(labels):
        if lab in first:
            match[pos] = first[lab]
            match[first[lab]] = pos
        else:
            first[lab] = pos
    return match


def play(deal, record_trace: bool = False) -> GameStats:
    """Play the optimal strategy; returns rounds, lucky count, first match.

    The optional trace lists, per round, (round number, flipped positions
    (1-based), removed label or None, lucky flag).
    """
    labels = _labels_of(deal)
    if not isinstance(deal, Deal):
        Deal(labels)  # reject malformed input
    m = len(labels)
    match = _match_positions(labels)
    first_match = next(p for p in range(m) if match[p] < p) + 1

    trace: list[tuple] = []
    p = 0
    rounds = 0
    lucky = 0
    pending: tuple[int, int] | None = None  # known pair to remove next round
    while p < m or pending is not None:
        rounds += 1
        if pending is not None:
            q, partner = pending
            if record_trace:
                trace.append((rounds, (partner + 1, q + 1), labels[q], False))
            pending = None
            continue
        if match[p] < p:
            # second occurrence; partner already seen
            if record_trace:
                trace.append((rounds, (p + 1, match[p] + 1), labels[p], False))
            p += 1
            continue
        q = p + 1
        if match[p] == q:
            lucky += 1
            if record_trace:
                trace.append((rounds, (p + 1, q + 1), labels[p], True))
        else:
            if record_trace:
                trace.append((rounds, (p + 1, q + 1), None, False))
            if match[q] < q:
                pending = (q, match[q])
        p += 2
    return GameStats(
        length=rounds,
        lucky=lucky,
        first_match=first_match,
        trace=tuple(trace) if record_trace else None,
    )


def verify_length_identity(deal) -> bool:
    """Check 2*G == 3n + Y - 2*L with Y the number of even-length blocks."""
    labels = _labels_of(deal)
    stats = play(deal)
    profile = blocks(labels)
    n = len(labels) // 2
    return 2 * stats.length == 3 * n + profile.even_count() - 2 * stats.lucky


def play_batch(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lockstep simulation of a (trials x 2n) batch of deals.

    Returns (lengths, lucky counts, first-match positions); agrees exactly
    with :func:`play` row by row.
    """
    trials, m = labels.shape
    match = match_matrix(labels)
    positions = np.arange(m)
    red = match < positions[None, :]
    first_match = np.argmax(red, axis=1) + 1

    rows = np.arange(trials)
    p = np.zeros(trials, dtype=np.int64)
    g_count = np.zeros(trials, dtype=np.int64)
    l_count = np.zeros(trials, dtype=np.int64)
    pending = np.zeros(trials, dtype=bool)
    while True:
        active = (p < m) | pending
        if not active.any():
            break
        pc = np.minimum(p, m - 1)
        isred = red[rows, pc]
        mval = match[rows, pc]
        nextred = red[rows, np.minimum(p + 1, m - 1)]
        isblue = ~isred
        lucky = isblue & (mval == p + 1)
        flip = active & ~pending
        new_pending = flip & isblue & ~lucky & nextred
        step = np.where(isred, 1, 2) * flip
        g_count += active
        l_count += flip & lucky
        p += step
        pending = np.where(active, new_pending, pending)
    return g_count, l_count, first_match
