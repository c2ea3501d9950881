"""chordstat: memory-game statistics via chord diagrams, urns and graphs.

Exact small-size laws (recurrences and enumeration), limit-law reference
functions, three uniform samplers, a deterministic optimal player, the
generalized Polya urn with immigration, the preferential-attachment graph
construction, and a Monte Carlo verification harness with a CLI.
"""
from .core import (
    BlockProfile,
    ChordDiagram,
    Deal,
    GameStats,
    binomial,
    double_factorial_odd,
    falling_factorial,
)
from .game import play, play_batch, verify_length_identity
from .pagraph import PAGraph, build_graph, degrees
from .sampler import (
    InsertionTrace,
    RngStream,
    blocks,
    chords_from_deal,
    deal_from_chords,
    enumerate_standard_deals,
    good_interval_count,
    sample_chord_diagram,
    sample_deal_insertion,
    sample_deal_shuffle,
    standardize,
)
from .urn import UrnState, apply_draw, urn_simulate, urn_step

__all__ = [
    "BlockProfile",
    "ChordDiagram",
    "Deal",
    "GameStats",
    "InsertionTrace",
    "PAGraph",
    "RngStream",
    "UrnState",
    "apply_draw",
    "binomial",
    "blocks",
    "build_graph",
    "chords_from_deal",
    "deal_from_chords",
    "degrees",
    "double_factorial_odd",
    "enumerate_standard_deals",
    "falling_factorial",
    "good_interval_count",
    "play",
    "play_batch",
    "sample_chord_diagram",
    "sample_deal_insertion",
    "sample_deal_shuffle",
    "standardize",
    "urn_simulate",
    "urn_step",
    "verify_length_identity",
]

__version__ = "0.1.0"
