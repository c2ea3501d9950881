"""Preferential-attachment multigraph built from a chord diagram.

Scanning the 2n points left to right, each maximal run of endpoints ending
at the next unconsumed right endpoint is merged into one vertex; every
chord becomes an edge (possibly a loop) between the vertices owning its
endpoints.  Vertex degrees equal the block lengths of the corresponding
standard deal, loops counting 2.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import ChordDiagram


@dataclass(frozen=True)
class PAGraph:
    """Loopy multigraph: n vertices (1-based) and one edge per chord."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (1 <= u <= self.num_vertices and 1 <= v <= self.num_vertices):
                raise ValueError(f"edge ({u},{v}) outside vertex range")

    def to_json(self) -> dict:
        return {
            "degrees": list(degrees(self)),
            "edges": [[u, v] for u, v in self.edges],
        }


def build_graph(cd: ChordDiagram) -> PAGraph:
    """Merge endpoint runs into vertices and project chords onto them."""
    n = cd.n
    rights = {right for _, right in cd.pairs}
    vertex_of = {}
    v = 1
    for point in range(1, 2 * n + 1):
        vertex_of[point] = v
        if point in rights:
            v += 1
    edges = tuple(
        (min(vertex_of[l], vertex_of[r]), max(vertex_of[l], vertex_of[r]))
        for l, r in cd.pairs
    )
    return PAGraph(num_vertices=n, edges=edges)


def degrees(g: PAGraph) -> tuple[int, ...]:
    """Degree sequence by vertex id; a loop contributes 2."""
    deg = [0] * g.num_vertices
    for u, v in g.edges:
        deg[u - 1] += 1
        deg[v - 1] += 1
    return tuple(deg)


def degree_histogram(g: PAGraph) -> dict[int, int]:
    """Map degree value -> number of vertices with that degree."""
    hist: dict[int, int] = {}
    for d in degrees(g):
        hist[d] = hist.get(d, 0) + 1
    return hist
