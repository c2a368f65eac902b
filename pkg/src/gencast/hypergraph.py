"""Hypergraph view of the partitioning problem.

Packets are vertices; each receiver's want-set is a hyperedge.  A coloring
whose every color class meets every hyperedge in at most gamma vertices is
exactly a partition whose every generation has rank at most gamma, so the
minimum color count (the gamma-chromatic number) equals the minimum
generation count.  The conversions here are the executable form of that
equivalence, plus seeded random-instance generators for property tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partition import optimal_partition
from .sfm import Generation, Partition, StateFeedbackMatrix

__all__ = [
    "Hypergraph",
    "Coloring",
    "ColoringReport",
    "NoReceiversError",
    "sfm_to_hypergraph",
    "hypergraph_to_sfm",
    "is_valid_coloring",
    "chromatic_number",
    "is_uniform",
    "coloring_to_partition",
    "partition_to_coloring",
    "random_hypergraph",
    "random_uniform_hypergraph",
    "parse_hypergraph",
    "load_hypergraph",
    "format_hypergraph",
]


class NoReceiversError(ValueError):
    """An edgeless hypergraph has no SFM counterpart (an SFM needs N >= 1)."""


@dataclass(frozen=True)
class Hypergraph:
    """Vertex count plus a multiset of hyperedges (duplicates are distinct
    receivers, so they are kept)."""

    n_vertices: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError(f"need at least one vertex, got {self.n_vertices}")
        edges = tuple(frozenset(int(v) for v in e) for e in self.edges)
        for e in edges:
            if not e:
                raise ValueError("hyperedges must be nonempty")
            bad = [v for v in e if not 0 <= v < self.n_vertices]
            if bad:
                raise ValueError(f"vertex ids out of range: {sorted(bad)}")
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self):
        return len(self.edges)


@dataclass(frozen=True)
class Coloring:
    """Total assignment vertex -> color index."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.assignment)
        if any(c < 0 for c in colors):
            raise ValueError("color indices must be non-negative")
        object.__setattr__(self, "assignment", colors)

    @property
    def n_colors(self):
        return max(self.assignment) + 1 if self.assignment else 0


@dataclass(frozen=True)
class ColoringReport:
    violations: tuple[tuple[int, int], ...]  # (color, edge index) pairs over the cap

    @property
    def valid(self):
        return not self.violations


def sfm_to_hypergraph(sfm: StateFeedbackMatrix) -> Hypergraph:
    """One vertex per packet; one edge per receiver with a nonzero row."""
    edges = []
    for n in range(sfm.n_receivers):
        support = np.flatnonzero(sfm.wants[n])
        if support.size:
            edges.append(frozenset(int(v) for v in support))
    return Hypergraph(n_vertices=sfm.n_packets, edges=tuple(edges))


def hypergraph_to_sfm(h: Hypergraph) -> StateFeedbackMatrix:
    """One receiver per edge; raises NoReceiversError for edgeless inputs."""
    if not h.edges:
        raise NoReceiversError("edgeless hypergraph converts to an SFM with no receivers")
    a = np.zeros((h.n_edges, h.n_vertices), dtype=np.uint8)
    for n, e in enumerate(h.edges):
        a[n, sorted(e)] = 1
    return StateFeedbackMatrix(a)


def is_valid_coloring(h: Hypergraph, c: Coloring, gamma: int) -> ColoringReport:
    """List every (color, edge) pair whose intersection exceeds gamma."""
    if len(c.assignment) != h.n_vertices:
        raise ValueError(
            f"coloring covers {len(c.assignment)} vertices, hypergraph has {h.n_vertices}"
        )
    violations = []
    for m in range(c.n_colors):
        cls = {v for v, col in enumerate(c.assignment) if col == m}
        for n, e in enumerate(h.edges):
            if len(cls & e) > gamma:
                violations.append((m, n))
    return ColoringReport(violations=tuple(violations))


def chromatic_number(h: Hypergraph, gamma: int, *, max_vertices: int = 12):
    """Exact minimum color count with a witness, via the partition oracle."""
    if not h.edges:
        return 1, Coloring(tuple(0 for _ in range(h.n_vertices)))
    result = optimal_partition(hypergraph_to_sfm(h), gamma, max_packets=max_vertices)
    return result.min_generations, partition_to_coloring(result.witness)


def is_uniform(h: Hypergraph, omega: int) -> bool:
    return all(len(e) == omega for e in h.edges)


def coloring_to_partition(c: Coloring) -> Partition:
    """Color classes become generations; empty classes are dropped."""
    classes = [[] for _ in range(c.n_colors)]
    for v, col in enumerate(c.assignment):
        classes[col].append(v)
    gens = tuple(Generation(tuple(cls)) for cls in classes if cls)
    if not gens:
        raise ValueError("cannot build a partition from an empty coloring")
    return Partition(gens, gamma_cap=None)


def partition_to_coloring(p: Partition) -> Coloring:
    """Generation index becomes the color of each member packet."""
    ids = p.all_packet_ids()
    if sorted(ids) != list(range(len(ids))):
        raise ValueError("partition must disjointly cover packets 0..K-1")
    assignment = [0] * len(ids)
    for m, g in enumerate(p.generations):
        for k in g.packet_ids:
            assignment[k] = m
    return Coloring(tuple(assignment))


# --- random instances for property tests ---------------------------------

def random_hypergraph(n_vertices, n_edges, edge_prob, rng) -> Hypergraph:
    """Each vertex joins each edge independently; empty draws get one random
    vertex so the nonempty-edge invariant holds."""
    edges = []
    for _ in range(n_edges):
        mask = rng.random(n_vertices) < edge_prob
        members = np.flatnonzero(mask)
        if members.size == 0:
            members = rng.integers(0, n_vertices, size=1)
        edges.append(frozenset(int(v) for v in members))
    return Hypergraph(n_vertices=n_vertices, edges=tuple(edges))


def random_uniform_hypergraph(n_vertices, n_edges, omega, rng) -> Hypergraph:
    """Exact omega-sized edges sampled without replacement."""
    if omega < 1 or omega > n_vertices:
        raise ValueError(f"need 1 <= omega <= |V|, got omega={omega} |V|={n_vertices}")
    edges = []
    for _ in range(n_edges):
        members = rng.choice(n_vertices, size=omega, replace=False)
        edges.append(frozenset(int(v) for v in members))
    return Hypergraph(n_vertices=n_vertices, edges=tuple(edges))


# --- flat-file format -----------------------------------------------------

def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the hypergraph text format: "V E" header, then E vertex lists."""
    lines = [ln for ln in text.splitlines()]
    if not lines or not lines[0].strip():
        raise ValueError("line 1: missing 'V E' header")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"line 1: header must be 'V E', got {lines[0]!r}")
    try:
        v, e = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError(f"line 1: header must be two integers, got {lines[0]!r}") from None
    body = [(i + 2, ln) for i, ln in enumerate(lines[1:]) if ln.strip()]
    if len(body) != e:
        raise ValueError(f"expected {e} edge lines, found {len(body)}")
    edges = []
    for lineno, ln in body:
        try:
            members = [int(tok) for tok in ln.split()]
        except ValueError:
            raise ValueError(f"line {lineno}: edges must be integer vertex lists") from None
        edges.append(frozenset(members))
    return Hypergraph(n_vertices=v, edges=tuple(edges))


def load_hypergraph(path) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"{h.n_vertices} {h.n_edges}"]
    for e in h.edges:
        lines.append(" ".join(str(v) for v in sorted(e)))
    return "\n".join(lines) + "\n"
