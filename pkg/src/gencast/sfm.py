"""State feedback matrix, generations, partitions, and their closed-form metrics.

The state feedback matrix (SFM) is the single piece of receiver feedback the
sender collects: a binary N x K matrix where entry (n, k) = 1 means receiver n
missed packet k in the systematic phase and still wants it.  A partition
groups the K packets into disjoint generations; the rank of a generation is
the largest number of its packets wanted by any single receiver, which is the
number of coded packets that receiver needs to decode the generation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "StateFeedbackMatrix",
    "Generation",
    "Partition",
    "PartitionReport",
    "rank",
    "popularity",
    "validate_partition",
    "total_rank",
    "apdd_upper_bound",
    "is_irreducible",
    "parse_sfm",
    "load_sfm",
    "format_sfm",
    "partition_to_json",
    "partition_from_json",
    "SfmParseError",
]


class SfmParseError(ValueError):
    """Malformed SFM text; carries 1-based line/column positions."""

    def __init__(self, message, line, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class StateFeedbackMatrix:
    """Immutable binary want-matrix collected after the systematic phase."""

    def __init__(self, wants):
        a = np.asarray(wants, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError(f"SFM must be 2-dimensional, got shape {a.shape}")
        n, k = a.shape
        if n < 1 or k < 1:
            raise ValueError(f"SFM needs at least one receiver and one packet, got {n}x{k}")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("SFM entries must be 0 or 1")
        a.setflags(write=False)
        self.wants = a
        self.n_receivers = n
        self.n_packets = k

    def popularity_vector(self):
        """Per-packet demand counts (column sums)."""
        return self.wants.sum(axis=0, dtype=np.int64)

    def row_support(self, n):
        """Packet ids receiver n still wants."""
        return np.flatnonzero(self.wants[n])

    def __eq__(self, other):
        if not isinstance(other, StateFeedbackMatrix):
            return NotImplemented
        return self.wants.shape == other.wants.shape and bool((self.wants == other.wants).all())

    def __repr__(self):
        return f"StateFeedbackMatrix(N={self.n_receivers}, K={self.n_packets})"


@dataclass(frozen=True)
class Generation:
    """An ordered, duplicate-free set of packet ids."""

    packet_ids: tuple[int, ...]

    def __post_init__(self):
        ids = tuple(int(i) for i in self.packet_ids)
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate packet ids in generation: {ids}")
        if any(i < 0 for i in ids):
            raise ValueError(f"negative packet id in generation: {ids}")
        object.__setattr__(self, "packet_ids", ids)

    def __len__(self):
        return len(self.packet_ids)

    def __iter__(self):
        return iter(self.packet_ids)


@dataclass(frozen=True)
class Partition:
    """Ordered list of generations; gamma_cap records the rank budget it was
    built for (None when the producer had no cap, e.g. the blind splitter)."""

    generations: tuple[Generation, ...]
    gamma_cap: int | None = None

    def __post_init__(self):
        gens = tuple(
            g if isinstance(g, Generation) else Generation(tuple(g)) for g in self.generations
        )
        object.__setattr__(self, "generations", gens)
        if self.gamma_cap is not None and self.gamma_cap < 1:
            raise ValueError(f"gamma_cap must be >= 1, got {self.gamma_cap}")

    @property
    def n_generations(self):
        return len(self.generations)

    def all_packet_ids(self):
        return [i for g in self.generations for i in g.packet_ids]


@dataclass(frozen=True)
class PartitionReport:
    """Outcome of validate_partition; valid iff every violation list is empty."""

    out_of_range: tuple[int, ...] = ()
    duplicated: tuple[int, ...] = ()
    missing: tuple[int, ...] = ()
    rank_violations: tuple[tuple[int, int], ...] = ()  # (generation index, rank)

    @property
    def cover_ok(self):
        return not (self.out_of_range or self.duplicated or self.missing)

    @property
    def valid(self):
        return self.cover_ok and not self.rank_violations


def _check_ids(sfm, g):
    bad = [i for i in g.packet_ids if not 0 <= i < sfm.n_packets]
    if bad:
        raise ValueError(f"packet ids out of range for K={sfm.n_packets}: {bad}")


def rank(sfm: StateFeedbackMatrix, g: Generation) -> int:
    """Largest number of packets in g wanted by any one receiver."""
    _check_ids(sfm, g)
    if not g.packet_ids:
        return 0
    return int(sfm.wants[:, list(g.packet_ids)].sum(axis=1).max())


def generation_ranks(sfm, p: Partition):
    return [rank(sfm, g) for g in p.generations]


def popularity(sfm: StateFeedbackMatrix, k: int) -> int:
    """Number of receivers that still want packet k."""
    if not 0 <= k < sfm.n_packets:
        raise ValueError(f"packet id {k} out of range for K={sfm.n_packets}")
    return int(sfm.wants[:, k].sum())


def validate_partition(sfm, p: Partition, gamma: int) -> PartitionReport:
    """Check that p disjointly covers all K packets and respects the rank cap."""
    seen = set()
    duplicated = []
    out_of_range = []
    for g in p.generations:
        for i in g.packet_ids:
            if not 0 <= i < sfm.n_packets:
                out_of_range.append(i)
            elif i in seen:
                duplicated.append(i)
            else:
                seen.add(i)
    missing = [i for i in range(sfm.n_packets) if i not in seen]
    rank_violations = []
    for m, g in enumerate(p.generations):
        ids = [i for i in g.packet_ids if 0 <= i < sfm.n_packets]
        if ids:
            r = int(sfm.wants[:, ids].sum(axis=1).max())
            if r > gamma:
                rank_violations.append((m, r))
    return PartitionReport(
        out_of_range=tuple(out_of_range),
        duplicated=tuple(duplicated),
        missing=tuple(missing),
        rank_violations=tuple(rank_violations),
    )


def _require_cover(sfm, p):
    report = validate_partition(sfm, p, gamma=sfm.n_packets)
    if not report.cover_ok:
        raise ValueError(
            "partition does not disjointly cover the packet block: "
            f"duplicated={report.duplicated} missing={report.missing} "
            f"out_of_range={report.out_of_range}"
        )


def total_rank(sfm, p: Partition) -> int:
    """Sum of generation ranks: erasure-free coded-phase transmission count."""
    _require_cover(sfm, p)
    return sum(rank(sfm, g) for g in p.generations)


def apdd_upper_bound(sfm, p: Partition) -> int:
    """Closed-form delay bound: sum of r*(r+1)/2 over generation ranks r.

    Each term is a triangular number, so the bound is an exact integer.
    """
    _require_cover(sfm, p)
    return sum(r * (r + 1) // 2 for r in generation_ranks(sfm, p))


def is_irreducible(sfm, p: Partition) -> bool:
    """True iff no packet can move to any earlier generation without raising
    that generation's rank."""
    _require_cover(sfm, p)
    wants = sfm.wants
    counts = []  # per-receiver want counts inside each generation
    for g in p.generations:
        ids = list(g.packet_ids)
        counts.append(wants[:, ids].sum(axis=1) if ids else np.zeros(sfm.n_receivers, np.int64))
    for n, c in enumerate(counts[:-1]):
        base = int(c.max()) if len(c) else 0
        # new rank per candidate packet if it were appended to generation n
        new_ranks = (c[:, None] + wants).max(axis=0)
        for m in range(n + 1, len(counts)):
            for k in p.generations[m].packet_ids:
                if int(new_ranks[k]) <= base:
                    return False
    return True


# --- flat-file formats ---------------------------------------------------

def parse_sfm(text: str) -> StateFeedbackMatrix:
    """Parse the SFM text format: "N K" header, then N rows of K 0/1 digits."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise SfmParseError("missing 'N K' header", line=1)
    header = lines[0].split()
    if len(header) != 2:
        raise SfmParseError(f"header must be 'N K', got {lines[0]!r}", line=1)
    try:
        n, k = int(header[0]), int(header[1])
    except ValueError:
        raise SfmParseError(f"header must be two integers, got {lines[0]!r}", line=1) from None
    if n < 1 or k < 1:
        raise SfmParseError(f"need N >= 1 and K >= 1, got N={n} K={k}", line=1)
    rows = []
    body = [ln for ln in lines[1:]]
    non_empty = [(i + 2, ln) for i, ln in enumerate(body) if ln.strip()]
    if len(non_empty) != n:
        raise SfmParseError(f"expected {n} matrix rows, found {len(non_empty)}",
                            line=len(lines) + 1 if len(non_empty) < n else non_empty[n][0])
    for lineno, ln in non_empty:
        fields = ln.split()
        if len(fields) != k:
            raise SfmParseError(f"expected {k} entries, found {len(fields)}", line=lineno)
        row = []
        for col, f in enumerate(fields, start=1):
            if f not in ("0", "1"):
                raise SfmParseError(f"entry must be 0 or 1, got {f!r}", line=lineno, column=col)
            row.append(int(f))
        rows.append(row)
    return StateFeedbackMatrix(rows)


def load_sfm(path) -> StateFeedbackMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sfm(fh.read())


def format_sfm(sfm: StateFeedbackMatrix) -> str:
    lines = [f"{sfm.n_receivers} {sfm.n_packets}"]
    for row in sfm.wants:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def partition_to_json(p: Partition) -> str:
    doc = {
        "gamma": p.gamma_cap,
        "generations": [list(g.packet_ids) for g in p.generations],
    }
    return json.dumps(doc)


def partition_from_json(text: str) -> Partition:
    doc = json.loads(text)
    if not isinstance(doc, dict) or "generations" not in doc:
        raise ValueError("partition JSON must be an object with a 'generations' key")
    gens = tuple(Generation(tuple(g)) for g in doc["generations"])
    gamma = doc.get("gamma")
    return Partition(generations=gens, gamma_cap=gamma)
