"""Random linear coding within a generation, and incremental decoding.

A coded packet carries a coefficient vector drawn i.i.d. uniform over the
field (zero included) plus the matching linear combination of the source
payloads.  Each receiver keeps one DecoderState per generation it wants
packets from; absorbing a coded packet substitutes the payloads the receiver
already holds, projects the coefficients onto the remaining unknowns, and
row-reduces the result into a reduced-echelon system.  Decoding completes
when the system reaches full rank.

DecoderState also runs payload-free ("abstract" packets with payload=None),
tracking rank only; the rank trajectory is identical to the payload-carrying
path because it depends only on the coefficient draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .galois import GF256, Field

__all__ = ["CodedPacket", "DecoderState", "encode", "random_payloads"]


@dataclass(frozen=True)
class CodedPacket:
    generation_id: int
    coefficients: np.ndarray  # one per generation packet, generation-local order
    payload: np.ndarray | None  # None for abstract (rank-only) packets


def encode(generation_payloads, rng, field: Field = GF256, generation_id: int = 0) -> CodedPacket:
    """Draw uniform coefficients over the field and combine the payloads."""
    n = len(generation_payloads)
    if n == 0:
        raise ValueError("cannot encode an empty generation")
    lengths = {len(p) for p in generation_payloads}
    if len(lengths) != 1:
        raise ValueError(f"payload lengths differ within the generation: {sorted(lengths)}")
    coeffs = rng.integers(0, field.q, size=n, dtype=np.uint8)
    payload = np.zeros(lengths.pop(), dtype=np.uint8)
    for c, src in zip(coeffs, generation_payloads):
        c = int(c)
        if c:
            payload ^= field.mul_vec(c, np.asarray(src, dtype=np.uint8))
    return CodedPacket(generation_id=generation_id, coefficients=coeffs, payload=payload)


def random_payloads(count, length, rng, field: Field = GF256):
    """Uniform source payloads (field elements stored one per byte)."""
    return [rng.integers(0, field.q, size=length, dtype=np.uint8) for _ in range(count)]


class DecoderState:
    """Per (receiver, generation) incremental Gaussian elimination.

    generation_ids fixes the generation-local coefficient order; wanted_ids
    are the packets this receiver still needs from the generation.
    """

    def __init__(self, generation_id, generation_ids, wanted_ids, field: Field = GF256):
        self.generation_id = generation_id
        self.generation_ids = tuple(int(i) for i in generation_ids)
        pos = {pid: j for j, pid in enumerate(self.generation_ids)}
        wanted = [int(i) for i in wanted_ids]
        bad = [i for i in wanted if i not in pos]
        if bad:
            raise ValueError(f"wanted ids not in generation: {bad}")
        self._col_of = pos
        self.unknown_ids = tuple(sorted(wanted, key=pos.__getitem__))
        self._unknown_cols = [pos[i] for i in self.unknown_ids]
        self._known_ids = [i for i in self.generation_ids if i not in set(self.unknown_ids)]
        self.field = field
        self.rank = 0
        self._rows = []  # reduced coefficient rows (lists of ints, pivot normalized to 1)
        self._pivots = []  # pivot column per row, strictly increasing
        self._payload_rows = []  # np arrays, parallel to _rows; empty in abstract use

    @property
    def decoded(self):
        return self.rank == len(self.unknown_ids)

    def absorb(self, pkt: CodedPacket, known_payloads=None) -> bool:
        """Fold a coded packet into the system; True iff the rank increased."""
        if pkt.generation_id != self.generation_id:
            raise ValueError(
                f"packet for generation {pkt.generation_id}, state holds {self.generation_id}"
            )
        if self.decoded:
            return False
        coeffs = pkt.coefficients
        if len(coeffs) != len(self.generation_ids):
            raise ValueError(
                f"coefficient vector length {len(coeffs)} != generation size "
                f"{len(self.generation_ids)}"
            )
        field = self.field
        vec = [int(coeffs[j]) for j in self._unknown_cols]

        residual = None
        if pkt.payload is not None:
            known_payloads = known_payloads or {}
            missing = [i for i in self._known_ids if i not in known_payloads]
            if missing:
                raise ValueError(f"known payloads missing for packets {missing}")
            residual = np.asarray(pkt.payload, dtype=np.uint8).copy()
            for pid in self._known_ids:
                c = int(coeffs[self._col_of[pid]])
                if c:
                    residual ^= field.mul_vec(c, np.asarray(known_payloads[pid], dtype=np.uint8))

        mul = field.mul
        # eliminate against the stored rows
        for row, piv, prow in zip(self._rows, self._pivots, self._payload_rows):
            f = vec[piv]
            if f:
                vec = [v ^ mul(f, r) for v, r in zip(vec, row)]
                if residual is not None and prow is not None:
                    residual = residual ^ field.mul_vec(f, prow)

        pivot = next((j for j, v in enumerate(vec) if v), -1)
        if pivot < 0:
            return False  # linearly dependent

        fi = field.inv(vec[pivot])
        if fi != 1:
            vec = [mul(fi, v) for v in vec]
            if residual is not None:
                residual = field.mul_vec(fi, residual)
        # clear the new pivot column in the existing rows (keeps the system
        # fully reduced so solve() can read answers off directly)
        for i, row in enumerate(self._rows):
            f = row[pivot]
            if f:
                self._rows[i] = [a ^ mul(f, b) for a, b in zip(row, vec)]
                if residual is not None and self._payload_rows[i] is not None:
                    self._payload_rows[i] = self._payload_rows[i] ^ field.mul_vec(f, residual)

        at = next((i for i, p in enumerate(self._pivots) if p > pivot), len(self._pivots))
        self._rows.insert(at, vec)
        self._pivots.insert(at, pivot)
        self._payload_rows.insert(at, residual)
        self.rank += 1
        return True

    def solve(self):
        """Recovered payloads keyed by packet id; requires full rank."""
        if not self.decoded:
            raise RuntimeError(
                f"cannot solve at rank {self.rank} with {len(self.unknown_ids)} unknowns"
            )
        out = {}
        for piv, prow in zip(self._pivots, self._payload_rows):
            if prow is None:
                raise RuntimeError("state was advanced without payloads; nothing to solve")
            out[self.unknown_ids[piv]] = prow
        return out
