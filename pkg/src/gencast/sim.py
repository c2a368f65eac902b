"""Two-phase broadcast simulation over independent erasure channels.

Phase one broadcasts every packet once, uncoded; the erasure pattern becomes
the state feedback matrix.  Phase two broadcasts coded packets per
generation in round-robin rounds until every receiver has decoded everything
it wants.  Two round policies exist:

* feedback_rr - the sender knows the SFM.  Round 1 sends rank(G_m) coded
  packets per generation; per-generation ACKs arrive after each full round,
  and later rounds send, for each unfinished generation, as many packets as
  the worst unfinished receiver still needs (or the full rank again when
  strict_paper_rounds is set).
* blind_rr - the sender never saw the SFM and never learns per-generation
  state: every round sends exactly one coded packet of every generation,
  stopping only when the whole block is acknowledged complete.

Metrics: U is the coded-phase transmission count at block completion (time
indices start at 1); the decoding delay D averages, over all wanted
(receiver, packet) pairs, the time index at which the pair's generation
reached full rank.  Trials with an all-zero SFM skip the coded phase and are
flagged empty_demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .galois import get_field
from .partition import PartitionerConfig, blind_partition, heuristic_partition
from .rlnc import CodedPacket, DecoderState, encode, random_payloads
from .sfm import (
    Partition,
    StateFeedbackMatrix,
    apdd_upper_bound,
    total_rank,
    validate_partition,
)

__all__ = [
    "ChannelModel",
    "SimConfig",
    "TrialResult",
    "systematic_phase",
    "coded_phase",
    "apdd",
    "run_trial",
    "run_experiment",
    "SCHEDULERS",
]

SCHEDULERS = ("feedback_rr", "blind_rr")


@dataclass(frozen=True)
class ChannelModel:
    """Per-receiver i.i.d. Bernoulli erasures; scalar prob applies to all."""

    erasure_prob: float | tuple[float, ...]

    def __post_init__(self):
        probs = self.erasure_prob
        flat = probs if isinstance(probs, tuple) else (probs,)
        for p in flat:
            if not 0.0 <= p < 1.0:
                raise ValueError(f"erasure probability must be in [0, 1), got {p}")

    def probs(self, n_receivers: int) -> np.ndarray:
        if isinstance(self.erasure_prob, tuple):
            if len(self.erasure_prob) != n_receivers:
                raise ValueError(
                    f"{len(self.erasure_prob)} per-receiver probabilities for "
                    f"{n_receivers} receivers"
                )
            return np.asarray(self.erasure_prob, dtype=float)
        return np.full(n_receivers, float(self.erasure_prob))


@dataclass(frozen=True)
class SimConfig:
    n_packets: int = 20
    n_receivers: int = 20
    gamma: int = 2
    erasure_prob: float = 0.2
    field_order: int = 256
    seed: int = 0
    trials: int = 1
    scheduler: str = "feedback_rr"
    coded_phase_erasures: bool = True
    payload_len: int = 32
    strict_paper_rounds: bool = False
    abstract_decode: bool = False

    def __post_init__(self):
        if self.n_packets < 1:
            raise ValueError(f"need K >= 1, got {self.n_packets}")
        if self.n_receivers < 1:
            raise ValueError(f"need N >= 1, got {self.n_receivers}")
        if not 1 <= self.gamma <= self.n_packets:
            raise ValueError(f"need 1 <= gamma <= K, got gamma={self.gamma} K={self.n_packets}")
        if self.trials < 1:
            raise ValueError(f"need trials >= 1, got {self.trials}")
        if self.scheduler not in SCHEDULERS:
            raise ValueError(f"scheduler must be one of {SCHEDULERS}, got {self.scheduler!r}")
        if not 0.0 <= self.erasure_prob < 1.0:
            raise ValueError(f"erasure probability must be in [0, 1), got {self.erasure_prob}")
        if self.payload_len < 1:
            raise ValueError(f"need payload_len >= 1, got {self.payload_len}")
        get_field(self.field_order)  # rejects unsupported orders


@dataclass(frozen=True)
class TrialResult:
    sfm: StateFeedbackMatrix
    partition: Partition
    completion_time: int  # U
    decode_times: dict  # (receiver, packet) -> coded-phase time index
    delay: Fraction  # D
    empty_demand: bool

    @property
    def n_generations(self):
        return self.partition.n_generations


def systematic_phase(n_packets, n_receivers, channel: ChannelModel, rng) -> StateFeedbackMatrix:
    """Broadcast each packet once; an entry is 1 iff that copy was erased."""
    p = channel.probs(n_receivers)
    misses = rng.random((n_receivers, n_packets)) < p[:, None]
    return StateFeedbackMatrix(misses.astype(np.uint8))


def apdd(result: TrialResult) -> Fraction:
    """Average decode time over wanted pairs, recomputed from the raw map."""
    if not result.decode_times:
        return Fraction(0)
    return Fraction(sum(result.decode_times.values()), len(result.decode_times))


def coded_phase(sfm, partition: Partition, cfg: SimConfig, rng) -> TrialResult:
    """Run coded rounds until every wanted (receiver, packet) pair decodes."""
    report = validate_partition(sfm, partition, gamma=sfm.n_packets)
    if not report.cover_ok:
        raise ValueError("partition does not disjointly cover the packet block")
    field = get_field(cfg.field_order)
    wants = sfm.wants
    n = sfm.n_receivers

    # both decode modes consume this draw, keeping their streams aligned
    payload_seed = int(rng.integers(0, 2**63))
    payloads = None
    known = None
    if not cfg.abstract_decode:
        payload_rng = np.random.default_rng(payload_seed)
        payloads = random_payloads(sfm.n_packets, cfg.payload_len, payload_rng, field)
        known = [
            {k: payloads[k] for k in range(sfm.n_packets) if not wants[r, k]}
            for r in range(n)
        ]

    gen_ids = [list(g.packet_ids) for g in partition.generations]
    states = {}
    pending = []  # per generation: receivers that still need it
    for m, ids in enumerate(gen_ids):
        waiting = set()
        for r in range(n):
            unknown = [k for k in ids if wants[r, k]]
            if unknown:
                states[(r, m)] = DecoderState(m, ids, unknown, field)
                waiting.add(r)
        pending.append(waiting)

    initial_rank = [
        int(wants[:, ids].sum(axis=1).max()) if ids else 0 for ids in gen_ids
    ]
    erasure_p = None
    if cfg.coded_phase_erasures:
        erasure_p = np.full(n, cfg.erasure_prob)

    decode_times = {}
    t = 0
    round_no = 1
    remaining = sum(len(w) for w in pending)
    while remaining:
        quotas = []
        for m, ids in enumerate(gen_ids):
            if cfg.scheduler == "blind_rr":
                quota = 1 if ids else 0
            elif not pending[m]:
                quota = 0
            elif round_no == 1 or cfg.strict_paper_rounds:
                quota = initial_rank[m]
            else:
                quota = max(
                    len(states[(r, m)].unknown_ids) - states[(r, m)].rank
                    for r in pending[m]
                )
            quotas.append(quota)

        for m, quota in enumerate(quotas):
            ids = gen_ids[m]
            for _ in range(quota):
                t += 1
                if payloads is None:
                    coeffs = rng.integers(0, field.q, size=len(ids), dtype=np.uint8)
                    pkt = CodedPacket(m, coeffs, None)
                else:
                    pkt = encode([payloads[k] for k in ids], rng, field, generation_id=m)
                if erasure_p is not None:
                    erased = rng.random(n) < erasure_p
                else:
                    erased = None
                if not pending[m]:
                    continue  # committed slot; no receiver still needs it
                for r in sorted(pending[m]):
                    if erased is not None and erased[r]:
                        continue
                    state = states[(r, m)]
                    state.absorb(pkt, known[r] if known is not None else None)
                    if state.decoded:
                        for k in state.unknown_ids:
                            decode_times[(r, k)] = t
                        pending[m].discard(r)
                        remaining -= 1
                if not remaining:
                    break  # the block just completed; U is this time index
            if not remaining:
                break
        round_no += 1

    n_wanted = int(wants.sum())
    delay = Fraction(sum(decode_times.values()), n_wanted) if n_wanted else Fraction(0)
    return TrialResult(
        sfm=sfm,
        partition=partition,
        completion_time=t,
        decode_times=decode_times,
        delay=delay,
        empty_demand=n_wanted == 0,
    )


def _trial_rng(master_seed, trial_index):
    return np.random.default_rng(np.random.SeedSequence([master_seed, trial_index]))


def run_trial(cfg: SimConfig, trial_index: int) -> dict:
    """One independent trial; the row dict feeds the per-trial CSV."""
    rng = _trial_rng(cfg.seed, trial_index)
    channel = ChannelModel(cfg.erasure_prob)
    sfm = systematic_phase(cfg.n_packets, cfg.n_receivers, channel, rng)
    heur = heuristic_partition(sfm, PartitionerConfig(gamma_cap=cfg.gamma))
    if cfg.scheduler == "blind_rr":
        part = blind_partition(cfg.n_packets, heur.n_generations)
    else:
        part = heur
    result = coded_phase(sfm, part, cfg, rng)
    return {
        "trial": trial_index,
        "scheduler": cfg.scheduler,
        "gamma": cfg.gamma,
        "N": cfg.n_receivers,
        "M": part.n_generations,
        "U": result.completion_time,
        "D": result.delay,
        "total_rank": total_rank(sfm, part),
        "apdd_bound": apdd_upper_bound(sfm, part),
        "empty_demand": int(result.empty_demand),
    }


def _run_trial_star(args):
    return run_trial(*args)


def aggregate_rows(rows):
    """Exact-arithmetic reduction of trial rows into one aggregate cell.

    Sums are integers/Fractions, so worker completion order cannot change
    the result; floats appear only in the final division.
    """
    n = len(rows)
    sums = {"M": 0, "U": 0, "total_rank": 0, "apdd_bound": 0}
    sqsums = {"M": 0, "U": 0}
    d_sum = Fraction(0)
    d_sq = Fraction(0)
    n_demand = 0
    for row in rows:
        for key in sums:
            sums[key] += row[key]
        for key in sqsums:
            sqsums[key] += row[key] ** 2
        if not row["empty_demand"]:
            n_demand += 1
            d_sum += row["D"]
            d_sq += row["D"] ** 2

    def stats(total, total_sq, count):
        if count == 0:
            return 0.0, 0.0, 0.0
        mean = total / count
        var = (total_sq - Fraction(total) ** 2 / count) / (count - 1) if count > 1 else 0
        std = float(var) ** 0.5 if var > 0 else 0.0
        return float(mean), std, 1.96 * std / count**0.5

    mean_u, std_u, ci_u = stats(sums["U"], sqsums["U"], n)
    mean_m, std_m, ci_m = stats(sums["M"], sqsums["M"], n)
    mean_d, std_d, ci_d = stats(d_sum, d_sq, n_demand)
    return {
        "trials": n,
        "n_demand": n_demand,
        "mean_M": mean_m,
        "std_M": std_m,
        "mean_U": mean_u,
        "std_U": std_u,
        "ci95_U": ci_u,
        "mean_D": mean_d,
        "std_D": std_d,
        "ci95_D": ci_d,
        "mean_total_rank": sums["total_rank"] / n,
        "mean_apdd_bound": sums["apdd_bound"] / n,
    }


def run_experiment(cfg: SimConfig, workers: int = 1):
    """Monte-Carlo cell: per-trial rows (trial order) plus their aggregate."""
    args = [(cfg, i) for i in range(cfg.trials)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunk = max(1, cfg.trials // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_trial_star, args, chunksize=chunk))
    else:
        rows = [run_trial(cfg, i) for i in range(cfg.trials)]
    rows.sort(key=lambda r: r["trial"])
    return rows, aggregate_rows(rows)
