"""Feedback-assisted generation partitioning for coded wireless broadcast.

The sender broadcasts a packet block once, collects one round of reception
feedback, partitions the block into generations whose per-receiver demand
never exceeds a rank budget, then broadcasts random linear combinations per
generation until everyone decodes.  This package provides the feedback data
model and metrics, the partitioning algorithms (greedy, blind, exact), the
hypergraph-coloring view of the problem, a GF(2^m) codec, and a Monte-Carlo
protocol simulator with a CSV benchmark harness.
"""

from .galois import GF16, GF256, Field, get_field, gf_add, gf_inv, gf_mul
from .hypergraph import (
    Coloring,
    Hypergraph,
    NoReceiversError,
    chromatic_number,
    coloring_to_partition,
    hypergraph_to_sfm,
    is_uniform,
    is_valid_coloring,
    partition_to_coloring,
    random_hypergraph,
    random_uniform_hypergraph,
    sfm_to_hypergraph,
)
from .partition import (
    InstanceTooLargeError,
    OracleResult,
    PartitionerConfig,
    blind_partition,
    heuristic_partition,
    heuristic_partition_with_trace,
    idnc_reference_partition,
    optimal_partition,
)
from .rlnc import CodedPacket, DecoderState, encode, random_payloads
from .sfm import (
    Generation,
    Partition,
    StateFeedbackMatrix,
    apdd_upper_bound,
    is_irreducible,
    load_sfm,
    parse_sfm,
    partition_from_json,
    partition_to_json,
    popularity,
    rank,
    total_rank,
    validate_partition,
)
from .sim import (
    ChannelModel,
    SimConfig,
    TrialResult,
    apdd,
    coded_phase,
    run_experiment,
    run_trial,
    systematic_phase,
)

__version__ = "0.1.0"
