"""Named experiments, parameter sweeps, and CSV emission.

An experiment spec (JSON document or built-in name) expands into a grid of
simulation cells over (scheduler, gamma, N).  Each cell is one Monte-Carlo
run; outputs are a per-trial CSV and an aggregate CSV with documented,
stable schemas.  Two non-simulation experiments ride the same harness:
oracle_gap compares the greedy partitioner against the exact solver on
random instances, and coloring_check cross-validates the coloring/partition
equivalence on random hypergraphs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .hypergraph import (
    Coloring,
    coloring_to_partition,
    hypergraph_to_sfm,
    is_valid_coloring,
    random_hypergraph,
)
from .partition import InstanceTooLargeError, PartitionerConfig, heuristic_partition, optimal_partition
from .sim import ChannelModel, SimConfig, run_experiment, systematic_phase
from .sfm import validate_partition

__all__ = [
    "ExperimentSpec",
    "SpecError",
    "EXPERIMENT_NAMES",
    "load_spec",
    "named_spec",
    "run_simulation_sweep",
    "run_oracle_gap",
    "run_coloring_check",
    "TRIAL_COLUMNS",
    "AGGREGATE_COLUMNS",
]

EXPERIMENT_NAMES = ("fig3_U", "fig3_D", "tradeoff", "oracle_gap", "coloring_check")

TRIAL_COLUMNS = ["trial", "scheduler", "gamma", "N", "M", "U", "D",
                 "total_rank", "apdd_bound", "empty_demand"]
AGGREGATE_COLUMNS = ["scheduler", "gamma", "N", "trials", "n_demand",
                     "mean_M", "std_M", "mean_U", "std_U", "ci95_U",
                     "mean_D", "std_D", "ci95_D",
                     "mean_total_rank", "mean_apdd_bound"]


class SpecError(ValueError):
    """Experiment spec failed validation; message lists the offending keys."""


@dataclass(frozen=True)
class ExperimentSpec:
    experiment: str
    config: SimConfig = field(default_factory=SimConfig)
    gammas: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10)
    receivers: tuple[int, ...] = (20,)
    schedulers: tuple[str, ...] = ("feedback_rr", "blind_rr")
    # oracle_gap / coloring_check knobs
    instances: int = 300
    check_gammas: tuple[int, ...] = (1, 2, 3)

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_NAMES:
            raise SpecError(
                f"unknown experiment {self.experiment!r}; choose from {EXPERIMENT_NAMES}"
            )
        if not self.gammas:
            raise SpecError("gamma sweep list must be nonempty")
        if not self.receivers:
            raise SpecError("receiver sweep list must be nonempty")
        bad = [s for s in self.schedulers if s not in ("feedback_rr", "blind_rr")]
        if bad:
            raise SpecError(f"unknown schedulers: {bad}")


def named_spec(name: str, **config_overrides) -> ExperimentSpec:
    """Built-in experiment definitions with the headline parameters pinned."""
    if name in ("fig3_U", "fig3_D"):
        cfg = SimConfig(n_packets=20, n_receivers=20, erasure_prob=0.2,
                        coded_phase_erasures=True, trials=2000, abstract_decode=True)
        spec = ExperimentSpec(experiment=name, config=cfg,
                              gammas=tuple(range(1, 11)), receivers=(20,),
                              schedulers=("feedback_rr", "blind_rr"))
    elif name == "tradeoff":
        cfg = SimConfig(n_packets=20, n_receivers=20, erasure_prob=0.2,
                        coded_phase_erasures=False, trials=1000, abstract_decode=True)
        spec = ExperimentSpec(experiment=name, config=cfg,
                              gammas=tuple(range(1, 11)), receivers=(5, 20),
                              schedulers=("feedback_rr",))
    elif name == "oracle_gap":
        cfg = SimConfig(n_packets=8, n_receivers=6, gamma=2, erasure_prob=0.5)
        spec = ExperimentSpec(experiment=name, config=cfg, gammas=(2,),
                              receivers=(6,), schedulers=("feedback_rr",), instances=300)
    elif name == "coloring_check":
        cfg = SimConfig(n_packets=10, n_receivers=5, erasure_prob=0.4)
        spec = ExperimentSpec(experiment=name, config=cfg, gammas=(1, 2, 3),
                              receivers=(5,), schedulers=("feedback_rr",), instances=200)
    else:
        raise SpecError(f"unknown experiment {name!r}; choose from {EXPERIMENT_NAMES}")
    if config_overrides:
        spec = replace(spec, config=replace(spec.config, **config_overrides))
    return spec


_CONFIG_KEYS = {f.name for f in fields(SimConfig)}
_SPEC_KEYS = {"experiment", "config", "gammas", "receivers", "schedulers",
              "instances", "check_gammas"}


def load_spec(doc) -> ExperimentSpec:
    """Build a spec from a parsed JSON document, validating keys and types."""
    if not isinstance(doc, dict):
        raise SpecError("spec must be a JSON object")
    unknown = sorted(set(doc) - _SPEC_KEYS)
    if unknown:
        raise SpecError(f"unknown spec keys: {unknown}; allowed: {sorted(_SPEC_KEYS)}")
    if "experiment" not in doc:
        raise SpecError(f"spec needs an 'experiment' key, one of {EXPERIMENT_NAMES}")
    cfg_doc = doc.get("config", {})
    if not isinstance(cfg_doc, dict):
        raise SpecError("'config' must be an object of SimConfig overrides")
    unknown = sorted(set(cfg_doc) - _CONFIG_KEYS)
    if unknown:
        raise SpecError(f"unknown config keys: {unknown}; allowed: {sorted(_CONFIG_KEYS)}")
    base = named_spec(doc["experiment"])
    try:
        cfg = replace(base.config, **cfg_doc)
        spec = replace(
            base,
            config=cfg,
            gammas=tuple(doc.get("gammas", base.gammas)),
            receivers=tuple(doc.get("receivers", base.receivers)),
            schedulers=tuple(doc.get("schedulers", base.schedulers)),
            instances=int(doc.get("instances", base.instances)),
            check_gammas=tuple(doc.get("check_gammas", base.check_gammas)),
        )
    except (TypeError, ValueError) as exc:
        raise SpecError(f"invalid spec value: {exc}") from exc
    return spec


def _write_csv(path, columns, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])


def _fmt(value):
    from fractions import Fraction

    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, float):
        return repr(value)
    return value


def run_simulation_sweep(spec: ExperimentSpec, out_dir, workers: int = 1):
    """Run every (scheduler, gamma, N) cell; write per-trial + aggregate CSVs.

    Cells share the master seed, so the heuristic and blind cells of one
    (gamma, N) point see identical feedback matrices trial for trial.
    """
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trial_rows = []
    agg_rows = []
    for n_receivers in spec.receivers:
        for gamma in spec.gammas:
            for scheduler in spec.schedulers:
                cfg = replace(spec.config, gamma=gamma, n_receivers=n_receivers,
                              scheduler=scheduler)
                rows, agg = run_experiment(cfg, workers=workers)
                trial_rows.extend(rows)
                agg_rows.append({"scheduler": scheduler, "gamma": gamma,
                                 "N": n_receivers, **agg})
    _write_csv(out / "per_trial.csv", TRIAL_COLUMNS, trial_rows)
    _write_csv(out / "aggregate.csv", AGGREGATE_COLUMNS, agg_rows)
    return agg_rows


def headline_gaps(agg_rows):
    """Per (gamma, N): relative U and D reduction of feedback over blind."""
    cells = {(r["scheduler"], r["gamma"], r["N"]): r for r in agg_rows}
    gaps = []
    for (scheduler, gamma, n), row in sorted(
        cells.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0])
    ):
        if scheduler != "feedback_rr":
            continue
        blind = cells.get(("blind_rr", gamma, n))
        if blind is None or blind["mean_U"] == 0 or blind["mean_D"] == 0:
            continue
        gaps.append({
            "gamma": gamma,
            "N": n,
            "du_pct": 100.0 * (blind["mean_U"] - row["mean_U"]) / blind["mean_U"],
            "dd_pct": 100.0 * (blind["mean_D"] - row["mean_D"]) / blind["mean_D"],
        })
    return gaps


def run_oracle_gap(n_packets, n_receivers, erasure_prob, gamma, count, seed,
                   max_packets: int = 12):
    """Greedy-vs-exact generation counts on seeded random instances."""
    if n_packets > max_packets:
        raise InstanceTooLargeError(
            f"K={n_packets} exceeds the exact-search cap of {max_packets} packets"
        )
    channel = ChannelModel(erasure_prob)
    rows = []
    for i in range(count):
        instance_seed = [seed, i]
        rng = np.random.default_rng(np.random.SeedSequence(instance_seed))
        sfm = systematic_phase(n_packets, n_receivers, channel, rng)
        heur = heuristic_partition(sfm, PartitionerConfig(gamma_cap=gamma))
        opt = optimal_partition(sfm, gamma, max_packets=max_packets)
        rows.append({
            "instance_seed": f"{seed}:{i}",
            "M_heur": heur.n_generations,
            "M_opt": opt.min_generations,
            "nodes_explored": opt.nodes_explored,
        })
    return rows


def run_coloring_check(n_vertices, n_edges, edge_prob, gammas, count, seed):
    """Random-instance equivalence check between the coloring validity test
    and the rank-cap partition test under the conversion maps."""
    rows = []
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        h = random_hypergraph(n_vertices, n_edges, edge_prob, rng)
        sfm = hypergraph_to_sfm(h)
        mismatches = 0
        checked = 0
        for gamma in gammas:
            n_colors = int(rng.integers(1, n_vertices + 1))
            assignment = tuple(int(c) for c in rng.integers(0, n_colors, size=n_vertices))
            coloring = Coloring(assignment)
            part = coloring_to_partition(coloring)
            coloring_ok = is_valid_coloring(h, coloring, gamma).valid
            partition_ok = not validate_partition(sfm, part, gamma).rank_violations
            checked += 1
            if coloring_ok != partition_ok:
                mismatches += 1
        rows.append({
            "instance_seed": f"{seed}:{i}",
            "n_vertices": n_vertices,
            "n_edges": h.n_edges,
            "checked": checked,
            "mismatches": mismatches,
        })
    return rows
