"""End-to-end broadcast benchmark: feedback-assisted vs blind partitioning.

Each trial broadcasts a 20-packet block to 20 receivers over 20%-erasure
channels, collects the feedback matrix, partitions (greedy with the rank
cap, or blind chunks of the same generation count), then runs the coded
phase until everyone decodes.  The sweep reproduces the headline comparison
at desk scale; bump `trials` for smoother numbers.
"""

from dataclasses import replace

from gencast import SimConfig
from gencast.sim import run_experiment, run_trial

# one trial, narrated
cfg = SimConfig(n_packets=20, n_receivers=20, gamma=2, erasure_prob=0.2,
                seed=2025, trials=1)
row = run_trial(cfg, 0)
print("single trial with the feedback scheduler:")
print(f"  generations M={row['M']}, completion time U={row['U']}, "
      f"delay D={float(row['D']):.2f}")
print(f"  erasure-free floor (total rank) = {row['total_rank']}, "
      f"closed-form delay bound = {row['apdd_bound']}")

blind_row = run_trial(replace(cfg, scheduler="blind_rr"), 0)
print("same feedback matrix, blind partitioning:")
print(f"  M={blind_row['M']}, U={blind_row['U']}, D={float(blind_row['D']):.2f}")

# the gamma sweep
trials = 300
print(f"\nsweep over the rank cap ({trials} paired trials per cell):")
print("gamma    U_feedback  U_blind   dU%     D_feedback  D_blind   dD%")
for gamma in (1, 2, 3, 5, 8, 10):
    aggs = {}
    for scheduler in ("feedback_rr", "blind_rr"):
        cell = SimConfig(n_packets=20, n_receivers=20, gamma=gamma, erasure_prob=0.2,
                         seed=2025, trials=trials, scheduler=scheduler,
                         abstract_decode=True)
        _, aggs[scheduler] = run_experiment(cell)
    fb, bl = aggs["feedback_rr"], aggs["blind_rr"]
    du = 100 * (bl["mean_U"] - fb["mean_U"]) / bl["mean_U"]
    dd = 100 * (bl["mean_D"] - fb["mean_D"]) / bl["mean_D"]
    print(f"{gamma:5d}    {fb['mean_U']:9.2f} {bl['mean_U']:9.2f} {du:6.1f}"
          f"    {fb['mean_D']:9.2f} {bl['mean_D']:8.2f} {dd:6.1f}")

print("\none round of feedback buys both throughput and delay; the gap")
print("closes as the cap grows because both schemes converge to coding over")
print("the whole block.  The same sweep is scriptable via:")
print("  gencast simulate --experiment fig3_U --out results/")
