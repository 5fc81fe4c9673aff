"""Benchmarking end to end: campaigns, metric tables, composite scores.

Compares the lane-following controller against the random baseline on one
scenario with a reduced campaign, then scores them with the inverse-mean
weighting. The score is scale-free, sums to -(number of models), and favors
low collision rates, low deviation and high speed.
"""
import tempfile
from pathlib import Path

from lanesim import Campaign, run_evaluation, score_command
from lanesim.metrics import read_metrics_csv, write_metrics_csv

out = Path(tempfile.mkdtemp(prefix="lanesim_bench_"))

rows = []
for policy in ("pure_pursuit", "random"):
    campaign = Campaign(
        scenarios=("loop_intersection",),
        policy=policy,
        num_sims=4,
        steps=400,
        base_seed=11,
        out_dir=str(out / policy),
    )
    print(f"running {policy} ...")
    rows.extend(run_evaluation(campaign))

combined = out / "combined.csv"
write_metrics_csv(combined, rows)
print(f"\n{len(rows)} metric rows -> {combined}")

print("\ncomposite-score report (best model starred):")
print(score_command(combined, json_out=out / "scores.json"))
print(f"JSON report: {out / 'scores.json'}")

# the identity behind the weighting: scores always sum to -|models|
table_rows = read_metrics_csv(combined)
models = sorted({r.model for r in table_rows})
print(f"models compared: {models}; score sum is always -{len(models)}")
