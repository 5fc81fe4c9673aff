"""Per-simulation performance metrics and composite-score tables.

A collision step is counted once per step whenever any agent raises the
corresponding flag; agent-agent and agent-lane counters are independent.
Deviation averages the absolute center-line offset over agents and steps
(reported in cm); speed averages the absolute speed (m/s).

Composite scores weight the three metrics by the inverse of their mean over
the compared models, so for a model set of size m

    score_i = - m * collisions_i / sum(collisions)
              - m * deviation_i  / sum(deviation)
              + m * speed_i      / sum(speed)

which makes the scores scale-free and sum to exactly -m.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .jsonutil import format_float

CSV_HEADER = ["model", "scenario", "sim", "C_aa", "C_al", "C_total", "D_cm", "V_mps"]


class DegenerateWeightError(ValueError):
    """A metric sums to zero over the model set, so its inverse-mean weight
    is undefined (an all-stationary 'conservative' model set does this)."""


@dataclass
class MetricsAccumulator:
    num_agents: int
    steps_total: int = 0
    steps_with_agent_collision: int = 0
    steps_with_lane_collision: int = 0
    sum_abs_center_offset: float = 0.0
    sum_abs_speed: float = 0.0

    def add_step(self, collided_agent, collided_lane, center_offsets, speeds) -> None:
        collided_agent = np.asarray(collided_agent, dtype=bool)
        collided_lane = np.asarray(collided_lane, dtype=bool)
        center_offsets = np.asarray(center_offsets, dtype=float)
        speeds = np.asarray(speeds, dtype=float)
        if not (
            len(collided_agent) == len(collided_lane) == len(center_offsets) == len(speeds) == self.num_agents
        ):
            raise ValueError(f"per-step arrays must all have length {self.num_agents}")
        self.steps_total += 1
        if collided_agent.any():
            self.steps_with_agent_collision += 1
        if collided_lane.any():
            self.steps_with_lane_collision += 1
        self.sum_abs_center_offset += float(np.abs(center_offsets).sum())
        self.sum_abs_speed += float(np.abs(speeds).sum())


@dataclass(frozen=True)
class MetricsRecord:
    """Rates in percent, deviation in cm, speed in m/s."""

    c_aa: float
    c_al: float
    c_total: float
    d_cm: float
    v_mps: float


def finalize(acc: MetricsAccumulator) -> MetricsRecord:
    if acc.steps_total <= 0:
        raise ValueError("cannot finalize metrics over zero steps")
    c_aa = 100.0 * acc.steps_with_agent_collision / acc.steps_total
    c_al = 100.0 * acc.steps_with_lane_collision / acc.steps_total
    denom = acc.num_agents * acc.steps_total
    return MetricsRecord(
        c_aa=c_aa,
        c_al=c_al,
        c_total=c_aa + c_al,
        d_cm=100.0 * acc.sum_abs_center_offset / denom,
        v_mps=acc.sum_abs_speed / denom,
    )


@dataclass(frozen=True)
class ScoreTable:
    models: tuple[str, ...]
    records: tuple[MetricsRecord, ...]
    scores: tuple[float, ...]

    def best_model(self) -> str:
        return self.models[int(np.argmax(self.scores))]


def composite_scores(named_records: list[tuple[str, MetricsRecord]]) -> ScoreTable:
    """Inverse-mean-weighted scores for one set of compared models."""
    if not named_records:
        raise ValueError("need at least one model to score")
    models = tuple(name for name, _ in named_records)
    records = tuple(rec for _, rec in named_records)
    m = len(records)
    sums = {
        "total collision rate": sum(r.c_total for r in records),
        "center line deviation": sum(r.d_cm for r in records),
        "average speed": sum(r.v_mps for r in records),
    }
    for metric, total in sums.items():
        if total <= 0.0:
            raise DegenerateWeightError(
                f"degenerate weight: {metric} sums to {total} across the {m} models"
            )
    c_sum, d_sum, v_sum = sums.values()
    scores = tuple(
        -m * r.c_total / c_sum - m * r.d_cm / d_sum + m * r.v_mps / v_sum for r in records
    )
    return ScoreTable(models=models, records=records, scores=scores)


@dataclass(frozen=True)
class MetricsRow:
    model: str
    scenario: str
    sim: int
    record: MetricsRecord


def write_metrics_csv(path, rows: list[MetricsRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in rows:
            r = row.record
            writer.writerow(
                [row.model, row.scenario, row.sim]
                + [format_float(v) for v in (r.c_aa, r.c_al, r.c_total, r.d_cm, r.v_mps)]
            )


def read_metrics_csv(path) -> list[MetricsRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)!r}, got {header}")
        for line in reader:
            if not line:
                continue
            model, scenario, sim, c_aa, c_al, c_total, d_cm, v_mps = line
            rows.append(
                MetricsRow(
                    model=model,
                    scenario=scenario,
                    sim=int(sim),
                    record=MetricsRecord(
                        c_aa=float(c_aa),
                        c_al=float(c_al),
                        c_total=float(c_total),
                        d_cm=float(d_cm),
                        v_mps=float(v_mps),
                    ),
                )
            )
    if not rows:
        raise ValueError(f"{path}: no metric rows found")
    return rows


def average_records(records: list[MetricsRecord]) -> MetricsRecord:
    """Plain mean of each field; the stored c_total is averaged as given,
    not recomputed, so externally transcribed (rounded) tables pass through
    unchanged."""
    n = len(records)
    return MetricsRecord(
        c_aa=sum(r.c_aa for r in records) / n,
        c_al=sum(r.c_al for r in records) / n,
        c_total=sum(r.c_total for r in records) / n,
        d_cm=sum(r.d_cm for r in records) / n,
        v_mps=sum(r.v_mps for r in records) / n,
    )


def score_rows(rows: list[MetricsRow]) -> dict[str, ScoreTable]:
    """Group CSV rows by scenario, average each model over its sims, and
    score the models within every scenario."""
    scenarios: dict[str, dict[str, list[MetricsRecord]]] = {}
    for row in rows:
        scenarios.setdefault(row.scenario, {}).setdefault(row.model, []).append(row.record)
    tables = {}
    for scenario in sorted(scenarios):
        by_model = scenarios[scenario]
        named = [(model, average_records(by_model[model])) for model in sorted(by_model)]
        tables[scenario] = composite_scores(named)
    return tables


def format_score_report(tables: dict[str, ScoreTable]) -> str:
    """Aligned text table per scenario: metric rows, model columns, best
    score marked with '*'."""
    lines = []
    metric_rows = [
        ("C_AA [%]", lambda r: r.c_aa),
        ("C_AL [%]", lambda r: r.c_al),
        ("C_total [%]", lambda r: r.c_total),
        ("D [cm]", lambda r: r.d_cm),
        ("V [m/s]", lambda r: r.v_mps),
    ]
    for scenario, table in tables.items():
        lines.append(f"scenario: {scenario}")
        width = max(12, *(len(m) + 2 for m in table.models))
        header = f"{'metric':<14}" + "".join(f"{m:>{width}}" for m in table.models)
        lines.append(header)
        for label, getter in metric_rows:
            lines.append(
                f"{label:<14}" + "".join(f"{getter(r):>{width}.2f}" for r in table.records)
            )
        best = int(np.argmax(table.scores))
        cells = [
            f"{s:.2f}*" if i == best else f"{s:.2f}" for i, s in enumerate(table.scores)
        ]
        lines.append(f"{'S':<14}" + "".join(f"{c:>{width}}" for c in cells))
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def score_report_json(tables: dict[str, ScoreTable]) -> dict:
    return {
        "scenarios": {
            scenario: {
                "models": list(table.models),
                "metrics": {
                    "C_aa": [r.c_aa for r in table.records],
                    "C_al": [r.c_al for r in table.records],
                    "C_total": [r.c_total for r in table.records],
                    "D_cm": [r.d_cm for r in table.records],
                    "V_mps": [r.v_mps for r in table.records],
                },
                "scores": list(table.scores),
                "best": table.best_model(),
            }
            for scenario, table in tables.items()
        }
    }
