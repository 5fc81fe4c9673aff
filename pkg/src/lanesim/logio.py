"""JSONL trajectory logs with bit-exact float round-tripping.

The first line is a meta record, ``{"meta": {...}}``, describing the run
(scenario, agent count, sample time, observation variant, seed, body
dimensions). Every following line is one step record with fixed field order:

    {"t", "agents": [{"id", "x", "y", "yaw", "v",
                      "action": [v_cmd, steer_cmd],
                      "flags": {"aa", "al"}, "d_cl"}, ...],
     "resets": [ids]}

Poses, d_cl and v are the end-of-step values (resets applied), flags are the
collision flags raised during the step, and the action is the one applied.
Floats carry 17 significant digits so replaying a log reproduces the run
bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import jsonutil
from .env import EnvConfig, StepOutput, WorldState


def make_meta(cfg: EnvConfig, seed: int) -> dict:
    return {
        "scenario": cfg.scenario,
        "num_agents": cfg.num_agents,
        "dt": cfg.dt,
        "variant": cfg.obs.variant,
        "seed": seed,
        "body_length": cfg.vehicle.length,
        "body_width": cfg.vehicle.width,
    }


def step_record(out: StepOutput, world: WorldState) -> dict:
    agents = []
    for i, state in enumerate(world.states):
        agents.append(
            {
                "id": i,
                "x": state.x,
                "y": state.y,
                "yaw": state.yaw,
                "v": state.v,
                "action": [float(out.actions[i, 0]), float(out.actions[i, 1])],
                "flags": {"aa": bool(out.collided_agent[i]), "al": bool(out.collided_lane[i])},
                "d_cl": float(out.center_offsets[i]),
            }
        )
    return {"t": out.t, "agents": agents, "resets": [int(i) for i in np.flatnonzero(out.was_reset)]}


class TrajectoryLogWriter:
    """Streams one simulation into a JSONL file."""

    def __init__(self, path, meta: dict):
        self.path = Path(path)
        self._fh = open(self.path, "w", encoding="utf-8")
        self._fh.write(jsonutil.dumps({"meta": meta}) + "\n")

    def write_step(self, out: StepOutput, world: WorldState) -> None:
        self._fh.write(jsonutil.dumps(step_record(out, world)) + "\n")

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "TrajectoryLogWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


@dataclass
class TrajectoryLog:
    meta: dict
    records: list[dict]

    @property
    def num_steps(self) -> int:
        return len(self.records)


def read_log(path) -> TrajectoryLog:
    meta = None
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            data = jsonutil.loads(line)
            if "meta" in data:
                meta = data["meta"]
            else:
                records.append(data)
    if meta is None:
        raise ValueError(f"{path}: missing meta record on the first line")
    return TrajectoryLog(meta=meta, records=records)
