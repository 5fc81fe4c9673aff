"""Per-agent observation vectors in six layout variants.

The full layout (M0) composes five ingredients: an ego-frame representation
of the surroundings, neighbor footprint vertices, neighbor distances, scalar
distances to the lane boundaries, and the signed distance to the lane center
line plus a short look-ahead sampled from it. Variants M1-M5 each drop or
replace exactly one ingredient:

    M0  self [v, d_cl, d_lb, d_rb, ref points]           4 + 2*n_ref
        neighbor [vertices(8), rel. velocity(2), dist]   11 each
    M1  same quantities in the global frame; self gains the ego pose
        (x, y, cos yaw, sin yaw)                          8 + 2*n_ref
    M2  neighbor pose + dimensions instead of vertices:
        [pos(2), heading cos/sin(2), dims(2), vel(2), dist]  9 each
    M3  neighbor block without the distance entry         10 each
    M4  boundary sample points instead of the two scalar
        boundary distances                                2 + 2*n_ref + 4*n_bnd
    M5  no center-line distance                           3 + 2*n_ref

Neighbor blocks are ordered nearest first. Missing neighbors are padded with
a placeholder agent 100 m ahead of the ego at matched heading and speed, so
padding flows through the same per-variant block builder as real neighbors.
Observations are pure functions of an immutable world snapshot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .collision import agent_distance, footprint_of, footprint_polyline_distance
from .dynamics import AgentState, VehicleParams
from .geometry import ego_frame
from .mapdata import ScenarioMap

VARIANTS = ("M0", "M1", "M2", "M3", "M4", "M5")
SENTINEL_ID = -1
SENTINEL_AHEAD = 100.0  # placeholder neighbor distance, far outside interaction range


@dataclass(frozen=True)
class ObservationConfig:
    variant: str = "M0"
    n_sur: int = 2
    n_ref: int = 3
    n_bnd: int = 3
    ref_spacing: float = 0.10
    distance_mode: str = "cg"           # 'cg' or 'min_polygon'
    boundary_from_footprint: bool = False
    normalization: tuple | None = None  # optional (scale, offset): out = scale*raw + offset

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.n_sur < 0:
            raise ValueError(f"n_sur must be >= 0, got {self.n_sur}")
        if self.n_ref < 1:
            raise ValueError(f"n_ref must be >= 1, got {self.n_ref}")
        if self.variant == "M4" and self.n_bnd < 1:
            raise ValueError(f"n_bnd must be >= 1 for M4, got {self.n_bnd}")
        if self.ref_spacing <= 0.0:
            raise ValueError(f"ref_spacing must be positive, got {self.ref_spacing}")


@dataclass(frozen=True)
class LayoutBlock:
    name: str
    offset: int
    length: int


@dataclass(frozen=True)
class ObservationLayout:
    variant: str
    blocks: tuple[LayoutBlock, ...]

    @property
    def total(self) -> int:
        last = self.blocks[-1]
        return last.offset + last.length

    def block(self, name: str) -> LayoutBlock:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(f"layout {self.variant} has no block named {name!r}")

    def slice(self, name: str) -> slice:
        b = self.block(name)
        return slice(b.offset, b.offset + b.length)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "blocks": [{"name": b.name, "offset": b.offset, "length": b.length} for b in self.blocks],
        }


def _self_block_fields(cfg: ObservationConfig) -> list[tuple[str, int]]:
    if cfg.variant == "M1":
        return [
            ("self_speed", 1),
            ("self_center_offset", 1),
            ("self_boundary_distances", 2),
            ("self_pose", 4),
            ("self_ref_points", 2 * cfg.n_ref),
        ]
    if cfg.variant == "M4":
        return [
            ("self_speed", 1),
            ("self_center_offset", 1),
            ("self_ref_points", 2 * cfg.n_ref),
            ("self_left_boundary_points", 2 * cfg.n_bnd),
            ("self_right_boundary_points", 2 * cfg.n_bnd),
        ]
    if cfg.variant == "M5":
        return [
            ("self_speed", 1),
            ("self_boundary_distances", 2),
            ("self_ref_points", 2 * cfg.n_ref),
        ]
    # M0, M2, M3
    return [
        ("self_speed", 1),
        ("self_center_offset", 1),
        ("self_boundary_distances", 2),
        ("self_ref_points", 2 * cfg.n_ref),
    ]


def _neighbor_block_fields(cfg: ObservationConfig, k: int) -> list[tuple[str, int]]:
    if cfg.variant == "M2":
        return [
            (f"neighbor{k}_position", 2),
            (f"neighbor{k}_heading", 2),
            (f"neighbor{k}_dims", 2),
            (f"neighbor{k}_rel_velocity", 2),
            (f"neighbor{k}_distance", 1),
        ]
    fields = [(f"neighbor{k}_vertices", 8), (f"neighbor{k}_rel_velocity", 2)]
    if cfg.variant != "M3":
        fields.append((f"neighbor{k}_distance", 1))
    return fields


def layout_for(cfg: ObservationConfig) -> ObservationLayout:
    blocks: list[LayoutBlock] = []
    offset = 0
    for name, length in _self_block_fields(cfg):
        blocks.append(LayoutBlock(name, offset, length))
        offset += length
    for k in range(cfg.n_sur):
        for name, length in _neighbor_block_fields(cfg, k):
            blocks.append(LayoutBlock(name, offset, length))
            offset += length
    return ObservationLayout(variant=cfg.variant, blocks=tuple(blocks))


def observation_size(cfg: ObservationConfig) -> int:
    return layout_for(cfg).total


def select_neighbors(ego: int, states: list[AgentState], n_sur: int) -> list[int]:
    """Ids of the n_sur agents nearest the ego by CG distance, ascending.

    Exact distance ties resolve to the smaller id; short worlds pad with the
    sentinel id -1.
    """
    if not 0 <= ego < len(states):
        raise ValueError(f"ego index {ego} out of range for {len(states)} agents")
    others = [
        (agent_distance(states[ego], states[j], "cg"), j)
        for j in range(len(states))
        if j != ego
    ]
    others.sort()
    picked = [j for _, j in others[:n_sur]]
    picked.extend([SENTINEL_ID] * (n_sur - len(picked)))
    return picked


def _world_velocity(state: AgentState) -> np.ndarray:
    return state.v * np.array([math.cos(state.yaw), math.sin(state.yaw)])


def _sentinel_state(ego: AgentState) -> AgentState:
    return replace(
        ego,
        x=ego.x + SENTINEL_AHEAD * math.cos(ego.yaw),
        y=ego.y + SENTINEL_AHEAD * math.sin(ego.yaw),
    )


def _neighbor_values(ego: AgentState, other: AgentState, cfg: ObservationConfig, vehicle: VehicleParams) -> list[float]:
    ego_pose = (ego.x, ego.y, ego.yaw)
    in_ego_view = cfg.variant != "M1"
    rel_vel = _world_velocity(other) - _world_velocity(ego)
    if in_ego_view:
        rel_vel = ego_frame(ego_pose, rel_vel, "vector")
    values: list[float]
    if cfg.variant == "M2":
        pos = np.array([other.x, other.y])
        if in_ego_view:
            pos = ego_frame(ego_pose, pos, "point")
        heading = other.yaw - ego.yaw if in_ego_view else other.yaw
        values = [
            pos[0],
            pos[1],
            math.cos(heading),
            math.sin(heading),
            vehicle.length,
            vehicle.width,
            rel_vel[0],
            rel_vel[1],
        ]
    else:
        vertices = footprint_of(other, vehicle.length, vehicle.width)
        if in_ego_view:
            vertices = ego_frame(ego_pose, vertices, "point")
        values = [*vertices.ravel(), rel_vel[0], rel_vel[1]]
    if cfg.variant != "M3":
        values.append(agent_distance(ego, other, cfg.distance_mode, vehicle.length, vehicle.width))
    return values


def build_observation(
    ego: int,
    states: list[AgentState],
    smap: ScenarioMap,
    cfg: ObservationConfig,
    vehicle: VehicleParams,
) -> np.ndarray:
    """Observation vector for one agent from an immutable world snapshot."""
    state = states[ego]
    if state.path_id is None:
        raise ValueError(f"agent {ego} has no reference path assigned")
    try:
        path = smap.path(state.path_id)
    except KeyError:
        raise ValueError(f"agent {ego} references unknown path id {state.path_id}") from None

    ego_pose = (state.x, state.y, state.yaw)
    position = np.array([state.x, state.y])
    center = path.stitched_center_line
    s, d_cl, _ = center.project(position)
    lanelet = smap.lanelet(path.lanelet_id_at(s))

    ref_points = center.sample_ahead(s, cfg.n_ref, cfg.ref_spacing, wrap=path.is_loop)
    if cfg.variant != "M1":
        ref_points = ego_frame(ego_pose, ref_points, "point")

    values: list[float] = [state.v]
    if cfg.variant != "M5":
        values.append(d_cl)
    if cfg.variant == "M4":
        values.extend(ref_points.ravel())
        for boundary in (lanelet.left_boundary, lanelet.right_boundary):
            s_b, _, _ = boundary.project(position)
            pts = boundary.sample_ahead(s_b, cfg.n_bnd, cfg.ref_spacing, wrap=False)
            values.extend(ego_frame(ego_pose, pts, "point").ravel())
    else:
        if cfg.boundary_from_footprint:
            rect = footprint_of(state, vehicle.length, vehicle.width)
            d_lb = footprint_polyline_distance(rect, lanelet.left_boundary)
            d_rb = footprint_polyline_distance(rect, lanelet.right_boundary)
        else:
            d_lb = lanelet.left_boundary.distance_to(position)
            d_rb = lanelet.right_boundary.distance_to(position)
        values.extend([d_lb, d_rb])
        if cfg.variant == "M1":
            values.extend([state.x, state.y, math.cos(state.yaw), math.sin(state.yaw)])
        values.extend(ref_points.ravel())

    for j in select_neighbors(ego, states, cfg.n_sur):
        other = states[j] if j != SENTINEL_ID else _sentinel_state(state)
        values.extend(_neighbor_values(state, other, cfg, vehicle))

    obs = np.asarray(values, dtype=float)
    if cfg.normalization is not None:
        scale, offset = cfg.normalization
        obs = obs * np.asarray(scale, dtype=float) + np.asarray(offset, dtype=float)
    if not np.all(np.isfinite(obs)):
        raise ValueError(f"agent {ego}: observation contains non-finite entries")
    return obs


def observe_all(
    states: list[AgentState],
    smap: ScenarioMap,
    cfg: ObservationConfig,
    vehicle: VehicleParams,
) -> np.ndarray:
    """Stack of observations for every agent, shape (N, layout total)."""
    return np.stack([build_observation(i, states, smap, cfg, vehicle) for i in range(len(states))])
