"""Multi-agent driving environment: reset/step semantics and batching.

The transition is deterministic; all randomness lives in reset sampling,
driven by the RNG carried inside the world state. A step applies, per agent:
action clamping, one kinematics step, footprint recomputation, fresh
collision flags (pairwise body overlap, and body-boundary crossing against
the agent's current lanelet), reward, then observations. Reset handling runs
last: in ``train_reset_all`` mode any collision re-seeds every agent, in
``test_reset_colliders`` mode only the flagged agents are re-seeded.

Observations in the step output therefore describe the post-step, pre-reset
world; the returned world state (and the per-step pose/deviation/speed info
consumed by logs and metrics) is the end-of-step state with resets applied.

Reward is deliberately simple plumbing (progress minus deviation, collision
and time penalties) with every weight exposed in the config.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .collision import footprint_of, obb_intersect, rect_polyline_collision
from .dynamics import Action, AgentState, VehicleParams, clamp_action, step_kinematics
from .mapdata import ReferencePath, ScenarioMap, load_scenario
from .observation import ObservationConfig, layout_for, observe_all

RESET_MODES = ("train_reset_all", "test_reset_colliders")
FEASIBILITY_FACTOR = 1.2
MAX_RESET_ATTEMPTS = 1000


class FeasibilityError(RuntimeError):
    """Reset sampling could not satisfy the spacing rule (map too crowded)."""


@dataclass(frozen=True)
class RewardWeights:
    progress: float = 10.0
    center_deviation: float = 2.0
    collision_agent: float = 20.0
    collision_lane: float = 20.0
    time: float = 0.01


@dataclass(frozen=True)
class EnvConfig:
    scenario: str = "loop_intersection"
    num_agents: int = 4
    dt: float = 0.05
    obs: ObservationConfig = field(default_factory=ObservationConfig)
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    reward: RewardWeights = field(default_factory=RewardWeights)
    seed: int = 0
    reset_mode: str = "train_reset_all"
    batch_size: int = 1
    discount: float = 0.99  # metadata for trainers; unused by the simulation

    def __post_init__(self) -> None:
        if self.num_agents < 1:
            raise ValueError(f"num_agents must be >= 1, got {self.num_agents}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.reset_mode not in RESET_MODES:
            raise ValueError(f"reset_mode must be one of {RESET_MODES}, got {self.reset_mode!r}")

    def to_json(self) -> str:
        data = asdict(self)
        del data["obs"]["normalization"]
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "EnvConfig":
        data = json.loads(text)
        if "obs" in data:
            data["obs"] = ObservationConfig(**data["obs"])
        if "vehicle" in data:
            vp = dict(data["vehicle"])
            if "v_limits" in vp:
                vp["v_limits"] = tuple(vp["v_limits"])
            data["vehicle"] = VehicleParams(**vp)
        if "reward" in data:
            data["reward"] = RewardWeights(**data["reward"])
        return cls(**data)


@dataclass
class WorldState:
    """Per-agent states plus the step counter and the RNG that owns all
    reset randomness. One world is stepped by one logical thread at a time."""

    states: list[AgentState]
    t: int
    rng: np.random.Generator


@dataclass
class StepOutput:
    """Everything a caller needs per step.

    observations/rewards/flags follow the pre-reset world; center_offsets,
    speeds and the reset flags describe the end-of-step world that the next
    step continues from (which is what trajectory logs record).
    """

    observations: np.ndarray          # (N, obs_len)
    rewards: np.ndarray               # (N,)
    collided_agent: np.ndarray        # (N,) bool
    collided_lane: np.ndarray         # (N,) bool
    was_reset: np.ndarray             # (N,) bool
    t: int
    actions: np.ndarray               # (N, 2) applied [v_cmd, steer_cmd]
    center_offsets: np.ndarray        # (N,) signed d_cl, end of step
    speeds: np.ndarray                # (N,) end of step


def min_spawn_distance(vehicle: VehicleParams) -> float:
    return FEASIBILITY_FACTOR * vehicle.diagonal


def _sample_agent_state(
    rng: np.random.Generator,
    smap: ScenarioMap,
    vehicle: VehicleParams,
    anchors: list[tuple[float, float]],
    scenario_name: str,
) -> AgentState:
    """Rejection-sample a pose on a random path: uniform arc length, zero
    lateral offset, tangent heading, zero speed; spaced >= 1.2 * diagonal
    from every anchor position."""
    min_dist = min_spawn_distance(vehicle)
    paths = smap.reference_paths
    for _ in range(MAX_RESET_ATTEMPTS):
        path = paths[int(rng.integers(len(paths)))]
        s = float(rng.uniform(0.0, path.total_length))
        line = path.stitched_center_line
        pos = line.point_at(s)
        if anchors and any(math.hypot(pos[0] - ax, pos[1] - ay) < min_dist for ax, ay in anchors):
            continue
        tangent = line.tangent_at(s)
        return AgentState(
            x=float(pos[0]),
            y=float(pos[1]),
            yaw=math.atan2(tangent[1], tangent[0]),
            v=0.0,
            path_id=path.id,
            s=s,
        )
    raise FeasibilityError(
        f"scenario {scenario_name!r}: no feasible spawn found in {MAX_RESET_ATTEMPTS} attempts "
        f"(map too crowded for spacing {min_dist:.4f} m)"
    )


def env_reset(
    cfg: EnvConfig,
    smap: ScenarioMap,
    which: list[int] | None = None,
    rng: np.random.Generator | None = None,
    world: WorldState | None = None,
) -> tuple[WorldState, np.ndarray]:
    """Reset all agents (fresh world) or a subset of an existing world.

    Returns the new world plus observations of it. Partial resets keep the
    remaining agents untouched and space every re-seeded agent against all
    others.
    """
    if which is None:
        which = list(range(cfg.num_agents))
    if world is None:
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        states: list[AgentState | None] = [None] * cfg.num_agents
        t = 0
    else:
        rng = world.rng if rng is None else rng
        states = list(world.states)
        t = world.t

    for i in sorted(which):
        anchors = [(s.x, s.y) for j, s in enumerate(states) if j != i and s is not None]
        states[i] = _sample_agent_state(rng, smap, cfg.vehicle, anchors, cfg.scenario)

    new_world = WorldState(states=states, t=t, rng=rng)
    return new_world, observe_all(states, smap, cfg.obs, cfg.vehicle)


def compute_reward(
    delta_progress: float,
    center_offset: float,
    collided_agent: bool,
    collided_lane: bool,
    weights: RewardWeights,
) -> float:
    """Progress reward minus deviation, collision and time penalties."""
    return (
        weights.progress * delta_progress
        - weights.center_deviation * abs(center_offset)
        - weights.collision_agent * float(collided_agent)
        - weights.collision_lane * float(collided_lane)
        - weights.time
    )


def _path_of(smap: ScenarioMap, state: AgentState) -> ReferencePath:
    return smap.path(state.path_id)


def env_step(
    world: WorldState,
    actions: list[Action],
    cfg: EnvConfig,
    smap: ScenarioMap,
) -> tuple[StepOutput, WorldState]:
    n = cfg.num_agents
    if len(actions) != n:
        raise ValueError(f"expected {n} actions, got {len(actions)}")

    clamped = [clamp_action(a, cfg.vehicle) for a in actions]
    moved: list[AgentState] = []
    offsets = np.zeros(n)
    deltas = np.zeros(n)
    for i, (state, action) in enumerate(zip(world.states, clamped)):
        path = _path_of(smap, state)
        new_state = step_kinematics(state, action, cfg.dt, cfg.vehicle, path)
        _, offsets[i], _ = path.stitched_center_line.project((new_state.x, new_state.y))
        deltas[i] = path.progress_delta(state.s, new_state.s)
        moved.append(new_state)

    rects = [footprint_of(s, cfg.vehicle.length, cfg.vehicle.width) for s in moved]
    collided_agent = np.zeros(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if obb_intersect(rects[i], rects[j]):
                collided_agent[i] = collided_agent[j] = True
    collided_lane = np.zeros(n, dtype=bool)
    for i, state in enumerate(moved):
        lanelet = smap.lanelet(_path_of(smap, state).lanelet_id_at(state.s))
        collided_lane[i] = rect_polyline_collision(rects[i], lanelet.left_boundary) or (
            rect_polyline_collision(rects[i], lanelet.right_boundary)
        )

    rewards = np.array(
        [
            compute_reward(deltas[i], offsets[i], collided_agent[i], collided_lane[i], cfg.reward)
            for i in range(n)
        ]
    )
    observations = observe_all(moved, smap, cfg.obs, cfg.vehicle)

    any_collision = bool(collided_agent.any() or collided_lane.any())
    if cfg.reset_mode == "train_reset_all":
        reset_ids = list(range(n)) if any_collision else []
    else:
        reset_ids = [i for i in range(n) if collided_agent[i] or collided_lane[i]]

    final_states = moved
    final_offsets = offsets
    if reset_ids:
        interim = WorldState(states=moved, t=world.t, rng=world.rng)
        reset_world, _ = env_reset(cfg, smap, which=reset_ids, world=interim)
        final_states = reset_world.states
        final_offsets = offsets.copy()
        for i in reset_ids:
            state = final_states[i]
            _, final_offsets[i], _ = _path_of(smap, state).stitched_center_line.project(
                (state.x, state.y)
            )

    was_reset = np.zeros(n, dtype=bool)
    was_reset[reset_ids] = True
    new_world = WorldState(states=final_states, t=world.t + 1, rng=world.rng)
    output = StepOutput(
        observations=observations,
        rewards=rewards,
        collided_agent=collided_agent,
        collided_lane=collided_lane,
        was_reset=was_reset,
        t=new_world.t,
        actions=np.array([[a.v_cmd, a.steer_cmd] for a in clamped]),
        center_offsets=final_offsets,
        speeds=np.array([s.v for s in final_states]),
    )
    return output, new_world


class BatchedEnv:
    """A batch of independent worlds sharing one immutable scenario map.

    Instance e of a batch reset with seed ``k`` is seeded ``k + e``, so a
    batch evolves exactly like that many separate single runs.
    """

    def __init__(self, cfg: EnvConfig, smap: ScenarioMap | None = None):
        self.cfg = cfg
        self.smap = smap if smap is not None else load_scenario(cfg.scenario)
        self.worlds: list[WorldState] | None = None
        self.layout = layout_for(cfg.obs)

    @property
    def num_agents(self) -> int:
        return self.cfg.num_agents

    @property
    def batch_size(self) -> int:
        return self.cfg.batch_size

    def reset(self, seed: int | None = None) -> np.ndarray:
        base = self.cfg.seed if seed is None else seed
        self.worlds = []
        all_obs = []
        for e in range(self.cfg.batch_size):
            world, obs = env_reset(self.cfg, self.smap, rng=np.random.default_rng(base + e))
            self.worlds.append(world)
            all_obs.append(obs)
        return np.stack(all_obs)

    def step(self, actions: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Step every instance; actions shaped (batch, agents, 2).

        Returns (observations, rewards, collision flags, reset flags) with
        leading (batch, agents) dimensions; flags pack [agent-agent,
        agent-lane] on the last axis.
        """
        if self.worlds is None:
            raise RuntimeError("reset() must be called before step()")
        actions = np.asarray(actions, dtype=float)
        expected = (self.cfg.batch_size, self.cfg.num_agents, 2)
        if actions.shape != expected:
            raise ValueError(f"expected action array of shape {expected}, got {actions.shape}")
        obs, rewards, flags, resets = [], [], [], []
        for e in range(self.cfg.batch_size):
            out, self.worlds[e] = env_step(
                self.worlds[e],
                [Action(float(v), float(d)) for v, d in actions[e]],
                self.cfg,
                self.smap,
            )
            obs.append(out.observations)
            rewards.append(out.rewards)
            flags.append(np.stack([out.collided_agent, out.collided_lane], axis=-1))
            resets.append(out.was_reset)
        return (
            np.stack(obs),
            np.stack(rewards),
            np.stack(flags),
            np.stack(resets),
        )

    def poses(self) -> np.ndarray:
        """End-of-step agent states as (batch, agents, 4): x, y, yaw, v."""
        if self.worlds is None:
            raise RuntimeError("reset() must be called before poses()")
        return np.array(
            [[[s.x, s.y, s.yaw, s.v] for s in world.states] for world in self.worlds]
        )
