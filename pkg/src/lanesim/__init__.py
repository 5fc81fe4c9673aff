"""lanesim: deterministic multi-agent lane-driving simulation and benchmarking.

A numpy library for simulating rectangular agents on lanelet maps with a
kinematic single-track model, building structured per-agent observations in
six documented layout variants, and scoring policies with collision,
deviation and speed metrics combined into a composite benchmark score.
"""
from .collision import (
    agent_distance,
    footprint_of,
    min_polygon_distance,
    obb_intersect,
    rect_polyline_collision,
    rectangle_vertices,
)
from .dynamics import Action, AgentState, VehicleParams, clamp_action, step_kinematics
from .env import (
    BatchedEnv,
    EnvConfig,
    FeasibilityError,
    RewardWeights,
    StepOutput,
    WorldState,
    compute_reward,
    env_reset,
    env_step,
    min_spawn_distance,
)
from .geometry import Polyline, ego_frame, wrap_angle
from .harness import Campaign, replay_command, run_evaluation, score_command
from .logio import TrajectoryLogWriter, make_meta, read_log
from .mapdata import (
    Lanelet,
    MapInvariantError,
    MapSchemaError,
    ReferencePath,
    ScenarioMap,
    load_scenario,
    save_scenario,
    transform_scenario,
)
from .metrics import (
    DegenerateWeightError,
    MetricsAccumulator,
    MetricsRecord,
    MetricsRow,
    ScoreTable,
    composite_scores,
    finalize,
    read_metrics_csv,
    write_metrics_csv,
)
from .observation import (
    ObservationConfig,
    ObservationLayout,
    build_observation,
    layout_for,
    observation_size,
    observe_all,
    select_neighbors,
)
from .policies import PurePursuitPolicy, RandomPolicy, make_policy

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
