"""Kinematic single-track vehicle model and action saturation.

State advances by explicit Euler at the configured sample time. The speed
command takes effect instantaneously (speed is a direct control input, not a
tracked setpoint), so commanding zero speed freezes the pose exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import wrap_angle

DEFAULT_BODY_LENGTH = 0.16
DEFAULT_BODY_WIDTH = 0.08


@dataclass(frozen=True)
class VehicleParams:
    """Body geometry and actuation limits shared by all agents."""

    length: float = DEFAULT_BODY_LENGTH
    width: float = DEFAULT_BODY_WIDTH
    wheelbase: float = DEFAULT_BODY_LENGTH
    rear_axle_to_cg: float = DEFAULT_BODY_LENGTH / 2.0
    v_limits: tuple[float, float] = (-0.8, 0.8)
    steer_limit: float = math.radians(35.0)

    def __post_init__(self) -> None:
        if not 0.0 < self.rear_axle_to_cg < self.wheelbase <= self.length:
            raise ValueError(
                "vehicle geometry must satisfy 0 < rear_axle_to_cg < wheelbase <= length, "
                f"got rear_axle_to_cg={self.rear_axle_to_cg}, wheelbase={self.wheelbase}, "
                f"length={self.length}"
            )
        if not self.v_limits[0] < self.v_limits[1]:
            raise ValueError(f"v_limits must be an increasing pair, got {self.v_limits}")
        if self.steer_limit <= 0.0:
            raise ValueError(f"steer_limit must be positive, got {self.steer_limit}")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.length, self.width)


@dataclass(frozen=True)
class Action:
    """Commanded speed [m/s] and steering angle [rad], left-positive."""

    v_cmd: float
    steer_cmd: float


@dataclass
class AgentState:
    """Pose, speed and route progress of one agent.

    yaw is kept wrapped to (-pi, pi]; s is the arc-length progress of the CG
    projection onto the assigned reference path.
    """

    x: float
    y: float
    yaw: float
    v: float
    path_id: int | None = None
    s: float = 0.0


def clamp_action(action: Action, params: VehicleParams) -> Action:
    """Saturate commands to the vehicle limits; reject non-finite input."""
    if not math.isfinite(action.v_cmd):
        raise ValueError(f"action field v_cmd is not finite: {action.v_cmd}")
    if not math.isfinite(action.steer_cmd):
        raise ValueError(f"action field steer_cmd is not finite: {action.steer_cmd}")
    lo, hi = params.v_limits
    return Action(
        v_cmd=min(max(action.v_cmd, lo), hi),
        steer_cmd=min(max(action.steer_cmd, -params.steer_limit), params.steer_limit),
    )


def side_slip_angle(steer: float, params: VehicleParams) -> float:
    """Angle between the CG velocity and the body axis for a given steer angle."""
    return math.atan(params.rear_axle_to_cg / params.wheelbase * math.tan(steer))


def step_kinematics(state: AgentState, action: Action, dt: float, params: VehicleParams, path=None) -> AgentState:
    """One explicit-Euler step of the single-track model.

    Expects an already clamped action. When a reference path is given, the
    progress s is refreshed by re-projecting the new CG position onto it.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    v = action.v_cmd
    beta = side_slip_angle(action.steer_cmd, params)
    x = state.x + v * math.cos(state.yaw + beta) * dt
    y = state.y + v * math.sin(state.yaw + beta) * dt
    yaw = wrap_angle(
        state.yaw + v * math.cos(beta) * math.tan(action.steer_cmd) / params.wheelbase * dt
    )
    s = state.s
    if path is not None:
        s, _, _ = path.stitched_center_line.project((x, y))
    return replace(state, x=x, y=y, yaw=yaw, v=v, s=s)


def turn_radius(steer: float, speed: float, params: VehicleParams) -> float:
    """CG circle radius under constant steer and speed (sign of the yaw rate)."""
    beta = side_slip_angle(steer, params)
    yaw_rate = speed * math.cos(beta) * math.tan(steer) / params.wheelbase
    if yaw_rate == 0.0:
        return math.inf
    return speed / yaw_rate
