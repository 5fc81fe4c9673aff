"""Scripted baseline controllers operating purely on observation vectors.

These exist so the full environment -> metrics pipeline runs without any
learned model. The pure-pursuit controller reads only its observation (not
privileged state), which doubles as a check that the full observation layout
carries everything lane following needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Action, VehicleParams
from .observation import ObservationConfig, ObservationLayout, layout_for


@dataclass(frozen=True)
class PolicyDescriptor:
    name: str
    required_variant: str


class PurePursuitPolicy:
    """Steer toward the last short-term reference point; ease off the speed
    command linearly once a conflicting neighbor is closer than slow_radius,
    reaching zero at contact_distance (default: the body diagonal, i.e. the
    bounding-circle contact distance).

    Which neighbors count as conflicting is direction-aware (read from the
    observed footprint vertices, so the controller still consumes only its
    observation):

      - behind the ego: ignored. Braking for followers locks leader/follower
        pairs into permanent reduced-speed convoys (equal commands freeze
        the gap).
      - directly ahead (within follow_cone): the full linear law, including
        a complete stop, which covers following, merging and head-on cases.
      - ahead but off-axis: the linear law with a creep floor. Crossing and
        merging stalemates otherwise freeze both agents at the contact
        radius forever; creeping lets the conflict geometry de-symmetrize
        so one agent clears first.

    Both refinements are even in the lateral coordinate, preserving mirror
    symmetry. ``direction_blind=True`` restores the plain nearest-neighbor
    distance rule with none of the above.
    """

    descriptor = PolicyDescriptor(name="pure_pursuit", required_variant="M0")

    def __init__(
        self,
        cfg: ObservationConfig,
        vehicle: VehicleParams,
        slow_radius: float = 0.3,
        contact_distance: float | None = None,
        follow_cone: float = math.radians(30.0),
        creep_fraction: float = 0.08,
        direction_blind: bool = False,
    ):
        if cfg.variant != self.descriptor.required_variant:
            raise ValueError(
                f"pure pursuit needs the {self.descriptor.required_variant} layout, got {cfg.variant}"
            )
        self.layout: ObservationLayout = layout_for(cfg)
        self.vehicle = vehicle
        self.slow_radius = slow_radius
        self.contact_distance = (
            vehicle.diagonal if contact_distance is None else contact_distance
        )
        self.follow_cone = follow_cone
        self.creep_fraction = creep_fraction
        self.direction_blind = direction_blind
        self._ref_slice = self.layout.slice("self_ref_points")
        self._neighbor_slices = []
        for k in range(cfg.n_sur):
            self._neighbor_slices.append(
                (self.layout.slice(f"neighbor{k}_vertices"), self.layout.slice(f"neighbor{k}_distance"))
            )

    def _linear_scale(self, distance: float) -> float:
        if distance >= self.slow_radius:
            return 1.0
        span = self.slow_radius - self.contact_distance
        return min(max((distance - self.contact_distance) / span, 0.0), 1.0)

    def _speed_scale(self, obs: np.ndarray) -> float:
        if self.direction_blind:
            if not self._neighbor_slices:
                return 1.0
            return self._linear_scale(float(obs[self._neighbor_slices[0][1]][0]))
        scale = 1.0
        for vert_slice, dist_slice in self._neighbor_slices:
            center = obs[vert_slice].reshape(4, 2).mean(axis=0)
            if center[0] <= 0.0:
                continue
            bearing = math.atan2(abs(center[1]), center[0])
            s = self._linear_scale(float(obs[dist_slice][0]))
            if bearing > self.follow_cone:
                s = max(s, self.creep_fraction)
            scale = min(scale, s)
        return scale

    def act(self, obs: np.ndarray, rng=None) -> Action:
        obs = np.asarray(obs, dtype=float)
        if obs.shape != (self.layout.total,):
            raise ValueError(
                f"expected observation of length {self.layout.total}, got shape {obs.shape}"
            )
        gx, gy = obs[self._ref_slice][-2:]
        dist2 = gx * gx + gy * gy
        if dist2 < 1e-12:
            return Action(v_cmd=0.0, steer_cmd=0.0)
        steer = math.atan(2.0 * self.vehicle.wheelbase * gy / dist2)
        steer = min(max(steer, -self.vehicle.steer_limit), self.vehicle.steer_limit)
        v_cmd = self.vehicle.v_limits[1] * self._speed_scale(obs)
        return Action(v_cmd=v_cmd, steer_cmd=steer)


class RandomPolicy:
    """Uniform actions inside the actuation limits; deterministic per seed."""

    descriptor = PolicyDescriptor(name="random", required_variant="any")

    def __init__(self, vehicle: VehicleParams, rng: np.random.Generator):
        self.vehicle = vehicle
        self.rng = rng

    def act(self, obs: np.ndarray, rng=None) -> Action:
        r = rng if rng is not None else self.rng
        lo, hi = self.vehicle.v_limits
        return Action(
            v_cmd=float(r.uniform(lo, hi)),
            steer_cmd=float(r.uniform(-self.vehicle.steer_limit, self.vehicle.steer_limit)),
        )


POLICY_NAMES = ("pure_pursuit", "random")


def make_policy(name: str, cfg: ObservationConfig, vehicle: VehicleParams, rng: np.random.Generator):
    if name == "pure_pursuit":
        return PurePursuitPolicy(cfg, vehicle)
    if name == "random":
        return RandomPolicy(vehicle, rng)
    raise KeyError(f"unknown policy {name!r}; available: {POLICY_NAMES}")
