"""Baseline controllers: steering law, mirror symmetry, closed-loop tracking."""
import math

import numpy as np
import pytest

from lanesim.dynamics import VehicleParams
from lanesim.env import EnvConfig, env_reset, env_step
from lanesim.maps_builtin import build_ring
from lanesim.observation import ObservationConfig, layout_for
from lanesim.policies import PurePursuitPolicy, RandomPolicy, make_policy

VEHICLE = VehicleParams()
CFG = ObservationConfig(variant="M0")
LAYOUT = layout_for(CFG)


def observation_with(ref_last=(0.3, 0.0), nearest=10.0, neighbor_x=None):
    """Synthetic M0 vector: goal point plus one neighbor at a given distance,
    drawn ahead of the ego unless neighbor_x says otherwise."""
    obs = np.zeros(LAYOUT.total)
    ref = LAYOUT.slice("self_ref_points")
    obs[ref.stop - 2 : ref.stop] = ref_last
    for k in range(CFG.n_sur):
        cx = nearest if neighbor_x is None else neighbor_x
        corners = np.array([[0.08, 0.04], [0.08, -0.04], [-0.08, -0.04], [-0.08, 0.04]])
        obs[LAYOUT.slice(f"neighbor{k}_vertices")] = (corners + [cx, 0.0]).ravel()
        obs[LAYOUT.slice(f"neighbor{k}_distance")] = nearest
    return obs


def test_dead_ahead_gives_zero_steer():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    action = policy.act(observation_with(ref_last=(0.3, 0.0)))
    assert action.steer_cmd == 0.0
    assert action.v_cmd == VEHICLE.v_limits[1]


def test_left_goal_steers_left():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    assert policy.act(observation_with(ref_last=(0.25, 0.1))).steer_cmd > 0.0
    assert policy.act(observation_with(ref_last=(0.25, -0.1))).steer_cmd < 0.0


def test_steer_matches_pursuit_formula():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    gx, gy = 0.22, 0.07
    action = policy.act(observation_with(ref_last=(gx, gy)))
    expected = math.atan(2 * VEHICLE.wheelbase * gy / (gx**2 + gy**2))
    assert action.steer_cmd == pytest.approx(expected, abs=1e-12)


def test_steer_clamped_to_limit():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    action = policy.act(observation_with(ref_last=(0.02, 0.2)))
    assert action.steer_cmd == pytest.approx(VEHICLE.steer_limit, abs=1e-12)


def test_mirror_symmetry():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    rng = np.random.default_rng(40)
    for _ in range(100):
        obs = rng.uniform(-1, 1, LAYOUT.total)
        mirrored = obs.copy()
        for block in LAYOUT.blocks:
            sl = LAYOUT.slice(block.name)
            if block.name.endswith(("_ref_points", "_vertices", "_rel_velocity")):
                mirrored[sl] = obs[sl] * np.tile([1.0, -1.0], block.length // 2)
        # keep neighbor distances positive and matching
        for k in range(CFG.n_sur):
            sl = LAYOUT.slice(f"neighbor{k}_distance")
            obs[sl] = mirrored[sl] = abs(obs[sl])
        a = policy.act(obs)
        b = policy.act(mirrored)
        assert b.steer_cmd == pytest.approx(-a.steer_cmd, abs=1e-12)
        assert b.v_cmd == pytest.approx(a.v_cmd, abs=1e-15)


def test_speed_scales_down_near_neighbor():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    fast = policy.act(observation_with(nearest=0.5))
    assert fast.v_cmd == VEHICLE.v_limits[1]
    mid = policy.act(observation_with(nearest=(0.3 + VEHICLE.diagonal) / 2))
    assert 0.0 < mid.v_cmd < VEHICLE.v_limits[1]
    assert mid.v_cmd == pytest.approx(VEHICLE.v_limits[1] * 0.5, abs=1e-9)
    stopped = policy.act(observation_with(nearest=VEHICLE.diagonal))
    assert stopped.v_cmd == 0.0
    touching = policy.act(observation_with(nearest=0.02, neighbor_x=0.17))
    assert touching.v_cmd == 0.0


def test_side_conflicts_creep_instead_of_freezing():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    obs = observation_with(nearest=VEHICLE.diagonal)
    # move the neighbor to a strongly off-axis forward position
    for k in range(CFG.n_sur):
        sl = LAYOUT.slice(f"neighbor{k}_vertices")
        verts = obs[sl].reshape(4, 2)
        verts[:, 1] += 0.15
        verts[:, 0] -= 0.10
        obs[sl] = verts.ravel()
    action = policy.act(obs)
    assert action.v_cmd == pytest.approx(VEHICLE.v_limits[1] * policy.creep_fraction, abs=1e-12)


def test_no_braking_for_rear_neighbor():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    behind = policy.act(observation_with(nearest=0.2, neighbor_x=-0.2))
    assert behind.v_cmd == VEHICLE.v_limits[1]
    literal = PurePursuitPolicy(CFG, VEHICLE, direction_blind=True)
    assert literal.act(observation_with(nearest=0.2, neighbor_x=-0.2)).v_cmd < VEHICLE.v_limits[1]


def test_degenerate_lookahead_stops():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    action = policy.act(observation_with(ref_last=(0.0, 0.0)))
    assert action.v_cmd == 0.0 and action.steer_cmd == 0.0


def test_wrong_layout_rejected():
    with pytest.raises(ValueError, match="M0"):
        PurePursuitPolicy(ObservationConfig(variant="M1"), VEHICLE)
    policy = PurePursuitPolicy(CFG, VEHICLE)
    with pytest.raises(ValueError, match="length"):
        policy.act(np.zeros(7))


def test_actions_within_limits_before_clamping():
    policy = PurePursuitPolicy(CFG, VEHICLE)
    rng = np.random.default_rng(41)
    for _ in range(200):
        obs = rng.uniform(-2, 2, LAYOUT.total)
        action = policy.act(obs)
        assert abs(action.steer_cmd) <= VEHICLE.steer_limit + 1e-15
        assert VEHICLE.v_limits[0] <= action.v_cmd <= VEHICLE.v_limits[1]


def test_circle_tracking_steady_state():
    """Closed loop on a constant-curvature track: small steady-state offset."""
    smap = build_ring(radius=1.2, center=(1.7, 1.7))
    cfg = EnvConfig(scenario="ring", num_agents=1, reset_mode="test_reset_colliders", seed=2)
    world, obs = env_reset(cfg, smap)
    policy = PurePursuitPolicy(cfg.obs, cfg.vehicle)
    offsets = []
    for _ in range(400):
        out, world = env_step(world, [policy.act(obs[0])], cfg, smap)
        obs = out.observations
        offsets.append(out.center_offsets[0])
    steady = np.abs(np.array(offsets[200:]))
    assert steady.max() < 0.02
    assert world.states[0].v == cfg.vehicle.v_limits[1]


def test_random_policy_seeded_stream():
    rng1 = np.random.default_rng(5)
    rng2 = np.random.default_rng(5)
    p1 = RandomPolicy(VEHICLE, rng1)
    p2 = RandomPolicy(VEHICLE, rng2)
    obs = np.zeros(LAYOUT.total)
    stream1 = [(a.v_cmd, a.steer_cmd) for a in (p1.act(obs) for _ in range(50))]
    stream2 = [(a.v_cmd, a.steer_cmd) for a in (p2.act(obs) for _ in range(50))]
    assert stream1 == stream2


def test_random_policy_within_limits():
    policy = RandomPolicy(VEHICLE, np.random.default_rng(6))
    obs = np.zeros(LAYOUT.total)
    for _ in range(300):
        action = policy.act(obs)
        assert VEHICLE.v_limits[0] <= action.v_cmd <= VEHICLE.v_limits[1]
        assert abs(action.steer_cmd) <= VEHICLE.steer_limit


def test_make_policy_registry():
    assert isinstance(make_policy("pure_pursuit", CFG, VEHICLE, np.random.default_rng(0)), PurePursuitPolicy)
    assert isinstance(make_policy("random", CFG, VEHICLE, np.random.default_rng(0)), RandomPolicy)
    with pytest.raises(KeyError, match="unknown policy"):
        make_policy("autopilot", CFG, VEHICLE, np.random.default_rng(0))
