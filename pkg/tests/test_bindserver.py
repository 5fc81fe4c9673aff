"""Binding endpoint: framing, shapes, lifecycle, in-process equivalence."""
import io
import json
import struct
import subprocess
import sys

import numpy as np
import pytest

from lanesim.bindserver import read_frame, write_frame
from lanesim.env import BatchedEnv, EnvConfig


class ServerProc:
    """Talks the framed protocol to a live server subprocess."""

    def __init__(self):
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "lanesim.bindserver"],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
        )

    def call(self, header: dict, payload: bytes = b"") -> tuple[dict, bytes]:
        write_frame(self.proc.stdin, header, payload)
        frame = read_frame(self.proc.stdout)
        assert frame is not None, "server closed the stream unexpectedly"
        return frame

    def close(self):
        if self.proc.poll() is None:
            try:
                self.call({"op": "close"})
            except Exception:
                pass
        self.proc.wait(timeout=10)


@pytest.fixture()
def server():
    s = ServerProc()
    yield s
    s.close()


def floats(payload: bytes) -> np.ndarray:
    return np.frombuffer(payload, dtype="<f8")


def test_init_reports_layout_and_sizes(server):
    header, _ = server.call({"op": "init", "config": {"num_agents": 4, "batch_size": 1}})
    assert header["ok"] and header["api_version"] == 1
    assert header["num_agents"] == 4 and header["batch_size"] == 1
    assert header["obs_len"] == 32
    names = [b["name"] for b in header["layout"]["blocks"]]
    assert "self_ref_points" in names


def test_reset_shape_contract(server):
    server.call({"op": "init", "config": {"num_agents": 4, "batch_size": 1}})
    header, payload = server.call({"op": "reset", "seed": 0})
    assert header["shape"] == [1, 4, 32]
    assert len(payload) == 1 * 4 * 32 * 8


def test_step_values_match_in_process_env(server):
    cfg_dict = {"num_agents": 3, "batch_size": 2, "seed": 14, "reset_mode": "test_reset_colliders"}
    server.call({"op": "init", "config": cfg_dict})
    _, reset_payload = server.call({"op": "reset", "seed": 14})

    env = BatchedEnv(EnvConfig.from_json(json.dumps(cfg_dict)))
    obs_native = env.reset(seed=14)
    assert floats(reset_payload).tobytes() == obs_native.tobytes()

    rng = np.random.default_rng(3)
    for _ in range(20):
        actions = rng.uniform(-0.8, 0.8, size=(2, 3, 2))
        header, payload = server.call({"op": "step"}, actions.astype("<f8").tobytes())
        assert header["ok"]
        obs, rewards, flags, resets = env.step(actions)
        expected = b"".join(
            a.astype("<f8").tobytes() for a in (obs, rewards, flags.astype(float), resets.astype(float))
        )
        assert payload == expected

    header, payload = server.call({"op": "state"})
    assert header["shape"] == [2, 3, 4]
    assert payload == env.poses().astype("<f8").tobytes()


def test_zero_actions_give_time_penalty_rewards(server):
    server.call({"op": "init", "config": {"num_agents": 4, "batch_size": 1}})
    server.call({"op": "reset", "seed": 5})
    header, payload = server.call({"op": "step"}, np.zeros((1, 4, 2)).tobytes())
    obs_len = 1 * 4 * 32
    rewards = floats(payload)[obs_len : obs_len + 4]
    np.testing.assert_allclose(rewards, -0.01, atol=1e-12)


def test_shape_mismatch_names_expectation(server):
    server.call({"op": "init", "config": {"num_agents": 4, "batch_size": 1}})
    server.call({"op": "reset", "seed": 0})
    header, _ = server.call({"op": "step"}, np.zeros((1, 3, 2)).tobytes())
    assert not header["ok"]
    assert "(1, 4, 2)" in header["error"]


def test_step_before_init_fails_cleanly(server):
    header, _ = server.call({"op": "reset", "seed": 0})
    assert not header["ok"]
    assert "init" in header["error"]


def test_unknown_op_reported(server):
    header, _ = server.call({"op": "teleport"})
    assert not header["ok"]
    assert "teleport" in header["error"]


def test_close_ends_process(server):
    server.call({"op": "init", "config": {"num_agents": 2, "batch_size": 1}})
    header, _ = server.call({"op": "close"})
    assert header["ok"]
    server.proc.wait(timeout=10)
    assert server.proc.returncode == 0


def test_frame_round_trip_in_memory():
    buf = io.BytesIO()
    write_frame(buf, {"op": "x", "n": 3}, b"\x01\x02")
    buf.seek(0)
    header, payload = read_frame(buf)
    assert header == {"op": "x", "n": 3}
    assert payload == b"\x01\x02"
    assert read_frame(buf) is None  # clean EOF


def test_truncated_frame_raises():
    buf = io.BytesIO(struct.pack(">I", 100) + b"short")
    with pytest.raises(EOFError):
        read_frame(buf)
