"""Stdio binding endpoint exposing the batched environment to other runtimes.

Binding API v1. The host process exchanges framed messages on stdin/stdout:

    frame := u32be header_length, header JSON (UTF-8),
             u64be payload_length, payload bytes

Payloads are raw little-endian float64 arrays in C order, never re-encoded
through text, so every value crossing the boundary is bit-identical to the
in-process value. Operations:

    {"op": "init", "config": {...EnvConfig fields...}}
        -> {"ok": true, "api_version": 1, "layout": {...},
            "num_agents": N, "batch_size": E, "obs_len": L}
    {"op": "reset", "seed": k}
        -> {"ok": true, "shape": [E, N, L]} + obs payload
    {"op": "step"} + actions payload of shape (E, N, 2)
        -> {"ok": true} + payload [obs | rewards | flags | resets]
           with flags packing [agent-agent, agent-lane] as 0.0/1.0
    {"op": "state"}
        -> {"ok": true, "shape": [E, N, 4]} + payload of x, y, yaw, v
    {"op": "close"}
        -> {"ok": true}, then the process exits

Failures answer {"ok": false, "error": "..."} and keep the session alive.
Run with ``python -m lanesim.bindserver``.
"""
from __future__ import annotations

import json
import struct
import sys

import numpy as np

from .env import BatchedEnv, EnvConfig
from .observation import layout_for

API_VERSION = 1


def _read_exact(stream, n: int) -> bytes | None:
    data = stream.read(n)
    if data is None or len(data) == 0:
        return None
    while len(data) < n:
        chunk = stream.read(n - len(data))
        if not chunk:
            raise EOFError(f"stream closed mid-frame ({len(data)}/{n} bytes)")
        data += chunk
    return data


def read_frame(stream) -> tuple[dict, bytes] | None:
    head = _read_exact(stream, 4)
    if head is None:
        return None
    (header_len,) = struct.unpack(">I", head)
    header = json.loads(_read_exact(stream, header_len).decode("utf-8"))
    (payload_len,) = struct.unpack(">Q", _read_exact(stream, 8))
    payload = _read_exact(stream, payload_len) if payload_len else b""
    return header, payload or b""


def write_frame(stream, header: dict, payload: bytes = b"") -> None:
    raw = json.dumps(header).encode("utf-8")
    stream.write(struct.pack(">I", len(raw)))
    stream.write(raw)
    stream.write(struct.pack(">Q", len(payload)))
    stream.write(payload)
    stream.flush()


def _to_bytes(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<f8").tobytes()


class BindingSession:
    def __init__(self) -> None:
        self.env: BatchedEnv | None = None

    def handle(self, header: dict, payload: bytes) -> tuple[dict, bytes, bool]:
        op = header.get("op")
        if op not in ("init", "close", "reset", "step", "state"):
            raise ValueError(f"unknown op {op!r}")
        if op == "init":
            cfg = EnvConfig.from_json(json.dumps(header.get("config", {})))
            self.env = BatchedEnv(cfg)
            layout = layout_for(cfg.obs)
            return (
                {
                    "ok": True,
                    "api_version": API_VERSION,
                    "layout": layout.to_json(),
                    "num_agents": cfg.num_agents,
                    "batch_size": cfg.batch_size,
                    "obs_len": layout.total,
                },
                b"",
                False,
            )
        if op == "close":
            return {"ok": True}, b"", True
        if self.env is None:
            raise RuntimeError("no environment: send an 'init' request first")
        if op == "reset":
            obs = self.env.reset(seed=header.get("seed"))
            return {"ok": True, "shape": list(obs.shape)}, _to_bytes(obs), False
        if op == "step":
            e, n = self.env.batch_size, self.env.num_agents
            expected = e * n * 2 * 8
            if len(payload) != expected:
                raise ValueError(
                    f"action payload must be {expected} bytes for shape ({e}, {n}, 2), got {len(payload)}"
                )
            actions = np.frombuffer(payload, dtype="<f8").reshape(e, n, 2)
            obs, rewards, flags, resets = self.env.step(actions)
            blob = b"".join(
                _to_bytes(a) for a in (obs, rewards, flags.astype(float), resets.astype(float))
            )
            return {"ok": True, "obs_shape": list(obs.shape)}, blob, False
        poses = self.env.poses()
        return {"ok": True, "shape": list(poses.shape)}, _to_bytes(poses), False


def serve(stdin=None, stdout=None) -> None:
    stdin = stdin if stdin is not None else sys.stdin.buffer
    stdout = stdout if stdout is not None else sys.stdout.buffer
    session = BindingSession()
    while True:
        frame = read_frame(stdin)
        if frame is None:
            return
        header, payload = frame
        try:
            response, blob, should_close = session.handle(header, payload)
        except Exception as exc:
            write_frame(stdout, {"ok": False, "error": str(exc)})
            continue
        write_frame(stdout, response, blob)
        if should_close:
            return


if __name__ == "__main__":
    serve()
