"""Polyline primitives and arc-length geometry queries.

All coordinates are meters in a right-handed x/y plane. A polyline stores its
points together with cumulative arc length, so projection, interpolation and
look-ahead sampling are plain vectorized numpy operations over its segments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MIN_POINT_GAP = 1e-9


class PolylineError(ValueError):
    """Polyline data violates a structural requirement."""


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def wrap_angle(angle: float) -> float:
    """Wrap an angle to the half-open interval (-pi, pi].

    In-range angles pass through bit-identically, so zero-increment updates
    leave a state exactly unchanged.
    """
    if -math.pi < angle <= math.pi:
        return angle
    wrapped = (angle + math.pi) % (2.0 * math.pi) - math.pi
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass
class Polyline:
    """An ordered 2D point chain with precomputed segment geometry.

    Invariants: at least two points, no coincident consecutive points
    (gap > 1e-9 m), cumulative arc length strictly increasing from 0.
    """

    points: np.ndarray
    cumulative_arclength: np.ndarray = field(init=False, repr=False)
    _seg_vec: np.ndarray = field(init=False, repr=False)
    _seg_len: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise PolylineError(f"expected an (n, 2) point array, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise PolylineError(f"polyline needs at least 2 points, got {pts.shape[0]}")
        seg_vec = np.diff(pts, axis=0)
        seg_len = np.hypot(seg_vec[:, 0], seg_vec[:, 1])
        if np.any(seg_len <= MIN_POINT_GAP):
            idx = int(np.argmax(seg_len <= MIN_POINT_GAP))
            raise PolylineError(f"coincident consecutive points at index {idx}")
        self.points = pts
        self._seg_vec = seg_vec
        self._seg_len = seg_len
        self.cumulative_arclength = np.concatenate(([0.0], np.cumsum(seg_len)))

    @property
    def total_length(self) -> float:
        return float(self.cumulative_arclength[-1])

    @property
    def num_segments(self) -> int:
        return len(self._seg_len)

    def project(self, point) -> tuple[float, float, int]:
        """Project a point onto the globally nearest segment.

        Returns (arc_length, signed_offset, segment_index). The offset is
        positive when the point lies left of the local travel direction and
        its magnitude always equals the true point-to-polyline distance.
        Distance ties resolve to the smaller segment index.
        """
        p = np.asarray(point, dtype=float)
        rel = p - self.points[:-1]
        t = np.einsum("ij,ij->i", rel, self._seg_vec) / (self._seg_len**2)
        t = np.clip(t, 0.0, 1.0)
        foot = self.points[:-1] + t[:, None] * self._seg_vec
        delta = p - foot
        dist2 = np.einsum("ij,ij->i", delta, delta)
        i = int(np.argmin(dist2))
        s = float(self.cumulative_arclength[i] + t[i] * self._seg_len[i])
        cross = self._seg_vec[i, 0] * delta[i, 1] - self._seg_vec[i, 1] * delta[i, 0]
        offset = math.sqrt(dist2[i]) if cross >= 0.0 else -math.sqrt(dist2[i])
        return s, offset, i

    def distance_to(self, point) -> float:
        """Unsigned Euclidean distance from a point to the polyline."""
        _, offset, _ = self.project(point)
        return abs(offset)

    def point_at(self, s) -> np.ndarray:
        """Interpolate position(s) at arc length(s); clamped to [0, total]."""
        ss = np.clip(np.atleast_1d(np.asarray(s, dtype=float)), 0.0, self.total_length)
        idx = np.clip(
            np.searchsorted(self.cumulative_arclength, ss, side="right") - 1,
            0,
            self.num_segments - 1,
        )
        t = (ss - self.cumulative_arclength[idx]) / self._seg_len[idx]
        out = self.points[idx] + t[:, None] * self._seg_vec[idx]
        return out[0] if np.isscalar(s) or np.ndim(s) == 0 else out

    def tangent_at(self, s: float) -> np.ndarray:
        """Unit tangent of the segment containing arc length s."""
        sc = min(max(float(s), 0.0), self.total_length)
        i = min(
            max(int(np.searchsorted(self.cumulative_arclength, sc, side="right")) - 1, 0),
            self.num_segments - 1,
        )
        return self._seg_vec[i] / self._seg_len[i]

    def sample_ahead(self, s: float, count: int, spacing: float, wrap: bool) -> np.ndarray:
        """Points at arc lengths s + k*spacing for k = 1..count.

        Loop polylines wrap modulo total length; open ones saturate at the
        end point.
        """
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        if spacing <= 0.0:
            raise ValueError(f"spacing must be positive, got {spacing}")
        stations = s + spacing * np.arange(1, count + 1)
        if wrap:
            stations = np.mod(stations, self.total_length)
        return self.point_at(stations)

    def transformed(self, rotation: float, translation) -> "Polyline":
        """A copy rotated about the origin then translated (proper rigid motion)."""
        r = rotation_matrix(rotation)
        return Polyline(self.points @ r.T + np.asarray(translation, dtype=float))


def ego_frame(ego_pose, values, kind: str = "point") -> np.ndarray:
    """Express points or free vectors in the body frame of a pose (x, y, yaw).

    Points are translated to the pose origin then rotated by -yaw; free
    vectors are only rotated. Accepts a single (2,) value or an (n, 2) batch.
    """
    x, y, yaw = ego_pose
    v = np.asarray(values, dtype=float)
    single = v.ndim == 1
    v = np.atleast_2d(v)
    if kind == "point":
        v = v - np.array([x, y])
    elif kind != "vector":
        raise ValueError(f"kind must be 'point' or 'vector', got {kind!r}")
    out = v @ rotation_matrix(-yaw).T
    return out[0] if single else out
