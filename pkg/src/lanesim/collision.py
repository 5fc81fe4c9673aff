"""Oriented-rectangle footprints and exact 2D intersection predicates.

Footprint vertices are ordered counter-clockwise starting at the front-left
corner. Rectangle-rectangle overlap uses the separating-axis test over the
four unique edge normals; touching configurations count as colliding.
"""
from __future__ import annotations

import math

import numpy as np

from .dynamics import AgentState
from .geometry import Polyline

# body-frame corners: front-left, front-right, rear-right, rear-left
_CORNER_SIGNS = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0]])


def rectangle_vertices(pose, length: float, width: float) -> np.ndarray:
    """World-frame corners (4, 2) of a rectangle centered on the pose CG."""
    if length <= 0.0 or width <= 0.0:
        raise ValueError(f"length and width must be positive, got {length}, {width}")
    x, y, yaw = pose
    c, s = math.cos(yaw), math.sin(yaw)
    corners = _CORNER_SIGNS * (length / 2.0, width / 2.0)
    rot = np.array([[c, -s], [s, c]])
    return corners @ rot.T + (x, y)


def footprint_of(state: AgentState, length: float, width: float) -> np.ndarray:
    return rectangle_vertices((state.x, state.y, state.yaw), length, width)


def obb_overlap_margin(a: np.ndarray, b: np.ndarray) -> float:
    """Smallest interval overlap across the four separating axes.

    Non-negative iff the rectangles intersect (touching gives 0); the
    magnitude measures how far the verdict is from flipping, which the test
    suite uses to skip numerically degenerate tangency cases.
    """
    axes = np.empty((4, 2))
    axes[0] = a[0] - a[3]
    axes[1] = a[0] - a[1]
    axes[2] = b[0] - b[3]
    axes[3] = b[0] - b[1]
    axes /= np.hypot(axes[:, 0], axes[:, 1])[:, None]
    proj_a = axes @ a.T
    proj_b = axes @ b.T
    overlap = np.minimum(proj_a.max(axis=1), proj_b.max(axis=1)) - np.maximum(
        proj_a.min(axis=1), proj_b.min(axis=1)
    )
    return float(overlap.min())


def obb_intersect(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff two rectangle footprints overlap or touch."""
    return obb_overlap_margin(a, b) >= 0.0


def _segments_intersect_any(p0, p1, q0, q1) -> bool:
    """Vectorized inclusive segment-pair intersection over two segment sets.

    p0/p1: (n, 2) endpoints, q0/q1: (m, 2) endpoints. Touching counts.
    """
    p0 = p0[:, None, :]
    p1 = p1[:, None, :]
    q0 = q0[None, :, :]
    q1 = q1[None, :, :]

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (
            b[..., 1] - a[..., 1]
        ) * (c[..., 0] - a[..., 0])

    d1 = orient(q0, q1, p0)
    d2 = orient(q0, q1, p1)
    d3 = orient(p0, p1, q0)
    d4 = orient(p0, p1, q1)
    crossing = (d1 * d2 <= 0.0) & (d3 * d4 <= 0.0)
    collinear = (d1 == 0.0) & (d2 == 0.0) & (d3 == 0.0) & (d4 == 0.0)
    if np.any(collinear & crossing):
        # collinear pairs intersect only if their bounding boxes overlap
        lo_p = np.minimum(p0, p1)
        hi_p = np.maximum(p0, p1)
        lo_q = np.minimum(q0, q1)
        hi_q = np.maximum(q0, q1)
        boxes = np.all((lo_p <= hi_q) & (lo_q <= hi_p), axis=-1)
        crossing = np.where(collinear, boxes, crossing)
    return bool(np.any(crossing))


def points_strictly_inside_rect(points: np.ndarray, rect: np.ndarray) -> np.ndarray:
    """Boolean mask of points strictly interior to a rectangle footprint."""
    center = rect.mean(axis=0)
    half_u = (rect[0] + rect[1]) / 2.0 - center  # half-length along heading
    half_v = (rect[0] + rect[3]) / 2.0 - center  # half-width to the left
    rel = np.atleast_2d(points) - center
    lu = np.hypot(*half_u)
    lv = np.hypot(*half_v)
    pu = rel @ (half_u / lu)
    pv = rel @ (half_v / lv)
    return (np.abs(pu) < lu) & (np.abs(pv) < lv)


def rect_polyline_collision(rect: np.ndarray, boundary: Polyline) -> bool:
    """True iff a rectangle edge crosses the polyline or a polyline vertex
    lies strictly inside the rectangle."""
    edges_p0 = rect
    edges_p1 = np.roll(rect, -1, axis=0)
    if _segments_intersect_any(edges_p0, edges_p1, boundary.points[:-1], boundary.points[1:]):
        return True
    return bool(np.any(points_strictly_inside_rect(boundary.points, rect)))


def _points_to_segments_min(points: np.ndarray, seg0: np.ndarray, seg1: np.ndarray) -> float:
    vec = seg1 - seg0
    seg_len2 = np.einsum("ij,ij->i", vec, vec)
    rel = points[:, None, :] - seg0[None, :, :]
    t = np.clip(np.einsum("pse,se->ps", rel, vec) / seg_len2, 0.0, 1.0)
    foot = seg0[None, :, :] + t[..., None] * vec[None, :, :]
    d = points[:, None, :] - foot
    return float(np.sqrt(np.einsum("pse,pse->ps", d, d).min()))


def min_polygon_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Minimum distance between two rectangle footprints; 0 when intersecting."""
    if obb_intersect(a, b):
        return 0.0
    a1 = np.roll(a, -1, axis=0)
    b1 = np.roll(b, -1, axis=0)
    return min(
        _points_to_segments_min(a, b, b1),
        _points_to_segments_min(b, a, a1),
    )


def footprint_polyline_distance(rect: np.ndarray, boundary: Polyline) -> float:
    """Minimum distance from a rectangle footprint to a polyline; 0 if crossing."""
    if rect_polyline_collision(rect, boundary):
        return 0.0
    rect1 = np.roll(rect, -1, axis=0)
    return min(
        _points_to_segments_min(rect, boundary.points[:-1], boundary.points[1:]),
        _points_to_segments_min(boundary.points, rect, rect1),
    )


def agent_distance(a: AgentState, b: AgentState, mode: str = "cg", length: float = 0.16, width: float = 0.08) -> float:
    """Distance between two agents: CG-to-CG or minimum body-to-body gap."""
    if mode == "cg":
        return math.hypot(a.x - b.x, a.y - b.y)
    if mode == "min_polygon":
        return min_polygon_distance(footprint_of(a, length, width), footprint_of(b, length, width))
    raise ValueError(f"unknown distance mode {mode!r}; expected 'cg' or 'min_polygon'")
