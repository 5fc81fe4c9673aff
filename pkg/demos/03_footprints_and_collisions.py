"""Oriented rectangle footprints and the collision predicates built on them."""
import math

import numpy as np

from lanesim import (
    AgentState,
    agent_distance,
    min_polygon_distance,
    obb_intersect,
    rect_polyline_collision,
    rectangle_vertices,
)
from lanesim.geometry import Polyline

L, W = 0.16, 0.08

rect = rectangle_vertices((0.0, 0.0, 0.0), L, W)
print("axis-aligned footprint corners (front-left first, counter-clockwise):")
print(np.round(rect, 3))

rect_turned = rectangle_vertices((0.0, 0.0, math.pi / 4), L, W)
print("\nsame body yawed 45 deg:")
print(np.round(rect_turned, 3))

# bring two agents together until their bodies overlap
print("\nclosing head-on, checking overlap and body gap:")
for gap in (0.30, 0.20, 0.17, 0.159):
    other = rectangle_vertices((gap, 0.0, math.pi), L, W)
    hit = obb_intersect(rect, other)
    dist = min_polygon_distance(rect, other)
    print(f"  CG distance {gap:.3f} m -> intersect={hit!s:5}  body gap={dist:.3f} m")

# CG distance vs body gap for a flank approach
a = AgentState(0.0, 0.0, 0.0, 0.0)
b = AgentState(0.15, 0.10, math.pi / 2, 0.0)
print(f"\nflank pair: CG distance {agent_distance(a, b, 'cg'):.3f} m, "
      f"body gap {agent_distance(a, b, 'min_polygon'):.3f} m")

# lane-boundary crossing: the footprint, not the CG, defines the event
boundary = Polyline(np.array([[-1.0, 0.10], [1.0, 0.10]]))
for y in (0.0, 0.05, 0.07):
    rect_near = rectangle_vertices((0.0, y, 0.0), L, W)
    crossing = rect_polyline_collision(rect_near, boundary)
    print(f"CG at y={y:.2f} (boundary at 0.10): body {'crosses' if crossing else 'clear of'} the line")
