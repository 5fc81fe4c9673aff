"""Procedural builders for the shipped desk-scale scenarios.

Lanes are 0.30 m wide (half-width 0.15 m) on a table-sized workspace, sized
for 0.16 m x 0.08 m agents. Every route is a closed loop so agents can drive
indefinitely. Straight lanelets carry exactly parallel boundaries; arc
lanelets carry concentric boundary arcs, which keeps boundary offsets exact
instead of relying on discrete normal estimation.

Run ``python -m lanesim.maps_builtin <output-dir>`` to regenerate the JSON
files shipped as package data.
"""
from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

from .geometry import Polyline
from .mapdata import (
    Lanelet,
    ReferencePath,
    ScenarioMap,
    save_scenario,
    stitch_center_line,
)

HALF_WIDTH = 0.15
STRAIGHT_STEP = 0.10
ARC_STEP = 0.05


def straight_lanelet(lanelet_id: int, p0, p1, half_width: float = HALF_WIDTH) -> Lanelet:
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    length = float(np.hypot(*(p1 - p0)))
    n = max(2, int(math.ceil(length / STRAIGHT_STEP)) + 1)
    t = np.linspace(0.0, 1.0, n)[:, None]
    center = p0 + t * (p1 - p0)
    direction = (p1 - p0) / length
    left_n = np.array([-direction[1], direction[0]])
    return Lanelet(
        id=lanelet_id,
        center_line=Polyline(center),
        left_boundary=Polyline(center + half_width * left_n),
        right_boundary=Polyline(center - half_width * left_n),
        successors=[],
    )


def arc_lanelet(
    lanelet_id: int,
    center,
    radius: float,
    angle_from: float,
    angle_to: float,
    half_width: float = HALF_WIDTH,
) -> Lanelet:
    """Circular-arc lanelet; increasing angle sweeps counter-clockwise.

    For CCW travel the circle center lies to the left, so the left boundary
    is the inner concentric arc; CW travel mirrors this.
    """
    c = np.asarray(center, dtype=float)
    sweep = angle_to - angle_from
    n = max(2, int(math.ceil(abs(sweep) * radius / ARC_STEP)) + 1)
    angles = np.linspace(angle_from, angle_to, n)
    unit = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    ccw = sweep > 0
    left_r = radius - half_width if ccw else radius + half_width
    right_r = radius + half_width if ccw else radius - half_width
    return Lanelet(
        id=lanelet_id,
        center_line=Polyline(c + radius * unit),
        left_boundary=Polyline(c + left_r * unit),
        right_boundary=Polyline(c + right_r * unit),
        successors=[],
    )


def _assemble(name: str, lanelets: list[Lanelet], successors: dict[int, list[int]], routes: dict[int, tuple[list[int], bool]]) -> ScenarioMap:
    by_id = {l.id: l for l in lanelets}
    for lanelet_id, succ in successors.items():
        by_id[lanelet_id].successors = list(succ)
    paths = []
    for path_id, (sequence, loop) in routes.items():
        stitched, offsets = stitch_center_line([by_id[i] for i in sequence], loop, f"{name}: path {path_id}")
        paths.append(
            ReferencePath(
                id=path_id,
                lanelet_sequence=sequence,
                stitched_center_line=stitched,
                is_loop=loop,
                lanelet_offsets=offsets,
            )
        )
    pts = np.concatenate(
        [line.points for l in lanelets for line in (l.center_line, l.left_boundary, l.right_boundary)]
    )
    margin = 0.1
    bounds = np.array(
        [pts[:, 0].min() - margin, pts[:, 1].min() - margin, pts[:, 0].max() + margin, pts[:, 1].max() + margin]
    )
    return ScenarioMap(name=name, lanelets=lanelets, reference_paths=paths, bounds=bounds)


def build_loop_intersection() -> ScenarioMap:
    """Rectangular one-way ring with two interior streets crossing at a
    4-way intersection. Every junction movement is a radius-0.4 arc, so all
    routes are tangent-continuous."""
    r = 0.4  # corner and turn radius
    lanelets = [
        # outer ring, counter-clockwise
        straight_lanelet(1, (0.9, 0.5), (1.6, 0.5)),
        straight_lanelet(2, (1.6, 0.5), (2.0, 0.5)),
        straight_lanelet(3, (2.0, 0.5), (3.1, 0.5)),
        arc_lanelet(4, (3.1, 0.9), r, -math.pi / 2, 0.0),          # SE corner
        straight_lanelet(5, (3.5, 0.9), (3.5, 1.5)),
        straight_lanelet(6, (3.5, 1.5), (3.5, 1.9)),
        straight_lanelet(7, (3.5, 1.9), (3.5, 2.1)),
        arc_lanelet(8, (3.1, 2.1), r, 0.0, math.pi / 2),           # NE corner
        straight_lanelet(9, (3.1, 2.5), (2.0, 2.5)),
        straight_lanelet(10, (2.0, 2.5), (1.6, 2.5)),
        straight_lanelet(11, (1.6, 2.5), (0.9, 2.5)),
        arc_lanelet(12, (0.9, 2.1), r, math.pi / 2, math.pi),      # NW corner
        straight_lanelet(13, (0.5, 2.1), (0.5, 1.9)),
        straight_lanelet(14, (0.5, 1.9), (0.5, 1.5)),
        straight_lanelet(15, (0.5, 1.5), (0.5, 0.9)),
        arc_lanelet(16, (0.9, 0.9), r, math.pi, 3 * math.pi / 2),  # SW corner
        # northbound interior street, entered and exited by left turns
        arc_lanelet(17, (1.6, 0.9), r, -math.pi / 2, 0.0),         # bottom -> north
        straight_lanelet(18, (2.0, 0.9), (2.0, 1.1)),
        straight_lanelet(19, (2.0, 1.1), (2.0, 1.9)),              # through the crossing
        straight_lanelet(20, (2.0, 1.9), (2.0, 2.1)),
        arc_lanelet(21, (1.6, 2.1), r, 0.0, math.pi / 2),          # north -> top (westbound)
        # eastbound interior street
        arc_lanelet(22, (0.9, 1.9), r, math.pi, 3 * math.pi / 2),  # left edge -> east
        straight_lanelet(23, (0.9, 1.5), (1.6, 1.5)),
        straight_lanelet(24, (1.6, 1.5), (2.4, 1.5)),              # through the crossing
        straight_lanelet(25, (2.4, 1.5), (3.1, 1.5)),
        arc_lanelet(26, (3.1, 1.9), r, -math.pi / 2, 0.0),         # east -> right edge (north)
        # turning movements inside the crossing
        arc_lanelet(27, (2.4, 1.1), r, math.pi, math.pi / 2),      # north -> east (right turn)
        arc_lanelet(28, (1.6, 1.9), r, -math.pi / 2, 0.0),         # east -> north (left turn)
    ]
    successors = {
        1: [2, 17], 2: [3], 3: [4], 4: [5], 5: [6], 6: [7], 7: [8],
        8: [9], 9: [10], 10: [11], 11: [12], 12: [13], 13: [14, 22],
        14: [15], 15: [16], 16: [1],
        17: [18], 18: [19, 27], 19: [20], 20: [21], 21: [11],
        22: [23], 23: [24, 28], 24: [25], 25: [26], 26: [7],
        27: [25], 28: [20],
    }
    routes = {
        0: (list(range(1, 17)), True),                                   # outer ring
        1: ([1, 17, 18, 19, 20, 21, 11, 12, 13, 14, 15, 16], True),     # northbound cut
        2: ([22, 23, 24, 25, 26, 7, 8, 9, 10, 11, 12, 13], True),       # eastbound cut
        3: ([1, 17, 18, 27, 25, 26, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16], True),  # right turn
        4: ([22, 23, 28, 20, 21, 11, 12, 13], True),                     # left turn
    }
    return _assemble("loop_intersection", lanelets, successors, routes)


def build_onramp_strip() -> ScenarioMap:
    """Stadium-shaped circuit whose bottom straight is joined by a half-circle
    ramp dropping down from the top straight (a merge and a diverge)."""
    arc_r = 0.75
    ramp_r = 0.75
    lanelets = [
        straight_lanelet(1, (1.0, 0.5), (3.2, 0.5)),          # bottom straight, up to the merge
        straight_lanelet(2, (3.2, 0.5), (4.0, 0.5)),          # bottom straight, after the merge
        arc_lanelet(3, (4.0, 1.25), arc_r, -math.pi / 2, math.pi / 2),  # east half-circle
        straight_lanelet(4, (4.0, 2.0), (3.2, 2.0)),          # top straight, up to the diverge
        straight_lanelet(5, (3.2, 2.0), (1.0, 2.0)),          # top straight, after the diverge
        arc_lanelet(6, (1.0, 1.25), arc_r, math.pi / 2, 3 * math.pi / 2),  # west half-circle
        arc_lanelet(7, (3.2, 1.25), ramp_r, math.pi / 2, 3 * math.pi / 2),  # ramp (left U-turn drop)
    ]
    successors = {1: [2], 2: [3], 3: [4], 4: [5, 7], 5: [6], 6: [1], 7: [2]}
    routes = {
        0: ([1, 2, 3, 4, 5, 6], True),   # full circuit
        1: ([7, 2, 3, 4], True),         # short loop over the ramp
    }
    return _assemble("onramp_strip", lanelets, successors, routes)


def build_mini_roundabout() -> ScenarioMap:
    """Clockwise inner circle inside a counter-clockwise outer circle, joined
    by four half-circle slip lanes (two entries, two exits)."""
    cx, cy = 2.0, 1.75
    r_in, r_out = 0.7, 1.4
    r_slip = (r_out - r_in) / 2.0
    d_slip = (r_out + r_in) / 2.0
    east, north, west, south = 0.0, math.pi / 2, math.pi, 3 * math.pi / 2
    lanelets = [
        # outer circle, counter-clockwise quarters  E->N->W->S->E
        arc_lanelet(1, (cx, cy), r_out, east, north),
        arc_lanelet(2, (cx, cy), r_out, north, math.pi),
        arc_lanelet(3, (cx, cy), r_out, math.pi, 3 * math.pi / 2),
        arc_lanelet(4, (cx, cy), r_out, 3 * math.pi / 2, 2 * math.pi),
        # inner circle, clockwise quarters  E->S->W->N->E
        arc_lanelet(5, (cx, cy), r_in, 2 * math.pi, 3 * math.pi / 2),
        arc_lanelet(6, (cx, cy), r_in, 3 * math.pi / 2, math.pi),
        arc_lanelet(7, (cx, cy), r_in, math.pi, math.pi / 2),
        arc_lanelet(8, (cx, cy), r_in, math.pi / 2, 0.0),
        # slip lanes (half circles, swept counter-clockwise)
        arc_lanelet(9, (cx + d_slip, cy), r_slip, 0.0, math.pi),          # enter at east: outer -> inner
        arc_lanelet(10, (cx - d_slip, cy), r_slip, 0.0, math.pi),         # exit at west: inner -> outer
        arc_lanelet(11, (cx, cy + d_slip), r_slip, math.pi / 2, 3 * math.pi / 2),  # enter at north
        arc_lanelet(12, (cx, cy - d_slip), r_slip, math.pi / 2, 3 * math.pi / 2),  # exit at south
    ]
    successors = {
        1: [2, 11], 2: [3], 3: [4], 4: [1, 9],
        5: [6, 12], 6: [7, 10], 7: [8], 8: [5],
        9: [5], 10: [3], 11: [8], 12: [4],
    }
    routes = {
        0: ([1, 2, 3, 4], True),                      # outer circle
        1: ([5, 6, 7, 8], True),                      # inner circle
        2: ([9, 5, 6, 10, 3, 4], True),               # east in, west out
        3: ([11, 8, 5, 12, 4, 1], True),              # north in, south out
        4: ([9, 5, 12, 4], True),                     # east in, south out (short)
    }
    return _assemble("mini_roundabout", lanelets, successors, routes)


def build_ring(name: str = "ring", center=(1.5, 1.5), radius: float = 0.7, quarters: int = 4) -> ScenarioMap:
    """Single counter-clockwise circular loop; handy as a constant-curvature
    test and demo track."""
    step = 2 * math.pi / quarters
    lanelets = [
        arc_lanelet(i + 1, center, radius, i * step, (i + 1) * step) for i in range(quarters)
    ]
    successors = {i + 1: [(i + 1) % quarters + 1] for i in range(quarters)}
    routes = {0: ([i + 1 for i in range(quarters)], True)}
    return _assemble(name, lanelets, successors, routes)


BUILDERS = {
    "loop_intersection": build_loop_intersection,
    "onramp_strip": build_onramp_strip,
    "mini_roundabout": build_mini_roundabout,
}


def write_builtin_scenarios(out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, builder in BUILDERS.items():
        target = out / f"{name}.json"
        save_scenario(builder(), target)
        written.append(target)
    return written


if __name__ == "__main__":
    target_dir = sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).parent / "scenarios")
    for path in write_builtin_scenarios(target_dir):
        print(f"wrote {path}")
