"""Tour of the scenario maps and the polyline geometry queries behind them.

Loads each builtin scenario, inspects its inventory, projects a few points
onto a reference path, and samples a short look-ahead along the center line.
"""
import numpy as np

from lanesim import load_scenario

for name in ("loop_intersection", "onramp_strip", "mini_roundabout"):
    smap = load_scenario(name)
    total = sum(l.center_line.total_length for l in smap.lanelets)
    print(f"{smap.name}: {len(smap.lanelets)} lanelets ({total:.1f} m of lane), "
          f"{len(smap.reference_paths)} routes, bounds {np.round(smap.bounds, 2)}")

print()
smap = load_scenario("loop_intersection")
path = smap.reference_paths[0]
line = path.stitched_center_line
print(f"route 0 is a loop of {line.total_length:.3f} m over lanelets {path.lanelet_sequence}")

# project points near the path onto it: arc length, signed lateral offset
for probe in [(1.5, 0.45), (1.5, 0.58), (3.55, 1.2)]:
    s, offset, seg = line.project(probe)
    side = "left of" if offset > 0 else "right of" if offset < 0 else "on"
    print(f"  point {probe} -> s = {s:.3f} m, {abs(offset)*100:.1f} cm {side} the center line")

# the short-term look-ahead an agent would observe (wraps on loops)
s0 = line.total_length - 0.15
ahead = line.sample_ahead(s0, count=3, spacing=0.10, wrap=True)
print(f"\nlook-ahead from s = {s0:.3f} m (near the loop seam):")
for k, p in enumerate(ahead, 1):
    print(f"  point {k}: ({p[0]:.3f}, {p[1]:.3f})")

# lanelet ownership along the route, used for boundary queries
for s in (0.1, 1.0, 2.5):
    lanelet = smap.lanelet(path.lanelet_id_at(s))
    left = lanelet.left_boundary.distance_to(line.point_at(s))
    print(f"at s = {s:.1f} m the agent is on lanelet {lanelet.id}, "
          f"{left*100:.1f} cm from its left boundary")
