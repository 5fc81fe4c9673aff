"""Minimal deterministic SVG scene rendering for replays and demos.

Drawing only reads logged poses; nothing is re-simulated. Agents that were
reset on a frame are highlighted.
"""
from __future__ import annotations

import math
from pathlib import Path

from .collision import rectangle_vertices
from .mapdata import ScenarioMap

SCALE = 200.0  # px per meter


def _path_d(points, closed: bool = False) -> str:
    cmds = [f"M {points[0][0]:.2f} {points[0][1]:.2f}"]
    cmds.extend(f"L {p[0]:.2f} {p[1]:.2f}" for p in points[1:])
    if closed:
        cmds.append("Z")
    return " ".join(cmds)


class SceneDrawer:
    def __init__(self, smap: ScenarioMap, body_length: float = 0.16, body_width: float = 0.08):
        self.smap = smap
        self.body_length = body_length
        self.body_width = body_width
        xmin, ymin, xmax, ymax = smap.bounds
        self._origin = (xmin, ymax)
        self._size = ((xmax - xmin) * SCALE, (ymax - ymin) * SCALE)
        self._static = self._render_static()

    def _to_px(self, p) -> tuple[float, float]:
        # flip y so +y points up on screen
        return ((p[0] - self._origin[0]) * SCALE, (self._origin[1] - p[1]) * SCALE)

    def _render_static(self) -> str:
        parts = []
        for lanelet in self.smap.lanelets:
            for boundary in (lanelet.left_boundary, lanelet.right_boundary):
                d = _path_d([self._to_px(p) for p in boundary.points])
                parts.append(f'<path d="{d}" fill="none" stroke="#555" stroke-width="2"/>')
            d = _path_d([self._to_px(p) for p in lanelet.center_line.points])
            parts.append(
                f'<path d="{d}" fill="none" stroke="#bbb" stroke-width="1" stroke-dasharray="6 6"/>'
            )
        return "\n".join(parts)

    def render_frame(self, agents: list[dict], resets: list[int], title: str = "") -> str:
        """SVG text for one frame; agents are log records (id/x/y/yaw/...)."""
        w, h = self._size
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
            f'viewBox="0 0 {w:.2f} {h:.2f}">',
            f'<rect width="{w:.2f}" height="{h:.2f}" fill="#fafafa"/>',
            self._static,
        ]
        reset_set = set(resets)
        for agent in agents:
            rect = rectangle_vertices(
                (agent["x"], agent["y"], agent["yaw"]), self.body_length, self.body_width
            )
            d = _path_d([self._to_px(p) for p in rect], closed=True)
            fill = "#e05050" if agent["id"] in reset_set else "#3a7bd5"
            parts.append(f'<path d="{d}" fill="{fill}" stroke="#123" stroke-width="1"/>')
            # heading tick from CG to the front edge midpoint
            cx, cy = self._to_px((agent["x"], agent["y"]))
            fx, fy = self._to_px(
                (
                    agent["x"] + self.body_length / 2 * math.cos(agent["yaw"]),
                    agent["y"] + self.body_length / 2 * math.sin(agent["yaw"]),
                )
            )
            parts.append(
                f'<line x1="{cx:.2f}" y1="{cy:.2f}" x2="{fx:.2f}" y2="{fy:.2f}" '
                'stroke="#fff" stroke-width="1.5"/>'
            )
        if title:
            parts.append(f'<text x="8" y="16" font-family="monospace" font-size="13">{title}</text>')
        parts.append("</svg>")
        return "\n".join(parts)

    def write_frames(self, records: list[dict], out_dir, every: int = 1) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for record in records[::every]:
            svg = self.render_frame(record["agents"], record["resets"], title=f"t={record['t']}")
            target = out / f"frame_{record['t']:06d}.svg"
            target.write_text(svg, encoding="utf-8")
            written.append(target)
        return written
