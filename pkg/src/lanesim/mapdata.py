"""Scenario map model: lanelets, long-term reference paths, loading/saving.

A scenario file is UTF-8 JSON with the top-level shape

    {"name", "bounds": [xmin, ymin, xmax, ymax],
     "lanelets": [{"id", "center": [[x, y], ...], "left": [...],
                   "right": [...], "successors": [id, ...]}, ...],
     "paths": [{"id", "lanelets": [id, ...], "loop": bool}, ...]}

with all coordinates in meters. Unknown top-level keys are rejected. Maps are
immutable after load and all queries are pure, so a single map can back any
number of concurrently stepped environment instances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import jsonutil
from .geometry import Polyline, PolylineError, rotation_matrix

MIN_LANE_WIDTH = 0.08  # agent body width; lanes must everywhere exceed it
CONNECT_TOL = 1e-6

BUILTIN_SCENARIOS = ("loop_intersection", "onramp_strip", "mini_roundabout")


class MapSchemaError(ValueError):
    """The file does not conform to the scenario JSON schema."""


class MapInvariantError(ValueError):
    """Structurally valid data that violates a map invariant."""


@dataclass
class Lanelet:
    id: int
    center_line: Polyline
    left_boundary: Polyline
    right_boundary: Polyline
    successors: list[int]


@dataclass
class ReferencePath:
    """A long-term route: an ordered lanelet chain stitched into one center line.

    ``lanelet_offsets[k]`` is the arc length at which the k-th lanelet of the
    sequence begins on the stitched line, used to map progress to a lanelet.
    """

    id: int
    lanelet_sequence: list[int]
    stitched_center_line: Polyline
    is_loop: bool
    lanelet_offsets: np.ndarray = field(repr=False, default=None)

    @property
    def total_length(self) -> float:
        return self.stitched_center_line.total_length

    def lanelet_index_at(self, s: float) -> int:
        """Index into lanelet_sequence of the lanelet containing arc length s.

        Points projecting exactly onto a lanelet seam (every point in the
        wedge outside a convex seam corner does) belong to the downstream
        lanelet; the 1 nm bias keeps that choice stable under coordinate
        noise instead of leaving it to an exact float tie.
        """
        if self.is_loop:
            s = s % self.total_length
        s = min(max(s, 0.0), self.total_length)
        i = int(np.searchsorted(self.lanelet_offsets, s + 1e-9, side="right")) - 1
        return min(max(i, 0), len(self.lanelet_sequence) - 1)

    def lanelet_id_at(self, s: float) -> int:
        return self.lanelet_sequence[self.lanelet_index_at(s)]

    def progress_delta(self, s_from: float, s_to: float) -> float:
        """Signed arc-length progress, resolving loop wrap-around to (-L/2, L/2]."""
        delta = s_to - s_from
        if self.is_loop:
            total = self.total_length
            delta = (delta + total / 2.0) % total - total / 2.0
        return delta


@dataclass
class ScenarioMap:
    name: str
    lanelets: list[Lanelet]
    reference_paths: list[ReferencePath]
    bounds: np.ndarray  # [xmin, ymin, xmax, ymax]

    def __post_init__(self) -> None:
        self._lanelet_by_id = {l.id: l for l in self.lanelets}
        self._path_by_id = {p.id: p for p in self.reference_paths}

    def lanelet(self, lanelet_id: int) -> Lanelet:
        return self._lanelet_by_id[lanelet_id]

    def path(self, path_id: int) -> ReferencePath:
        return self._path_by_id[path_id]


def _build_polyline(coords, where: str) -> Polyline:
    if not isinstance(coords, list) or len(coords) < 2:
        raise MapSchemaError(f"{where}: polyline needs at least 2 points, got {coords if not isinstance(coords, list) else len(coords)}")
    try:
        return Polyline(np.asarray(coords, dtype=float))
    except (PolylineError, ValueError) as exc:
        raise MapSchemaError(f"{where}: {exc}") from exc


def stitch_center_line(lanelets: list[Lanelet], is_loop: bool, where: str) -> tuple[Polyline, np.ndarray]:
    """Concatenate lanelet center lines into one polyline plus per-lanelet offsets.

    Consecutive lanelets must connect within 1e-6 m; the duplicated seam point
    is dropped. Loop paths must close, and the closing point is snapped onto
    the start point exactly so wrap arithmetic is self-consistent.
    """
    chunks = [lanelets[0].center_line.points]
    offsets = [0.0]
    running = lanelets[0].center_line.total_length
    for prev, nxt in zip(lanelets[:-1], lanelets[1:]):
        gap = float(np.hypot(*(prev.center_line.points[-1] - nxt.center_line.points[0])))
        if gap > CONNECT_TOL:
            raise MapInvariantError(
                f"{where}: lanelet {prev.id} ends {gap:.3g} m away from the start of lanelet {nxt.id}"
            )
        offsets.append(running)
        chunks.append(nxt.center_line.points[1:])
        running += nxt.center_line.total_length
    points = np.concatenate(chunks, axis=0)
    if is_loop:
        gap = float(np.hypot(*(points[-1] - points[0])))
        if gap > CONNECT_TOL:
            raise MapInvariantError(f"{where}: loop path does not close (gap {gap:.3g} m)")
        points = points.copy()
        points[-1] = points[0]
    return Polyline(points), np.asarray(offsets)


def _validate_lanelet(lanelet: Lanelet) -> None:
    center = lanelet.center_line
    for side_name, boundary in (("left", lanelet.left_boundary), ("right", lanelet.right_boundary)):
        mid = boundary.point_at(boundary.total_length / 2.0)
        _, offset, _ = center.project(mid)
        if side_name == "left":
            left_sign = math.copysign(1.0, offset)
        else:
            if math.copysign(1.0, offset) == left_sign:
                raise MapInvariantError(
                    f"lanelet {lanelet.id}: left and right boundaries lie on the same side of the center line"
                )
    # lane width: nearest-approach of the two boundary polylines
    width = min(
        min(lanelet.right_boundary.distance_to(p) for p in lanelet.left_boundary.points),
        min(lanelet.left_boundary.distance_to(p) for p in lanelet.right_boundary.points),
    )
    if width <= MIN_LANE_WIDTH:
        raise MapInvariantError(
            f"lanelet {lanelet.id}: lane width {width:.4f} m must exceed {MIN_LANE_WIDTH} m"
        )


def _validate_map(smap: ScenarioMap) -> None:
    known = {l.id for l in smap.lanelets}
    for lanelet in smap.lanelets:
        for succ in lanelet.successors:
            if succ not in known:
                raise MapInvariantError(f"lanelet {lanelet.id}: unknown successor id {succ}")
        _validate_lanelet(lanelet)
    xmin, ymin, xmax, ymax = smap.bounds
    for lanelet in smap.lanelets:
        for line in (lanelet.center_line, lanelet.left_boundary, lanelet.right_boundary):
            pts = line.points
            if (
                pts[:, 0].min() < xmin - 1e-9
                or pts[:, 0].max() > xmax + 1e-9
                or pts[:, 1].min() < ymin - 1e-9
                or pts[:, 1].max() > ymax + 1e-9
            ):
                raise MapInvariantError(f"lanelet {lanelet.id}: geometry outside the map bounds")


def from_dict(data: dict, source: str = "<memory>") -> ScenarioMap:
    if not isinstance(data, dict):
        raise MapSchemaError(f"{source}: top level must be a JSON object")
    allowed = {"name", "bounds", "lanelets", "paths"}
    unknown = set(data) - allowed
    if unknown:
        raise MapSchemaError(f"{source}: unknown top-level keys {sorted(unknown)}")
    missing = allowed - set(data)
    if missing:
        raise MapSchemaError(f"{source}: missing top-level keys {sorted(missing)}")

    bounds = np.asarray(data["bounds"], dtype=float)
    if bounds.shape != (4,):
        raise MapSchemaError(f"{source}: bounds must be [xmin, ymin, xmax, ymax]")

    lanelets = []
    for k, entry in enumerate(data["lanelets"]):
        where = f"lanelets[{k}]"
        for key in ("id", "center", "left", "right", "successors"):
            if key not in entry:
                raise MapSchemaError(f"{source}: {where} missing field {key!r}")
        lanelets.append(
            Lanelet(
                id=int(entry["id"]),
                center_line=_build_polyline(entry["center"], f"{where}.center"),
                left_boundary=_build_polyline(entry["left"], f"{where}.left"),
                right_boundary=_build_polyline(entry["right"], f"{where}.right"),
                successors=[int(i) for i in entry["successors"]],
            )
        )
    by_id = {l.id: l for l in lanelets}
    if len(by_id) != len(lanelets):
        raise MapSchemaError(f"{source}: duplicate lanelet ids")

    paths = []
    for k, entry in enumerate(data["paths"]):
        where = f"paths[{k}]"
        for key in ("id", "lanelets", "loop"):
            if key not in entry:
                raise MapSchemaError(f"{source}: {where} missing field {key!r}")
        sequence = [int(i) for i in entry["lanelets"]]
        if not sequence:
            raise MapSchemaError(f"{source}: {where} has an empty lanelet sequence")
        for lanelet_id in sequence:
            if lanelet_id not in by_id:
                raise MapInvariantError(
                    f"{source}: {where} references missing lanelet id {lanelet_id}"
                )
        stitched, offsets = stitch_center_line(
            [by_id[i] for i in sequence], bool(entry["loop"]), f"{source}: {where}"
        )
        paths.append(
            ReferencePath(
                id=int(entry["id"]),
                lanelet_sequence=sequence,
                stitched_center_line=stitched,
                is_loop=bool(entry["loop"]),
                lanelet_offsets=offsets,
            )
        )

    smap = ScenarioMap(name=str(data["name"]), lanelets=lanelets, reference_paths=paths, bounds=bounds)
    _validate_map(smap)
    return smap


def to_dict(smap: ScenarioMap) -> dict:
    return {
        "name": smap.name,
        "bounds": smap.bounds,
        "lanelets": [
            {
                "id": l.id,
                "center": l.center_line.points,
                "left": l.left_boundary.points,
                "right": l.right_boundary.points,
                "successors": l.successors,
            }
            for l in smap.lanelets
        ],
        "paths": [
            {"id": p.id, "lanelets": p.lanelet_sequence, "loop": p.is_loop}
            for p in smap.reference_paths
        ],
    }


def builtin_scenario_path(name: str) -> Path:
    if name not in BUILTIN_SCENARIOS:
        raise KeyError(f"unknown builtin scenario {name!r}; available: {BUILTIN_SCENARIOS}")
    return Path(str(resources.files("lanesim").joinpath(f"scenarios/{name}.json")))


def load_scenario(path_or_name) -> ScenarioMap:
    """Load and validate a scenario from a file path or a builtin name."""
    name = str(path_or_name)
    if name in BUILTIN_SCENARIOS:
        path = builtin_scenario_path(name)
    else:
        path = Path(name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MapSchemaError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = jsonutil.loads(text)
    except ValueError as exc:
        raise MapSchemaError(f"{path}: invalid JSON: {exc}") from exc
    return from_dict(data, source=str(path))


def save_scenario(smap: ScenarioMap, path) -> None:
    Path(path).write_text(jsonutil.dumps(to_dict(smap)) + "\n", encoding="utf-8")


def transform_scenario(smap: ScenarioMap, rotation: float, translation) -> ScenarioMap:
    """Apply one proper rigid motion to every polyline; bounds are recomputed."""
    t = np.asarray(translation, dtype=float)
    lanelets = [
        Lanelet(
            id=l.id,
            center_line=l.center_line.transformed(rotation, t),
            left_boundary=l.left_boundary.transformed(rotation, t),
            right_boundary=l.right_boundary.transformed(rotation, t),
            successors=list(l.successors),
        )
        for l in smap.lanelets
    ]
    r = rotation_matrix(rotation)
    paths = [
        ReferencePath(
            id=p.id,
            lanelet_sequence=list(p.lanelet_sequence),
            stitched_center_line=Polyline(p.stitched_center_line.points @ r.T + t),
            is_loop=p.is_loop,
            lanelet_offsets=p.lanelet_offsets.copy(),
        )
        for p in smap.reference_paths
    ]
    all_pts = np.concatenate(
        [line.points for l in lanelets for line in (l.center_line, l.left_boundary, l.right_boundary)]
    )
    margin = 0.1
    bounds = np.array(
        [
            all_pts[:, 0].min() - margin,
            all_pts[:, 1].min() - margin,
            all_pts[:, 0].max() + margin,
            all_pts[:, 1].max() + margin,
        ]
    )
    return ScenarioMap(name=smap.name, lanelets=lanelets, reference_paths=paths, bounds=bounds)
