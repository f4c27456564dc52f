"""Scenario files: JSON documents describing the arena, occupancy grid, obstacle
polygons, start poses, goal, human-knowledge annotations (forbidden segments,
narrow passages), the scripted policy, and parameter overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .force_field import Obstacle
from .geometry import Vec2
from .planner import OccupancyGrid

BUNDLED = ("open_field", "free_drive", "forbidden_nobutton", "forbidden_button",
           "narrow_passage", "narrow_passage_nobutton")


@dataclass(frozen=True)
class Passage:
    """A registered narrow passage: approach point, exit point, and the indices of
    the wall obstacles whose repulsion an accepted crossing suppresses."""

    entry: Vec2
    exit: Vec2
    walls: tuple[int, ...]


@dataclass(frozen=True)
class Scenario:
    name: str
    arena: tuple[float, float]
    grid: OccupancyGrid
    obstacles: tuple[Obstacle, ...]
    robot_start: tuple[Vec2, float]
    goal: Vec2
    forbidden_segments: tuple[tuple[Vec2, Vec2], ...] = ()
    narrow_passages: tuple[Passage, ...] = ()
    policy_spec: dict = field(default_factory=dict)
    overrides: dict = field(default_factory=dict)
    buttons_enabled: bool = True


def rle_encode_row(row: np.ndarray) -> list[list[int]]:
    out: list[list[int]] = []
    run_val = int(row[0])
    run_len = 0
    for v in row:
        v = int(v)
        if v == run_val:
            run_len += 1
        else:
            out.append([run_val, run_len])
            run_val = v
            run_len = 1
    out.append([run_val, run_len])
    return out


def rle_decode_row(pairs: list[list[int]], width: int) -> np.ndarray:
    row = np.zeros(width, dtype=bool)
    i = 0
    for val, run in pairs:
        row[i:i + run] = bool(val)
        i += run
    if i != width:
        raise ValueError(f"run-length row decodes to {i} cells, expected {width}")
    return row


def scenario_to_dict(s: Scenario) -> dict:
    rows = [rle_encode_row(s.grid.blocked[y]) for y in range(s.grid.height)]
    return {
        "name": s.name,
        "arena": [s.arena[0], s.arena[1]],
        "grid": {
            "resolution": s.grid.resolution,
            "width": s.grid.width,
            "height": s.grid.height,
            "inflation_radius": s.grid.inflation_radius,
            "rows": rows,
        },
        "obstacles": [
            {"vertices": [v.as_list() for v in o.vertices]} for o in s.obstacles
        ],
        "start_poses": {
            "robot": [s.robot_start[0].x, s.robot_start[0].y, s.robot_start[1]],
        },
        "goal": s.goal.as_list(),
        "forbidden_segments": [
            [a.as_list(), b.as_list()] for a, b in s.forbidden_segments
        ],
        "narrow_passages": [
            {"entry": p.entry.as_list(), "exit": p.exit.as_list(), "walls": list(p.walls)}
            for p in s.narrow_passages
        ],
        "policy": s.policy_spec,
        "params": s.overrides,
        "buttons_enabled": s.buttons_enabled,
    }


def scenario_from_dict(doc: dict) -> Scenario:
    g = doc["grid"]
    blocked = np.stack([rle_decode_row(r, g["width"]) for r in g["rows"]])
    grid = OccupancyGrid(
        resolution=g["resolution"],
        width=g["width"],
        height=g["height"],
        blocked=blocked,
        inflation_radius=g.get("inflation_radius", 0.2),
    )
    obstacles = tuple(
        Obstacle(vertices=tuple(Vec2.from_list(v) for v in o["vertices"]))
        for o in doc.get("obstacles", [])
    )
    rx, ry, rh = doc["start_poses"]["robot"]
    return Scenario(
        name=doc["name"],
        arena=(doc["arena"][0], doc["arena"][1]),
        grid=grid,
        obstacles=obstacles,
        robot_start=(Vec2(rx, ry), rh),
        goal=Vec2.from_list(doc["goal"]),
        forbidden_segments=tuple(
            (Vec2.from_list(a), Vec2.from_list(b))
            for a, b in doc.get("forbidden_segments", [])
        ),
        narrow_passages=tuple(
            Passage(
                entry=Vec2.from_list(p["entry"]),
                exit=Vec2.from_list(p["exit"]),
                walls=tuple(p.get("walls", [])),
            )
            for p in doc.get("narrow_passages", [])
        ),
        policy_spec=doc.get("policy", {}),
        overrides=doc.get("params", {}),
        buttons_enabled=doc.get("buttons_enabled", True),
    )


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=1, sort_keys=True))


def load_scenario(name_or_path: str | Path) -> Scenario:
    """Load a scenario file, or one of the bundled scenarios by name."""
    p = Path(name_or_path)
    if p.suffix == ".json" and p.exists():
        return scenario_from_dict(json.loads(p.read_text()))
    name = str(name_or_path)
    if name in BUNDLED:
        ref = resources.files("carrysim").joinpath(f"scenarios/{name}.json")
        return scenario_from_dict(json.loads(ref.read_text()))
    raise FileNotFoundError(f"no scenario file or bundled scenario named {name_or_path!r}")


# ---------------------------------------------------------------------------
# bundled scenario construction


def _rect(x0: float, y0: float, x1: float, y1: float) -> Obstacle:
    return Obstacle(vertices=(Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)))


def _make_grid(arena: tuple[float, float], obstacles: tuple[Obstacle, ...],
               resolution: float = 0.1, inflation: float = 0.2) -> OccupancyGrid:
    grid = OccupancyGrid.empty(arena[0], arena[1], resolution, inflation)
    return grid.with_obstacles(list(obstacles))


def build_open_field() -> Scenario:
    """Empty map; the human exerts no force and the robot drives the task."""
    arena = (7.8, 5.7)
    return Scenario(
        name="open_field",
        arena=arena,
        grid=_make_grid(arena, ()),
        obstacles=(),
        robot_start=(Vec2(1.75, 2.85), 0.0),
        goal=Vec2(6.8, 2.85),
        policy_spec={"kind": "compliant", "params": {"gain": 0.0, "cap": 0.0}},
    )


def build_free_drive() -> Scenario:
    """Empty map; the human holds take-control and steers the robot by force."""
    arena = (7.8, 5.7)
    return Scenario(
        name="free_drive",
        arena=arena,
        grid=_make_grid(arena, ()),
        obstacles=(),
        robot_start=(Vec2(1.75, 2.0), 0.0),
        goal=Vec2(6.6, 4.4),
        policy_spec={
            "kind": "button_user",
            "params": {"gain": 10.0, "cap": 12.0},
            "timeline": [{"t": 0.0, "button_down": "take_control"}],
        },
    )


_HEADING_UP = 1.5707963267948966

# tight maps soften the repulsion horizon and give waypoints extra wall clearance
# so the field equilibria stay inside the waypoint reach radius
_CONFLICT_OVERRIDES = {
    "force": {"d_max": 1.0},
    "corner_clearance": 0.7,
    "reach_radius": 0.45,
}


def _forbidden_map() -> tuple[tuple[float, float], tuple[Obstacle, ...],
                              tuple[tuple[Vec2, Vec2], ...]]:
    """Wall across the arena with a short gap (carrying a forbidden-path sign only
    the human can read); the long way around the open east end stays legal."""
    arena = (7.8, 5.7)
    walls = (
        _rect(0.0, 3.0, 1.2, 3.4),   # west of the signed gap
        _rect(2.0, 3.0, 6.4, 3.4),   # main wall, open east of x=6.4
    )
    forbidden = ((Vec2(1.2, 3.2), Vec2(2.0, 3.2)),)
    return arena, walls, forbidden


def build_forbidden_nobutton() -> Scenario:
    """Forbidden-path map, buttons disabled: the scripted human can only push the
    pair away from the signed gap until the planner gives up on it."""
    arena, walls, forbidden = _forbidden_map()
    return Scenario(
        name="forbidden_nobutton",
        arena=arena,
        grid=_make_grid(arena, walls),
        obstacles=walls,
        robot_start=(Vec2(1.6, 1.6), _HEADING_UP),
        goal=Vec2(1.6, 4.6),
        forbidden_segments=forbidden,
        policy_spec={
            "kind": "adversarial",
            "params": {
                "gain": 8.0,
                "cap": 8.0,
                "avoid_forbidden": True,
                "trigger_dist": 2.0,
                "struggle_time": 12.0,
                "push": 18.0,
            },
        },
        overrides={**_CONFLICT_OVERRIDES, "stall_window": 1.0},
        buttons_enabled=False,
    )


def build_forbidden_button() -> Scenario:
    """Same map, buttons enabled: the scripted human flags the forbidden path and
    stays compliant."""
    arena, walls, forbidden = _forbidden_map()
    return Scenario(
        name="forbidden_button",
        arena=arena,
        grid=_make_grid(arena, walls),
        obstacles=walls,
        robot_start=(Vec2(1.6, 1.6), _HEADING_UP),
        goal=Vec2(1.6, 4.6),
        forbidden_segments=forbidden,
        policy_spec={
            "kind": "button_user",
            "params": {
                "gain": 8.0,
                "cap": 8.0,
                "press_forbidden": True,
                "trigger_dist": 2.0,
            },
        },
        overrides=dict(_CONFLICT_OVERRIDES),
    )


def _passage_map() -> tuple[tuple[float, float], tuple[Obstacle, ...], Passage]:
    """Full-width wall with a 0.5 m slot: physically wide enough for the in-line
    pair but narrower than twice the planning inflation, so the global planner
    cannot route through it at all. Only an accepted crossing (subgoal at the far
    side) pulls the pair through."""
    arena = (7.8, 5.7)
    walls = (
        _rect(0.0, 2.5, 3.6, 3.1),
        _rect(4.1, 2.5, 7.8, 3.1),
    )
    passage = Passage(entry=Vec2(3.85, 1.6), exit=Vec2(3.85, 4.45), walls=())
    return arena, walls, passage


def build_narrow_passage() -> Scenario:
    arena, walls, passage = _passage_map()
    return Scenario(
        name="narrow_passage",
        arena=arena,
        grid=_make_grid(arena, walls),
        obstacles=walls,
        robot_start=(Vec2(3.85, 1.35), _HEADING_UP),
        goal=Vec2(1.6, 4.6),
        narrow_passages=(passage,),
        policy_spec={
            "kind": "button_user",
            "params": {
                "gain": 6.0,
                "cap": 6.0,
                "press_passage": True,
                "trigger_dist": 1.2,
            },
        },
        overrides=dict(_CONFLICT_OVERRIDES),
    )


def build_narrow_passage_nobutton() -> Scenario:
    """Control run on the passage map: same compliant effort, no button use."""
    arena, walls, passage = _passage_map()
    return Scenario(
        name="narrow_passage_nobutton",
        arena=arena,
        grid=_make_grid(arena, walls),
        obstacles=walls,
        robot_start=(Vec2(3.85, 1.35), _HEADING_UP),
        goal=Vec2(1.6, 4.6),
        narrow_passages=(passage,),
        policy_spec={"kind": "compliant", "params": {"gain": 6.0, "cap": 6.0}},
        overrides=dict(_CONFLICT_OVERRIDES),
        buttons_enabled=False,
    )


BUILDERS = {
    "open_field": build_open_field,
    "free_drive": build_free_drive,
    "forbidden_nobutton": build_forbidden_nobutton,
    "forbidden_button": build_forbidden_button,
    "narrow_passage": build_narrow_passage,
    "narrow_passage_nobutton": build_narrow_passage_nobutton,
}


def write_bundled(directory: str | Path) -> None:
    """Regenerate the bundled scenario JSON files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, builder in BUILDERS.items():
        save_scenario(builder(), directory / f"{name}.json")
