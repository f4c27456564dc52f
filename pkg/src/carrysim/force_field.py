"""Virtual environment forces: exponential repulsion from obstacle boundaries and a
saturated-ramp attraction toward the current partial goal, aggregated with weights
so the combined field stays comparable to the measured human force."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import (
    Vec2,
    ZERO,
    point_in_polygon,
    polygon_centroid,
    polygon_nearest_point,
    segments_intersect,
)

SOURCE_MAP = "map"
SOURCE_EXPLICIT = "explicit_intention"

GOAL_TASK = "task_goal"
GOAL_WAYPOINT = "waypoint"
GOAL_SUBGOAL = "explicit_subgoal"


@dataclass(frozen=True)
class ForceParams:
    """Field parameters. The aggregation weights must satisfy w_Rep < w_rep and
    w_Att > w_att so the goal-directed component always wins over repulsion."""

    f_max: float = 30.0
    d_max: float = 2.0
    d_goal: float = 1.0
    w_rep: float = 1.0
    w_att: float = 1.0
    w_Rep: float = 0.99
    w_Att: float = 1.01

    def __post_init__(self) -> None:
        for name in ("f_max", "d_max", "d_goal", "w_rep", "w_att", "w_Rep", "w_Att"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"ForceParams.{name} must be positive and finite, got {v!r}")
        if not self.w_Rep < self.w_rep:
            raise ValueError(
                f"weight constraint violated: w_Rep={self.w_Rep} must be < w_rep={self.w_rep}"
            )
        if not self.w_Att > self.w_att:
            raise ValueError(
                f"weight constraint violated: w_Att={self.w_Att} must be > w_att={self.w_att}"
            )

    @property
    def f_rep_max(self) -> float:
        return self.f_max / self.w_rep

    @property
    def f_att_max(self) -> float:
        return self.f_max / self.w_att


@dataclass(frozen=True)
class Obstacle:
    """Polygonal obstacle. Virtual obstacles are products of explicit intention and
    carry the id of the event that created them plus an expiry time."""

    vertices: tuple[Vec2, ...]
    virtual: bool = False
    source: str = SOURCE_MAP
    expires_at: float = math.inf
    event_id: str | None = None
    centroid: Vec2 = field(init=False)

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise ValueError("obstacle polygon needs at least 3 vertices")
        if self._self_intersects():
            raise ValueError("obstacle polygon must not self-intersect")
        object.__setattr__(self, "centroid", polygon_centroid(self.vertices))

    def _self_intersects(self) -> bool:
        n = len(self.vertices)
        for i in range(n):
            a1, a2 = self.vertices[i], self.vertices[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue  # shared endpoints are fine
                b1, b2 = self.vertices[j], self.vertices[(j + 1) % n]
                if segments_intersect(a1, a2, b1, b2):
                    return True
        return False

    def nearest_boundary_point(self, p: Vec2) -> tuple[Vec2, float]:
        return polygon_nearest_point(p, self.vertices)

    def contains(self, p: Vec2) -> bool:
        return point_in_polygon(p, self.vertices)


@dataclass(frozen=True)
class GoalSpec:
    """A point the attractive field pulls toward: the task goal, a route waypoint,
    or a temporary subgoal injected by explicit intention."""

    position: Vec2
    kind: str = GOAL_TASK


def repulsive_force(agent_pos: Vec2, obstacle: Obstacle, params: ForceParams) -> Vec2:
    """Repulsion from the nearest boundary point, f_rep_max * exp(-d/d_max) inside
    the cutoff and exactly zero at or beyond it. Penetration clamps to f_rep_max
    pointing away from the obstacle centroid."""
    if obstacle.contains(agent_pos):
        away = (agent_pos - obstacle.centroid).normalized()
        if away == ZERO:
            away = Vec2(1.0, 0.0)
        return away * params.f_rep_max
    nearest, d = obstacle.nearest_boundary_point(agent_pos)
    if d >= params.d_max:
        return ZERO
    magnitude = params.f_rep_max * math.exp(-d / params.d_max)
    if d == 0.0:
        direction = (agent_pos - obstacle.centroid).normalized()
        if direction == ZERO:
            direction = Vec2(1.0, 0.0)
    else:
        direction = (agent_pos - nearest).normalized()
    return direction * magnitude


def attractive_force(agent_pos: Vec2, goal: GoalSpec, params: ForceParams) -> Vec2:
    """Attraction toward the goal: constant f_att_max beyond d_goal, then a linear
    ramp down to zero at the goal itself."""
    r = goal.position - agent_pos
    dist = r.norm()
    if dist == 0.0:
        return ZERO
    if dist > params.d_goal:
        magnitude = params.f_att_max
    else:
        magnitude = params.f_att_max * dist / params.d_goal
    return r.normalized() * magnitude


def environment_force(
    frame_c_pos: Vec2,
    obstacles: list[Obstacle] | tuple[Obstacle, ...],
    goal: GoalSpec | None,
    params: ForceParams,
) -> Vec2:
    """Weighted aggregate of all in-range repulsions (uniformly normalized so their
    sum cannot exceed f_rep_max) plus the goal attraction. goal=None drops the
    attractive term (robot-as-slave mode)."""
    contributions = []
    for obstacle in obstacles:
        f = repulsive_force(frame_c_pos, obstacle, params)
        if f != ZERO:
            contributions.append(f)
    rep_sum = ZERO
    if contributions:
        w_obs = 1.0 / len(contributions)
        for f in contributions:
            rep_sum = rep_sum + f * w_obs
    att = attractive_force(frame_c_pos, goal, params) if goal is not None else ZERO
    return rep_sum * params.w_Rep + att * params.w_Att


def normalize_environment_force(raw: Vec2, params: ForceParams) -> Vec2:
    """Divide by w_Rep + w_Att so the field magnitude is comparable to the measured
    human force (bounded by f_max when w_rep = w_att = 1)."""
    return raw / (params.w_Rep + params.w_Att)
