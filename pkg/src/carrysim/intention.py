"""Human intention channel: recover the human's force from the wrist sensor,
express it at the object frame, grade how much it favours the current goal, and
turn button commands into time-limited world modifications."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .force_field import GoalSpec, Obstacle, SOURCE_EXPLICIT
from .geometry import Rotation2D, Vec2, ZERO
from .world import WorldModel

TAKE_CONTROL = "take_control"
NARROW_PASSAGE = "narrow_passage"
FORBIDDEN_PATH = "forbidden_path"

COMMANDS = (TAKE_CONTROL, NARROW_PASSAGE, FORBIDDEN_PATH)


@dataclass(frozen=True)
class FrameTransforms:
    """Rotations taking the sensed force to the frame where forces are composed."""

    grasp_to_sensor: Rotation2D
    sensor_to_c: Rotation2D


@dataclass(frozen=True)
class SensedForce:
    """One wrist-sensor reading (sensor frame), with the robot acceleration and the
    object mass share needed to undo the robot's own contribution. Weight is
    already discounted by the sensor model."""

    raw: Vec2
    robot_accel: Vec2
    m_share: float

    def __post_init__(self) -> None:
        if self.m_share < 0:
            raise ValueError("m_share must be non-negative")


@dataclass(frozen=True)
class ImplicitIntention:
    """Alignment of the human force with the goal attraction: coefficient is
    gate * cos(angle), zero whenever the force opposes the goal or is too small
    to carry intent."""

    coefficient: float
    gate: int
    angle: float


@dataclass(frozen=True)
class PassagePayload:
    """Narrow-passage command data: where the passage exits, plus which static
    obstacles (the passage walls) stop repelling while the crossing is accepted.
    Suppression is optional; the subgoal substitution alone usually suffices."""

    exit: Vec2
    suppressed_obstacles: tuple[int, ...] = ()


@dataclass(frozen=True)
class PathFlagPayload:
    """Forbidden-path command data: the flagged route segment."""

    segment: tuple[Vec2, Vec2]


@dataclass(frozen=True)
class ExplicitIntentionEvent:
    command: str
    issued_at: float
    ttl: float
    payload: PassagePayload | PathFlagPayload | None = None
    event_id: str = ""

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.ttl > 0:
            raise ValueError("ttl must be positive")
        if self.command == NARROW_PASSAGE and not isinstance(self.payload, PassagePayload):
            raise ValueError("narrow_passage requires a passage payload")
        if self.command == FORBIDDEN_PATH and not isinstance(self.payload, PathFlagPayload):
            raise ValueError("forbidden_path requires a flagged-segment payload")

    def alive(self, now: float) -> bool:
        return now < self.issued_at + self.ttl


def compensate_robot_motion(sensed: SensedForce) -> Vec2:
    """Undo the -m_share*a term the sensor picked up from the robot's own motion,
    leaving the human-attributable force in the sensor frame."""
    return sensed.raw + sensed.robot_accel * sensed.m_share


def human_force_in_c(f_h_sen: Vec2, transforms: FrameTransforms) -> Vec2:
    """Rotate the compensated sensor-frame force into the composition frame."""
    return transforms.sensor_to_c.apply(f_h_sen)


def implicit_coefficient(
    f_h_c: Vec2, goal_force: Vec2, min_force: float = 2.0
) -> ImplicitIntention:
    """Coefficient k*cos(angle between human force and goal attraction). The gate
    closes when the force opposes the goal, is below the dead-band, or the goal
    force vanishes (angle undefined)."""
    fn = f_h_c.norm()
    gn = goal_force.norm()
    if gn == 0.0 or fn < min_force:
        return ImplicitIntention(0.0, 0, 0.0)
    c = f_h_c.dot(goal_force) / (fn * gn)
    c = min(1.0, max(-1.0, c))
    angle = math.acos(c)
    if c < 0.0:
        return ImplicitIntention(0.0, 0, angle)
    return ImplicitIntention(min(1.0, c), 1, angle)


def segment_obstacle(segment: tuple[Vec2, Vec2], width: float = 0.2,
                     event_id: str = "", expires_at: float = math.inf) -> Obstacle:
    """Thin rectangle covering a flagged route segment, usable as a virtual obstacle.
    A degenerate (point) segment becomes a width-sized square."""
    a, b = segment
    axis = (b - a).normalized()
    half = width / 2.0
    if axis == ZERO:
        axis = Vec2(1.0, 0.0)
        a = a - axis * half
        b = b + axis * half
    normal = Vec2(-axis.y, axis.x) * half
    return Obstacle(
        vertices=(a - normal, b - normal, b + normal, a + normal),
        virtual=True,
        source=SOURCE_EXPLICIT,
        expires_at=expires_at,
        event_id=event_id,
    )


def apply_explicit_intention(
    event: ExplicitIntentionEvent, world: WorldModel, now: float
) -> WorldModel:
    """Fold one live event into the world: take_control marks robot-as-slave,
    narrow_passage swaps the active target for a subgoal at the passage exit (and
    stops the passage walls from repelling), forbidden_path adds a virtual obstacle
    over the flagged segment and requests a replan. Expired events are no-ops."""
    if not event.alive(now):
        return world
    if event.command == TAKE_CONTROL:
        return replace(world, robot_slave=True)
    if event.command == NARROW_PASSAGE:
        payload = event.payload
        assert isinstance(payload, PassagePayload)
        suppressed = tuple(sorted(set(world.suppressed) | set(payload.suppressed_obstacles)))
        return replace(
            world,
            subgoal=GoalSpec(payload.exit, "explicit_subgoal"),
            subgoal_event=event.event_id,
            suppressed=suppressed,
        )
    payload = event.payload
    assert isinstance(payload, PathFlagPayload)
    obstacle = segment_obstacle(
        payload.segment,
        event_id=event.event_id,
        expires_at=event.issued_at + event.ttl,
    )
    return replace(
        world,
        virtual_obstacles=world.virtual_obstacles + (obstacle,),
        needs_replan=True,
    )
