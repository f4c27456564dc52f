"""Situation awareness: compose the environment and human forces into the desired
force, track which role each agent is playing, and pick the mixing strategy."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .geometry import Vec2, ZERO
from .intention import ExplicitIntentionEvent, ImplicitIntention, TAKE_CONTROL


class RoleKind(str, Enum):
    MASTER = "master"
    SLAVE = "slave"
    COLLABORATIVE = "collaborative"
    NEUTRAL = "neutral"
    ADVERSARIAL = "adversarial"


# the robot mirrors the human's role: it yields to a master, leads a slave or a
# non-contributor, and meets a collaborator as an equal
ROLE_COMPLEMENT = {
    RoleKind.MASTER: RoleKind.SLAVE,
    RoleKind.SLAVE: RoleKind.MASTER,
    RoleKind.COLLABORATIVE: RoleKind.COLLABORATIVE,
    RoleKind.NEUTRAL: RoleKind.MASTER,
    RoleKind.ADVERSARIAL: RoleKind.MASTER,
}


@dataclass(frozen=True)
class Role:
    value: RoleKind
    since: float = 0.0


@dataclass(frozen=True)
class MixWeights:
    w_e: float = 1.0
    w_h: float = 1.0

    def __post_init__(self) -> None:
        if self.w_e < 0 or self.w_h < 0:
            raise ValueError("mixing weights must be non-negative")


@dataclass(frozen=True)
class RoleThresholds:
    """Classification knobs for the role state machine."""

    dead_band: float = 2.0
    collaborative_cos: float = 0.5
    adversarial_cos: float = -0.5
    adversarial_min_force: float = 5.0
    master_force: float = 20.0
    hysteresis_ticks: int = 6
    motion_eps: float = 0.05


@dataclass(frozen=True)
class SituationReport:
    f_env_norm: Vec2
    f_human: Vec2
    f_des_norm: Vec2
    human_role: Role
    robot_role: Role
    active_intentions: tuple[ExplicitIntentionEvent, ...]
    projections: tuple[tuple[str, tuple[Vec2, ...]], ...]


def compose_human_force(f_h_c: Vec2, ii: ImplicitIntention) -> Vec2:
    """Human contribution boosted by the implicit-intention coefficient."""
    return f_h_c * (1.0 + ii.coefficient)


def compose_desired_force(f_env_norm: Vec2, f_h: Vec2, w: MixWeights) -> Vec2:
    """Weighted, normalized mix of the environment and human forces. Both weights
    zero means a full-stop strategy and yields the zero vector."""
    total = w.w_e + w.w_h
    if total == 0.0:
        return ZERO
    return (f_env_norm * w.w_e + f_h * w.w_h) / total


def classify_role(
    f_h_c: Vec2,
    f_env_norm: Vec2,
    events: tuple[ExplicitIntentionEvent, ...] | list[ExplicitIntentionEvent],
    speed: float,
    th: RoleThresholds,
) -> RoleKind:
    """Instantaneous role candidate for the human, before hysteresis."""
    for event in events:
        if event.command == TAKE_CONTROL:
            return RoleKind.MASTER
    fn = f_h_c.norm()
    if fn >= th.master_force:
        return RoleKind.MASTER
    if fn < th.dead_band:
        # no meaningful force: following the moving pair reads as accepting the
        # robot's plan, standing still reads as neutral
        return RoleKind.SLAVE if speed >= th.motion_eps else RoleKind.NEUTRAL
    en = f_env_norm.norm()
    if en == 0.0:
        return RoleKind.NEUTRAL
    c = f_h_c.dot(f_env_norm) / (fn * en)
    if c >= th.collaborative_cos:
        return RoleKind.COLLABORATIVE
    if c <= th.adversarial_cos and fn >= th.adversarial_min_force:
        return RoleKind.ADVERSARIAL
    return RoleKind.NEUTRAL


class RoleTracker:
    """Role state machine with a hysteresis window: the active role changes only
    after the same candidate has been observed for a full window of ticks."""

    def __init__(self, thresholds: RoleThresholds | None = None):
        self.thresholds = thresholds or RoleThresholds()
        self.active = RoleKind.NEUTRAL
        self.since = 0.0
        self._window: deque[RoleKind] = deque(maxlen=self.thresholds.hysteresis_ticks)

    def infer_role(
        self,
        t: float,
        f_h_c: Vec2,
        f_env_norm: Vec2,
        events: tuple[ExplicitIntentionEvent, ...] | list[ExplicitIntentionEvent],
        speed: float,
    ) -> tuple[Role, Role]:
        candidate = classify_role(f_h_c, f_env_norm, events, speed, self.thresholds)
        self._window.append(candidate)
        if (
            candidate != self.active
            and len(self._window) == self._window.maxlen
            and all(c == candidate for c in self._window)
        ):
            self.active = candidate
            self.since = t
        human = Role(self.active, self.since)
        robot = Role(ROLE_COMPLEMENT[self.active], self.since)
        return human, robot

    def snapshot(self) -> tuple[RoleKind, float, tuple[RoleKind, ...]]:
        return self.active, self.since, tuple(self._window)

    def restore(self, state: tuple[RoleKind, float, tuple[RoleKind, ...]]) -> None:
        self.active, self.since, window = state
        self._window = deque(window, maxlen=self.thresholds.hysteresis_ticks)


def apply_strategy(
    roles: tuple[Role, Role], w: MixWeights, ii: ImplicitIntention
) -> MixWeights:
    """Role-dependent mixing weights. A human master (button or force) silences
    the environment term; a slave's input is attenuated; an adversary is rejected
    outright. Collaboration keeps the defaults: its boost already lives in the
    implicit-intention factor applied to the human force."""
    human, _robot = roles
    if human.value is RoleKind.MASTER:
        return MixWeights(0.0, w.w_h)
    if human.value is RoleKind.SLAVE:
        return MixWeights(w.w_e, w.w_h / 2.0)
    if human.value is RoleKind.ADVERSARIAL:
        return MixWeights(1.0, 0.0)
    return MixWeights(w.w_e, w.w_h)
