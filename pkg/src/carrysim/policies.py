"""Scripted human partners. Each policy is a deterministic stand-in for a study
volunteer: a proportional push toward some target, capped in magnitude, plus
optional button use driven by what only the human can see (forbidden-path signs,
narrow passages)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .force_field import GoalSpec
from .geometry import Vec2, ZERO, segments_intersect, unit_from_angle
from .intention import FORBIDDEN_PATH, NARROW_PASSAGE
from .planner import Route
from .scenario import Scenario
from .world import PairState

KINDS = ("compliant", "resistive", "adversarial", "button_user", "cancel_env")


@dataclass(frozen=True)
class PolicyView:
    """What a scripted human can observe when deciding its next push."""

    t: float
    pair: PairState
    scenario: Scenario
    route: Route | None
    target: GoalSpec | None = None
    f_env_norm: Vec2 | None = None
    speed: float = 0.0


@dataclass(frozen=True)
class PolicyForce:
    force: Vec2
    in_frame_c: bool = False


def _route_edges(view: PolicyView) -> list[tuple[Vec2, Vec2]]:
    if view.route is None:
        return []
    pts = [view.pair.frame_c_pos, *view.route.remaining()]
    return [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]


def _route_crosses(view: PolicyView, segment: tuple[Vec2, Vec2]) -> bool:
    return any(
        segments_intersect(a, b, segment[0], segment[1]) for a, b in _route_edges(view)
    )


def _seg_distance(p: Vec2, segment: tuple[Vec2, Vec2]) -> float:
    a, b = segment
    ab = b - a
    denom = ab.norm_sq()
    if denom == 0.0:
        return (p - a).norm()
    t = min(1.0, max(0.0, (p - a).dot(ab) / denom))
    return (p - (a + ab * t)).norm()


class ScriptedPolicy:
    """Timeline playback plus kind-specific force behaviour."""

    def __init__(self, kind: str, params: dict | None = None,
                 timeline: list[dict] | None = None):
        if kind not in KINDS:
            raise ValueError(f"unknown policy kind {kind!r}")
        self.kind = kind
        self.params = dict(params or {})
        self.timeline = sorted(timeline or [], key=lambda e: e["t"])
        self._timeline_pos = 0
        self._timeline_force: Vec2 | None = None
        self._pressed: set[str] = set()
        self._avoid_latch = False
        self._latch_t = 0.0
        self._resigned = False

    @staticmethod
    def from_spec(spec: dict) -> "ScriptedPolicy":
        return ScriptedPolicy(
            spec.get("kind", "compliant"),
            spec.get("params", {}),
            spec.get("timeline", []),
        )

    # -- button phase ------------------------------------------------------

    def buttons(self, view: PolicyView) -> list[tuple[str, str]]:
        out: list[tuple[str, str]] = []
        while self._timeline_pos < len(self.timeline) and \
                self.timeline[self._timeline_pos]["t"] <= view.t:
            entry = self.timeline[self._timeline_pos]
            self._timeline_pos += 1
            if "button_down" in entry:
                out.append(("down", entry["button_down"]))
            elif "button_up" in entry:
                out.append(("up", entry["button_up"]))
            elif "force" in entry:
                self._timeline_force = Vec2.from_list(entry["force"])
        if self.kind == "button_user":
            out.extend(self._trigger_buttons(view))
        return out

    def _trigger_buttons(self, view: PolicyView) -> list[tuple[str, str]]:
        out: list[tuple[str, str]] = []
        trigger = float(self.params.get("trigger_dist", 1.5))
        c = view.pair.frame_c_pos
        if self.params.get("press_forbidden"):
            for i, seg in enumerate(view.scenario.forbidden_segments):
                key = f"forbidden:{i}"
                if key in self._pressed:
                    continue
                if _route_crosses(view, seg) and _seg_distance(c, seg) <= trigger:
                    self._pressed.add(key)
                    out.append(("down", FORBIDDEN_PATH))
        if self.params.get("press_passage"):
            for i, passage in enumerate(view.scenario.narrow_passages):
                key = f"passage:{i}"
                if key in self._pressed:
                    continue
                if (c - passage.entry).norm() <= trigger:
                    self._pressed.add(key)
                    out.append(("down", NARROW_PASSAGE))
        return out

    # -- force phase -------------------------------------------------------

    def force(self, view: PolicyView) -> PolicyForce:
        if self._timeline_force is not None:
            return PolicyForce(self._timeline_force)
        if self.kind == "cancel_env":
            f = view.f_env_norm if view.f_env_norm is not None else ZERO
            return PolicyForce(-f, in_frame_c=True)
        if self.kind == "resistive":
            mag = float(self.params.get("magnitude", 10.0))
            u = view.pair.robot_vel.v
            if abs(u) < 1e-6:
                return PolicyForce(ZERO)
            # drag opposes the platform's current travel direction
            direction = unit_from_angle(view.pair.robot_heading) * (1.0 if u >= 0 else -1.0)
            return PolicyForce(direction * -mag)
        if self.kind == "adversarial" and self.params.get("avoid_forbidden"):
            f = self._avoid_forbidden_force(view)
            if f is not None:
                return PolicyForce(f)
        return PolicyForce(self._proportional(view))

    def _proportional(self, view: PolicyView) -> Vec2:
        gain = float(self.params.get("gain", 6.0))
        cap = float(self.params.get("cap", 8.0))
        if view.target is None or gain == 0.0 or cap == 0.0:
            return ZERO
        raw = (view.target.position - view.pair.frame_c_pos) * gain
        return raw.clamped(cap)

    def _avoid_forbidden_force(self, view: PolicyView) -> Vec2 | None:
        """Fight a signed path: haul straight against the robot's progress while
        the route still crosses the sign, then give up (the robot only has force
        to read the objection from, and rejects a sustained adversary)."""
        if self._resigned:
            return None
        crossing = [
            seg for seg in view.scenario.forbidden_segments if _route_crosses(view, seg)
        ]
        if not crossing:
            self._avoid_latch = False
            return None
        c = view.pair.frame_c_pos
        trigger = float(self.params.get("trigger_dist", 1.6))
        if not self._avoid_latch:
            if min(_seg_distance(c, seg) for seg in crossing) > trigger:
                return None
            self._avoid_latch = True
            self._latch_t = view.t
        if view.t - self._latch_t > float(self.params.get("struggle_time", 12.0)):
            self._resigned = True
            return None
        if view.target is None:
            return None
        push = float(self.params.get("push", 16.0))
        against = (view.target.position - c).normalized()
        if against == ZERO:
            return None
        return -against * push
