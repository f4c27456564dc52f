"""Deterministic tick loop: perception of the virtual force field, human-force
sensing and intention, situation awareness, PD control, first-order plant lag and
kinematics, with per-tick trace records, episode outcomes and metrics."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .config import SimConfig
from .controller import VelocityCommand, pd_step, to_robot_frame
from .force_field import (
    GoalSpec,
    attractive_force,
    environment_force,
    normalize_environment_force,
)
from .geometry import Rotation2D, Vec2, ZERO, segment_intersects_polygon, unit_from_angle
from .intention import (
    ExplicitIntentionEvent,
    FORBIDDEN_PATH,
    FrameTransforms,
    ImplicitIntention,
    NARROW_PASSAGE,
    PassagePayload,
    PathFlagPayload,
    SensedForce,
    TAKE_CONTROL,
    apply_explicit_intention,
    compensate_robot_motion,
    human_force_in_c,
    implicit_coefficient,
)
from .planner import NoPathError, Route, advance_waypoint, plan_route
from .policies import PolicyForce, PolicyView, ScriptedPolicy
from .scenario import Scenario
from .situation import (
    RoleTracker,
    SituationReport,
    apply_strategy,
    compose_desired_force,
    compose_human_force,
)
from .world import PairState, WorldModel

GOAL_REACHED = "GoalReached"
COLLISION = "Collision"
TIMEOUT = "Timeout"

# default sentinel: "use the scenario's bundled policy" (None means live input only)
SCENARIO_POLICY = object()


@dataclass(frozen=True)
class LiveInput:
    """Operator input for one tick: a held world-frame force plus button edges."""

    force: Vec2 = ZERO
    presses: tuple[str, ...] = ()
    releases: tuple[str, ...] = ()


@dataclass(frozen=True)
class TickRecord:
    """Complete observable state of one simulation step."""

    t: float
    pair: PairState
    sensed: SensedForce
    implicit: ImplicitIntention
    situation: SituationReport
    command: VelocityCommand
    route: Route
    target: GoalSpec
    f_h_c: Vec2

    @staticmethod
    def _intention_dict(e: ExplicitIntentionEvent) -> dict:
        out = {
            "event_id": e.event_id,
            "command": e.command,
            "issued_at": e.issued_at,
            "ttl": e.ttl if math.isfinite(e.ttl) else None,
        }
        if isinstance(e.payload, PathFlagPayload):
            a, b = e.payload.segment
            out["segment"] = [a.as_list(), b.as_list()]
        elif isinstance(e.payload, PassagePayload):
            out["exit"] = e.payload.exit.as_list()
        return out

    def to_dict(self) -> dict:
        s = self.situation
        return {
            "t": self.t,
            "pair": {
                "robot_pos": self.pair.robot_pos.as_list(),
                "robot_heading": self.pair.robot_heading,
                "robot_vel": {"v": self.pair.robot_vel.v, "omega": self.pair.robot_vel.omega},
                "human_pos": self.pair.human_pos.as_list(),
                "frame_c_pos": self.pair.frame_c_pos.as_list(),
                "frame_c_heading": self.pair.frame_c_heading,
            },
            "sensed": {
                "raw": self.sensed.raw.as_list(),
                "robot_accel": self.sensed.robot_accel.as_list(),
                "m_share": self.sensed.m_share,
            },
            "implicit": {
                "coefficient": self.implicit.coefficient,
                "gate": self.implicit.gate,
                "angle": self.implicit.angle,
            },
            "situation": {
                "f_env_norm": s.f_env_norm.as_list(),
                "f_human": s.f_human.as_list(),
                "f_des_norm": s.f_des_norm.as_list(),
                "human_role": s.human_role.value.value,
                "human_role_since": s.human_role.since,
                "robot_role": s.robot_role.value.value,
                "robot_role_since": s.robot_role.since,
                "active_intentions": [
                    self._intention_dict(e) for e in s.active_intentions
                ],
                "projections": [
                    {"intention_id": pid, "trajectory": [p.as_list() for p in traj]}
                    for pid, traj in s.projections
                ],
            },
            "command": {"v": self.command.v, "omega": self.command.omega},
            "route": {
                "waypoints": [w.as_list() for w in self.route.waypoints],
                "current_index": self.route.current_index,
            },
            "target": {"position": self.target.position.as_list(), "kind": self.target.kind},
            "f_h_c": self.f_h_c.as_list(),
        }


def dump_record_line(record: TickRecord) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, separators=(",", ":"))


class Simulation:
    """Owns all mutable episode state and advances it one fixed tick at a time."""

    def __init__(
        self,
        scenario: Scenario,
        policy=SCENARIO_POLICY,
        seed: int = 0,
        config: SimConfig | None = None,
        record_projections: bool = True,
    ):
        base = config or SimConfig()
        self.config = base.with_overrides(scenario.overrides)
        self.scenario = scenario
        if policy is SCENARIO_POLICY:
            policy = (ScriptedPolicy.from_spec(scenario.policy_spec)
                      if scenario.policy_spec else None)
        self.policy = policy
        self.seed = seed
        self._rng = random.Random(seed)
        self._record_projections = record_projections

        grid = replace(
            scenario.grid,
            inflation_radius=self.config.inflation_radius,
        )
        robot_pos, heading = scenario.robot_start
        self.pair = PairState.from_robot(
            robot_pos, heading, self.config.bar_length, self.config.frame_c_fraction
        )
        self.world = WorldModel(
            grid=grid,
            obstacles=scenario.obstacles,
            goal=GoalSpec(scenario.goal, "task_goal"),
            arena=scenario.arena,
        )
        self.events: list[ExplicitIntentionEvent] = []
        self.tracker = RoleTracker(self.config.roles)
        self.prev_error = ZERO
        self.prev_vel_vec = ZERO
        self.t = 0.0
        self.tick_index = 0
        self.outcome: str | None = None
        self._event_counter = 0
        self._replanned_events: set[str] = set()
        self._stall_best = math.inf
        self._stall_last_progress = 0
        self._stall_target: Vec2 | None = None
        self._live_force = ZERO
        self._last_projections: tuple[tuple[str, tuple[Vec2, ...]], ...] = ()
        self._replan(initial=True)

    # -- state copy for closed-loop projections -----------------------------

    def _entry_snapshot(self) -> dict:
        return {
            "pair": self.pair,
            "world": self.world,
            "events": list(self.events),
            "tracker": self.tracker.snapshot(),
            "prev_error": self.prev_error,
            "prev_vel_vec": self.prev_vel_vec,
            "t": self.t,
            "tick_index": self.tick_index,
            "replanned_events": set(self._replanned_events),
            "stall_best": self._stall_best,
            "stall_last_progress": self._stall_last_progress,
            "stall_target": self._stall_target,
        }

    def _fork_from(self, snap: dict, events: list[ExplicitIntentionEvent],
                   held_force_c: Vec2) -> "Simulation":
        """Rollout clone with the given event subset. When the subset differs from
        the live set, the clone replans so its route matches its own world; when it
        matches (the no-events oracle case), state is copied verbatim so chained
        steps reproduce the parent bit-exactly."""
        clone = object.__new__(Simulation)
        clone.config = self.config
        clone.scenario = self.scenario
        clone.policy = _HeldForce(held_force_c)
        clone.seed = self.seed
        clone._rng = random.Random(0)
        clone._record_projections = False
        clone.pair = snap["pair"]
        clone.world = snap["world"]
        clone.events = list(events)
        clone.tracker = RoleTracker(self.config.roles)
        clone.tracker.restore(snap["tracker"])
        clone.prev_error = snap["prev_error"]
        clone.prev_vel_vec = snap["prev_vel_vec"]
        clone.t = snap["t"]
        clone.tick_index = snap["tick_index"]
        clone.outcome = None
        clone._event_counter = self._event_counter
        live_ids = {e.event_id for e in events}
        clone._replanned_events = set(snap["replanned_events"]) & live_ids
        clone._stall_best = snap["stall_best"]
        clone._stall_last_progress = snap["stall_last_progress"]
        clone._stall_target = snap["stall_target"]
        clone._live_force = ZERO
        clone._last_projections = ()
        parent_ids = {e.event_id for e in snap["events"]}
        if live_ids != parent_ids:
            clone._replan()
        return clone

    # -- event plumbing ------------------------------------------------------

    def _next_event_id(self) -> str:
        self._event_counter += 1
        return f"e{self._event_counter:03d}"

    def _create_event(self, command: str, now: float) -> None:
        if command == TAKE_CONTROL:
            if any(e.command == TAKE_CONTROL for e in self.events):
                return
            self.events.append(ExplicitIntentionEvent(
                TAKE_CONTROL, now, math.inf, None, self._next_event_id()))
            return
        c = self.pair.frame_c_pos
        if command == NARROW_PASSAGE:
            if not self.scenario.narrow_passages:
                return
            passage = min(
                self.scenario.narrow_passages, key=lambda p: (c - p.entry).norm()
            )
            self.events.append(ExplicitIntentionEvent(
                NARROW_PASSAGE, now, self.config.narrow_passage_ttl,
                PassagePayload(passage.exit, passage.walls),
                self._next_event_id()))
            return
        if command == FORBIDDEN_PATH:
            if not self.scenario.forbidden_segments:
                return
            seg = min(
                self.scenario.forbidden_segments,
                key=lambda s: (c - (s[0] + s[1]) * 0.5).norm(),
            )
            self.events.append(ExplicitIntentionEvent(
                FORBIDDEN_PATH, now, math.inf,
                PathFlagPayload(seg), self._next_event_id()))

    def _release(self, command: str) -> None:
        if command == TAKE_CONTROL:
            self.events = [e for e in self.events if e.command != TAKE_CONTROL]

    def _fold(self, now: float) -> WorldModel:
        eff = self.world
        for event in self.events:
            eff = apply_explicit_intention(event, eff, now)
        return eff

    # -- replanning ----------------------------------------------------------

    def _replan(self, initial: bool = False) -> None:
        # the stall clock restarts on every attempt, successful or not, so an
        # unreachable goal does not trigger a full planner search every tick
        self._stall_best = math.inf
        self._stall_last_progress = self.tick_index
        eff = self._fold(self.t)
        try:
            route = plan_route(
                self.world.grid,
                self.pair.frame_c_pos,
                self.world.goal.position,
                eff.virtual_obstacles,
                self.config.corner_clearance,
            )
        except NoPathError:
            if initial:
                # unreachable goal: hold position (a degenerate self-route) until
                # an explicit intention opens a way through
                route = Route((self.pair.frame_c_pos,))
            else:
                return  # keep following the stale route rather than stopping dead
        self.world = self.world.with_route(route)

    # -- main loop -----------------------------------------------------------

    def step(self, live: LiveInput | None = None) -> TickRecord:
        if self.outcome is not None:
            raise RuntimeError(f"episode already ended: {self.outcome}")
        cfg = self.config
        now = self.t
        snap = self._entry_snapshot() if self._record_projections else None

        # button phase
        presses: list[str] = []
        releases: list[str] = []
        if self.policy is not None:
            for action, command in self.policy.buttons(self._view()):
                (presses if action == "down" else releases).append(command)
        if live is not None:
            presses.extend(live.presses)
            releases.extend(live.releases)
            self._live_force = live.force.clamped(cfg.f_human_max)
        for command in releases:
            self._release(command)
        self.events = [e for e in self.events if e.alive(now)]
        for command in presses:
            self._create_event(command, now)

        eff = self._fold(now)

        # subgoal completion retires the narrow-passage event and replans
        if eff.subgoal is not None and eff.subgoal_event:
            if (self.pair.frame_c_pos - eff.subgoal.position).norm() < cfg.reach_radius:
                self.events = [
                    e for e in self.events if e.event_id != eff.subgoal_event
                ]
                self._replan()
                eff = self._fold(now)

        # new virtual obstacles invalidate the current route once
        new_virtuals = [
            o for o in eff.virtual_obstacles
            if o.event_id and o.event_id not in self._replanned_events
        ]
        if new_virtuals:
            for o in new_virtuals:
                self._replanned_events.add(o.event_id)
            self._replan()
            eff = self._fold(now)

        # stalled progress toward the current waypoint forces a fresh plan
        stall_ticks = int(round(cfg.stall_window / cfg.dt))
        if self.tick_index - self._stall_last_progress >= stall_ticks:
            self._replan()
            eff = self._fold(now)

        # waypoint advancement on the physically visible grid
        route = self.world.route
        assert route is not None
        route, replan_flag = advance_waypoint(
            route, self.pair.frame_c_pos, cfg.reach_radius, eff.planning_grid()
        )
        if route is not self.world.route:
            self.world = self.world.with_route(route)
            self._stall_best = math.inf
            self._stall_last_progress = self.tick_index
        if replan_flag:
            self._replan()
            eff = self._fold(now)

        # perception
        target = eff.current_target()
        goal_force = attractive_force(self.pair.frame_c_pos, target, cfg.force)
        f_env = environment_force(
            self.pair.frame_c_pos,
            eff.force_obstacles(),
            None if eff.robot_slave else target,
            cfg.force,
        )
        f_env_norm = normalize_environment_force(f_env, cfg.force)

        # human force phase
        if self.policy is not None:
            act = self.policy.force(self._view(f_env_norm, target))
        else:
            act = PolicyForce(self._live_force)
        heading = self.pair.robot_heading
        world_to_body = Rotation2D(-heading)
        transforms = FrameTransforms(world_to_body, Rotation2D(heading))
        accel_world = (self._vel_vec() - self.prev_vel_vec) / cfg.dt
        accel_body = world_to_body.apply(accel_world)
        if act.in_frame_c:
            f_h_c = act.force.clamped(cfg.f_human_max)
            raw = world_to_body.apply(f_h_c) - accel_body * cfg.m_share
            sensed = SensedForce(raw, accel_body, cfg.m_share)
        else:
            f_world = act.force.clamped(cfg.f_human_max)
            raw = world_to_body.apply(f_world) - accel_body * cfg.m_share
            if cfg.sensor_noise_sigma > 0:
                raw = raw + Vec2(
                    self._rng.gauss(0.0, cfg.sensor_noise_sigma),
                    self._rng.gauss(0.0, cfg.sensor_noise_sigma),
                )
            sensed = SensedForce(raw, accel_body, cfg.m_share)
            f_h_sen = compensate_robot_motion(sensed)
            f_h_c = human_force_in_c(f_h_sen, transforms)

        ii = implicit_coefficient(f_h_c, goal_force, cfg.min_force)

        # situation awareness
        speed = abs(self.pair.robot_vel.v)
        human_role, robot_role = self.tracker.infer_role(
            now, f_h_c, f_env_norm, self.events, speed
        )
        weights = apply_strategy((human_role, robot_role), cfg.weights, ii)
        f_human = compose_human_force(f_h_c, ii)
        f_des_norm = compose_desired_force(f_env_norm, f_human, weights)

        projections: tuple[tuple[str, tuple[Vec2, ...]], ...] = ()
        if self._record_projections and snap is not None:
            # rolling the closed loop forward is the costly part of the cycle, so
            # refresh the projection set on a stride and hold it in between
            if self.tick_index % max(1, cfg.projection_stride) == 0:
                self._last_projections = self._project(snap, f_h_c)
            projections = self._last_projections

        situation = SituationReport(
            f_env_norm=f_env_norm,
            f_human=f_human,
            f_des_norm=f_des_norm,
            human_role=human_role,
            robot_role=robot_role,
            active_intentions=tuple(self.events),
            projections=projections,
        )

        # control, plant, kinematics
        f_body = to_robot_frame(f_des_norm, heading)
        command, self.prev_error = pd_step(
            f_body, self.prev_error, cfg.dt, cfg.gains, cfg.limits
        )
        lag = math.exp(-cfg.dt / cfg.plant_tau)
        v_act = command.v + (self.pair.robot_vel.v - command.v) * lag
        w_act = command.omega + (self.pair.robot_vel.omega - command.omega) * lag
        self.prev_vel_vec = self._vel_vec()
        new_pos = self.pair.robot_pos + unit_from_angle(heading) * (v_act * cfg.dt)
        new_heading = heading + w_act * cfg.dt
        self.pair = PairState.from_robot(
            new_pos, new_heading, cfg.bar_length, cfg.frame_c_fraction,
            VelocityCommand(v_act, w_act),
        )

        # outcome checks
        bar_a, bar_b = self.pair.bar_segment()
        for obstacle in self.world.obstacles:
            if segment_intersects_polygon(bar_a, bar_b, obstacle.vertices):
                self.outcome = COLLISION
                break
        if self.outcome is None and \
                (self.pair.frame_c_pos - self.world.goal.position).norm() < cfg.reach_radius:
            self.outcome = GOAL_REACHED

        # stall bookkeeping against the active target
        if self._stall_target != target.position:
            self._stall_target = target.position
            self._stall_best = math.inf
        d = (self.pair.frame_c_pos - target.position).norm()
        if d < self._stall_best - cfg.stall_eps:
            self._stall_best = d
            self._stall_last_progress = self.tick_index + 1

        record = TickRecord(
            t=now,
            pair=self.pair,
            sensed=sensed,
            implicit=ii,
            situation=situation,
            command=command,
            route=self.world.route,
            target=target,
            f_h_c=f_h_c,
        )
        self.t = now + cfg.dt
        self.tick_index += 1
        return record

    def _vel_vec(self) -> Vec2:
        return unit_from_angle(self.pair.robot_heading) * self.pair.robot_vel.v

    def _view(self, f_env_norm: Vec2 | None = None,
              target: GoalSpec | None = None) -> PolicyView:
        return PolicyView(
            t=self.t,
            pair=self.pair,
            scenario=self.scenario,
            route=self.world.route,
            target=target,
            f_env_norm=f_env_norm,
            speed=abs(self.pair.robot_vel.v),
        )

    # -- future projection ---------------------------------------------------

    def _project(self, snap: dict, f_h_c: Vec2) -> tuple[tuple[str, tuple[Vec2, ...]], ...]:
        horizon_ticks = max(1, int(round(self.config.projection_horizon / self.config.dt)))
        variants: list[tuple[str, list[ExplicitIntentionEvent]]] = [("baseline", [])]
        for event in sorted(self.events, key=lambda e: e.event_id):
            variants.append((event.event_id, [event]))
        out = []
        for intention_id, events in variants:
            clone = self._fork_from(snap, events, f_h_c)
            traj: list[Vec2] = []
            for _ in range(horizon_ticks):
                if clone.outcome is not None:
                    break
                clone.step()
                traj.append(clone.pair.frame_c_pos)
            out.append((intention_id, tuple(traj)))
        return tuple(out)

    def project_futures(self, horizon: float, held_force_c: Vec2 | None = None
                        ) -> tuple[tuple[str, tuple[Vec2, ...]], ...]:
        """Deterministic closed-loop rollouts from the current state: one per world
        variant (no intentions, plus each live intention alone), holding the human
        force constant at the object frame."""
        ticks = max(1, int(round(horizon / self.config.dt)))
        held = held_force_c if held_force_c is not None else ZERO
        snap = self._entry_snapshot()
        variants: list[tuple[str, list[ExplicitIntentionEvent]]] = [("baseline", [])]
        for event in sorted(self.events, key=lambda e: e.event_id):
            variants.append((event.event_id, [event]))
        out = []
        for intention_id, events in variants:
            clone = self._fork_from(snap, events, held)
            traj: list[Vec2] = []
            for _ in range(ticks):
                if clone.outcome is not None:
                    break
                clone.step()
                traj.append(clone.pair.frame_c_pos)
            out.append((intention_id, tuple(traj)))
        return tuple(out)


class _HeldForce:
    """Internal rollout policy: a constant force at the object frame, no buttons."""

    def __init__(self, force_c: Vec2):
        self.force_c = force_c

    def buttons(self, view: PolicyView) -> list[tuple[str, str]]:
        return []

    def force(self, view: PolicyView) -> PolicyForce:
        return PolicyForce(self.force_c, in_frame_c=True)


def run_episode(
    scenario: Scenario,
    policy=SCENARIO_POLICY,
    max_t: float | None = None,
    seed: int = 0,
    config: SimConfig | None = None,
    record_projections: bool = True,
) -> tuple[str, list[TickRecord]]:
    """Step until the goal is reached, the bar collides, or time runs out."""
    sim = Simulation(scenario, policy, seed, config, record_projections)
    horizon = max_t if max_t is not None else sim.config.max_time
    n_ticks = math.ceil(horizon / sim.config.dt)
    trace: list[TickRecord] = []
    for _ in range(n_ticks):
        trace.append(sim.step())
        if sim.outcome is not None:
            break
    return sim.outcome or TIMEOUT, trace


# -- metrics -----------------------------------------------------------------


def _role_of(record) -> str:
    if isinstance(record, TickRecord):
        return record.situation.human_role.value.value
    return record["situation"]["human_role"]


def _force_of(record) -> tuple[float, float]:
    if isinstance(record, TickRecord):
        return record.t, record.f_h_c.norm()
    fx, fy = record["f_h_c"]
    return record["t"], math.hypot(fx, fy)


def role_histogram(trace) -> dict[str, float]:
    """Percentage of ticks spent in each human role; percentages sum to 100."""
    if not trace:
        raise ValueError("empty trace")
    counts = {"master": 0, "slave": 0, "collaborative": 0, "neutral": 0, "adversarial": 0}
    for record in trace:
        counts[_role_of(record)] += 1
    n = len(trace)
    return {role: 100.0 * c / n for role, c in counts.items()}


def force_series(trace) -> list[tuple[float, float]]:
    """Per-tick magnitude of the human force expressed at the object frame."""
    if not trace:
        raise ValueError("empty trace")
    return [_force_of(record) for record in trace]


# -- trace files ---------------------------------------------------------------


def write_trace(
    path: str | Path,
    trace: list[TickRecord],
    config: SimConfig,
    seed: int,
    scenario_name: str,
    outcome: str,
) -> None:
    """One JSON object per line: a header with the config hash and seed, then one
    line per tick."""
    header = {
        "config_hash": config.config_hash(),
        "seed": seed,
        "scenario": scenario_name,
        "outcome": outcome,
        "ticks": len(trace),
    }
    lines = [json.dumps(header, sort_keys=True, separators=(",", ":"))]
    lines.extend(dump_record_line(r) for r in trace)
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path: str | Path) -> tuple[dict, list[dict]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError("empty trace file")
    header = json.loads(lines[0])
    return header, [json.loads(line) for line in lines[1:]]
