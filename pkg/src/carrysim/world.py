"""World model and pair state: the perceived environment and the physical
configuration of the robot-bar-human assembly."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .controller import VelocityCommand
from .force_field import GoalSpec, Obstacle
from .geometry import Vec2, unit_from_angle
from .planner import OccupancyGrid, Route


@dataclass(frozen=True)
class WorldModel:
    """Static map plus the products of live explicit-intention events. The static
    part never changes during an episode; virtual obstacles, the subgoal, the
    suppression set and the slave flag are re-derived from live events each tick."""

    grid: OccupancyGrid
    obstacles: tuple[Obstacle, ...]
    goal: GoalSpec
    arena: tuple[float, float] = (7.8, 5.7)
    route: Route | None = None
    virtual_obstacles: tuple[Obstacle, ...] = ()
    subgoal: GoalSpec | None = None
    subgoal_event: str | None = None
    suppressed: tuple[int, ...] = ()
    robot_slave: bool = False
    needs_replan: bool = False

    def force_obstacles(self) -> tuple[Obstacle, ...]:
        """Obstacles the repulsive field sees: non-suppressed statics plus virtuals."""
        statics = tuple(
            o for i, o in enumerate(self.obstacles) if i not in self.suppressed
        )
        return statics + self.virtual_obstacles

    def planning_grid(self) -> OccupancyGrid:
        """Static grid with live virtual obstacles rasterized in (not inflated)."""
        return self.grid.with_obstacles(self.virtual_obstacles)

    def with_route(self, route: Route) -> WorldModel:
        return replace(self, route=route, needs_replan=False)

    def current_target(self) -> GoalSpec:
        """The partial goal attraction pulls toward this tick."""
        if self.subgoal is not None:
            return self.subgoal
        if self.route is not None:
            wp = self.route.current()
            if self.route.is_last():
                return GoalSpec(wp, "task_goal")
            return GoalSpec(wp, "waypoint")
        return self.goal


@dataclass(frozen=True)
class PairState:
    """Robot pose and velocity plus the positions the rigid bar dictates: the
    human grasps the far end, frame C sits a fixed fraction along the bar."""

    robot_pos: Vec2
    robot_heading: float
    robot_vel: VelocityCommand
    human_pos: Vec2
    frame_c_pos: Vec2
    frame_c_heading: float

    @staticmethod
    def from_robot(robot_pos: Vec2, heading: float, bar_length: float,
                   frame_c_fraction: float = 0.5,
                   vel: VelocityCommand = VelocityCommand(0.0, 0.0)) -> PairState:
        u = unit_from_angle(heading)
        human = robot_pos - u * bar_length
        c = robot_pos + (human - robot_pos) * frame_c_fraction
        return PairState(robot_pos, heading, vel, human, c, heading)

    def bar_segment(self) -> tuple[Vec2, Vec2]:
        return self.robot_pos, self.human_pos
