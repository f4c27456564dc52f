"""Planner tests: string-pulled routes against an independent Dijkstra oracle,
line-of-sight validity, and waypoint advancement."""

import heapq
import math
import random

import numpy as np
import pytest

from carrysim.force_field import Obstacle
from carrysim.geometry import Vec2
from carrysim.planner import (
    NoPathError,
    OccupancyGrid,
    Route,
    SQRT2,
    advance_waypoint,
    grid_path_cost,
    plan_route,
    _astar,
)

RES = 0.1


def dijkstra_cost(grid: OccupancyGrid, start, goal):
    """Independent shortest-path oracle: naive Dijkstra over the same move set
    (8-connected, diagonals may not cut blocked corners)."""
    if grid.is_blocked(*start) or grid.is_blocked(*goal):
        return None
    dist = {start: 0.0}
    heap = [(0.0, start)]
    done = set()
    while heap:
        d, cur = heapq.heappop(heap)
        if cur in done:
            continue
        if cur == goal:
            return d
        done.add(cur)
        cx, cy = cur
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nxt = (cx + dx, cy + dy)
                if grid.is_blocked(*nxt):
                    continue
                if dx != 0 and dy != 0 and (
                        grid.is_blocked(cx + dx, cy) or grid.is_blocked(cx, cy + dy)):
                    continue
                step = SQRT2 if dx and dy else 1.0
                nd = d + step
                if nd < dist.get(nxt, math.inf):
                    dist[nxt] = nd
                    heapq.heappush(heap, (nd, nxt))
    return None


def random_grid(rng: random.Random, size: int = 30, p_block: float = 0.25) -> OccupancyGrid:
    blocked = np.zeros((size, size), dtype=bool)
    for y in range(size):
        for x in range(size):
            if rng.random() < p_block:
                blocked[y, x] = True
    return OccupancyGrid(RES, size, size, blocked, inflation_radius=0.0)


def free_cell(rng: random.Random, grid: OccupancyGrid):
    while True:
        c = (rng.randrange(grid.width), rng.randrange(grid.height))
        if not grid.is_blocked(*c):
            return c


class TestPlanRoute:
    def test_empty_grid_straight_line(self):
        grid = OccupancyGrid.empty(6.0, 6.0, RES)
        route = plan_route(grid, Vec2(0.05, 0.05), Vec2(5.0, 0.05))
        assert route.waypoints == (Vec2(5.0, 0.05),)

    def test_goal_in_blocked_cell_raises(self):
        grid = OccupancyGrid.empty(3.0, 3.0, RES)
        grid.blocked[10, 10] = True
        with pytest.raises(NoPathError):
            plan_route(grid, Vec2(0.1, 0.1), Vec2(1.05, 1.05))

    def test_unreachable_goal_raises(self):
        grid = OccupancyGrid.empty(3.0, 3.0, RES, inflation_radius=0.0)
        grid.blocked[:, 15] = True  # full vertical wall
        with pytest.raises(NoPathError):
            plan_route(grid, Vec2(0.2, 0.2), Vec2(2.8, 2.8))

    def test_detour_matches_oracle_and_los(self):
        rng = random.Random(2024)
        checked = 0
        while checked < 20:
            grid = random_grid(rng)
            start = free_cell(rng, grid)
            goal = free_cell(rng, grid)
            oracle = dijkstra_cost(grid, start, goal)
            if oracle is None or oracle < 5:
                continue
            checked += 1
            cells = _astar(grid, start, goal)
            cost = grid_path_cost(cells, 1.0)
            assert abs(cost - oracle) <= SQRT2 + 1e-9

            route = plan_route(grid, grid.center_of(*start), grid.center_of(*goal),
                               corner_clearance=0.0)
            pts = [grid.center_of(*start), *route.waypoints]
            inflated = grid.inflated()
            for a, b in zip(pts, pts[1:]):
                assert inflated.line_of_sight(a, b)

    def test_virtual_obstacle_never_shortens(self):
        rng = random.Random(5)
        grid = OccupancyGrid.empty(4.0, 4.0, RES, inflation_radius=0.1)
        start, goal = Vec2(0.3, 2.0), Vec2(3.7, 2.0)
        base = plan_route(grid, start, goal)
        blocker = Obstacle(vertices=(
            Vec2(1.8, 1.2), Vec2(2.2, 1.2), Vec2(2.2, 2.8), Vec2(1.8, 2.8)),
            virtual=True)
        detour = plan_route(grid, start, goal, [blocker])

        def length(route, origin):
            pts = [origin, *route.waypoints]
            return sum((b - a).norm() for a, b in zip(pts, pts[1:]))

        assert length(detour, start) >= length(base, start) - 1e-9

    def test_last_waypoint_is_goal(self):
        grid = OccupancyGrid.empty(4.0, 4.0, RES)
        goal = Vec2(3.33, 1.21)
        route = plan_route(grid, Vec2(0.4, 0.4), goal)
        assert route.waypoints[-1] == goal

    def test_corner_clearance_keeps_sight_lines(self):
        # offset corners must still satisfy the consecutive line-of-sight invariant
        grid = OccupancyGrid.empty(7.8, 5.7, RES, inflation_radius=0.2)
        wall = Obstacle(vertices=(
            Vec2(2.0, 3.0), Vec2(6.4, 3.0), Vec2(6.4, 3.4), Vec2(2.0, 3.4)))
        work = grid.with_obstacles([wall])
        start, goal = Vec2(1.6, 1.0), Vec2(4.0, 4.9)
        for clearance in (0.0, 0.3, 0.7):
            route = plan_route(work, start, goal, corner_clearance=clearance)
            pts = [start, *route.waypoints]
            inflated = work.inflated()
            for a, b in zip(pts, pts[1:]):
                assert inflated.line_of_sight(a, b), clearance


class TestAdvanceWaypoint:
    def _setup(self):
        grid = OccupancyGrid.empty(5.0, 5.0, RES, inflation_radius=0.1)
        route = Route((Vec2(1.0, 1.0), Vec2(3.0, 1.0)))
        return grid, route

    def test_on_waypoint_with_sight_advances(self):
        grid, route = self._setup()
        out, replan = advance_waypoint(route, Vec2(1.0, 1.0), 0.3, grid)
        assert out.current_index == 1
        assert not replan

    def test_far_away_unchanged(self):
        grid, route = self._setup()
        out, replan = advance_waypoint(route, Vec2(4.9, 4.9), 0.3, grid)
        assert out is route
        assert not replan

    def test_blocked_next_raises_replan_flag(self):
        grid, route = self._setup()
        wall = Obstacle(vertices=(
            Vec2(1.9, 0.0), Vec2(2.1, 0.0), Vec2(2.1, 5.0), Vec2(1.9, 5.0)),
            virtual=True)
        blocked = grid.with_obstacles([wall])
        out, replan = advance_waypoint(route, Vec2(1.0, 1.0), 0.3, blocked)
        assert out.current_index == 0
        assert replan

    def test_saturates_at_last(self):
        grid, route = self._setup()
        last = route.advanced()
        out, replan = advance_waypoint(last, Vec2(3.0, 1.0), 0.3, grid)
        assert out.current_index == 1
        assert not replan


class TestGridBasics:
    def test_cell_roundtrip(self):
        grid = OccupancyGrid.empty(7.8, 5.7, RES)
        assert grid.width == 78 and grid.height == 57
        ix, iy = grid.cell_of(Vec2(3.85, 2.84))
        c = grid.center_of(ix, iy)
        assert abs(c.x - 3.85) <= RES and abs(c.y - 2.84) <= RES

    def test_inflation_grows_blocked_set(self):
        grid = OccupancyGrid.empty(2.0, 2.0, RES, inflation_radius=0.2)
        grid.blocked[10, 10] = True
        fat = grid.inflated()
        assert fat.blocked.sum() > 1
        assert fat.is_blocked(10, 10) and fat.is_blocked(12, 10)
        assert not fat.is_blocked(13, 10)

    def test_line_of_sight_blocked_by_wall(self):
        grid = OccupancyGrid.empty(3.0, 3.0, RES)
        grid.blocked[:, 15] = True
        assert not grid.line_of_sight(Vec2(0.5, 1.5), Vec2(2.5, 1.5))
        assert grid.line_of_sight(Vec2(0.5, 1.5), Vec2(1.0, 1.5))

    def test_line_of_sight_conservative_at_corners(self):
        # two blocked cells sharing only a corner must not let a diagonal through
        grid = OccupancyGrid.empty(1.0, 1.0, RES)
        grid.blocked[5, 4] = True
        grid.blocked[4, 5] = True
        a = grid.center_of(4, 4)
        b = grid.center_of(5, 5)
        assert not grid.line_of_sight(a, b)
