"""Global route planning: A* over an inflated occupancy grid, string-pulled into
corner waypoints, with line-of-sight checks for waypoint advancement."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from heapq import heappop, heappush

import numpy as np

from .force_field import Obstacle
from .geometry import Vec2

SQRT2 = math.sqrt(2.0)


class NoPathError(Exception):
    """The goal is unreachable on the inflated grid."""


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """Axis-aligned grid anchored at the arena origin. blocked has shape
    (height, width); cell (ix, iy) spans [ix*res, (ix+1)*res) x [iy*res, ...)."""

    resolution: float
    width: int
    height: int
    blocked: np.ndarray
    inflation_radius: float = 0.2

    def __post_init__(self) -> None:
        if self.resolution <= 0:
            raise ValueError("grid resolution must be positive")
        if self.blocked.shape != (self.height, self.width):
            raise ValueError("blocked array shape does not match width/height")

    @staticmethod
    def empty(width_m: float, height_m: float, resolution: float = 0.1,
              inflation_radius: float = 0.2) -> OccupancyGrid:
        w = int(round(width_m / resolution))
        h = int(round(height_m / resolution))
        return OccupancyGrid(resolution, w, h, np.zeros((h, w), dtype=bool),
                             inflation_radius)

    def cell_of(self, p: Vec2) -> tuple[int, int]:
        ix = int(p.x / self.resolution)
        iy = int(p.y / self.resolution)
        return min(max(ix, 0), self.width - 1), min(max(iy, 0), self.height - 1)

    def center_of(self, ix: int, iy: int) -> Vec2:
        return Vec2((ix + 0.5) * self.resolution, (iy + 0.5) * self.resolution)

    def in_bounds(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height

    def is_blocked(self, ix: int, iy: int) -> bool:
        if not self.in_bounds(ix, iy):
            return True
        return bool(self.blocked[iy, ix])

    def with_obstacles(self, obstacles: list[Obstacle] | tuple[Obstacle, ...]) -> OccupancyGrid:
        """Copy with the polygons rasterized in (cell centers inside, plus cells
        whose center lies within half a cell of the boundary)."""
        if not obstacles:
            return self
        blocked = self.blocked.copy()
        margin = self.resolution * 0.5
        for obstacle in obstacles:
            xs = [v.x for v in obstacle.vertices]
            ys = [v.y for v in obstacle.vertices]
            ix0 = max(0, int((min(xs) - margin) / self.resolution) - 1)
            ix1 = min(self.width - 1, int((max(xs) + margin) / self.resolution) + 1)
            iy0 = max(0, int((min(ys) - margin) / self.resolution) - 1)
            iy1 = min(self.height - 1, int((max(ys) + margin) / self.resolution) + 1)
            for iy in range(iy0, iy1 + 1):
                for ix in range(ix0, ix1 + 1):
                    c = self.center_of(ix, iy)
                    if obstacle.contains(c):
                        blocked[iy, ix] = True
                    else:
                        _, d = obstacle.nearest_boundary_point(c)
                        if d <= margin:
                            blocked[iy, ix] = True
        return replace(self, blocked=blocked)

    def inflated(self) -> OccupancyGrid:
        """Dilate blocked cells by the inflation radius (Euclidean, cell centers)."""
        r_cells = int(math.ceil(self.inflation_radius / self.resolution))
        if r_cells == 0 or not self.blocked.any():
            return self
        offsets = [
            (dx, dy)
            for dx in range(-r_cells, r_cells + 1)
            for dy in range(-r_cells, r_cells + 1)
            if math.hypot(dx, dy) * self.resolution <= self.inflation_radius + 1e-12
        ]
        out = np.zeros_like(self.blocked)
        ys, xs = np.nonzero(self.blocked)
        for dx, dy in offsets:
            nx = xs + dx
            ny = ys + dy
            keep = (nx >= 0) & (nx < self.width) & (ny >= 0) & (ny < self.height)
            out[ny[keep], nx[keep]] = True
        return replace(self, blocked=out)

    def line_of_sight(self, a: Vec2, b: Vec2) -> bool:
        """Supercover traversal from a to b: every cell the segment passes through
        must be free. Exact corner crossings check both adjacent cells."""
        for ix, iy in traversed_cells(a, b, self.resolution):
            if self.is_blocked(ix, iy):
                return False
        return True


def traversed_cells(a: Vec2, b: Vec2, resolution: float):
    """Yield (ix, iy) for every cell the segment ab touches, conservatively
    including both side cells when the segment crosses a grid corner."""
    ax, ay = a.x / resolution, a.y / resolution
    bx, by = b.x / resolution, b.y / resolution
    dx = bx - ax
    dy = by - ay
    # collect parametric boundary crossings
    ts = [0.0, 1.0]
    if dx != 0.0:
        step = 1 if dx > 0 else -1
        k = math.floor(ax) + (1 if step > 0 else 0)
        while (k - ax) / dx <= 1.0 and (k - ax) / dx >= 0.0:
            ts.append((k - ax) / dx)
            k += step
            if abs(k - ax) > abs(dx) + 2:
                break
    if dy != 0.0:
        step = 1 if dy > 0 else -1
        k = math.floor(ay) + (1 if step > 0 else 0)
        while (k - ay) / dy <= 1.0 and (k - ay) / dy >= 0.0:
            ts.append((k - ay) / dy)
            k += step
            if abs(k - ay) > abs(dy) + 2:
                break
    ts = sorted(set(min(1.0, max(0.0, t)) for t in ts))
    eps = 1e-12
    seen: set[tuple[int, int]] = set()
    for i in range(len(ts) - 1):
        t_mid = (ts[i] + ts[i + 1]) / 2.0
        px = ax + dx * t_mid
        py = ay + dy * t_mid
        cell = (int(math.floor(px)), int(math.floor(py)))
        if cell not in seen:
            seen.add(cell)
            yield cell
    # corner crossings: if a boundary time hits both an x and a y line, the
    # midpoint walk skips the two side cells; include them
    for t in ts[1:-1]:
        px = ax + dx * t
        py = ay + dy * t
        on_x = abs(px - round(px)) < eps
        on_y = abs(py - round(py)) < eps
        if on_x and on_y:
            cx, cy = int(round(px)), int(round(py))
            for cell in ((cx - 1, cy), (cx, cy - 1), (cx - 1, cy - 1), (cx, cy)):
                if cell not in seen:
                    seen.add(cell)
                    yield cell


@dataclass(frozen=True)
class Route:
    """String-pulled waypoint sequence; the last waypoint is the task goal."""

    waypoints: tuple[Vec2, ...]
    current_index: int = 0

    def __post_init__(self) -> None:
        if not self.waypoints:
            raise ValueError("route needs at least one waypoint")
        if not 0 <= self.current_index < len(self.waypoints):
            raise ValueError("current_index out of range")

    def current(self) -> Vec2:
        return self.waypoints[self.current_index]

    def is_last(self) -> bool:
        return self.current_index == len(self.waypoints) - 1

    def advanced(self) -> Route:
        if self.is_last():
            return self
        return Route(self.waypoints, self.current_index + 1)

    def remaining(self) -> tuple[Vec2, ...]:
        return self.waypoints[self.current_index:]


def _astar(grid: OccupancyGrid, start: tuple[int, int], goal: tuple[int, int]) -> list[tuple[int, int]]:
    """Optimal 8-connected grid path; diagonal moves may not cut blocked corners."""
    if grid.is_blocked(*start) or grid.is_blocked(*goal):
        raise NoPathError("start or goal cell blocked on the inflated grid")

    def heuristic(c: tuple[int, int]) -> float:
        ddx = abs(c[0] - goal[0])
        ddy = abs(c[1] - goal[1])
        return (max(ddx, ddy) - min(ddx, ddy)) + SQRT2 * min(ddx, ddy)

    counter = 0
    open_heap: list[tuple[float, int, tuple[int, int]]] = [(heuristic(start), counter, start)]
    g: dict[tuple[int, int], float] = {start: 0.0}
    came: dict[tuple[int, int], tuple[int, int]] = {}
    closed: set[tuple[int, int]] = set()
    while open_heap:
        _, _, cur = heappop(open_heap)
        if cur in closed:
            continue
        if cur == goal:
            path = [cur]
            while cur in came:
                cur = came[cur]
                path.append(cur)
            path.reverse()
            return path
        closed.add(cur)
        cx, cy = cur
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nx, ny = cx + dx, cy + dy
                if grid.is_blocked(nx, ny):
                    continue
                if dx != 0 and dy != 0:
                    if grid.is_blocked(cx + dx, cy) or grid.is_blocked(cx, cy + dy):
                        continue
                step = SQRT2 if dx != 0 and dy != 0 else 1.0
                ng = g[cur] + step
                nxt = (nx, ny)
                if nxt not in g or ng < g[nxt] - 1e-12:
                    g[nxt] = ng
                    came[nxt] = cur
                    counter += 1
                    heappush(open_heap, (ng + heuristic(nxt), counter, nxt))
    raise NoPathError("goal unreachable")


def grid_path_cost(path: list[tuple[int, int]], resolution: float) -> float:
    cost = 0.0
    for i in range(len(path) - 1):
        dx = abs(path[i + 1][0] - path[i][0])
        dy = abs(path[i + 1][1] - path[i][1])
        cost += (SQRT2 if dx and dy else 1.0) * resolution
    return cost


def _string_pull(points: list[Vec2], grid: OccupancyGrid) -> list[Vec2]:
    """Greedy farthest-visible-point reduction; output excludes the start point."""
    out: list[Vec2] = []
    i = 0
    last = len(points) - 1
    while i < last:
        j = last
        while j > i + 1 and not grid.line_of_sight(points[i], points[j]):
            j -= 1
        out.append(points[j])
        i = j
    return out


def _offset_corners(waypoints: list[Vec2], path_points: list[Vec2],
                    grid: OccupancyGrid, clearance: float) -> list[Vec2]:
    """Nudge intermediate corners away from the turn's inside when line of sight to
    both neighbors survives; keeps waypoints out of the repulsion wells that sit at
    string-pulled corners."""
    if clearance <= 0 or len(waypoints) < 2:
        return waypoints
    adjusted = list(waypoints)
    for k in range(len(adjusted) - 1):  # never move the final goal waypoint
        prev_pt = path_points[0] if k == 0 else adjusted[k - 1]
        nxt_pt = adjusted[k + 1]
        wp = adjusted[k]
        d_in = (wp - prev_pt).normalized()
        d_out = (nxt_pt - wp).normalized()
        bisector = (d_in - d_out).normalized()
        if bisector == Vec2(0.0, 0.0):
            continue
        candidate = wp + bisector * clearance
        if grid.line_of_sight(prev_pt, candidate) and grid.line_of_sight(candidate, nxt_pt):
            adjusted[k] = candidate
    return adjusted


def plan_route(
    grid: OccupancyGrid,
    start: Vec2,
    goal: Vec2,
    virtual_obstacles: list[Obstacle] | tuple[Obstacle, ...] = (),
    corner_clearance: float = 0.3,
) -> Route:
    """Collision-free waypoint route from start to goal over the inflated grid with
    the given virtual obstacles rasterized in. Raises NoPathError when unreachable."""
    work = grid.with_obstacles(list(virtual_obstacles))
    inflated = work.inflated()
    start_cell = inflated.cell_of(start)
    goal_cell = inflated.cell_of(goal)
    cells = _astar(inflated, start_cell, goal_cell)
    points = [start] + [inflated.center_of(ix, iy) for ix, iy in cells[1:-1]] + [goal]
    waypoints = _string_pull(points, inflated)
    if not waypoints:
        waypoints = [goal]
    if waypoints[-1] != goal:
        waypoints.append(goal)
    waypoints = _offset_corners(waypoints, points, inflated, corner_clearance)
    return Route(tuple(waypoints))


def advance_waypoint(
    route: Route,
    frame_c_pos: Vec2,
    reach_radius: float,
    grid: OccupancyGrid,
) -> tuple[Route, bool]:
    """Advance to the next waypoint when the current one was reached and the next
    is physically visible. Returns (route, replan_needed); replan is requested when
    the reached waypoint's successor is occluded (e.g. by a new virtual obstacle)."""
    if (frame_c_pos - route.current()).norm() >= reach_radius:
        return route, False
    if route.is_last():
        return route, False
    nxt = route.waypoints[route.current_index + 1]
    if grid.line_of_sight(frame_c_pos, nxt):
        return route.advanced(), False
    return route, True
