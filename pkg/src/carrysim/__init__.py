"""carrysim: deterministic 2D simulation of a human-robot pair carrying a rigid
object, driven by a shared force model with implicit and explicit intention."""

from .config import SimConfig
from .engine import LiveInput, Simulation, TickRecord, force_series, role_histogram, run_episode
from .force_field import ForceParams, GoalSpec, Obstacle
from .geometry import Vec2
from .scenario import Scenario, load_scenario

__all__ = [
    "ForceParams",
    "GoalSpec",
    "LiveInput",
    "Obstacle",
    "Scenario",
    "SimConfig",
    "Simulation",
    "TickRecord",
    "Vec2",
    "force_series",
    "load_scenario",
    "role_histogram",
    "run_episode",
]

__version__ = "0.1.0"
