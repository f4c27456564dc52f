"""Platform PD controller: desired force at the object frame in, saturated linear
and angular velocity commands out. The controller never touches world state."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Rotation2D, Vec2


@dataclass(frozen=True)
class PDGains:
    k_p: float = -2.0
    k_d: float = -0.35


@dataclass(frozen=True)
class VelocityLimits:
    v_max: float = 0.5
    omega_max: float = 1.0


@dataclass(frozen=True)
class VelocityCommand:
    v: float
    omega: float


def to_robot_frame(f_des_c: Vec2, robot_heading: float) -> Vec2:
    """World-frame force into the robot body frame (x forward, y left)."""
    return Rotation2D(-robot_heading).apply(f_des_c)


def pd_step(
    f_des_body: Vec2,
    prev_error: Vec2,
    dt: float,
    gains: PDGains = PDGains(),
    limits: VelocityLimits = VelocityLimits(),
) -> tuple[VelocityCommand, Vec2]:
    """One PD update with set-point 0 and the desired force as the perturbation:
    e = -F, u = k_p*e + k_d*(e - e_prev)/dt. The body-frame x error drives the
    linear channel and the y error the angular one. Returns the saturated command
    and the error to remember."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    e = Vec2(-f_des_body.x, -f_des_body.y)
    de = (e - prev_error) / dt
    v = gains.k_p * e.x + gains.k_d * de.x
    omega = gains.k_p * e.y + gains.k_d * de.y
    v = min(limits.v_max, max(-limits.v_max, v))
    omega = min(limits.omega_max, max(-limits.omega_max, omega))
    return VelocityCommand(v, omega), e
