"""Simulation configuration: every tunable in one serializable place so a config
hash can pin a run."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace

from .controller import PDGains, VelocityLimits
from .force_field import ForceParams
from .situation import MixWeights, RoleThresholds


@dataclass(frozen=True)
class SimConfig:
    force: ForceParams = field(default_factory=ForceParams)
    weights: MixWeights = field(default_factory=MixWeights)
    gains: PDGains = field(default_factory=PDGains)
    limits: VelocityLimits = field(default_factory=VelocityLimits)
    roles: RoleThresholds = field(default_factory=RoleThresholds)
    dt: float = 0.05
    max_time: float = 120.0
    bar_length: float = 1.5
    frame_c_fraction: float = 0.5
    m_share: float = 1.0
    sensor_noise_sigma: float = 0.0
    min_force: float = 2.0
    f_human_max: float = 30.0
    reach_radius: float = 0.3
    resolution: float = 0.1
    inflation_radius: float = 0.2
    corner_clearance: float = 0.3
    plant_tau: float = 0.2
    projection_horizon: float = 0.5
    projection_stride: int = 5
    stall_window: float = 1.5
    stall_eps: float = 0.02
    narrow_passage_ttl: float = 30.0

    def canonical(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_canonical(doc: dict) -> "SimConfig":
        nested = {
            "force": ForceParams,
            "weights": MixWeights,
            "gains": PDGains,
            "limits": VelocityLimits,
            "roles": RoleThresholds,
        }
        kwargs = {}
        for key, value in doc.items():
            if key in nested:
                kwargs[key] = nested[key](**value)
            else:
                kwargs[key] = value
        return SimConfig(**kwargs)

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def with_overrides(self, overrides: dict) -> SimConfig:
        """Apply a (possibly nested) override mapping; unknown keys are rejected."""
        cfg = self
        nested = {
            "force": ForceParams,
            "weights": MixWeights,
            "gains": PDGains,
            "limits": VelocityLimits,
            "roles": RoleThresholds,
        }
        for key, value in overrides.items():
            if key in nested:
                if not isinstance(value, dict):
                    raise ValueError(f"override for {key!r} must be a mapping")
                current = getattr(cfg, key)
                for sub, sub_value in value.items():
                    if not hasattr(current, sub):
                        raise ValueError(f"unknown config key {key}.{sub}")
                    current = replace(current, **{sub: sub_value})
                cfg = replace(cfg, **{key: current})
            else:
                if not hasattr(cfg, key):
                    raise ValueError(f"unknown config key {key!r}")
                cfg = replace(cfg, **{key: value})
        return cfg
