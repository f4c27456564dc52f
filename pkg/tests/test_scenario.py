"""Scenario file schema tests: run-length grid coding, dict round trips, bundled
scenario integrity, and parameter overrides."""

import json
import random

import numpy as np
import pytest

from carrysim.config import SimConfig
from carrysim.engine import Simulation
from carrysim.scenario import (
    BUNDLED,
    BUILDERS,
    Scenario,
    load_scenario,
    rle_decode_row,
    rle_encode_row,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)


class TestRLE:
    def test_roundtrip_random_rows(self):
        rng = random.Random(4)
        for _ in range(100):
            width = rng.randint(1, 120)
            row = np.array([rng.random() < 0.3 for _ in range(width)])
            decoded = rle_decode_row(rle_encode_row(row), width)
            assert (decoded == row).all()

    def test_wrong_width_rejected(self):
        with pytest.raises(ValueError):
            rle_decode_row([[0, 5]], 10)


class TestRoundTrip:
    @pytest.mark.parametrize("name", BUNDLED)
    def test_dict_roundtrip(self, name):
        s = load_scenario(name)
        again = scenario_from_dict(scenario_to_dict(s))
        assert again.name == s.name
        assert again.arena == s.arena
        assert (again.grid.blocked == s.grid.blocked).all()
        assert again.goal == s.goal
        assert again.robot_start == s.robot_start
        assert again.forbidden_segments == s.forbidden_segments
        assert again.narrow_passages == s.narrow_passages
        assert again.policy_spec == s.policy_spec
        assert again.overrides == s.overrides
        assert len(again.obstacles) == len(s.obstacles)

    def test_file_roundtrip(self, tmp_path):
        s = load_scenario("narrow_passage")
        path = tmp_path / "scn.json"
        save_scenario(s, path)
        again = load_scenario(path)
        assert again.name == s.name
        assert (again.grid.blocked == s.grid.blocked).all()

    def test_unknown_name_raises(self):
        with pytest.raises(FileNotFoundError):
            load_scenario("no_such_scenario")


class TestBundled:
    def test_builders_match_shipped_files(self):
        # the JSON files in the package must equal what the builders produce
        for name, builder in BUILDERS.items():
            shipped = scenario_to_dict(load_scenario(name))
            built = scenario_to_dict(builder())
            assert json.dumps(shipped, sort_keys=True) == json.dumps(built, sort_keys=True), name

    def test_grids_cover_obstacles(self):
        for name in BUNDLED:
            s = load_scenario(name)
            for obstacle in s.obstacles:
                c = obstacle.centroid
                ix, iy = s.grid.cell_of(c)
                assert s.grid.is_blocked(ix, iy), name

    def test_arena_dimensions(self):
        for name in BUNDLED:
            s = load_scenario(name)
            assert s.arena == (7.8, 5.7)
            assert s.grid.width == 78 and s.grid.height == 57


class TestOverrides:
    def test_scenario_params_reach_config(self):
        s = load_scenario("narrow_passage")
        sim = Simulation(s, policy=None, record_projections=False)
        assert sim.config.force.d_max == 1.0
        assert sim.config.reach_radius == 0.45
        assert sim.config.corner_clearance == 0.7

    def test_unknown_override_rejected(self):
        with pytest.raises(ValueError):
            SimConfig().with_overrides({"bogus_knob": 1})
        with pytest.raises(ValueError):
            SimConfig().with_overrides({"force": {"bogus": 1}})

    def test_config_hash_tracks_overrides(self):
        a = SimConfig()
        b = a.with_overrides({"force": {"d_max": 1.0}})
        assert a.config_hash() != b.config_hash()
        assert a.config_hash() == SimConfig().config_hash()
