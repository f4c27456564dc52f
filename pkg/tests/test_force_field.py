"""Force-field unit tests: frozen scalar evaluations plus randomized property
checks with a brute-force recomputation oracle."""

import random

import pytest

from carrysim.force_field import (
    ForceParams,
    GoalSpec,
    Obstacle,
    attractive_force,
    environment_force,
    normalize_environment_force,
    repulsive_force,
)
from carrysim.geometry import Vec2, ZERO


def square(cx: float, cy: float, half: float = 0.5) -> Obstacle:
    return Obstacle(vertices=(
        Vec2(cx - half, cy - half),
        Vec2(cx + half, cy - half),
        Vec2(cx + half, cy + half),
        Vec2(cx - half, cy + half),
    ))


PARAMS = ForceParams()  # f_max 30, d_max 2.0, d_goal 1.0, w_Rep 0.99, w_Att 1.01


class TestForceParams:
    def test_defaults_valid(self):
        p = ForceParams()
        assert p.f_rep_max == 30.0
        assert p.f_att_max == 30.0

    def test_rejects_weight_constraint_violations(self):
        with pytest.raises(ValueError):
            ForceParams(w_Rep=1.0, w_rep=1.0)
        with pytest.raises(ValueError):
            ForceParams(w_Att=1.0, w_att=1.0)
        with pytest.raises(ValueError):
            ForceParams(w_Rep=1.2)

    def test_rejects_nonpositive(self):
        for field in ("f_max", "d_max", "d_goal"):
            with pytest.raises(ValueError):
                ForceParams(**{field: 0.0})

    def test_derived_maxima(self):
        p = ForceParams(f_max=30.0, w_rep=2.0, w_att=1.5, w_Rep=0.5, w_Att=2.0)
        assert p.f_rep_max == 15.0
        assert p.f_att_max == 20.0


class TestRepulsive:
    def test_zero_at_cutoff(self):
        # agent exactly d_max from the boundary: the strict branch gives zero
        obs = square(0.0, 0.0, half=0.5)
        agent = Vec2(0.5 + 2.0, 0.0)
        assert repulsive_force(agent, obs, PARAMS) == ZERO

    def test_max_at_contact(self):
        obs = square(0.0, 0.0, half=0.5)
        agent = Vec2(0.5, 0.0)  # on the boundary
        f = repulsive_force(agent, obs, PARAMS)
        assert f.norm() == pytest.approx(30.0)

    def test_magnitude_at_one_meter(self):
        # independent evaluation: 30 * exp(-1.0/2.0) = 18.195919791379003
        obs = square(0.0, 0.0, half=0.5)
        agent = Vec2(1.5, 0.0)
        f = repulsive_force(agent, obs, PARAMS)
        assert f.norm() == pytest.approx(18.195919791379003, rel=1e-12)
        assert f.y == pytest.approx(0.0, abs=1e-12)
        assert f.x > 0  # points from the boundary toward the agent

    def test_direction_away_from_nearest_point(self):
        obs = square(0.0, 0.0, half=0.5)
        agent = Vec2(1.0, 1.0)
        f = repulsive_force(agent, obs, PARAMS)
        away = (agent - Vec2(0.5, 0.5)).normalized()
        assert f.normalized().dot(away) == pytest.approx(1.0)

    def test_agent_inside_clamps_to_max(self):
        obs = square(0.0, 0.0, half=1.0)
        f = repulsive_force(Vec2(0.3, 0.0), obs, PARAMS)
        assert f.norm() == pytest.approx(30.0)
        assert f.x > 0  # away from the centroid


class TestAttractive:
    def test_zero_at_goal(self):
        goal = GoalSpec(Vec2(1.0, 1.0))
        assert attractive_force(Vec2(1.0, 1.0), goal, PARAMS) == ZERO

    def test_saturated_beyond_d_goal(self):
        # f_att_max = f_max / w_att = 30 with the default weights
        goal = GoalSpec(Vec2(1.5, 0.0))
        f = attractive_force(Vec2(0.0, 0.0), goal, PARAMS)
        assert f.norm() == pytest.approx(30.0)

    def test_ramp_inside_d_goal(self):
        p = ForceParams(w_att=1.0, w_Att=1.01)
        goal = GoalSpec(Vec2(0.5, 0.0))
        f = attractive_force(Vec2(0.0, 0.0), goal, p)
        assert f.norm() == pytest.approx(30.0 * 0.5 / 1.0)
        assert f.x > 0

    def test_continuous_at_d_goal(self):
        goal = GoalSpec(Vec2(0.0, 0.0))
        just_in = attractive_force(Vec2(1.0 - 1e-9, 0.0), goal, PARAMS)
        just_out = attractive_force(Vec2(1.0 + 1e-9, 0.0), goal, PARAMS)
        assert just_in.norm() == pytest.approx(just_out.norm(), abs=1e-6)


class TestEnvironment:
    def test_pure_attraction(self):
        goal = GoalSpec(Vec2(10.0, 0.0))
        p = ForceParams(f_max=30.0, w_att=1.0, w_Att=1.01)
        f = environment_force(Vec2(0.0, 0.0), [], goal, p)
        assert f.x == pytest.approx(30.0 * 1.01)
        assert f.y == pytest.approx(0.0)

    def test_hand_evaluated_mix(self):
        # one obstacle contributing (-10, 0), goal term (30, 0):
        # 0.99 * -10 + 1.01 * 30 = 20.4
        rep = Vec2(-10.0, 0.0)
        att = Vec2(30.0, 0.0)
        combined = rep * PARAMS.w_Rep + att * PARAMS.w_Att
        assert combined.x == pytest.approx(20.4)
        assert combined.y == 0.0

    def test_goal_reached_no_obstacles(self):
        goal = GoalSpec(Vec2(0.0, 0.0))
        assert environment_force(Vec2(0.0, 0.0), [], goal, PARAMS) == ZERO

    def test_none_goal_drops_attraction(self):
        obs = square(2.0, 0.0, half=0.5)
        with_goal = environment_force(Vec2(0.0, 0.0), [obs], GoalSpec(Vec2(5.0, 0.0)), PARAMS)
        without = environment_force(Vec2(0.0, 0.0), [obs], None, PARAMS)
        assert without.x < 0 < with_goal.x


class TestNormalize:
    def test_division(self):
        out = normalize_environment_force(Vec2(20.4, 0.0), PARAMS)
        assert out.x == pytest.approx(10.2)

    def test_zero(self):
        assert normalize_environment_force(ZERO, PARAMS) == ZERO

    def test_second_division(self):
        out = normalize_environment_force(Vec2(30.3, 0.0), PARAMS)
        assert out.x == pytest.approx(15.15)


class TestProperties:
    """Randomized invariants; the full 1000-case battery lives in the acceptance
    suite, this is the fast regression version."""

    def test_cutoff_exact_and_bounds(self):
        rng = random.Random(42)
        for _ in range(200):
            half = rng.uniform(0.2, 1.0)
            obs = square(rng.uniform(-2, 2), rng.uniform(-2, 2), half)
            p = ForceParams(
                f_max=rng.uniform(10, 50),
                d_max=rng.uniform(0.5, 3.0),
                d_goal=rng.uniform(0.5, 2.0),
                w_Rep=rng.uniform(0.5, 0.99),
                w_Att=rng.uniform(1.01, 1.5),
            )
            agent = Vec2(rng.uniform(-6, 6), rng.uniform(-6, 6))
            f = repulsive_force(agent, obs, p)
            _, d = obs.nearest_boundary_point(agent)
            if d >= p.d_max and not obs.contains(agent):
                assert f == ZERO
            else:
                assert f.norm() <= p.f_rep_max + 1e-9

    def test_repulsion_strictly_decreasing(self):
        rng = random.Random(7)
        obs = square(0.0, 0.0, half=0.5)
        for _ in range(200):
            d1 = rng.uniform(0.01, 1.9)
            d2 = rng.uniform(d1 + 1e-6, 1.999)
            f1 = repulsive_force(Vec2(0.5 + d1, 0.0), obs, PARAMS).norm()
            f2 = repulsive_force(Vec2(0.5 + d2, 0.0), obs, PARAMS).norm()
            assert f1 > f2

    def test_normalized_norm_bounded_by_f_max(self):
        # brute-force recomputation oracle with naive arithmetic
        rng = random.Random(99)
        for _ in range(200):
            p = ForceParams(
                f_max=rng.uniform(10, 40),
                d_max=rng.uniform(0.8, 2.5),
                d_goal=rng.uniform(0.5, 1.5),
                w_Rep=rng.uniform(0.5, 0.99),
                w_Att=rng.uniform(1.01, 1.5),
            )
            obstacles = [
                square(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.2, 0.8))
                for _ in range(rng.randint(0, 4))
            ]
            goal = GoalSpec(Vec2(rng.uniform(-4, 4), rng.uniform(-4, 4)))
            agent = Vec2(rng.uniform(-4, 4), rng.uniform(-4, 4))

            raw = environment_force(agent, obstacles, goal, p)
            out = normalize_environment_force(raw, p)
            assert out.norm() <= p.f_max + 1e-9

            # oracle: recompute the sum long-hand
            reps = [repulsive_force(agent, o, p) for o in obstacles]
            active = [f for f in reps if f != ZERO]
            ox = oy = 0.0
            for f in active:
                ox += f.x / len(active)
                oy += f.y / len(active)
            att = attractive_force(agent, goal, p)
            ex = (p.w_Rep * ox + p.w_Att * att.x) / (p.w_Rep + p.w_Att)
            ey = (p.w_Rep * oy + p.w_Att * att.y) / (p.w_Rep + p.w_Att)
            assert out.x == pytest.approx(ex, abs=1e-9)
            assert out.y == pytest.approx(ey, abs=1e-9)


class TestObstacleValidation:
    def test_needs_three_vertices(self):
        with pytest.raises(ValueError):
            Obstacle(vertices=(Vec2(0, 0), Vec2(1, 0)))

    def test_rejects_self_intersection(self):
        bowtie = (Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1))
        with pytest.raises(ValueError):
            Obstacle(vertices=bowtie)
