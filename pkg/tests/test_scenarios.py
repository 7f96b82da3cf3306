import json
import math
from pathlib import Path

import numpy as np
import pytest

from errors import ScenarioConfigError
from helpers import holds, polyline
from scenarios import (
    BUILTIN_SCENARIOS,
    C1,
    C2,
    Region,
    build_case1,
    build_case2,
    conventional_cost,
    dump_scenario,
    load_scenario,
    obstacle_clearance,
    parameter_counts,
    region_robustness,
    scenario_from_dict,
)
from wtltl import Kind, Trace, parse, robustness, satisfies, to_text

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def _kinds(f):
    yield f.kind
    for child in f.children:
        yield from _kinds(child)


def _minimal(**overrides):
    data = {
        "start": [0.05, 0.05],
        "goal": [0.95, 0.95],
        "regions": [{"name": "G", "center": [0.95, 0.95], "radius": 0.08}],
        "obstacles": [{"name": "O", "center": [0.8, 0.2], "radius": 0.1}],
        "formula": "F in(G) && G clear(O)",
    }
    data.update(overrides)
    return data


# ============================================================================
# GEOMETRY
# ============================================================================

def test_region_robustness_examples():
    disc = Region(name="R", center=(0.0, 0.0), radius=0.5)
    assert region_robustness((0.0, 0.0), disc) == pytest.approx(0.5)
    assert region_robustness((0.5, 0.0), disc) == pytest.approx(0.0)
    assert region_robustness((0.6, 0.8), Region(name="R", center=(0.0, 0.0), radius=0.3)) == pytest.approx(-0.7)


def test_obstacle_clearance_examples():
    obstacle = Region(name="O", center=(1.0, 1.0), radius=0.3)
    assert obstacle_clearance((1.0, 2.0), obstacle) == pytest.approx(0.7)
    assert obstacle_clearance((1.0, 1.0), obstacle) == pytest.approx(-0.3)
    assert obstacle_clearance((1.3, 1.0), obstacle) == pytest.approx(0.0)


def test_region_and_clearance_are_opposite(rng):
    disc = Region(name="R", center=(0.4, 0.2), radius=0.15)
    points = rng.uniform(-1, 1, size=(200, 2))
    np.testing.assert_allclose(region_robustness(points, disc), -obstacle_clearance(points, disc))


def test_radius_must_be_positive():
    with pytest.raises(ValueError):
        Region(name="R", center=(0.0, 0.0), radius=0.0)


def test_scenario_registry_binds_names(case1):
    registry = case1.registry()
    assert ("in", 1) in registry
    assert ("clear", 1) in registry
    at_a = Trace([[0.35, 0.65]])
    assert robustness(parse("in(A)"), at_a, registry) == pytest.approx(0.08)
    assert robustness(parse("clear(O1)"), at_a, registry) == pytest.approx(0.2)


# ============================================================================
# CASE 1
# ============================================================================

def test_case1_structure(case1):
    f = case1.parsed_formula()
    kinds = set(_kinds(f))
    assert {Kind.THEN, Kind.UNTIL, Kind.ALWAYS} <= kinds
    assert all(w == 1.0 for w in f.weights)
    assert case1.optimizer.samples == 20
    assert case1.optimizer.eliteness == 10.0
    assert case1.optimizer.lambda_init == case1.optimizer.lambda_min == 0.05
    assert case1.dmp.kernels == 10


def test_case1_straight_line_fails(case1):
    trace = Trace(polyline([case1.start, case1.goal]))
    assert not satisfies(case1.parsed_formula(), trace, case1.registry())


def test_case1_polyline_through_a_then_b(case1):
    states = polyline([case1.start, (0.35, 0.65), (0.65, 0.35), case1.goal])
    f, registry = case1.parsed_formula(), case1.registry()
    assert satisfies(f, Trace(states), registry)
    assert robustness(f, Trace(states), registry) > 0
    short = polyline([case1.start, (0.35, 0.65), (0.65, 0.35), case1.goal], per_segment=4)
    assert holds(f, short, registry)


def test_case1_b_before_a_fails(case1):
    states = polyline([case1.start, (0.65, 0.35), (0.35, 0.65), case1.goal])
    assert not satisfies(case1.parsed_formula(), Trace(states), case1.registry())


# ============================================================================
# CASE 2
# ============================================================================

def test_case2_weights(case2_prefer_a, case2_prefer_b):
    def or_weights(spec):
        f = spec.parsed_formula()
        return {n.weights for n in _nodes(f) if n.kind is Kind.OR}

    assert or_weights(case2_prefer_a) == {(2.0, 1.0)}
    assert or_weights(case2_prefer_b) == {(1.0, 2.0)}


def _nodes(f):
    yield f
    for child in f.children:
        yield from _nodes(child)


def test_case2_goal_before_target_violates_until(case2_prefer_a):
    states = polyline([case2_prefer_a.start, (0.9, 0.1), case2_prefer_a.goal, (0.30, 0.60)])
    registry = case2_prefer_a.registry()
    rest = parse("(F in(A) ||{2,1} F in(B)) && F in(G) && G clear(O)")
    assert satisfies(rest, Trace(states), registry)
    assert not satisfies(case2_prefer_a.parsed_formula(), Trace(states), registry)


def test_case2_weights_choose_the_route():
    via_a = Trace(polyline([(0.05, 0.05), (0.30, 0.60), (0.95, 0.95)]))
    via_b = Trace(polyline([(0.05, 0.05), (0.60, 0.30), (0.95, 0.95)]))

    even = build_case2(1.0, 1.0)
    f, registry = even.parsed_formula(), even.registry()
    assert robustness(f, via_a, registry) == pytest.approx(robustness(f, via_b, registry), abs=1e-9)

    for w_a, w_b, preferred, other in [(2.0, 1.0, via_a, via_b), (1.0, 2.0, via_b, via_a)]:
        spec = build_case2(w_a, w_b)
        f, registry = spec.parsed_formula(), spec.registry()
        assert satisfies(f, preferred, registry)
        assert robustness(f, preferred, registry) > robustness(f, other, registry) > 0


# ============================================================================
# BASELINE COST
# ============================================================================

def test_baseline_clear_of_obstacles(case1):
    trace = Trace([[0.05, 0.05]])
    d = math.hypot(0.30, 0.60) - 0.08
    assert conventional_cost(trace, case1) == pytest.approx(C2 * 2 * d)


def test_baseline_zero_through_both_regions(case1):
    trace = Trace(polyline([case1.start, (0.35, 0.65), (0.65, 0.35), case1.goal]))
    assert conventional_cost(trace, case1) == pytest.approx(0.0)


def test_baseline_counts_penetration(case1):
    trace = Trace([[0.35, 0.35]])
    expected = -C1 * -0.10 + C2 * 2 * (0.30 - 0.08)
    assert conventional_cost(trace, case1) == pytest.approx(expected)


def test_baseline_ignores_order(case1):
    a_first = Trace(polyline([case1.start, (0.35, 0.65), (0.65, 0.35), case1.goal]))
    b_first = Trace(polyline([case1.start, (0.65, 0.35), (0.35, 0.65), case1.goal]))
    assert conventional_cost(a_first, case1) == conventional_cost(b_first, case1) == pytest.approx(0.0)


def test_baseline_zero_coefficients(case1):
    assert conventional_cost(Trace([[0.35, 0.35]]), case1, c1=0.0, c2=0.0) == 0.0


def test_baseline_needs_declared_targets(case1):
    with pytest.raises(ScenarioConfigError):
        conventional_cost(Trace([[0.0, 0.0]]), case1, targets=("A", "G"))


# ============================================================================
# PARAMETER COUNTS
# ============================================================================

def test_parameter_counts(case1):
    assert parameter_counts(2, 10, 3) == (2, 20, 6, 60)
    assert parameter_counts(2, 10, 2) == (2, 20, 4, 40)
    assert case1.system().n_params == 20
    assert case1.system().dim == 2
    with pytest.raises(ScenarioConfigError):
        parameter_counts(0, 10, 2)


# ============================================================================
# CONFIG FILES
# ============================================================================

def test_negative_radius_names_the_key():
    data = _minimal()
    data["regions"][0]["radius"] = -0.1
    with pytest.raises(ScenarioConfigError) as info:
        scenario_from_dict(data)
    assert info.value.path == "regions[0].radius"
    assert str(info.value).startswith("regions[0].radius: ")


def test_unknown_key_rejected():
    with pytest.raises(ScenarioConfigError) as info:
        scenario_from_dict(_minimal(colour="red"))
    assert info.value.path == "colour"


def test_unknown_nested_key_rejected():
    with pytest.raises(ScenarioConfigError) as info:
        scenario_from_dict(_minimal(optimizer={"M": 10, "kappa": 3}))
    assert info.value.path == "optimizer.kappa"


def test_undeclared_region_in_formula():
    with pytest.raises(ScenarioConfigError, match="undeclared region 'Z'") as info:
        scenario_from_dict(_minimal(formula="F in(Z)"))
    assert info.value.path == "formula"


def test_formula_syntax_error_reported_on_formula_key():
    with pytest.raises(ScenarioConfigError) as info:
        scenario_from_dict(_minimal(formula="F in(G) &&"))
    assert info.value.path == "formula"


def test_duplicate_region_names():
    data = _minimal()
    data["regions"].append({"name": "G", "center": [0.1, 0.1], "radius": 0.05})
    with pytest.raises(ScenarioConfigError) as info:
        scenario_from_dict(data)
    assert info.value.path == "regions[1].name"


def test_non_positive_weight():
    with pytest.raises(ScenarioConfigError) as info:
        scenario_from_dict(_minimal(weights={"wA": 0}))
    assert info.value.path == "weights"


def test_lambda_levels_ordered():
    with pytest.raises(ScenarioConfigError):
        scenario_from_dict(_minimal(optimizer={"lambda_init": 0.01, "lambda_min": 0.05}))


def test_optimizer_aliases():
    spec = scenario_from_dict(_minimal(optimizer={"M": 8, "h": 4, "seed": 3}))
    cfg = spec.optimizer_config()
    assert (cfg.samples, cfg.eliteness, cfg.seed) == (8, 4.0, 3)
    assert spec.optimizer_config(seed=9, max_updates=2).seed == 9


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"start": [0, 0],', encoding="utf-8")
    with pytest.raises(ScenarioConfigError, match="invalid JSON"):
        load_scenario(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_scenario(tmp_path / "nope.json")


@pytest.mark.parametrize("name", ["case1.json", "case2_prefer_a.json", "case2_prefer_b.json", "example1.json"])
def test_shipped_configs_load(name):
    spec = load_scenario(CONFIG_DIR / name)
    assert spec.parsed_formula() is not None


def test_shipped_configs_match_builders():
    assert load_scenario(CONFIG_DIR / "case1.json") == build_case1()
    prefer_a = load_scenario(CONFIG_DIR / "case2_prefer_a.json")
    assert prefer_a.parsed_formula() == build_case2(2.0, 1.0).parsed_formula()
    assert prefer_a.regions == build_case2(2.0, 1.0).regions


def test_dump_and_reload():
    for build in BUILTIN_SCENARIOS.values():
        spec = build()
        assert scenario_from_dict(json.loads(dump_scenario(spec))) == spec


def test_formulas_reserialize():
    for build in BUILTIN_SCENARIOS.values():
        f = build().parsed_formula()
        assert parse(to_text(f)) == f
