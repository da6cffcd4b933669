import numpy as np
import pytest

from pathminima.scenarios import Scenario, ScenarioError, builtin, load_scenario

MINIMAL = """
version: 1
name: toy
space:
  - - {kind: euclidean, low: 0.0, high: 1.0}
    - {kind: euclidean, low: 0.0, high: 1.0}
world:
  - {type: circle, center: [0.5, 0.5], radius: 0.1}
robot:
  - {type: point}
bundle: []
problem:
  start: [0.1, 0.1]
  goal: [0.9, 0.9]
"""


def test_builtins_load_and_validate(scenarios):
    for name, sc in scenarios.items():
        assert sc.name == name
        chain = sc.build_chain()
        assert chain.K == sc.k_levels
        ps = chain.space(chain.K)
        assert ps.free(sc.start)
        assert ps.free(sc.goal)


def test_unknown_builtin_raises():
    with pytest.raises(ScenarioError):
        builtin("no_such_world")


def test_round_trip_equality(scenarios):
    for sc in scenarios.values():
        again = load_scenario(sc.to_text())
        assert again == sc
        assert again.scenario_hash == sc.scenario_hash


def test_minimal_document_loads():
    sc = load_scenario(MINIMAL)
    assert sc.k_levels == 0
    assert sc.robots[0].to_dict()["type"] == "point"


def test_unknown_field_rejected():
    with pytest.raises(ScenarioError):
        load_scenario(MINIMAL.replace("problem:", "problem_extra: 1\nproblem:"))


def test_goal_in_collision_named_level():
    bad = MINIMAL.replace("goal: [0.9, 0.9]", "goal: [0.5, 0.5]")
    with pytest.raises(ScenarioError) as err:
        load_scenario(bad)
    assert "goal" in str(err.value)


def test_start_in_collision_rejected():
    bad = MINIMAL.replace("start: [0.1, 0.1]", "start: [0.45, 0.5]")
    with pytest.raises(ScenarioError):
        load_scenario(bad)


def test_malformed_document_reports_field():
    with pytest.raises(ScenarioError):
        load_scenario("version: 1\nname: broken\n")
    with pytest.raises(ScenarioError):
        load_scenario(MINIMAL.replace("radius: 0.1", "radius: -2"))


def test_params_overrides_apply():
    doc = MINIMAL + "params:\n  n_minima: 3\n  seed: 9\n"
    sc = load_scenario(doc)
    assert sc.params.n_minima == 3
    assert sc.params.seed == 9


def test_start_goal_dimensions_checked():
    bad = MINIMAL.replace("start: [0.1, 0.1]", "start: [0.1, 0.1, 0.3]")
    with pytest.raises(ScenarioError):
        load_scenario(bad)
