import json

import pytest

from cotlab.config import MAX_CARD_ENV, LabConfig, Thoroughness, get_config
from cotlab.algebra.common import CotlabError, ScenarioError
from cotlab.algebra.ring import Ring
from cotlab.algebra.modules import is_short_exact
from cotlab.algebra.cotorsion import enumerate_universe, is_projective
from cotlab.algebra.complexes import ChainComplex, is_exact
from cotlab.core import CHECKS, SuiteRunner, run_suite
from cotlab.generators import KINDS, gen_random
from cotlab.scenarios import (
    CheckOutcome, RunReport, Scenario, Status, bundled_scenarios, load_scenario,
)

EXT_Z2_Z2 = {"op": "ext", "k": 1, "a": {"invariants": [2]}, "b": {"invariants": [2]}, "invariants": [2]}
TIMES_TWO = {"modules": [{"invariants": [4]}, {"invariants": [4]}], "differentials": [[[2]]]}
IDENTITY_DISC = {"modules": [{"invariants": [4]}, {"invariants": [4]}], "differentials": [[[1]]]}


def scenario(*checks, **fields):
    data = {"name": "test", "ring": 4, "max_factors": 1, "thoroughness": "quick", "checks": list(checks)}
    data.update(fields)
    return Scenario.from_json(data)


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("data, location", [
    ([], "$"),
    ({}, "$.name"),
    ({"name": 3}, "$.name"),
    ({"name": "x", "ring": "4"}, "$.ring"),
    ({"name": "x", "ring": True}, "$.ring"),
    ({"name": "x", "ring": 1}, "$.ring"),
    ({"name": "x", "seed": 1.5}, "$.seed"),
    ({"name": "x", "trials": 0}, "$.trials"),
    ({"name": "x", "thoroughness": "slow"}, "$.thoroughness"),
    ({"name": "x", "checks": {}}, "$.checks"),
    ({"name": "x", "checks": [3]}, "$.checks[0]"),
    ({"name": "x", "checks": [{"id": "a"}]}, "$.checks[0].kind"),
    ({"name": "x", "checks": [{"id": "a", "kind": "pair"}, {"id": "a", "kind": "pair"}]}, "$.checks[1].id"),
    ({"name": "x", "checks": [{"id": "a", "kind": "pair", "expect": "maybe"}]}, "$.checks[0].expect"),
    ({"name": "x", "checks": [{"id": "a", "kind": "pair", "params": []}]}, "$.checks[0].params"),
])
def test_scenario_errors_carry_locations(data, location):
    with pytest.raises(ScenarioError) as info:
        Scenario.from_json(data)
    assert info.value.location == location
    assert str(info.value).startswith(location)


def test_scenario_defaults():
    s = Scenario.from_json({"name": "bare"})
    assert (s.ring, s.seed, s.max_factors, s.trials, s.thoroughness) == (4, 0, 2, None, None)
    assert s.checks == []
    assert Scenario.from_json(s.to_json()).to_json() == s.to_json()


def test_load_scenario_reports_json_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"name": "broken",\n  "ring": }')
    with pytest.raises(ScenarioError) as info:
        load_scenario(str(path))
    assert info.value.location.startswith("line 2")


def test_load_scenario_from_file(tmp_path):
    path = tmp_path / "mine.json"
    path.write_text(json.dumps({"name": "mine", "ring": 12, "checks": [{"id": "e", "kind": "compute", "params": EXT_Z2_Z2}]}))
    s = load_scenario(str(path))
    assert s.name == "mine" and s.ring == 12
    assert s.base_dir == str(tmp_path)


def test_load_unknown_scenario():
    with pytest.raises(ScenarioError):
        load_scenario("no-such-scenario")


def test_bundled_scenarios():
    names = bundled_scenarios()
    assert names == ["core-z12", "core-z4", "lemma-battery", "negative-controls", "quick"]
    for name in names:
        s = load_scenario(name)
        assert s.name == name
        assert all(c.kind in CHECKS for c in s.checks)


def test_negative_controls_expect_no_pass():
    s = load_scenario("negative-controls")
    assert s.checks
    assert all(c.expect in ("fail", "refuse") for c in s.checks)


# ---------------------------------------------------------------------------
# Run reports
# ---------------------------------------------------------------------------

def outcome(id, status, expect="pass"):
    return CheckOutcome(id, "pair", status, expect)


@pytest.mark.parametrize("outcomes, code", [
    ([], 0),
    ([outcome("a", Status.PASSED), outcome("b", Status.FAILED, "fail")], 0),
    ([outcome("a", Status.REFUSED, "refuse")], 0),
    ([outcome("a", Status.PASSED), outcome("b", Status.REFUSED)], 2),
    ([outcome("a", Status.FAILED), outcome("b", Status.REFUSED)], 1),
    ([outcome("a", Status.PASSED, "fail")], 1),
    ([outcome("a", Status.FAILED)], 1),
])
def test_exit_codes(outcomes, code):
    assert RunReport("s", 0, outcomes).exit_code() == code


def test_report_orders_outcomes_and_counts():
    report = RunReport("s", 3, [outcome("z", Status.PASSED), outcome("a", Status.REFUSED, "refuse"),
                                outcome("m", Status.FAILED, "fail")], {"wall_seconds": 1.0})
    data = report.to_json()
    assert [c["id"] for c in data["checks"]] == ["a", "m", "z"]
    assert data["counts"] == {"passed": 1, "failed": 1, "refused": 1}
    assert data["ok"] is True
    assert "timing" in data
    assert "timing" not in json.loads(report.canonical_json())


# ---------------------------------------------------------------------------
# Suite runner
# ---------------------------------------------------------------------------

def test_run_suite_statuses():
    s = scenario(
        {"id": "a-ext", "kind": "compute", "params": EXT_Z2_Z2},
        {"id": "b-unknown", "kind": "frobnicate", "expect": "fail"},
        {"id": "c-refused", "kind": "split1", "params": {"source": {"d": "all", "e": "all"}}},
        {"id": "d-bad-op", "kind": "compute", "expect": "fail",
         "params": {"op": "cup", "a": {"invariants": [2]}, "b": {"invariants": [2]}}},
        {"id": "e-disc", "kind": "contractible", "params": {"complex": IDENTITY_DISC}},
        {"id": "f-times2", "kind": "contractible", "expect": "fail", "params": {"complex": TIMES_TWO}},
    )
    report = run_suite(s, workers=2)
    by_id = {o.id: o for o in report.outcomes}
    assert by_id["a-ext"].status is Status.PASSED
    assert by_id["b-unknown"].status is Status.FAILED
    assert "unknown check kind" in by_id["b-unknown"].error
    assert by_id["c-refused"].status is Status.REFUSED
    assert "precondition" in by_id["c-refused"].details
    assert by_id["d-bad-op"].error.startswith("CotlabError")
    assert by_id["e-disc"].status is Status.PASSED
    assert by_id["f-times2"].status is Status.FAILED
    assert report.counts() == {"passed": 2, "failed": 3, "refused": 1}
    assert not report.ok
    assert report.exit_code() == 2


def test_run_suite_is_reproducible():
    s = scenario(
        {"id": "pair", "kind": "pair", "params": {"d": "flat", "e": "all"}},
        {"id": "ext", "kind": "compute", "params": EXT_Z2_Z2},
        {"id": "coker", "kind": "coker-formula", "params": {"functor": "tensor:2", "trials": 3}},
        seed=5,
    )
    first = run_suite(s, workers=3)
    second = run_suite(s, workers=1)
    assert first.canonical_json() == second.canonical_json()
    assert set(first.timing) == {"wall_seconds", "cpu_seconds", "peak_rss_mb"}


def test_run_suite_restores_thoroughness():
    get_config().configs["suite"]["thoroughness"] = "standard"
    run_suite(scenario({"id": "ext", "kind": "compute", "params": EXT_Z2_Z2}))
    assert get_config().configs["suite"]["thoroughness"] == "standard"


def test_empty_scenario_passes():
    report = run_suite(Scenario.from_json({"name": "empty"}))
    assert report.ok
    assert report.exit_code() == 0


def test_runner_defaults_to_configured_workers():
    assert SuiteRunner(Scenario.from_json({"name": "empty"})).workers == 4


def test_quick_scenario_passes():
    report = run_suite(load_scenario("quick"))
    assert report.ok, [o.to_json() for o in report.outcomes if not o.as_expected]
    assert report.counts()["failed"] == 2


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("kind", KINDS)
def test_generators_are_seeded(kind):
    params = {"ring": 12, "max_factors": 1}
    first = gen_random(kind, params, seed=11)
    second = gen_random(kind, params, seed=11)
    assert json.dumps(first.to_json(), sort_keys=True) == json.dumps(second.to_json(), sort_keys=True)


def test_generated_module_is_in_universe():
    u = enumerate_universe(Ring(4), 2)
    m = gen_random("module", {"ring": 4}, seed=2)
    assert m.invariants in {x.invariants for x in u}


@pytest.mark.parametrize("seed", range(5))
def test_generated_ses_respects_class(seed):
    ses = gen_random("ses", {"ring": 12, "max_factors": 1, "class": "projective"}, seed)
    assert is_short_exact(ses.inj, ses.surj)
    assert is_projective(ses.right)


@pytest.mark.parametrize("seed", range(5))
def test_generated_exact_complex(seed):
    c = gen_random("complex", {"ring": 4, "max_factors": 1, "exact": True, "length": 3}, seed)
    assert isinstance(c, ChainComplex)
    assert is_exact(c)


def test_generated_complex_entries():
    c = gen_random("complex", {"ring": 4, "max_factors": 1, "class": "flat", "length": 4, "lo": -2}, 0)
    assert c.lo == -2
    assert [m.invariants for m in c.modules] == [(4,)] * 4


def test_generator_errors():
    with pytest.raises(ValueError):
        gen_random("matrix", {}, 0)
    with pytest.raises(CotlabError):
        gen_random("complex", {"class": "zero"}, 0)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def test_default_levels(isolated_config):
    assert isolated_config.get_config_for_level("quick") == {
        "random_trials": 10, "lemma_trials": 10, "complex_samples": 40, "hom_sample_cap": 64,
        "universe_max_factors": 1,
    }
    assert isolated_config.get_config_for_level(Thoroughness.EXHAUSTIVE)["hom_sample_cap"] == 1024
    assert isolated_config.get_config_for_level()["random_trials"] == 100
    assert isolated_config.get_config_for_level("bogus")["random_trials"] == 100


def test_levels_are_copies(isolated_config):
    isolated_config.get_config_for_level("quick")["random_trials"] = 0
    assert isolated_config.get_config_for_level("quick")["random_trials"] == 10


def test_default_limits(isolated_config):
    assert isolated_config.max_card == 4096
    assert isolated_config.max_modulus == 65536
    assert isolated_config.max_arity == 5
    assert isolated_config.workers == 4


@pytest.mark.parametrize("raw, expected", [("128", 128), ("abc", 4096), ("0", 4096), ("-5", 4096)])
def test_max_card_environment(tmp_path, monkeypatch, raw, expected):
    monkeypatch.setenv(MAX_CARD_ENV, raw)
    assert LabConfig(str(tmp_path / "c.json")).max_card == expected


def test_custom_file_merges(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"limits": {"max_card": 99}, "trials": {"quick": {"random_trials": 3}}}))
    config = LabConfig(str(path))
    assert config.max_card == 99
    assert config.max_arity == 5
    assert config.get_config_for_level("quick") == {
        "random_trials": 3, "lemma_trials": 10, "complex_samples": 40, "hom_sample_cap": 64,
        "universe_max_factors": 1,
    }


def test_corrupt_custom_file_is_ignored(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    assert LabConfig(str(path)).max_card == 4096


def test_save_custom_config(tmp_path):
    path = tmp_path / "nested" / "c.json"
    config = LabConfig(str(path))
    assert config.save_custom_config({"suite": {"workers": 2}})
    assert config.workers == 2
    assert LabConfig(str(path)).workers == 2


def test_environment_beats_custom_file(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"limits": {"max_card": 99}}))
    monkeypatch.setenv(MAX_CARD_ENV, "7")
    assert LabConfig(str(path)).max_card == 7

