import math
import os

import pytest

import tripchoice as tc


def test_presets_and_reference():
    m1 = tc.spec("M1")
    assert m1["model"] == "M1"
    ref = tc.reference_estimates("M1")
    assert ref["beta_cost"] < 0
    assert "mu_sp" in tc.reference_estimates("M3")


def test_vot_and_lognormal():
    ivtt, walk = tc.vot_mnl(-0.5, -1.0, -0.5)
    assert ivtt == pytest.approx(60.0)
    assert walk == pytest.approx(120.0)
    assert tc.vot_ratio_mxl(-1.0, 0.0) == pytest.approx(1.0)
    assert tc.population_mean_cost(0.0, 0.0) == pytest.approx(-1.0)


def test_choice_probabilities_normalised():
    p = tc.choice_probabilities([0.0, 1.0, 2.0, 0.5, -1.0, 0.0, 0.0],
                                [True, True, True, True, True, False, False])
    assert sum(p) == pytest.approx(1.0)
    assert p[5] == 0.0
    assert len(tc.mode_names()) == 7


def test_simulate_estimate_round_trip(tmp_path):
    data = tc.simulate("M1", 60, rp_per_person=50, seed=11)
    assert data.num_persons == 60
    assert data.num_observations == 3000
    obs, persons = tmp_path / "obs.csv", tmp_path / "persons.csv"
    data.save(obs, persons)
    again = tc.load_dataset(obs, persons)
    assert again.num_observations == data.num_observations
    result = tc.estimate(again, "M1", workers=2)
    assert result["n_params"] == 21
    assert result["converged"]
    assert math.isfinite(result["ll_final"])
    assert "β_C (Cost)" in tc.parameter_table([result])
    rows = tc.vot_summary(result)
    assert rows and rows[0]["ivtt"] > 0


def test_spec_file_from_source_tree():
    root = os.environ.get("TRIPCHOICE_SOURCE_DIR",
                          os.path.join(os.path.dirname(__file__), "..", ".."))
    path = os.path.join(root, "specs", "m4.json")
    if not os.path.exists(path):
        pytest.skip("spec files not available")
    assert tc.spec(path)["model"] == "M4"


def test_scenario_sweep():
    ref = tc.reference_estimates("M3")
    table = tc.sweep("access", ref, "M3", [10.0, 5.0])
    assert table["lever"] == "access"
    assert len(table["gain_pp"]) == 3
    assert all(g > 0 for g in table["gain_pp"])
    curve = tc.integration_gradient(ref, "M3", steps=5)
    assert [s["step"] for s in curve["steps"]] == list(range(5))


def test_errors_map_to_exceptions(tmp_path):
    with pytest.raises(tc.DataError):
        tc.load_dataset(tmp_path / "missing.csv", tmp_path / "missing_p.csv")
    with pytest.raises(tc.TripchoiceError):
        tc.sweep("tolls", tc.reference_estimates("M3"), "M3", [1.0])
