"""Mode choice estimation for trip diaries with stated-preference pooling."""

import json
import os

from . import _core
from ._core import (
    DataError,
    Dataset,
    NumericError,
    OptimizationError,
    SpecError,
    TripchoiceError,
    choice_probabilities,
    load_dataset,
    mode_names,
    parameter_names,
    population_mean_cost,
    reference_estimates,
    vot_mnl,
    vot_ratio_mxl,
)

__all__ = [
    "DataError",
    "Dataset",
    "NumericError",
    "OptimizationError",
    "SpecError",
    "TripchoiceError",
    "choice_probabilities",
    "cross_validate",
    "default_trip",
    "estimate",
    "integration_gradient",
    "load_dataset",
    "mode_names",
    "parameter_names",
    "parameter_table",
    "population_mean_cost",
    "reference_estimates",
    "simulate",
    "spec",
    "sweep",
    "vot_mnl",
    "vot_ratio_mxl",
    "vot_summary",
]

_PRESETS = ("M1", "M2", "M3", "M4")


def spec(model):
    """Model spec as a dict. `model` is a preset name, a JSON file path or a dict."""
    if isinstance(model, dict):
        return model
    if isinstance(model, str) and model.upper() in _PRESETS:
        return json.loads(_core.preset_spec_json(model.upper()))
    return json.loads(_core.load_spec_json(os.fspath(model)))


def _spec_json(model):
    return json.dumps(spec(model))


def _trip_json(trip):
    return None if trip is None else json.dumps(trip)


def simulate(model, n_persons, rp_per_person=100, sp_per_person=0, seed=1, noise=True, truth=None):
    """Synthetic population and choices; `truth` defaults to the reference estimates."""
    return _core.simulate(_spec_json(model), n_persons, rp_per_person, sp_per_person, seed, noise, truth)


def estimate(data, model, workers=1, max_iterations=None, start=None):
    """Maximum likelihood fit. Returns the result as a dict."""
    return json.loads(_core.estimate_json(data, _spec_json(model), workers, max_iterations, start))


def parameter_table(results):
    return _core.parameter_table([json.dumps(r) for r in results])


def vot_summary(result):
    return json.loads(_core.vot_summary_json(json.dumps(result)))


def default_trip():
    return json.loads(_core.default_trip_json())


def sweep(lever, params, model, grid, levels_sd=(-1.0, 0.0, 1.0), trip=None):
    """Transit share table over a fare or access grid at integration levels in SD units."""
    return json.loads(
        _core.sweep_json(lever, dict(params), _spec_json(model), list(grid), list(levels_sd), _trip_json(trip))
    )


def integration_gradient(params, model, from_sd=-1.0, to_sd=1.0, steps=21, trip=None):
    return json.loads(
        _core.integration_gradient_json(dict(params), _spec_json(model), from_sd, to_sd, steps, _trip_json(trip))
    )


def cross_validate(data, model, k=5, seed=1, workers=1):
    return json.loads(_core.cross_validate_json(data, _spec_json(model), k, seed, workers))
