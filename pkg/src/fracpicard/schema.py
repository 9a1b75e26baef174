"""Problem and report JSON.

Problem files::

    {"kind": "rl" | "regularized" | "real-rl" | "real-caputo",
     "order": 0.5,
     "initial": [re, im],
     "rhs": {"bivariate": [[[re, im], ...], ...]},   # row j holds z**j, column k holds t**k
     "trunc": 64, "tol": 1e-12, "maxIter": 200,
     "envelope": {"c": 1.0, "n0": 2, "g": {"mu": 0, "coeffs": [[re, im], ...]}, "Mg": 0.1},
     "ballRadius": 1.0}

``envelope`` and ``ballRadius`` are optional.
"""
import json

import numpy as np

from .conditions import GrowthEnvelope
from .series import BivariateSeries, FracPowerSeries
from .solver import Kind, ProblemSpec, coeff_distance, picard_step, shift_to_homogeneous


class SchemaError(ValueError):
    pass


def _pair(value, name):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise SchemaError(f"field '{name}' must be a [re, im] pair")


def _number(obj, name, cast, default=None):
    if name not in obj:
        if default is None:
            raise SchemaError(f"missing required field '{name}'")
        return default
    try:
        return cast(obj[name])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field '{name}' must be a number") from exc


def problem_from_json(obj):
    if not isinstance(obj, dict):
        raise SchemaError("problem must be a JSON object")
    if "kind" not in obj:
        raise SchemaError("missing required field 'kind'")
    try:
        kind = Kind(obj["kind"])
    except ValueError as exc:
        raise SchemaError(f"field 'kind' must be one of {[k.value for k in Kind]}") from exc
    a = _number(obj, "order", float)
    if not 0 < a < 1:
        raise SchemaError("field 'order' must lie in (0, 1)")
    b = _pair(obj.get("initial", [0.0, 0.0]), "initial")
    rhs = obj.get("rhs")
    if not isinstance(rhs, dict) or "bivariate" not in rhs:
        raise SchemaError("missing required field 'rhs.bivariate'")
    try:
        F = BivariateSeries.from_json(rhs["bivariate"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    env = None
    if "envelope" in obj:
        try:
            env = GrowthEnvelope.from_json(obj["envelope"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"field 'envelope' is invalid: {exc}") from exc
    return ProblemSpec(
        kind=kind,
        a=a,
        rhs=F,
        b=b,
        trunc=_number(obj, "trunc", int, 64),
        tol=_number(obj, "tol", float, 1e-12),
        max_iter=_number(obj, "maxIter", int, 200),
        envelope=env,
        ball_radius=_number(obj, "ballRadius", float, 1.0),
    )


def problem_to_json(p):
    out = {
        "kind": p.kind.value,
        "order": p.a,
        "initial": [p.b.real, p.b.imag],
        "rhs": {"bivariate": p.rhs.to_json()},
        "trunc": p.trunc,
        "tol": p.tol,
        "maxIter": p.max_iter,
        "ballRadius": p.ball_radius,
    }
    if p.envelope is not None:
        out["envelope"] = p.envelope.to_json()
    return out


def load_problem(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return problem_from_json(obj)


def load_series(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return FracPowerSeries.from_json(obj)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def dumps(obj):
    """JSON with full double precision (Python's repr is shortest round-trip)."""
    return json.dumps(obj, indent=2, default=_default)


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def series_residual_from_report(p, report_obj):
    """Recompute ``||u - P u||`` from a serialized report."""
    u = FracPowerSeries.from_json(report_obj["solution"])
    kind = p.kind.complex_kind
    R = report_obj["radius"]
    if kind is Kind.RL:
        F, b_work = shift_to_homogeneous(p.rhs, p.b, p.a), 0j
        v = u - p.b if p.b != 0 else u
    else:
        F, b_work, v = p.rhs, p.b, u
    return coeff_distance(picard_step(F, v, p.a, kind, b_work, p.trunc), v, R)
