"""File schemas and deterministic JSON/CSV formatting.

All reals are printed with 17 significant digits so that round-tripping
through text reproduces the exact double.  Model files carry the cone
generators and unit effect; ensemble files reference a model inline or
by path (resolved relative to the ensemble file).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .discrimination import ComplementaryPair, DiscriminationSolution, KktReport
from .errors import InvalidInputError
from .geometry import CongruenceReport
from .model import Ensemble, GptModel, Measurement
from .oracle import OracleResult


def format_real(value: float) -> str:
    """Format one real with 17 significant digits (round-trip exact)."""
    text = format(float(value), ".17g")
    return text


def dumps(obj, indent: int = 2) -> str:
    """Serialize nested dict/list/scalar data with deterministic float formatting."""
    return _render(obj, indent, 0) + "\n"


def _render(obj, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{inner}{json.dumps(str(key))}: {_render(val, indent, level + 1)}" for key, val in obj.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = list(obj)
        if not items:
            return "[]"
        if all(isinstance(v, (float, int, np.floating, np.integer)) and not isinstance(v, bool) for v in items):
            return "[" + ", ".join(_render(v, indent, level + 1) for v in items) + "]"
        parts = [f"{inner}{_render(v, indent, level + 1)}" for v in items]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist(), indent, level)
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise InvalidInputError(f"cannot serialize object of type {type(obj).__name__}")


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise InvalidInputError(f"{context} is missing required field '{key}'")
    return mapping[key]


def model_to_dict(model: GptModel) -> dict:
    return {
        "dim": model.dim,
        "unit_effect": model.unit_effect,
        "state_generators": model.state_gens,
        "effect_generators": model.effect_gens,
    }


def model_from_dict(data) -> GptModel:
    if not isinstance(data, dict):
        raise InvalidInputError("model must be a JSON object")
    dim = _require(data, "dim", "model")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InvalidInputError("model dim must be an integer")
    try:
        return GptModel(
            dim=dim,
            state_gens=np.asarray(_require(data, "state_generators", "model"), dtype=float),
            effect_gens=np.asarray(_require(data, "effect_generators", "model"), dtype=float),
            unit_effect=np.asarray(_require(data, "unit_effect", "model"), dtype=float),
        )
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed model file: {exc}") from exc


def ensemble_to_dict(ensemble: Ensemble) -> dict:
    return {
        "model": model_to_dict(ensemble.model),
        "states": ensemble.states,
        "priors": ensemble.priors,
    }


def ensemble_from_dict(data, base_dir: Path | None = None) -> Ensemble:
    if not isinstance(data, dict):
        raise InvalidInputError("ensemble must be a JSON object")
    model_field = _require(data, "model", "ensemble")
    if isinstance(model_field, str):
        path = Path(model_field)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        model = load_model(path)
    else:
        model = model_from_dict(model_field)
    try:
        return Ensemble(
            model=model,
            states=np.asarray(_require(data, "states", "ensemble"), dtype=float),
            priors=np.asarray(_require(data, "priors", "ensemble"), dtype=float),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed ensemble file: {exc}") from exc


def _load_json(path: Path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc


def load_model(path) -> GptModel:
    return model_from_dict(_load_json(Path(path)))


def load_ensemble(path) -> Ensemble:
    path = Path(path)
    return ensemble_from_dict(_load_json(path), base_dir=path.parent)


def kkt_to_dict(report: KktReport) -> dict:
    return {
        "stability_residuals": report.stability_residuals,
        "positivity_ok": list(report.positivity_ok),
        "orthogonality_residuals": report.orthogonality_residuals,
        "measurement_residual": report.measurement_residual,
        "gap": report.gap,
        "effects_in_cone": list(report.effects_in_cone),
    }


def congruence_to_dict(report: CongruenceReport) -> dict:
    return {
        "max_residual": report.max_residual,
        "ratio": report.ratio,
        "ratio_spread": report.ratio_spread,
        "skipped": list(report.skipped),
    }


def oracle_to_dict(result: OracleResult) -> dict:
    return {
        "p_guess": result.p_guess,
        "K": result.k,
        "vertices_examined": result.vertices_examined,
    }


def solution_to_dict(
    solution: DiscriminationSolution,
    kkt: KktReport,
    congruence: CongruenceReport,
    oracle: OracleResult | None = None,
) -> dict:
    payload = {
        "p_guess": solution.p_guess,
        "measurement": solution.measurement.effects,
        "K": solution.symmetry_operator,
        "complementary": [
            {"r": pair.r, "d": None if pair.d is None else pair.d} for pair in solution.complementary
        ],
        "kkt": kkt_to_dict(kkt),
        "gap": abs(solution.primal_objective - solution.dual_objective),
        "geometry": congruence_to_dict(congruence),
    }
    if oracle is not None:
        payload["oracle"] = oracle_to_dict(oracle)
    return payload


def solution_from_dict(data, ensemble: Ensemble) -> DiscriminationSolution:
    """Rebuild an (untrusted) solution certificate for re-verification.

    Objectives are recomputed from the measurement and ``K`` rather than
    read from the file, so a tampered certificate cannot vouch for itself.
    """
    if not isinstance(data, dict):
        raise InvalidInputError("solution must be a JSON object")
    try:
        measurement = Measurement(np.asarray(_require(data, "measurement", "solution"), dtype=float))
        k = np.asarray(_require(data, "K", "solution"), dtype=float)
        pairs = []
        for entry in _require(data, "complementary", "solution"):
            d = entry.get("d") if isinstance(entry, dict) else None
            r = float(_require(entry, "r", "complementary pair"))
            pairs.append(ComplementaryPair(r=r, d=None if d is None else np.asarray(d, dtype=float)))
        p_guess = float(_require(data, "p_guess", "solution"))
    except (TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed solution file: {exc}") from exc
    if k.shape != (ensemble.model.dim,):
        raise InvalidInputError("solution K does not match the model dimension")
    primal_value = float(
        np.sum(ensemble.priors * np.einsum("xd,xd->x", measurement.effects, ensemble.states))
    )
    dual_value = float(ensemble.model.unit_effect @ k)
    return DiscriminationSolution(
        ensemble=ensemble,
        p_guess=p_guess,
        measurement=measurement,
        symmetry_operator=k,
        complementary=tuple(pairs),
        primal_objective=primal_value,
        dual_objective=dual_value,
    )
