"""Experiment configuration files and the bundled figure presets.

A configuration is one JSON document::

    {
      "name": "fig1",
      "exponents": {"prefix": [0, 1, 2, 3], "rule": "affine",
                    "rule_params": {"alpha": 2, "beta": 0}},
      "interval": {"a": 0.0, "b": 1.0},
      "iterations": 100,
      "control_points": [[0, 0], [1, 2], [3, 2], [4, 0]],
      "expected_class": "muntz",
      "output": {"formats": ["json"], "path": "."}
    }

``monomial_coefficients`` (same shape as ``control_points``) may replace
``control_points``; ``precision`` holds :class:`PrecisionContext` overrides
and ``verify_every`` the stride of the curve-reproduction checks.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ConfigError, DomainError, NonMonotoneExponentsError
from .exponents import ExponentSequence, Interval, materialize
from .numerics import PrecisionContext

__all__ = [
    "ExperimentConfig",
    "DEFAULT_POLYGON",
    "OUTPUT_FORMATS",
    "PRESETS",
    "load_config",
    "preset_config",
]

DEFAULT_POLYGON = ((0.0, 0.0), (1.0, 2.0), (3.0, 2.0), (4.0, 0.0))
OUTPUT_FORMATS = ("csv", "svg", "json")
EXPECTED_CLASSES = ("muntz", "non-muntz")
PRESETS = ("fig1", "fig2", "fig3", "fig4", "witness")

_KEYS = {"name", "exponents", "interval", "iterations", "control_points",
         "monomial_coefficients", "precision", "expected_class", "output", "verify_every"}
_PRECISION_KEYS = {f.name for f in dataclasses.fields(PrecisionContext)}


def _default_output():
    return {"formats": ["json"], "path": "."}


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """A validated elevation experiment.

    Exactly one of `control_points` and `monomial_coefficients` is set; both
    have shape ``(n + 1, s)`` where ``n + 1`` is the length of the exponent
    prefix.  Invalid field values raise :class:`ConfigError` whose
    ``errors`` map dotted field paths to messages.
    """

    exponents: ExponentSequence
    interval: Interval = Interval(0.0, 1.0)
    iterations: int = 100
    control_points: np.ndarray | None = None
    monomial_coefficients: np.ndarray | None = None
    precision: PrecisionContext = field(default_factory=PrecisionContext.from_env)
    expected_class: str | None = None
    output: dict = field(default_factory=_default_output)
    name: str = "custom"
    verify_every: int = 10

    def __post_init__(self):
        errors = {}
        it = self.iterations
        if isinstance(it, bool) or not isinstance(it, (int, np.integer)) or it < 1:
            errors["iterations"] = f"must be an integer >= 1, got {it!r}"
        ve = self.verify_every
        if isinstance(ve, bool) or not isinstance(ve, (int, np.integer)) or ve < 1:
            errors["verify_every"] = f"must be an integer >= 1, got {ve!r}"
        if self.expected_class not in (None,) + EXPECTED_CLASSES:
            errors["expected_class"] = f"must be one of {EXPECTED_CLASSES} or null, got {self.expected_class!r}"
        if not isinstance(self.name, str) or not self.name:
            errors["name"] = "must be a non-empty string"
        errors.update(_check_output(self.output))

        count = self.exponents.n + 1
        given = [k for k in ("control_points", "monomial_coefficients") if getattr(self, k) is not None]
        if len(given) != 1:
            errors["control_points"] = "exactly one of control_points and monomial_coefficients is required"
        for key in given:
            arr = np.array(getattr(self, key), dtype=float)
            if arr.ndim == 1:
                arr = arr[:, None]
            if arr.ndim != 2 or arr.shape[0] != count or arr.shape[1] < 1:
                errors[key] = f"need {count} points (one per prefix exponent), got shape {arr.shape}"
            elif not np.all(np.isfinite(arr)):
                errors[key] = "entries must be finite"
            else:
                arr.setflags(write=False)
                object.__setattr__(self, key, arr)

        if "iterations" not in errors:
            try:
                materialize(self.exponents, self.exponents.n + int(it))
            except NonMonotoneExponentsError as exc:
                errors["exponents"] = f"{exc} (index {exc.index})"
            except DomainError as exc:
                errors["exponents"] = str(exc)
        if errors:
            raise ConfigError(errors)
        object.__setattr__(self, "iterations", int(it))
        object.__setattr__(self, "verify_every", int(ve))

    @property
    def points(self) -> np.ndarray:
        """Whichever of control points / monomial coefficients is set."""
        return self.control_points if self.control_points is not None else self.monomial_coefficients

    def replace(self, **changes) -> "ExperimentConfig":
        if "control_points" in changes and "monomial_coefficients" not in changes:
            changes["monomial_coefficients"] = None
        if "monomial_coefficients" in changes and "control_points" not in changes:
            changes["control_points"] = None
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        """The fully resolved configuration (defaults expanded)."""
        out = {
            "name": self.name,
            "exponents": self.exponents.to_dict(),
            "interval": {"a": self.interval.a, "b": self.interval.b},
            "iterations": self.iterations,
        }
        if self.control_points is not None:
            out["control_points"] = self.control_points.tolist()
        else:
            out["monomial_coefficients"] = self.monomial_coefficients.tolist()
        out["precision"] = dataclasses.asdict(self.precision)
        out["expected_class"] = self.expected_class
        out["output"] = {"formats": list(self.output["formats"]), "path": str(self.output["path"])}
        out["verify_every"] = self.verify_every
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExperimentConfig":
        """Parse and validate a configuration mapping."""
        if not isinstance(data, Mapping):
            raise ConfigError({"": f"config must be a JSON object, got {type(data).__name__}"})
        errors = {}
        for key in sorted(set(data) - _KEYS):
            errors[key] = "unknown field"
        kwargs = {}

        raw = data.get("exponents")
        if raw is None:
            errors["exponents"] = "required"
        elif not isinstance(raw, Mapping) or "prefix" not in raw:
            errors["exponents.prefix"] = "required"
        else:
            try:
                kwargs["exponents"] = ExponentSequence.from_dict(raw)
            except (DomainError, TypeError, ValueError, KeyError) as exc:
                errors["exponents"] = str(exc)

        raw = data.get("interval", {"a": 0.0, "b": 1.0})
        try:
            if not isinstance(raw, Mapping):
                raise DomainError("must be an object {a, b}")
            kwargs["interval"] = Interval(_number(raw.get("a", 0.0)), _number(raw.get("b", 1.0)))
        except (DomainError, TypeError, ValueError) as exc:
            errors["interval"] = str(exc)

        raw = data.get("precision", {})
        if not isinstance(raw, Mapping):
            errors["precision"] = "must be an object of PrecisionContext overrides"
        else:
            bad = sorted(set(raw) - _PRECISION_KEYS)
            for key in bad:
                errors[f"precision.{key}"] = "unknown field"
            if not bad:
                try:
                    kwargs["precision"] = PrecisionContext.from_env(**raw)
                except (DomainError, TypeError) as exc:
                    errors["precision"] = str(exc)

        for key in ("control_points", "monomial_coefficients"):
            if data.get(key) is not None:
                try:
                    kwargs[key] = np.array(data[key], dtype=float)
                except (TypeError, ValueError) as exc:
                    errors[key] = f"not a numeric array: {exc}"
        if "control_points" not in data and "monomial_coefficients" not in data:
            kwargs["control_points"] = np.array(DEFAULT_POLYGON)

        for key in ("iterations", "verify_every", "expected_class", "name", "output"):
            if key in data:
                kwargs[key] = data[key]

        if errors:
            raise ConfigError(errors)
        return cls(**kwargs)


def _number(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DomainError(f"expected a number, got {x!r}")
    if not math.isfinite(x):
        raise DomainError(f"expected a finite number, got {x!r}")
    return float(x)


def _check_output(output) -> dict:
    if not isinstance(output, Mapping):
        return {"output": "must be an object {formats, path}"}
    errors = {}
    formats = output.get("formats")
    if (not isinstance(formats, (list, tuple)) or not formats
            or any(f not in OUTPUT_FORMATS for f in formats)):
        errors["output.formats"] = f"must be a non-empty list drawn from {OUTPUT_FORMATS}, got {formats!r}"
    if not isinstance(output.get("path"), (str, Path)):
        errors["output.path"] = "must be a string"
    return errors


def load_config(path) -> ExperimentConfig:
    """Read and validate a configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError({"": f"cannot read {path}: {exc.strerror}"}) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError({"": f"invalid JSON at line {exc.lineno}: {exc.msg}"}) from None
    return ExperimentConfig.from_dict(data)


def preset_path(name: str):
    """Location of a bundled preset file."""
    if name not in PRESETS:
        raise ConfigError({"name": f"unknown preset {name!r}; known: {list(PRESETS)}"})
    return resources.files("muntz_elevation").joinpath("presets").joinpath(f"{name}.json")


def preset_config(name: str) -> ExperimentConfig:
    """One of the bundled presets: ``fig1`` .. ``fig4`` or ``witness``."""
    return ExperimentConfig.from_dict(json.loads(preset_path(name).read_text()))
