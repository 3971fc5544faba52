import json

import numpy as np
import pytest

from muntz_elevation.config import (DEFAULT_POLYGON, PRESETS, ExperimentConfig, load_config,
                                    preset_config)
from muntz_elevation.errors import ConfigError
from muntz_elevation.exponents import Interval, named_sequence


def minimal(**extra):
    data = {"exponents": {"prefix": [0, 1, 2, 3], "rule": "affine",
                          "rule_params": {"alpha": 2, "beta": 0}}}
    data.update(extra)
    return data


class TestPresets:
    @pytest.mark.parametrize("name", PRESETS)
    def test_round_trip(self, name):
        cfg = preset_config(name)
        again = ExperimentConfig.from_dict(cfg.to_dict())
        assert again.to_dict() == cfg.to_dict()
        assert cfg.iterations == 100

    def test_expected_classes(self):
        got = {name: preset_config(name).expected_class for name in PRESETS}
        assert got == {"fig1": "muntz", "fig2": "non-muntz", "fig3": "muntz",
                       "fig4": "non-muntz", "witness": "non-muntz"}

    def test_witness_interval(self):
        assert preset_config("witness").interval == Interval(0.2, 1.0)

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset_config("fig9")


class TestValidation:
    def test_defaults(self):
        cfg = ExperimentConfig.from_dict(minimal())
        np.testing.assert_array_equal(cfg.control_points, DEFAULT_POLYGON)
        assert cfg.interval == Interval(0.0, 1.0)
        assert cfg.output == {"formats": ["json"], "path": "."}

    def test_points_read_only(self):
        cfg = ExperimentConfig.from_dict(minimal())
        with pytest.raises(ValueError):
            cfg.control_points[0, 0] = 1.0

    @pytest.mark.parametrize("data, field", [
        (minimal(iterations=0), "iterations"),
        (minimal(iterations=2.5), "iterations"),
        (minimal(interval={"a": 0.5, "b": 0.5}), "interval"),
        (minimal(interval={"a": "x"}), "interval"),
        (minimal(expected_class="maybe"), "expected_class"),
        (minimal(output={"formats": ["png"], "path": "."}), "output.formats"),
        (minimal(control_points=[[0, 0], [1, 1]]), "control_points"),
        (minimal(control_points=[[0, 0], [1, 1], [2, 2], [3, float("nan")]]), "control_points"),
        (minimal(colour="red"), "colour"),
        (minimal(precision={"bits": 3}), "precision.bits"),
        ({"exponents": {"rule": "affine"}}, "exponents.prefix"),
        ({}, "exponents"),
    ])
    def test_field_errors(self, data, field):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict(data)
        assert field in err.value.errors

    def test_both_point_kinds(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict(minimal(control_points=DEFAULT_POLYGON,
                                               monomial_coefficients=DEFAULT_POLYGON))
        assert "control_points" in err.value.errors

    def test_non_monotone_extension_reports_index(self):
        data = {"exponents": {"prefix": [0, 1], "rule": "custom", "rule_params": {"table": [3, 2]}},
                "control_points": [[0], [1]], "iterations": 2}
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict(data)
        assert "index 2" in err.value.errors["exponents"]

    def test_several_errors_at_once(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict(minimal(iterations=0, expected_class="x"))
        assert {"iterations", "expected_class"} <= set(err.value.errors)

    def test_replace_switches_point_kind(self):
        cfg = ExperimentConfig.from_dict(minimal())
        other = cfg.replace(monomial_coefficients=np.eye(4)[:, :2])
        assert other.control_points is None and other.points.shape == (4, 2)

    def test_precision_overrides(self):
        cfg = ExperimentConfig.from_dict(minimal(precision={"significand_bits": 128}))
        assert cfg.precision.bits == 128
        assert cfg.to_dict()["precision"]["significand_bits"] == 128

    def test_env_precision(self, monkeypatch):
        monkeypatch.setenv("MUNTZ_PRECISION_BITS", "96")
        assert ExperimentConfig.from_dict(minimal()).precision.bits == 96

    def test_direct_construction(self):
        cfg = ExperimentConfig(named_sequence("fig1"), control_points=DEFAULT_POLYGON, iterations=5)
        assert cfg.iterations == 5


class TestLoad:
    def test_load(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps(minimal(iterations=7)))
        assert load_config(p).iterations == 7

    def test_bad_json(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{nope")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")
