import csv
import io
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from muntz_elevation.config import preset_config
from muntz_elevation.diagnostics import run_experiment
from muntz_elevation.errors import DomainError
from muntz_elevation.report import TraceReport, atomic_write, write_outputs

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def fig3_report():
    cfg = preset_config("fig3").replace(iterations=20)
    trace, report, curve = run_experiment(cfg)
    return TraceReport.from_run(cfg, trace, report, curve)


class TestJson:
    def test_bit_exact_round_trip(self, fig3_report):
        again = TraceReport.from_json(fig3_report.to_json())
        assert again.iterations == fig3_report.iterations
        for j in again.iterations:
            assert np.array_equal(again.polygons[j], fig3_report.polygons[j])
        assert again.report.records == fig3_report.report.records
        assert again.config == fig3_report.config

    def test_contents(self, fig3_report):
        data = json.loads(fig3_report.to_json())
        assert set(data) == {"config", "polygons", "report", "runtime", "curve"}
        assert data["config"]["exponents"]["prefix"] == [0, 2, 4, 10]
        assert len(data["polygons"]) == 21

    def test_iteration_mismatch(self, fig3_report):
        with pytest.raises(DomainError):
            TraceReport(dict(fig3_report.config, iterations=5), fig3_report.polygons,
                        fig3_report.report)


class TestCsv:
    def test_header_and_rows(self, fig3_report):
        rows = list(csv.reader(io.StringIO(fig3_report.to_csv())))
        assert rows[0] == ["iteration", "point_index", "x0", "x1", "distance", "first_leg", "node_gap"]
        # 21 polygons with 4..24 points
        assert len(rows) - 1 == sum(range(4, 25))
        last = [r for r in rows[1:] if r[0] == "20"]
        assert len(last) == 24
        assert float(last[0][4]) == fig3_report.report.at(20)["polygon_curve_distance"]

    def test_values_reload_exactly(self, fig3_report):
        rows = list(csv.reader(io.StringIO(fig3_report.to_csv())))[1:]
        pts = np.array([[float(r[2]), float(r[3])] for r in rows if r[0] == "7"])
        assert np.array_equal(pts, fig3_report.polygons[7])


class TestSvg:
    def test_elements(self, fig3_report):
        root = ET.fromstring(fig3_report.to_svg())
        assert root.tag == SVG + "svg"
        polys = [e for e in root.iter(SVG + "polyline") if e.get("class") == "polygon"]
        curves = [e for e in root.iter(SVG + "polyline") if e.get("class") == "curve"]
        assert len(curves) == 1
        its = [int(e.get("data-iteration")) for e in polys]
        assert its[0] == 0 and its[-1] == 20

    def test_scalar_curve(self):
        cfg = preset_config("fig1").replace(iterations=3, control_points=[[0.0], [1.0], [0.0], [2.0]])
        trace, report, curve = run_experiment(cfg)
        root = ET.fromstring(TraceReport.from_run(cfg, trace, report, curve).to_svg())
        assert any(e.get("class") == "curve" for e in root.iter(SVG + "polyline"))


class TestWrite:
    def test_write_outputs(self, fig3_report, tmp_path):
        paths = write_outputs(fig3_report, tmp_path / "out", ["json", "csv", "svg"], "run")
        assert sorted(p.name for p in paths) == ["run.csv", "run.json", "run.svg"]
        assert not list((tmp_path / "out").glob(".*.tmp"))

    def test_atomic_write_replaces(self, tmp_path):
        p = tmp_path / "a.txt"
        atomic_write(p, "one")
        atomic_write(p, "two")
        assert p.read_text() == "two"
