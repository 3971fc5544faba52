"""Serialized experiment results: JSON, CSV and SVG writers.

Floats go to JSON through ``repr`` (shortest round-trip form) and to CSV
with 17 significant digits, so coordinates reload bit-exactly.  Every file
is written to a temporary sibling first and then renamed into place.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import ConvergenceReport, greville_abscissae
from .errors import DomainError
from .exponents import Interval

__all__ = ["TraceReport", "atomic_write", "write_outputs"]

_METRICS = (("distance", "polygon_curve_distance"), ("first_leg", "first_leg_length"),
            ("node_gap", "node_max_gap"))


def atomic_write(path, text: str) -> Path:
    """Write `text` to `path` via a temporary file and ``os.replace``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


@dataclass
class TraceReport:
    """Everything one run produces.

    Attributes
    ----------
    config : dict
        The fully resolved experiment configuration.
    polygons : dict
        Iteration -> array of control points, shape ``(m + 1, s)``.
    report : ConvergenceReport
    escalations : list of dict
        Precision escalations recorded by the engine.
    wall_time : float
        Seconds spent in the elevation loop.
    curve : dict, optional
        ``{"exponents": [...], "coefficients": [[...]]}`` of the reference
        curve in the original parameter.
    """

    config: dict
    polygons: dict
    report: ConvergenceReport
    escalations: list = field(default_factory=list)
    wall_time: float = 0.0
    curve: dict | None = None

    def __post_init__(self):
        iters = self.config.get("iterations")
        if iters is not None and self.polygons and max(self.polygons) != iters:
            raise DomainError(f"trace ends at iteration {max(self.polygons)}, config asks for {iters}")

    @classmethod
    def from_run(cls, config, trace, report: ConvergenceReport, curve=None) -> "TraceReport":
        polys = {j: np.array(trace.polygons[j].points, dtype=float) for j in trace.stored_iterations()}
        curve_d = None
        if curve is not None:
            curve_d = {"exponents": list(curve.exponents), "coefficients": curve.coefficients.tolist()}
        return cls(config.to_dict(), polys, report, list(trace.escalations), trace.wall_time, curve_d)

    @property
    def iterations(self) -> list:
        return sorted(self.polygons)

    # JSON ----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "polygons": [{"iteration": j, "points": self.polygons[j].tolist()} for j in self.iterations],
            "report": self.report.to_dict(),
            "runtime": {"escalations": self.escalations, "wall_time": self.wall_time},
            "curve": self.curve,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TraceReport":
        polys = {int(p["iteration"]): np.array(p["points"], dtype=float) for p in data["polygons"]}
        rt = data.get("runtime", {})
        return cls(data["config"], polys, ConvergenceReport.from_dict(data["report"]),
                   list(rt.get("escalations", [])), float(rt.get("wall_time", 0.0)), data.get("curve"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TraceReport":
        return cls.from_dict(json.loads(text))

    # CSV -----------------------------------------------------------------

    def to_csv(self) -> str:
        """One row per control point of every stored polygon.

        Columns: ``iteration,point_index,x0..x{s-1},distance,first_leg,node_gap``.
        """
        s = next(iter(self.polygons.values())).shape[1]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "point_index", *[f"x{c}" for c in range(s)], *[k for k, _ in _METRICS]])
        records = {r["iteration"]: r for r in self.report.records}
        for j in self.iterations:
            rec = records.get(j, {})
            tail = [_g(rec[key]) if key in rec else "" for _, key in _METRICS]
            for i, p in enumerate(self.polygons[j]):
                w.writerow([j, i, *[_g(x) for x in p], *tail])
        return buf.getvalue()

    # SVG -----------------------------------------------------------------

    def to_svg(self, *, width: int = 640, curve_samples: int = 256) -> str:
        """Initial polygon, every k-th polygon (``k = iterations / 10``), red curve.

        Planar and higher-dimensional curves are drawn in their first two
        coordinates; scalar curves against their abscissae.
        """
        iters = self.iterations
        last = iters[-1]
        k = max(1, last // 10)
        shown = [j for j in iters if j % k == 0 or j == last]
        interval = Interval(**self.config["interval"])
        scalar = self.polygons[iters[0]].shape[1] == 1
        paths = {j: self._xy(j, interval, scalar) for j in shown}

        x0, y0 = paths[iters[0]].min(axis=0)
        x1, y1 = paths[iters[0]].max(axis=0)
        dx, dy = (x1 - x0) or 1.0, (y1 - y0) or 1.0
        x0, x1, y0, y1 = x0 - 0.1 * dx, x1 + 0.1 * dx, y0 - 0.1 * dy, y1 + 0.1 * dy
        height = int(round(width * (y1 - y0) / (x1 - x0)))
        height = min(max(height, 120), 4 * width)

        def fmt(xy):
            return " ".join(f"{x:.6g},{-y:.6g}" for x, y in xy)

        sw = 0.004 * max(x1 - x0, y1 - y0)
        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="{x0:.6g} {-y1:.6g} {x1 - x0:.6g} {y1 - y0:.6g}">',
            f'<title>{_esc(self.config.get("name", "trace"))}: {last} iterations</title>',
        ]
        for idx, j in enumerate(shown):
            shade = _ramp(idx / max(1, len(shown) - 1))
            lines.append(f'<polyline class="polygon" data-iteration="{j}" fill="none" stroke="{shade}" '
                         f'stroke-width="{sw:.4g}" points="{fmt(paths[j])}"/>')
        curve = self._curve_xy(interval, scalar, curve_samples)
        if curve is not None:
            lines.append(f'<polyline class="curve" fill="none" stroke="red" stroke-width="{1.5 * sw:.4g}" '
                         f'points="{fmt(curve)}"/>')
        lines.append("</svg>")
        return "\n".join(lines) + "\n"

    def _xy(self, j: int, interval: Interval, scalar: bool) -> np.ndarray:
        pts = self.polygons[j]
        if not scalar:
            return pts[:, :2]
        rs = self._exponents(len(pts) - 1)
        z = greville_abscissae(rs, interval) if len(rs) > 1 else np.array([interval.a])
        return np.column_stack([z, pts[:, 0]])

    def _exponents(self, m: int) -> tuple:
        from .exponents import ExponentSequence, materialize
        return materialize(ExponentSequence.from_dict(self.config["exponents"]), m)

    def _curve_xy(self, interval: Interval, scalar: bool, samples: int):
        if self.curve is None:
            return None
        from .bases import MuntzElement
        P = MuntzElement(tuple(self.curve["exponents"]), np.array(self.curve["coefficients"], dtype=float))
        ts = np.linspace(interval.a, interval.b, samples)
        vals = P(ts)
        return np.column_stack([ts, vals[:, 0]]) if scalar else vals[:, :2]


def _g(x) -> str:
    return format(float(x), ".17g")


def _esc(text: str) -> str:
    return str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _ramp(u: float) -> str:
    """Light grey-blue at ``u = 0`` to dark navy at ``u = 1``."""
    lo, hi = np.array([190, 205, 230]), np.array([10, 25, 80])
    r, g, b = np.rint(lo + (hi - lo) * u).astype(int)
    return f"#{r:02x}{g:02x}{b:02x}"


def write_outputs(tr: TraceReport, out_dir, formats, stem: str | None = None) -> list:
    """Write the requested formats to `out_dir`; return the paths."""
    out_dir = Path(out_dir)
    stem = stem or tr.config.get("name", "trace")
    render = {"json": tr.to_json, "csv": tr.to_csv, "svg": tr.to_svg}
    paths = []
    for fmt in formats:
        if fmt not in render:
            raise DomainError(f"unknown output format {fmt!r}")
        paths.append(atomic_write(out_dir / f"{stem}.{fmt}", render[fmt]()))
    return paths
