"""Convergence metrics and theorem-level experiments.

The central functional pairs each control point ``b_i`` of ``E(Lambda_m)``
with the abscissa ``zeta_i = eta_i(t**r_1) ** (1 / r_1)`` and measures
``max_i |P(zeta_i) - b_i|``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bases import BasisKind, ControlPolygon, MuntzElement, basis_matrix, control_points
from .elevation import ElevationTrace, _cut, gelfond_weights, interval_weights, run_elevation
from .errors import DomainError, NumericalFailure
from .exponents import Interval, materialize, validate_exponents
from .numerics import PrecisionContext

__all__ = [
    "ConvergenceReport",
    "abscissa_polygon",
    "greville_abscissae",
    "polygon_curve_distance",
    "theorem7_terms",
    "theorem7_gap",
    "node_max_gap",
    "first_leg_series",
    "chebyshev_ratio",
    "first_basis_slope",
    "first_basis_ratio",
    "build_report",
    "run_experiment",
    "figure_experiment",
]

EXPECTED_CLASSES = ("muntz", "non-muntz")


@dataclass
class ConvergenceReport:
    """Per-iteration convergence records of one experiment.

    Each record holds ``iteration``, ``dimension``, ``polygon_curve_distance``,
    ``first_leg_length`` and ``node_max_gap``.
    """

    records: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    expected_class: str | None = None

    def __post_init__(self):
        if self.expected_class not in (None,) + EXPECTED_CLASSES:
            raise DomainError(f"expected_class must be one of {EXPECTED_CLASSES}, got {self.expected_class!r}")
        its = [r["iteration"] for r in self.records]
        if any(b <= a for a, b in zip(its, its[1:])):
            raise DomainError("report iterations must be strictly increasing")

    def iterations(self) -> np.ndarray:
        return np.array([r["iteration"] for r in self.records], dtype=int)

    def series(self, name: str) -> np.ndarray:
        """One metric as an array aligned with :meth:`iterations`."""
        return np.array([r[name] for r in self.records], dtype=float)

    def at(self, iteration: int) -> dict:
        for r in self.records:
            if r["iteration"] == iteration:
                return r
        raise KeyError(f"iteration {iteration} not in report")

    def to_dict(self) -> dict:
        return {"expected_class": self.expected_class, "config": self.config,
                "records": [dict(r) for r in self.records]}

    @classmethod
    def from_dict(cls, data: dict) -> "ConvergenceReport":
        return cls([dict(r) for r in data["records"]], dict(data.get("config", {})),
                   data.get("expected_class"))


# ---------------------------------------------------------------------------
# Abscissae

def abscissa_polygon(exponents, interval: Interval, ctx: PrecisionContext | None = None) -> np.ndarray:
    """Control points ``eta_i(t**r_1)`` over ``Lambda_m`` on ``[a/b, 1]``.

    Starts from ``E(Lambda_1)``, where the polygon of ``t**r_1`` is
    ``(a**r_1, 1)``, and elevates with the weights of the interval.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    m = len(rs) - 1
    if m < 1:
        raise DomainError("abscissae need m >= 1")
    a = interval.a / interval.b
    pts = np.array([[a ** rs[1]], [1.0]])
    if a == 0:
        for n in range(1, m):
            pts = _cut(pts, gelfond_weights(rs[:n + 1], rs[n + 1]))
    else:
        weights = interval_weights(rs, a, ctx)
        for n in range(1, m):
            pts = _cut(pts, weights[n])
    return pts[:, 0]


def _zeta(eta: np.ndarray, r1: float, interval: Interval, tol: float) -> np.ndarray:
    if np.any(eta < -tol):
        raise NumericalFailure(f"negative abscissa control point {eta.min()!r}")
    z = np.clip(eta, 0.0, None) ** (1.0 / r1) * interval.b
    return np.clip(z, interval.a, interval.b)


def greville_abscissae(exponents, interval: Interval, ctx: PrecisionContext | None = None) -> np.ndarray:
    """``zeta_i = eta_i(t**r_1, Lambda_m, interval) ** (1 / r_1)`` for ``i = 0..m``.

    Examples
    --------
    >>> greville_abscissae((0, 1, 2, 3, 4), Interval(0, 1)).tolist()
    [0.0, 0.25, 0.5, 0.75, 1.0]
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    eta = abscissa_polygon(rs, interval, ctx)
    return _zeta(eta, rs[1], interval, ctx.comparison_tolerance)


def node_max_gap(exponents, interval: Interval, ctx: PrecisionContext | None = None) -> float:
    """Largest gap between consecutive abscissae, end points included."""
    z = greville_abscissae(exponents, interval, ctx)
    z = np.concatenate([[interval.a], z, [interval.b]])
    return float(np.max(np.diff(z)))


def polygon_curve_distance(polygon: ControlPolygon, P: MuntzElement,
                           ctx: PrecisionContext | None = None, *, zeta=None,
                           interval: Interval | None = None) -> float:
    """``max_i ||P(zeta_i) - b_i||_inf`` at the abscissae of the polygon's space.

    `interval` defaults to the polygon's basis interval; pass the original
    interval when the polygon lives on a rescaled one.
    """
    interval = interval or polygon.basis.interval
    if zeta is None:
        zeta = greville_abscissae(polygon.exponents, interval, ctx)
    diff = P(zeta) - polygon.points
    return float(np.max(np.abs(diff)))


# ---------------------------------------------------------------------------
# Theorem-level quantities

def theorem7_terms(exponents, a: float, k: int, ctx: PrecisionContext | None = None) -> np.ndarray:
    """``eta_i(t**r_1) ** (r_k / r_1) - eta_i(t**r_k)`` for ``i = 0..m`` over ``[a, 1]``."""
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    m = len(rs) - 1
    if not 1 <= k <= m:
        raise DomainError(f"k must lie in 1..{m}, got {k}")
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a!r}")
    eta1 = abscissa_polygon(rs, Interval(a, 1.0), ctx)
    if k == 1:
        return np.zeros(m + 1)
    etak = control_points(MuntzElement.monomial(rs, k), rs, BasisKind.chebyshev(a), ctx).points[:, 0]
    return np.clip(eta1, 0.0, None) ** (rs[k] / rs[1]) - etak


def theorem7_gap(exponents, a: float, k: int, ctx: PrecisionContext | None = None) -> float:
    """``max_i |eta_i(t**r_1) ** (r_k / r_1) - eta_i(t**r_k)|`` over ``[a, 1]``."""
    return float(np.max(np.abs(theorem7_terms(exponents, a, k, ctx))))


def first_leg_series(trace: ElevationTrace) -> np.ndarray:
    """``||b_0 - b_1||_inf`` for every stored polygon of the trace."""
    if not trace.polygons:
        raise DomainError("empty trace")
    return np.array([float(np.max(np.abs(trace.polygons[j].points[1] - trace.polygons[j].points[0])))
                     for j in trace.stored_iterations()])


def chebyshev_ratio(P: MuntzElement, epsilon: float, grid_size: int = 2001,
                    ctx: PrecisionContext | None = None) -> float:
    """``||P'||_[0, 1-eps] / ||P||_[1-eps, 1]`` on dense grids.

    Raises
    ------
    DomainError
        If `P` is not scalar, `epsilon` is outside ``(0, 1)`` or the
        denominator vanishes.
    """
    ctx = ctx or PrecisionContext()
    if P.dim != 1:
        raise DomainError("chebyshev_ratio needs a scalar curve (s = 1)")
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    left = np.linspace(0.0, 1.0 - epsilon, grid_size)
    right = np.linspace(1.0 - epsilon, 1.0, grid_size)
    den = float(np.max(np.abs(P(right))))
    if den <= ctx.residual_tolerance:
        raise DomainError("||P|| on [1 - eps, 1] is below tolerance")
    return float(np.max(np.abs(P.derivative(left)))) / den


def first_basis_slope(exponents, a: float, h: float = 1e-6, ctx: PrecisionContext | None = None) -> float:
    """One-sided difference ``(B_0(a + h) - B_0(a)) / h`` over ``[a, 1]``."""
    ctx = (ctx or PrecisionContext()).extended()
    rs = validate_exponents(exponents)
    B = basis_matrix(rs, [a, a + h], BasisKind.chebyshev(a), ctx, as_mp=True)
    return float((B[1][0] - B[0][0]) / h)


def first_basis_ratio(exponents, epsilon: float = 0.5, grid_size: int = 2001,
                      ctx: PrecisionContext | None = None) -> float:
    """:func:`chebyshev_ratio` of the first Gelfond-Bernstein function ``H_0``.

    ``H_0`` is converted to monomial form at adaptive precision; float
    evaluation of that form loses accuracy for large spreads of exponents,
    so keep ``m`` moderate (about a dozen for ``r_i = i**2``).
    """
    rs = validate_exponents(exponents)
    unit = np.zeros((len(rs), 1))
    unit[0] = 1.0
    P = polygon_to_element(ControlPolygon(unit, rs, BasisKind.gelfond()), ctx)
    return chebyshev_ratio(P, epsilon, grid_size, ctx)


# ---------------------------------------------------------------------------
# Reports and experiments

def build_report(trace: ElevationTrace, P: MuntzElement, interval: Interval,
                 ctx: PrecisionContext | None = None, *, config: dict | None = None,
                 expected_class: str | None = None) -> ConvergenceReport:
    """Metrics for every stored polygon of `trace`.

    `P` is the curve in the original parameter, `interval` the original
    interval.  The abscissa polygon is elevated alongside with the trace's
    own weights, so each record costs ``O(m)``.
    """
    ctx = ctx or PrecisionContext()
    n = trace.initial_dim
    rs = trace.exponents
    if n >= 1:
        eta = abscissa_polygon(rs[:n + 1], interval, ctx)[:, None]
    else:
        eta = None
    records = []
    stored = set(trace.stored_iterations())
    for j in range(0, trace.completed + 1):
        if j > 0:
            step = trace.steps[j - 1]
            if eta is None:
                eta = np.array([[(interval.a / interval.b) ** rs[1]], [1.0]])
            else:
                eta = _cut(eta, step.xi)
        if j not in stored:
            continue
        poly = trace.polygons[j]
        z = _zeta(eta[:, 0], rs[1], interval, ctx.comparison_tolerance)
        gaps = np.diff(np.concatenate([[interval.a], z, [interval.b]]))
        records.append({
            "iteration": j,
            "dimension": poly.m,
            "polygon_curve_distance": float(np.max(np.abs(P(z) - poly.points))),
            "first_leg_length": float(np.max(np.abs(poly.points[1] - poly.points[0]))),
            "node_max_gap": float(np.max(gaps)),
        })
    return ConvergenceReport(records, dict(config or {}), expected_class)


def run_experiment(config, ctx: PrecisionContext | None = None, *, verify_at=None):
    """Run one :class:`~muntz_elevation.config.ExperimentConfig`.

    Returns
    -------
    trace : ElevationTrace
    report : ConvergenceReport
    curve : MuntzElement
        The curve in monomial form over the original interval.
    """
    ctx = ctx or config.precision
    trace, curve = _elevate_config(config, ctx, verify_at)
    report = build_report(trace, curve, config.interval, ctx, config=config.to_dict(),
                          expected_class=config.expected_class)
    return trace, report, curve


def _elevate_config(config, ctx, verify_at):
    interval = config.interval
    working = interval.rescaled() if interval.b != 1 else interval
    basis = BasisKind.for_interval(working)
    rs = materialize(config.exponents, config.exponents.n)
    if config.control_points is not None:
        initial = ControlPolygon(config.control_points, rs, basis)
        coef = polygon_to_element(initial, ctx).coefficients
        b = interval.b
        curve = MuntzElement(rs, coef / (b ** np.asarray(rs))[:, None])
    else:
        curve = MuntzElement(rs, config.monomial_coefficients)
        initial = curve
    trace = run_elevation(initial, config.exponents, interval, config.iterations, ctx,
                          verify_every=config.verify_every, verify_at=verify_at)
    return trace, curve


def polygon_to_element(polygon: ControlPolygon, ctx: PrecisionContext | None = None) -> MuntzElement:
    """Monomial form of the curve of a control polygon (on its basis interval)."""
    import gmpy2

    from . import _twopoint
    from .numerics import with_adaptive_precision

    ctx = ctx or PrecisionContext()
    rs = polygon.exponents
    basis = polygon.basis

    def coeffs(bits):
        if basis.kind == "gelfond":
            C = _twopoint.gelfond_monomial_coefficients(rs, bits)
        else:
            C = _twopoint.monomial_coefficients(rs, basis.a / basis.b, bits)
        # P(t) = sum_k b_k B_k(t) = sum_l (sum_k b_k c_{k,l}) t**r_l
        with _twopoint.precision(bits):
            return [[sum((C[k][l] * float(col[k]) for k in range(len(rs))), gmpy2.mpfr(0))
                     for l in range(len(rs))] for col in polygon.points.T]

    def gap(lo, hi):
        scale = max(1.0, max(abs(float(x)) for col in hi for x in col))
        return max(abs(float(x - y)) for c1, c2 in zip(lo, hi) for x, y in zip(c1, c2)) / scale

    cols, _ = with_adaptive_precision(coeffs, gap, max(ctx.bits, 64), 1e-18)
    coef = np.array([[float(x) for x in col] for col in cols]).T
    if basis.kind == "chebyshev" and basis.b != 1:
        coef = coef / (basis.b ** np.asarray(rs))[:, None]
    return MuntzElement(rs, coef)


def figure_experiment(figure_id: int, iterations: int = 100,
                      ctx: PrecisionContext | None = None) -> ConvergenceReport:
    """Run one of the four bundled figure presets and return its report."""
    from .config import preset_config

    if figure_id not in (1, 2, 3, 4):
        raise DomainError(f"figure id must be 1, 2, 3 or 4, got {figure_id!r}")
    config = preset_config(f"fig{figure_id}").replace(iterations=iterations)
    return run_experiment(config, ctx)[1]
