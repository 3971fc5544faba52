"""Dimension elevation of Muntz curves.

Bernstein-like bases of Muntz spaces ``span(1, t**r_1, ..., t**r_n)``, the
corner-cutting maps that re-express a curve in a larger space, and the
diagnostics that track whether the elevated control polygons approach the
curve.

>>> from muntz_elevation import preset_config, run_experiment
>>> trace, report, curve = run_experiment(preset_config("fig1").replace(iterations=5))
>>> trace.final.points.shape
(9, 2)
"""
from .bases import (BasisKind, ControlPolygon, MuntzElement, basis_matrix, chebyshev_basis_eval,
                    control_points, gelfond_basis_eval, theorem4_gap)
from .config import ExperimentConfig, load_config, preset_config
from .diagnostics import (ConvergenceReport, chebyshev_ratio, first_leg_series, greville_abscissae,
                          node_max_gap, polygon_curve_distance, run_experiment, theorem7_gap)
from .elevation import (ElevationTrace, interval_weights, recover_xi, restriction_matrix,
                        run_elevation)
from .errors import (ConfigError, ControlPointError, DomainError, MuntzError, NonMonotoneExponentsError,
                     NumericalFailure, PartitionError)
from .exponents import ExponentSequence, Interval, materialize, muntz_partial_sums, named_sequence
from .numerics import PrecisionContext, divided_difference
from .report import TraceReport
from .schur import RealPartition, schur_eval

__version__ = "0.1.0"

__all__ = [
    "BasisKind", "ControlPolygon", "MuntzElement", "basis_matrix", "chebyshev_basis_eval",
    "control_points", "gelfond_basis_eval", "theorem4_gap",
    "ExperimentConfig", "load_config", "preset_config",
    "ConvergenceReport", "chebyshev_ratio", "first_leg_series", "greville_abscissae",
    "node_max_gap", "polygon_curve_distance", "run_experiment", "theorem7_gap",
    "ElevationTrace", "interval_weights", "recover_xi", "restriction_matrix", "run_elevation",
    "ConfigError", "ControlPointError", "DomainError", "MuntzError", "NonMonotoneExponentsError",
    "NumericalFailure", "PartitionError",
    "ExponentSequence", "Interval", "materialize", "muntz_partial_sums", "named_sequence",
    "PrecisionContext", "divided_difference",
    "TraceReport",
    "RealPartition", "schur_eval",
]
