import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from muntz_elevation.bases import BasisKind, ControlPolygon, MuntzElement
from muntz_elevation.diagnostics import (ConvergenceReport, abscissa_polygon, chebyshev_ratio,
                                         figure_experiment, first_basis_ratio, first_basis_slope,
                                         first_leg_series, greville_abscissae, node_max_gap,
                                         polygon_curve_distance, polygon_to_element,
                                         theorem7_gap, theorem7_terms)
from muntz_elevation.elevation import run_elevation
from muntz_elevation.errors import DomainError
from muntz_elevation.exponents import Interval, materialize, named_sequence

import oracles


class TestAbscissae:
    @pytest.mark.parametrize("m", [1, 2, 5, 9])
    def test_classical_unit_interval(self, m):
        z = greville_abscissae(tuple(range(m + 1)), Interval(0, 1))
        np.testing.assert_allclose(z, np.arange(m + 1) / m, atol=1e-15)

    def test_classical_general_interval(self):
        z = greville_abscissae((0, 1, 2, 3), Interval(0.4, 1.0))
        np.testing.assert_allclose(z, [0.4, 0.6, 0.8, 1.0], atol=1e-14)

    def test_endpoints(self):
        rs = materialize(named_sequence("fig3"), 12)
        z = greville_abscissae(rs, Interval(0.2, 1))
        assert z[0] == pytest.approx(0.2) and z[-1] == pytest.approx(1.0)
        assert np.all(np.diff(z) >= 0)

    def test_abscissa_polygon_reproduces_power(self):
        rs = (0, 1.5, 2.5, 5)
        eta = abscissa_polygon(rs, Interval(0.3, 1))
        poly = ControlPolygon(eta[:, None], rs, BasisKind.chebyshev(0.3))
        ts = np.linspace(0.3, 1, 11)
        np.testing.assert_allclose(poly.evaluate(ts)[:, 0], ts ** 1.5, atol=1e-12)

    def test_needs_m_at_least_one(self):
        with pytest.raises(DomainError):
            greville_abscissae((0,), Interval(0, 1))

    @pytest.mark.parametrize("m", [2, 4, 8])
    def test_node_gap_classical(self, m):
        assert node_max_gap(tuple(range(m + 1)), Interval(0, 1)) == pytest.approx(1 / m)

    def test_node_gap_at_m1_is_whole_interval(self):
        assert node_max_gap((0, 3), Interval(0.25, 1)) == pytest.approx(0.75)


class TestAbscissaPowerGap:
    def test_k1_vanishes(self):
        rs = materialize(named_sequence("fig3"), 8)
        assert theorem7_gap(rs, 0.2, 1) == 0

    def test_classical_k2_decreases(self):
        gaps = [theorem7_gap(tuple(range(m + 1)), 0.2, 2) for m in (8, 16, 32)]
        assert gaps[0] > gaps[1] > gaps[2] > 0
        # classical rate is 1/m
        assert gaps[1] / gaps[0] == pytest.approx(0.5, rel=0.15)

    @given(st.integers(2, 6), st.floats(0.1, 0.7))
    def test_terms_nonnegative(self, k, a):
        rs = materialize(named_sequence("fig3"), 10)
        assert np.all(theorem7_terms(rs, a, k) >= -1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            theorem7_terms((0, 1, 2), 0.2, 3)
        with pytest.raises(DomainError):
            theorem7_terms((0, 1, 2), 0.0, 1)


class TestDistance:
    def test_square_on_classical_line(self):
        # t**2 has polygon (0, 0, 1) at abscissae (0, 1/2, 1): gap 1/4
        P = MuntzElement((0, 1, 2), [0, 0, 1])
        poly = ControlPolygon([[0.0], [0.0], [1.0]], (0, 1, 2))
        assert polygon_curve_distance(poly, P) == pytest.approx(0.25)

    def test_constant_curve(self):
        P = MuntzElement((0, 1.5, 3), [2.0, 0, 0])
        poly = ControlPolygon([[2.0]] * 3, (0, 1.5, 3), BasisKind.chebyshev(0.2))
        assert polygon_curve_distance(poly, P) == pytest.approx(0, abs=1e-15)

    def test_first_leg_series(self):
        seq = named_sequence("classical")
        trace = run_elevation(ControlPolygon([[0.0], [1.0]], (0, 1)), seq, Interval(0, 1), 3)
        np.testing.assert_allclose(first_leg_series(trace), [1, 1 / 2, 1 / 3, 1 / 4])


class TestChebyshevRatio:
    def test_linear(self):
        # P = t: ||P'|| = 1 on [0, 1/2], ||P|| = 1 on [1/2, 1]
        assert chebyshev_ratio(MuntzElement((0, 1), [0, 1]), 0.5) == pytest.approx(1.0)

    def test_power(self):
        P = MuntzElement((0, 3), [0, 1])
        assert chebyshev_ratio(P, 0.5) == pytest.approx(3 * 0.25)

    def test_domain(self):
        with pytest.raises(DomainError):
            chebyshev_ratio(MuntzElement((0, 1), [[0, 1], [1, 0]]), 0.5)
        with pytest.raises(DomainError):
            chebyshev_ratio(MuntzElement((0, 1), [0, 1]), 1.0)
        with pytest.raises(DomainError):
            chebyshev_ratio(MuntzElement((0, 1), [0, 0]), 0.5)

    def test_first_basis_ratio_classical(self):
        # H_0 = (1 - t)**2: max |H_0'| = 2 on [0, 1/2], max H_0 = 1/4 on [1/2, 1]
        assert first_basis_ratio((0, 1, 2)) == pytest.approx(8.0, rel=1e-9)

    def test_first_basis_slope_classical(self):
        for n, a in [(2, 0.2), (5, 0.5)]:
            got = first_basis_slope(tuple(range(n + 1)), a, h=1e-9)
            assert got == pytest.approx(-n / (1 - a), rel=1e-6)


class TestPolygonToElement:
    @pytest.mark.parametrize("basis", [BasisKind.gelfond(), BasisKind.chebyshev(0.3)])
    def test_round_trip(self, basis):
        rs = (0, 1.5, 2, 4)
        pts = np.array([[0.0, 1], [1, 2], [3, 2], [4, 0]])
        P = polygon_to_element(ControlPolygon(pts, rs, basis))
        ts = np.linspace(basis.a, 1, 9)
        np.testing.assert_allclose(P(ts), ControlPolygon(pts, rs, basis).evaluate(ts), atol=1e-12)


class TestReports:
    def test_round_trip(self):
        rep = ConvergenceReport([{"iteration": 0, "dimension": 3, "polygon_curve_distance": 0.5,
                                  "first_leg_length": 2.0, "node_max_gap": 0.25}],
                                {"name": "x"}, "muntz")
        again = ConvergenceReport.from_dict(rep.to_dict())
        assert again == rep
        assert again.at(0)["dimension"] == 3
        with pytest.raises(KeyError):
            again.at(1)

    def test_validation(self):
        with pytest.raises(DomainError):
            ConvergenceReport([], {}, "maybe")
        with pytest.raises(DomainError):
            ConvergenceReport([{"iteration": 2}, {"iteration": 1}])

    def test_classical_distance_matches_oracle(self):
        # a Bezier cubic elevated 20 times on [0, 1]
        pts = np.array([[0.0, 0.0], [1.0, 2.0], [3.0, 2.0], [4.0, 0.0]])
        seq = named_sequence("classical")
        trace = run_elevation(ControlPolygon(pts, (0, 1, 2, 3)), seq, Interval(0, 1), 20)
        want = pts
        for _ in range(20):
            want = oracles.classical_elevate(want)
        np.testing.assert_allclose(trace.final.points, want, atol=1e-13)

    def test_figure_experiment(self):
        rep = figure_experiment(1, iterations=20)
        assert rep.iterations().tolist() == list(range(21))
        d = rep.series("polygon_curve_distance")
        assert d[-1] < d[1]
        assert rep.expected_class == "muntz"
        with pytest.raises(DomainError):
            figure_experiment(5)
