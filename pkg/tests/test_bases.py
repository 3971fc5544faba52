import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from muntz_elevation.bases import (BasisKind, ControlPolygon, MuntzElement, basis_matrix,
                                   basis_matrix_family, chebyshev_basis_eval,
                                   chebyshev_basis_values, control_points,
                                   divdiff_schur_identity_residual, gelfond_basis_eval,
                                   gelfond_basis_values, gelfond_elevation_residual, theorem4_gap)
from muntz_elevation.errors import DomainError
from muntz_elevation.exponents import Interval
from muntz_elevation.numerics import PrecisionContext

import oracles

EXT = PrecisionContext().extended()


@st.composite
def exponent_lists(draw, max_n=6, min_gap=0.2):
    gs = draw(st.lists(st.floats(min_gap, 3.0), min_size=1, max_size=max_n))
    rs = [0.0]
    for g in gs:
        rs.append(rs[-1] + g)
    return tuple(rs)


def to_float(row):
    return np.array([float(x) for x in row])


class TestMuntzElement:
    def test_call_and_derivative(self):
        P = MuntzElement((0, 0.5, 2), [[1, 0], [2, 1], [0, 3]])
        t = np.array([0.25, 1.0])
        np.testing.assert_allclose(P(t), [[1 + 2 * 0.5, 0.5 + 3 / 16], [3, 4]])
        np.testing.assert_allclose(P.derivative([1.0]), [[1.0, 0.5 + 6]])

    def test_derivative_at_zero(self):
        P = MuntzElement((0, 0.5, 2), [0, 0, 1])
        assert P.derivative([0.0])[0, 0] == 0
        Q = MuntzElement((0, 0.5, 2), [0, 1, 0])
        assert np.isinf(Q.derivative([0.0])[0, 0])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DomainError):
            MuntzElement((0, 1), [1, 2, 3])


class TestGelfond:
    @given(st.integers(1, 10), st.floats(0, 1))
    def test_classical_reduction(self, n, t):
        vals = gelfond_basis_values(tuple(range(n + 1)), t)
        want = [oracles.bernstein(n, k, t) for k in range(n + 1)]
        assert np.max(np.abs(to_float(vals) - want)) <= 1e-12

    @given(exponent_lists(), st.floats(0, 1))
    def test_against_symmetric_oracle(self, rs, t):
        got = to_float(gelfond_basis_values(rs, t, EXT))
        want = to_float(oracles.evaluate_rows(oracles.gelfond_monomial(rs), rs, t))
        assert np.max(np.abs(got - want)) < 1e-30

    @given(exponent_lists(), st.floats(0, 1))
    def test_partition_of_unity_and_positivity(self, rs, t):
        vals = to_float(gelfond_basis_values(rs, t))
        assert abs(vals.sum() - 1) < 1e-12
        assert vals.min() >= -1e-14

    def test_endpoints(self):
        rs = (0, 1.5, 2, 4.5)
        assert [float(gelfond_basis_eval(rs, k, 0.0)) for k in range(4)] == [1, 0, 0, 0]
        assert [float(gelfond_basis_eval(rs, k, 1.0)) for k in range(4)] == [0, 0, 0, 1]

    def test_domain(self):
        with pytest.raises(DomainError):
            gelfond_basis_values((0, 1), 1.5)


class TestChebyshev:
    @pytest.mark.parametrize("n", [1, 3, 6, 10])
    def test_classical_reduction(self, n):
        rs = tuple(range(n + 1))
        ts = np.linspace(0.5, 1, 100)
        B = basis_matrix(rs, ts, BasisKind.chebyshev(0.5))
        want = np.array([[oracles.bernstein(n, k, t, 0.5, 1.0) for k in range(n + 1)] for t in ts])
        assert np.max(np.abs(B - want)) <= 1e-12

    @given(exponent_lists(max_n=5), st.floats(0.05, 0.8), st.floats(0, 1))
    def test_table_route_matches_hermite_oracle(self, rs, a, u):
        t = a + (1 - a) * u
        got = basis_matrix(rs, [t], BasisKind.chebyshev(a), EXT, as_mp=True)[0]
        want = oracles.evaluate_rows(oracles.chebyshev_monomial(rs, a), rs, t)
        assert max(abs(float(x - y)) for x, y in zip(got, want)) < 1e-25

    @given(exponent_lists(max_n=4), st.floats(0.1, 0.8), st.floats(0, 1))
    def test_schur_route_matches_table_route(self, rs, a, u):
        t = a + (1 - a) * u
        schur = chebyshev_basis_values(rs, t, Interval(a, 1.0), EXT)
        table = basis_matrix(rs, [t], BasisKind.chebyshev(a), EXT, as_mp=True)[0]
        assert max(abs(float(x - y)) for x, y in zip(schur, table)) < 1e-30

    def test_general_interval(self):
        rs = (0, 1.5, 2.5, 4)
        a, b = 0.4, 2.0
        for t in (0.4, 0.9, 1.7, 2.0):
            direct = [float(chebyshev_basis_eval(rs, k, t, Interval(a, b))) for k in range(4)]
            scaled = basis_matrix(rs, [t / b], BasisKind.chebyshev(a / b))[0]
            np.testing.assert_allclose(direct, scaled, atol=1e-14)

    def test_family_matches_single_dimension(self):
        rs = tuple(float(2 * i) for i in range(12))
        ts = [0.3, 0.55, 0.9]
        fam = basis_matrix_family(rs, ts, BasisKind.chebyshev(0.3), [3, 7, 11])
        for m in (3, 7, 11):
            np.testing.assert_allclose(fam[m], basis_matrix(rs[:m + 1], ts, BasisKind.chebyshev(0.3)),
                                       atol=1e-15)

    def test_no_chebyshev_basis_at_zero(self):
        with pytest.raises(DomainError):
            BasisKind.chebyshev(0.0)


class TestIdentities:
    @given(exponent_lists(max_n=7), st.floats(0, 3), st.floats(0, 1))
    def test_gelfond_two_term_split(self, rs, extra, t):
        assert gelfond_elevation_residual(rs + (rs[-1] + 0.1 + extra,), t) < 1e-14

    @given(exponent_lists(max_n=7), st.floats(0.01, 0.99))
    def test_divided_difference_schur_identity(self, rs, t):
        assert divdiff_schur_identity_residual(rs, t) < 1e-12

    def test_chebyshev_tends_to_gelfond(self):
        gaps = [theorem4_gap((0, 2, 4, 10), a) for a in (1e-2, 1e-3, 1e-4)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 0.2 * gaps[0]


class TestControlPoints:
    @given(exponent_lists(max_n=6), st.lists(st.floats(-3, 3), min_size=7, max_size=7))
    def test_gelfond_against_bruteforce(self, rs, coefs):
        coef = np.array(coefs[:len(rs)])
        P = MuntzElement(rs, coef)
        got = control_points(P, rs, BasisKind.gelfond(), EXT).points[:, 0]
        want = oracles.control_points_bruteforce(rs, coef, oracles.gelfond_monomial(rs))[:, 0]
        assert np.max(np.abs(got - want)) <= 1e-9 * max(1.0, np.max(np.abs(want)))

    @given(exponent_lists(max_n=6), st.floats(0.1, 0.7),
           st.lists(st.floats(-3, 3), min_size=7, max_size=7))
    def test_chebyshev_against_bruteforce(self, rs, a, coefs):
        coef = np.array(coefs[:len(rs)])
        P = MuntzElement(rs, coef)
        got = control_points(P, rs, BasisKind.chebyshev(a), EXT).points[:, 0]
        want = oracles.control_points_bruteforce(rs, coef, oracles.chebyshev_monomial(rs, a))[:, 0]
        assert np.max(np.abs(got - want)) <= 1e-9 * max(1.0, np.max(np.abs(want)))

    def test_embedding_into_larger_space(self):
        P = MuntzElement((0, 2), [[1, 0], [0, 1]])
        poly = control_points(P, (0, 1, 2, 3), BasisKind.gelfond())
        # classical elevation of (1, 0), (1, 0), (1, 1) to degree 3
        want = oracles.classical_elevate([[1, 0], [1, 0], [1, 1]])
        np.testing.assert_allclose(poly.points, want, atol=1e-14)

    def test_missing_exponent(self):
        with pytest.raises(Exception):
            control_points(MuntzElement((0, 1.5), [0, 1]), (0, 1, 2), BasisKind.gelfond())

    def test_polygon_evaluate_reproduces_curve(self):
        rs = (0, 1, 2, 3)
        P = MuntzElement(rs, [[0, 0], [3, 6], [3, -6], [-2, 0]])
        poly = control_points(P, rs, BasisKind.chebyshev(0.2))
        ts = np.linspace(0.2, 1, 9)
        np.testing.assert_allclose(poly.evaluate(ts), P(ts), atol=1e-13)

    def test_polygon_needs_one_point_per_exponent(self):
        with pytest.raises(DomainError):
            ControlPolygon([[0, 0]], (0, 1))


class TestWorkedExamples:
    def test_gelfond_values(self):
        np.testing.assert_allclose(to_float(gelfond_basis_values((0, 1, 2), 0.5)), [0.25, 0.5, 0.25])
        assert float(gelfond_basis_eval((0, 1, 2.5, 4), 3, 0.3)) == pytest.approx(0.3 ** 4)
        assert to_float(gelfond_basis_values((0, 2, 4, 10), 0.7)).sum() == pytest.approx(1, abs=1e-12)

    def test_chebyshev_values(self):
        assert float(chebyshev_basis_eval((0, 1), 0, 0.75, Interval(0.5, 1))) == pytest.approx(0.5)
        rs = (0, 2, 4, 10)
        vals = [float(chebyshev_basis_eval(rs, k, 0.4, Interval(0.1, 1))) for k in range(4)]
        assert sum(vals) == pytest.approx(1, abs=1e-12)

    @given(exponent_lists(max_n=5), st.floats(0.1, 0.8))
    def test_chebyshev_endpoints(self, rs, a):
        n = len(rs) - 1
        B = basis_matrix(rs, [a, 1.0], BasisKind.chebyshev(a))
        np.testing.assert_allclose(B[0], np.eye(n + 1)[0], atol=1e-10)
        np.testing.assert_allclose(B[1], np.eye(n + 1)[n], atol=1e-10)

    def test_chebyshev_zero_orders_at_a(self):
        # B_k vanishes to order k at a: the first k one-sided differences are tiny
        rs, a, h = (0, 1.5, 2.5, 4, 6), 0.3, 1e-3
        B = basis_matrix(rs, [a, a + h, a + 2 * h], BasisKind.chebyshev(a), EXT)
        for k in (2, 3, 4):
            assert abs(B[1][k]) < 10 * h ** 2 and abs(B[2][k]) < 10 * (2 * h) ** 2

    def test_control_point_examples(self):
        rs = (0, 1.5, 2, 4)
        for basis in (BasisKind.gelfond(), BasisKind.chebyshev(0.25)):
            one = control_points(MuntzElement(rs, [1, 0, 0, 0]), rs, basis).points[:, 0]
            np.testing.assert_allclose(one, 1, atol=1e-12)
        top = control_points(MuntzElement(rs, [0, 0, 0, 1]), rs, BasisKind.gelfond()).points[:, 0]
        np.testing.assert_allclose(top, [0, 0, 0, 1], atol=1e-15)
        lin = control_points(MuntzElement((0, 1, 2, 3, 4), [0, 1, 0, 0, 0]), (0, 1, 2, 3, 4),
                             BasisKind.gelfond()).points[:, 0]
        np.testing.assert_allclose(lin, [0, 0.25, 0.5, 0.75, 1], atol=1e-15)

    @pytest.mark.parametrize("basis", [BasisKind.gelfond(), BasisKind.chebyshev(0.3)])
    def test_collocation_agrees_with_elevation(self, basis):
        rs = (0, 1.5, 2.5, 4, 7)
        P = MuntzElement(rs, [[1, 0], [0, 2], [-1, 1], [0.5, 0], [0, -1]])
        a = control_points(P, rs, basis, method="collocation").points
        b = control_points(P, rs, basis, method="elevation").points
        np.testing.assert_allclose(a, b, atol=1e-10)

    def test_gap_examples(self):
        assert theorem4_gap((0, 1, 2), 1e-3) <= 1e-2
        assert theorem4_gap((0,), 0.3) == 0

    def test_identity_examples(self):
        assert divdiff_schur_identity_residual((0, 1, 2), 0.5) <= 1e-12
        assert divdiff_schur_identity_residual((0,), 0.5) == 0
        assert divdiff_schur_identity_residual((0, 2, 4, 10), 0.9, EXT) <= 1e-10

    def test_two_term_split_on_grid(self):
        rs = (0, 0.7, 2, 3.3, 5)
        assert max(gelfond_elevation_residual(rs, t) for t in np.linspace(0, 1, 100)) <= 1e-10
