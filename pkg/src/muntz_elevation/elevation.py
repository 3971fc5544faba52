"""Dimension elevation by corner cutting.

Every step ``E(Lambda_n) -> E(Lambda_{n+1})`` keeps the end points and
replaces each interior point by ``(1 - xi_i) P_{i-1} + xi_i P_i``.

* Over ``[0, 1]`` (Gelfond-Bernstein basis) ``xi_i = 1 - r_i / r_{n+1}``.
* Over ``[a, 1]`` (Chebyshev-Bernstein basis) the weights come from the
  two-point determinant table, see :func:`interval_weights`.
"""
from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _twopoint
from .bases import (BasisKind, ControlPolygon, MuntzElement,
                    basis_matrix_family, control_points, hermite_table, resum)
from .errors import DomainError, NumericalFailure
from .exponents import ExponentSequence, Interval, materialize, validate_exponents
from .numerics import PrecisionContext, with_adaptive_precision

__all__ = [
    "ElevationStep",
    "ElevationTrace",
    "gelfond_weights",
    "interval_weights",
    "elevate_gelfond_step",
    "elevate_interval_step",
    "recover_xi",
    "restriction_matrix",
    "run_elevation",
    "FULL_TRACE_LIMIT",
]

#: Traces up to this many iterations keep every polygon.
FULL_TRACE_LIMIT = 256
#: Beyond the limit only every this-many-th polygon is kept.
SPARSE_STRIDE = 8


@dataclass(frozen=True)
class ElevationStep:
    """Weights of one elevation step ``E(Lambda_n) -> E(Lambda_{n+1})``.

    ``xi[i-1]`` is the weight of ``P_i`` in the new point ``i``; the weight of
    ``P_{i-1}`` is ``left[i-1] = 1 - xi[i-1]``.
    """

    xi: tuple
    source_dim: int
    bits: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(float(x) for x in self.xi))
        if len(self.xi) != self.source_dim:
            raise DomainError(f"step from dimension {self.source_dim} needs {self.source_dim} weights")

    @property
    def left(self) -> tuple:
        """Weights of the left neighbours ``P_{i-1}``."""
        return tuple(1.0 - x for x in self.xi)

    def check(self, tol: float) -> None:
        bad = [(i + 1, x) for i, x in enumerate(self.xi) if not -tol <= x <= 1 + tol]
        if bad:
            i, x = bad[0]
            raise NumericalFailure(f"weight xi_{i} = {x!r} of step {self.source_dim} leaves [0, 1]")


def _cut(points: np.ndarray, xi) -> np.ndarray:
    """One corner-cutting step with right weights `xi`."""
    xi = np.asarray(xi, dtype=float)
    n = points.shape[0] - 1
    new = np.empty((n + 2, points.shape[1]))
    new[0] = points[0]
    new[n + 1] = points[n]
    if n:
        new[1:n + 1] = (1 - xi)[:, None] * points[:n] + xi[:, None] * points[1:]
    return new


def gelfond_weights(exponents, next_exponent: float) -> np.ndarray:
    """Right weights ``xi_i = 1 - r_i / r_{n+1}`` over ``[0, 1]``."""
    rs = validate_exponents(exponents)
    if not next_exponent > rs[-1]:
        raise DomainError(f"next exponent {next_exponent!r} must exceed r_n = {rs[-1]!r}")
    return 1.0 - np.asarray(rs[1:]) / float(next_exponent)


@functools.lru_cache(maxsize=32)
def _interval_weights(rs: tuple, a: float, bits: int) -> tuple:
    table, used = hermite_table(rs, a, PrecisionContext(bits))
    return tuple(np.array([float(x) for x in table.xi(n)]) for n in range(len(rs) - 1)), used


def interval_weights(exponents, a: float, ctx: PrecisionContext | None = None) -> list:
    """Right weights of every step ``Lambda_n -> Lambda_{n+1}`` over ``[a, 1]``.

    Parameters
    ----------
    exponents : sequence of float
        ``Lambda_M``; steps ``n = 0..M-1`` are covered.
    a : float
        ``0 < a < 1``.

    Returns
    -------
    list of ndarray
        Entry ``n`` holds ``xi_1..xi_n``.

    Notes
    -----
    ``xi_i`` is the ratio of the leading Taylor coefficients at ``a`` of
    ``B_i`` in ``E(Lambda_n)`` and in ``E(Lambda_{n+1})``, since ``P_i'``
    is the only new control point whose basis function vanishes to order
    exactly ``i`` there.  Those coefficients are ratios of two-point
    Hermite determinants, which the table provides for all windows.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a!r}")
    weights, _ = _interval_weights(rs, float(a), ctx.bits)
    return list(weights)


def interval_weights_bits(exponents, a: float, ctx: PrecisionContext | None = None) -> int:
    """Precision at which :func:`interval_weights` was validated."""
    ctx = ctx or PrecisionContext()
    return _interval_weights(validate_exponents(exponents), float(a), ctx.bits)[1]


def elevate_gelfond_step(polygon: ControlPolygon, next_exponent: float) -> ControlPolygon:
    """Elevate a Gelfond polygon by one exponent with the exact rule.

    Examples
    --------
    >>> p = ControlPolygon([0.0, 1.0], (0, 1))
    >>> elevate_gelfond_step(p, 2).points.ravel().tolist()
    [0.0, 0.5, 1.0]
    """
    if polygon.basis.kind != "gelfond":
        raise DomainError("elevate_gelfond_step needs a Gelfond polygon over [0, 1]")
    xi = gelfond_weights(polygon.exponents, next_exponent)
    return ControlPolygon(_cut(polygon.points, xi), polygon.exponents + (float(next_exponent),),
                          polygon.basis)


def recover_xi(old: np.ndarray, new: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Recover the weights of a corner-cutting step from two polygons.

    Each interior point ``new[i]`` is projected onto the line through
    ``old[i-1]`` and ``old[i]``.

    Returns
    -------
    xi : ndarray
        Projection coefficients; ``nan`` where the old segment is degenerate.
    offset : ndarray
        Distance of ``new[i]`` from that line.
    """
    old = np.asarray(old, dtype=float)
    new = np.asarray(new, dtype=float)
    if old.ndim == 1:
        old, new = old[:, None], new[:, None]
    if new.shape[0] != old.shape[0] + 1:
        raise DomainError("the new polygon must have exactly one more point")
    d = old[1:] - old[:-1]
    w = new[1:-1] - old[:-1]
    dd = np.einsum("ij,ij->i", d, d)
    scale = max(1.0, float(np.max(np.abs(old))))
    with np.errstate(invalid="ignore", divide="ignore"):
        xi = np.where(dd > (1e-14 * scale) ** 2, np.einsum("ij,ij->i", w, d) / dd, np.nan)
    off = np.linalg.norm(w - np.nan_to_num(xi)[:, None] * d, axis=1)
    return xi, off


def _interval_of(basis: BasisKind) -> float:
    if basis.kind != "chebyshev":
        raise DomainError("elevate_interval_step needs a Chebyshev polygon over [a, b], a > 0")
    return basis.a / basis.b


def elevate_interval_step(polygon: ControlPolygon, next_exponent: float,
                          ctx: PrecisionContext | None = None) -> tuple[ControlPolygon, ElevationStep]:
    """Elevate a Chebyshev-Bernstein polygon over ``[a, b]`` by one exponent.

    The weights are validated to lie in ``[0, 1]`` up to
    ``comparison_tolerance``; on violation the computation is repeated once
    at four times the precision before a :class:`NumericalFailure` is raised.
    """
    ctx = ctx or PrecisionContext()
    a = _interval_of(polygon.basis)
    rs = polygon.exponents + (float(next_exponent),)
    validate_exponents(rs)
    n = polygon.m
    step = None
    for attempt in (ctx, ctx.with_bits(4 * ctx.bits)):
        xi = interval_weights(rs, a, attempt)[n]
        step = ElevationStep(xi, n, interval_weights_bits(rs, a, attempt))
        try:
            step.check(ctx.comparison_tolerance)
            break
        except NumericalFailure:
            if attempt is not ctx:
                raise
    return ControlPolygon(_cut(polygon.points, step.xi), rs, polygon.basis), step


# ---------------------------------------------------------------------------
# Restriction matrices

def _restriction(rs: tuple, a: float, bits: int):
    C = _twopoint.monomial_coefficients(rs, a, bits)
    AH = _twopoint.gelfond_monomial_coefficients(rs, bits)
    m = len(rs) - 1
    # C^T S = AH^T: column j of S holds the [a, 1] coefficients of H_j
    CT = [[C[i][l] for i in range(m + 1)] for l in range(m + 1)]
    AHT = [[AH[j][l] for j in range(m + 1)] for l in range(m + 1)]
    return _twopoint.solve(CT, AHT, bits)


def _matrix_gap(lo, hi) -> float:
    return max(abs(float(x - y)) for u, v in zip(lo, hi) for x, y in zip(u, v))


@functools.lru_cache(maxsize=16)
def _restriction_validated(rs: tuple, a: float, start: int, tol: float):
    return with_adaptive_precision(lambda b: _restriction(rs, a, b), _matrix_gap, start, tol)


def restriction_matrix(exponents, a: float, ctx: PrecisionContext | None = None,
                       *, return_bits: bool = False) -> np.ndarray:
    """Matrix ``S`` mapping Gelfond control points to those over ``[a, 1]``.

    ``eta_i(P, [a, 1]) = sum_j S[i, j] eta_j(P, [0, 1])`` for every ``P`` in
    ``E(Lambda_n)``.  Column ``j`` holds the Chebyshev-Bernstein coefficients
    of the Gelfond function ``H_j``; both bases are expanded in monomials and
    the change of basis is solved at adaptive precision.

    Raises
    ------
    NumericalFailure
        If an entry leaves ``[0, 1]`` or a row sum differs from one by more
        than ``comparison_tolerance`` even at four times the precision.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a!r}")
    tol = ctx.comparison_tolerance
    start = max(ctx.bits, 64)
    for attempt in (start, 4 * start):
        rows, bits = _restriction_validated(rs, float(a), attempt, min(tol, 1e-12) * 1e-3)
        S = np.array([[float(x) for x in row] for row in rows])
        ok = (S.min() >= -tol and S.max() <= 1 + tol
              and np.max(np.abs(S.sum(axis=1) - 1)) <= tol)
        if ok:
            return (S, bits) if return_bits else S
    raise NumericalFailure(f"restriction matrix entries leave [0, 1] (min {S.min()!r}, max {S.max()!r})")


# ---------------------------------------------------------------------------
# Iterated elevation

@dataclass
class ElevationTrace:
    """Result of :func:`run_elevation`.

    Attributes
    ----------
    polygons : dict
        Iteration index -> ControlPolygon.  All iterations are stored when
        ``iterations <= 256``; otherwise every 8th and the last one.
    steps : list of ElevationStep
        ``steps[j - 1]`` produced polygon ``j``.
    metrics : list of dict
        Filled by the diagnostics layer.
    """

    initial_dim: int
    iterations: int
    basis: BasisKind
    exponents: tuple
    polygons: dict = field(default_factory=dict)
    steps: list = field(default_factory=list)
    metrics: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    escalations: list = field(default_factory=list)
    failure: str | None = None
    wall_time: float = 0.0

    @property
    def completed(self) -> int:
        return len(self.steps)

    def stored_iterations(self) -> list:
        return sorted(self.polygons)

    def polygon(self, j: int) -> ControlPolygon:
        try:
            return self.polygons[j]
        except KeyError:
            raise KeyError(f"iteration {j} is not stored in this trace") from None

    @property
    def final(self) -> ControlPolygon:
        return self.polygons[max(self.polygons)]


def _keep(j: int, J: int) -> bool:
    return J <= FULL_TRACE_LIMIT or j % SPARSE_STRIDE == 0 or j == J


def _locate(seq: ExponentSequence, P: MuntzElement, tol: float) -> int:
    top = max(P.exponents[k] for k in range(len(P.exponents)) if np.any(P.coefficients[k] != 0)) \
        if np.any(P.coefficients != 0) else 0.0
    n = 0
    while True:
        r = seq.exponent(n)
        if abs(r - top) <= tol * max(1.0, top):
            return n
        if r > top:
            raise DomainError(f"exponent {top!r} of the initial curve is not in the sequence")
        n += 1


def _rescale_element(P: MuntzElement, b: float) -> MuntzElement:
    scale = np.asarray(P.exponents)
    return MuntzElement(P.exponents, P.coefficients * (b ** scale)[:, None])


def run_elevation(initial, seq: ExponentSequence, interval: Interval, iterations: int,
                  ctx: PrecisionContext | None = None, *, verify_every: int = 10,
                  verify_at=None, sample_count: int = 17,
                  on_step: Callable | None = None) -> ElevationTrace:
    """Iterate dimension elevation `iterations` times.

    Parameters
    ----------
    initial : MuntzElement or ControlPolygon
        Curve to elevate.  A monomial-form curve starts from the smallest
        space ``E(Lambda_n)`` of the sequence that holds it.
    seq : ExponentSequence
    interval : Interval
        ``a = 0`` selects the exact ``[0, 1]`` scheme, ``a > 0`` the
        Chebyshev-Bernstein scheme.  ``[a, b]`` is handled as ``[a/b, 1]``.
    iterations : int
        Number of elevation steps ``J >= 1``.
    ctx : PrecisionContext, optional
    verify_every : int
        Re-sum the polygon against the basis every this many iterations
        (and at the last one) at `sample_count` points; ``0`` disables it.
    verify_at : iterable of int, optional
        Explicit verification iterations; overrides `verify_every`.
    on_step : callable, optional
        ``on_step(j, polygon, step)`` after each step.

    Raises
    ------
    NumericalFailure
        Carries ``iteration`` and the partial ``trace``.
    """
    ctx = ctx or PrecisionContext()
    if int(iterations) != iterations or iterations < 1:
        raise DomainError(f"iterations must be a positive integer, got {iterations!r}")
    J = int(iterations)
    started = time.perf_counter()
    working = interval.rescaled() if interval.b != 1 else interval
    basis = BasisKind.for_interval(working)
    tol = ctx.comparison_tolerance

    if isinstance(initial, MuntzElement):
        P = _rescale_element(initial, interval.b) if interval.b != 1 else initial
        n = _locate(seq, P, tol)
        poly = control_points(P, materialize(seq, n), basis, ctx)
        reference = P
    elif isinstance(initial, ControlPolygon):
        n = initial.m
        if initial.exponents != materialize(seq, n):
            raise DomainError("initial polygon exponents are not a prefix of the sequence")
        poly = ControlPolygon(initial.points, initial.exponents, basis)
        reference = None
    else:
        raise DomainError("initial must be a MuntzElement or a ControlPolygon")

    rs = materialize(seq, n + J)
    trace = ElevationTrace(n, J, basis, rs)
    trace.polygons[0] = poly
    if verify_at is not None:
        checkpoints = {int(j) for j in verify_at if 1 <= int(j) <= J}
    elif verify_every:
        checkpoints = set(range(verify_every, J + 1, verify_every)) | {J}
    else:
        checkpoints = set()
    ts = np.linspace(working.a, working.b, sample_count)
    family = {}
    if checkpoints:
        family = basis_matrix_family(rs, ts, basis, {n} | {n + j for j in checkpoints},
                                     ctx.extended(), as_mp=True)
    if reference is not None:
        mp = ctx.extended().mp
        want = np.array([[float(v) for v in reference.evaluate_mp(t, mp)] for t in ts])
    elif checkpoints:
        want = resum(poly.points, family[n])

    if basis.kind == "chebyshev":
        weights = interval_weights(rs, working.a, ctx)
        wbits = interval_weights_bits(rs, working.a, ctx)
        if wbits > max(ctx.bits, 64):
            trace.escalations.append({"what": "elevation weights", "bits": wbits})

    points = poly.points
    for j in range(1, J + 1):
        m = n + j - 1
        if basis.kind == "gelfond":
            xi = gelfond_weights(rs[:m + 1], rs[m + 1])
            step = ElevationStep(xi, m)
        else:
            step = ElevationStep(weights[m], m, wbits)
        try:
            step.check(tol)
        except NumericalFailure as exc:
            trace.failure = str(exc)
            exc.iteration, exc.trace = j, trace
            raise
        points = _cut(points, step.xi)
        current = ControlPolygon(points, rs[:m + 2], basis)
        trace.steps.append(step)
        if _keep(j, J):
            trace.polygons[j] = current
        if j in checkpoints:
            got = resum(points, family[m + 1])
            scale = max(1.0, float(np.max(np.abs(want))))
            err = float(np.max(np.abs(got - want))) / scale
            trace.checks.append({"iteration": j, "relative_error": err})
            if not err <= ctx.residual_tolerance:
                exc = NumericalFailure(
                    f"re-summed polygon misses the curve by {err:.3e} at iteration {j}", j)
                trace.failure = str(exc)
                exc.trace = trace
                raise exc
        if on_step is not None:
            on_step(j, current, step)
    trace.wall_time = time.perf_counter() - started
    return trace
