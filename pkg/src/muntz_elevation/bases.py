"""Gelfond-Bernstein and Chebyshev-Bernstein bases of Muntz spaces.

Two evaluation routes exist for the Chebyshev-Bernstein basis over
``[a, b]``:

* :func:`chebyshev_basis_eval` applies the closed Schur-function form
  directly.  It costs several confluent determinants per value and is meant
  for small spaces and cross-checks.
* :func:`basis_matrix` uses two-point Hermite determinant tables, which give
  every basis function of every dimension up to ``m`` in ``O(m**3)``
  operations per sample point.

Both run at adaptive precision: the result is accepted once two runs at
``b`` and ``2b`` bits agree.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _twopoint
from .errors import ControlPointError, DomainError
from .exponents import (Interval, bottom_partition, partition_from_exponents,
                        validate_exponents)
from .numerics import (PrecisionContext, divided_difference,
                       divided_difference_amplification,
                       divided_difference_suffixes, eval_ft, mp_context,
                       with_adaptive_precision)
from .schur import ArgumentMultiset, schur_all_ones, schur_eval

__all__ = [
    "MuntzElement",
    "BasisKind",
    "ControlPolygon",
    "gelfond_basis_eval",
    "gelfond_basis_values",
    "chebyshev_basis_eval",
    "chebyshev_basis_values",
    "basis_matrix",
    "basis_matrix_family",
    "resum",
    "hermite_table",
    "collocation_nodes",
    "control_points",
    "theorem4_gap",
    "divdiff_schur_identity_residual",
    "gelfond_elevation_residual",
    "sample_grid",
]

#: Spaces up to this dimension use the closed Schur form by default.
SCHUR_FORM_MAX_N = 12


@dataclass(frozen=True, eq=False)
class MuntzElement:
    """``P(t) = sum_k t**r_k A_k`` with points ``A_k`` in ``R**s``.

    Parameters
    ----------
    exponents : sequence of float
        Materialized ``Lambda_n``.
    coefficients : array_like, shape (n + 1,) or (n + 1, s)
        One coefficient point per exponent.
    """

    exponents: tuple
    coefficients: np.ndarray

    def __post_init__(self):
        rs = validate_exponents(self.exponents)
        coef = np.array(self.coefficients, dtype=float)
        if coef.ndim == 1:
            coef = coef[:, None]
        if coef.ndim != 2 or coef.shape[0] != len(rs):
            raise DomainError(
                f"need {len(rs)} coefficient points, got array of shape {np.shape(self.coefficients)}")
        if not np.all(np.isfinite(coef)):
            raise DomainError("coefficients must be finite")
        coef.setflags(write=False)
        object.__setattr__(self, "exponents", rs)
        object.__setattr__(self, "coefficients", coef)

    @property
    def n(self) -> int:
        return len(self.exponents) - 1

    @property
    def dim(self) -> int:
        """Dimension ``s`` of the ambient space."""
        return self.coefficients.shape[1]

    def __call__(self, ts) -> np.ndarray:
        """Evaluate at an array of parameters; returns shape ``(len(ts), s)``."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        powers = ts[:, None] ** np.asarray(self.exponents)[None, :]
        return powers @ self.coefficients

    def derivative(self, ts) -> np.ndarray:
        """``P'(t) = sum_k r_k t**(r_k - 1) A_k``.

        Terms with ``0 < r_k < 1`` and a nonzero coefficient are unbounded at
        ``t = 0`` and give ``inf`` there.
        """
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        live = [k for k in range(1, len(self.exponents)) if np.any(self.coefficients[k] != 0)]
        out = np.zeros((ts.size, self.dim))
        if not live:
            return out
        rs = np.asarray(self.exponents)[live]
        with np.errstate(divide="ignore"):
            powers = rs[None, :] * ts[:, None] ** (rs[None, :] - 1)
        return powers @ self.coefficients[live]

    def evaluate_mp(self, t, mp) -> list:
        """Evaluate at one parameter in the given mpmath context."""
        t = mp.mpf(t)
        pw = [eval_ft(t, mp.mpf(r)) for r in self.exponents]
        return [mp.fsum(p * mp.mpf(float(c)) for p, c in zip(pw, self.coefficients[:, d]))
                for d in range(self.dim)]

    @classmethod
    def monomial(cls, exponents, k: int, point=1.0) -> "MuntzElement":
        """The element ``t**r_k * point`` of ``E(Lambda_n)``."""
        rs = validate_exponents(exponents)
        point = np.atleast_1d(np.asarray(point, dtype=float))
        coef = np.zeros((len(rs), point.size))
        coef[k] = point
        return cls(rs, coef)


@dataclass(frozen=True)
class BasisKind:
    """Which Bernstein-like basis a polygon refers to.

    Use :meth:`gelfond` for the ``[0, 1]`` basis or :meth:`chebyshev` for
    the basis over ``[a, b]`` with ``a > 0``.
    """

    kind: str = "gelfond"
    interval: Interval = field(default_factory=Interval)

    def __post_init__(self):
        if self.kind not in ("gelfond", "chebyshev"):
            raise DomainError(f"unknown basis kind {self.kind!r}")
        if self.kind == "gelfond" and (self.interval.a != 0 or self.interval.b != 1):
            raise DomainError("the Gelfond-Bernstein basis lives on [0, 1]")
        if self.kind == "chebyshev" and not self.interval.a > 0:
            raise DomainError("Chebyshev-Bernstein bases need a > 0; they do not exist over [0, b]")

    @classmethod
    def gelfond(cls) -> "BasisKind":
        return cls("gelfond", Interval(0.0, 1.0))

    @classmethod
    def chebyshev(cls, a: float, b: float = 1.0) -> "BasisKind":
        return cls("chebyshev", Interval(a, b))

    @classmethod
    def for_interval(cls, interval: Interval) -> "BasisKind":
        """Gelfond basis when ``a == 0`` (``b`` must be 1), Chebyshev otherwise."""
        if interval.a == 0:
            return cls("gelfond", interval)
        return cls("chebyshev", interval)

    @property
    def a(self) -> float:
        return self.interval.a

    @property
    def b(self) -> float:
        return self.interval.b

    def to_dict(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b}


@dataclass(frozen=True, eq=False)
class ControlPolygon:
    """Control points of a curve in ``E(Lambda_m)`` for a given basis."""

    points: np.ndarray
    exponents: tuple
    basis: BasisKind = field(default_factory=BasisKind.gelfond)

    def __post_init__(self):
        rs = validate_exponents(self.exponents)
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[0] != len(rs):
            raise DomainError(f"need {len(rs)} control points, got {pts.shape[0]}")
        pts.setflags(write=False)
        object.__setattr__(self, "exponents", rs)
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return len(self.exponents) - 1

    def __len__(self):
        return self.points.shape[0]

    def evaluate(self, ts, ctx: PrecisionContext | None = None) -> np.ndarray:
        """Re-sum the polygon against its basis at the parameters `ts`."""
        return resum(self.points, basis_matrix(self.exponents, ts, self.basis, ctx, as_mp=True))


def _mp_of(B):
    """mpmath context matching the precision of an object array of mpf."""
    x = B.flat[0]
    return mp_context(x.context.prec) if hasattr(x, "context") else mp_context(64)


# ---------------------------------------------------------------------------
# Gelfond-Bernstein basis

@functools.lru_cache(maxsize=128)
def _gelfond_guard_bits(rs: tuple) -> int:
    """Bits lost by the suffix divided differences of ``f_t`` at `rs`."""
    n = len(rs) - 1
    worst = 0.0
    logpref = 0.0
    for k in range(n - 1, -1, -1):
        logpref += math.log2(rs[k + 1])
        worst = max(worst, logpref + divided_difference_amplification(rs[k:]))
    return int(math.ceil(worst)) + 16


def gelfond_basis_values(exponents, t, ctx: PrecisionContext | None = None) -> list:
    """All Gelfond-Bernstein values ``H_0(t), ..., H_n(t)`` as mpf.

    ``H_k = (-1)**(n-k) r_{k+1}...r_n [r_k, ..., r_n] f_t`` and ``H_n = t**r_n``.
    One Newton tableau yields every suffix divided difference.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    if not 0 <= t <= 1:
        raise DomainError(f"t must lie in [0, 1], got {t!r}")
    n = len(rs) - 1
    bits = ctx.bits + _gelfond_guard_bits(rs)
    wctx = ctx.with_bits(bits)
    mp = wctx.mp
    tt = mp.mpf(t)
    vals = [eval_ft(tt, mp.mpf(r)) for r in rs]
    dd = divided_difference_suffixes(rs, vals, wctx)
    out = [None] * (n + 1)
    pref = mp.mpf(1)
    for k in range(n, -1, -1):
        if k < n:
            pref *= -mp.mpf(rs[k + 1])
        out[k] = pref * dd[k]
    return out


def gelfond_basis_eval(exponents, k: int, t, ctx: PrecisionContext | None = None):
    """Gelfond-Bernstein basis function ``H_k`` of ``E(Lambda_n)`` at `t`.

    Examples
    --------
    >>> [float(gelfond_basis_eval((0, 1, 2), k, 0.5)) for k in range(3)]
    [0.25, 0.5, 0.25]
    """
    rs = validate_exponents(exponents)
    n = len(rs) - 1
    if not 0 <= k <= n:
        raise DomainError(f"basis index {k} out of range 0..{n}")
    if not 0 <= t <= 1:
        raise DomainError(f"t must lie in [0, 1], got {t!r}")
    ctx = ctx or PrecisionContext()
    if k == n:
        return eval_ft(ctx.mp.mpf(t), ctx.mp.mpf(rs[n]))
    wctx = ctx.with_bits(ctx.bits + _gelfond_guard_bits(rs))
    mp = wctx.mp
    tt = mp.mpf(t)
    dd = divided_difference(rs[k:], [eval_ft(tt, mp.mpf(r)) for r in rs[k:]], wctx)
    pref = mp.mpf(-1) ** (n - k)
    for r in rs[k + 1:]:
        pref *= r
    return pref * dd


# ---------------------------------------------------------------------------
# Chebyshev-Bernstein basis, closed Schur form

def _schur_closed_form(rs, ks, t, a, b, bits):
    ctx = PrecisionContext(bits)
    mp = ctx.mp
    n = len(rs) - 1
    lam = partition_from_exponents(rs, mp)
    lam0 = bottom_partition(lam)
    A, B, T = mp.mpf(a), mp.mpf(b), mp.mpf(t)
    pre = schur_all_ones(lam, ctx) / schur_all_ones(lam0, ctx)
    cache = {}

    def S(part, na, nb, extra=None):
        key = (len(part), na, nb, extra)
        if key not in cache:
            entries = {}
            if na:
                entries[A] = na
            if nb:
                entries[B] = nb
            if extra is not None:
                entries[extra] = entries.get(extra, 0) + 1
            cache[key] = schur_eval(part, ArgumentMultiset(tuple(entries.items())), ctx)
        return cache[key]

    out = []
    for k in ks:
        bern = mp.binomial(n, k) * (T - A) ** k * (B - T) ** (n - k) / (B - A) ** n
        if bern == 0:
            out.append(mp.mpf(0))
            continue
        z = A * B / T
        num = S(lam0, n - k, k) * T ** mp.mpf(lam.parts[0]) * S(lam, n - k, k, z)
        den = S(lam, n + 1 - k, k) * S(lam, n - k, k + 1)
        out.append(pre * bern * num / den)
    return out


def _check_cheb(rs, t, interval):
    if not interval.a > 0:
        raise DomainError("Chebyshev-Bernstein bases need a > 0; they do not exist over [0, b]")
    if not interval.contains(t):
        raise DomainError(f"t={t!r} lies outside [{interval.a}, {interval.b}]")


def _rel_gap(lo, hi) -> float:
    scale = max(max((abs(float(x)) for x in hi), default=0.0), 1e-300)
    return max((abs(float(x - y)) for x, y in zip(lo, hi)), default=0.0) / scale


def chebyshev_basis_values(exponents, t, interval: Interval, ctx: PrecisionContext | None = None,
                           ks=None) -> list:
    """Chebyshev-Bernstein values ``B_k(t)`` over `interval` via the Schur form.

    Schur values shared by neighbouring basis functions are computed once.
    The computation is repeated at doubled precision until the relative
    change drops below ``2**-bits``.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    _check_cheb(rs, t, interval)
    n = len(rs) - 1
    ks = list(range(n + 1)) if ks is None else list(ks)
    for k in ks:
        if not 0 <= k <= n:
            raise DomainError(f"basis index {k} out of range 0..{n}")
    if n == 0:
        return [ctx.mp.mpf(1)] * len(ks)
    vals, _ = with_adaptive_precision(
        lambda bits: _schur_closed_form(rs, ks, t, interval.a, interval.b, bits),
        _rel_gap, ctx.bits + 32 + 4 * n, 2.0 ** -ctx.bits)
    return vals


def chebyshev_basis_eval(exponents, k: int, t, interval: Interval, ctx: PrecisionContext | None = None):
    """Chebyshev-Bernstein basis function ``B_k`` of ``E(Lambda_n)`` over `interval`.

    Examples
    --------
    >>> float(chebyshev_basis_eval((0, 1), 0, 0.75, Interval(0.5, 1.0)))
    0.5
    """
    return chebyshev_basis_values(exponents, t, interval, ctx, ks=[k])[0]


# ---------------------------------------------------------------------------
# Determinant-table route

_hermite_cached = functools.lru_cache(maxsize=6)(
    lambda rs, a, bits: _twopoint.HermiteTable(rs, a, bits))
# validated precision per (exponents, a); filled by hermite_table
_VALIDATED_BITS: dict = {}


def _xi_gap(lo, hi) -> float:
    n = len(hi.r) - 2
    gap = 0.0
    for s in range(1, n + 1):
        for x, y in zip(lo.xi(s), hi.xi(s)):
            gap = max(gap, abs(float(x - y)))
    return gap


def hermite_table(exponents, a: float, ctx: PrecisionContext | None = None):
    """Determinant table over ``[a, 1]`` at validated precision.

    The precision is doubled until every elevation weight agrees to
    ``1e-20`` between consecutive precisions; the table at the higher one is
    returned.  Returns ``(table, bits)``.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    key = (rs, float(a))
    start = max(ctx.bits, 64)
    known = _VALIDATED_BITS.get(key)
    if known is not None and known >= start:
        return _hermite_cached(rs, float(a), known), known
    if len(rs) <= 2:
        bits = 2 * start
        _VALIDATED_BITS[key] = bits
        return _hermite_cached(rs, float(a), bits), bits
    table, bits = with_adaptive_precision(
        lambda b: _hermite_cached(rs, float(a), b), _xi_gap, start, 1e-20)
    _VALIDATED_BITS[key] = bits
    return table, bits


def _table_values(rs, a, ts, bits, m):
    table = _hermite_cached(rs, float(a), bits)
    return table.basis_values(ts, m)[m]


def basis_matrix(exponents, ts, basis: BasisKind, ctx: PrecisionContext | None = None,
                 *, as_mp: bool = False) -> np.ndarray:
    """Basis values ``B[i, k] = basis_k(ts[i])`` for the whole space.

    Parameters
    ----------
    exponents : sequence of float
        ``Lambda_m``.
    ts : sequence of float
        Sample parameters inside the basis interval.
    basis : BasisKind
    ctx : PrecisionContext, optional
    as_mp : bool
        Return an object array of mpf instead of floats.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    ts = [float(t) for t in np.atleast_1d(ts)]
    m = len(rs) - 1
    if basis.kind == "gelfond":
        rows = [gelfond_basis_values(rs, t, ctx) for t in ts]
        B = np.array(rows, dtype=object)
    else:
        a, b = basis.a, basis.b
        for t in ts:
            _check_cheb(rs, t, basis.interval)
        us = [min(max(t / b, a / b), 1.0) for t in ts]
        if m == 0:
            B = np.array([[ctx.mp.mpf(1)] for _ in ts], dtype=object)
        else:
            _, bits = hermite_table(rs, a / b, ctx)
            lo = _table_values(rs, a / b, us, bits // 2, m)
            hi = _table_values(rs, a / b, us, bits, m)
            gap = max(abs(float(x - y)) for x, y in zip(lo.flat, hi.flat))
            while gap > 2.0 ** -(ctx.bits + 8):
                bits *= 2
                lo, hi = hi, _table_values(rs, a / b, us, bits, m)
                gap = max(abs(float(x - y)) for x, y in zip(lo.flat, hi.flat))
            B = _twopoint.to_mpmath(hi, bits) if as_mp else hi
    if as_mp:
        return B
    return np.array([[float(x) for x in row] for row in B])


def basis_matrix_family(exponents, ts, basis: BasisKind, dims, ctx: PrecisionContext | None = None,
                        *, as_mp: bool = False) -> dict:
    """Basis matrices of ``E(Lambda_m)`` for several prefixes ``m`` in `dims`.

    For the Chebyshev-Bernstein basis one table pass yields every ``m`` up
    to ``max(dims)``, which is much cheaper than separate
    :func:`basis_matrix` calls.  Returns ``{m: matrix}``.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    dims = sorted(set(int(m) for m in dims))
    if not dims or dims[0] < 0 or dims[-1] >= len(rs):
        raise DomainError(f"dimensions {dims} out of range for {len(rs)} exponents")
    if basis.kind == "gelfond" or dims[-1] == 0:
        return {m: basis_matrix(rs[:m + 1], ts, basis, ctx, as_mp=as_mp) for m in dims}
    ts = [float(t) for t in np.atleast_1d(ts)]
    for t in ts:
        _check_cheb(rs, t, basis.interval)
    a, b = basis.a / basis.b, basis.b
    us = [min(max(t / b, a), 1.0) for t in ts]
    top = dims[-1]
    full = rs[:top + 1]
    _, bits = hermite_table(full, a, ctx)

    def family(nbits):
        vals = _hermite_cached(full, float(a), nbits).basis_values(us, top)
        return {m: vals[m] for m in dims}

    def gap(lo, hi):
        return max(abs(float(x - y)) for m in dims for x, y in zip(lo[m].flat, hi[m].flat))

    lo, hi = family(bits // 2), family(bits)
    while gap(lo, hi) > 2.0 ** -(ctx.bits + 8):
        bits *= 2
        lo, hi = hi, family(bits)
    if as_mp:
        return {m: _twopoint.to_mpmath(B, bits) for m, B in hi.items()}
    return {m: np.array([[float(x) for x in row] for row in B]) for m, B in hi.items()}


def resum(points: np.ndarray, B) -> np.ndarray:
    """``sum_k points[k] * B[:, k]`` with exact accumulation of mpf rows."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    mp = _mp_of(B)
    cols = [[mp.mpf(float(x)) for x in col] for col in points.T]
    out = np.empty((len(B), len(cols)))
    for i, row in enumerate(B):
        for d, col in enumerate(cols):
            out[i, d] = float(mp.fdot(list(row), col))
    return out


# ---------------------------------------------------------------------------
# Control points

def collocation_nodes(n: int, basis: BasisKind) -> list:
    """``n + 1`` Chebyshev-distributed nodes in the open basis interval."""
    lo, hi = basis.a, basis.b
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return sorted(mid + half * math.cos((2 * j + 1) * math.pi / (2 * (n + 1))) for j in range(n + 1))


def sample_grid(basis: BasisKind, count: int = 64) -> np.ndarray:
    """Equispaced grid over the basis interval, endpoints included."""
    return np.linspace(basis.a, basis.b, count)


def _embed(P: MuntzElement, target: tuple, tol: float) -> np.ndarray:
    """Coefficients of `P` re-indexed on `target`."""
    coef = np.zeros((len(target), P.dim))
    for r, c in zip(P.exponents, P.coefficients):
        hits = [i for i, x in enumerate(target) if abs(x - r) <= tol * max(1.0, abs(r))]
        if not hits:
            if np.any(c != 0):
                raise DomainError(f"exponent {r!r} of P is not in the target space")
            continue
        coef[hits[0]] += c
    return coef


def _gelfond_by_elevation(coef: np.ndarray, rs: tuple) -> np.ndarray:
    """Gelfond control points of ``sum_k t**r_k coef_k`` over ``Lambda_m``.

    ``t**r_j`` is the last Gelfond basis function of ``E(Lambda_j)``, so the
    polygon is grown one exponent at a time with the exact corner cutting
    rule, adding each monomial at the moment it enters.
    """
    poly = coef[:1].copy()
    for j in range(1, len(rs)):
        w = np.asarray(rs[1:j]) / rs[j]
        new = np.empty((j + 1, coef.shape[1]))
        new[0] = poly[0]
        new[j] = poly[j - 1]
        new[1:j] = w[:, None] * poly[:j - 1] + (1 - w)[:, None] * poly[1:j]
        new[j] += coef[j]
        poly = new
    return poly


def _collocate(P: MuntzElement, rs: tuple, basis: BasisKind, ctx: PrecisionContext) -> np.ndarray:
    n = len(rs) - 1
    nodes = collocation_nodes(n, basis)

    def solve(bits):
        wctx = ctx.with_bits(bits)
        B = basis_matrix(rs, nodes, basis, wctx, as_mp=True)
        mp = wctx.mp
        A = mp.matrix([[mp.mpf(x) for x in row] for row in B])
        vals = [P.evaluate_mp(t, mp) for t in nodes]
        cols = []
        for d in range(P.dim):
            rhs = mp.matrix([v[d] for v in vals])
            x, _ = mp.qr_solve(A, rhs)
            cols.append([x[i] for i in range(n + 1)])
        return cols

    def gap(lo, hi):
        scale = max(1.0, max(abs(float(x)) for col in hi for x in col))
        return max(abs(float(x - y)) for c1, c2 in zip(lo, hi) for x, y in zip(c1, c2)) / scale

    cols, _ = with_adaptive_precision(solve, gap, ctx.bits + 32, ctx.comparison_tolerance * 1e-3)
    return np.array([[float(x) for x in col] for col in cols]).T


def _interval_by_elevation(coef: np.ndarray, rs: tuple, basis: BasisKind, ctx) -> np.ndarray:
    from .elevation import interval_weights, _cut

    top = max([i for i in range(len(rs)) if np.any(coef[i] != 0)], default=0)
    base = rs[:top + 1]
    P0 = MuntzElement(base, coef[:top + 1])
    if top == 0:
        pts = np.repeat(coef[:1], 1, axis=0)
    else:
        pts = _collocate(P0, base, basis, ctx)
    if top == len(rs) - 1:
        return pts
    weights = interval_weights(rs, basis.a / basis.b, ctx)
    for n in range(top, len(rs) - 1):
        pts = _cut(pts, weights[n])
    return pts


def control_points(P: MuntzElement, target_exponents, basis: BasisKind,
                   ctx: PrecisionContext | None = None, method: str = "auto") -> ControlPolygon:
    """Coefficients of `P` in the basis of ``E(target_exponents)``.

    Parameters
    ----------
    P : MuntzElement
        Curve in monomial form; its exponents must occur in the target.
    target_exponents : sequence of float
        ``Lambda_m``.
    basis : BasisKind
    ctx : PrecisionContext, optional
    method : {"auto", "collocation", "elevation"}
        ``collocation`` solves the square system at Chebyshev nodes by QR.
        ``elevation`` grows the polygon from the smallest space holding `P`
        with the corner-cutting weights.  ``auto`` picks ``elevation``.

    Returns
    -------
    ControlPolygon
        Validated to reproduce `P` on a 64-point grid within
        ``residual_tolerance * (1 + max |b_k|)``.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(target_exponents)
    coef = _embed(P, rs, ctx.comparison_tolerance)
    if method not in ("auto", "collocation", "elevation"):
        raise DomainError(f"unknown method {method!r}")
    if method == "collocation":
        pts = _collocate(MuntzElement(rs, coef), rs, basis, ctx)
    elif basis.kind == "gelfond":
        pts = _gelfond_by_elevation(coef, rs)
    else:
        pts = _interval_by_elevation(coef, rs, basis, ctx)
    poly = ControlPolygon(pts, rs, basis)
    _check_reproduction(poly, MuntzElement(rs, coef), ctx)
    return poly


def _check_reproduction(poly: ControlPolygon, P: MuntzElement, ctx: PrecisionContext):
    ts = sample_grid(poly.basis, 64)
    got = poly.evaluate(ts, ctx)
    mp = ctx.extended().mp
    want = np.array([[float(v) for v in P.evaluate_mp(t, mp)] for t in ts])
    err = float(np.max(np.abs(got - want)))
    bound = ctx.residual_tolerance * (1.0 + float(np.max(np.abs(poly.points))))
    if not err <= bound:
        raise ControlPointError(
            f"control points reproduce the curve only to {err:.3e} (bound {bound:.3e})")


# ---------------------------------------------------------------------------
# Limit and identity checks

def theorem4_gap(exponents, a: float, sample_ts=None, ctx: PrecisionContext | None = None) -> float:
    """``max_{k,t} |B_k(t; [a, 1]) - H_k(t)|`` over a grid in ``[a, 1]``.

    The default grid has 33 equispaced points in ``[max(a, 1e-3), 1]``.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a!r}")
    if sample_ts is None:
        sample_ts = np.linspace(max(a, 1e-3), 1.0, 33)
    sample_ts = [float(t) for t in np.atleast_1d(sample_ts)]
    if not sample_ts:
        raise DomainError("sample grid is empty")
    n = len(rs) - 1
    if n == 0:
        return 0.0
    interval = Interval(a, 1.0)
    gap = 0.0
    if n <= SCHUR_FORM_MAX_N:
        cheb = [chebyshev_basis_values(rs, t, interval, ctx) for t in sample_ts]
    else:
        cheb = basis_matrix(rs, sample_ts, BasisKind.chebyshev(a), ctx, as_mp=True)
    for t, row in zip(sample_ts, cheb):
        H = gelfond_basis_values(rs, t, ctx)
        gap = max(gap, max(abs(float(x - y)) for x, y in zip(row, H)))
    return gap


def divdiff_schur_identity_residual(exponents, t, ctx: PrecisionContext | None = None) -> float:
    """Residual of the divided-difference / Schur-function identity.

    Compares ``[r_0, ..., r_n] f_t`` with
    ``(-1)**n / (r_1...r_n) * (1 - t)**n * S_lambda(1, t^n) / S_lambda0(t^n)``.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    if not 0 < t < 1:
        raise DomainError(f"t must lie in (0, 1), got {t!r}")
    n = len(rs) - 1
    wctx = ctx.with_bits(ctx.bits + _gelfond_guard_bits(rs))
    mp = wctx.mp
    tt = mp.mpf(t)
    lhs = divided_difference(rs, [eval_ft(tt, mp.mpf(r)) for r in rs], wctx)
    if n == 0:
        return abs(float(lhs - 1))
    lam = partition_from_exponents(rs, mp)
    lam0 = bottom_partition(lam)
    num = schur_eval(lam, ArgumentMultiset(((mp.mpf(1), 1), (tt, n))), wctx)
    den = schur_eval(lam0, ArgumentMultiset(((tt, n),)), wctx)
    pref = mp.mpf(-1) ** n
    for r in rs[1:]:
        pref /= r
    rhs = pref * (1 - tt) ** n * num / den
    return abs(float(lhs - rhs))


def gelfond_elevation_residual(exponents, t, ctx: PrecisionContext | None = None) -> float:
    """Residual of the two-term split of ``H_k`` of ``E(Lambda_n)`` into ``E(Lambda_{n+1})``.

    `exponents` is ``Lambda_{n+1}``; returns the largest
    ``|H_k^n - (r_{n+1} - r_k)/r_{n+1} H_k^{n+1} - r_{k+1}/r_{n+1} H_{k+1}^{n+1}|``
    over ``k = 0..n`` at `t`.
    """
    ctx = ctx or PrecisionContext()
    rs = validate_exponents(exponents)
    if len(rs) < 2:
        raise DomainError("need at least two exponents")
    n = len(rs) - 2
    wctx = ctx.with_bits(ctx.bits + _gelfond_guard_bits(rs))
    mp = wctx.mp
    lo = gelfond_basis_values(rs[:-1], t, wctx)
    hi = gelfond_basis_values(rs, t, wctx)
    top = mp.mpf(rs[n + 1])
    res = 0.0
    for k in range(n + 1):
        rhs = (top - rs[k]) / top * hi[k] + mp.mpf(rs[k + 1]) / top * hi[k + 1]
        res = max(res, abs(float(lo[k] - rhs)))
    return res
