"""Precision policy, node sets and divided differences.

All multiprecision work goes through :func:`mp_context`, which hands out
private ``mpmath`` contexts keyed by working precision.  Contexts are never
mutated after creation, so they can be shared between threads.
"""
from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import mpmath

from .errors import DomainError, NumericalFailure

__all__ = [
    "EXTENDED_BITS",
    "PRECISION_ENV",
    "PrecisionContext",
    "NodeSet",
    "mp_context",
    "eval_ft",
    "divided_difference",
    "divided_difference_suffixes",
    "divided_difference_amplification",
    "with_adaptive_precision",
]

#: Working precision (bits) used for the sensitive internal computations.
EXTENDED_BITS = 256
#: Environment variable that overrides the default working precision.
PRECISION_ENV = "MUNTZ_PRECISION_BITS"


@functools.lru_cache(maxsize=64)
def mp_context(bits: int) -> mpmath.ctx_mp.MPContext:
    """Return a private, read-only mpmath context with `bits` of precision."""
    if bits < 2:
        raise DomainError(f"precision must be at least 2 bits, got {bits}")
    ctx = mpmath.MPContext()
    ctx.prec = int(bits)
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Numeric policy threaded through every computation.

    Parameters
    ----------
    significand_bits : int
        Working precision of the multiprecision arithmetic, at least 24.
    residual_tolerance : float
        Bound used by post-condition checks (curve reproduction, splitting
        residuals, collocation residuals).
    comparison_tolerance : float
        Slack allowed when checking that weights lie in ``[0, 1]`` and that
        row sums equal one.
    """

    significand_bits: int = 64
    residual_tolerance: float = 1e-10
    comparison_tolerance: float = 1e-12

    def __post_init__(self):
        bits = self.significand_bits
        if isinstance(bits, bool) or int(bits) != bits or bits < 24:
            raise DomainError(f"significand_bits must be an integer >= 24, got {bits!r}")
        for name in ("residual_tolerance", "comparison_tolerance"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be a non-negative finite number, got {value!r}")
        if self.residual_tolerance < self.comparison_tolerance:
            raise DomainError("residual_tolerance must be >= comparison_tolerance")

    @property
    def bits(self) -> int:
        return int(self.significand_bits)

    @property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        """The mpmath context at this working precision."""
        return mp_context(self.bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return replace(self, significand_bits=int(bits))

    def extended(self, bits: int = EXTENDED_BITS) -> "PrecisionContext":
        """Copy whose precision is at least `bits`."""
        return self.with_bits(max(self.bits, bits))

    @classmethod
    def from_env(cls, **overrides) -> "PrecisionContext":
        """Build a context honouring ``MUNTZ_PRECISION_BITS`` when set."""
        raw = os.environ.get(PRECISION_ENV)
        if raw is not None and "significand_bits" not in overrides:
            try:
                overrides["significand_bits"] = int(raw)
            except ValueError:
                raise DomainError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
        return cls(**overrides)


@dataclass(frozen=True)
class NodeSet:
    """Strictly increasing, non-negative real nodes ``x_0 < ... < x_n``."""

    nodes: tuple

    def __post_init__(self):
        xs = tuple(self.nodes)
        if not xs:
            raise DomainError("a node set needs at least one node")
        for i, x in enumerate(xs):
            if not (x >= 0 and math.isfinite(float(x))):
                raise DomainError(f"node {i} must be finite and non-negative, got {x!r}")
        for i in range(len(xs) - 1):
            if not xs[i] < xs[i + 1]:
                raise DomainError(
                    f"nodes must be strictly increasing; x[{i}]={xs[i]!r} >= x[{i + 1}]={xs[i + 1]!r}")
        object.__setattr__(self, "nodes", xs)

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, item):
        return self.nodes[item]


def eval_ft(t, x):
    """Evaluate ``f_t(x) = t**x`` with the convention ``0**0 = 1``.

    Works for floats and mpmath numbers; ``t`` must lie in ``[0, 1]`` and
    ``x`` must be non-negative.
    """
    if not (0 <= t <= 1):
        raise DomainError(f"t must lie in [0, 1], got {t!r}")
    if not (x >= 0):
        raise DomainError(f"exponent must be non-negative, got {x!r}")
    if t == 0:
        return type(t)(1) if x == 0 else type(t)(0)
    return t ** x


def _as_nodes(nodes) -> tuple:
    if isinstance(nodes, NodeSet):
        return nodes.nodes
    return NodeSet(tuple(nodes)).nodes


def divided_difference(nodes, values: Sequence, ctx: PrecisionContext | None = None):
    """Divided difference ``[x_0, ..., x_n] f`` from tabulated values.

    Parameters
    ----------
    nodes : NodeSet or sequence of float
        Distinct, increasing nodes.
    values : sequence
        ``f(x_i)`` for every node.
    ctx : PrecisionContext, optional
        Working precision; the Newton tableau is built in ``ctx.mp``.

    Returns
    -------
    mpmath.mpf
    """
    return divided_difference_suffixes(nodes, values, ctx)[0]


def divided_difference_suffixes(nodes, values: Sequence, ctx: PrecisionContext | None = None) -> list:
    """All suffix divided differences ``[x_k, ..., x_n] f`` for ``k = 0..n``.

    The Newton tableau is built once, bottom-up, so the cost is ``O(n^2)``.
    """
    ctx = ctx or PrecisionContext()
    xs = _as_nodes(nodes)
    if len(values) != len(xs):
        raise DomainError(f"got {len(values)} values for {len(xs)} nodes")
    mp = ctx.mp
    x = [mp.mpf(v) for v in xs]
    col = [mp.mpf(v) for v in values]
    n = len(x) - 1
    out = [None] * (n + 1)
    out[n] = col[n]
    # level l holds [x_i..x_{i+l}] for i = 0..n-l; entry n-l is a suffix
    for level in range(1, n + 1):
        col = [(col[i + 1] - col[i]) / (x[i + level] - x[i]) for i in range(n + 1 - level)]
        out[n - level] = col[n - level]
    return out


def divided_difference_amplification(nodes) -> float:
    """``log2`` of ``sum_l 1 / prod_{u != l} |x_l - x_u|``.

    This is the worst-case growth of rounding errors in the divided
    difference of data bounded by one, and decides how many guard bits a
    divided difference needs.
    """
    xs = [float(v) for v in _as_nodes(nodes)]
    logs = []
    for l, xl in enumerate(xs):
        s = 0.0
        for u, xu in enumerate(xs):
            if u != l:
                s += math.log2(abs(xl - xu))
        logs.append(-s)
    top = max(logs)
    return top + math.log2(sum(2.0 ** (v - top) for v in logs))


_FAILED = object()


def with_adaptive_precision(compute: Callable[[int], object],
                            distance: Callable[[object, object], float],
                            start_bits: int,
                            tolerance: float,
                            max_bits: int = 1 << 16) -> tuple[object, int]:
    """Run `compute` at doubling precision until two runs agree.

    Parameters
    ----------
    compute : callable
        ``compute(bits)`` returns a result computed at ``bits`` of precision.
    distance : callable
        ``distance(lo, hi)`` measures the disagreement of two results.
    start_bits : int
        First precision tried.
    tolerance : float
        Agreement required between consecutive precisions.
    max_bits : int
        Give up beyond this precision.

    Returns
    -------
    result, bits
        The higher-precision result of the first agreeing pair and the
        precision at which it was computed.

    Notes
    -----
    A ``ZeroDivisionError`` raised by `compute` (an exactly singular pivot
    after rounding) counts as a failed run at that precision.
    """
    def attempt(b):
        try:
            return compute(b)
        except ZeroDivisionError:
            return _FAILED

    bits = int(start_bits)
    lo = attempt(bits)
    while True:
        hi_bits = 2 * bits
        if hi_bits > max_bits:
            raise NumericalFailure(
                f"no agreement below {max_bits} bits (last disagreement at {bits} bits)")
        hi = attempt(hi_bits)
        if lo is not _FAILED and hi is not _FAILED and distance(lo, hi) <= tolerance:
            return hi, hi_bits
        lo, bits = hi, hi_bits


def fmax_abs(values: Iterable) -> float:
    """Largest absolute value of an iterable of numbers as a float."""
    return max((abs(float(v)) for v in values), default=0.0)
