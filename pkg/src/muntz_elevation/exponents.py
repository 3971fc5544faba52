"""Muntz exponent sequences, intervals and the associated real partitions.

A sequence is stored as a finite prefix ``(r_0 = 0, r_1, ..., r_n)`` plus a
serializable rule that extends it past index ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError, NonMonotoneExponentsError
from .schur import RealPartition

__all__ = [
    "RULES",
    "ExponentSequence",
    "Interval",
    "MuntzSums",
    "materialize",
    "validate_exponents",
    "partition_from_exponents",
    "bottom_partition",
    "muntz_partial_sums",
    "named_sequence",
    "NAMED_SEQUENCES",
]

#: Extension rules understood by :func:`materialize`.
#:
#: ``explicit``  no extension, the prefix is the whole sequence.
#: ``affine``    ``r_i = alpha * i + beta``.
#: ``power``     ``r_i = i ** p``.
#: ``harmonic``  ``r_i = alpha - beta / i`` (bounded exponents).
#: ``custom``    ``r_i = table[i - n - 1]`` from ``rule_params["table"]``.
RULES = ("explicit", "affine", "power", "harmonic", "custom")

_RULE_PARAMS = {
    "explicit": (),
    "affine": ("alpha", "beta"),
    "power": ("p",),
    "harmonic": ("alpha", "beta"),
    "custom": ("table",),
}


@dataclass(frozen=True, eq=False)
class ExponentSequence:
    """Exponent sequence ``Lambda = (0, r_1, r_2, ...)``.

    Parameters
    ----------
    prefix : sequence of float
        Explicit leading exponents ``(r_0, ..., r_n)`` with ``r_0 = 0``.
    rule : str
        One of :data:`RULES`; applies for indices ``i > n``.
    rule_params : mapping
        Parameters of the rule, e.g. ``{"alpha": 2, "beta": 0}``.
    """

    prefix: tuple
    rule: str = "explicit"
    rule_params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        prefix = tuple(float(x) for x in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "rule_params", dict(self.rule_params))
        if not prefix:
            raise DomainError("prefix must contain at least r_0 = 0")
        if prefix[0] != 0:
            raise DomainError(f"r_0 must be 0, got {prefix[0]!r}")
        if self.rule not in RULES:
            raise DomainError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        missing = [k for k in _RULE_PARAMS[self.rule] if k not in self.rule_params]
        if missing:
            raise DomainError(f"rule {self.rule!r} needs parameters {missing}")
        extra = set(self.rule_params) - set(_RULE_PARAMS[self.rule])
        if extra:
            raise DomainError(f"rule {self.rule!r} got unexpected parameters {sorted(extra)}")
        validate_exponents(prefix)

    @property
    def n(self) -> int:
        """Index of the last explicit exponent."""
        return len(self.prefix) - 1

    @property
    def max_index(self) -> float:
        """Largest index the rule can materialize (``inf`` when unbounded)."""
        if self.rule == "explicit":
            return self.n
        if self.rule == "custom":
            return self.n + len(self.rule_params["table"])
        return math.inf

    def exponent(self, i: int) -> float:
        """The single exponent ``r_i`` (no monotonicity check)."""
        if i < 0:
            raise DomainError(f"index must be non-negative, got {i}")
        if i <= self.n:
            return self.prefix[i]
        p = self.rule_params
        if self.rule == "affine":
            return float(p["alpha"]) * i + float(p["beta"])
        if self.rule == "power":
            return float(i) ** float(p["p"])
        if self.rule == "harmonic":
            return float(p["alpha"]) - float(p["beta"]) / i
        if self.rule == "custom" and i <= self.max_index:
            return float(p["table"][i - self.n - 1])
        raise DomainError(f"rule {self.rule!r} is not defined at index {i} (max {self.max_index})")

    def to_dict(self) -> dict:
        params = dict(self.rule_params)
        if "table" in params:
            params["table"] = [float(x) for x in params["table"]]
        return {"prefix": list(self.prefix), "rule": self.rule, "rule_params": params}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExponentSequence":
        return cls(tuple(data["prefix"]), data.get("rule", "explicit"), data.get("rule_params", {}))

    def __eq__(self, other):
        if not isinstance(other, ExponentSequence):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((self.prefix, self.rule, repr(sorted(self.to_dict()["rule_params"].items()))))


def validate_exponents(exponents) -> tuple:
    """Check ``r_0 = 0``, non-negativity and strict increase; return a tuple."""
    rs = tuple(float(x) for x in exponents)
    if not rs:
        raise DomainError("empty exponent list")
    for i, r in enumerate(rs):
        if not math.isfinite(r) or r < 0:
            raise DomainError(f"exponent r_{i} must be finite and non-negative, got {r!r}")
    if rs[0] != 0:
        raise DomainError(f"r_0 must be 0, got {rs[0]!r}")
    for i in range(len(rs) - 1):
        if not rs[i] < rs[i + 1]:
            raise NonMonotoneExponentsError(
                f"exponents must be strictly increasing: r_{i}={rs[i]!r} >= r_{i + 1}={rs[i + 1]!r}", i)
    return rs


def materialize(seq: ExponentSequence, m: int) -> tuple:
    """Return ``Lambda_m = (r_0, ..., r_m)`` as a tuple of floats.

    Raises
    ------
    NonMonotoneExponentsError
        If the materialized prefix is not strictly increasing; ``index``
        points at the first offending position.
    DomainError
        If ``m`` is negative or the rule is undefined at some index.
    """
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    return validate_exponents([seq.exponent(i) for i in range(int(m) + 1)])


@dataclass(frozen=True)
class Interval:
    """Parameter interval ``[a, b]`` with ``0 <= a < b``."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval ends must be finite, got [{a!r}, {b!r}]")
        if a < 0:
            raise DomainError(f"interval start must be >= 0, got {a!r}")
        if not a < b:
            raise DomainError(f"interval needs a < b, got [{a!r}, {b!r}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_chebyshev(self) -> bool:
        """True when a Chebyshev-Bernstein basis exists (``a > 0``)."""
        return self.a > 0

    def rescaled(self) -> "Interval":
        """The equivalent interval ``[a/b, 1]``."""
        return Interval(self.a / self.b, 1.0)

    def contains(self, t, slack: float = 0.0) -> bool:
        return self.a - slack <= t <= self.b + slack


def partition_from_exponents(lambda_n, mp=None) -> RealPartition:
    """Real partition ``lambda_k = r_n - r_{k-1} - (n - k + 1)``, ``k = 1..n+1``.

    With an mpmath context `mp` the parts are computed and stored as mpf, so
    the column exponents ``lambda_j + n - j`` reproduce the ``r_k`` exactly;
    float parts round when ``r_n - r_{k-1}`` is not representable.

    Examples
    --------
    >>> partition_from_exponents((0, 2, 4, 10)).parts
    (7.0, 6.0, 5.0, 0.0)
    """
    rs = validate_exponents(lambda_n)
    n = len(rs) - 1
    if mp is not None:
        rs = [mp.mpf(r) for r in rs]
    return RealPartition(tuple(rs[n] - rs[k - 1] - (n - k + 1) for k in range(1, n + 2)))


def bottom_partition(lam: RealPartition) -> RealPartition:
    """Drop the head: ``(lambda_2, ..., lambda_{n+1})``."""
    if len(lam.parts) < 2:
        raise DomainError("the bottom partition needs a partition of length >= 2")
    return RealPartition(lam.parts[1:])


@dataclass(frozen=True)
class MuntzSums:
    """Partial sums of the three density series; never a divergence verdict."""

    m: int
    sum_reciprocal: float
    sum_density: float
    sum_full: float

    def to_dict(self) -> dict:
        return {"m": self.m, "sum_reciprocal": self.sum_reciprocal,
                "sum_density": self.sum_density, "sum_full": self.sum_full}


def muntz_partial_sums(seq: ExponentSequence, m: int) -> MuntzSums:
    """Partial sums up to index `m` of ``1/r_i``, ``r/(r^2+1)`` and ``1/|r|``."""
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    rs = materialize(seq, m)[1:]
    if any(r == 0 for r in rs):
        raise DomainError("r_i = 0 for some i >= 1")
    return MuntzSums(
        int(m),
        math.fsum(1.0 / r for r in rs),
        math.fsum(r / (r * r + 1.0) for r in rs),
        math.fsum(1.0 / abs(r) for r in rs if r != 0),
    )


NAMED_SEQUENCES = {
    "classical": ExponentSequence((0, 1), "affine", {"alpha": 1, "beta": 0}),
    "fig1": ExponentSequence((0, 1, 2, 3), "affine", {"alpha": 2, "beta": 0}),
    "fig2": ExponentSequence((0, 1, 2, 3), "power", {"p": 2}),
    "fig3": ExponentSequence((0, 2, 4, 10), "affine", {"alpha": 2, "beta": 5}),
    "fig4": ExponentSequence((0, 1, 2, 3), "harmonic", {"alpha": 4, "beta": 1}),
}


def named_sequence(name: str) -> ExponentSequence:
    """Look up one of the built-in sequences by name."""
    try:
        return NAMED_SEQUENCES[name]
    except KeyError:
        raise DomainError(f"unknown sequence {name!r}; known: {sorted(NAMED_SEQUENCES)}") from None
