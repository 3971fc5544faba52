"""Generalized Schur functions indexed by real partitions.

``S_lambda(u_1, ..., u_n) = det(u_i ** (lambda_j + n - j)) / prod_{i<j} (u_i - u_j)``
for distinct positive arguments, extended continuously to repeated ones by
replacing the rows of a repeated argument with scaled derivative rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import mpmath

from .errors import DomainError, PartitionError
from .numerics import EXTENDED_BITS, PrecisionContext

__all__ = [
    "RealPartition",
    "ArgumentMultiset",
    "SchurInfo",
    "schur_eval",
    "schur_all_ones",
    "splitting_residual",
]

#: Partitions longer than this are evaluated at extended precision.
ESCALATION_LENGTH = 32


@dataclass(frozen=True)
class RealPartition:
    """Real partition: ``lambda_1 > lambda_2 - 1 > ... > lambda_n - (n-1) > -n``."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(x if hasattr(x, "_mpf_") else float(x) for x in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise PartitionError("a real partition needs at least one part")
        # shifted[j] = lambda_{j+1} - j must strictly decrease and end above -n
        shifted = [x - j for j, x in enumerate(parts)] + [-float(len(parts))]
        for j in range(len(parts)):
            if not mpmath.isfinite(parts[j]) or not shifted[j] > shifted[j + 1]:
                raise PartitionError(
                    f"chain condition fails at position {j + 1}: {parts!r}")

    def __len__(self):
        return len(self.parts)

    @property
    def size(self) -> float:
        """``|lambda| = sum of the parts``."""
        return math.fsum(self.parts)

    def exponents(self) -> tuple:
        """Column exponents ``lambda_j + n - j`` of the numerator matrix."""
        n = len(self.parts)
        return tuple(x + n - 1 - j for j, x in enumerate(self.parts))


@dataclass(frozen=True)
class ArgumentMultiset:
    """Distinct positive arguments with multiplicities.

    Build with ``ArgumentMultiset.of({u: m, ...})`` or from a flat list via
    :meth:`from_values`.
    """

    entries: tuple

    def __post_init__(self):
        entries = tuple((v, int(m)) for v, m in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise DomainError("argument multiset is empty")
        seen = set()
        for v, m in entries:
            if not v > 0:
                raise DomainError(f"arguments must be positive, got {v!r}")
            if m < 1:
                raise DomainError(f"multiplicities must be positive, got {m}")
            if v in seen:
                raise DomainError(f"argument {v!r} listed twice; merge multiplicities")
            seen.add(v)

    @classmethod
    def of(cls, mapping: Mapping) -> "ArgumentMultiset":
        return cls(tuple(mapping.items()))

    @classmethod
    def from_values(cls, values) -> "ArgumentMultiset":
        counts: dict = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        return cls(tuple(counts.items()))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def values(self) -> list:
        """Flat list of arguments, repeated according to multiplicity."""
        return [v for v, m in self.entries for _ in range(m)]

    def scaled(self, c) -> "ArgumentMultiset":
        return ArgumentMultiset(tuple((c * v, m) for v, m in self.entries))

    def union(self, other: "ArgumentMultiset") -> "ArgumentMultiset":
        merged = dict(self.entries)
        for v, m in other.entries:
            merged[v] = merged.get(v, 0) + m
        return ArgumentMultiset(tuple(merged.items()))


@dataclass(frozen=True)
class SchurInfo:
    """Metadata of a :func:`schur_eval` call."""

    bits: int
    escalated: bool
    confluent: bool


def _falling(mp, p, s):
    out = mp.mpf(1)
    for i in range(s):
        out *= (p - i)
    return out / math.factorial(s)


def schur_eval(lam: RealPartition, args: ArgumentMultiset, ctx: PrecisionContext | None = None,
               *, return_info: bool = False):
    """Evaluate ``S_lambda`` at a multiset of positive arguments.

    Parameters
    ----------
    lam : RealPartition
        Partition of length ``n``.
    args : ArgumentMultiset
        Arguments with total multiplicity ``n``.
    ctx : PrecisionContext, optional
        Working precision.  Partitions longer than 32 are evaluated with at
        least :data:`~muntz_elevation.numerics.EXTENDED_BITS` bits.
    return_info : bool
        Also return a :class:`SchurInfo` record.

    Returns
    -------
    mpmath.mpf or (mpmath.mpf, SchurInfo)

    Notes
    -----
    A value ``u`` of multiplicity ``m`` contributes the rows
    ``binom(e_j, s) u**(e_j - s)``, ``s = 0..m-1``, which are the Taylor
    rows ``(d/du)**s u**e_j / s!``.  The matching denominator is the
    confluent Vandermonde determinant
    ``prod_{g<h} (u_g - u_h)**(m_g m_h)`` built from the same rows, and its
    sign ``(-1)**sum(m(m-1)/2)`` cancels against the numerator's.
    """
    ctx = ctx or PrecisionContext()
    n = len(lam.parts)
    if args.total != n:
        raise DomainError(f"partition of length {n} needs {n} arguments, got {args.total}")
    escalated = n > ESCALATION_LENGTH and ctx.bits < EXTENDED_BITS
    bits = max(ctx.bits, EXTENDED_BITS) if escalated else ctx.bits
    mp = ctx.with_bits(bits).mp
    # lambda_j + n - j in working precision; float sums would round
    expo = [mp.mpf(x) + (n - 1 - j) for j, x in enumerate(lam.parts)]
    rows = []
    confluent = False
    for v, mult in args.entries:
        u = mp.mpf(v)
        confluent |= mult > 1
        for s in range(mult):
            rows.append([_falling(mp, e, s) * u ** (e - s) for e in expo])
    num = mp.det(mp.matrix(rows))
    den = mp.mpf(1)
    sign = 0
    entries = [(mp.mpf(v), m) for v, m in args.entries]
    for g, (ug, mg) in enumerate(entries):
        sign += mg * (mg - 1) // 2
        for uh, mh in entries[g + 1:]:
            den *= (ug - uh) ** (mg * mh)
    if sign % 2:
        den = -den
    value = num / den
    if return_info:
        return value, SchurInfo(bits, escalated, confluent)
    return value


def schur_all_ones(lam: RealPartition, ctx: PrecisionContext | None = None):
    """Product formula for ``S_lambda(1, ..., 1)``.

    ``prod_{j<k} (lambda_j - lambda_k - j + k) / prod_j (j - 1)!``
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    parts = [mp.mpf(x) for x in lam.parts]
    n = len(parts)
    num = mp.mpf(1)
    for j in range(n):
        for k in range(j + 1, n):
            num *= parts[j] - parts[k] + (k - j)
    den = mp.mpf(1)
    for j in range(n):
        den *= math.factorial(j)
    return num / den


def splitting_residual(eta: RealPartition, split: int, z_args: ArgumentMultiset,
                       y_args: ArgumentMultiset, epsilon: float,
                       ctx: PrecisionContext | None = None):
    """Residual of the splitting formula at scale `epsilon`.

    With ``eta = (lambda | mu)`` split after `split` parts, returns
    ``|S_eta(z, eps*y) / eps**|mu| - S_lambda(z) S_mu(y)|``, which tends to
    zero with ``eps``.
    """
    ctx = ctx or PrecisionContext()
    if not 0 < split <= len(eta.parts):
        raise DomainError(f"split must lie in 1..{len(eta.parts)}, got {split}")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    if split == len(eta.parts):
        return ctx.mp.mpf(0)
    lam = RealPartition(eta.parts[:split])
    mu = RealPartition(eta.parts[split:])
    if z_args.total != len(lam) or y_args.total != len(mu):
        raise DomainError("argument counts do not match the split")
    mp = ctx.mp
    eps = mp.mpf(epsilon)
    scaled = ArgumentMultiset(tuple((eps * mp.mpf(v), m) for v, m in y_args.entries))
    z_mp = ArgumentMultiset(tuple((mp.mpf(v), m) for v, m in z_args.entries))
    joint = z_mp.union(scaled)
    if joint.total != len(eta) or len(joint.entries) != len(z_args.entries) + len(y_args.entries):
        raise DomainError("scaled y arguments collide with z arguments")
    lhs = schur_eval(eta, joint, ctx) / eps ** mp.mpf(mu.size)
    rhs = schur_eval(lam, z_args, ctx) * schur_eval(mu, y_args, ctx)
    return abs(lhs - rhs)
