"""Simplex data types, closure normalization, and the additive log-ratio
transform with its exact inverse.

A composition is a vector of strictly positive parts summing to one. The
log-ratio transform maps a G-part composition to G-1 real values, taking
the LAST part as the fixed reference denominator; the inverse maps any
finite log-ratio vector (within the overflow guard) back onto the simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DimensionTooSmallError, NonPositivePartError, OverflowGuardError

#: Absolute tolerance on the sum-to-one invariant.
SUM_TOLERANCE = 1e-12

#: Largest |log-ratio| accepted by the inverse transform. exp(700) is still
#: finite in double precision; beyond that the inverse would produce inf.
OVERFLOW_LIMIT = 700.0

# Smallest representable log-part; below this the implied part underflows
# to exactly zero, which would break strict positivity.
_UNDERFLOW_LOG = -730.0


@dataclass(frozen=True)
class Composition:
    """Point on the simplex: positive parts summing to one.

    Parts are validated on construction; use :func:`closure` to build a
    composition from an arbitrary positive vector.
    """

    parts: tuple[float, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        parts = tuple(float(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) < 2:
            raise DimensionTooSmallError(
                f"a composition needs at least 2 parts, got {len(parts)}")
        for p in parts:
            if not p > 0.0:  # also rejects nan
                raise NonPositivePartError(f"parts must be strictly positive, got {p}")
        total = math.fsum(parts)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"parts must sum to 1 within {SUM_TOLERANCE}, got {total!r}")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(parts):
                raise ValueError("labels length must match parts length")
            object.__setattr__(self, "labels", labels)

    @property
    def n_parts(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class LogRatioVector:
    """Image of a composition under the log-ratio transform.

    ``values[j] = ln(parts[j] / parts[-1])`` for j = 0..G-2. ``ref_index``
    is the 1-based index of the reference part and is always G here; the
    field exists so serialized vectors are self-describing.
    """

    values: tuple[float, ...]
    ref_index: Optional[int] = None

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 1:
            raise DimensionTooSmallError("a log-ratio vector needs at least 1 value")
        for v in values:
            if not math.isfinite(v):
                raise ValueError(f"log-ratio values must be finite, got {v}")
        if self.ref_index is None:
            object.__setattr__(self, "ref_index", len(values) + 1)
        elif self.ref_index != len(values) + 1:
            raise ValueError(
                "only the last part is supported as reference; "
                f"expected ref_index {len(values) + 1}, got {self.ref_index}")

    @property
    def n_values(self) -> int:
        return len(self.values)


def closure(raw: Sequence[float], labels: Optional[Sequence[str]] = None) -> Composition:
    """Normalize a positive vector by its sum, projecting it onto the simplex."""
    entries = [float(x) for x in raw]
    if len(entries) < 2:
        raise DimensionTooSmallError(
            f"closure needs at least 2 entries, got {len(entries)}")
    for x in entries:
        if not (math.isfinite(x) and x > 0.0):
            raise NonPositivePartError(f"closure entries must be positive finite, got {x}")
    total = math.fsum(entries)
    return Composition(tuple(x / total for x in entries),
                       tuple(labels) if labels is not None else None)


def alr(c: Composition) -> LogRatioVector:
    """Log-ratio transform of a composition against its last part."""
    ref = c.parts[-1]
    return LogRatioVector(tuple(math.log(p / ref) for p in c.parts[:-1]))


def alr_inverse(y: LogRatioVector,
                labels: Optional[Sequence[str]] = None) -> Composition:
    """Unique composition whose log-ratio image is ``y``.

    Computed through a max-shifted log-sum-exp so intermediate sums never
    overflow. Inputs whose inverse cannot be represented in double
    precision (any |value| > 700, or a part that would underflow to zero)
    raise OverflowGuardError instead of producing non-finite parts.
    """
    vals = y.values
    for v in vals:
        if abs(v) > OVERFLOW_LIMIT:
            raise OverflowGuardError(
                f"|log-ratio| > {OVERFLOW_LIMIT:.0f} cannot be inverted: {v}")
    m = max(0.0, max(vals))
    log_denom = m + math.log(math.exp(-m) + math.fsum(math.exp(v - m) for v in vals))
    if min(0.0, min(vals)) - log_denom < _UNDERFLOW_LOG:
        raise OverflowGuardError(
            "log-ratio spread too large: smallest part would underflow to zero")
    parts = tuple(math.exp(v - log_denom) for v in vals) + (math.exp(-log_denom),)
    return Composition(parts, tuple(labels) if labels is not None else None)
