"""Volleyball match ingestion: CSV parsing, validation, bundled dataset.

Input schema (UTF-8, comma separated, `#` lines are comments):

    match_id,attack_pct,block_pct,serve_pct,error_pct,z

Percentages are re-closed against their own sum when building regression
responses, so 2-decimal rounding in the source is self-correcting.
"""

from __future__ import annotations

import importlib.resources
import warnings
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .composition import alr, closure
from .errors import CompregError, DuplicateIdError, ParseError, ValidationError
from .regress import RegressionDataset

HEADER = "match_id,attack_pct,block_pct,serve_pct,error_pct,z"

#: Percentages must sum to 100 within this (rows carry 2-decimal rounding).
PCT_SUM_TOLERANCE = 0.05

COMPONENT_LABELS = ("attack", "block", "serve")
REF_LABEL = "error"

#: Content digest of the bundled 128-match dataset.
TABLE_A_SHA256 = "152865c77032df83fc3dcd12d6dab7188629bffabdd5404383da6f82102e32ba"


class IngestWarning(UserWarning):
    """Raised instead of an error for sum-tolerance failures in lenient mode."""


@dataclass(frozen=True)
class MatchRecord:
    """One match: four skill percentages plus the binary covariate."""

    match_id: int
    attack_pct: float
    block_pct: float
    serve_pct: float
    error_pct: float
    z: int

    def __post_init__(self):
        if self.match_id < 1:
            raise ValidationError(self.match_id, "match_id must be a positive integer")
        for name in ("attack_pct", "block_pct", "serve_pct", "error_pct"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(self.match_id, f"{name} must be > 0")
        if self.z not in (0, 1):
            raise ValidationError(self.match_id, f"z must be 0 or 1, got {self.z}")

    @property
    def percentages(self) -> tuple[float, float, float, float]:
        return (self.attack_pct, self.block_pct, self.serve_pct, self.error_pct)


@dataclass(frozen=True)
class MatchTable:
    """Ordered match records with unique ids."""

    records: tuple[MatchRecord, ...]

    def __post_init__(self):
        seen = set()
        for rec in self.records:
            if rec.match_id in seen:
                raise DuplicateIdError(rec.match_id)
            seen.add(rec.match_id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def _split_fields(line: str, lineno: int) -> list[str]:
    fields = line.split(",")
    if len(fields) != 6:
        raise ParseError(lineno, 1, f"expected 6 comma-separated fields, got {len(fields)}")
    return fields


def _parse_int(text: str, lineno: int, column: int, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(lineno, column, f"{what} is not an integer: {text.strip()!r}") from None


def _parse_float(text: str, lineno: int, column: int, what: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise ParseError(lineno, column, f"{what} is not a number: {text.strip()!r}") from None


def parse_matches(text: Union[str, Iterable[str]], strict: bool = True) -> MatchTable:
    """Parse the match CSV schema into a validated table.

    ParseError columns refer to the 1-based field index. ``strict=False``
    downgrades percentage-sum failures to IngestWarning; every other
    invariant still raises.
    """
    lines = text.splitlines() if isinstance(text, str) else [str(l) for l in text]
    records = []
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        if not header_seen:
            if line != HEADER:
                raise ParseError(lineno, 1, f"expected header {HEADER!r}")
            header_seen = True
            continue
        fields = _split_fields(line, lineno)
        match_id = _parse_int(fields[0], lineno, 1, "match_id")
        pcts = [_parse_float(fields[k], lineno, k + 1, HEADER.split(",")[k])
                for k in range(1, 5)]
        z = _parse_int(fields[5], lineno, 6, "z")
        record = MatchRecord(match_id, *pcts, z)
        total = sum(record.percentages)
        if abs(total - 100.0) > PCT_SUM_TOLERANCE:
            message = f"percentages sum to {total:.4f}, not 100 +/- {PCT_SUM_TOLERANCE}"
            if strict:
                raise ValidationError(match_id, message)
            warnings.warn(f"match {match_id}: {message}", IngestWarning, stacklevel=2)
        records.append(record)
    if not header_seen:
        raise ParseError(1, 1, "input is empty (no header line)")
    return MatchTable(tuple(records))


def serialize_matches(table: MatchTable) -> str:
    """Render a table back to CSV text; parse(serialize(t)) == t."""
    lines = [HEADER]
    for rec in table.records:
        pcts = ",".join(repr(v) for v in rec.percentages)
        lines.append(f"{rec.match_id},{pcts},{rec.z}")
    return "\n".join(lines) + "\n"


def load_bundled() -> MatchTable:
    """The packaged Super League 2011/2012 dataset (128 matches)."""
    data = importlib.resources.files("compreg").joinpath("data/table_a.csv")
    return parse_matches(data.read_text(encoding="utf-8"))


def to_regression_dataset(table: MatchTable) -> RegressionDataset:
    """Log-ratio responses (reference: error percentage) plus the z column.

    Row order follows the table. Composition errors, if any, are re-raised
    with the offending match id in the message.
    """
    rows = []
    for rec in table.records:
        try:
            rows.append(alr(closure(rec.percentages)).values)
        except CompregError as exc:
            raise type(exc)(f"match {rec.match_id}: {exc}") from exc
    responses = np.asarray(rows, dtype=float)
    covariates = np.asarray([[float(rec.z)] for rec in table.records])
    return RegressionDataset(responses, covariates)
