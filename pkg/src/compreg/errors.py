"""Exception types shared across the toolkit."""


class CompregError(Exception):
    """Base class for all toolkit errors."""


class NonPositivePartError(CompregError):
    """A compositional part (or raw input entry) is zero or negative."""


class DimensionTooSmallError(CompregError):
    """A composition needs at least two parts."""


class OverflowGuardError(CompregError):
    """Log-ratio values too extreme to invert in double precision."""


class RankDeficientDesignError(CompregError):
    """Intercept-augmented design matrix is not full column rank."""


class TooFewObservationsError(CompregError):
    """Not enough rows to fit the model (need n >= p + 2)."""


class InvalidLevelError(CompregError):
    """Confidence level outside the open interval (0, 1)."""


class DegenerateScaleError(CompregError):
    """A residual scale of zero makes the log-likelihood unbounded."""


class BTooSmallError(CompregError):
    """Bootstrap replication count below the supported minimum."""


class ImprobableDegeneracyError(CompregError):
    """Covariate regeneration failed 100 times in a row."""


class StudySweepError(CompregError):
    """A study in a sweep failed; carries the index of the offending config."""

    def __init__(self, config_index: int, message: str):
        super().__init__(f"config {config_index}: {message}")
        self.config_index = config_index


class ParseError(CompregError):
    """Malformed input text; carries line and column of the offending token."""

    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class ValidationError(CompregError):
    """A parsed record violates a domain invariant."""

    def __init__(self, match_id: int, invariant: str):
        super().__init__(f"match {match_id}: {invariant}")
        self.match_id = match_id
        self.invariant = invariant


class DuplicateIdError(CompregError):
    """Two records share a match id."""

    def __init__(self, match_id: int):
        super().__init__(f"duplicate match id {match_id}")
        self.match_id = match_id
