"""Exception hierarchy shared across the package.

Every error carries a machine-readable ``code`` so the HTTP service and the
CLI can map failures to stable identifiers without parsing messages.
"""


class ChamprecError(Exception):
    code = "internal_error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class SourceUnavailable(ChamprecError):
    """A file or HTTP table source could not be reached or read."""

    code = "source_unavailable"


class EmptyTable(ChamprecError):
    code = "empty_table"


class MissingColumn(ChamprecError):
    code = "missing_column"


class NegativeCount(ChamprecError):
    code = "negative_count"


class NegativeInput(ChamprecError):
    code = "negative_input"


class EmptyInput(ChamprecError):
    code = "empty_input"


class EmptyHistory(ChamprecError):
    code = "empty_history"


class MissingBaseline(ChamprecError):
    code = "missing_baseline"


class InvalidCounts(ChamprecError):
    code = "invalid_counts"


class TooFewPoints(ChamprecError):
    code = "too_few_points"


class InvalidWeights(ChamprecError):
    code = "invalid_weights"


class InvalidParameter(ChamprecError):
    code = "invalid_parameter"


class HistoryTooShort(ChamprecError):
    code = "history_too_short"


class DegenerateLabels(ChamprecError):
    code = "degenerate_labels"


class InsufficientData(ChamprecError):
    code = "insufficient_data"


class PlayerNotFound(ChamprecError):
    code = "player_not_found"
