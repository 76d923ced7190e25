"""Engine error hierarchy.

Every error carries a stable machine-readable ``code`` so the HTTP service
and CLI can map failures 1:1 onto structured responses.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures."""

    code = "engine_error"

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.message = message
        self.field = field

    def as_dict(self) -> dict:
        return {"code": self.code, "field": self.field, "message": self.message}


class ValidationError(EngineError):
    code = "validation"


class RankOutOfRangeError(ValidationError):
    code = "rank_out_of_range"


class UnrankedClientError(EngineError):
    code = "unranked_client"


class OwnershipError(EngineError):
    code = "ownership"


class WindowOverflowError(EngineError):
    """More mandated first visits than the first window can hold."""

    code = "window_overflow"

    def __init__(self, message: str, overflow: int):
        super().__init__(message)
        self.overflow = overflow


class ConstraintViolationError(EngineError):
    code = "constraint_violation"


class UnknownCandidateError(EngineError):
    code = "unknown_candidate"


class IllegalTransitionError(EngineError):
    code = "illegal_transition"


class NotGeneratedError(EngineError):
    code = "not_generated"


class NotFoundError(EngineError):
    code = "not_found"


class DuplicateKeyError(EngineError):
    code = "duplicate_key"


class FormatError(EngineError):
    code = "format"


class SnapshotVersionError(EngineError):
    code = "snapshot_version"


class NotEvaluatedError(EngineError):
    code = "not_evaluated"


class ConfirmationRequiredError(EngineError):
    code = "confirmation_required"
