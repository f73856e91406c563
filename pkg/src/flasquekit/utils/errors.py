from __future__ import annotations

from typing import Any, Mapping


class FlasqueKitError(Exception):
    """Base error; ``kind`` and ``exit_code`` drive the CLI error object."""

    kind = "error"
    exit_code = 2

    def __init__(self, message: str, *, details: Mapping[str, Any] | None = None) -> None:
        super().__init__(message)
        self.details: dict[str, Any] = dict(details or {})

    def to_payload(self) -> dict[str, Any]:
        return {"kind": self.kind, "message": str(self), "details": self.details}


class InvalidInputError(FlasqueKitError, ValueError):
    kind = "invalid-input"


class TorsionError(FlasqueKitError, ArithmeticError):
    kind = "torsion-error"


class NotFoundError(FlasqueKitError, LookupError):
    kind = "not-found"


class SoundnessError(FlasqueKitError):
    kind = "soundness-error"


class ResourceLimitError(FlasqueKitError):
    kind = "resource-limit"
    exit_code = 3


class ConstructionError(FlasqueKitError, RuntimeError):
    """An internal verification failed; points at a convention bug, not bad input."""

    kind = "construction-error"
    exit_code = 1


class LemmaViolationError(FlasqueKitError):
    kind = "lemma-violation"
    exit_code = 1


__all__ = [
    "ConstructionError",
    "FlasqueKitError",
    "InvalidInputError",
    "LemmaViolationError",
    "NotFoundError",
    "ResourceLimitError",
    "SoundnessError",
    "TorsionError",
]
