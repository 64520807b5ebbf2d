"""Domain errors raised across the package.

Every error carries structured fields so the command line tool can print a
machine readable JSON report: the ``kind`` is the class name, extra keyword
arguments become payload entries.
"""

from __future__ import annotations

from fractions import Fraction


class GameError(Exception):
    """Base class for every domain error in this package."""

    def __init__(self, message: str, **payload):
        super().__init__(message)
        self.payload = payload

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_json_dict(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        for key, value in self.payload.items():
            if isinstance(value, Fraction):
                value = str(value)
            out[key] = value
        return out


class ParseError(GameError):
    """Structurally malformed input: bad JSON shape, bad rational string."""


class SinkState(GameError):
    """A state with no outgoing action."""


class ProbabilitySumMismatch(GameError):
    """Probabilities leaving a (state, action) pair do not sum to one."""


class ProbabilityOutOfRange(GameError):
    """A transition probability outside (0, 1]."""


class UnknownReference(GameError):
    """A transition refers to a state or action that was never declared."""


class UnknownState(GameError):
    """A state id that does not exist in the game at hand."""


class StrategyDomainMismatch(GameError):
    """A strategy whose domain or choices do not fit the game."""


class CombinatorialLimitExceeded(GameError):
    """Strategy enumeration would exceed the configured cap."""


class InvalidBeta(GameError):
    """Discount factor outside [0, 1)."""


class NotUnichain(GameError):
    """The chain does not have exactly one recurrent class, or is otherwise
    inconsistent with having come from the reset transform."""


class MissingKindAnnotation(GameError):
    """The mirror construction needs the per-transition split record emitted
    by the reset transform; it was absent or does not describe the game."""


class SingularSystem(GameError):
    """An exact linear solve hit a singular matrix."""


class DeterminacyViolation(GameError):
    """Lower and upper values disagree somewhere, or an optimality
    certificate failed.  Always a hard error: it falsifies positional
    determinacy on the instance and must never be masked."""


class InconsistentValues(GameError):
    """Claimed values that no greedy strategy pair re-evaluates to."""


class NoConsistentStrategy(GameError):
    """No strategy pair both attains the claimed values and forms a
    saddle point."""
