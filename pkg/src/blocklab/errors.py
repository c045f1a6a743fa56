"""Exception types and the state-count budget guard shared by every module."""

from __future__ import annotations

DEFAULT_BUDGET = 10_000_000


class BlocklabError(Exception):
    """Base class for all package-specific errors."""


class BudgetError(BlocklabError):
    """A search or enumeration would exceed the configured state-count cap."""


class ExhaustionError(BlocklabError):
    """No qualifying object exists within the finite truncation.

    Raised by constructions whose infinitary counterparts always succeed
    (fusion, diagonalization, tree extension) when the finite search space
    runs dry.  Carries ``index`` when a specific step failed.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class IllegalMoveError(BlocklabError):
    """A strategy emitted an illegal move during play."""

    def __init__(self, side: str, inning: int, reason: str):
        super().__init__(f"illegal move by {side} in inning {inning}: {reason}")
        self.side = side
        self.inning = inning
        self.reason = reason


class VerificationBugError(BlocklabError):
    """An internal post-construction check failed; this signals a bug."""


class Budget:
    """Mutable counter capping the number of states a search may touch."""

    def __init__(self, cap: int | None = None):
        self.cap = DEFAULT_BUDGET if cap is None else cap
        self.spent = 0

    def require(self, n: int) -> None:
        """Refuse up front a step that would burn ``n`` more states."""
        if self.spent + n > self.cap:
            raise BudgetError(
                f"search needs {self.spent + n} states, cap is {self.cap}"
            )

    def spend(self, n: int = 1) -> None:
        self.spent += n
        if self.spent > self.cap:
            raise BudgetError(f"search exceeded the {self.cap}-state cap")
