"""Exception hierarchy shared across the package.

Exit-code contract for the CLI: RangeError maps to exit 2 (usage/range),
any other DcellError to exit 1.
"""


class DcellError(Exception):
    """Base class for all package errors."""


class RangeError(DcellError, ValueError):
    """Parameter outside the supported range (bad k, n, uid, level, ...)."""


class BudgetExceededError(DcellError):
    """A vertex or search budget would be exceeded."""


class InfeasibleError(DcellError):
    """A routing subproblem (flow, fan, linkage) has no solution.

    Signals a caller-side precondition violation, not a user error.
    """


class LemmaViolationError(DcellError):
    """The spare-neighbor exchange failed to terminate as the theory guarantees."""


class ConstructionBugError(DcellError):
    """A constructed packing failed validation; carries the active case label."""

    def __init__(self, label: str, detail: str = ""):
        self.label = label
        self.detail = detail
        msg = f"[{label}] {detail}" if detail else f"[{label}]"
        super().__init__(msg)
