"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class ReviewError(Exception):
    exit_code = 1
    code = "error"


class ParseError(ReviewError, ValueError):
    exit_code = 2
    code = "parse"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasiblePartition(ReviewError):
    """No two-sided split of the conflict components satisfies the load test."""

    exit_code = 3
    code = "infeasible-partition"

    def __init__(self, message, best_ratio=None):
        hint = " (try removing high-degree authors from the reviewer pool, see `prune`)"
        super().__init__(message + hint)
        self.best_ratio = best_ratio


class ContractViolation(ReviewError):
    exit_code = 4
    code = "contract-violation"


class BudgetExceeded(ReviewError):
    exit_code = 5
    code = "budget-refusal"
