"""Exception types shared across the package."""


class AgtError(Exception):
    """Base class for all errors raised by this package."""


class InputError(AgtError):
    """Invalid user-supplied data: bad documents, mismatched boundaries,
    out-of-range parameters.  The CLI maps these to exit code 2."""


class FormatError(InputError):
    """A document failed to parse or validate.  ``path`` locates the
    offending field; ``line`` is set for syntax errors."""

    def __init__(self, message, path=(), line=None):
        self.path = tuple(path)
        self.line = line
        where = ""
        if self.path:
            where = " at " + ".".join(str(p) for p in self.path)
        if line is not None:
            where += f" (line {line})"
        super().__init__(message + where)


class PreconditionError(AgtError):
    """A checker was called on inputs that violate its stated
    precondition (distinct from the checker finding a counterexample)."""


class BudgetExceeded(AgtError):
    """A law suite ran past its wall-clock budget.  The CLI maps this to
    exit code 3 so truncated coverage is never reported as a pass."""

    def __init__(self, suite, elapsed, budget):
        self.suite = suite
        self.elapsed = elapsed
        self.budget = budget
        super().__init__(
            f"suite {suite!r} exceeded budget: {elapsed:.1f}s > {budget:.1f}s"
        )
