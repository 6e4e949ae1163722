"""Exception hierarchy. CLI exit codes hang off these classes."""


class DyninspectError(Exception):
    exit_code = 1


class DomainError(DyninspectError, ValueError):
    """An argument lies outside an operation's mathematical domain."""

    exit_code = 4


class DegenerateOrderError(DomainError):
    """The zero-fold damage convolution is a point mass; callers must branch on m == 0."""


class TopologyMismatchError(DyninspectError, ValueError):
    exit_code = 4


class ConfigError(DyninspectError, ValueError):
    """Malformed or invalid configuration.

    ``problems`` holds ``(field_path, reason)`` pairs, one per violation.
    """

    exit_code = 2

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [("", problems)]
        self.problems = list(problems)
        lines = [f"{path or '<root>'}: {reason}" for path, reason in self.problems]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))


class NumericalConsistencyError(DyninspectError, ArithmeticError):
    exit_code = 3
