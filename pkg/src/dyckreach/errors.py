"""Exception hierarchy shared by all modules."""


class DyckError(Exception):
    pass


class ParseError(DyckError):
    """Malformed input text. ``line`` is 1-based, or None when not line-specific."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateEdge(ParseError):
    pass


class BadLabelIndex(ParseError):
    pass


class NotBidirected(DyckError):
    def __init__(self, violations):
        self.violations = list(violations)
        head = ", ".join(str(v) for v in self.violations[:3])
        more = "" if len(self.violations) <= 3 else f" (+{len(self.violations) - 3} more)"
        super().__init__(f"graph is not bidirected: {head}{more}")


class PreconditionViolated(DyckError):
    pass


class UnknownNode(DyckError, KeyError):
    pass


class AlreadyPresent(DyckError):
    pass


class UnknownElement(DyckError, KeyError):
    pass


class NotDisjoint(DyckError):
    pass


class NotCoResident(DyckError):
    pass


class InvalidDecomposition(DyckError):
    pass


class MixedLocalEdge(DyckError):
    pass


class SplitCallSite(DyckError):
    pass


class MissingMethod(DyckError):
    pass


class StaleSummary(DyckError):
    pass


class InvalidSequence(DyckError):
    pass


class UnknownTerminal(DyckError):
    pass


class GrammarError(ParseError):
    pass
