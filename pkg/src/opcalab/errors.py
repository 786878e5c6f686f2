"""Exception hierarchy shared by every module of the package."""


class OpcaError(Exception):
    """Base class for all errors raised by opcalab."""


class OrderError(OpcaError):
    """A relation is not a partial order, or a carrier is malformed."""


class NotADownset(OrderError):
    pass


class EmptySeed(OpcaError):
    pass


class UnknownElement(OpcaError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SizeLimit(OpcaError):
    """An exhaustive search would exceed its configured budget."""


class Axiom0Violation(OpcaError):
    """Application is not monotone; ``witness`` is the quadruple (a', a, b', b)."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class NoCombinators(OpcaError):
    pass


class InvalidCombinators(OpcaError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UndefinedCombinator(OpcaError):
    pass


class TermSyntaxError(OpcaError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownIdentifier(TermSyntaxError):
    pass


class OpenTerm(OpcaError):
    pass


class UnboundVariable(OpcaError):
    pass


class Mismatch(OpcaError):
    """Sources or targets of the arguments do not line up."""


class SourceMismatch(Mismatch):
    pass


class BaseMismatch(Mismatch):
    pass


class NotAMorphism(OpcaError):
    pass


class ConstructionFailed(OpcaError):
    """A realizer built from an explicit formula failed its exhaustive check."""


class ExtractionFailed(OpcaError):
    pass


class RealizerInvalid(OpcaError):
    pass


class NotApplicable(OpcaError):
    pass


class CharacterizationMismatch(OpcaError):
    pass


class WorkspaceError(OpcaError):
    pass


class ParseError(WorkspaceError):
    def __init__(self, message, line=None, column=None, path=None):
        where = ":".join(str(x) for x in (path, line, column) if x is not None)
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.column = column
        self.path = path


class ValidationError(WorkspaceError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnknownName(WorkspaceError):
    pass


class UnknownCommand(WorkspaceError):
    pass
