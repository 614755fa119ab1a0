"""Exception hierarchy shared by every engine."""


class FormalTopError(Exception):
    pass


class IndexOutOfRange(FormalTopError):
    pass


class MissingCover(FormalTopError):
    pass


class CarrierMismatch(FormalTopError):
    pass


class OracleBoundExceeded(FormalTopError):
    pass


class NotAnEquivalence(FormalTopError):
    pass


class NotCovered(FormalTopError):
    pass


class IllFormedProof(FormalTopError):
    pass


class InvalidCertificate(FormalTopError):
    pass


class PreconditionViolated(FormalTopError):
    pass


class ParseError(FormalTopError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


class UnknownRule(FormalTopError):
    pass


class SchemaMismatch(FormalTopError):
    pass


class ScopeError(FormalTopError):
    pass


class UnsupportedConstruct(FormalTopError):
    pass


class StarConditionFailed(FormalTopError):
    pass


class FamConditionFailed(FormalTopError):
    pass


class NotTotalWithinFuel(FormalTopError):
    pass
