"""Exception types raised across the package."""


class StyloError(Exception):
    """Base class for all package errors."""


class EmptyText(StyloError, ValueError):
    pass


class EmptyDocument(StyloError, ValueError):
    pass


class DegenerateStats(StyloError, ValueError):
    pass


class MalformedLine(StyloError, ValueError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        msg = f"malformed lexicon line {line_no}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class BadHeader(StyloError, ValueError):
    pass


class BadLabel(StyloError, ValueError):
    def __init__(self, row, label):
        self.row = row
        super().__init__(f"row {row}: unknown label {label!r} (expected human or ai)")


class DuplicateId(StyloError, ValueError):
    def __init__(self, row, doc_id):
        self.row = row
        super().__init__(f"row {row}: duplicate id {doc_id!r}")


class TooFewRows(StyloError, ValueError):
    pass


class SchemaMismatch(StyloError, ValueError):
    pass


class NonFiniteLoss(StyloError, ArithmeticError):
    pass


class NoConvergence(StyloError, RuntimeError):
    def __init__(self, iterations):
        self.iterations = iterations
        super().__init__(f"SMO did not converge within {iterations} iterations")


class UnsupportedModel(StyloError, TypeError):
    pass


class UnfittedMember(StyloError, ValueError):
    pass


class SingleClass(StyloError, ValueError):
    pass


class LengthMismatch(StyloError, ValueError):
    pass


class UnknownFeature(StyloError, KeyError):
    pass


class ConfigInvalid(StyloError, ValueError):
    pass
