"""Exception hierarchy shared by every module of the package."""


class BIBDError(Exception):
    """Base class for all package errors."""


class InadmissibleSpec(BIBDError, ValueError):
    """Five parameters that violate bk = vr or lambda(v-1) = r(k-1)."""


class NonIntegralParameters(InadmissibleSpec):
    """Derived r or b is not an integer."""


class InstanceFileError(BIBDError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionMismatch(BIBDError, ValueError):
    pass


class AllDifferentViolated(BIBDError, ValueError):
    """A dual row repeats a block label."""


class RowCountViolated(BIBDError, ValueError):
    """A primal row does not hold exactly r ones."""


class IllegalMove(BIBDError, ValueError):
    pass


class InconsistentMask(BIBDError, ValueError):
    pass


class ConfigInvalid(BIBDError, ValueError):
    pass


class ParseError(BIBDError, ValueError):
    """Malformed algorithm notation.

    ``position`` is the 0-based offset of the offending character and
    ``expected`` the set of tokens that would have been accepted there.
    """

    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = frozenset(expected)
        shown = ", ".join(sorted(self.expected)) or "end of input"
        super().__init__(f"cannot parse {text!r} at position {position}: expected one of {shown}")


class IncompleteDesign(BIBDError, ValueError):
    """The algorithm x instance grid handed to the ranking has holes."""


class DegenerateInput(BIBDError, ValueError):
    pass
