"""Exception hierarchy shared by every layer of the package."""


class FrobkitError(Exception):
    """Base class for all errors raised by frobkit."""


class FieldMismatch(FrobkitError):
    pass


class DimensionMismatch(FrobkitError):
    pass


class AlgebraError(FrobkitError):
    pass


class NotCommutative(AlgebraError):
    def __init__(self, i, j):
        super().__init__(f"b{i}*b{j} != b{j}*b{i}")
        self.triple = (i, j)


class NotAssociative(AlgebraError):
    def __init__(self, i, j, k):
        super().__init__(f"(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})")
        self.triple = (i, j, k)


class BadUnit(AlgebraError):
    def __init__(self, i):
        super().__init__(f"unit*b{i} != b{i}")
        self.index = i


class NotAnAlgebraMap(AlgebraError):
    pass


class NonMonic(AlgebraError):
    pass


class SmallCharacteristic(AlgebraError):
    """The trace-form radical criterion needs char 0 or char p > dim."""


class AlgebraMismatch(FrobkitError):
    pass


class ModuleError(FrobkitError):
    pass


class ComplexError(FrobkitError):
    pass


class TruncationExhausted(FrobkitError):
    """Requested homological degrees lie beyond the certified truncation bound."""

    def __init__(self, requested, valid_through):
        super().__init__(
            f"degree {requested} requested but results are only certified through {valid_through}"
        )
        self.requested = requested
        self.valid_through = valid_through


class BordismSyntaxError(FrobkitError):
    def __init__(self, position, expected, found=None):
        exp = ", ".join(sorted(expected))
        msg = f"syntax error at offset {position}: expected one of {{{exp}}}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.position = position
        self.expected = frozenset(expected)
        self.found = found


class ArityError(FrobkitError):
    def __init__(self, node, expected, found):
        super().__init__(f"arity mismatch in {node}: expected {expected}, found {found}")
        self.node = node
        self.expected = expected
        self.found = found


class AlgebraFileError(FrobkitError):
    def __init__(self, message, line=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.path = path
