"""Exception hierarchy and warning categories shared across the package."""


class IohaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(IohaError):
    """Malformed input data."""


class EmptyFile(ParseError):
    pass


class MissingMandatoryKey(ParseError):
    def __init__(self, key: str):
        super().__init__(f"mandatory key {key!r} missing from meta-data header")
        self.key = key


class MalformedInstanceToken(ParseError):
    def __init__(self, token: str, reason: str = ""):
        msg = f"malformed instance token {token!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.token = token


class NoSeparatorLine(ParseError):
    pass


class NonNumericMandatoryField(ParseError):
    def __init__(self, line: str):
        super().__init__(f"non-numeric value in mandatory column: {line!r}")
        self.line = line


class MissingRawFile(IohaError):
    def __init__(self, path):
        super().__init__(f"raw data file not found: {path}")
        self.path = path


class EmptyArchive(IohaError):
    pass


class MixedMonotonicity(IohaError):
    pass


class InvalidRange(IohaError):
    pass


class NonPositiveForLog(InvalidRange):
    pass


class UnknownParameter(IohaError):
    def __init__(self, name: str):
        super().__init__(f"unknown parameter {name!r}")
        self.name = name


class NoMatchingData(IohaError):
    pass


class EmptySample(IohaError):
    pass


class TooFewPoints(IohaError):
    pass


class DegenerateRange(IohaError):
    pass


class FewerThanTwoAlgorithms(IohaError):
    pass


class VolatilitySolverNoConvergence(IohaError):
    pass


class DataFormatWarning(UserWarning):
    """Recoverable irregularity in input data (dropped line, count mismatch)."""
