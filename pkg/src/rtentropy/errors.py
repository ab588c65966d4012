from typing import Optional


class RuntimeEntropyError(ValueError):
    """Base class for every input or state error raised by rtentropy."""


class MalformedLineError(RuntimeEntropyError):
    def __init__(self, line_no: int, reason: str = "malformed line"):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class NonMonotonicTimestampError(RuntimeEntropyError):
    def __init__(self, line_no: int, previous: int, current: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: timestamp {current} is earlier than {previous}")


class UnbalancedTraceError(RuntimeEntropyError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class DegenerateTraceError(RuntimeEntropyError):
    pass


class MinorityTooSmallError(RuntimeEntropyError):
    pass


class ClassTooSmallError(RuntimeEntropyError):
    pass


class SchemaMismatchError(RuntimeEntropyError):
    pass


class BadLabelError(RuntimeEntropyError):
    def __init__(self, line_no: int, label: str):
        self.line_no = line_no
        self.label = label
        super().__init__(f"line {line_no}: unknown label {label!r}")


class EmptyDatasetError(RuntimeEntropyError):
    pass


class TreeParseError(RuntimeEntropyError):
    def __init__(self, location: str, reason: str):
        self.location = location
        super().__init__(f"{location}: {reason}")


class InvalidSpecError(RuntimeEntropyError):
    pass
