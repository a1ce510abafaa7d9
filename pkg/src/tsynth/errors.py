"""Exception types raised by the synthesis engine and its I/O layer."""


class TsynthError(Exception):
    """Base class for all engine errors."""


class InvalidSeries(TsynthError, ValueError):
    """Series contains NaN/Inf or is empty where data is required."""


class InvalidWindow(TsynthError, ValueError):
    """Window length / analysis window is unusable (e.g. empty frequency band)."""


class ShapeMismatch(TsynthError, ValueError):
    """Two series that must share a length do not."""


class BandInfeasible(TsynthError, ValueError):
    """A warping band too narrow to connect the DTW corners."""


class SchemaViolation(TsynthError, ValueError):
    """Parameters fall outside the label schema's encodable ranges."""


class DecodeError(TsynthError, ValueError):
    """A label channel cannot be decoded (e.g. all-NaN)."""


class ConfigError(TsynthError, ValueError):
    """Invalid engine or CLI configuration, detected before any work."""


class ParseError(TsynthError, ValueError):
    """Malformed input data; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class EmptyIngest(TsynthError, ValueError):
    """Input series shorter than one window."""


class WriteError(TsynthError, OSError):
    """Dataset emission failed; partial shards are cleaned up."""


class StreamClosed(TsynthError, RuntimeError):
    """The streaming sink went away mid-write."""
