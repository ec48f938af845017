"""Error signals raised across the softretrace package.

Every failure mode that callers are expected to handle has a named class
here; generic ValueError/TypeError are reserved for programming errors
(bad config construction, wrong argument types).
"""


class SoftretraceError(Exception):
    """Base class for all package-specific errors."""


class UnextractableAnswer(SoftretraceError):
    """An answer string normalized to the empty string."""


class TrajectoryTooShort(SoftretraceError):
    """Trajectory has fewer than 2 tokens; no strict prefix exists."""


class EmptyPrefix(SoftretraceError):
    """A re-inference prompt was requested with an empty prefix."""


class SetSizeMismatch(SoftretraceError):
    """An answer multiset's total does not match the declared group size."""


class EmptySet(SoftretraceError):
    """A vote was requested over an empty answer multiset."""


class EmptyGroup(SoftretraceError):
    """Advantages were requested for an empty reward sequence."""


class DegenerateUpdate(SoftretraceError):
    """A policy update produced an all-zero numerator."""


class ZeroDenominator(SoftretraceError):
    """A contrast ratio was requested against a zero-probability atom."""


class EmptyBatch(SoftretraceError):
    """A batch statistic was requested over zero samples."""


class OutOfRange(SoftretraceError):
    """A frequency fell outside the (0, 1] binning domain."""


class RemoteError(SoftretraceError):
    """Base class for remote-generation failures."""


class Timeout(RemoteError):
    """The remote endpoint did not answer within the configured timeout."""


class AuthFailure(RemoteError):
    """Credentials were missing or rejected by the remote endpoint."""


class MalformedResponse(RemoteError):
    """The remote endpoint answered with an unparseable or invalid body."""


class ConfigError(SoftretraceError):
    """A run config file failed validation; message carries the field path."""
