"""Exception hierarchy shared across the codec.

FormatError covers anything wrong with bytes we were handed (bad magic,
truncation, corrupt payloads); DomainError covers valid bytes used wrongly
(mismatched shapes, out-of-range parameters). The CLI maps these to distinct
exit codes.
"""


class FcmError(Exception):
    """Base class for all codec errors."""


class FormatError(FcmError):
    """Malformed or corrupt serialized data."""


class MagicMismatchError(FormatError):
    pass


class VersionError(FormatError):
    pass


class TruncatedError(FormatError):
    pass


class DimensionOverflowError(FormatError):
    pass


class InvariantError(FormatError):
    """Structurally parseable data that violates a declared invariant."""


class PayloadDecodeError(FormatError):
    """Inner-codec payload cannot be decoded."""


class DomainError(FcmError):
    """Operation invoked outside its declared domain."""


class RankRangeError(DomainError):
    """Combination rank outside [0, C(N, k))."""
