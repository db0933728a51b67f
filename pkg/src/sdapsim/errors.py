"""Exception hierarchy shared by every sdapsim module."""


class SdapError(Exception):
    pass


class CodecError(SdapError):
    pass


class InsufficientBytes(CodecError):
    def __init__(self, needed, available, what="header"):
        super().__init__(f"{what}: need {needed} bytes, have {available}")
        self.needed = needed
        self.available = available


class UnsupportedProtocol(CodecError):
    def __init__(self, protocol):
        super().__init__(f"unsupported IP protocol number {protocol} (expected 6 or 17)")
        self.protocol = protocol


class MalformedHeader(CodecError):
    pass


class EmptyPacket(SdapError):
    pass


class MalformedStack(SdapError):
    pass


class LengthUnderflow(SdapError):
    pass


class QfiOutOfRange(SdapError, ValueError):
    def __init__(self, qfi):
        super().__init__(f"QFI {qfi} outside [0, 63]")
        self.qfi = qfi


class MalformedMapping(SdapError, ValueError):
    """Bad ``qfiToDrbMapping`` string. ``position`` is a 0-based character offset."""

    def __init__(self, position, reason):
        super().__init__(f"malformed QFI-to-DRB mapping at position {position}: {reason}")
        self.position = position
        self.reason = reason


class ConfigError(SdapError):
    """Invalid scenario configuration. ``key`` names the offending entry when known."""

    def __init__(self, message, key=None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key
