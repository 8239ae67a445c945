"""Exception hierarchy shared across the workbench."""


class AuthBreakError(Exception):
    """Base class for all workbench errors."""


class ProtocolRejection(AuthBreakError):
    """A verification step failed and the session must terminate."""


class StaleTimestampError(ProtocolRejection):
    """Message timestamp falls outside the receiver's freshness window."""


class UnknownOriginError(ProtocolRejection):
    """No registered identity reproduces the login authenticator."""


class BadAuthenticatorError(ProtocolRejection):
    """The server's response authenticator failed the card-side check."""


class DuplicateIdentityError(AuthBreakError):
    """Identity already present in the registry."""

    def __init__(self, identity: bytes):
        self.identity = identity
        super().__init__(f"identity already registered: {identity!r}")


class StoreError(AuthBreakError):
    """Base class for persistence-format errors."""


class BadVersionError(StoreError):
    """File declares a format version this build does not understand."""


class MalformedLineError(StoreError):
    """A line does not match the file format."""

    def __init__(self, lineno: int, reason: str):
        self.lineno = lineno
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}")
