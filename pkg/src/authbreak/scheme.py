"""Pure implementation of the dynamic-ID smart-card authentication scheme.

The scheme authenticates a card-holding user to a server that knows only a
master key ``x`` and a registry of ``(identity, n)`` records, where ``n``
counts how many times that identity has registered. Registration derives a
per-user long-term secret ``j = h(x || identity || n)`` and stores it on the
card masked by the hashed password: ``l = j XOR h(r || password)`` together
with the salt ``r``. Login sends only ``c1 = h1(j || t_u)`` plus the
timestamp, so messages carry no identity; the server finds the sender by
recomputing ``c1`` against every record. The response ``c2`` authenticates
the server, and both sides derive the session key ``h1(j || c2)``.

Byte-level conventions (these make every hash preimage unambiguous):
salts are exactly 16 bytes, digests are ``suite.digest_length`` bytes,
timestamps encode to 8 big-endian bytes, the registration counter to 4
big-endian bytes, and identities are length-prefixed with a single byte.

Everything here is a pure function of its arguments: no I/O, no clock, no
hidden state. Mutating a ``ServerState`` (registering users) is the one
stateful act and must stay single-writer; see the store module for the
persistence discipline.
"""

from __future__ import annotations

import hmac
import random
from dataclasses import dataclass, field

from .errors import (
    BadAuthenticatorError,
    DuplicateIdentityError,
    StaleTimestampError,
    UnknownOriginError,
)
from .hashes import HashSuite

SALT_LEN = 16
MASTER_KEY_LEN = 32
MAX_IDENTITY_LEN = 64
MAX_PASSWORD_LEN = 128
TIMESTAMP_LEN = 8

LOGIN_TAG = 0x01
RESPONSE_TAG = 0x02


def _check_identity(identity: bytes):
    if not 1 <= len(identity) <= MAX_IDENTITY_LEN:
        raise ValueError(f"identity must be 1..{MAX_IDENTITY_LEN} bytes")


def _check_password(password: bytes):
    if not 1 <= len(password) <= MAX_PASSWORD_LEN:
        raise ValueError(f"password must be 1..{MAX_PASSWORD_LEN} bytes")


def _check_salt(salt: bytes):
    if len(salt) != SALT_LEN:
        raise ValueError(f"salt must be exactly {SALT_LEN} bytes")


def _check_master_key(master_key: bytes):
    if len(master_key) != MASTER_KEY_LEN:
        raise ValueError(f"master key must be exactly {MASTER_KEY_LEN} bytes")


def encode_timestamp(seconds: int) -> bytes:
    """Encode a timestamp as 8 big-endian bytes; must fit an unsigned 64-bit."""
    if not 0 <= seconds < 1 << 64:
        raise ValueError("timestamp out of unsigned 64-bit range")
    return seconds.to_bytes(TIMESTAMP_LEN, "big")


def encode_identity(identity: bytes) -> bytes:
    """Length-prefix an identity so concatenations stay injective."""
    _check_identity(identity)
    return bytes([len(identity)]) + identity


def encode_counter(n: int) -> bytes:
    if not 1 <= n < 1 << 32:
        raise ValueError("registration counter must be in 1..2**32-1")
    return n.to_bytes(4, "big")


def xor_bytes(a: bytes, b: bytes) -> bytes:
    if len(a) != len(b):
        raise ValueError("XOR operands must have equal length")
    return bytes(x ^ y for x, y in zip(a, b))


def new_salt(rng: random.Random) -> bytes:
    return rng.randbytes(SALT_LEN)


def new_master_key(rng: random.Random) -> bytes:
    return rng.randbytes(MASTER_KEY_LEN)


@dataclass(frozen=True)
class SmartCard:
    """Card contents: the masked long-term secret and the salt."""

    l: bytes
    r: bytes

    def __post_init__(self):
        _check_salt(self.r)
        if len(self.l) == 0:
            raise ValueError("masked secret must be non-empty")


@dataclass
class ServerRecord:
    """One registry entry: identity plus its registration counter."""

    identity: bytes
    n: int

    def __post_init__(self):
        _check_identity(self.identity)
        encode_counter(self.n)


@dataclass
class ServerState:
    """Server-side secrets: the master key and the identity registry."""

    master_key: bytes
    records: list[ServerRecord] = field(default_factory=list)

    def __post_init__(self):
        _check_master_key(self.master_key)
        seen = set()
        for record in self.records:
            if record.identity in seen:
                raise DuplicateIdentityError(record.identity)
            seen.add(record.identity)

    def find(self, identity: bytes) -> ServerRecord | None:
        for record in self.records:
            if record.identity == identity:
                return record
        return None

    def register(self, identity: bytes) -> ServerRecord:
        """Append a first-time registration record (n starts at 1)."""
        if self.find(identity) is not None:
            raise DuplicateIdentityError(identity)
        record = ServerRecord(identity=identity, n=1)
        self.records.append(record)
        return record


@dataclass(frozen=True)
class LoginMessage:
    """First wire message: authenticator and user timestamp, no identity."""

    c1: bytes
    t_u: int

    def to_bytes(self) -> bytes:
        return bytes([LOGIN_TAG]) + self.c1 + encode_timestamp(self.t_u)

    @classmethod
    def from_bytes(cls, data: bytes, digest_length: int = 32) -> LoginMessage:
        if len(data) != 1 + digest_length + TIMESTAMP_LEN or data[0] != LOGIN_TAG:
            raise ValueError("malformed login message")
        return cls(
            c1=data[1 : 1 + digest_length],
            t_u=int.from_bytes(data[1 + digest_length :], "big"),
        )


@dataclass(frozen=True)
class ResponseMessage:
    """Second wire message: server authenticator and server timestamp."""

    c2: bytes
    t_s: int

    def to_bytes(self) -> bytes:
        return bytes([RESPONSE_TAG]) + self.c2 + encode_timestamp(self.t_s)

    @classmethod
    def from_bytes(cls, data: bytes, digest_length: int = 32) -> ResponseMessage:
        if len(data) != 1 + digest_length + TIMESTAMP_LEN or data[0] != RESPONSE_TAG:
            raise ValueError("malformed response message")
        return cls(
            c2=data[1 : 1 + digest_length],
            t_s=int.from_bytes(data[1 + digest_length :], "big"),
        )


def derive_rpw(suite: HashSuite, r: bytes, password: bytes) -> bytes:
    """Masked password: h(r || password)."""
    _check_salt(r)
    _check_password(password)
    return suite.h(r + password)


def derive_long_term_secret(
    suite: HashSuite, master_key: bytes, identity: bytes, n: int
) -> bytes:
    """Per-user long-term secret: h(x || identity || n)."""
    _check_master_key(master_key)
    return suite.h(master_key + encode_identity(identity) + encode_counter(n))


def server_issue_card(
    suite: HashSuite,
    master_key: bytes,
    identity: bytes,
    n: int,
    rpw: bytes,
    r: bytes,
) -> SmartCard:
    """Mint a card holding l = j XOR rpw and the salt r."""
    j = derive_long_term_secret(suite, master_key, identity, n)
    if len(rpw) != len(j):
        raise ValueError("masked password length does not match digest length")
    return SmartCard(l=xor_bytes(j, rpw), r=r)


def register_user(
    suite: HashSuite, state: ServerState, identity: bytes, rpw: bytes, r: bytes
) -> SmartCard:
    """Full registration: reject duplicates, record (identity, 1), issue card."""
    if state.find(identity) is not None:
        raise DuplicateIdentityError(identity)
    card = server_issue_card(suite, state.master_key, identity, 1, rpw, r)
    state.register(identity)
    return card


def card_login(
    suite: HashSuite, card: SmartCard, password: bytes, t_u: int
) -> LoginMessage:
    """Build the login message: c1 = h1((l XOR h(r||pw)) || t_u).

    A wrong password still yields a well-formed message; the server simply
    finds no record that reproduces it.
    """
    rpw = derive_rpw(suite, card.r, password)
    j = xor_bytes(card.l, rpw)
    c1 = suite.h1(j + encode_timestamp(t_u))
    return LoginMessage(c1=c1, t_u=t_u)


def server_verify_login(
    suite: HashSuite,
    state: ServerState,
    m1: LoginMessage,
    now: int,
    window: int,
) -> ServerRecord:
    """Find the record whose recomputed authenticator matches m1.

    Rejects with StaleTimestampError when |now - t_u| exceeds the window,
    and with UnknownOriginError when no record matches. The scan runs in
    registry (insertion) order; the first match wins. Digest comparison is
    constant-time so the scan itself introduces no timing oracle.
    """
    if window < 0:
        raise ValueError("freshness window must be non-negative")
    if abs(now - m1.t_u) > window:
        raise StaleTimestampError(f"login timestamp {m1.t_u} outside window at {now}")
    t_u_bytes = encode_timestamp(m1.t_u)
    for record in state.records:
        j = derive_long_term_secret(suite, state.master_key, record.identity, record.n)
        expected = suite.h1(j + t_u_bytes)
        if hmac.compare_digest(expected, m1.c1):
            return record
    raise UnknownOriginError("no registered identity reproduces the authenticator")


def server_respond(
    suite: HashSuite,
    master_key: bytes,
    record: ServerRecord,
    c1: bytes,
    t_s: int,
) -> tuple[ResponseMessage, bytes]:
    """Build the response and the server-side session key.

    c2 = h1(j || c1 || t_s), sk = h1(j || c2), with j recomputed from the
    master key and the matched record.
    """
    j = derive_long_term_secret(suite, master_key, record.identity, record.n)
    c2 = suite.h1(j + c1 + encode_timestamp(t_s))
    sk = suite.h1(j + c2)
    return ResponseMessage(c2=c2, t_s=t_s), sk


def user_verify_response(
    suite: HashSuite,
    j: bytes,
    c1: bytes,
    m2: ResponseMessage,
    now: int,
    window: int,
) -> bytes:
    """Check the server's authenticator and derive the session key.

    Rejects with StaleTimestampError or BadAuthenticatorError; on success
    returns sk = h1(j || c2).
    """
    if window < 0:
        raise ValueError("freshness window must be non-negative")
    if abs(now - m2.t_s) > window:
        raise StaleTimestampError(f"response timestamp {m2.t_s} outside window at {now}")
    expected = suite.h1(j + c1 + encode_timestamp(m2.t_s))
    if not hmac.compare_digest(expected, m2.c2):
        raise BadAuthenticatorError("response authenticator check failed")
    return suite.h1(j + m2.c2)
