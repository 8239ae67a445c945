"""Deterministic session orchestration over a recorded public channel.

A session is driven by a logical clock that advances one tick per channel
hop, so freshness failures are reproducible rather than racy. Everything an
eavesdropper on the public channel would see is captured in a
``SessionTranscript``; an ``AdversaryView`` bundles transcripts with an
optional card dump for the attack code. Transcripts hold public data only:
never the master key, the long-term secret, the password, or a session key.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import scheme
from .errors import BadAuthenticatorError, StaleTimestampError, UnknownOriginError
from .hashes import HashSuite


class Outcome(enum.Enum):
    COMPLETED = "completed"
    REJECTED_STALE = "rejected-stale"
    REJECTED_UNKNOWN = "rejected-unknown"
    REJECTED_BAD_AUTHENTICATOR = "rejected-bad-authenticator"


class LogicalClock:
    """Monotonic second counter advanced only by explicit calls."""

    def __init__(self, start: int = 0, step: int = 1):
        if start < 0 or step < 0:
            raise ValueError("clock start and step must be non-negative")
        self._now = start
        self.step = step

    @property
    def now(self) -> int:
        return self._now

    def tick(self) -> int:
        self._now += self.step
        return self._now

    def advance(self, seconds: int) -> int:
        if seconds < 0:
            raise ValueError("clock cannot move backwards")
        self._now += seconds
        return self._now


@dataclass(frozen=True)
class SessionTranscript:
    """Public-channel capture of one session."""

    session_index: int
    outcome: Outcome
    m1: scheme.LoginMessage
    m2: scheme.ResponseMessage | None = None


@dataclass(frozen=True)
class AdversaryView:
    """What the adversary holds: eavesdropped sessions, optionally a card dump."""

    transcripts: tuple[SessionTranscript, ...] = ()
    card_dump: scheme.SmartCard | None = None


@dataclass
class SessionResult:
    transcript: SessionTranscript
    user_sk: bytes | None = None
    server_sk: bytes | None = None


def run_honest_session(
    suite: HashSuite,
    card: scheme.SmartCard,
    password: bytes,
    state: scheme.ServerState,
    clock: LogicalClock,
    window: int = 60,
    session_index: int = 0,
    hop_seconds: int | None = None,
) -> SessionResult:
    """Drive one full session: login, verify, respond, verify.

    The clock advances ``hop_seconds`` (default: one clock step) between a
    message being sent and received, on both hops. Rejections from either
    side land in the transcript outcome instead of propagating.
    """
    hop = clock.step if hop_seconds is None else hop_seconds

    t_u = clock.now
    m1 = scheme.card_login(suite, card, password, t_u)
    clock.advance(hop)

    try:
        record = scheme.server_verify_login(suite, state, m1, clock.now, window)
    except StaleTimestampError:
        return SessionResult(SessionTranscript(session_index, Outcome.REJECTED_STALE, m1))
    except UnknownOriginError:
        return SessionResult(SessionTranscript(session_index, Outcome.REJECTED_UNKNOWN, m1))

    m2, server_sk = scheme.server_respond(suite, state.master_key, record, m1.c1, clock.now)
    clock.advance(hop)

    rpw = scheme.derive_rpw(suite, card.r, password)
    j = scheme.xor_bytes(card.l, rpw)
    try:
        user_sk = scheme.user_verify_response(suite, j, m1.c1, m2, clock.now, window)
    except StaleTimestampError:
        return SessionResult(
            SessionTranscript(session_index, Outcome.REJECTED_STALE, m1, m2)
        )
    except BadAuthenticatorError:
        return SessionResult(
            SessionTranscript(session_index, Outcome.REJECTED_BAD_AUTHENTICATOR, m1, m2)
        )

    transcript = SessionTranscript(session_index, Outcome.COMPLETED, m1, m2)
    return SessionResult(transcript, user_sk=user_sk, server_sk=server_sk)


def run_replayed_login(
    suite: HashSuite,
    prior: SessionTranscript,
    state: scheme.ServerState,
    clock: LogicalClock,
    window: int = 60,
) -> bool:
    """Re-deliver a captured login message at the current clock.

    Returns the server's accept/reject decision. The scheme keeps no replay
    cache, so within the freshness window the replay goes through.
    """
    try:
        scheme.server_verify_login(suite, state, prior.m1, clock.now, window)
    except (StaleTimestampError, UnknownOriginError):
        return False
    return True


def eavesdrop(
    sessions: list[SessionTranscript] | tuple[SessionTranscript, ...],
    card_dump: scheme.SmartCard | None = None,
) -> AdversaryView:
    """Package public captures (and, if the scenario grants it, a card dump)."""
    return AdversaryView(transcripts=tuple(sessions), card_dump=card_dump)


def export_transcripts(transcripts: list[SessionTranscript] | tuple[SessionTranscript, ...]) -> str:
    """Canonical line export: index, outcome, hex(m1), hex(m2); '-' if no m2."""
    lines = []
    for t in transcripts:
        m2_hex = t.m2.to_bytes().hex() if t.m2 is not None else "-"
        lines.append(f"{t.session_index} {t.outcome.value} {t.m1.to_bytes().hex()} {m2_hex}\n")
    return "".join(lines)


def parse_transcripts(text: str, digest_length: int = 32) -> list[SessionTranscript]:
    """Parse the export format back into transcripts."""
    transcripts = []
    for line in text.splitlines():
        if not line:
            continue
        index_str, outcome_str, m1_hex, m2_hex = line.split(" ")
        m1 = scheme.LoginMessage.from_bytes(bytes.fromhex(m1_hex), digest_length)
        m2 = None
        if m2_hex != "-":
            m2 = scheme.ResponseMessage.from_bytes(bytes.fromhex(m2_hex), digest_length)
        transcripts.append(
            SessionTranscript(int(index_str), Outcome(outcome_str), m1, m2)
        )
    return transcripts
