"""Workbench for a dynamic-ID smart-card authentication scheme.

Implements the protocol (registration, login, mutual authentication,
session-key agreement) and two executable breaks against it: offline
password guessing from a lost card plus one eavesdropped login, and
recovery of all past session keys once the long-term secret leaks.
"""

from .attacks import (
    ForwardSecrecyResult,
    GuessingResult,
    derive_j_from_card,
    forward_secrecy_break,
    offline_guess,
)
from .errors import (
    AuthBreakError,
    BadAuthenticatorError,
    BadVersionError,
    DuplicateIdentityError,
    MalformedLineError,
    ProtocolRejection,
    StaleTimestampError,
    StoreError,
    UnknownOriginError,
)
from .hashes import HashSuite
from .scheme import (
    LoginMessage,
    ResponseMessage,
    ServerRecord,
    ServerState,
    SmartCard,
    card_login,
    derive_long_term_secret,
    derive_rpw,
    new_master_key,
    new_salt,
    register_user,
    server_issue_card,
    server_respond,
    server_verify_login,
    user_verify_response,
)
from .simulator import (
    AdversaryView,
    LogicalClock,
    Outcome,
    SessionTranscript,
    eavesdrop,
    run_honest_session,
    run_replayed_login,
)

__version__ = "0.1.0"
