"""Scenario builders shared across the test modules."""

from __future__ import annotations

import random
from dataclasses import dataclass

from authbreak import HashSuite, scheme
from authbreak.simulator import LogicalClock, SessionResult, run_honest_session


@dataclass
class Scenario:
    suite: HashSuite
    state: scheme.ServerState
    identity: bytes
    password: bytes
    salt: bytes
    card: scheme.SmartCard


def make_scenario(
    rng: random.Random,
    suite: HashSuite | None = None,
    identity: bytes | None = None,
    password: bytes | None = None,
) -> Scenario:
    """One registered user on a fresh server, everything drawn from rng."""
    suite = suite or HashSuite()
    identity = identity or f"user-{rng.randrange(1 << 30):08x}".encode()
    password = password or f"pw-{rng.randrange(1 << 40):010x}".encode()
    state = scheme.ServerState(master_key=scheme.new_master_key(rng))
    salt = scheme.new_salt(rng)
    rpw = scheme.derive_rpw(suite, salt, password)
    card = scheme.register_user(suite, state, identity, rpw, salt)
    return Scenario(suite, state, identity, password, salt, card)


def honest_session(
    scenario: Scenario,
    clock: LogicalClock | None = None,
    window: int = 60,
    session_index: int = 0,
) -> SessionResult:
    clock = clock or LogicalClock(start=1_000)
    return run_honest_session(
        scenario.suite,
        scenario.card,
        scenario.password,
        scenario.state,
        clock,
        window=window,
        session_index=session_index,
    )


def true_j(scenario: Scenario) -> bytes:
    """Server-side long-term secret for the scenario's user."""
    return scheme.derive_long_term_secret(
        scenario.suite, scenario.state.master_key, scenario.identity, 1
    )
