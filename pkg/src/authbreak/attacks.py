"""The two breaks, run purely from an adversary's view of the channel.

Offline guessing needs one eavesdropped login message plus the contents of
a lost card (l, r): each candidate password pw* yields a trial secret
j* = l XOR h(r || pw*), accepted when h1(j* || t_u) reproduces the captured
authenticator. No interaction with the server is involved.

Once the long-term secret j is known (guessed password plus card, or any
other leak), every past session key falls: sk = h1(j || c2) uses only j and
the publicly transmitted response authenticator, so captured transcripts
replay into the exact keys the honest parties derived.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import kernels, scheme
from .hashes import HashSuite
from .simulator import AdversaryView, Outcome


@dataclass(frozen=True)
class GuessingResult:
    recovered_password: bytes | None
    guesses_tried: int
    elapsed_ms: float


@dataclass(frozen=True)
class ForwardSecrecyResult:
    """Recovered session keys in capture order; skipped counts transcripts without a response."""

    session_keys: tuple[bytes, ...]
    skipped: int


def derive_j_from_card(suite: HashSuite, card: scheme.SmartCard, password: bytes) -> bytes:
    """Unmask the long-term secret: l XOR h(r || password)."""
    return scheme.xor_bytes(card.l, suite.h(card.r + password))


def offline_guess(
    suite: HashSuite,
    view: AdversaryView,
    candidates: list[bytes],
    jobs: int = 1,
    engine: str | None = None,
) -> GuessingResult:
    """Dictionary scan against the first completed captured session.

    Candidates are tried in list order; the first satisfying one wins.
    With jobs > 1 the list is chunked across threads, but the outcome is
    identical to the sequential scan: the lowest-index match is reported
    and guesses_tried is what the sequential scan would have evaluated.
    """
    if view.card_dump is None:
        raise ValueError("guessing requires the card contents (l, r)")
    target = next(
        (t for t in view.transcripts if t.outcome is Outcome.COMPLETED), None
    )
    if target is None:
        raise ValueError("guessing requires at least one completed transcript")
    if jobs < 1:
        raise ValueError("jobs must be >= 1")

    card = view.card_dump
    t_u_bytes = scheme.encode_timestamp(target.m1.t_u)
    args = (suite.algorithm, suite.digest_length, card.l, card.r, target.m1.c1, t_u_bytes)

    start = time.perf_counter()
    if jobs == 1 or len(candidates) < 2 * jobs:
        found = kernels.scan_candidates(*args, candidates, engine=engine)
    else:
        chunk = (len(candidates) + jobs - 1) // jobs
        slices = [(off, candidates[off : off + chunk]) for off in range(0, len(candidates), chunk)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(lambda s: kernels.scan_candidates(*args, s[1], engine=engine), slices)
            )
        matches = [off + i for (off, _), i in zip(slices, results) if i >= 0]
        found = min(matches) if matches else -1
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    if found < 0:
        return GuessingResult(None, len(candidates), elapsed_ms)
    return GuessingResult(candidates[found], found + 1, elapsed_ms)


def forward_secrecy_break(
    suite: HashSuite, j: bytes, view: AdversaryView
) -> ForwardSecrecyResult:
    """Recompute sk = h1(j || c2) for every captured response, in order."""
    keys = []
    skipped = 0
    for transcript in view.transcripts:
        if transcript.m2 is None:
            skipped += 1
            continue
        keys.append(suite.h1(j + transcript.m2.c2))
    return ForwardSecrecyResult(session_keys=tuple(keys), skipped=skipped)
