"""Command-line front end: registration, sessions, and both breaks.

Exit codes are a stable contract: 0 success, 1 attack exhausted or no data,
2 duplicate identity, 3 I/O failure, 4 authentication rejected, 5 stale
timestamp. With ``--output-mode machine-lines`` stdout carries only
``key=value`` tokens, one record per line; diagnostics go to stderr.

Passwords may be given with ``--password`` for scripted runs (the flag ends
up in shell history; prefer the prompt for anything you care about).
"""

from __future__ import annotations

import argparse
import getpass
import random
import sys
from dataclasses import dataclass

from . import attacks, scheme, simulator, store
from .errors import (
    DuplicateIdentityError,
    StoreError,
)
from .hashes import ALGORITHMS, DEFAULT_ALGORITHM, HashSuite
from .simulator import LogicalClock, Outcome, SessionTranscript

EXIT_OK = 0
EXIT_NO_RESULT = 1
EXIT_DUPLICATE = 2
EXIT_IO = 3
EXIT_REJECTED = 4
EXIT_STALE = 5

# Each logged session starts this many seconds after the previous one, so
# timestamps across CLI invocations are distinct but reproducible.
SESSION_SPACING = 10


@dataclass
class CliConfig:
    registry_path: str
    window: int
    seed: int
    hash_id: str
    output_mode: str
    jobs: int

    @property
    def suite(self) -> HashSuite:
        return HashSuite(algorithm=self.hash_id)


class Printer:
    """Human prose or machine key=value lines, never both on stdout."""

    def __init__(self, mode: str):
        self.machine = mode == "machine-lines"

    def emit(self, human: str, **fields):
        if self.machine:
            print(" ".join(f"{k}={v}" for k, v in fields.items()))
        else:
            print(human)

    @staticmethod
    def error(message: str):
        print(f"error: {message}", file=sys.stderr)


def _positive_window(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("window must be >= 1 second")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="authbreak",
        description="Workbench for a dynamic-ID smart-card authentication "
        "scheme: run the protocol, then break it.",
    )
    parser.add_argument("--registry", default="registry.txt", help="registry file path")
    parser.add_argument("--window", type=_positive_window, default=60,
                        help="freshness window in seconds (default 60)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all generated randomness (default 0)")
    parser.add_argument("--hash", default=DEFAULT_ALGORITHM, choices=sorted(ALGORITHMS),
                        help="base hash for both one-way functions")
    parser.add_argument("--output-mode", default="human",
                        choices=["human", "machine-lines"])
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for the guessing scan")

    sub = parser.add_subparsers(dest="command", required=True)

    p_register = sub.add_parser("register", help="register a user and issue a card file")
    p_register.add_argument("identity")
    p_register.add_argument("--password", help="password (prompted when omitted)")
    p_register.add_argument("--card-out", help="card file path (default <identity>.card)")

    p_session = sub.add_parser("session", help="run one honest login session")
    p_session.add_argument("--card", required=True, help="card file path")
    p_session.add_argument("--password", help="password (prompted when omitted)")
    p_session.add_argument("--log", default="transcripts.log",
                           help="transcript log to append to")
    p_session.add_argument("--skew", type=int, default=0,
                           help="extra seconds of delay injected on each hop")

    p_attack = sub.add_parser("attack", help="run an attack against captured data")
    attack_sub = p_attack.add_subparsers(dest="attack_command", required=True)

    p_guess = attack_sub.add_parser("guess", help="offline password guessing")
    p_guess.add_argument("--log", default="transcripts.log")
    p_guess.add_argument("--card", required=True)
    p_guess.add_argument("--wordlist", required=True)

    p_fs = attack_sub.add_parser("fs", help="recover past session keys")
    p_fs.add_argument("--log", default="transcripts.log")
    p_fs.add_argument("--card", required=True)
    p_fs.add_argument("--password", help="true or recovered password")

    sub.add_parser("demo", help="scripted end-to-end demonstration")

    return parser


def _ask_password(value: str | None) -> bytes:
    if value is None:
        value = getpass.getpass("password: ")
    return value.encode("utf-8")


def _append_log(path: str, transcript: SessionTranscript, sk: bytes | None):
    m2_hex = transcript.m2.to_bytes().hex() if transcript.m2 is not None else "-"
    sk_hex = sk.hex() if sk is not None else "-"
    line = (
        f"session={transcript.session_index} outcome={transcript.outcome.value} "
        f"m1={transcript.m1.to_bytes().hex()} m2={m2_hex} sk={sk_hex}\n"
    )
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(line)


def _count_log_lines(path: str) -> int:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return sum(1 for line in fh if line.strip())
    except FileNotFoundError:
        return 0


def _read_log(path: str, digest_length: int) -> list[tuple[SessionTranscript, bytes | None]]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    entries = []
    for line in text.splitlines():
        if not line:
            continue
        fields = dict(token.partition("=")[::2] for token in line.split(" "))
        m1 = scheme.LoginMessage.from_bytes(bytes.fromhex(fields["m1"]), digest_length)
        m2 = None
        if fields.get("m2", "-") != "-":
            m2 = scheme.ResponseMessage.from_bytes(bytes.fromhex(fields["m2"]), digest_length)
        sk = bytes.fromhex(fields["sk"]) if fields.get("sk", "-") != "-" else None
        transcript = SessionTranscript(
            session_index=int(fields["session"]),
            outcome=Outcome(fields["outcome"]),
            m1=m1,
            m2=m2,
        )
        entries.append((transcript, sk))
    return entries


def cmd_register(cfg: CliConfig, out: Printer, identity: str, password: str | None,
                 card_out: str | None) -> int:
    suite = cfg.suite
    rng = random.Random(cfg.seed)
    identity_bytes = identity.encode("utf-8")
    password_bytes = _ask_password(password)
    card_path = card_out if card_out is not None else f"{identity}.card"

    try:
        state = store.load_registry(cfg.registry_path)
    except FileNotFoundError:
        state = scheme.ServerState(master_key=scheme.new_master_key(rng))
    except (StoreError, DuplicateIdentityError, OSError) as exc:
        out.error(f"cannot load registry: {exc}")
        return EXIT_IO

    salt = scheme.new_salt(rng)
    rpw = scheme.derive_rpw(suite, salt, password_bytes)
    try:
        card = scheme.register_user(suite, state, identity_bytes, rpw, salt)
    except DuplicateIdentityError:
        out.error("identity already registered; choose a new identity")
        return EXIT_DUPLICATE

    try:
        store.save_registry(state, cfg.registry_path)
        store.save_card(card, card_path)
    except OSError as exc:
        out.error(f"cannot write output: {exc}")
        return EXIT_IO

    out.emit(f"card written to {card_path}", event="register",
             identity=identity, card=card_path)
    return EXIT_OK


def cmd_session(cfg: CliConfig, out: Printer, card_path: str, password: str | None,
                log_path: str, skew: int) -> int:
    suite = cfg.suite
    try:
        card = store.load_card(card_path)
        state = store.load_registry(cfg.registry_path)
    except (FileNotFoundError, StoreError, DuplicateIdentityError, OSError) as exc:
        out.error(f"cannot load inputs: {exc}")
        return EXIT_IO

    password_bytes = _ask_password(password)
    index = _count_log_lines(log_path)
    clock = LogicalClock(start=index * SESSION_SPACING)
    result = simulator.run_honest_session(
        suite, card, password_bytes, state, clock,
        window=cfg.window, session_index=index, hop_seconds=1 + skew,
    )

    try:
        _append_log(log_path, result.transcript, result.server_sk
                    if result.transcript.outcome is Outcome.COMPLETED else None)
    except OSError as exc:
        out.error(f"cannot append transcript log: {exc}")
        return EXIT_IO

    outcome = result.transcript.outcome
    user_hex = result.user_sk.hex() if result.user_sk is not None else "-"
    server_hex = result.server_sk.hex() if result.server_sk is not None else "-"
    if out.machine:
        out.emit("", outcome=outcome.value, user_sk=user_hex, server_sk=server_hex)
    else:
        print(f"outcome: {outcome.value}")
        if result.user_sk is not None:
            print(f"user sk: {user_hex}")
            print(f"server sk: {server_hex}")

    if outcome is Outcome.COMPLETED and result.user_sk == result.server_sk:
        return EXIT_OK
    if outcome is Outcome.REJECTED_STALE:
        return EXIT_STALE
    return EXIT_REJECTED


def cmd_attack_guess(cfg: CliConfig, out: Printer, log_path: str, card_path: str,
                     wordlist_path: str) -> int:
    suite = cfg.suite
    try:
        entries = _read_log(log_path, suite.digest_length)
        card = store.load_card(card_path)
        words = store.load_wordlist(wordlist_path)
    except (FileNotFoundError, StoreError, OSError, ValueError, KeyError) as exc:
        out.error(f"cannot load inputs: {exc}")
        return EXIT_IO

    view = simulator.eavesdrop([t for t, _ in entries], card_dump=card)
    try:
        result = attacks.offline_guess(suite, view, words, jobs=cfg.jobs)
    except ValueError as exc:
        out.error(str(exc))
        return EXIT_NO_RESULT

    if result.recovered_password is None:
        out.emit(
            f"no candidate matched ({result.guesses_tried} guesses, "
            f"{result.elapsed_ms:.1f} ms)",
            recovered="-", guesses=result.guesses_tried,
            elapsed_ms=f"{result.elapsed_ms:.1f}",
        )
        return EXIT_NO_RESULT

    password = result.recovered_password.decode("utf-8", errors="backslashreplace")
    out.emit(
        f"recovered password '{password}' after {result.guesses_tried} guesses "
        f"({result.elapsed_ms:.1f} ms)",
        recovered=password, guesses=result.guesses_tried,
        elapsed_ms=f"{result.elapsed_ms:.1f}",
    )
    return EXIT_OK


def cmd_attack_fs(cfg: CliConfig, out: Printer, log_path: str, card_path: str,
                  password: str | None) -> int:
    suite = cfg.suite
    try:
        entries = _read_log(log_path, suite.digest_length)
        card = store.load_card(card_path)
    except (FileNotFoundError, StoreError, OSError, ValueError, KeyError) as exc:
        out.error(f"cannot load inputs: {exc}")
        return EXIT_IO

    password_bytes = _ask_password(password)
    completed = [(t, sk) for t, sk in entries if t.outcome is Outcome.COMPLETED]
    if not completed:
        out.error("transcript log has no completed sessions")
        return EXIT_NO_RESULT

    j = attacks.derive_j_from_card(suite, card, password_bytes)
    view = simulator.eavesdrop([t for t, _ in completed])
    result = attacks.forward_secrecy_break(suite, j, view)

    all_match = True
    for (transcript, recorded_sk), recovered in zip(completed, result.session_keys):
        if recorded_sk is None:
            verdict = "unverified"
        elif recovered == recorded_sk:
            verdict = "match"
        else:
            verdict = "mismatch"
            all_match = False
        out.emit(
            f"session {transcript.session_index}: recovered sk {recovered.hex()} ({verdict})",
            session=transcript.session_index, sk=recovered.hex(), verdict=verdict,
        )

    if all_match:
        out.emit(
            f"recovered {len(result.session_keys)} session key(s); "
            "all recorded keys match",
            recovered=len(result.session_keys), all_match="true",
        )
        return EXIT_OK
    out.emit("recovered keys do not match the recorded session keys",
             recovered=len(result.session_keys), all_match="false")
    return EXIT_NO_RESULT


def cmd_demo(cfg: CliConfig, out: Printer) -> int:
    suite = cfg.suite
    rng = random.Random(cfg.seed)

    out.emit(
        f"scenario: seed={cfg.seed} hash={cfg.hash_id} window={cfg.window}",
        event="scenario", seed=cfg.seed, hash=cfg.hash_id, window=cfg.window,
    )

    # Fresh world: one server, one user whose password sits somewhere in a
    # 10k-word candidate list.
    state = scheme.ServerState(master_key=scheme.new_master_key(rng))
    identity = f"user-{rng.randrange(10**6):06d}".encode("utf-8")
    words = [f"pw-{rng.randrange(16**8):08x}".encode("utf-8") for _ in range(10_000)]
    password = words[rng.randrange(len(words))]

    salt = scheme.new_salt(rng)
    rpw = scheme.derive_rpw(suite, salt, password)
    card = scheme.register_user(suite, state, identity, rpw, salt)
    out.emit(
        f"registered '{identity.decode()}' and issued a card",
        event="register", identity=identity.decode(),
    )

    clock = LogicalClock(start=rng.randrange(1 << 20))
    results = []
    for i in range(3):
        result = simulator.run_honest_session(
            suite, card, password, state, clock, window=cfg.window, session_index=i
        )
        results.append(result)
        sk_hex = result.server_sk.hex() if result.server_sk else "-"
        out.emit(
            f"session {i}: {result.transcript.outcome.value}, sk={sk_hex}",
            event="session", index=i, outcome=result.transcript.outcome.value,
            sk=sk_hex,
        )
        clock.advance(SESSION_SPACING)

    view = simulator.eavesdrop([r.transcript for r in results], card_dump=card)
    out.emit(
        f"adversary: captured {len(view.transcripts)} transcripts "
        "and extracted the card contents (l, r)",
        event="eavesdrop", transcripts=len(view.transcripts), card_dump=1,
    )

    guess = attacks.offline_guess(suite, view, words, jobs=cfg.jobs)
    if guess.recovered_password is None:
        out.emit("guessing failed (password not in list)",
                 event="guess", recovered="-", guesses=guess.guesses_tried)
        return EXIT_NO_RESULT
    out.emit(
        f"guessing: recovered password '{guess.recovered_password.decode()}' "
        f"after {guess.guesses_tried} guesses",
        event="guess", recovered=guess.recovered_password.decode(),
        guesses=guess.guesses_tried,
    )

    j = attacks.derive_j_from_card(suite, card, guess.recovered_password)
    out.emit("long-term secret unmasked from the card", event="unmask", j=j.hex())

    fs = attacks.forward_secrecy_break(suite, j, view)
    matched = sum(
        1 for recovered, result in zip(fs.session_keys, results)
        if recovered == result.server_sk
    )
    for i, recovered in enumerate(fs.session_keys):
        verdict = "match" if recovered == results[i].server_sk else "mismatch"
        out.emit(
            f"session {i}: recovered sk {recovered.hex()} ({verdict})",
            event="recover", index=i, sk=recovered.hex(), verdict=verdict,
        )

    total = len(fs.session_keys)
    out.emit(
        f"all {total} session keys recovered byte-exactly"
        if matched == total
        else f"recovered {matched}/{total} session keys",
        event="result", keys_recovered=matched, keys_total=total,
        all_recovered="true" if matched == total else "false",
    )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(
        registry_path=args.registry,
        window=args.window,
        seed=args.seed,
        hash_id=args.hash,
        output_mode=args.output_mode,
        jobs=args.jobs,
    )
    out = Printer(cfg.output_mode)

    if args.command == "register":
        return cmd_register(cfg, out, args.identity, args.password, args.card_out)
    if args.command == "session":
        return cmd_session(cfg, out, args.card, args.password, args.log, args.skew)
    if args.command == "attack":
        if args.attack_command == "guess":
            return cmd_attack_guess(cfg, out, args.log, args.card, args.wordlist)
        return cmd_attack_fs(cfg, out, args.log, args.card, args.password)
    return cmd_demo(cfg, out)


if __name__ == "__main__":
    sys.exit(main())
