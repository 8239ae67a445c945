"""Line-based persistence for server state, cards, and word lists.

Formats are plain text on purpose: this is a cryptanalysis workbench, so the
master key and the card's masked secret sit in readable files that fixtures
and demonstrations can inspect. Do not mistake either file for a secure
storage format.

Registry: ``authbreak-registry v1 <64-hex master key>`` then one
``<n> <identity>`` line per record (n is the first token; the identity may
contain spaces). Card: ``authbreak-card v1`` / ``L=<64-hex>`` / ``r=<32-hex>``.
Both use UTF-8, LF line endings, lowercase hex on write (uppercase accepted
on read). Writes go through a temp file and an atomic rename; single writer
per file, any number of readers.
"""

from __future__ import annotations

import os
import tempfile

from .errors import BadVersionError, DuplicateIdentityError, MalformedLineError
from .scheme import (
    MASTER_KEY_LEN,
    MAX_IDENTITY_LEN,
    SALT_LEN,
    ServerRecord,
    ServerState,
    SmartCard,
)

REGISTRY_MAGIC = "authbreak-registry"
CARD_MAGIC = "authbreak-card"
VERSION = 1


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".authbreak-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def _parse_hex(token: str, width: int, lineno: int, what: str) -> bytes:
    if len(token) != width:
        raise MalformedLineError(lineno, f"{what} must be {width} hex chars")
    try:
        return bytes.fromhex(token)
    except ValueError:
        raise MalformedLineError(lineno, f"{what} is not valid hex") from None


def _encode_identity_text(identity: bytes) -> str:
    try:
        text = identity.decode("utf-8")
    except UnicodeDecodeError:
        raise ValueError("registry identities must be valid UTF-8") from None
    if "\n" in text or "\r" in text:
        raise ValueError("registry identities must not contain line breaks")
    return text


def save_registry(state: ServerState, path: str):
    lines = [f"{REGISTRY_MAGIC} v{VERSION} {state.master_key.hex()}\n"]
    for record in state.records:
        lines.append(f"{record.n} {_encode_identity_text(record.identity)}\n")
    _atomic_write(path, "".join(lines))


def load_registry(path: str) -> ServerState:
    with open(path, "r", encoding="utf-8", newline="\n") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    if not lines:
        raise MalformedLineError(1, "missing header")
    header = lines[0].split(" ")
    if len(header) != 3 or header[0] != REGISTRY_MAGIC or not header[1].startswith("v"):
        raise MalformedLineError(1, "bad registry header")
    if header[1] != f"v{VERSION}":
        raise BadVersionError(f"unsupported registry version {header[1]!r}")
    master_key = _parse_hex(header[2].lower(), MASTER_KEY_LEN * 2, 1, "master key")

    records = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        n_str, sep, identity_text = line.partition(" ")
        if not sep or not identity_text:
            raise MalformedLineError(lineno, "expected '<n> <identity>'")
        if not n_str.isdigit():
            raise MalformedLineError(lineno, "counter must be a decimal integer")
        n = int(n_str)
        if not 1 <= n < 1 << 32:
            raise MalformedLineError(lineno, "counter out of range")
        identity = identity_text.encode("utf-8")
        if len(identity) > MAX_IDENTITY_LEN:
            raise MalformedLineError(lineno, "identity longer than 64 bytes")
        if identity in seen:
            raise DuplicateIdentityError(identity)
        seen.add(identity)
        records.append(ServerRecord(identity=identity, n=n))
    return ServerState(master_key=master_key, records=records)


def save_card(card: SmartCard, path: str):
    if len(card.l) != MASTER_KEY_LEN:
        raise ValueError("card file format requires a 32-byte masked secret")
    text = f"{CARD_MAGIC} v{VERSION}\nL={card.l.hex()}\nr={card.r.hex()}\n"
    _atomic_write(path, text)


def load_card(path: str) -> SmartCard:
    with open(path, "r", encoding="utf-8", newline="\n") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    if not lines:
        raise MalformedLineError(1, "missing header")
    if len(lines) > 3:
        raise MalformedLineError(4, "unexpected extra content")
    header = lines[0].split(" ")
    if len(header) != 2 or header[0] != CARD_MAGIC or not header[1].startswith("v"):
        raise MalformedLineError(1, "bad card header")
    if header[1] != f"v{VERSION}":
        raise BadVersionError(f"unsupported card version {header[1]!r}")
    if len(lines) < 3:
        raise MalformedLineError(len(lines) + 1, "missing field line")
    if not lines[1].startswith("L="):
        raise MalformedLineError(2, "expected 'L=<64-hex>'")
    if not lines[2].startswith("r="):
        raise MalformedLineError(3, "expected 'r=<32-hex>'")
    l = _parse_hex(lines[1][2:].lower(), MASTER_KEY_LEN * 2, 2, "L")
    r = _parse_hex(lines[2][2:].lower(), SALT_LEN * 2, 3, "r")
    return SmartCard(l=l, r=r)


def load_wordlist(path: str) -> list[bytes]:
    """One candidate per line, UTF-8; blank lines are skipped, order is kept."""
    with open(path, "r", encoding="utf-8") as fh:
        return [line.encode("utf-8") for line in fh.read().splitlines() if line]
