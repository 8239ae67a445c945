"""The pair of one-way functions used by the scheme.

Both functions are instances of one underlying 256-bit digest, kept distinct
by a one-byte domain-separation prefix: the primary function hashes
``0x00 || m``, the secondary hashes ``0x01 || m``. Outputs may be truncated
to fewer bytes, which exists solely so that tests can run exhaustive
enumeration over a toy universe where collisions are reachable.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

# CLI-facing algorithm tags mapped to hashlib constructor names.
ALGORITHMS = {
    "sha256": "sha256",
    "sha3-256": "sha3_256",
    "blake2s": "blake2s",
}

DEFAULT_ALGORITHM = "sha256"

_PREFIX_PRIMARY = b"\x00"
_PREFIX_SECONDARY = b"\x01"


@dataclass(frozen=True)
class HashSuite:
    """A concrete choice of base digest and output width.

    ``digest_length`` defaults to the base digest's full 32 bytes; smaller
    values truncate both functions' outputs.
    """

    algorithm: str = DEFAULT_ALGORITHM
    digest_length: int = 32

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown hash algorithm {self.algorithm!r}; "
                f"expected one of {sorted(ALGORITHMS)}"
            )
        if not 1 <= self.digest_length <= 32:
            raise ValueError("digest_length must be in 1..32")

    def _digest(self, prefix: bytes, data: bytes) -> bytes:
        ctor = getattr(hashlib, ALGORITHMS[self.algorithm])
        return ctor(prefix + data).digest()[: self.digest_length]

    def h(self, data: bytes) -> bytes:
        """Primary one-way function (masking and key derivation)."""
        return self._digest(_PREFIX_PRIMARY, data)

    def h1(self, data: bytes) -> bytes:
        """Secondary one-way function (authenticators and session keys)."""
        return self._digest(_PREFIX_SECONDARY, data)
