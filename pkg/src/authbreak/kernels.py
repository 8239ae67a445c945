"""Candidate-scan kernels: compiled core with a pure-Python fallback.

The guessing attack spends essentially all its time in one loop (two digests
plus an XOR per candidate), so that loop exists twice: a Cython extension
over OpenSSL, picked at import when available, and a hashlib version that is
always present and serves as the reference. Both take the same arguments and
must return the same index; ``tests/test_kernels.py`` holds them to that.
"""

from __future__ import annotations

import hashlib

from .hashes import ALGORITHMS

try:
    from . import _guesscore
except ImportError:
    _guesscore = None

HAVE_COMPILED = _guesscore is not None


def scan_candidates_py(
    algorithm: str,
    digest_length: int,
    masked_secret: bytes,
    salt: bytes,
    target_c1: bytes,
    t_u_bytes: bytes,
    candidates: list[bytes],
) -> int:
    """Reference scan: first index whose derived authenticator matches, else -1."""
    ctor = getattr(hashlib, ALGORITHMS[algorithm])
    for i, pw in enumerate(candidates):
        rpw = ctor(b"\x00" + salt + pw).digest()[:digest_length]
        j = bytes(a ^ b for a, b in zip(masked_secret, rpw))
        c1 = ctor(b"\x01" + j + t_u_bytes).digest()[:digest_length]
        if c1 == target_c1:
            return i
    return -1


_COMPILED_ALGORITHMS: frozenset[str] | None = None


def _compiled_supports(algorithm: str) -> bool:
    global _COMPILED_ALGORITHMS
    if not HAVE_COMPILED:
        return False
    if _COMPILED_ALGORITHMS is None:
        try:
            _COMPILED_ALGORITHMS = frozenset(_guesscore.available_algorithms())
        except Exception:
            _COMPILED_ALGORITHMS = frozenset()
    return algorithm in _COMPILED_ALGORITHMS


def scan_candidates(
    algorithm: str,
    digest_length: int,
    masked_secret: bytes,
    salt: bytes,
    target_c1: bytes,
    t_u_bytes: bytes,
    candidates: list[bytes],
    engine: str | None = None,
) -> int:
    """Dispatch to the requested or best available kernel.

    engine: None picks compiled when it can serve the algorithm, otherwise
    pure; "compiled" and "pure" force the choice.
    """
    if engine not in (None, "compiled", "pure"):
        raise ValueError(f"unknown engine {engine!r}")
    use_compiled = (
        _compiled_supports(algorithm) if engine is None else engine == "compiled"
    )
    if use_compiled:
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel is not available")
        return _guesscore.scan_candidates(
            algorithm, digest_length, masked_secret, salt, target_c1, t_u_bytes, candidates
        )
    return scan_candidates_py(
        algorithm, digest_length, masked_secret, salt, target_c1, t_u_bytes, candidates
    )
