import random

import pytest

from authbreak import kernels, scheme
from authbreak.hashes import HashSuite

needs_compiled = pytest.mark.skipif(
    not kernels.HAVE_COMPILED, reason="compiled kernel not built"
)


def _case(rng, suite, size, plant_at=None):
    """Random scan inputs; plant_at places the true password at that index."""
    state = scheme.ServerState(master_key=scheme.new_master_key(rng))
    password = f"pw-{rng.randrange(1 << 40):010x}".encode()
    salt = scheme.new_salt(rng)
    rpw = scheme.derive_rpw(suite, salt, password)
    card = scheme.register_user(suite, state, b"kernel-user", rpw, salt)
    t_u = rng.randrange(1 << 32)
    m1 = scheme.card_login(suite, card, password, t_u)
    words = [f"c-{rng.randrange(1 << 40):010x}".encode() for _ in range(size)]
    if plant_at is not None:
        words[plant_at] = password
    return (
        suite.algorithm, suite.digest_length, card.l, card.r,
        m1.c1, scheme.encode_timestamp(t_u), words,
    )


def test_pure_scan_finds_planted_candidate():
    rng = random.Random(1)
    args = _case(rng, HashSuite(), 100, plant_at=37)
    assert kernels.scan_candidates_py(*args) == 37


def test_pure_scan_misses_cleanly():
    rng = random.Random(2)
    args = _case(rng, HashSuite(), 100)
    assert kernels.scan_candidates_py(*args) == -1


@needs_compiled
@pytest.mark.parametrize("algorithm", ["sha256", "sha3-256", "blake2s"])
@pytest.mark.parametrize("plant_at", [None, 0, 63, 499])
def test_compiled_matches_pure(algorithm, plant_at):
    rng = random.Random(hash((algorithm, plant_at)) & 0xFFFF)
    suite = HashSuite(algorithm=algorithm)
    args = _case(rng, suite, 500, plant_at=plant_at)
    expected = kernels.scan_candidates_py(*args)
    assert kernels.scan_candidates(*args, engine="compiled") == expected
    if plant_at is not None:
        assert expected == plant_at


@needs_compiled
def test_compiled_matches_pure_on_truncated_digests():
    rng = random.Random(5)
    suite = HashSuite(digest_length=2)
    args = _case(rng, suite, 400, plant_at=123)
    pure = kernels.scan_candidates_py(*args)
    compiled = kernels.scan_candidates(*args, engine="compiled")
    # Truncated digests collide, so the planted index is an upper bound; the
    # two engines must still agree exactly.
    assert compiled == pure
    assert 0 <= pure <= 123


@needs_compiled
def test_compiled_handles_empty_list():
    rng = random.Random(6)
    args = _case(rng, HashSuite(), 1)
    empty = args[:-1] + ([],)
    assert kernels.scan_candidates(*empty, engine="compiled") == -1


def test_dispatcher_rejects_unknown_engine():
    rng = random.Random(7)
    args = _case(rng, HashSuite(), 2)
    with pytest.raises(ValueError):
        kernels.scan_candidates(*args, engine="gpu")


def test_auto_engine_gives_same_answer_as_pure():
    rng = random.Random(8)
    args = _case(rng, HashSuite(), 300, plant_at=250)
    assert kernels.scan_candidates(*args) == kernels.scan_candidates_py(*args)
