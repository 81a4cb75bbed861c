"""
Named random sub-streams.
All randomness in a run flows from one top-level seed; each consumer asks for a
stream keyed by a name and optional integers (round, client id, epoch, ...).
"""

import zlib
from typing import Union

import numpy as np

KeyPart = Union[str, int]


def _key_int(part: KeyPart) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode('utf-8'))
    if part < 0:
        raise ValueError(f"Stream key integers must be non-negative, got {part}")
    return int(part)


def stream_seed(seed: int, *key: KeyPart) -> np.random.SeedSequence:
    """SeedSequence for the sub-stream named by ``key`` under ``seed``."""
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_key_int(k) for k in key))


def derive_rng(seed: int, *key: KeyPart) -> np.random.Generator:
    """
    Independent generator for ``(seed, *key)``.

    The same arguments always give the same stream regardless of call order, so
    client updates can run in any schedule and still be reproducible.
    """
    return np.random.default_rng(stream_seed(seed, *key))
