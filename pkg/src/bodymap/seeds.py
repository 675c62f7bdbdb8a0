"""Stable seed derivation.

All randomness in the toolkit flows from caller-supplied master seeds.
Sub-seeds are derived by hashing, never by drawing from a shared stream,
so work items can run in any order (or in parallel) without changing
results.  SHA-256 keeps the derivation stable across Python versions and
processes, unlike the builtin ``hash``.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts: object) -> int:
    """Derive a 64-bit seed from an arbitrary tuple of parts."""
    raw = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(raw).digest()[:8], "big")


def derive_rng(*parts: object) -> random.Random:
    """Random source seeded by :func:`derive_seed` over the parts."""
    return random.Random(derive_seed(*parts))
