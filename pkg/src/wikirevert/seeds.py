"""Deterministic sub-seed derivation so every stochastic stage hangs off one master seed."""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *labels: object) -> int:
    """Derive a stable 63-bit seed from a master seed and a label path.

    Independent stages (synthesis, forest members, subsampling) use distinct
    label paths, so rerunning any single stage reproduces its stream exactly.
    """
    material = "/".join([str(int(master)), *map(str, labels)])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
