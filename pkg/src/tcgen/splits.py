"""Seeded-hash split assignment shared by evaluation and dataset export, so
train/validation/test can never overlap and membership is stable as the
corpus grows: sha256("<seed>:<block_id>"), first 8 bytes mod 100, with
train < 80 <= validation < 90 <= test."""

from __future__ import annotations

import hashlib

from .errors import ConfigError

SPLITS = ("train", "validation", "test")


def bucket(block_id: str, seed: int) -> int:
    digest = hashlib.sha256(f"{seed}:{block_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % 100


def split_of(block_id: str, seed: int) -> str:
    b = bucket(block_id, seed)
    if b < 80:
        return "train"
    if b < 90:
        return "validation"
    return "test"


def select_blocks(block_ids: list[str], split: str, seed: int) -> list[str]:
    """Sorted ids belonging to the split; "all" selects everything."""
    if split == "all":
        return sorted(block_ids)
    if split not in SPLITS:
        raise ConfigError(f"unknown split {split!r}; expected train/validation/test/all")
    return sorted(b for b in block_ids if split_of(b, seed) == split)
