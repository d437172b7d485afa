from __future__ import annotations

from collections.abc import Iterable
from hashlib import sha256


def sha256_lines(lines: Iterable[str]) -> str:
    """Digest of newline-terminated UTF-8 lines, fed incrementally."""
    digest = sha256()
    for line in lines:
        digest.update(line.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()
