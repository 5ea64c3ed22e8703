"""
Artifact digests for run reports.
Two runs with the same seed must produce identical digests.
"""

import hashlib
from pathlib import Path
from typing import Optional


def file_sha256(path: Path) -> str:
    """Hex sha256 of a file's bytes."""
    with open(path, "rb") as f:
        if hasattr(hashlib, "file_digest"):
            return hashlib.file_digest(f, "sha256").hexdigest()
        # Python < 3.11 fallback: same digest over the file's bytes
        h = hashlib.sha256()
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
        return h.hexdigest()


def digest_artifacts(paths: list[Path], root: Optional[Path] = None) -> dict[str, str]:
    """
    Digest a set of output files.

    Args:
        paths: Files written by a stage
        root: Keys are paths relative to this directory; file names when omitted

    Returns:
        Mapping of artifact key to sha256 digest, sorted by key
    """
    keyed = {
        (path.relative_to(root).as_posix() if root is not None else path.name): path
        for path in paths
    }
    return {key: file_sha256(keyed[key]) for key in sorted(keyed)}
