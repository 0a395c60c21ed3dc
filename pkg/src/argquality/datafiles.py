"""Access to the plain-text resources shipped inside the package.

All lexicon-style files are UTF-8, one entry per line, "#" starts a comment.
Every loader records nothing; hashing for provenance happens in the feature
pipeline, which is why raw byte access lives here too.
"""

from __future__ import annotations

import hashlib
from importlib import resources
from pathlib import Path


def packaged_path(name: str) -> Path:
    """Filesystem path of a shipped data file."""
    path = resources.files("argquality").joinpath("data", name)
    return Path(str(path))


def read_lexicon_entries(path: str | Path) -> list[str]:
    """All non-comment, non-blank lines of a lexicon file, in file order."""
    entries = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line)
    return entries


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()
