"""Extractor configuration: thresholds, lexicon paths, spell-check mode."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..datafiles import packaged_path

FAMILIES = ("content", "embedding", "style", "structure", "length",
            "textquality", "evidence", "subjectivity")

READABILITY_SCORE_IDS = (
    "flesch_reading_ease",
    "flesch_kincaid_grade",
    "gunning_fog",
    "lix",
    "rix",
    "smog",
    "coleman_liau",
    "automated_readability",
    "forcast",
    "linsear_write",
)

SPELLCHECK_MODES = ("offline", "service")

#: Spell-service rule categories mapped to the three error buckets.
DEFAULT_SPELL_CATEGORY_MAP = {
    "TYPOS": "unknown_words",
    "MISSPELLING": "unknown_words",
    "HINTS": "hints",
    "STYLE": "hints",
    "REDUNDANCY": "hints",
    "CASING": "hints",
    "TYPOGRAPHY": "hints",
}


class ConfigurationError(Exception):
    """Raised for invalid extractor settings or unreadable data files."""


def _packaged(name: str) -> str:
    return str(packaged_path(name))


@dataclass(frozen=True)
class ExtractorConfig:
    """Feature extraction settings.

    Document-frequency thresholds are inclusive fractions of the training
    set. All lexicon paths default to the packaged data files; an empty
    embedding_path disables the embedding family.
    """

    content_min_df: float = 0.03
    style_pos_min_df: float = 0.10
    style_char_min_df: float = 0.03
    structure_first_min_count: int = 2
    embedding_dim: int = 300
    embedding_path: str = ""
    positivity_path: str = field(default_factory=lambda: _packaged("positivity.txt"))
    negativity_path: str = field(default_factory=lambda: _packaged("negativity.txt"))
    hedging_path: str = field(default_factory=lambda: _packaged("hedging.txt"))
    enumeration_path: str = field(default_factory=lambda: _packaged("enumeration.txt"))
    emoji_path: str = field(default_factory=lambda: _packaged("emojis.txt"))
    pronoun_path: str = field(default_factory=lambda: _packaged("pronouns.txt"))
    premise_markers_path: str = field(
        default_factory=lambda: _packaged("premise_markers.txt"))
    conclusion_markers_path: str = field(
        default_factory=lambda: _packaged("conclusion_markers.txt"))
    wordlist_path: str = field(default_factory=lambda: _packaged("wordlist.txt"))
    spellcheck_mode: str = "offline"
    spellcheck_url: str = ""
    spellcheck_language: str = "en-US"
    spellcheck_category_map: dict = field(
        default_factory=lambda: dict(DEFAULT_SPELL_CATEGORY_MAP))
    readability_ids: tuple[str, ...] = READABILITY_SCORE_IDS

    def __post_init__(self) -> None:
        for name in ("content_min_df", "style_pos_min_df", "style_char_min_df"):
            fraction = getattr(self, name)
            if not 0.0 < fraction <= 1.0:
                raise ConfigurationError(f"{name} must be in (0, 1], got {fraction}")
        if self.structure_first_min_count < 1:
            raise ConfigurationError("structure_first_min_count must be >= 1")
        if self.embedding_dim < 1:
            raise ConfigurationError("embedding_dim must be >= 1")
        if self.spellcheck_mode not in SPELLCHECK_MODES:
            raise ConfigurationError(
                f"spellcheck_mode must be one of {SPELLCHECK_MODES}, "
                f"got {self.spellcheck_mode!r}")
        if self.spellcheck_mode == "service" and not self.spellcheck_url:
            raise ConfigurationError("service spell-check needs spellcheck_url")
        if len(self.readability_ids) != 10:
            raise ConfigurationError("readability_ids must list exactly 10 scores")
        if set(self.readability_ids) != set(READABILITY_SCORE_IDS):
            raise ConfigurationError(
                "readability_ids must be the supported score set")
        buckets = {"hints", "unknown_words", "other"}
        for category, bucket in self.spellcheck_category_map.items():
            if bucket not in buckets:
                raise ConfigurationError(
                    f"spellcheck_category_map[{category!r}] must map to one "
                    f"of {sorted(buckets)}, got {bucket!r}")

    def lexicon_paths(self) -> dict[str, str]:
        """All configured lexicon files by role (embedding excluded)."""
        return {
            "positivity": self.positivity_path,
            "negativity": self.negativity_path,
            "hedging": self.hedging_path,
            "enumeration": self.enumeration_path,
            "emoji": self.emoji_path,
            "pronoun": self.pronoun_path,
            "premise_markers": self.premise_markers_path,
            "conclusion_markers": self.conclusion_markers_path,
            "wordlist": self.wordlist_path,
        }

    def scalar_settings(self) -> dict:
        """The threshold/mode settings that identify a fitted pipeline."""
        return {
            "content_min_df": self.content_min_df,
            "style_pos_min_df": self.style_pos_min_df,
            "style_char_min_df": self.style_char_min_df,
            "structure_first_min_count": self.structure_first_min_count,
            "embedding_dim": self.embedding_dim,
            "spellcheck_mode": self.spellcheck_mode,
            "spellcheck_language": self.spellcheck_language,
            "spellcheck_category_map": sorted(self.spellcheck_category_map.items()),
            "readability_ids": list(self.readability_ids),
        }


def resolve_path(path: str | Path) -> Path:
    resolved = Path(path)
    if not resolved.is_file():
        raise ConfigurationError(f"data file not found: {resolved}")
    return resolved
