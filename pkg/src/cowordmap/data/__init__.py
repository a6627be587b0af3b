"""Bundled sample data: an eight-document micro corpus and its config."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

__all__ = ["micro_config_path", "micro_corpus_dir"]


def micro_corpus_dir() -> Path:
    """Directory holding the bundled eight-document micro corpus."""
    return Path(resources.files(__package__) / "micro_corpus")


def micro_config_path() -> Path:
    """The example configuration used with the micro corpus."""
    return Path(resources.files(__package__) / "micro.cfg")
