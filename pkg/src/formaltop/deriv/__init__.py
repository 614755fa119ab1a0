"""Derivation syntax, rule schemas, checking and translation."""

from importlib.resources import files


def corpus_files(suffix: str = ".drv") -> list:
    """Shipped example files, sorted by name."""
    root = files("formaltop").joinpath("corpus")
    return sorted((p for p in root.iterdir() if p.name.endswith(suffix)), key=lambda p: p.name)
