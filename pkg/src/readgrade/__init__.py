"""Reading difficulty estimation for second-language readers."""

from importlib import resources as _resources
from pathlib import Path

__version__ = "0.1.0"


def data_path(filename: str) -> Path:
    """Path of a file shipped in the package's data directory."""
    return Path(_resources.files("readgrade") / "data" / filename)
