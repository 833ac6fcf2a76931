"""Band-grid classifier: single-pass training over per-variable value bands."""

from bandgrid._core import (
    Classifier,
    ConfigError,
    DataError,
    UsageError,
    descriptor_hash,
    load_dataset,
    sweep,
    __version__,
)

__all__ = [
    "Classifier",
    "ConfigError",
    "DataError",
    "UsageError",
    "descriptor_hash",
    "load_dataset",
    "sweep",
    "__version__",
]
