"""flatmix: exact weak-mixing classification for rational billiards and
translation surfaces, with renormalization-based flow diagnostics."""

__version__ = "0.1.0"
