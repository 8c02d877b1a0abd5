"""Three-proper-time world-line models and their numerical checks."""

__version__ = "0.1.0"
