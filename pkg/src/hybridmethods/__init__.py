"""Statistical construction of hybrid development methods from survey data."""

__version__ = "0.1.0"
