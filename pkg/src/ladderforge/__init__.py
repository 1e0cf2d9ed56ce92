"""ladderforge: multi-level feedback generation and evaluation tooling."""

__version__ = "0.1.0"
