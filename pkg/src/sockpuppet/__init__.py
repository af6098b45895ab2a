"""Detection and characterization of sockpuppet accounts in discussion communities."""

__version__ = "0.1.0"
