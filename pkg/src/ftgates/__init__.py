"""Fault-tolerant non-Clifford gate constructions: distillation, concatenation, cup products."""

__version__ = "0.1.0"
