"""Numerical verification lab for Y -> Tr exp(H + log Y) and its monotonicity under positive maps."""

__version__ = "0.1.0"
