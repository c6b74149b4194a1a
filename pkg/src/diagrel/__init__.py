"""Two-coloured string-diagram calculus with a finite-relation model."""

__version__ = "0.1.0"
