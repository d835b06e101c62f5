"""Riemannian conjugate gradient methods with scaled vector transport."""

__version__ = "0.1.0"

__all__ = ["__version__"]
