"""Corpus annotation, masking-strategy, and evaluation toolkit for
cross-modal masked language modeling."""

from .rng import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
