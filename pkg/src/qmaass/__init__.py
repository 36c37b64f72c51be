"""Indefinite theta series, q-hypergeometric identities and Maass waveform checks."""
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
