"""Additive Grothendieck topologies on finite linear categories, computed exactly."""

from .exactla import BACKEND, GF2, QQ, Matrix, PrimeField

__all__ = ["BACKEND", "GF2", "QQ", "Matrix", "PrimeField"]
__version__ = "0.1.0"
