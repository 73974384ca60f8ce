"""Szegedy quantum walks of Markov chains, strong lumping, quantum
aggregation and CMV uniformization."""

from ._szl import *  # noqa: F401,F403
from ._szl import SzlError

SzlError.kind = property(lambda self: self.args[0])
SzlError.__str__ = lambda self: str(self.args[-1])

__version__ = "0.1.0"
