"""Resonance analysis of seismo-gravitational plate oscillations."""

from ._sgo import *  # noqa: F401,F403
from ._sgo import __doc__  # noqa: F401

__version__ = "0.1.0"
