"""PV module thermal modeling: RC calculus, filtered coefficient fits,
exponential-weighted-mean dynamics, and bias-corrected predictions."""

from ._femtherm import *  # noqa: F401,F403

__version__ = "0.1.0"
