"""Numerical toolkit for the blow-up machinery of the critical (4+1)
equivariant Yang-Mills wave equation: renormalized profiles, the distorted
Fourier transform of the linearized operator, the transference identity, the
spectral-side linear parametrix, and a nonlinear radial simulator."""

from .profile import BlowupParams

__version__ = "0.1.0"

__all__ = ["BlowupParams", "__version__"]
