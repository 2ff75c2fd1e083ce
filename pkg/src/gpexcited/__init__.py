"""Excited states of a 2D Gross-Pitaevskii equation with an elliptic ring trap.

Subpackages by task:

fields       grids, quadrature, differential operators, trap potential
soliton      radial shooting for the scalar-field profiles and constants
functionals  energy, constrained gradient, dilation (Pohozaev) functionals
paths        dilation families and the three-segment saddle path
solver       bordered Newton solver for the normalized excited state
asymptotics  blow-up rescaling and the small-exponent convergence tables
cli          command-line front end
"""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
