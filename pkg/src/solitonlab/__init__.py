"""Numerical laboratory for a waveguide picture of the electron.

Modules: constants, dispersion, kg_solver, stationary, bohm, nonlinear,
zigzag, ambiguity, bohr; ``solitonlab.cli`` is the command-line runner.
"""

__version__ = "0.1.0"

from .errors import ConfigurationError, DomainError, NumericalAbort  # noqa: E402
from .grid import Grid1D  # noqa: E402
from .potentials import PotentialSpec  # noqa: E402

__all__ = ["ConfigurationError", "DomainError", "Grid1D", "NumericalAbort", "PotentialSpec",
           "__version__"]
