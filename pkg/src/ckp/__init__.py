"""Exact rational toolkit for the complementarity knapsack problem.

Submodules:

* ``model``      — instances, points, inequalities, assumptions
* ``numeric``    — rational parsing/printing, exact linear algebra
* ``fileio``     — the three text formats
* ``oracle``     — candidate vertices, exact optimization, validity, face dims
* ``cuts``       — covers/packs and the five cut families
* ``separation`` — exact and greedy separation, partition reduction
* ``simplex``    — exact rational LP
* ``solver``     — branch-and-cut with SOS1 branching
* ``cli``        — the ``ckp`` command
"""

from .errors import (CkpError, FormatError, PreconditionError,
                     ResourceLimitError, ValidationError)
from .model import (AssumptionReport, Group, Instance, LinearInequality,
                    Point, VarRef, evaluate, knapsack_row, normalize,
                    validate_assumptions)
from .numeric import Rational, format_rational, parse_rational

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport", "CkpError", "FormatError", "Group", "Instance",
    "LinearInequality", "Point", "PreconditionError", "Rational",
    "ResourceLimitError", "ValidationError", "VarRef", "evaluate",
    "format_rational", "knapsack_row", "normalize", "parse_rational",
    "validate_assumptions", "__version__",
]
