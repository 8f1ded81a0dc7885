"""Exact-arithmetic parametric linear programming toolkit.

Problems are standard-form LPs ``max p.x  s.t.  A x = b, x >= 0`` held as
exact rationals.  The toolkit solves them by basic-solution enumeration,
certifies optima with KKT pairs, ranges right-hand-side and objective
perturbations, classifies problems (regular, strongly regular,
singleton-solvable) and probes continuity along convergent families.
"""

from parlp.errors import ParlpError
from parlp.linalg import Matrix, invert, norm_squared, pseudo_inverse, rank
from parlp.model import LpProblem, PerturbationRay, ProblemFamily, dual_of
from parlp.solver import BasicPoint, SolveOutcome, Status, solve, verify_kkt

__all__ = [
    "BasicPoint",
    "LpProblem",
    "Matrix",
    "ParlpError",
    "PerturbationRay",
    "ProblemFamily",
    "SolveOutcome",
    "Status",
    "dual_of",
    "invert",
    "norm_squared",
    "pseudo_inverse",
    "rank",
    "solve",
    "verify_kkt",
]

__version__ = "0.1.0"
