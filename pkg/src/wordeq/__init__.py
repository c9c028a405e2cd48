"""Word equations with rational constraints over free groups, free monoids with
involution and free products, solved by recompression into EDT0L systems."""

from .errors import WordEqError
from .problem import parse_problem
from .recompression import enumerate_solutions, nfa_of, solve_all

__all__ = ["WordEqError", "enumerate_solutions", "nfa_of", "parse_problem", "solve_all"]
__version__ = "0.1.0"
