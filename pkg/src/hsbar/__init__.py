"""Bar-flavour Pin(2)-monopole Floer homology from the triple cup product and Rokhlin invariants."""

from .corpus import example, example_corpus, example_names
from .errors import (
    BudgetExceeded,
    CubicPartMismatch,
    DimensionTooLarge,
    HSBarError,
    InconsistentPresentation,
    InvariantViolation,
    NoConsistentAnswer,
    NotARefinement,
    NotCubic,
    ParseError,
    SquareNotZero,
    ValidationError,
)
from .forms import (
    CupForm,
    EquivalenceWitness,
    RokhlinMap,
    classify_orbits,
    equivalent,
    family_invariant,
    transport,
    validate_rokhlin,
)
from .hmbar import gysin_quota, hm_ranks
from .ktheory import AbGroupSum, kq1_torus, kq1_torus_recursive, torsion_bit_census
from .pages import ChainPage, build_e1, candidate_differentials, check_invariants, page_homology
from .problem import ProblemFile, ResultDocument, parse_problem
from .rmod import CyclicSummand, GradedModule, decompose, reconstruct, render_grid
from .solver import SolveReport, resolve_extensions, solve, standard_answer

__version__ = "0.1.0"
