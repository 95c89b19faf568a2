"""Reversibility and dynamics of linear cellular automata on finite Cayley trees
with periodic boundary condition over Z_m."""

__version__ = "0.1.0"

from .dynamics import OrbitSummary, backward, find_period_witness, global_period, orbit, preimage
from .errors import (
    ArityMismatch,
    CriterionDomain,
    DimensionMismatch,
    Exceeded,
    InvalidWord,
    LeafHasNoChildren,
    NotInvertible,
    NotReversible,
    OracleMismatch,
    PaletteMismatch,
    RootHasNoParent,
    ShapeMismatch,
    TooLarge,
    TreeCAError,
)
from .modmatrix import (
    ModMatrix,
    build_matrix,
    det_exact,
    det_exact_mod,
    invert_mod,
    matrix_order,
    matvec,
    solve_mod,
)
from .render import Geometry, Palette, render_strip, render_svg
from .reversibility import (
    CriterionVerdict,
    ExponentCycle,
    ReversibilityReport,
    alpha_numerator,
    criterion_mod2,
    criterion_mod3,
    criterion_pow2,
    det_formula,
    exponent_cycle,
    g_eval,
    is_reversible,
)
from .rules import Configuration, LinearRule, evolve, is_sibling_symmetric, local_apply
from .tree import TreeShape, children, node_count, node_index, parent
