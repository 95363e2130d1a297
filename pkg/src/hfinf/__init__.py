"""Exact computations around HF^∞ of closed 3-manifolds: the d3 complex of a
triple cup product form, mapping-cone ranks for the model manifolds M_n, and
stable diagonalization of linking matrices."""

from .classify import CrossCheckError, SurgeryClass, classify, pipeline, predicted_rank
from .cup_complex import (
    HomologyReport,
    TripleCupForm,
    change_basis,
    d3,
    d3_matrix,
    direct_sum,
    homology,
)
from .exact_linalg import (
    IntMatrix,
    LaurentMatrixF2,
    SnfResult,
    congruence_transform,
    rank_f2,
    rank_laurent,
    smith_normal_form,
)
from .exterior import ExteriorElement, basis, monomial_shuffle_sign, wedge
from .lattice import (
    DiscriminantForm,
    Lattice,
    SearchBudgetExhausted,
    SplitPresentation,
    Verdict,
    could_be_diagonal,
    diagonalize_stably,
    disc_isomorphic,
    discriminant,
    reduce_torsion,
    split_presentation,
    stably_equivalent,
)
from .surgery_cone import (
    ConeModel,
    XMatrix,
    compose_d,
    cone_rank,
    enumerate_consistent_d,
    mn_rank,
    x_set,
)

__version__ = "0.1.0"

__all__ = [
    "ExteriorElement",
    "basis",
    "monomial_shuffle_sign",
    "wedge",
    "change_basis",
    "classify",
    "compose_d",
    "cone_rank",
    "ConeModel",
    "congruence_transform",
    "could_be_diagonal",
    "CrossCheckError",
    "d3",
    "d3_matrix",
    "diagonalize_stably",
    "direct_sum",
    "disc_isomorphic",
    "discriminant",
    "DiscriminantForm",
    "enumerate_consistent_d",
    "homology",
    "HomologyReport",
    "IntMatrix",
    "Lattice",
    "LaurentMatrixF2",
    "mn_rank",
    "pipeline",
    "predicted_rank",
    "rank_f2",
    "rank_laurent",
    "reduce_torsion",
    "SearchBudgetExhausted",
    "smith_normal_form",
    "SnfResult",
    "split_presentation",
    "SplitPresentation",
    "stably_equivalent",
    "SurgeryClass",
    "TripleCupForm",
    "Verdict",
    "x_set",
    "XMatrix",
]
