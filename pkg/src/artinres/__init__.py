"""Exact homological algebra over finite-dimensional commutative local F_p-algebras."""

from .algebra import Algebra, LocalProfile, build_algebra, quotient_from_polynomials
from .decomp import ClassRegistry, Iso, NonIso, Unknown, decompose, is_indecomposable, is_isomorphic
from .errors import (
    AlgebraError,
    AlgebraMismatch,
    ArtinresError,
    BudgetExceeded,
    InvalidAction,
    ModulusError,
    NotGorenstein,
    NotLocal,
    NotSingleClass,
)
from .jmod import JElement, j_apply, j_class, j_equal, orbit, torsion_test
from .laurent import LaurentPoly
from .modules import (
    Module,
    ModuleMap,
    construct_module,
    cosyzygy,
    cyclic_module,
    direct_sum,
    dual,
    free_envelope,
    free_module,
    residue_field,
    strip_free_summands,
    syzygy,
)
from .resolution import Periodic, PeriodicityExceeded, detect_periodicity, minimal_resolution

__version__ = "0.1.0"
