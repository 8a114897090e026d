"""Generalized Schmidt decomposition of multi-qubit pure states.

The dominant stationary product state of the injective-norm problem is found
by alternating power iteration; the state is then expanded in the product
basis it generates and the free phases are gauge-fixed. Closed forms for the
W-type and extended GHZ families and a brute-force grid oracle serve as
independent checks.

Qubit indices in the Python API are 0-based; qubit 0 is the most
significant bit of a basis index.
"""

import types as _types

from .config import DEFAULT_TOLERANCES, Tolerances
from .decomposition import (
    GsdBasis,
    GsdDecomposition,
    bloch_norm_from_coeffs,
    build_gsd,
    check_lower_bound,
    decompose_in_basis,
    expand,
    gauge_fix,
    is_qubit_separable,
    is_reduction_mixed,
    orthogonal_complement,
)
from .estimator import GeneralizedSchmidtDecomposition
from .exceptions import (
    CostGuard,
    DimensionError,
    FormulaSupportWarning,
    GSDError,
    NotApplicable,
    SolverDiverged,
    UnsupportedArity,
)
from .families import (
    GhzExtParams,
    W3Invariants,
    W3Label,
    W3Params,
    W3Region,
    WnParams,
    ghz_gsd,
    w3_classify,
    w3_gsd,
    w3_invariants,
    w3_stationary_solutions,
    wn_gsd,
)
from .oracle import GridSpec, brute_force_g, brute_force_search
from .report import AnalysisReport, analyze
from .solver import SeqEigenpair, SolverConfig, enumerate_stationary, find_dominant, power_iterate
from .states import (
    BlochVector,
    ProductState,
    QubitState,
    bloch_vector,
    overlap,
    partial_contract,
    qubit,
    reduced_density,
)

__version__ = "0.1.0"

__all__ = [k for k, v in dict(globals()).items() if not k.startswith("_") and not isinstance(v, _types.ModuleType)]
