"""Numerical tolerances shared across the package.

Every operation takes its defaults from :data:`DEFAULT_TOLERANCES`; pass a
modified copy (``dataclasses.replace``) to tighten or loosen a single check.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    normalization: float = 1e-12
    """Allowed deviation of a squared norm from one."""
    orthogonality: float = 1e-12
    """Bound on |<p_k|q_k>| for a GSD basis."""
    residual: float = 1e-10
    """Stationarity residual required to call an eigenpair converged."""
    dedup: float = 1e-6
    """Factor-wise infidelity below which two stationary points merge."""
    classify: float = 1e-7
    """Threshold for t_k, h and |g^2 - 1/2| in the separability/mixedness predicates."""
    region: float = 1e-9
    """Band around zero of r_a..r_d counted as a region boundary."""
    support: float = 1e-9
    """Largest coefficient allowed on patterns the three-qubit formulas assume vanish."""
    zero: float = 1e-9
    """Below this a t_k or h coefficient is treated as exactly zero when fixing phases.

    Sits above the coefficient noise left by a solver converged to ``residual``.
    """
    phase_snap: float = 1e-7
    """A phase this close to the lower edge of its window is moved to the upper edge."""


DEFAULT_TOLERANCES = Tolerances()
