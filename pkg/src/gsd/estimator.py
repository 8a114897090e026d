"""scikit-learn style wrapper: one row of amplitudes in, one row of GSD scalars out."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .decomposition import build_gsd
from .solver import SolverConfig
from .states import QubitState
from .validation import check_state_array


class GeneralizedSchmidtDecomposition(TransformerMixin, BaseEstimator):
    """Map state vectors to ``[g, t_1, ..., t_n, h, phi]``.

    ``fit`` only records the qubit count; the decomposition of each row is
    independent of the others. Rows are normalized before solving.

    Parameters
    ----------
    restarts, max_iterations, residual_tol, dedup_tol
        Forwarded to :class:`gsd.solver.SolverConfig`.
    random_state : int
        Base seed; restart ``i`` uses ``random_state + i``.
    """

    def __init__(self, restarts=64, max_iterations=10_000, residual_tol=1e-10, dedup_tol=1e-6, random_state=0):
        self.restarts = restarts
        self.max_iterations = max_iterations
        self.residual_tol = residual_tol
        self.dedup_tol = dedup_tol
        self.random_state = random_state

    def _config(self):
        seed = 0 if self.random_state is None else int(self.random_state)
        return SolverConfig(
            restarts=self.restarts,
            max_iterations=self.max_iterations,
            residual_tol=self.residual_tol,
            dedup_tol=self.dedup_tol,
            rng_seed=seed,
        )

    def fit(self, X, y=None):
        X, n = check_state_array(X)
        self._config()  # surface bad hyperparameters at fit time
        self.n_qubits_ = n
        self.n_features_in_ = X.shape[1]
        return self

    def decompose(self, X):
        """Full :class:`GsdDecomposition` objects, one per row."""
        check_is_fitted(self, "n_qubits_")
        X, n = check_state_array(X)
        if n != self.n_qubits_:
            raise ValueError(f"X has {X.shape[1]} features, but the estimator was fitted with {self.n_features_in_}")
        cfg = self._config()
        return [build_gsd(QubitState(row), cfg) for row in X]

    def transform(self, X):
        rows = [[d.g, *d.t, d.h, d.phi] for d in self.decompose(X)]
        return np.array(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_qubits_")
        names = ["g", *(f"t{k + 1}" for k in range(self.n_qubits_)), "h", "phi"]
        return np.array(names, dtype=object)
