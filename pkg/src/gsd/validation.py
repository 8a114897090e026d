"""Input checks for array-valued entry points."""

import numpy as np

from .exceptions import DimensionError
from .states import MAX_QUBITS
from .states import _check_index as check_qubit_index  # noqa: F401  (0-based)


def check_state_array(X, *, allow_1d=False):
    """Coerce ``X`` to a complex ``(n_samples, 2**n)`` array and return ``(X, n)``.

    Complex input is allowed, unlike :func:`sklearn.utils.check_array`.
    Rows need not be normalized; zero rows are rejected.
    """
    X = np.asarray(X)
    if X.dtype == object or not (np.issubdtype(X.dtype, np.number) or X.dtype == bool):
        raise ValueError(f"state amplitudes must be numeric, got dtype {X.dtype}")
    X = X.astype(complex)
    if X.ndim == 1 and allow_1d:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D array of state vectors, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError("found an array with 0 samples")
    dim = X.shape[1]
    n = dim.bit_length() - 1
    if dim < 2 or dim != 1 << n:
        raise DimensionError(f"row length must be a power of two >= 2, got {dim}")
    if n > MAX_QUBITS:
        raise DimensionError(f"at most {MAX_QUBITS} qubits are supported")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains NaN or infinity")
    if np.any(np.linalg.norm(X, axis=1) == 0):
        raise ValueError("input contains a zero state vector")
    return X, n
