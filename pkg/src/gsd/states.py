"""Pure-state algebra for n-qubit systems.

Amplitudes are indexed by computational-basis bitstrings with qubit 0 as the
most significant bit, so ``amps.reshape((2,) * n)`` puts qubit ``k`` on axis
``k``. Qubit indices are zero-based throughout the Python API.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .config import DEFAULT_TOLERANCES
from .exceptions import DimensionError

MAX_QUBITS = 24


def _frozen(arr):
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


def phase_normalize(vec, eps=1e-15):
    """Rotate ``vec`` so that its first non-negligible component is real positive.

    Works on a single vector of shape ``(2,)`` or a batch ``(B, 2)``.
    """
    vec = np.asarray(vec, dtype=complex)
    single = vec.ndim == 1
    v = np.atleast_2d(vec)
    norms = np.linalg.norm(v, axis=1)
    lead = np.where(np.abs(v[:, 0]) > eps * np.maximum(norms, eps), v[:, 0], v[:, 1])
    mag = np.abs(lead)
    rot = np.where(mag > 0, np.conj(lead) / np.where(mag > 0, mag, 1.0), 1.0)
    out = v * rot[:, None]
    return out[0] if single else out


def qubit(c0, c1=None):
    """Return a unit single-qubit vector ``(c0, c1)``; accepts a pair or two scalars."""
    vec = np.asarray(c0 if c1 is None else (c0, c1), dtype=complex).ravel()
    if vec.shape != (2,):
        raise DimensionError(f"single-qubit vector needs 2 components, got {vec.shape}")
    nrm = np.linalg.norm(vec)
    if nrm == 0:
        raise ValueError("single-qubit vector is zero")
    return vec / nrm


class QubitState:
    """Normalized amplitude vector of an n-qubit pure state.

    The constructor normalizes its input and keeps the norm it was given in
    :attr:`original_norm`. A zero vector or a length that is not a power of
    two is rejected.
    """

    __slots__ = ("amps", "n", "original_norm")

    def __init__(self, amps):
        vec = np.asarray(amps, dtype=complex).ravel()
        size = vec.size
        n = size.bit_length() - 1
        if size < 2 or (1 << n) != size:
            raise DimensionError(f"amplitude vector length {size} is not 2**n with n >= 1")
        if n > MAX_QUBITS:
            raise DimensionError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
        nrm = float(np.linalg.norm(vec))
        if not np.isfinite(nrm) or nrm == 0.0:
            raise ValueError("cannot normalize a zero or non-finite amplitude vector")
        object.__setattr__(self, "amps", _frozen(vec / nrm))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "original_norm", nrm)

    def __setattr__(self, name, value):
        raise AttributeError("QubitState is immutable")

    def __repr__(self):
        return f"QubitState(n={self.n})"

    @property
    def tensor(self):
        """Amplitudes reshaped to ``(2,) * n``."""
        return self.amps.reshape((2,) * self.n)

    def __eq__(self, other):
        if not isinstance(other, QubitState):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.amps, other.amps)

    __hash__ = None


class ProductState:
    """Tensor product of ``n`` unit single-qubit vectors, stored as an ``(n, 2)`` array."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        arr = np.array(factors, dtype=complex)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
            raise DimensionError(f"product factors must have shape (n, 2), got {arr.shape}")
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms == 0):
            raise ValueError("product factor is the zero vector")
        object.__setattr__(self, "factors", _frozen(arr / norms[:, None]))

    def __setattr__(self, name, value):
        raise AttributeError("ProductState is immutable")

    @property
    def n(self):
        return self.factors.shape[0]

    def __len__(self):
        return self.n

    def __getitem__(self, k):
        return self.factors[k]

    def __repr__(self):
        return f"ProductState(n={self.n})"

    def to_state(self):
        """Expand into a full :class:`QubitState`."""
        return QubitState(reduce(np.kron, self.factors))

    @classmethod
    def from_bits(cls, bits):
        """Computational product state, e.g. ``ProductState.from_bits("100")``."""
        eye = np.eye(2)
        return cls([eye[int(b)] for b in bits])


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    @property
    def norm(self):
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))

    def as_array(self):
        return np.array([self.x, self.y, self.z])


def _check_pair(p, s):
    if p.n != s.n:
        raise DimensionError(f"product state has {p.n} qubits, state has {s.n}")


def _check_index(k, n):
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise TypeError(f"qubit index must be an integer, got {type(k).__name__}")
    if not 0 <= k < n:
        raise IndexError(f"qubit index {k} out of range for {n} qubits")
    return int(k)


def overlap(p, s):
    """Return ``<p|s>`` for a product state ``p`` and a state ``s``."""
    _check_pair(p, s)
    bra = reduce(np.kron, np.conj(p.factors))
    return complex(bra @ s.amps)


def partial_contract(p, s, k):
    """Contract ``s`` with every factor of ``p`` except factor ``k``.

    Returns the unnormalized two-component vector
    ``<p_0 ... p_{k-1} p_{k+1} ... p_{n-1}|s>``.
    """
    _check_pair(p, s)
    k = _check_index(k, s.n)
    n = s.n
    conj = np.conj(p.factors)
    left = reduce(np.kron, conj[:k], np.ones(1))
    right = reduce(np.kron, conj[k + 1:], np.ones(1))
    block = s.amps.reshape(1 << k, 2, 1 << (n - k - 1))
    return np.einsum("l,lir,r->i", left, block, right)


def reduced_density(s, k):
    """Single-qubit reduced density matrix of qubit ``k``."""
    k = _check_index(k, s.n)
    t = np.moveaxis(s.tensor, k, 0).reshape(2, -1)
    return t @ t.conj().T


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def bloch_vector(s, k):
    """Bloch vector of qubit ``k``: Pauli expectation values of its reduced state."""
    rho = reduced_density(s, k)
    x, y, z = (float(np.real(np.trace(rho @ sig))) for sig in _PAULI)
    return BlochVector(x, y, z)


def fidelity(a, b):
    """``|<a|b>|^2`` for two states (or raw amplitude arrays) of equal length."""
    va = a.amps if isinstance(a, QubitState) else np.asarray(a, dtype=complex).ravel()
    vb = b.amps if isinstance(b, QubitState) else np.asarray(b, dtype=complex).ravel()
    if va.shape != vb.shape:
        raise DimensionError(f"cannot compare vectors of shape {va.shape} and {vb.shape}")
    return float(abs(np.vdot(va, vb)) ** 2)


def apply_local(s, unitaries):
    """Apply one 2x2 matrix per qubit, returning a new state."""
    if len(unitaries) != s.n:
        raise DimensionError(f"need {s.n} single-qubit operators, got {len(unitaries)}")
    t = s.tensor
    for k, u in enumerate(unitaries):
        t = np.moveaxis(np.tensordot(np.asarray(u, dtype=complex), t, axes=([1], [k])), 0, k)
    return QubitState(t.ravel())


def is_normalized(s, tol=None):
    tol = DEFAULT_TOLERANCES.normalization if tol is None else tol
    return abs(float(np.vdot(s.amps, s.amps).real) - 1.0) <= tol


def random_state(n, rng=None):
    """Haar-random n-qubit state."""
    rng = np.random.default_rng(rng)
    z = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QubitState(z)


def random_product(n, rng=None):
    rng = np.random.default_rng(rng)
    return ProductState(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))


def random_unitary(rng=None):
    """Haar-random 2x2 unitary via QR of a complex Ginibre matrix."""
    rng = np.random.default_rng(rng)
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def basis_label(index, n):
    """Bitstring for a basis index, qubit 0 first."""
    return format(index, f"0{n}b")
