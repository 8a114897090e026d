"""Generalized Schmidt decomposition built from the dominant stationary product state.

Given the dominant product state ``q_0 ... q_{n-1}`` and the orthogonal
complements ``p_k``, the state is expanded in the ``2**n`` product basis
states. Basis bitstrings use ``0`` for ``q_k`` and ``1`` for ``p_k`` with qubit
0 first. Coefficients with a single ``p`` vanish at a stationary point. The
remaining freedom in the phases of the ``p_k`` makes every ``t_k`` (pattern
with ``q`` only at position ``k``) real non-negative and puts the phase ``phi``
of the all-``p`` coefficient into ``(-pi/(n-1), pi/(n-1)]``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .exceptions import DimensionError, FormulaSupportWarning, NotApplicable, UnsupportedArity
from .solver import SolverConfig, find_dominant
from .states import QubitState, _check_index, basis_label, bloch_vector, phase_normalize


def orthogonal_complement(x):
    """The unit vector orthogonal to ``x``, in the first-component-real-positive phase convention."""
    x = np.asarray(x, dtype=complex)
    return phase_normalize(np.array([-np.conj(x[1]), np.conj(x[0])]))


@dataclass(frozen=True)
class GsdBasis:
    """Dominant-eigenvector factors ``q`` (shape (n, 2)) and their complements ``p``."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=complex)
        p = np.array(self.p, dtype=complex)
        if q.shape != p.shape or q.ndim != 2 or q.shape[1] != 2:
            raise DimensionError(f"basis arrays must both have shape (n, 2), got {q.shape} and {p.shape}")
        q.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_product(cls, factors):
        q = np.array(factors, dtype=complex)
        return cls(q, np.array([orthogonal_complement(v) for v in q]))

    @property
    def n(self):
        return self.q.shape[0]

    def max_overlap_error(self):
        """Largest ``|<p_k|q_k>|``."""
        return float(np.max(np.abs(np.sum(np.conj(self.p) * self.q, axis=1))))

    def rotated(self, thetas):
        """Multiply each ``p_k`` by ``exp(i theta_k)``."""
        return GsdBasis(self.q, self.p * np.exp(1j * np.asarray(thetas))[:, None])


def all_q_index(n):
    return 0


def all_p_index(n):
    return (1 << n) - 1


def single_p_index(n, k):
    """Index of the pattern with ``p`` only at qubit ``k``."""
    return 1 << (n - 1 - k)


def t_index(n, k):
    """Index of the pattern with ``q`` only at qubit ``k``."""
    return ((1 << n) - 1) ^ (1 << (n - 1 - k))


def expand(s, basis):
    """Coefficients ``<b|psi>`` of ``s`` in the product basis built from ``basis``."""
    if basis.n != s.n:
        raise DimensionError(f"basis has {basis.n} qubits, state has {s.n}")
    t = s.tensor
    for k in range(s.n):
        # rows of m are <q_k| and <p_k|
        m = np.stack([basis.q[k], basis.p[k]]).conj()
        t = np.moveaxis(np.tensordot(m, t, axes=([1], [k])), 0, k)
    return t.ravel()


def _wrap(angle):
    return float(np.angle(np.exp(1j * angle)))


@dataclass(frozen=True)
class GaugeFix:
    """Result of :func:`gauge_fix`: rotated coefficients plus the phases applied to each ``p_k``."""

    coeffs: np.ndarray
    thetas: np.ndarray
    t: np.ndarray
    h: float
    phi: float
    degenerate: bool
    dropped: tuple


def gauge_fix(raw, n, tol=None):
    """Fix the phases of the ``p_k`` so that every ``t_k >= 0`` and ``phi`` lies in its window.

    ``raw`` must come from :func:`expand` with the all-``q`` coefficient
    already rotated to be real positive. Multiplying ``p_j`` by
    ``exp(i theta_j)`` multiplies the coefficient of a pattern by
    ``exp(-i sum theta_j)`` over its ``p`` positions, so ``t_k`` real needs
    ``sum_{j != k} theta_j = arg t_k``: an ``n x n`` linear system.

    When some ``t_k`` vanish their equations are dropped and, if ``h`` is
    nonzero, replaced by the condition that the all-``p`` coefficient be real
    positive (``phi = 0``); the minimum-norm solution fixes whatever is left.
    """
    tol = DEFAULT_TOLERANCES.zero if tol is None else tol
    raw = np.asarray(raw, dtype=complex)
    if raw.shape != (1 << n,):
        raise DimensionError(f"expected {1 << n} coefficients for n={n}, got {raw.shape}")
    if n == 1:
        return GaugeFix(raw.copy(), np.zeros(1), np.zeros(1), 0.0, 0.0, True, (0,))

    t_idx = [t_index(n, k) for k in range(n)]
    h_raw = raw[all_p_index(n)]
    # with n == 2 the t patterns coincide with the single-p patterns, which vanish
    live = [k for k in range(n) if n > 2 and abs(raw[t_idx[k]]) > tol]
    dropped = tuple(k for k in range(n) if k not in live)

    rows = [np.ones(n) - np.eye(n)[k] for k in live]
    rhs = [np.angle(raw[t_idx[k]]) for k in live]
    degenerate = len(live) < n
    if degenerate and abs(h_raw) > tol:
        rows.append(np.ones(n))
        rhs.append(np.angle(h_raw))
    if rows:
        thetas = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
    else:
        thetas = np.zeros(n)

    half = np.pi / (n - 1)
    if abs(h_raw) > tol and not degenerate:
        width = 2 * half
        phi = _wrap(np.angle(h_raw) - thetas.sum())
        m = np.round(phi / width)
        phi -= m * width
        if phi <= -half + DEFAULT_TOLERANCES.phase_snap:
            m -= 1
        # a common shift by m * width leaves every t_k phase unchanged
        thetas = thetas + m * width

    bits = (np.arange(1 << n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    coeffs = raw * np.exp(-1j * (bits @ thetas))
    t = np.abs(coeffs[t_idx]) if n > 2 else np.zeros(n)
    h = float(abs(coeffs[all_p_index(n)]))
    phi = 0.0
    if abs(h_raw) > tol:
        phi = float(np.angle(coeffs[all_p_index(n)]))
        if degenerate and abs(phi) < DEFAULT_TOLERANCES.phase_snap:
            phi = 0.0
        # snapped boundary values may overshoot by solver noise; report the window edge
        phi = float(np.clip(phi, -half, half))
    return GaugeFix(coeffs, thetas, t, h, phi, degenerate, dropped)


@dataclass(frozen=True)
class GsdDecomposition:
    """Gauge-fixed decomposition ``psi = exp(i global_phase) * sum_b coeffs[b] |b>``.

    ``t[k]`` is the (real, non-negative) coefficient of the pattern with ``q``
    only at qubit ``k``; ``h * exp(i phi)`` is the all-``p`` coefficient.
    """

    basis: GsdBasis
    coeffs: np.ndarray
    g: float
    t: np.ndarray
    h: float
    phi: float
    global_phase: float = 0.0
    info: dict = field(default_factory=dict, compare=False)

    @property
    def n(self):
        return self.basis.n

    def coefficient(self, pattern):
        """Coefficient for a bitstring such as ``"011"`` (``0`` = q, ``1`` = p)."""
        if len(pattern) != self.n:
            raise DimensionError(f"pattern {pattern!r} does not have {self.n} bits")
        return complex(self.coeffs[int(pattern, 2)])

    def single_p(self):
        """Coefficients of the patterns with exactly one ``p`` (zero at a stationary point)."""
        return np.array([self.coeffs[single_p_index(self.n, k)] for k in range(self.n)])

    def intermediates(self):
        """Patterns other than all-q, single-p, t and all-p, keyed by bitstring."""
        n = self.n
        named = {all_q_index(n), all_p_index(n)}
        named.update(single_p_index(n, k) for k in range(n))
        named.update(t_index(n, k) for k in range(n))
        return {basis_label(i, n): complex(c) for i, c in enumerate(self.coeffs) if i not in named}

    def product_vectors(self):
        """Array of shape (2**n, 2**n) whose row ``b`` is the basis state ``|b>``."""
        vecs = np.ones((1, 1), dtype=complex)
        for k in range(self.n):
            local = np.stack([self.basis.q[k], self.basis.p[k]])
            vecs = np.einsum("ai,bj->abij", vecs, local).reshape(vecs.shape[0] * 2, -1)
        return vecs

    def reconstruct(self):
        """Amplitudes ``sum_b coeffs[b] |b>`` times the stored global phase."""
        amps = self.coeffs @ self.product_vectors()
        return QubitState(np.exp(1j * self.global_phase) * amps)


def decompose_in_basis(s, q_factors, tol=None, **info):
    """Expand ``s`` in the basis generated by ``q_factors`` and gauge-fix the result."""
    basis = GsdBasis.from_product(q_factors)
    raw = expand(s, basis)
    lead = raw[0]
    gphase = float(np.angle(lead)) if abs(lead) > 0 else 0.0
    raw = raw * np.exp(-1j * gphase)
    fixed = gauge_fix(raw, s.n, tol=tol)
    info = dict(info, gauge_degenerate=fixed.degenerate, dropped_t=fixed.dropped)
    return GsdDecomposition(
        basis=basis.rotated(fixed.thetas),
        coeffs=fixed.coeffs,
        g=float(fixed.coeffs[0].real),
        t=fixed.t,
        h=fixed.h,
        phi=fixed.phi,
        global_phase=gphase,
        info=info,
    )


def build_gsd(s, cfg=None):
    """Full pipeline: dominant eigenvector, complements, expansion, gauge fixing.

    :raises SolverDiverged: propagated from :func:`gsd.solver.find_dominant`.
    """
    pair = find_dominant(s, cfg or SolverConfig())
    return decompose_in_basis(
        s,
        pair.product.factors,
        source="solver",
        residual=pair.residual,
        iterations=pair.iterations,
        converged=pair.converged,
        restart=pair.info.get("restart"),
    )


def is_qubit_separable(d, k, tol=None):
    """Whether qubit ``k`` is unentangled: every coefficient lacking ``q_k`` vanishes.

    This covers ``h``, every ``t_i`` with ``i != k`` and, for ``n > 3``, the
    intermediate coefficients with ``p`` at position ``k``.
    """
    tol = DEFAULT_TOLERANCES.classify if tol is None else tol
    n = d.n
    k = _check_index(k, n)
    if n == 1:
        return True
    if d.h > tol:
        return False
    if any(d.t[i] > tol for i in range(n) if i != k):
        return False
    mask = 1 << (n - 1 - k)
    lacking = np.abs(d.coeffs[[i for i in range(1 << n) if i & mask]])
    return bool(np.all(lacking <= tol))


def _require_three(d):
    if d.n != 3:
        raise UnsupportedArity(f"defined for three qubits only, got n={d.n}")


def is_reduction_mixed(d, k, tol=None):
    """Three-qubit test for a completely mixed reduction of qubit ``k``: ``t_k = 0`` and ``g^2 = 1/2``."""
    _require_three(d)
    tol = DEFAULT_TOLERANCES.classify if tol is None else tol
    k = _check_index(k, 3)
    return bool(d.t[k] <= tol and abs(d.g**2 - 0.5) <= tol)


def bloch_norm_from_coeffs(d, k=0, tol=None):
    """Bloch-vector length of qubit ``k`` computed from ``g``, ``t`` and ``h`` alone.

    ``r_k^2 = 4 h^2 t_k^2 + (g^2 + t_k^2 - sum_{i != k} t_i^2 - h^2)^2``.
    Valid when the single-``p`` coefficients vanish; otherwise a
    :class:`~gsd.exceptions.FormulaSupportWarning` is emitted and the value is
    still returned.
    """
    _require_three(d)
    tol = DEFAULT_TOLERANCES.support if tol is None else tol
    k = _check_index(k, 3)
    if np.max(np.abs(d.single_p())) > tol:
        warnings.warn("single-p coefficients are nonzero; formula support violated", FormulaSupportWarning, stacklevel=2)
    tk = d.t[k]
    others = sum(d.t[i] ** 2 for i in range(3) if i != k)
    inner = d.g**2 + tk**2 - others - d.h**2
    return float(np.sqrt(4 * d.h**2 * tk**2 + inner**2))


def lower_bound_gap(d):
    """``g^2 - (t_1^2 + t_2^2 + t_3^2 + 2 t_1 t_2 t_3 / g)``; non-negative when the bound holds."""
    _require_three(d)
    t1, t2, t3 = d.t
    return float(d.g**2 - (t1**2 + t2**2 + t3**2 + 2 * t1 * t2 * t3 / d.g))


def check_lower_bound(d, tol=None, slack=1e-10):
    """Lower bound on ``g`` for three-qubit decompositions with ``h = 0``.

    :raises NotApplicable: if ``h`` exceeds ``tol``.
    """
    _require_three(d)
    tol = DEFAULT_TOLERANCES.classify if tol is None else tol
    if d.h > tol:
        raise NotApplicable(f"lower bound needs h = 0, got h = {d.h:.3e}")
    return lower_bound_gap(d) >= -slack


def bloch_norms(s):
    """Density-matrix Bloch lengths of every qubit of ``s``."""
    return np.array([bloch_vector(s, k).norm for k in range(s.n)])
