"""Brute-force estimate of the injective norm by grid search over Bloch angles.

Each factor is parameterized as ``(cos(theta/2), exp(i phi) sin(theta/2))``,
which reaches every single-qubit state up to an irrelevant phase. The search
has two stages:

1. a coarse joint grid over all ``2n`` angles, keeping the best few cells;
2. for each kept cell, coordinate-wise grid search (one factor's
   ``(theta, phi)`` plane at a time, others frozen) inside a window that
   shrinks around the incumbent after every round.

Any stationary product state is a fixed point of the coordinate-wise stage,
so after it stalls a joint stencil ``{-1, 0, 1}**(2n)`` scaled to the current
window is tried as well; it supplies the joint moves needed to leave saddles
such as the computational product states of W-type states.

Nothing here reuses the power-iteration update, so the result is an
independent check of :func:`gsd.solver.find_dominant`.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import CostGuard

MAX_ORACLE_QUBITS = 4


@dataclass(frozen=True)
class GridSpec:
    theta_steps: int = 60
    phi_steps: int = 60
    refine_rounds: int = 3
    shrink: float = 0.25
    coarse_steps: int = 8
    """Points per angle in the joint coarse stage."""
    candidates: int = 6
    """Number of coarse cells carried into refinement."""
    distinct: float = 0.5
    """Coarse cells whose product states have fidelity at least this with a better cell are skipped."""
    max_sweeps: int = 100

    def __post_init__(self):
        if min(self.theta_steps, self.phi_steps, self.coarse_steps) < 8:
            raise ValueError("grid steps must be >= 8")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if self.refine_rounds < 0 or self.candidates < 1:
            raise ValueError("refine_rounds must be >= 0 and candidates >= 1")
        if not 0 < self.distinct <= 1:
            raise ValueError("distinct must lie in (0, 1]")


@dataclass
class OracleResult:
    g: float
    angles: np.ndarray
    """Best ``(theta_k, phi_k)`` per factor, shape (n, 2)."""
    history: list = field(default_factory=list)
    """Best overlap after the coarse stage and after each refinement round."""


def _factor(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack([np.cos(theta / 2) + 0j, np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def _abs_overlap(tensor, angles):
    t = tensor
    for th, ph in angles[::-1]:
        t = t @ np.conj(_factor(th, ph))
    return float(abs(t))


def _coarse(tensor, steps, keep, distinct):
    """Best ``keep`` joint grid points whose product states pairwise overlap below ``distinct``."""
    n = tensor.ndim
    thetas = np.linspace(0.0, np.pi, steps)
    phis = np.linspace(0.0, 2 * np.pi, steps, endpoint=False)
    TH, PH = np.meshgrid(thetas, phis, indexing="ij")
    grid = np.stack([TH.ravel(), PH.ravel()], axis=1)
    kets = _factor(grid[:, 0], grid[:, 1])
    bras = np.conj(kets)  # (G, 2)
    shape = (len(grid),) * (n - 1)
    pool = 8 * keep
    found = []
    # one slab per grid point of qubit 0 keeps memory at G**(n-1)
    for g0, bra in enumerate(bras):
        vals = np.tensordot(bra, tensor, axes=([0], [0]))
        for _ in range(1, n):
            vals = np.tensordot(vals, bras, axes=([0], [1]))
        mags = np.abs(vals).ravel()
        top = np.argpartition(mags, -pool)[-pool:] if mags.size > pool else np.arange(mags.size)
        found.extend((float(mags[f]), (g0, *np.unravel_index(f, shape)) if shape else (g0,)) for f in top)
    found.sort(key=lambda x: -x[0])
    picked = []
    for _, idx in found:
        # distinct basins: skip points whose product state is close to one already picked
        if all(np.prod(np.abs(np.sum(bras[list(idx)] * kets[list(j)], axis=1)) ** 2) < distinct for j in picked):
            picked.append(idx)
            if len(picked) == keep:
                break
    return [np.array([grid[i] for i in idx]) for idx in picked], found[0][0]


def _abs_overlap_batch(tensor, angles):
    """``|<chi(angles)|psi>|`` for a batch of angle arrays of shape (M, n, 2)."""
    t = np.broadcast_to(tensor, (angles.shape[0],) + tensor.shape)
    for k in range(angles.shape[1] - 1, -1, -1):
        f = np.conj(_factor(angles[:, k, 0], angles[:, k, 1]))
        t = np.einsum("m...j,mj->m...", t, f)
    return np.abs(t)


def _stencil(n):
    grids = np.meshgrid(*([np.array([-1.0, 0.0, 1.0])] * (2 * n)), indexing="ij")
    steps = np.stack([g.ravel() for g in grids], axis=1).reshape(-1, n, 2)
    return steps[np.any(steps != 0, axis=(1, 2))]


def _refine(tensor, start, spec):
    n = tensor.ndim
    angles = start.copy()
    best = _abs_overlap(tensor, angles)
    history = []
    stencil = _stencil(n)
    th_half, ph_half = np.pi / 2, np.pi
    for _ in range(spec.refine_rounds + 1):
        for _sweep in range(spec.max_sweeps):
            improved = False
            for k in range(n):
                th_c, ph_c = angles[k]
                ths = np.clip(th_c + np.linspace(-th_half, th_half, spec.theta_steps), 0.0, np.pi)
                phs = ph_c + np.linspace(-ph_half, ph_half, spec.phi_steps)
                TH, PH = np.meshgrid(ths, phs, indexing="ij")
                # contract every factor but k, then scan the (theta, phi) grid for factor k
                env = np.moveaxis(tensor, k, -1)
                for j in reversed([j for j in range(n) if j != k]):
                    env = np.tensordot(env, np.conj(_factor(*angles[j])), axes=([j if j < k else j - 1], [0]))
                cand = np.abs(np.conj(_factor(TH, PH)) @ env)
                i = np.unravel_index(np.argmax(cand), cand.shape)
                if cand[i] > best:
                    best = float(cand[i])
                    angles[k] = (TH[i], PH[i])
                    improved = True
            if not improved:
                trial = angles[None] + stencil * np.array([th_half, ph_half])
                trial[:, :, 0] = np.clip(trial[:, :, 0], 0.0, np.pi)
                vals = _abs_overlap_batch(tensor, trial)
                i = int(np.argmax(vals))
                if vals[i] <= best:
                    break
                best = float(vals[i])
                angles = trial[i].copy()
        history.append(best)
        th_half *= spec.shrink
        ph_half *= spec.shrink
    return best, angles, history


def brute_force_search(s, spec=None):
    """Grid-search the largest overlap of ``s`` with a product state.

    :raises CostGuard: for more than four qubits.
    """
    spec = spec or GridSpec()
    if s.n > MAX_ORACLE_QUBITS:
        raise CostGuard(f"brute-force oracle supports at most {MAX_ORACLE_QUBITS} qubits, got {s.n}")
    tensor = s.tensor
    starts, coarse_best = _coarse(tensor, spec.coarse_steps, spec.candidates, spec.distinct)
    result = None
    for start in starts:
        g, angles, hist = _refine(tensor, start, spec)
        if result is None or g > result.g:
            result = OracleResult(g, angles, [coarse_best, *hist])
    return result


def brute_force_g(s, spec=None):
    """Lower estimate of the injective norm of ``s`` from :func:`brute_force_search`."""
    return brute_force_search(s, spec).g
