"""Numerical solution of the stationarity equations for the injective norm.

A product state ``q = q_0 ... q_{n-1}`` is stationary for ``psi`` when every
partial contraction ``<q_0 .. ^q_k .. q_{n-1}|psi>`` is parallel to ``q_k``
with one common eigenvalue ``g``. The dominant solution (largest ``g``) gives
the injective tensor norm.

The solver is an alternating higher-order power iteration: each sweep replaces
``q_k`` by its normalized partial contraction for ``k = 0..n-1``. Every single
update can only increase ``|<q|psi>|``, so the overlap is monotone. Restarts
from seeded random product states are advanced together as one batch.

Close to region boundaries the Hessian of the overlap nearly degenerates and
the sweeps converge only linearly with a rate close to one. Every restart still
unconverged after a few dozen sweeps is therefore periodically handed to a
few Newton steps on the local quadratic model of the overlap
(see :func:`_newton_polish`); the result is kept only if it converges without
lowering the overlap.
"""

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, SolverDiverged
from .states import ProductState, QubitState, phase_normalize

log = logging.getLogger(__name__)

MONOTONE_SLACK = 1e-12
POLISH_STEPS = 25
POLISH_AFTER = 20  # sweeps before an unconverged restart is first polished
POLISH_RETRY = 20  # sweeps to wait after the first failed polish; doubles on each failure


@dataclass(frozen=True)
class SolverConfig:
    restarts: int = 64
    max_iterations: int = 10_000
    residual_tol: float = 1e-10
    dedup_tol: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (self.residual_tol > 0 and self.dedup_tol > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class SeqEigenpair:
    """A stationary product state with its eigenvalue and convergence record.

    ``residual`` is ``max_k ||c_k - w q_k||`` where ``c_k`` is the k-th
    partial contraction and ``w = <q|psi>``, i.e. the stationarity defect
    after aligning the global phase.
    """

    product: ProductState
    g: float
    residual: float
    iterations: int = 0
    converged: bool = True
    info: dict = field(default_factory=dict, compare=False)

    @property
    def n(self):
        return self.product.n


def _kron_rows(vectors, batch):
    out = np.ones((batch, 1), dtype=complex)
    for v in vectors:
        out = (out[:, :, None] * v[:, None, :]).reshape(batch, -1)
    return out


def _contract_batch(amps, Q, k):
    """Partial contractions for a batch of product states ``Q`` of shape (B, n, 2)."""
    batch, n, _ = Q.shape
    conj = Q.conj()
    left = _kron_rows([conj[:, j] for j in range(k)], batch)
    right = _kron_rows([conj[:, j] for j in range(k + 1, n)], batch)
    block = amps.reshape(1 << k, 2 << (n - k - 1))
    tmp = (left @ block).reshape(batch, 2, 1 << (n - k - 1))
    return np.einsum("bir,br->bi", tmp, right)


def _overlap_batch(amps, Q):
    batch = Q.shape[0]
    bra = _kron_rows([Q[:, j].conj() for j in range(Q.shape[1])], batch)
    return bra @ amps


def stationarity_residual(s, p):
    """Return ``(g, residual)`` for product state ``p``; see :class:`SeqEigenpair`."""
    if p.n != s.n:
        raise DimensionError(f"product state has {p.n} qubits, state has {s.n}")
    g, res = _residual_batch(s.amps, p.factors[None])
    return float(g[0]), float(res[0])


def _residual_batch(amps, Q):
    w = _overlap_batch(amps, Q)
    res = np.zeros(Q.shape[0])
    for k in range(Q.shape[1]):
        c = _contract_batch(amps, Q, k)
        res = np.maximum(res, np.linalg.norm(c - w[:, None] * Q[:, k], axis=1))
    return np.abs(w), res


def _newton_step(tensor, Q):
    """One Newton step for the stationarity equations around each product in ``Q`` (shape (B, n, 2)).

    Each factor moves as ``q_k + e_k p_k`` with ``p_k`` its complement. The
    overlap is multilinear in ``conj(e)`` with coefficients given by the
    expansion of ``psi`` in the local ``{q_k, p_k}`` basis, so its gradient and
    Hessian at ``e = 0`` come from the single-p and double-p coefficients.
    """
    batch, n, _ = Q.shape
    P = np.stack([-np.conj(Q[:, :, 1]), np.conj(Q[:, :, 0])], axis=2)
    t = np.broadcast_to(tensor, (batch,) + tensor.shape)
    for k in range(n):
        m = np.stack([Q[:, k], P[:, k]], axis=1).conj()  # (B, 2, 2)
        t = np.moveaxis(np.einsum("b...j,bij->b...i", np.moveaxis(t, k + 1, -1), m), -1, k + 1)
    flat = t.reshape(batch, -1)
    c0 = flat[:, 0]
    a0 = np.abs(c0)
    rot = np.where(a0 > 0, np.conj(c0) / np.where(a0 > 0, a0, 1.0), 1.0)
    single = [1 << (n - 1 - k) for k in range(n)]
    b = flat[:, single] * rot[:, None]
    M = np.zeros((batch, n, n), dtype=complex)
    for k in range(n):
        for j in range(k + 1, n):
            M[:, k, j] = M[:, j, k] = flat[:, single[k] | single[j]] * rot
    # |<q(e)|psi>|^2 to second order in x = (Re z, Im z), z = conj(e)
    alpha = np.concatenate([b.real, -b.imag], axis=1)
    beta = np.concatenate([b.imag, b.real], axis=1)
    curv = np.concatenate(
        [np.concatenate([M.real, -M.imag], axis=2), np.concatenate([-M.imag, -M.real], axis=2)], axis=1
    )
    H = (
        2 * (alpha[:, :, None] * alpha[:, None, :] + beta[:, :, None] * beta[:, None, :])
        + 2 * a0[:, None, None] * curv
        - 2 * (a0**2)[:, None, None] * np.eye(2 * n)
    )
    x = -np.einsum("bij,bj->bi", np.linalg.pinv(H), 2 * a0[:, None] * alpha)
    e = np.conj(x[:, :n] + 1j * x[:, n:])
    out = Q + e[:, :, None] * P
    out = out / np.linalg.norm(out, axis=2)[:, :, None]
    return phase_normalize(out.reshape(-1, 2)).reshape(batch, n, 2)


def _newton_polish(amps, tensor, Q, g0, tol):
    """Newton iterations on a batch of stalled products.

    Returns ``(ok, Q, g, residual)``; rows with ``ok`` reached ``tol``
    without lowering the overlap below ``g0``. A row is abandoned as soon as
    its residual stops decreasing.
    """
    batch = Q.shape[0]
    q = Q.copy()
    ok = np.zeros(batch, dtype=bool)
    alive = np.ones(batch, dtype=bool)
    g_out = np.array(g0, dtype=float)
    r_out = np.full(batch, np.inf)
    r_prev = np.full(batch, np.inf)
    for _ in range(POLISH_STEPS):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        q[idx] = _newton_step(tensor, q[idx])
        g, res = _residual_batch(amps, q[idx])
        done = res <= tol
        accept = done & (g >= g_out[idx] - MONOTONE_SLACK)
        ok[idx[accept]] = True
        g_out[idx[accept]] = g[accept]
        r_out[idx[accept]] = res[accept]
        alive[idx[done | ~(res < r_prev[idx])]] = False
        r_prev[idx] = res
    return ok, np.where(ok[:, None, None], q, Q), g_out, r_out


def _random_factors(rng, n):
    z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return phase_normalize(z / np.linalg.norm(z, axis=1)[:, None])


def _iterate(s, Q, rngs, cfg):
    """Run power sweeps on every row of ``Q`` until each row converges or stalls out."""
    amps = s.amps
    batch, n, _ = Q.shape
    Q = Q.copy()
    g_prev = np.abs(_overlap_batch(amps, Q))
    residual = np.full(batch, np.inf)
    iterations = np.zeros(batch, dtype=int)
    converged = np.zeros(batch, dtype=bool)
    monotone = np.ones(batch, dtype=bool)
    reseeds = np.zeros(batch, dtype=int)
    polished = np.zeros(batch, dtype=bool)
    next_polish = np.full(batch, POLISH_AFTER)
    polish_fails = np.zeros(batch, dtype=int)
    tensor = s.tensor
    active = np.arange(batch)

    for _ in range(cfg.max_iterations):
        if active.size == 0:
            break
        Qa = Q[active]
        norms = None
        for k in range(n):
            c = _contract_batch(amps, Qa, k)
            norms = np.linalg.norm(c, axis=1)
            dead = norms == 0.0
            for row in np.flatnonzero(dead):
                idx = active[row]
                reseeds[idx] += 1
                c[row] = _random_factors(rngs[idx], 1)[0]
                norms[row] = 1.0
            Qa[:, k] = phase_normalize(c / norms[:, None])
            if dead.any():
                norms[dead] = 0.0
        Q[active] = Qa
        iterations[active] += 1
        # after the last update |<q|psi>| equals the norm of the last contraction
        g_now = norms
        monotone[active] &= g_now >= g_prev[active] - MONOTONE_SLACK
        stalled = np.abs(g_now - g_prev[active]) < cfg.residual_tol
        g_prev[active] = g_now
        if stalled.any():
            rows = active[stalled]
            _, res = _residual_batch(amps, Q[rows])
            residual[rows] = res
            ok = res <= cfg.residual_tol
            converged[rows[ok]] = True
        # slow linear convergence is handed to Newton long before the overlap stalls
        cand = active[(iterations[active] >= next_polish[active]) & ~converged[active]]
        if cand.size:
            good, q_new, g_new, r_new = _newton_polish(amps, tensor, Q[cand], g_prev[cand], cfg.residual_tol)
            Q[cand] = q_new
            hit = cand[good]
            g_prev[hit], residual[hit] = g_new[good], r_new[good]
            converged[hit] = polished[hit] = True
            miss = cand[~good]
            next_polish[miss] = iterations[miss] + POLISH_RETRY * 2 ** polish_fails[miss]
            polish_fails[miss] += 1
        active = active[~converged[active]]

    if active.size:
        _, res = _residual_batch(amps, Q[active])
        residual[active] = res
    g_final = np.abs(_overlap_batch(amps, Q))
    return Q, g_final, residual, iterations, converged, monotone, reseeds, polished


def _pairs_from_run(Q, g, residual, iterations, converged, monotone, reseeds, polished, offset=0):
    return [
        SeqEigenpair(
            product=ProductState(Q[i]),
            g=float(g[i]),
            residual=float(residual[i]),
            iterations=int(iterations[i]),
            converged=bool(converged[i]),
            info={
                "restart": offset + i,
                "monotone": bool(monotone[i]),
                "reseeds": int(reseeds[i]),
                "polished": bool(polished[i]),
            },
        )
        for i in range(Q.shape[0])
    ]


def power_iterate(s, start, cfg=None, rng=None):
    """Alternating power iteration from a single starting product state."""
    cfg = cfg or SolverConfig()
    if start.n != s.n:
        raise DimensionError(f"start has {start.n} qubits, state has {s.n}")
    rng = np.random.default_rng(cfg.rng_seed if rng is None else rng)
    Q0 = phase_normalize(np.array(start.factors))[None]
    return _pairs_from_run(*_iterate(s, Q0, [rng], cfg))[0]


def _seeded_rngs(cfg):
    mask = (1 << 64) - 1
    return [np.random.default_rng((cfg.rng_seed + i) & mask) for i in range(cfg.restarts)]


def run_restarts(s, cfg=None):
    """Run ``cfg.restarts`` seeded power iterations; restart ``i`` uses seed ``rng_seed + i``."""
    cfg = cfg or SolverConfig()
    rngs = _seeded_rngs(cfg)
    Q0 = np.stack([_random_factors(r, s.n) for r in rngs])
    return _pairs_from_run(*_iterate(s, Q0, rngs, cfg))


def find_dominant(s, cfg=None):
    """Return the converged stationary pair of largest eigenvalue.

    If an unconverged restart beats every converged one by more than 1e-9,
    that restart is returned with ``converged=False`` and a warning: the
    dominant basin then converges too slowly to certify, which happens on
    degenerate region boundaries.

    :raises SolverDiverged: if no restart converges.
    """
    cfg = cfg or SolverConfig()
    pairs = run_restarts(s, cfg)
    return _select_dominant(pairs)


def _select_dominant(pairs):
    done = [p for p in pairs if p.converged]
    best_any = max(pairs, key=lambda p: p.g)
    if not done:
        best_res = min(p.residual for p in pairs)
        raise SolverDiverged(
            f"no restart reached the residual tolerance (best residual {best_res:.3e})",
            best_residual=best_res,
        )
    best = max(done, key=lambda p: p.g)
    if best_any.g > best.g + 1e-9:
        warnings.warn(
            f"dominant basin did not converge (residual {best_any.residual:.3e}); "
            "returning the unconverged maximizer",
            RuntimeWarning,
            stacklevel=3,
        )
        return best_any
    return best


def _same_point(p, q, tol):
    fid = np.abs(np.sum(np.conj(p.factors) * q.factors, axis=1)) ** 2
    return bool(np.all(fid > 1.0 - tol))


def enumerate_stationary(s, cfg=None):
    """Distinct converged fixed points found across all restarts, largest ``g`` first.

    Two fixed points are merged when every factor pair has fidelity above
    ``1 - dedup_tol``. Only attracting fixed points of the iteration can be
    found; there is no completeness claim.
    """
    cfg = cfg or SolverConfig()
    pairs = run_restarts(s, cfg)
    done = [p for p in pairs if p.converged]
    if not done:
        best_res = min(p.residual for p in pairs)
        raise SolverDiverged(
            f"no restart reached the residual tolerance (best residual {best_res:.3e})",
            best_residual=best_res,
        )
    done.sort(key=lambda p: (-p.g, p.info["restart"]))
    unique = []
    for p in done:
        if not any(_same_point(p.product, u.product, cfg.dedup_tol) for u in unique):
            unique.append(p)
    return unique


def pair_from_product(s, product, tol=1e-9, **info):
    """Wrap a known product state as a :class:`SeqEigenpair`, computing ``g`` and the residual."""
    if not isinstance(s, QubitState):
        raise TypeError("expected a QubitState")
    g, res = stationarity_residual(s, product)
    return SeqEigenpair(product=product, g=g, residual=res, iterations=0, converged=res <= tol, info=dict(info))
