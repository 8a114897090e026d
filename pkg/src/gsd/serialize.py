"""JSON encodings for states and decompositions.

State schema::

    {"n": 3, "amps": [[re, im], ...]}

Decomposition schema::

    {"n": 3,
     "basis": {"q": [[[re, im], [re, im]], ...], "p": [...]},
     "coefficients": {"000": [re, im], ...},
     "g": ..., "t": [...], "h": ..., "phi": ..., "global_phase": ...}

Floats are rounded to 12 significant digits.
"""

import logging

import numpy as np

from .decomposition import GsdBasis, GsdDecomposition
from .exceptions import DimensionError
from .states import QubitState, basis_label

log = logging.getLogger(__name__)

DIGITS = 12
NORM_WARN = 1e-6


def fmt(x):
    """Round to 12 significant digits (``None`` and non-finite values pass through)."""
    if x is None:
        return None
    x = float(x)
    if not np.isfinite(x):
        return x
    return float(f"{x:.{DIGITS}g}")


def _pair(z):
    z = complex(z)
    return [fmt(z.real), fmt(z.imag)]


def _unpair(p):
    if isinstance(p, (int, float)):
        return complex(p)
    if len(p) != 2:
        raise ValueError(f"complex number must be [re, im], got {p!r}")
    return complex(float(p[0]), float(p[1]))


def state_to_dict(s):
    return {"n": s.n, "amps": [_pair(a) for a in s.amps]}


def state_from_dict(data):
    """Parse the state schema; amplitudes are normalized with a warning if off by more than 1e-6."""
    try:
        n = int(data["n"])
        amps = np.array([_unpair(a) for a in data["amps"]], dtype=complex)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    if amps.size != 1 << n:
        raise DimensionError(f"state declares n={n} but has {amps.size} amplitudes")
    nrm = float(np.linalg.norm(amps))
    if nrm > 0 and abs(nrm**2 - 1) > NORM_WARN:
        log.warning("amplitudes have squared norm %.12g; normalizing", nrm**2)
    return QubitState(amps)


def decomposition_to_dict(d):
    return {
        "n": d.n,
        "basis": {
            "q": [[_pair(z) for z in v] for v in d.basis.q],
            "p": [[_pair(z) for z in v] for v in d.basis.p],
        },
        "coefficients": {basis_label(i, d.n): _pair(c) for i, c in enumerate(d.coeffs)},
        "g": fmt(d.g),
        "t": [fmt(x) for x in d.t],
        "h": fmt(d.h),
        "phi": fmt(d.phi),
        "global_phase": fmt(d.global_phase),
    }


def decomposition_from_dict(data):
    n = int(data["n"])
    q = np.array([[_unpair(z) for z in v] for v in data["basis"]["q"]])
    p = np.array([[_unpair(z) for z in v] for v in data["basis"]["p"]])
    coeffs = np.zeros(1 << n, dtype=complex)
    for label, z in data["coefficients"].items():
        if len(label) != n:
            raise DimensionError(f"coefficient label {label!r} does not have {n} bits")
        coeffs[int(label, 2)] = _unpair(z)
    return GsdDecomposition(
        basis=GsdBasis(q, p),
        coeffs=coeffs,
        g=float(data["g"]),
        t=np.array(data["t"], dtype=float),
        h=float(data["h"]),
        phi=float(data["phi"]),
        global_phase=float(data.get("global_phase", 0.0)),
    )
