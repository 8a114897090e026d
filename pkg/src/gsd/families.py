"""Closed-form decompositions for three analytically solvable families.

* ``W3``: ``a|100> + b|010> + c|001> + d|111>`` with ``a, b, c, d >= 0``.
* ``Wn``: ``a (|10..0> + ... + |0..010>) + b|0..01>`` on ``n >= 3`` qubits.
* extended GHZ: ``a|000> + b|001> + c|110> + d|111>`` with real amplitudes.

For W3 the parameters ``(a, b, c, d)`` are the sides of a cyclic
quadrilateral; ``S`` is its area (Heron) and ``L = sqrt((ab+cd)(ac+bd)(ad+bc))``.
The signs of ``r_a .. r_d`` decide whether the dominant stationary point is
the nontrivial one (all non-negative, "highly entangled") or one of the four
computational product states ("slightly entangled").
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .config import DEFAULT_TOLERANCES
from .decomposition import decompose_in_basis
from .exceptions import UnsupportedArity
from .solver import pair_from_product
from .states import ProductState, QubitState


def _check_normalized(values, tol):
    total = sum(v * v for v in values)
    if abs(total - 1.0) > tol:
        raise ValueError(f"parameters must satisfy sum of squares = 1, got {total!r}")


@dataclass(frozen=True)
class W3Params:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("W3 parameters must be non-negative")
        _check_normalized(self.as_tuple(), DEFAULT_TOLERANCES.normalization)

    @classmethod
    def normalized(cls, a, b, c, d):
        vals = np.array([a, b, c, d], dtype=float)
        nrm = np.linalg.norm(vals)
        if nrm == 0:
            raise ValueError("all W3 parameters are zero")
        return cls(*(float(v) for v in vals / nrm))

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def state(self):
        amps = np.zeros(8)
        amps[0b100], amps[0b010], amps[0b001], amps[0b111] = self.as_tuple()
        return QubitState(amps)


@dataclass(frozen=True)
class W3Invariants:
    r_a: float
    r_b: float
    r_c: float
    r_d: float
    L: float
    S: float
    s: float
    r1: float
    r2: float
    r3: float
    degenerate: bool
    """True when the Heron product is not positive (no proper quadrilateral, ``S = 0``)."""

    @property
    def r(self):
        return (self.r_a, self.r_b, self.r_c, self.r_d)

    @property
    def bloch(self):
        return (self.r1, self.r2, self.r3)


def _r_values(a, b, c, d):
    return (
        a * (b * b + c * c + d * d - a * a) + 2 * b * c * d,
        b * (a * a + c * c + d * d - b * b) + 2 * a * c * d,
        c * (a * a + b * b + d * d - c * c) + 2 * a * b * d,
        d * (a * a + b * b + c * c - d * d) + 2 * a * b * c,
    )


def _heron_squared(a, b, c, d):
    s = (a + b + c + d) / 2
    return s, (s - a) * (s - b) * (s - c) * (s - d)


def w3_invariants(p):
    a, b, c, d = p.as_tuple()
    r_a, r_b, r_c, r_d = _r_values(a, b, c, d)
    L = math.sqrt(max((a * b + c * d) * (a * c + b * d) * (a * d + b * c), 0.0))
    s, s2 = _heron_squared(a, b, c, d)
    degenerate = s2 <= 0.0
    S = math.sqrt(s2) if not degenerate else 0.0
    a2, b2, c2, d2 = a * a, b * b, c * c, d * d
    return W3Invariants(
        r_a=r_a, r_b=r_b, r_c=r_c, r_d=r_d, L=L, S=S, s=s,
        r1=abs(b2 + c2 - a2 - d2),
        r2=abs(a2 + c2 - b2 - d2),
        r3=abs(a2 + b2 - c2 - d2),
        degenerate=degenerate,
    )


class W3Label(str, Enum):
    HIGHLY_ENTANGLED = "HighlyEntangled"
    SLIGHT_A = "SlightA"
    SLIGHT_B = "SlightB"
    SLIGHT_C = "SlightC"
    SLIGHT_D = "SlightD"
    SHARED_TYPE1 = "SharedType1"
    SHARED_TYPE2 = "SharedType2"


_SLIGHT = (W3Label.SLIGHT_A, W3Label.SLIGHT_B, W3Label.SLIGHT_C, W3Label.SLIGHT_D)


@dataclass(frozen=True)
class W3Region:
    label: W3Label
    boundary_distances: tuple
    """``(r_a, r_b, r_c, r_d, r1 * r2 * r3)``."""

    @property
    def highly_entangled(self):
        """All of ``r_a .. r_d`` non-negative within the region band (boundaries included)."""
        return self.label in (W3Label.HIGHLY_ENTANGLED, W3Label.SHARED_TYPE1, W3Label.SHARED_TYPE2)


def w3_classify(p, tol=None):
    """Region of a W3 state.

    A negative ``r_x`` (beyond ``tol``) marks the slightly entangled region of
    parameter ``x``. Otherwise a ``min r`` within ``tol`` of zero is a
    second-type shared state, a vanishing Bloch length ``r1 r2 r3`` is a
    first-type shared state, and anything else is highly entangled.
    """
    tol = DEFAULT_TOLERANCES.region if tol is None else tol
    inv = w3_invariants(p)
    dist = inv.r + (inv.r1 * inv.r2 * inv.r3,)
    i = int(np.argmin(inv.r))
    if inv.r[i] < -tol:
        label = _SLIGHT[i]
    elif inv.r[i] <= tol:
        label = W3Label.SHARED_TYPE2
    elif dist[4] <= tol:
        label = W3Label.SHARED_TYPE1
    else:
        label = W3Label.HIGHLY_ENTANGLED
    return W3Region(label, dist)


@dataclass(frozen=True)
class GsdCoefficients:
    """Scalar GSD invariants ``(g, t, h, phi)`` from a closed form."""

    g: float
    t: tuple
    h: float
    phi: float
    branch: str = ""

    def as_array(self):
        return np.array([self.g, *self.t, self.h, self.phi])


def w3_highly_coefficients(p):
    """Nontrivial-branch coefficients; needs ``S > 0`` and ``L > 0``."""
    a, b, c, d = p.as_tuple()
    inv = w3_invariants(p)
    if inv.degenerate or inv.S == 0.0 or inv.L == 0.0:
        raise ValueError("nontrivial W3 branch needs a proper quadrilateral (S > 0, L > 0)")
    L, S = inv.L, inv.S
    g = L / (2 * S)
    pairs = (a * d + b * c, b * d + a * c, c * d + a * b)
    t = tuple(L * rk / (4 * S * pk) for rk, pk in zip(inv.bloch, pairs))
    prod = inv.r_a * inv.r_b * inv.r_c * inv.r_d
    h = math.sqrt(max(prod, 0.0)) / (4 * L * S)
    # t_k uses |b^2+c^2-a^2-d^2| etc.; with real factors an odd number of
    # negative signed values can only be made positive by p_k -> i p_k, which
    # turns h into i h. A vanishing t_k frees one phase, spent on phi = 0.
    signed = (b * b + c * c - a * a - d * d) * (a * a + c * c - b * b - d * d) * (a * a + b * b - c * c - d * d)
    phi = math.pi / 2 if h > 0 and min(t) > DEFAULT_TOLERANCES.zero and signed > 0 else 0.0
    return GsdCoefficients(g, t, h, phi, branch="highly")


def w3_slight_coefficients(p, which):
    """Trivial-branch coefficients when parameter ``which`` (0..3 for a..d) is dominant."""
    a, b, c, d = p.as_tuple()
    table = {
        0: (a, (d, c, b)),
        1: (b, (c, d, a)),
        2: (c, (b, a, d)),
        3: (d, (a, b, c)),
    }
    g, t = table[which]
    return GsdCoefficients(g, t, 0.0, 0.0, branch="slight-" + "abcd"[which])


def w3_coefficients(p, tol=None):
    """Closed-form coefficients of the branch selected by :func:`w3_classify`."""
    region = w3_classify(p, tol)
    if region.highly_entangled:
        inv = w3_invariants(p)
        if not (inv.degenerate or inv.S == 0.0 or inv.L == 0.0):
            return w3_highly_coefficients(p)
        return w3_slight_coefficients(p, int(np.argmax(p.as_tuple())))
    return w3_slight_coefficients(p, _SLIGHT.index(region.label))


_TRIVIAL_BITS = ("100", "010", "001", "111")
RADICAND_FLOOR = 1e-14


def _fifth_vectors(a, b, c, d):
    r_a, r_b, r_c, r_d = _r_values(a, b, c, d)
    rads = ((r_a * r_d, r_b * r_c), (r_b * r_d, r_a * r_c), (r_c * r_d, r_a * r_b))
    if min(min(x) for x in rads) < -RADICAND_FLOOR:
        return None, "negative radicand"
    # on a region boundary rounding can leave r_k at -1e-17
    vecs = np.array([[math.sqrt(max(x, 0.0)), math.sqrt(max(y, 0.0))] for x, y in rads], dtype=complex)
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(norms == 0):
        return None, "vanishing eigenvector factor"
    return vecs / norms[:, None], ""


def w3_stationary_solutions(p, tol=1e-9, return_omitted=False):
    """Analytic stationary points of a W3 state.

    Four computational solutions always exist. The fifth has factors
    proportional to ``(sqrt(r_a r_d), sqrt(r_b r_c))``,
    ``(sqrt(r_b r_d), sqrt(r_a r_c))`` and ``(sqrt(r_c r_d), sqrt(r_a r_b))``,
    normalized numerically. The sixth is the fifth solution of the state with
    ``d -> -d`` carried back by the local phase ``diag(1, i)`` on each qubit,
    which maps that state onto the original one up to a global phase.

    Solutions whose radicands are negative or whose residual exceeds ``tol``
    are omitted; with ``return_omitted`` the reasons are returned as a dict.
    """
    state = p.state()
    a, b, c, d = p.as_tuple()
    pairs = [
        pair_from_product(state, ProductState.from_bits(bits), tol=tol, solution=i + 1)
        for i, bits in enumerate(_TRIVIAL_BITS)
    ]
    omitted = {}

    vecs, why = _fifth_vectors(a, b, c, d)
    if vecs is None:
        omitted[5] = why
    else:
        pairs.append(pair_from_product(state, ProductState(vecs), tol=tol, solution=5))

    vecs, why = _fifth_vectors(a, b, c, -d)
    if vecs is None:
        omitted[6] = why
    else:
        vecs = vecs * np.array([1.0, -1j])
        pairs.append(pair_from_product(state, ProductState(vecs), tol=tol, solution=6))

    kept = []
    for pair in pairs:
        if pair.residual <= tol:
            kept.append(pair)
        else:
            omitted[pair.info["solution"]] = f"residual {pair.residual:.2e}"
    return (kept, omitted) if return_omitted else kept


def w3_dominant_product(p, tol=None):
    """Dominant stationary product state for the region of ``p``."""
    coeffs = w3_coefficients(p, tol)
    if coeffs.branch == "highly":
        vecs, _ = _fifth_vectors(*p.as_tuple())
        return ProductState(vecs)
    return ProductState.from_bits(_TRIVIAL_BITS["abcd".index(coeffs.branch[-1])])


def w3_gsd(p, tol=None):
    """GSD of a W3 state from the closed forms.

    The scalars ``g, t, h, phi`` come from the closed-form branch; the basis
    and the coefficient array come from expanding the state in the analytic
    dominant eigenvector.
    """
    coeffs = w3_coefficients(p, tol)
    dec = decompose_in_basis(p.state(), w3_dominant_product(p, tol).factors, source="w3", branch=coeffs.branch)
    return _with_scalars(dec, coeffs)


def _with_scalars(dec, coeffs):
    return replace(dec, g=coeffs.g, t=np.array(coeffs.t, dtype=float), h=coeffs.h, phi=coeffs.phi)


@dataclass(frozen=True)
class WnParams:
    n: int
    a: float
    b: float = field(default=None)

    def __post_init__(self):
        if self.n < 3:
            raise UnsupportedArity(f"n-qubit W family needs n >= 3, got {self.n}")
        if self.a < 0:
            raise ValueError("a must be non-negative")
        if self.b is None:
            rest = 1.0 - (self.n - 1) * self.a**2
            if rest < -DEFAULT_TOLERANCES.normalization:
                raise ValueError(f"(n-1) a^2 = {(self.n - 1) * self.a ** 2} exceeds 1")
            # rounding in 1 - (n-1) a^2 would otherwise leave b ~ 1e-8
            if abs(rest) <= DEFAULT_TOLERANCES.normalization:
                rest = 0.0
            object.__setattr__(self, "b", math.sqrt(rest))
        if self.b < 0:
            raise ValueError("b must be non-negative")
        _check_normalized([self.a] * (self.n - 1) + [self.b], DEFAULT_TOLERANCES.normalization)

    @property
    def r_n(self):
        return (self.n - 1) * self.a**2 - self.b**2

    @property
    def S_n(self):
        return (self.n - 1) ** 2 * self.a**2 - self.b**2

    @property
    def gamma(self):
        return (self.n - 2) / 2

    def state(self):
        amps = np.zeros(1 << self.n)
        for k in range(self.n - 1):
            amps[1 << (self.n - 1 - k)] = self.a
        amps[1] = self.b
        return QubitState(amps)


def wn_coefficients(p, tol=None):
    """Closed-form ``g``, ``t_n``, ``h``, ``phi`` of the n-qubit W family.

    Only the last ``t`` is available in closed form; the others are reported
    as ``nan``.
    """
    tol = DEFAULT_TOLERANCES.region if tol is None else tol
    n, a, b = p.n, p.a, p.b
    t = [math.nan] * n
    if p.r_n < -tol:
        t[-1] = math.nan
        return GsdCoefficients(b, tuple(t), 0.0, 0.0, branch="slight")
    rn = max(p.r_n, 0.0)
    Sn = p.S_n
    gam = p.gamma
    g = (1 - b * b) ** (gam + 0.5) * ((n - 2) / Sn) ** gam
    ratio = (rn / Sn) ** gam
    t[-1] = math.sqrt((n - 2) * rn) * ratio
    h = b * math.sqrt(n - 1) * ratio
    phi = math.pi / (n - 1) if h > 0 else 0.0
    return GsdCoefficients(g, tuple(t), h, phi, branch="highly")


def wn_dominant_product(p, tol=None):
    tol = DEFAULT_TOLERANCES.region if tol is None else tol
    n, a, b = p.n, p.a, p.b
    if p.r_n < -tol:
        return ProductState.from_bits("0" * (n - 1) + "1")
    rn = max(p.r_n, 0.0)
    head = [a * math.sqrt((n - 1) * (n - 2)), math.sqrt(rn)]
    tail = [math.sqrt((n - 1) * rn), b * math.sqrt(n - 2)]
    return ProductState([head] * (n - 1) + [tail])


def wn_gsd(p, tol=None):
    """GSD of the n-qubit W family.

    ``g``, ``t_n``, ``h`` and ``phi`` are the closed-form values; the other
    ``t_k`` and any intermediate coefficients come from expanding the state
    in the analytic basis.
    """
    coeffs = wn_coefficients(p, tol)
    dec = decompose_in_basis(p.state(), wn_dominant_product(p, tol).factors, source="wn", branch=coeffs.branch)
    t = np.array(dec.t, dtype=float)
    if not math.isnan(coeffs.t[-1]):
        t[-1] = coeffs.t[-1]
    return _with_scalars(dec, GsdCoefficients(coeffs.g, tuple(t), coeffs.h, coeffs.phi, coeffs.branch))


@dataclass(frozen=True)
class GhzExtParams:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        _check_normalized(self.as_tuple(), DEFAULT_TOLERANCES.normalization)

    @classmethod
    def normalized(cls, a, b, c, d):
        vals = np.array([a, b, c, d], dtype=float)
        nrm = np.linalg.norm(vals)
        if nrm == 0:
            raise ValueError("all GHZ parameters are zero")
        return cls(*(float(v) for v in vals / nrm))

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def state(self):
        amps = np.zeros(8)
        amps[0b000], amps[0b001], amps[0b110], amps[0b111] = self.as_tuple()
        return QubitState(amps)


def ghz_solutions(p):
    """The two stationary points of the extended GHZ family as ``(product, g)`` tuples."""
    a, b, c, d = p.as_tuple()
    out = []
    for head, (x, y) in ((0, (a, b)), (1, (c, d))):
        g = math.hypot(x, y)
        if g == 0:
            continue
        e = np.eye(2)[head]
        out.append((ProductState([e, e, [x / g, y / g]]), g))
    return out


def ghz_coefficients(p):
    a, b, c, d = p.as_tuple()
    g = max(math.hypot(a, b), math.hypot(c, d))
    t3 = abs(a * c + b * d) / g
    h = abs(a * d - b * c) / g
    return GsdCoefficients(g, (0.0, 0.0, t3), h, 0.0, branch="ghz")


def ghz_gsd(p):
    """GSD of the extended GHZ family; an exact tie between the two solutions picks the first."""
    a, b, c, d = p.as_tuple()
    g1, g2 = math.hypot(a, b), math.hypot(c, d)
    tie = g1 == g2
    x, y, head = (a, b, 0) if g1 >= g2 else (c, d, 1)
    e = np.eye(2)[head]
    product = ProductState([e, e, [x, y]])
    dec = decompose_in_basis(p.state(), product.factors, source="ghz", tie=tie)
    return _with_scalars(dec, ghz_coefficients(p))
