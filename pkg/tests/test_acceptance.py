"""Acceptance criteria, one test (or small group) per criterion.

Each test carries ``@pytest.mark.criterion(number, title)``; the conftest
summary prints one PASS/FAIL line per criterion at the end of the run.
"""

import math
import time
import warnings

import numpy as np
import pytest
from scipy.optimize import brentq

from gsd import (
    GhzExtParams,
    QubitState,
    W3Params,
    WnParams,
    bloch_norm_from_coeffs,
    bloch_vector,
    brute_force_g,
    build_gsd,
    check_lower_bound,
    find_dominant,
    ghz_gsd,
    is_qubit_separable,
    is_reduction_mixed,
    w3_classify,
    w3_gsd,
    w3_invariants,
    wn_gsd,
)
from gsd.cli import sweep_points
from gsd.decomposition import lower_bound_gap
from gsd.families import w3_coefficients, w3_highly_coefficients, w3_slight_coefficients
from gsd.solver import stationarity_residual
from gsd.states import ProductState, fidelity, random_state

from conftest import W_SYM, random_ghz, random_w3

SEED = 20240607


def _rng(offset=0):
    return np.random.default_rng(SEED + offset)


def _states_of_w3_boundary(count, rng):
    """Points with ``r_a = 0`` between the highly entangled region and the ``a``-dominant slight region."""
    out = []
    while len(out) < count:
        b, c, d = rng.uniform(0.2, 1.0, size=3)
        r_a = lambda a: a * (b * b + c * c + d * d - a * a) + 2 * b * c * d  # noqa: E731
        a = brentq(r_a, max(b, c, d), 10.0, xtol=1e-15)
        p = W3Params.normalized(a, b, c, d)
        if min(w3_invariants(p).r[1:]) > 1e-3:
            out.append(p)
    return out


@pytest.fixture(scope="module")
def w3_sweep():
    pts = np.unique(np.round(sweep_points(15), 15), axis=0)
    return [W3Params(*(float(x) for x in pt)) for pt in pts]


@pytest.fixture(scope="module")
def random_decompositions():
    rng = _rng(11)
    out = []
    for n in (3, 4):
        for _ in range(500):
            s = random_state(n, rng)
            out.append((s, build_gsd(s)))
    return out


@pytest.mark.criterion(1, "symmetric W value g = 2/3")
def test_symmetric_w_value():
    start = time.perf_counter()
    s = W_SYM.state()
    numeric = find_dominant(s)
    closed = w3_gsd(W_SYM)
    assert numeric.g == pytest.approx(2 / 3, abs=1e-7)
    assert closed.g == pytest.approx(2 / 3, abs=1e-7)
    assert closed.g**2 == pytest.approx(4 / 9, abs=1e-7)
    assert brute_force_g(s) == pytest.approx(2 / 3, abs=1e-6)
    assert time.perf_counter() - start < 5


@pytest.mark.criterion(2, "closed-form g = L/(2S), not L/S")
def test_injective_norm_prefactor():
    start = time.perf_counter()
    rng = _rng(2)
    for _ in range(50):
        p = random_w3(rng, region="highly")
        inv = w3_invariants(p)
        numeric = find_dominant(p.state()).g
        assert w3_gsd(p).g == pytest.approx(inv.L / (2 * inv.S), abs=1e-12)
        assert w3_gsd(p).g == pytest.approx(numeric, abs=1e-7)
        assert inv.L / inv.S == pytest.approx(2 * numeric, abs=1e-7)
        assert abs(inv.L / inv.S - numeric) > 0.3
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(3, "qubit separable iff its Bloch vector has unit length")
def test_separability_biconditional():
    rng = _rng(3)
    states = [QubitState(np.kron(rng.normal(size=2) + 1j * rng.normal(size=2), random_state(2, rng).amps)) for _ in range(200)]
    states += [random_state(3, rng) for _ in range(200)]
    mismatches = 0
    separable_seen = 0
    for s in states:
        d = build_gsd(s)
        for k in range(3):
            sep = is_qubit_separable(d, k)
            pure = abs(bloch_vector(s, k).norm - 1) <= 1e-7
            mismatches += sep != pure
            separable_seen += sep
    assert mismatches == 0
    assert separable_seen >= 200


@pytest.mark.criterion(4, "completely mixed reduction iff t_k = 0 and g^2 = 1/2")
def test_mixed_reduction_biconditional():
    ghz = GhzExtParams(1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2))
    d = build_gsd(ghz.state())
    np.testing.assert_allclose(d.t, 0, atol=1e-9)
    assert d.g**2 == pytest.approx(0.5, abs=1e-9)
    for k in range(3):
        assert bloch_vector(ghz.state(), k).norm <= 1e-7
        assert is_reduction_mixed(d, k)

    rng = _rng(4)
    for _ in range(100):
        s = random_state(3, rng)
        d = build_gsd(s)
        for k in range(3):
            assert is_reduction_mixed(d, k) == (bloch_vector(s, k).norm <= 1e-7)

    # first-type shared W3 states with r_1 = 0: b^2 + c^2 = a^2 + d^2 = 1/2
    for u, v in rng.uniform(0.1, math.pi / 2 - 0.1, size=(20, 2)):
        p = W3Params(math.cos(u) / math.sqrt(2), math.cos(v) / math.sqrt(2), math.sin(v) / math.sqrt(2), math.sin(u) / math.sqrt(2))
        for d in (build_gsd(p.state()), w3_gsd(p)):
            assert [is_reduction_mixed(d, k) for k in range(3)] == [True, False, False]
            assert abs(d.g**2 - 0.5) <= 1e-7


@pytest.mark.criterion(5, "Bloch length from (g, t, h) matches the density matrix")
def test_bloch_length_from_coefficients():
    rng = _rng(5)
    decs = []
    for _ in range(60):
        p = random_w3(rng)
        decs += [(p.state(), w3_gsd(p)), (p.state(), build_gsd(p.state()))]
    for _ in range(60):
        p = random_ghz(rng)
        decs += [(p.state(), ghz_gsd(p)), (p.state(), build_gsd(p.state()))]
    decs.append((W_SYM.state(), w3_gsd(W_SYM)))
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for s, d in decs:
            for k in range(3):
                worst = max(worst, abs(bloch_norm_from_coeffs(d, k) - bloch_vector(s, k).norm))
    assert worst <= 1e-8


@pytest.mark.criterion(6, "h vanishes exactly outside the highly entangled region")
def test_h_dichotomy(w3_sweep):
    checked_zero = checked_positive = 0
    for p in w3_sweep:
        r_min = min(w3_invariants(p).r)
        h = w3_coefficients(p).h
        if r_min < -1e-6:
            assert h <= 1e-9
            checked_zero += 1
        elif r_min > 1e-6:
            assert h > 0
            checked_positive += 1
    assert checked_zero > 1000 and checked_positive > 1000

    for p in _states_of_w3_boundary(20, _rng(6)):
        assert w3_classify(p).label.value == "SharedType2"
        hi = w3_highly_coefficients(p)
        lo = w3_slight_coefficients(p, 0)
        np.testing.assert_allclose([hi.g, *hi.t, hi.h], [lo.g, *lo.t, lo.h], atol=1e-7)


@pytest.mark.criterion(7, "lower bound on g holds and saturates on the boundary")
def test_lower_bound(w3_sweep):
    checked = 0
    for p in w3_sweep:
        if min(w3_invariants(p).r) < -1e-6:
            assert check_lower_bound(w3_gsd(p), slack=1e-10)
            checked += 1
    assert checked > 1000
    for p in _states_of_w3_boundary(20, _rng(7)):
        assert lower_bound_gap(w3_gsd(p)) == pytest.approx(0, abs=1e-7)


@pytest.mark.criterion(8, "extended GHZ family: g^2 >= 1/2 and closed form matches")
def test_ghz_family():
    rng = _rng(8)
    for _ in range(500):
        p = random_ghz(rng)
        closed = ghz_gsd(p)
        numeric = build_gsd(p.state())
        assert closed.g**2 >= 0.5 - 1e-10
        assert closed.g == pytest.approx(numeric.g, abs=1e-7)
        np.testing.assert_allclose(closed.t, numeric.t, atol=1e-7)
        assert closed.h == pytest.approx(numeric.h, abs=1e-7)


@pytest.mark.criterion(9, "n-qubit W family closed form")
def test_wn_family():
    start = time.perf_counter()
    rng = _rng(9)
    for n in (3, 4, 5, 6):
        for a in rng.uniform(0, 1 / math.sqrt(n - 1), size=20):
            p = WnParams(n, a)
            assert wn_gsd(p).g == pytest.approx(find_dominant(p.state()).g, abs=1e-6)
        shared = WnParams(n, math.sqrt(1 / (2 * (n - 1))))
        assert abs(shared.r_n) <= 1e-12
        assert wn_gsd(shared).g ** 2 == pytest.approx(0.5, abs=1e-8)
        assert find_dominant(shared.state()).g ** 2 == pytest.approx(0.5, abs=1e-8)
        no_b = WnParams(n, 1 / math.sqrt(n - 1))
        assert is_qubit_separable(wn_gsd(no_b), n - 1)
        assert is_qubit_separable(build_gsd(no_b.state()), n - 1)
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(10, "dominant product satisfies the stationarity equations")
def test_stationarity_of_decompositions(random_decompositions):
    rng = _rng(10)
    cases = list(random_decompositions)
    for _ in range(50):
        p = random_w3(rng)
        cases += [(p.state(), w3_gsd(p)), (p.state(), build_gsd(p.state()))]
        g = random_ghz(rng)
        cases += [(g.state(), ghz_gsd(g))]
    for n in (3, 4, 5, 6):
        p = WnParams(n, rng.uniform(0, 1 / math.sqrt(n - 1)))
        cases += [(p.state(), wn_gsd(p)), (p.state(), build_gsd(p.state()))]
    worst_res = worst_p = 0.0
    for s, d in cases:
        worst_res = max(worst_res, stationarity_residual(s, ProductState(list(d.basis.q)))[1])
        worst_p = max(worst_p, float(np.max(np.abs(d.single_p()))))
    assert worst_res <= 1e-9
    assert worst_p <= 1e-9


@pytest.mark.criterion(11, "decomposition reconstructs the state")
def test_reconstruction(random_decompositions):
    worst = min(fidelity(d.reconstruct(), s) for s, d in random_decompositions)
    assert worst >= 1 - 1e-9
