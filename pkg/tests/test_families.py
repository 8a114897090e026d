import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsd import (
    GhzExtParams,
    SolverConfig,
    UnsupportedArity,
    W3Label,
    W3Params,
    WnParams,
    bloch_vector,
    build_gsd,
    ghz_gsd,
    is_qubit_separable,
    w3_classify,
    w3_gsd,
    w3_invariants,
    w3_stationary_solutions,
    wn_gsd,
)
from gsd.families import w3_coefficients, w3_highly_coefficients
from gsd.solver import find_dominant, stationarity_residual
from gsd.states import fidelity

from conftest import W_SLIGHT_A, W_SYM, random_ghz, random_w3

seeds = st.integers(0, 2**32 - 1)
FAST = SolverConfig(restarts=16)
R3 = math.sqrt(3)


# ---- W3 invariants ----

def test_invariants_symmetric_w():
    inv = w3_invariants(W_SYM)
    np.testing.assert_allclose(inv.r, [1 / (3 * R3)] * 3 + [2 / (3 * R3)], atol=1e-15)
    assert inv.L == pytest.approx(1 / (3 * R3))
    assert inv.S == pytest.approx(1 / (4 * R3))
    assert not inv.degenerate


def test_invariants_product_point_is_degenerate():
    inv = w3_invariants(W3Params(1, 0, 0, 0))
    assert inv.degenerate and inv.S == 0
    np.testing.assert_allclose(inv.r, [-1, 0, 0, 0], atol=1e-15)


def test_invariants_equal_parameters():
    inv = w3_invariants(W3Params(0.5, 0.5, 0.5, 0.5))
    np.testing.assert_allclose(inv.r, [0.5] * 4, atol=1e-15)
    assert inv.S == pytest.approx(0.25)
    assert inv.L == pytest.approx(1 / (2 * math.sqrt(2)))
    assert inv.s == pytest.approx(1)


@given(seeds)
def test_invariant_identities(seed):
    p = random_w3(np.random.default_rng(seed))
    a, b, c, d = p.as_tuple()
    inv = w3_invariants(p)
    assert b * inv.r_a + a * inv.r_b == pytest.approx(2 * (a * c + b * d) * (b * c + a * d), abs=1e-12)
    assert sum(r < 0 for r in inv.r) <= 1
    s = inv.s
    assert inv.S**2 == pytest.approx(max((s - a) * (s - b) * (s - c) * (s - d), 0), abs=1e-12)
    for k in range(3):
        assert inv.bloch[k] == pytest.approx(bloch_vector(p.state(), k).norm, abs=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        W3Params(0.5, 0.5, 0.5, 0.4)
    with pytest.raises(ValueError):
        W3Params(-0.5, 0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        W3Params.normalized(0, 0, 0, 0)
    assert W3Params.normalized(1, 1, 1, 1).a == pytest.approx(0.5)


# ---- classification ----

def test_classify_examples():
    assert w3_classify(W_SYM).label is W3Label.HIGHLY_ENTANGLED
    assert w3_classify(W_SLIGHT_A).label is W3Label.SLIGHT_A
    # b^2 + c^2 = a^2 + d^2 with all r > 0
    p = W3Params.normalized(math.sqrt(0.3**2 + 0.5**2 - 0.2**2), 0.3, 0.5, 0.2)
    region = w3_classify(p)
    assert region.label is W3Label.SHARED_TYPE1 and region.highly_entangled
    assert len(region.boundary_distances) == 5


def test_classify_second_type_shared():
    from scipy.optimize import brentq

    b, c, d = 0.4, 0.3, 0.35
    a = brentq(lambda x: w3_invariants(W3Params.normalized(x, b, c, d)).r_a, 0.4, 3.0, xtol=1e-15)
    assert w3_classify(W3Params.normalized(a, b, c, d)).label is W3Label.SHARED_TYPE2


@given(seeds)
def test_classify_matches_signs(seed):
    p = random_w3(np.random.default_rng(seed))
    r = w3_invariants(p).r
    label = w3_classify(p).label
    if min(r) < -1e-9:
        assert label.value == "Slight" + "ABCD"[int(np.argmin(r))]
    else:
        assert w3_classify(p).highly_entangled


# ---- stationary solutions ----

def test_solutions_symmetric_w():
    sols = w3_stationary_solutions(W_SYM)
    fifth = next(x for x in sols if x.info["solution"] == 5)
    assert fifth.g == pytest.approx(2 / 3, abs=1e-12)
    assert sorted(x.g for x in sols if x.info["solution"] <= 4) == pytest.approx([0, 1 / R3, 1 / R3, 1 / R3])


def test_solutions_slight_region():
    sols, omitted = w3_stationary_solutions(W_SLIGHT_A, return_omitted=True)
    assert 5 in omitted
    best = max(sols, key=lambda x: x.g)
    assert best.info["solution"] == 1 and best.g == pytest.approx(math.sqrt(0.7))


def test_solutions_equal_parameters_balanced():
    fifth = next(x for x in w3_stationary_solutions(W3Params(0.5, 0.5, 0.5, 0.5)) if x.info["solution"] == 5)
    np.testing.assert_allclose(np.abs(fifth.product.factors), 1 / math.sqrt(2), atol=1e-12)


@given(seeds)
def test_every_analytic_solution_is_stationary(seed):
    p = random_w3(np.random.default_rng(seed))
    dominant = w3_gsd(p).g
    for pair in w3_stationary_solutions(p):
        assert stationarity_residual(p.state(), pair.product)[1] <= 1e-9
        assert pair.g <= dominant + 1e-12


def test_sixth_solution_coincides_with_fifth_at_d_zero():
    sols = {x.info["solution"]: x for x in w3_stationary_solutions(W3Params.normalized(0.6, 0.5, 0.4, 0))}
    assert sols[6].g == pytest.approx(sols[5].g, abs=1e-12)


def test_sixth_solution_exists_somewhere_and_never_dominates(rng):
    seen = 0
    for _ in range(500):
        p = random_w3(rng)
        sols = {x.info["solution"]: x for x in w3_stationary_solutions(p)}
        if 6 in sols:
            seen += 1
            assert sols[6].g <= w3_gsd(p).g + 1e-12
    assert seen > 0


# ---- W3 decompositions ----

def test_w3_gsd_symmetric_w():
    d = w3_gsd(W_SYM)
    assert d.g == pytest.approx(2 / 3, abs=1e-12)
    np.testing.assert_allclose(d.t, [1 / 3] * 3, atol=1e-12)
    assert d.h == pytest.approx(math.sqrt(2) / 3, abs=1e-12)
    assert d.phi == pytest.approx(math.pi / 2)
    assert fidelity(d.reconstruct(), W_SYM.state()) == pytest.approx(1, abs=1e-12)


def test_w3_gsd_slight_a():
    d = w3_gsd(W_SLIGHT_A)
    assert d.g == pytest.approx(math.sqrt(0.7))
    assert d.h == 0
    np.testing.assert_allclose(d.t, [math.sqrt(0.1)] * 3, atol=1e-12)


def test_w3_gsd_product_point():
    d = w3_gsd(W3Params(1, 0, 0, 0))
    assert d.g == pytest.approx(1)
    np.testing.assert_allclose([*d.t, d.h], 0, atol=1e-15)


def test_highly_branch_needs_proper_quadrilateral():
    with pytest.raises(ValueError):
        w3_highly_coefficients(W3Params(1, 0, 0, 0))


@given(seeds)
@settings(max_examples=25)
def test_w3_gsd_matches_numeric(seed):
    p = random_w3(np.random.default_rng(seed), margin=1e-3)
    closed = w3_gsd(p)
    numeric = find_dominant(p.state(), FAST)
    assert closed.g == pytest.approx(numeric.g, abs=1e-9)
    assert fidelity(closed.reconstruct(), p.state()) >= 1 - 1e-12


@given(seeds)
@settings(max_examples=25)
def test_w3_phase_matches_gauge_of_numeric_basis(seed):
    # phi is pi/2 or 0 depending on the sign of the product of signed Bloch components
    p = random_w3(np.random.default_rng(seed), region="highly", margin=1e-3)
    closed = w3_gsd(p)
    assert closed.phi == pytest.approx(build_gsd(p.state(), FAST).phi, abs=1e-7)
    assert closed.phi == pytest.approx(np.angle(closed.coeffs[-1]), abs=1e-7)


def test_w3_phase_examples():
    assert w3_gsd(W3Params.normalized(1, 1, 1, 0.2)).phi == pytest.approx(math.pi / 2)
    assert w3_gsd(W3Params.normalized(0.6, 0.5, 0.4, 0.3)).phi == 0.0


@given(seeds)
@settings(max_examples=25)
def test_w3_pairing_of_t_matches_expansion(seed):
    p = random_w3(np.random.default_rng(seed), "highly", margin=1e-3)
    coeffs = w3_highly_coefficients(p)
    raw = w3_gsd(p)
    from gsd.decomposition import decompose_in_basis
    from gsd.families import w3_dominant_product

    expanded = decompose_in_basis(p.state(), w3_dominant_product(p).factors)
    np.testing.assert_allclose(coeffs.t, expanded.t, atol=1e-10)
    assert coeffs.h == pytest.approx(expanded.h, abs=1e-10)
    assert raw.g == pytest.approx(expanded.g, abs=1e-12)


@given(seeds, st.permutations(range(4)))
def test_w3_g_permutation_invariant(seed, perm):
    p = random_w3(np.random.default_rng(seed))
    q = W3Params(*(p.as_tuple()[i] for i in perm))
    assert w3_gsd(q).g == pytest.approx(w3_gsd(p).g, abs=1e-12)


def test_shared_type1_has_mixed_first_qubit(rng):
    for _ in range(20):
        while True:
            b, c, d = np.abs(rng.normal(size=3))
            if b * b + c * c > d * d:
                break
        p = W3Params.normalized(math.sqrt(b * b + c * c - d * d), b, c, d)
        if w3_classify(p).label is not W3Label.SHARED_TYPE1:
            continue
        coeffs = w3_coefficients(p)
        assert sum(t <= 1e-8 for t in coeffs.t) == 1
        assert coeffs.g**2 == pytest.approx(0.5, abs=1e-8)


@pytest.mark.slow
def test_closed_form_grid_agrees_with_solver():
    n = 20
    ang = (np.arange(n) + 0.5) * (math.pi / 2) / n
    worst = 0.0
    for t1 in ang:
        for t2 in ang:
            for t3 in ang:
                s1, s2 = math.sin(t1), math.sin(t2)
                p = W3Params.normalized(
                    math.cos(t1), s1 * math.cos(t2), s1 * s2 * math.cos(t3), s1 * s2 * math.sin(t3)
                )
                worst = max(worst, abs(w3_gsd(p).g - find_dominant(p.state()).g))
    assert worst <= 1e-7


# ---- n-qubit W ----

def test_wn_arity():
    with pytest.raises(UnsupportedArity):
        WnParams(2, 0.5)
    with pytest.raises(ValueError):
        WnParams(3, 0.9)


def test_wn_matches_w3_at_three_qubits():
    p = WnParams(3, 1 / R3)
    assert p.b == pytest.approx(1 / R3)
    assert p.r_n == pytest.approx(1 / 3)
    assert wn_gsd(p).g == pytest.approx(w3_gsd(W3Params(p.a, p.a, p.b, 0)).g, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_wn_shared_point(n):
    a = math.sqrt(1 / (2 * (n - 1)))
    p = WnParams(n, a)
    assert p.r_n == pytest.approx(0, abs=1e-12)
    assert wn_gsd(p).g ** 2 == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_wn_b_zero_last_qubit_separable(n):
    d = wn_gsd(WnParams(n, 1 / math.sqrt(n - 1)))
    assert d.h == pytest.approx(0, abs=1e-15)
    assert is_qubit_separable(d, n - 1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_wn_reconstructs_and_matches_numeric(n, rng):
    for _ in range(3):
        a = rng.uniform(0.05, 1 / math.sqrt(n - 1) - 0.01)
        p = WnParams(n, a)
        d = wn_gsd(p)
        assert fidelity(d.reconstruct(), p.state()) >= 1 - 1e-12
        assert d.g == pytest.approx(find_dominant(p.state(), FAST).g, abs=1e-8)
        if p.r_n > 1e-6:
            assert d.phi == pytest.approx(math.pi / (n - 1))
        else:
            assert d.h == 0 and d.g == pytest.approx(p.b)


# ---- extended GHZ ----

def test_ghz_examples():
    d = ghz_gsd(GhzExtParams.normalized(1, 0, 0, 1))
    assert d.g == pytest.approx(1 / math.sqrt(2))
    assert d.t[2] == pytest.approx(0) and d.h == pytest.approx(1 / math.sqrt(2))
    assert d.info["tie"]
    d = ghz_gsd(GhzExtParams(1, 0, 0, 0))
    assert d.g == 1 and d.h == 0 and d.t[2] == 0
    p = GhzExtParams.normalized(0.6, 0.6, 0.4, 0.4)
    d = ghz_gsd(p)
    assert d.h == pytest.approx(0, abs=1e-15)
    assert is_qubit_separable(d, 2)


@given(seeds)
def test_ghz_invariants(seed):
    p = random_ghz(np.random.default_rng(seed))
    d = ghz_gsd(p)
    assert d.g**2 >= 0.5 - 1e-10
    assert fidelity(d.reconstruct(), p.state()) >= 1 - 1e-12
    np.testing.assert_allclose(d.t[:2], 0, atol=1e-12)
    a, b, c, e = p.as_tuple()
    assert d.h == pytest.approx(abs(a * e - b * c) / d.g)
    assert d.t[2] == pytest.approx(abs(a * c + b * e) / d.g)
