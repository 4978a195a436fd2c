import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from symsector.errors import NotInterior, NotMonotone, NotStrictlyMonotone
from symsector.expansion import (
    beta,
    complementary_conjugate,
    image_distance,
    image_distance_direct,
    image_subspaces,
    least_eigenvalue,
    mc_inf_beta,
    sigma,
    sigma_complementary,
    sigma_from_t1,
)
from symsector.generators import assemble, random_invertible, random_symplectic
from symsector.monotone import core_map, q_isometry
from symsector.symplectic import identity, is_symplectic, q_standard, rotation

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=3)
CAT = np.array([[1.0, 1.0], [1.0, 2.0]])
SILVER = 1.0 + math.sqrt(2.0)


def test_beta_examples():
    assert beta([0.3, 2.0], identity(1)) == 1.0
    assert beta([1.0, 1.0], CAT) == pytest.approx(math.sqrt(6.0), abs=1e-15)
    iso = q_isometry(np.diag([2.0, 0.25]))
    assert beta([1.0, 0.5, 2.0, 1.0], iso) == pytest.approx(1.0, abs=1e-15)


def test_beta_errors():
    with pytest.raises(NotInterior):
        beta([1.0, 0.0], CAT)
    with pytest.raises(NotInterior):
        beta([1.0, -1.0], CAT)
    with pytest.raises(NotMonotone):
        beta([1.0, 1.0], rotation(1))


def test_sigma_scalar_example():
    res = sigma(CAT)
    assert res.t1 == pytest.approx(1.0, abs=1e-14)
    assert res.sigma == pytest.approx(SILVER, abs=1e-14)
    assert oracles.brute_inf_beta_1d(CAT) == pytest.approx(res.sigma, abs=1e-6)
    assert beta(res.witness, CAT) == pytest.approx(res.sigma, abs=1e-12)


def test_sigma_non_strict_maps():
    for m in (q_isometry(np.diag([2.0, 0.5])), identity(2), assemble(np.eye(2), np.diag([1.0, 0.0]), np.eye(2))):
        res = sigma(m)
        assert res.sigma == 1.0 and res.t1 == 0.0 and res.witness is None
    with pytest.raises(NotMonotone):
        sigma(rotation(2))


def test_sigma_core_uses_smallest_eigenvalue():
    core = core_map([1.0, 4.0])
    res = sigma(core)
    assert res.sigma == pytest.approx(SILVER, abs=1e-14)
    assert mc_inf_beta(core, samples=20_000, seed=3) == pytest.approx(SILVER, rel=1e-3)
    assert least_eigenvalue(core) == pytest.approx(1.0)


def test_sigma_complementary_examples():
    assert sigma_complementary(identity(2)) == 1.0
    assert sigma_complementary(CAT) == pytest.approx(SILVER, abs=1e-12)
    L = random_symplectic(np.random.default_rng(9), 3, "strict")
    assert sigma_complementary(L) == pytest.approx(sigma(L).sigma, abs=1e-9)
    assert is_symplectic(complementary_conjugate(L))


def test_image_distance_examples():
    assert image_distance(CAT) == pytest.approx(0.5 * math.log(2.0), abs=1e-14)
    assert image_distance_direct(CAT) == pytest.approx(0.5 * math.log(2.0), abs=1e-14)
    core = core_map([1.0, 4.0])
    assert image_distance(core) == pytest.approx(0.5 * math.log(2.0), abs=1e-14)
    e1, e2 = image_subspaces(core)
    np.testing.assert_allclose(e1.graph(), np.diag([1.0, 4.0]))
    np.testing.assert_allclose(e2.graph(), np.diag([2.0, 5.0]))
    with pytest.raises(NotStrictlyMonotone):
        image_distance(identity(2))


def test_image_distance_decreases_with_t1():
    values = [image_distance(core_map([t])) for t in (0.1, 1.0, 10.0, 100.0, 1e4)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-4


def test_mc_examples():
    assert mc_inf_beta(identity(1), samples=1000) == 1.0
    est = mc_inf_beta(CAT, samples=100_000, seed=0)
    assert 2.414 <= est <= 2.439
    iso = q_isometry(random_invertible(np.random.default_rng(2), 2))
    assert mc_inf_beta(iso, samples=5000) == pytest.approx(1.0, abs=1e-12)


def test_mc_is_deterministic_and_validates():
    L = random_symplectic(np.random.default_rng(4), 2, "strict")
    a = mc_inf_beta(L, samples=20_000, seed=11, refine_steps=0)
    b = mc_inf_beta(L, samples=20_000, seed=11, refine_steps=0)
    assert a == b
    assert mc_inf_beta(L, samples=20_000, seed=11) <= a
    with pytest.raises(ValueError):
        mc_inf_beta(L, samples=0)
    with pytest.raises(NotMonotone):
        mc_inf_beta(rotation(2), samples=10)


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_sigma_result_invariants(seed, d):
    L = random_symplectic(np.random.default_rng(seed), d, "strict")
    res = sigma(L)
    assert res.sigma == pytest.approx(sigma_from_t1(res.t1), abs=1e-12)
    assert q_standard(res.witness) > 0.0
    assert abs(beta(res.witness, L) - res.sigma) <= 1e-6
    t_direct = np.min(np.linalg.eigvals(L.c.T @ L.b).real)
    assert res.t1 == pytest.approx(t_direct, rel=1e-8, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(seeds, dims, st.sampled_from(("strict", "monotone", "isometry")))
def test_mc_never_undercuts_sigma(seed, d, kind):
    L = random_symplectic(np.random.default_rng(seed), d, kind)
    assert mc_inf_beta(L, samples=3000, seed=seed % 1000) >= sigma(L).sigma - 1e-9


@settings(max_examples=60, deadline=None)
@given(seeds, dims, st.sampled_from(("strict", "monotone", "isometry")), st.sampled_from(("strict", "monotone")))
def test_supermultiplicative(seed, d, k1, k2):
    rng = np.random.default_rng(seed)
    l1, l2 = random_symplectic(rng, d, k1), random_symplectic(rng, d, k2)
    assert sigma(l2 @ l1).sigma >= sigma(l2).sigma * sigma(l1).sigma - 1e-9


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_duality_and_distance_consistency(seed, d):
    L = random_symplectic(np.random.default_rng(seed), d, "strict")
    res = sigma(L)
    assert sigma_complementary(L) == pytest.approx(res.sigma, abs=1e-9)
    closed = image_distance(L)
    assert closed == pytest.approx(0.5 * math.log1p(1.0 / res.t1), abs=1e-10)
    assert closed == pytest.approx(image_distance_direct(L), abs=1e-8)
