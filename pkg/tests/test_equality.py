import numpy as np
import pytest
from hypothesis import given, strategies as st

from qel import equality as eq, inequalities as ineq, sampling
from qel.channels import append_channel, partial_trace_channel, random_channel, unitary_channel
from qel.errors import NotMarkov, ShapeMismatch
from qel.tensor import MultipartiteState, kron

seeds = st.integers(0, 2**32 - 1)
dims3 = st.sampled_from([(2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 2, 3)])


def _state(seed, dims):
    return MultipartiteState(sampling.random_density(int(np.prod(dims)), seed), dims)


def test_uniform_distribution_is_markov():
    s = eq.make_markov_state(np.full((2, 2, 2), 1 / 8))
    assert eq.ssa_equality_residual(s).residual <= 1e-12
    assert abs(ineq.check_ssa(s).gap) <= 1e-12


def test_non_markov_distribution_rejected():
    p = np.full((2, 2, 2), 0.1)
    p[0, 0, 0] = p[1, 0, 1] = 0.2  # a and c correlated given b = 0
    p /= p.sum()
    assert eq.markov_defect(p) > 1e-3
    with pytest.raises(NotMarkov):
        eq.make_markov_state(p)


def test_markov_state_rejects_bad_shape():
    with pytest.raises(ShapeMismatch):
        eq.make_markov_state(np.full((2, 4), 1 / 8))


@given(seeds, dims3)
def test_markov_states_are_equality_cases(seed, dims):
    s = eq.make_markov_state(eq.random_markov_distribution(dims, seed))
    assert abs(ineq.check_ssa(s).gap) <= 1e-12
    assert eq.ssa_equality_residual(s).residual <= 1e-9
    assert eq.petz_residual(s).residual <= 1e-9


@given(seeds)
def test_product_split_states_are_equality_cases(seed):
    g = sampling.rng(seed)
    s = eq.make_product_split_state(_state(g, (2, 2)), _state(g, (2, 3)))
    assert s.dims == (2, 4, 3)
    assert abs(ineq.check_ssa(s).gap) <= 1e-9
    assert eq.ssa_equality_residual(s).residual <= 1e-9
    assert eq.petz_residual(s).residual <= 1e-9


def test_product_state_is_equality_case():
    s = MultipartiteState(kron(*(sampling.random_density(2, k) for k in range(3))), (2, 2, 2))
    assert eq.ssa_equality_residual(s).satisfied


@given(seeds, dims3)
def test_random_states_are_strict(seed, dims):
    s = _state(seed, dims)
    assert ineq.check_ssa(s).gap > 1e-6
    assert eq.ssa_equality_residual(s).residual > 1e-4
    assert eq.petz_residual(s).residual > 1e-6


@given(seeds, dims3)
def test_small_gap_forces_small_residual(seed, dims):
    """Mixing an exact equality case with a random state: the log defect and
    the gap shrink together as the perturbation vanishes."""
    g = sampling.rng(seed)
    base = eq.make_markov_state(eq.random_markov_distribution(dims, g))
    noise = _state(g, dims).rho
    res = []
    for eps in (1e-3, 1e-5, 1e-7):
        s = MultipartiteState((1 - eps) * base.rho + eps * noise, dims)
        assert ineq.check_ssa(s).gap >= -1e-12
        res.append(eq.ssa_equality_residual(s).residual)
    # first order in eps: each 100x step shrinks the defect about 100x
    assert res[1] <= 0.05 * res[0] and res[2] <= 0.05 * res[1]


@given(seeds, dims3)
def test_petz_derivative_tracks_log_defect(seed, dims):
    s = _state(seed, dims)
    d = eq.petz_derivative(s)
    r = eq.ssa_equality_residual(s).residual
    assert d == pytest.approx(r, rel=1e-5)


def test_residual_components_reported():
    r = eq.ssa_equality_residual(_state(0, (2, 2, 2)))
    assert set(r.components) >= {"log_rho123", "log_rho12", "log_rho2", "log_rho23"}
    p = eq.petz_residual(_state(0, (2, 2, 2)))
    assert len(p.components["per_t"]) == len(eq.DEFAULT_T_GRID)


def test_mpt_equality_examples():
    r1, r2, g2 = sampling.random_density(2, 1), sampling.random_density(3, 2), sampling.random_density(3, 3)
    rho = MultipartiteState(kron(r1, r2), (2, 3))
    gamma = MultipartiteState(kron(r1, g2), (2, 3))
    assert eq.mpt_equality_residual(rho, gamma).satisfied
    strict = eq.mpt_equality_residual(_state(4, (2, 3)), _state(5, (2, 3)))
    assert strict.residual > 1e-3


@given(seeds, dims3)
def test_ssa_as_mpt_equality_matches(seed, dims):
    s = eq.make_markov_state(eq.random_markov_distribution(dims, seed))
    rho, gamma = ineq.ssa_as_mpt(s)
    assert eq.mpt_equality_residual(rho, gamma).residual <= 1e-9


def test_jc_equality_examples():
    rho, gamma = sampling.random_density(3, 0), sampling.random_density(3, 1)
    assert eq.jc_equality_residual([(0.4, rho, gamma), (0.6, rho, gamma)]).satisfied
    # commuting pairs with a common log-ratio
    r1, r2 = np.diag([0.5, 0.3, 0.2]), np.diag([0.2, 0.2, 0.6])
    c = np.diag([1.0, 2.0, 0.5])
    g1, g2 = r1 @ c, r2 @ c
    g1, g2 = g1 / np.trace(g1), g2 / np.trace(g2)
    res = eq.jc_equality_residual([(0.5, r1, g1), (0.5, r2, g2)])
    assert ineq.check_joint_convexity([(0.5, r1, g1), (0.5, r2, g2)]).gap >= -1e-12
    strict = eq.jc_equality_residual([(0.5, sampling.random_density(3, 2), sampling.random_density(3, 3)),
                                      (0.5, sampling.random_density(3, 4), sampling.random_density(3, 5))])
    assert strict.residual > res.residual


def test_mono_and_vv_unitary():
    rho, gamma = sampling.random_density(3, 0), sampling.random_density(3, 1)
    phi = unitary_channel(sampling.random_unitary(3, 2))
    assert eq.mono_equality_residual(phi, rho, gamma).satisfied
    vv = eq.vv_commutation_residual(phi, rho, gamma)
    assert vv.satisfied and vv.components["commutator"] <= 1e-10


@given(seeds)
def test_mono_equality_families(seed):
    g = sampling.rng(seed)
    r1, r2, g2 = sampling.random_density(2, g), sampling.random_density(3, g), sampling.random_density(3, g)
    trace_first = partial_trace_channel((2, 3), 0)
    assert eq.mono_equality_residual(trace_first, kron(r1, r2), kron(r1, g2)).residual <= 1e-9
    sigma = sampling.random_density(2, g)
    app = append_channel(sigma, 3)
    assert eq.mono_equality_residual(app, r2, g2).residual <= 1e-9
    assert eq.vv_commutation_residual(app, r2, g2).residual <= 1e-9


@given(seeds)
def test_mono_strict_for_random_channel(seed):
    g = sampling.rng(seed)
    phi = random_channel(3, 2, 2, g)
    r = eq.mono_equality_residual(phi, sampling.random_density(3, g), sampling.random_density(3, g))
    assert r.residual > 1e-6
    assert r.components["relative_entropy_drop"] > 0
