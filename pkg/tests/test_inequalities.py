import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qel import inequalities as ineq, linalg, sampling
from qel.channels import PAULI_X, PAULI_Z, depolarizing_qubit, random_channel, unitary_channel
from qel.entropy import relative_entropy
from qel.tensor import MultipartiteState, kron, purify

from conftest import bell_state

seeds = st.integers(0, 2**32 - 1)


def _state(seed, dims):
    return MultipartiteState(sampling.random_density(int(np.prod(dims)), seed), dims)


def ghz() -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[0] = psi[7] = 1 / math.sqrt(2)
    return np.outer(psi, psi.conj())


# entropy inequalities ---------------------------------------------------------


def test_subadditivity_examples():
    prod = MultipartiteState(kron(sampling.random_density(2, 0), sampling.random_density(3, 1)), (2, 3))
    r = ineq.check_subadditivity(prod)
    assert abs(r.gap) <= 1e-10 and r.equality
    bell = ineq.check_subadditivity(MultipartiteState(bell_state(), (2, 2)))
    assert bell.gap == pytest.approx(2 * math.log(2), abs=1e-12)
    assert not bell.equality


def test_triangle_examples():
    pure = ineq.check_triangle(purify(sampling.random_density(3, 2)))
    assert abs(pure.lhs) <= 1e-12 and abs(pure.rhs) <= 1e-12
    r1, r2 = sampling.random_density(2, 3), sampling.random_density(2, 4)
    prod = ineq.check_triangle(MultipartiteState(kron(r1, r2), (2, 2)))
    assert prod.holds


def test_araki_lieb_examples():
    rs = [sampling.random_density(2, k) for k in range(3)]
    assert ineq.check_araki_lieb(MultipartiteState(kron(*rs), (2, 2, 2))).holds
    pure = ineq.check_araki_lieb(MultipartiteState(ghz(), (2, 2, 2)))
    assert abs(pure.lhs) <= 1e-12 and pure.holds


def test_ssa_examples():
    r1, r23 = sampling.random_density(2, 5), sampling.random_density(4, 6)
    eq = ineq.check_ssa(MultipartiteState(kron(r1, r23), (2, 2, 2)))
    assert abs(eq.gap) <= 1e-9 and eq.equality
    g = ineq.check_ssa(MultipartiteState(ghz(), (2, 2, 2)))
    assert g.gap == pytest.approx(math.log(2), abs=1e-12)
    assert "ssa_equality" not in g.residuals  # singular state: no log residual


@pytest.mark.parametrize("check, dims", [
    (ineq.check_subadditivity, (2, 3)),
    (ineq.check_triangle, (3, 2)),
    (ineq.check_araki_lieb, (2, 2, 2)),
    (ineq.check_ssa, (2, 3, 2)),
    (ineq.check_ssa_purified, (2, 2, 3)),
])
@given(seed=seeds)
def test_entropy_inequalities_hold_on_random_states(check, dims, seed):
    assert check(_state(seed, dims)).gap >= -1e-9


def test_ssa_purified_examples():
    pure = MultipartiteState(ghz(), (2, 2, 2))
    r = ineq.check_ssa_purified(pure)
    assert abs(r.gap) <= 1e-12


@given(seeds)
def test_ssa_purified_matches_ssa(seed):
    s = _state(seed, (2, 2, 2))
    p = purify(s)  # factors 1, 2, 3, 4
    rho124 = MultipartiteState(p.reduced([0, 1, 3]), (2, 2, 8))
    assert abs(ineq.check_ssa_purified(rho124).gap - ineq.check_ssa(s).gap) <= 1e-9


@given(seeds, st.sampled_from([(2, 2, 2), (2, 3, 2), (3, 2, 2)]))
def test_ssa_gap_equals_mpt_gap(seed, dims):
    s = _state(seed, dims)
    rho, gamma = ineq.ssa_as_mpt(s)
    assert abs(ineq.check_mpt(rho, gamma).gap - ineq.check_ssa(s).gap) <= 1e-9


# relative entropy ---------------------------------------------------------------


def test_mpt_examples():
    s = _state(0, (2, 3))
    same = ineq.check_mpt(s, s)
    assert abs(same.lhs) <= 1e-12 and abs(same.rhs) <= 1e-12
    r1, r2, g2 = sampling.random_density(2, 1), sampling.random_density(3, 2), sampling.random_density(3, 3)
    r = ineq.check_mpt(MultipartiteState(kron(r1, r2), (2, 3)), MultipartiteState(kron(r1, g2), (2, 3)))
    assert r.lhs == pytest.approx(relative_entropy(r2, g2), abs=1e-12)
    assert r.rhs == pytest.approx(relative_entropy(r2, g2), abs=1e-12)
    assert r.residuals["mpt_equality"] <= 1e-9


def test_mpt_infinite_sides():
    ket = np.zeros((4, 4))
    ket[0, 0] = 1
    r = ineq.check_mpt(MultipartiteState(np.eye(4) / 4, (2, 2)), MultipartiteState(ket, (2, 2)))
    assert r.holds and r.meta["infinite"] == "both"


@given(seeds, st.integers(2, 3), st.integers(2, 3))
def test_mpt_random(seed, d1, d2):
    g = sampling.rng(seed)
    assert ineq.check_mpt(_state(g, (d1, d2)), _state(g, (d1, d2))).gap >= -1e-9


def test_joint_convexity_examples():
    rho, gamma = sampling.random_density(3, 0), sampling.random_density(3, 1)
    single = ineq.check_joint_convexity([(1.0, rho, gamma)])
    assert abs(single.gap) <= 1e-12
    same = ineq.check_joint_convexity([(0.3, rho, gamma), (0.7, rho, gamma)])
    assert abs(same.gap) <= 1e-12 and same.residuals["jc_equality"] <= 1e-10


@given(seeds)
def test_joint_convexity_random(seed):
    g = sampling.rng(seed)
    lam = sampling.random_weights(3, g)
    comps = [(l, sampling.random_density(3, g), sampling.random_density(3, g)) for l in lam]
    assert ineq.check_joint_convexity(comps).gap >= -1e-9


def test_monotonicity_examples():
    rho, gamma = sampling.random_density(2, 0), sampling.random_density(2, 1)
    u = ineq.check_monotonicity(unitary_channel(sampling.random_unitary(2, 2)), rho, gamma)
    assert abs(u.gap) <= 1e-10 and u.residuals["mono_equality"] <= 1e-9
    dep = ineq.check_monotonicity(depolarizing_qubit(), rho, gamma)
    assert abs(dep.lhs) <= 1e-12


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_monotonicity_random(seed, d, m):
    g = sampling.rng(seed)
    phi = random_channel(d, 2, max(m, -(-d // 2)), g)
    r = ineq.check_monotonicity(phi, sampling.random_density(d, g), sampling.random_density(d, g))
    assert r.gap >= -1e-9


def test_klein_check():
    A, B = sampling.random_positive(3, 0), sampling.random_positive(3, 1)
    assert ineq.check_klein(A, B).gap >= 0
    assert abs(ineq.check_klein(A, A).gap) <= 1e-12


# trace inequalities ---------------------------------------------------------


def test_golden_thompson_pauli_closed_form():
    r = ineq.golden_thompson_gap(PAULI_X, PAULI_Z)
    assert r.gap == pytest.approx(2 * math.cosh(1) ** 2 - 2 * math.cosh(math.sqrt(2)), abs=1e-12)
    # frozen from a 40-digit evaluation
    assert r.gap == pytest.approx(0.40582857786648973158, abs=1e-14)


def test_golden_thompson_commuting():
    r = ineq.golden_thompson_gap(np.diag([0.3, -1.2, 2.0]), np.diag([1.1, 0.4, -0.7]))
    assert abs(r.gap) <= 1e-10 and r.equality


@given(seeds, st.integers(2, 4))
def test_golden_thompson_random(seed, d):
    g = sampling.rng(seed)
    assert ineq.golden_thompson_gap(sampling.random_hermitian(d, g, 3.0),
                                    sampling.random_hermitian(d, g, 3.0)).gap >= -1e-10


@given(seeds, st.integers(2, 4))
def test_golden_thompson_gap_is_second_order(seed, d):
    """The gap vanishes quadratically in the commutator: near-equality
    pins the commutator down to the square root of the gap."""
    g = sampling.rng(seed)
    A = sampling.random_hermitian(d, g)
    C = sampling.random_hermitian(d, g)
    B0 = linalg.matrix_function(A, np.tanh)
    ratios = []
    for eps in (1e-2, 1e-3, 1e-4):
        r = ineq.golden_thompson_gap(A, B0 + eps * C)
        c = r.residuals["commutator"]
        ratios.append(r.gap / c**2)
        assert r.gap >= -1e-12
    assert max(ratios) <= 10 * min(ratios)


def test_lieb_oracle():
    # both sides frozen from 40-digit evaluations (adaptive quadrature for the rhs)
    R = np.array([[1.0, 0.2], [0.2, 0.5]])
    S_ = np.array([[0.8, 0.1j], [-0.1j, 1.5]])
    T = np.array([[0.6, -0.3], [-0.3, 1.2]])
    r = ineq.lieb_triple_gap(R, S_, T)
    assert r.rhs == pytest.approx(1.0523514889564127465, rel=1e-13)
    assert r.lhs == pytest.approx(1.0416275856719533263, rel=1e-13)
    assert r.residuals["quadrature"] == pytest.approx(1.0523514889564127465, rel=1e-6)


def test_lieb_equal_arguments():
    rho = sampling.random_density(3, 4)
    r = ineq.lieb_triple_gap(rho, rho, rho)
    assert r.lhs == pytest.approx(1, abs=1e-12) and r.rhs == pytest.approx(1, abs=1e-12)


def test_lieb_exact_case():
    rho1, rho23 = sampling.random_density(2, 5), sampling.random_density(6, 6)
    R, S_, T = ineq.lieb_equality_example(rho1, rho23, (2, 2, 3))
    r = ineq.lieb_triple_gap(R, S_, T)
    assert abs(r.gap) <= 1e-9
    assert r.lhs == pytest.approx(1, abs=1e-9) and r.rhs == pytest.approx(1, abs=1e-9)


@given(seeds)
def test_lieb_random(seed):
    g = sampling.rng(seed)
    r = ineq.lieb_triple_gap(*(sampling.random_positive(3, g) for _ in range(3)))
    assert r.gap >= -1e-9
    assert r.residuals["quadrature_rel_diff"] <= 1e-6


@given(seeds, st.integers(2, 4))
def test_log_increment_integral_representation(seed, d):
    g = sampling.rng(seed)
    S_ = sampling.random_positive(d, g)
    T = sampling.random_hermitian(d, g, scale=1e-5)
    assert ineq.log_increment_residual(S_, T) <= 1e-8


def test_exp_log_oracle():
    K = np.array([[0.3, 0.2], [0.2, -0.1]])
    A = np.array([[1.0, 0.3], [0.3, 0.7]])
    assert ineq.exp_log_trace(K, A) == pytest.approx(2.1556242830877816075, rel=1e-13)


def test_exp_log_concavity_examples():
    K, A1 = sampling.random_hermitian(3, 0), sampling.random_positive(3, 1)
    assert abs(ineq.exp_log_concavity_probe(K, A1, A1, 0.3).gap) <= 1e-12
    A2 = sampling.random_positive(3, 2)
    lin = ineq.exp_log_concavity_probe(np.zeros((3, 3)), A1, A2, 0.3)
    assert abs(lin.gap) <= 1e-12


@given(seeds, st.integers(2, 4), st.floats(0.01, 0.99))
def test_exp_log_concavity_random(seed, d, lam):
    g = sampling.rng(seed)
    r = ineq.exp_log_concavity_probe(sampling.random_hermitian(d, g, 2.0), sampling.random_positive(d, g),
                                     sampling.random_positive(d, g), lam)
    assert r.gap >= -1e-9


def test_wyd_examples():
    K = sampling.ginibre(3, 3, sampling.rng(0))
    I = np.eye(3)
    assert ineq.wyd_value(I, I, K, 0.5) == pytest.approx(np.trace(K.conj().T @ K).real)
    A, B = sampling.random_positive(3, 1), sampling.random_positive(3, 2)
    assert abs(ineq.wyd_concavity_probe(A, B, A, B, K, 0.3, 0.6).gap) <= 1e-12
    # frozen from a 40-digit evaluation
    Kw = np.array([[0.5, 1j], [0.2, -0.3]])
    A = np.array([[1.0, 0.3], [0.3, 0.7]])
    B = np.array([[1.0, 0.2], [0.2, 0.5]])
    assert ineq.wyd_value(A, B, Kw, 0.3) == pytest.approx(1.2148296309000294629, rel=1e-13)


@given(seeds, st.sampled_from([0.25, 0.5, 0.75]), st.floats(0.01, 0.99))
def test_wyd_random(seed, s, lam):
    g = sampling.rng(seed)
    mats = [sampling.random_positive(3, g) for _ in range(4)]
    r = ineq.wyd_concavity_probe(*mats, sampling.ginibre(3, 3, g), s, lam)
    assert r.gap >= -1e-9


def test_directional_examples():
    K, A = sampling.random_hermitian(3, 0), sampling.random_positive(3, 1)
    same = ineq.homogeneous_directional_probe(K, A, A)
    assert abs(same.gap) <= 1e-9
    B = sampling.random_positive(3, 2)
    lin = ineq.homogeneous_directional_probe(np.zeros((3, 3)), A, B)
    assert abs(lin.gap) <= 1e-9 and lin.lhs == pytest.approx(np.trace(B).real)


@given(seeds, st.integers(2, 4))
def test_directional_random(seed, d):
    g = sampling.rng(seed)
    r = ineq.homogeneous_directional_probe(sampling.random_hermitian(d, g), sampling.random_positive(d, g),
                                           sampling.random_positive(d, g))
    assert r.holds


def test_herglotz_oracle():
    K = np.array([[0.3, 0.2], [0.2, -0.1]])
    A = np.array([[1.0, 0.3], [0.3, 0.7]])
    B = np.array([[0.2, -0.1j], [0.1j, -0.4]])
    g = ineq.herglotz_value(K, A, B, 0.5 + 1j)
    assert g.real == pytest.approx(0.98333538567688270725, rel=1e-12)
    assert g.imag == pytest.approx(2.1571440051754585403, rel=1e-12)


def test_herglotz_examples():
    K, A = sampling.random_hermitian(2, 0), sampling.random_positive(2, 1)
    r = ineq.epstein_herglotz_probe(K, A, np.zeros((2, 2)), [1j])
    assert r.holds and r.rhs > 0
    B = sampling.random_hermitian(3, 2)
    for z in ineq.default_z_grid():
        g = ineq.herglotz_value(np.zeros((3, 3)), np.eye(3), B, z)
        assert g.imag == pytest.approx(3 * z.imag, rel=1e-12)


@given(seeds, st.integers(2, 4))
def test_herglotz_random(seed, d):
    g = sampling.rng(seed)
    A = sampling.random_positive(d, g)
    B = sampling.random_hermitian(d, g, scale=0.1)
    r = ineq.epstein_herglotz_probe(sampling.random_hermitian(d, g), A, B)
    assert r.holds and r.residuals["retained"] + r.residuals["skipped"] == 12


def test_second_derivative_examples():
    K, A = sampling.random_hermitian(3, 0), sampling.random_positive(3, 1)
    assert ineq.epstein_second_derivative_probe(K, A, 0.4 * A).holds
    B = sampling.random_hermitian(3, 2)
    lin = ineq.epstein_second_derivative_probe(np.zeros((3, 3)), A, B)
    assert abs(lin.lhs) <= 1e-6


@given(seeds, st.integers(2, 4))
def test_second_derivative_random(seed, d):
    g = sampling.rng(seed)
    r = ineq.epstein_second_derivative_probe(sampling.random_hermitian(d, g), sampling.random_positive(d, g),
                                             sampling.random_hermitian(d, g, 0.1))
    assert r.lhs <= 1e-6


@given(seeds)
def test_pure_four_party_entropy_identities(seed):
    from qel.entropy import von_neumann_entropy as S

    # rho_124 pure on factors (1, 2, 4): S(4) = S(12) and S(2) = S(14), so
    # the purified form of SSA is tight
    rho124 = MultipartiteState(sampling.random_pure(8, seed), (2, 2, 2))
    assert S(rho124.reduced([2])) == pytest.approx(S(rho124.reduced([0, 1])), abs=1e-9)
    assert S(rho124.reduced([1])) == pytest.approx(S(rho124.reduced([0, 2])), abs=1e-9)
    assert abs(ineq.check_ssa_purified(rho124).gap) <= 1e-9
