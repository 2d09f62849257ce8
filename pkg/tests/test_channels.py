import numpy as np
import pytest
from hypothesis import given, strategies as st

from qel import linalg, sampling
from qel.channels import (
    Ensemble,
    KrausChannel,
    Povm,
    adjoint_apply,
    append_channel,
    apply,
    compose,
    depolarizing_qubit,
    identity_channel,
    partial_trace_channel,
    povm_to_projective,
    qc_channel,
    random_channel,
    random_ensemble,
    random_povm,
    stinespring,
    unitary_channel,
)
from qel.errors import BadEnsemble, DimMismatch, NotPovm, NotTracePreserving
from qel.tensor import _partial_trace, kron

seeds = st.integers(0, 2**32 - 1)


@st.composite
def channels(draw):
    seed = draw(seeds)
    d = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    out = draw(st.integers(max(1, -(-d // m)), 5))
    return random_channel(d, out, m, seed), seed


def trine() -> Povm:
    kets = [np.array([np.cos(k * np.pi / 3), np.sin(k * np.pi / 3)]) for k in range(3)]
    return Povm(tuple(2 / 3 * np.outer(k, k) for k in kets))


def test_identity_and_depolarizing():
    rho = sampling.random_density(3, 0)
    np.testing.assert_allclose(apply(identity_channel(3), rho), rho)
    q = sampling.random_density(2, 1)
    np.testing.assert_allclose(apply(depolarizing_qubit(), q), np.eye(2) / 2, atol=1e-15)


@given(channels())
def test_trace_preservation_and_unital_adjoint(case):
    phi, seed = case
    rho = sampling.random_density(phi.in_dim, seed + 1)
    assert abs(np.trace(apply(phi, rho)).real - 1) <= 1e-12
    assert linalg.fro(adjoint_apply(phi, np.eye(phi.out_dim)) - np.eye(phi.in_dim)) <= 1e-10


def test_not_trace_preserving_rejected():
    with pytest.raises(NotTracePreserving):
        KrausChannel((np.eye(2) * 0.9,), 2, 2)
    with pytest.raises(DimMismatch):
        KrausChannel((np.eye(2),), 3, 2)


def test_adjoint_of_unitary():
    U = sampling.random_unitary(3, 2)
    X = sampling.random_hermitian(3, 3)
    np.testing.assert_allclose(adjoint_apply(unitary_channel(U), X), U.conj().T @ X @ U, atol=1e-14)


@given(channels())
def test_adjoint_duality(case):
    phi, seed = case
    g = sampling.rng(seed, 1)
    A = sampling.ginibre(phi.in_dim, phi.in_dim, g)
    B = sampling.ginibre(phi.out_dim, phi.out_dim, g)
    assert abs(linalg.hs_inner(apply(phi, A), B) - linalg.hs_inner(A, adjoint_apply(phi, B))) <= 1e-11


@given(channels(), channels())
def test_composition(a, b):
    phi, seed = a
    psi = random_channel(b[0].in_dim, phi.in_dim, b[0].in_dim, b[1])
    rho = sampling.random_density(psi.in_dim, seed)
    both = compose(phi, psi)
    assert linalg.fro(apply(both, rho) - apply(phi, apply(psi, rho))) <= 1e-11


def test_stinespring_examples():
    U = sampling.random_unitary(3, 0)
    V = stinespring(unitary_channel(U))
    assert V.m == 1
    np.testing.assert_allclose(V.V, U)
    P = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    V = stinespring(KrausChannel(tuple(P), 2, 2))
    expected = sum(kron(np.eye(2)[:, [b]], P[b]) for b in range(2))
    np.testing.assert_allclose(V.V, expected)


@given(channels())
def test_stinespring_recovery(case):
    phi, seed = case
    rho = sampling.random_density(phi.in_dim, seed + 7)
    V = stinespring(phi)
    recovered = _partial_trace(V.conjugate(rho), V.factor_dims, [V.system_axis])
    assert linalg.fro(recovered - apply(phi, rho)) <= 1e-10
    gram = V.V.conj().T @ V.V
    assert linalg.fro(gram - np.eye(phi.in_dim)) <= 1e-10
    P = V.projector()
    assert linalg.fro(P @ P - P) <= 1e-10


def test_qc_channel_examples():
    comp = Povm((np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0]), np.diag([0, 0, 1.0])))
    p = np.diag([0.2, 0.3, 0.5])
    np.testing.assert_allclose(apply(qc_channel(comp), p), p, atol=1e-15)
    trivial = qc_channel(Povm((np.eye(2),)))
    np.testing.assert_allclose(apply(trivial, sampling.random_density(2, 0)), [[1.0]])


@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_qc_channel_records_probabilities(seed, d, n):
    g = sampling.rng(seed)
    M = random_povm(d, n, g)
    rho = sampling.random_density(d, g)
    out = apply(qc_channel(M), rho)
    np.testing.assert_allclose(np.diag(out).real, M.probabilities(rho), atol=1e-12)
    assert linalg.fro(out - np.diag(np.diag(out))) <= 1e-12


def test_projective_lift_examples():
    comp = Povm((np.diag([1.0, 0]), np.diag([0, 1.0])))
    rho = sampling.random_density(2, 3)
    V, F = povm_to_projective(comp)
    np.testing.assert_allclose(F.probabilities(V.conjugate(rho)), comp.probabilities(rho), atol=1e-15)
    M = trine()
    V, F = povm_to_projective(M)
    assert F.is_projective()
    np.testing.assert_allclose(F.probabilities(V.conjugate(rho)), M.probabilities(rho), atol=1e-11)


@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_projective_lift_random(seed, d, n):
    g = sampling.rng(seed)
    M = random_povm(d, n, g)
    rho = sampling.random_density(d, g)
    V, F = povm_to_projective(M)
    for b, Fb in enumerate(F.elements):
        for c, Fc in enumerate(F.elements):
            np.testing.assert_array_equal(Fb @ Fc, Fb if b == c else np.zeros_like(Fb))
    np.testing.assert_allclose(F.probabilities(V.conjugate(rho)), M.probabilities(rho), atol=1e-12)


def test_povm_validation():
    with pytest.raises(NotPovm):
        Povm((np.eye(2) / 2,))
    with pytest.raises(NotPovm):
        Povm((np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])))


def test_ensemble_validation():
    with pytest.raises(BadEnsemble):
        Ensemble((0.5, 0.5), (np.eye(2) / 2,))
    E = random_ensemble(3, 4, 0)
    assert len(E) == 4 and E.dim == 3
    assert abs(np.trace(E.average()).real - 1) <= 1e-12


def test_random_generators_are_deterministic():
    assert random_channel(3, 2, 3, 9).kraus[1].tobytes() == random_channel(3, 2, 3, 9).kraus[1].tobytes()
    assert sampling.random_density(4, 5).tobytes() == sampling.random_density(4, 5).tobytes()
    a, b = random_povm(3, 4, 1), random_povm(3, 4, 1)
    assert all(x.tobytes() == y.tobytes() for x, y in zip(a.elements, b.elements))
    assert sampling.random_density(4, 5).tobytes() != sampling.random_density(4, 6).tobytes()


def test_partial_trace_and_append_channels():
    r1, r2 = sampling.random_density(2, 0), sampling.random_density(3, 1)
    np.testing.assert_allclose(apply(partial_trace_channel((2, 3), 0), kron(r1, r2)), r2, atol=1e-15)
    np.testing.assert_allclose(apply(partial_trace_channel((2, 3), 1), kron(r1, r2)), r1, atol=1e-15)
    sigma = sampling.random_density(2, 4)
    np.testing.assert_allclose(apply(append_channel(sigma, 3), r2), kron(r2, sigma), atol=1e-14)
