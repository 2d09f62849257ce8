"""Residuals of the equality conditions, and generators of equality cases.

Every residual is a Frobenius norm of an operator identity built from matrix
logarithms, so all inputs must be strictly positive; singular inputs raise
:class:`SingularState` rather than silently switching to a support-restricted
version of the identity.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import linalg, sampling
from .channels import KrausChannel, adjoint_apply, apply, stinespring
from .entropy import relative_entropy
from .errors import InvariantError, NotMarkov, ShapeMismatch
from .reports import ResidualReport
from .tensor import MultipartiteState, embed, kron

EQ_TOL = 1e-8
DEFAULT_T_GRID = (-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0)
PETZ_STEP = 1e-4


def _as_density(x) -> np.ndarray:
    return x.rho if isinstance(x, MultipartiteState) else linalg.density(x)


def _positive_spectrum(M) -> linalg.Spectrum:
    spec = linalg.eig_hermitian(M)
    linalg.require_positive(spec)
    return spec


def _log(spec: linalg.Spectrum) -> np.ndarray:
    return spec.reconstruct(np.log(spec.eigenvalues))


def _it(spec: linalg.Spectrum, t: float) -> np.ndarray:
    return spec.reconstruct(np.exp(1j * t * np.log(spec.eigenvalues)))


def _tripartite(s: MultipartiteState) -> None:
    if s.n != 3:
        raise ShapeMismatch(f"tripartite state required, got dims {s.dims}")


class _SsaSpectra:
    """Spectra of rho_123, rho_12, rho_2, rho_23 with the embeddings needed
    to compare them on the full space."""

    def __init__(self, s: MultipartiteState):
        _tripartite(s)
        self.dims = s.dims
        self.s123 = _positive_spectrum(s.rho)
        self.s12 = _positive_spectrum(s.reduced([0, 1]))
        self.s2 = _positive_spectrum(s.reduced([1]))
        self.s23 = _positive_spectrum(s.reduced([1, 2]))

    def up(self, M, positions):
        return embed(M, self.dims, positions)

    def markov_defect(self) -> tuple[np.ndarray, dict]:
        L123 = _log(self.s123)
        L12 = self.up(_log(self.s12), [0, 1])
        L2 = self.up(_log(self.s2), [1])
        L23 = self.up(_log(self.s23), [1, 2])
        terms = {
            "log_rho123": linalg.fro(L123),
            "log_rho12": linalg.fro(L12),
            "log_rho2": linalg.fro(L2),
            "log_rho23": linalg.fro(L23),
        }
        return L123 - L12 + L2 - L23, terms

    def petz_defect(self, t: float) -> np.ndarray:
        lhs = self.up(_it(self.s12, t), [0, 1]) @ self.up(_it(self.s2, -t), [1])
        rhs = _it(self.s123, t) @ self.up(_it(self.s23, -t), [1, 2])
        return lhs - rhs


def ssa_equality_residual(s: MultipartiteState, tol: float = EQ_TOL) -> ResidualReport:
    """Defect in ``log rho_123 - log rho_12 = log rho_23 - log rho_2``."""
    defect, terms = _SsaSpectra(s).markov_defect()
    return ResidualReport.build("ssa-equality", linalg.fro(defect), tol, **terms)


def petz_residual(
    s: MultipartiteState, t_grid: Sequence[float] = DEFAULT_T_GRID, tol: float = EQ_TOL
) -> ResidualReport:
    """Max over ``t_grid`` of the defect in
    ``rho_12^{it} rho_2^{-it} = rho_123^{it} rho_23^{-it}``."""
    spectra = _SsaSpectra(s)
    per_t = {f"{t:g}": linalg.fro(spectra.petz_defect(t)) for t in t_grid}
    return ResidualReport.build("petz", max(per_t.values()), tol, per_t=per_t)


def petz_derivative(s: MultipartiteState, step: float = PETZ_STEP) -> float:
    """Norm of the central difference of the Petz defect at ``t = 0``.

    The exact derivative is ``i`` times the SSA equality defect, so this
    approximates :func:`ssa_equality_residual` to ``O(step**2)``.
    """
    spectra = _SsaSpectra(s)
    diff = (spectra.petz_defect(step) - spectra.petz_defect(-step)) / (2 * step)
    return linalg.fro(diff)


def _bipartite(s: MultipartiteState) -> None:
    if s.n != 2:
        raise ShapeMismatch(f"bipartite state required, got dims {s.dims}")


def mpt_equality_residual(rho12: MultipartiteState, gamma12: MultipartiteState,
                          tol: float = EQ_TOL) -> ResidualReport:
    """Defect in ``log rho_12 - log gamma_12 = I (x) (log rho_2 - log gamma_2)``.

    The reductions keep the second factor, matching :func:`check_mpt`.
    """
    _bipartite(rho12)
    if rho12.dims != gamma12.dims:
        raise ShapeMismatch(f"dims differ: {rho12.dims} vs {gamma12.dims}")
    L_rho = _log(_positive_spectrum(rho12.rho))
    L_gamma = _log(_positive_spectrum(gamma12.rho))
    L_rho2 = _log(_positive_spectrum(rho12.reduced([1])))
    L_gamma2 = _log(_positive_spectrum(gamma12.reduced([1])))
    defect = L_rho - L_gamma - embed(L_rho2 - L_gamma2, rho12.dims, [1])
    return ResidualReport.build(
        "mpt-equality", linalg.fro(defect), tol,
        joint=linalg.fro(L_rho - L_gamma), marginal=linalg.fro(L_rho2 - L_gamma2),
    )


def _mix(components):
    lam = np.array([c[0] for c in components], dtype=float)
    if np.any(lam <= 0) or abs(lam.sum() - 1) > 1e-10:
        raise InvariantError(f"mixture weights must be positive and sum to 1: {lam}")
    rho = sum(l * _as_density(r) for l, r, _ in components)
    gamma = sum(l * _as_density(g) for l, _, g in components)
    return lam, rho, gamma


def jc_equality_residual(components, tol: float = EQ_TOL) -> ResidualReport:
    """``max_k |(log rho - log gamma) - (log rho_k - log gamma_k)|_F`` for the
    mixtures ``rho = sum lambda_k rho_k``, ``gamma = sum lambda_k gamma_k``."""
    _, rho, gamma = _mix(components)
    K = _log(_positive_spectrum(rho)) - _log(_positive_spectrum(gamma))
    per_k = [
        linalg.fro(K - _log(_positive_spectrum(_as_density(r))) + _log(_positive_spectrum(_as_density(g))))
        for _, r, g in components
    ]
    return ResidualReport.build("jc-equality", max(per_k), tol, per_component=per_k)


def _channel_logs(phi: KrausChannel, rho, gamma):
    rho = linalg.density(rho)
    gamma = linalg.density(gamma)
    inner = _log(_positive_spectrum(rho)) - _log(_positive_spectrum(gamma))
    outer = _log(_positive_spectrum(apply(phi, rho))) - _log(_positive_spectrum(apply(phi, gamma)))
    return rho, gamma, inner, outer


def mono_equality_residual(phi: KrausChannel, rho, gamma, tol: float = EQ_TOL) -> ResidualReport:
    """Defect in ``log rho - log gamma = Phi^[log Phi(rho) - log Phi(gamma)]``
    where ``Phi^`` is the Hilbert-Schmidt adjoint."""
    rho, gamma, inner, outer = _channel_logs(phi, rho, gamma)
    defect = inner - adjoint_apply(phi, outer)
    h_in = relative_entropy(rho, gamma)
    h_out = relative_entropy(apply(phi, rho), apply(phi, gamma))
    return ResidualReport.build(
        "mono-equality", linalg.fro(defect), tol, relative_entropy_drop=h_in - h_out
    )


def vv_commutation_residual(phi: KrausChannel, rho, gamma, tol: float = EQ_TOL) -> ResidualReport:
    """Two necessary conditions for equality under a channel.

    * ``VV^dagger`` commutes with ``log Phi(rho) - log Phi(gamma)`` placed on
      the system factor of the dilated space;
    * ``Phi(log rho - log gamma) = Phi(I) X = X Phi(I)`` with ``X`` that
      same log difference.

    The reported residual is the larger of the two.
    """
    _, _, inner, X = _channel_logs(phi, rho, gamma)
    V = stinespring(phi)
    P = V.projector()
    comm = linalg.fro(linalg.commutator(P, V.on_system(X)))
    left = apply(phi, inner)
    phi_id = apply(phi, np.eye(phi.in_dim))
    cond_c = max(linalg.fro(left - phi_id @ X), linalg.fro(left - X @ phi_id))
    return ResidualReport.build(
        "vv-commutation", max(comm, cond_c), tol, commutator=comm, phi_identity=cond_c
    )


# Generators of exact equality cases ----------------------------------------


def _marginal_sums(p: np.ndarray):
    p_ab = p.sum(axis=2)
    p_bc = p.sum(axis=0)
    p_b = p.sum(axis=(0, 2))
    return p_ab, p_b, p_bc


def markov_defect(p) -> float:
    """``max |p(a,b,c) p(b) - p(a,b) p(b,c)|``."""
    p = np.asarray(p, dtype=float)
    p_ab, p_b, p_bc = _marginal_sums(p)
    return float(np.max(np.abs(p * p_b[None, :, None] - p_ab[:, :, None] * p_bc[None, :, :])))


def make_markov_state(p, tol: float = 1e-10) -> MultipartiteState:
    """Diagonal state ``sum p(a,b,c) |abc><abc|`` of a Markov chain
    ``A -> B -> C`` given as an array of shape ``(d1, d2, d3)``."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 3:
        raise ShapeMismatch(f"expected a 3-index distribution, got shape {p.shape}")
    if np.any(p <= 0) or abs(p.sum() - 1) > 1e-10:
        raise InvariantError("distribution must be strictly positive and sum to 1")
    defect = markov_defect(p)
    if defect > tol:
        raise NotMarkov(f"p(abc) p(b) - p(ab) p(bc) reaches {defect:.3e}")
    return MultipartiteState(np.diag(p.ravel()).astype(complex), p.shape)


def random_markov_distribution(dims, seed=0) -> np.ndarray:
    """``p(a) p(b|a) p(c|b)`` with random strictly positive factors."""
    d1, d2, d3 = dims
    gen = sampling.rng(seed)
    p_a = sampling.random_weights(d1, gen)
    b_given_a = np.array([sampling.random_weights(d2, gen) for _ in range(d1)])
    c_given_b = np.array([sampling.random_weights(d3, gen) for _ in range(d2)])
    return p_a[:, None, None] * b_given_a[:, :, None] * c_given_b[None, :, :]


def make_product_split_state(rho_a: MultipartiteState, rho_b: MultipartiteState) -> MultipartiteState:
    """``rho_{12'} (x) rho_{2''3}`` viewed on dims ``[d1, d2' d2'', d3]``."""
    _bipartite(rho_a)
    _bipartite(rho_b)
    for s in (rho_a, rho_b):
        _positive_spectrum(s.rho)
    d1, d2a = rho_a.dims
    d2b, d3 = rho_b.dims
    return MultipartiteState(kron(rho_a.rho, rho_b.rho), (d1, d2a * d2b, d3))
