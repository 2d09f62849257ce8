"""Entropy functionals, in nats.

``relative_entropy`` returns the :data:`INFINITE` sentinel (never a float
``inf``) when the support condition ``ker(gamma) subset ker(rho)`` fails, so
callers must branch on it explicitly.
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import DimMismatch, InvariantError, LengthMismatch, ShapeMismatch
from .tensor import MultipartiteState


class _Infinite:
    """Singleton marking a divergent relative entropy."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()
Entropy = Union[float, _Infinite]

PROB_NEG_TOL = 1e-12
PROB_SUM_TOL = 1e-10
# Outcome probabilities at or below this are dropped from classical sums.
PROB_DROP = 1e-14


def is_infinite(x) -> bool:
    return x is INFINITE


def _xlogx_sum(w: np.ndarray, cutoff=None) -> float:
    mask = linalg.support_mask(w, cutoff)
    w = w[mask]
    return float(np.sum(w * np.log(w)))


def von_neumann_entropy(rho, cutoff: float | None = None) -> float:
    """``S(rho) = -Tr rho log rho`` with ``0 log 0 = 0``."""
    if isinstance(rho, MultipartiteState):
        rho = rho.rho
    return -_xlogx_sum(linalg.eigvals_hermitian(rho), cutoff)


def relative_entropy(rho, gamma, cutoff: float | None = None) -> Entropy:
    """``H(rho, gamma) = Tr rho (log rho - log gamma)`` for PSD arguments.

    Traces are not required to agree.  Returns :data:`INFINITE` when ``rho``
    carries weight outside the support of ``gamma``.
    """
    if isinstance(rho, MultipartiteState):
        rho = rho.rho
    if isinstance(gamma, MultipartiteState):
        gamma = gamma.rho
    rho = linalg.hermitian(rho)
    gamma = linalg.hermitian(gamma)
    if rho.shape != gamma.shape:
        raise DimMismatch(f"dimensions differ: {rho.shape} vs {gamma.shape}")
    g = linalg.eig_hermitian(gamma)
    mask = linalg.support_mask(g.eigenvalues, cutoff)
    rotated = np.real(np.einsum("ai,ab,bi->i", g.eigenvectors.conj(), rho, g.eigenvectors))
    leak = rotated[~mask].sum()
    scale = max(np.trace(rho).real, 1e-300)
    support_tol = rho.shape[0] * linalg.SUPPORT_CUTOFF if cutoff is None else cutoff
    if leak > support_tol * scale:
        return INFINITE
    rho_log_gamma = float(np.sum(rotated[mask] * np.log(g.eigenvalues[mask])))
    return _xlogx_sum(linalg.eigvals_hermitian(rho), cutoff) - rho_log_gamma


def klein_gap(A, B) -> Entropy:
    """``Tr A (log A - log B) - Tr (A - B)``; non-negative, zero iff A == B."""
    A = linalg.hermitian(A)
    B = linalg.hermitian(B)
    h = relative_entropy(A, B)
    if h is INFINITE:
        return INFINITE
    return h - float(np.trace(A - B).real)


def probability_vector(p) -> np.ndarray:
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or np.any(p < -PROB_NEG_TOL) or abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise InvariantError(f"not a probability vector: {p}")
    return p


def shannon_entropy(p) -> float:
    p = probability_vector(p)
    p = p[p > PROB_DROP]
    return float(-np.sum(p * np.log(p)))


def classical_relative_entropy(p, q) -> Entropy:
    """``sum_a p(a) log(p(a) / q(a))``; :data:`INFINITE` if ``q`` vanishes
    where ``p`` does not."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise LengthMismatch(f"lengths differ: {p.size} vs {q.size}")
    keep = p > PROB_DROP
    if np.any(q[keep] <= PROB_DROP):
        return INFINITE
    return float(np.sum(p[keep] * np.log(p[keep] / q[keep])))


def conditional_entropy(s: MultipartiteState) -> float:
    """``S(rho_1) - S(rho_12)`` for a bipartite state."""
    if s.n != 2:
        raise ShapeMismatch(f"bipartite state required, got dims {s.dims}")
    return von_neumann_entropy(s.reduced([0])) - von_neumann_entropy(s.rho)


def to_bits(x: Entropy) -> Entropy:
    if x is INFINITE:
        return x
    return x / np.log(2.0)


def mixture(weights: Sequence[float], states) -> np.ndarray:
    return sum(w * np.asarray(s) for w, s in zip(weights, states))
