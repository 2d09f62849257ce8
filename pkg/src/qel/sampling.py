"""Seeded random generators for states, channels, POVMs and ensembles.

All randomness flows through :func:`rng`, a Philox counter-based generator
keyed by ``(seed, *key)``.  Trial ``i`` of a batch seeded with ``s`` uses
``rng(s, i)``, so a batch can be split across workers and still reproduce
bit-for-bit.
"""

from __future__ import annotations

import numpy as np

from .errors import BadDimensions
from . import linalg


def rng(seed, *key: int) -> np.random.Generator:
    """Independent generator for ``seed`` and an optional spawn key."""
    if isinstance(seed, np.random.Generator):
        if key:
            raise TypeError("spawn keys require an integer seed")
        return seed
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _dim(d) -> int:
    d = int(d)
    if d < 1:
        raise BadDimensions(f"dimension must be positive, got {d}")
    return d


def ginibre(rows: int, cols: int, gen: np.random.Generator) -> np.ndarray:
    return gen.standard_normal((rows, cols)) + 1j * gen.standard_normal((rows, cols))


def random_density(dim: int, seed=0, rank: int | None = None) -> np.ndarray:
    """Ginibre density ``G G^dagger / Tr``; full rank unless ``rank`` given."""
    dim = _dim(dim)
    gen = rng(seed)
    G = ginibre(dim, dim if rank is None else _dim(rank), gen)
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_pure(dim: int, seed=0) -> np.ndarray:
    return random_density(dim, seed, rank=1)


def random_hermitian(dim: int, seed=0, scale: float = 1.0) -> np.ndarray:
    """GUE-like Hermitian matrix with Frobenius norm ``scale``."""
    dim = _dim(dim)
    G = ginibre(dim, dim, rng(seed))
    H = 0.5 * (G + G.conj().T)
    return scale * H / np.linalg.norm(H)


def random_positive(dim: int, seed=0, low: float = 0.2, high: float = 2.0) -> np.ndarray:
    """Positive definite matrix with spectrum drawn uniformly from [low, high]."""
    dim = _dim(dim)
    gen = rng(seed)
    U = random_unitary(dim, gen)
    w = gen.uniform(low, high, dim)
    return (U * w) @ U.conj().T


def random_unitary(dim: int, seed=0) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with phase correction."""
    dim = _dim(dim)
    Q, R = np.linalg.qr(ginibre(dim, dim, rng(seed)))
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def random_isometry(rows: int, cols: int, seed=0) -> np.ndarray:
    if rows < cols:
        raise BadDimensions(f"isometry needs rows >= cols, got {rows}x{cols}")
    Q, R = np.linalg.qr(ginibre(rows, cols, rng(seed)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_kraus(in_dim: int, out_dim: int, m: int, seed=0) -> list[np.ndarray]:
    """Kraus operators as the row blocks of a random isometry."""
    in_dim, out_dim, m = _dim(in_dim), _dim(out_dim), _dim(m)
    if m * out_dim < in_dim:
        raise BadDimensions(
            f"m * out_dim = {m * out_dim} must be >= in_dim = {in_dim}"
        )
    V = random_isometry(m * out_dim, in_dim, seed)
    return [V[k * out_dim:(k + 1) * out_dim] for k in range(m)]


def random_povm_elements(dim: int, n_outcomes: int, seed=0) -> list[np.ndarray]:
    """``E_b = S^{-1/2} A_b S^{-1/2}`` with ``A_b`` Ginibre PSD, ``S = sum A_b``."""
    dim, n = _dim(dim), _dim(n_outcomes)
    gen = rng(seed)
    A = []
    for _ in range(n):
        G = ginibre(dim, dim, gen)
        A.append(G @ G.conj().T)
    S_inv_half = linalg.matrix_function(sum(A), lambda w: w**-0.5)
    elems = [S_inv_half @ a @ S_inv_half for a in A]
    return [0.5 * (e + e.conj().T) for e in elems]


def random_probabilities(n: int, seed=0) -> np.ndarray:
    """Uniform draw from the probability simplex."""
    return rng(seed).dirichlet(np.ones(_dim(n)))


def random_weights(n: int, seed=0, floor: float = 0.05) -> np.ndarray:
    """Strictly positive weights summing to one, each at least ``floor / n``."""
    p = random_probabilities(n, seed)
    p = (1 - floor) * p + floor / len(p)
    return p / p.sum()
