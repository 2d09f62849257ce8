"""Tensor-product structure: multipartite states, partial traces, embeddings.

Subsystems are indexed from 0 internally; the CLI and JSON layer shift to
1-based labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import BadDimensions, BadPermutation, BadSubsystemIndex, ShapeMismatch
from . import linalg


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise BadDimensions(f"subsystem dimensions must be >= 1, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """A density operator together with its tensor-factor dimensions."""

    rho: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = _check_dims(self.dims)
        rho = linalg.density(self.rho)
        if rho.shape[0] != int(np.prod(dims)):
            raise ShapeMismatch(
                f"dims {dims} multiply to {int(np.prod(dims))}, operator has "
                f"dimension {rho.shape[0]}"
            )
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def n(self) -> int:
        return len(self.dims)

    def reduced(self, keep: Iterable[int]) -> np.ndarray:
        """Reduced density matrix on ``keep`` (0-based), as an array."""
        return _partial_trace(self.rho, self.dims, keep)

    def marginal(self, keep: Iterable[int]) -> "MultipartiteState":
        return partial_trace(self, keep)


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices."""
    return reduce(np.kron, [np.asarray(op) for op in ops])


def _normalize_keep(keep, n: int) -> list[int]:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise BadSubsystemIndex("at least one subsystem must be kept")
    if keep[0] < 0 or keep[-1] >= n:
        raise BadSubsystemIndex(f"subsystem index out of range 0..{n - 1}: {keep}")
    return keep


def _partial_trace(rho: np.ndarray, dims: Sequence[int], keep) -> np.ndarray:
    n = len(dims)
    keep = _normalize_keep(keep, n)
    traced = [k for k in range(n) if k not in keep]
    dk = int(np.prod([dims[k] for k in keep]))
    dt = int(np.prod([dims[k] for k in traced])) if traced else 1
    t = np.asarray(rho).reshape(tuple(dims) * 2)
    order = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    t = t.transpose(order).reshape(dk, dt, dk, dt)
    return np.einsum("aibi->ab", t)


def partial_trace(s: MultipartiteState, keep: Iterable[int]) -> MultipartiteState:
    """Trace out every subsystem not listed in ``keep``; kept subsystems
    retain their original order."""
    keep = _normalize_keep(keep, s.n)
    return MultipartiteState(_partial_trace(s.rho, s.dims, keep), tuple(s.dims[k] for k in keep))


def permute_operator(M: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: new factor ``k`` is old factor ``perm[k]``."""
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise BadPermutation(f"{perm} is not a permutation of 0..{n - 1}")
    D = int(np.prod(dims))
    t = np.asarray(M).reshape(tuple(dims) * 2)
    t = t.transpose(perm + [n + p for p in perm])
    return t.reshape(D, D)


def permute_subsystems(s: MultipartiteState, perm: Sequence[int]) -> MultipartiteState:
    rho = permute_operator(s.rho, s.dims, perm)
    return MultipartiteState(rho, tuple(s.dims[p] for p in perm))


def embed(A, dims: Sequence[int], positions: Iterable[int]) -> np.ndarray:
    """``A`` acting on the factors at ``positions`` (ascending order),
    tensored with identities elsewhere.

    This is the adjoint of the partial trace onto ``positions``.
    """
    dims = _check_dims(dims)
    n = len(dims)
    positions = _normalize_keep(positions, n)
    A = linalg.as_square(A)
    da = int(np.prod([dims[p] for p in positions]))
    if A.shape[0] != da:
        raise ShapeMismatch(
            f"operator of dimension {A.shape[0]} does not fit factors "
            f"{[dims[p] for p in positions]}"
        )
    rest = [k for k in range(n) if k not in positions]
    drest = int(np.prod([dims[k] for k in rest])) if rest else 1
    big = np.kron(A, np.eye(drest))
    current = positions + rest  # factor order of ``big``
    inverse = [current.index(k) for k in range(n)]
    return permute_operator(big, [dims[k] for k in current], inverse)


def purify(rho) -> MultipartiteState:
    """Pure state whose first factor(s) reduce to ``rho``.

    ``rho`` may be a plain density matrix (result has dims ``[d, d]``) or a
    :class:`MultipartiteState` (the purifying factor of dimension ``d`` is
    appended to its dims).  Uses ``sum_i sqrt(lambda_i) |u_i> (x) |i>`` with
    eigenvectors in ascending eigenvalue order.
    """
    if isinstance(rho, MultipartiteState):
        dims = rho.dims
        mat = rho.rho
    else:
        mat = linalg.density(rho)
        dims = (mat.shape[0],)
    spec = linalg.eig_hermitian(mat)
    w = np.clip(spec.eigenvalues, 0.0, None)
    d = len(w)
    psi = (spec.eigenvectors * np.sqrt(w)).reshape(d * d)
    psi = psi / np.linalg.norm(psi)
    return MultipartiteState(np.outer(psi, psi.conj()), tuple(dims) + (d,))
