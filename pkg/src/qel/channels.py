"""Completely positive trace-preserving maps, POVMs and ensembles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg, sampling
from .entropy import probability_vector
from .errors import BadEnsemble, DimMismatch, InvariantError, NotPovm, NotTracePreserving
from .tensor import embed

TP_TOL = 1e-10
POVM_TOL = 1e-10


def _freeze(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=complex)
    M.setflags(write=False)
    return M


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """``Phi(rho) = sum_k F_k rho F_k^dagger`` with ``sum_k F_k^dagger F_k = I``."""

    kraus: tuple
    in_dim: int
    out_dim: int

    def __post_init__(self):
        ops = tuple(_freeze(linalg.as_matrix(F)) for F in self.kraus)
        if not ops:
            raise NotTracePreserving("a channel needs at least one Kraus operator")
        for F in ops:
            if F.shape != (self.out_dim, self.in_dim):
                raise DimMismatch(
                    f"Kraus operator of shape {F.shape}, expected "
                    f"{(self.out_dim, self.in_dim)}"
                )
        defect = linalg.fro(sum(F.conj().T @ F for F in ops) - np.eye(self.in_dim))
        if defect > TP_TOL:
            raise NotTracePreserving(f"|sum F^dagger F - I|_F = {defect:.3e}")
        object.__setattr__(self, "kraus", ops)

    @classmethod
    def from_kraus(cls, kraus: Sequence) -> "KrausChannel":
        kraus = [linalg.as_matrix(F) for F in kraus]
        out_dim, in_dim = kraus[0].shape
        return cls(tuple(kraus), in_dim, out_dim)

    @property
    def m(self) -> int:
        return len(self.kraus)


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    """Isometry ``V`` from the input space into ``factor_dims``.

    ``env_axis`` tells which tensor factor of the output is the environment.
    :func:`stinespring` stacks the Kraus operators as blocks, which puts the
    environment first; the POVM lift puts it last.
    """

    V: np.ndarray
    factor_dims: tuple[int, int]
    env_axis: int

    def __post_init__(self):
        V = _freeze(self.V)
        defect = linalg.fro(V.conj().T @ V - np.eye(V.shape[1]))
        if defect > TP_TOL:
            raise InvariantError(f"V is not an isometry: |V^dagger V - I|_F = {defect:.3e}")
        object.__setattr__(self, "V", V)

    @property
    def m(self) -> int:
        return self.factor_dims[self.env_axis]

    @property
    def system_axis(self) -> int:
        return 1 - self.env_axis

    def conjugate(self, rho) -> np.ndarray:
        return self.V @ np.asarray(rho) @ self.V.conj().T

    def projector(self) -> np.ndarray:
        return self.V @ self.V.conj().T

    def on_system(self, X) -> np.ndarray:
        """``X`` placed on the system factor, identity on the environment."""
        return embed(X, self.factor_dims, [self.system_axis])


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple

    def __post_init__(self):
        elems = tuple(_freeze(linalg.hermitian(E)) for E in self.elements)
        if not elems:
            raise NotPovm("a POVM needs at least one element")
        d = elems[0].shape[0]
        for E in elems:
            if E.shape != (d, d):
                raise DimMismatch("POVM elements must share one dimension")
            w = np.linalg.eigvalsh(E)
            if w[0] < -linalg.PSD_TOL:
                raise NotPovm(f"element with eigenvalue {w[0]:.3e}")
        defect = linalg.fro(sum(elems) - np.eye(d))
        if defect > POVM_TOL:
            raise NotPovm(f"|sum E_b - I|_F = {defect:.3e}")
        object.__setattr__(self, "elements", elems)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def probabilities(self, rho) -> np.ndarray:
        rho = np.asarray(rho)
        return np.array([np.vdot(E, rho).real for E in self.elements])

    def is_projective(self, tol: float = 1e-10) -> bool:
        return all(
            linalg.fro(E @ F - (E if b == c else 0)) <= tol
            for b, E in enumerate(self.elements)
            for c, F in enumerate(self.elements)
        )


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted states ``{pi_j, rho_j}``."""

    weights: tuple
    states: tuple

    def __post_init__(self):
        w = probability_vector(self.weights)
        states = tuple(_freeze(linalg.density(s)) for s in self.states)
        if len(w) != len(states):
            raise BadEnsemble(f"{len(w)} weights for {len(states)} states")
        if len({s.shape for s in states}) != 1:
            raise BadEnsemble("ensemble states must share one dimension")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def __len__(self):
        return len(self.states)

    def average(self) -> np.ndarray:
        return sum(p * s for p, s in zip(self.weights, self.states))


def _check_in(phi: KrausChannel, X) -> np.ndarray:
    X = linalg.as_square(X)
    if X.shape[0] != phi.in_dim:
        raise DimMismatch(f"input of dimension {X.shape[0]}, channel expects {phi.in_dim}")
    return X


def apply(phi: KrausChannel, X) -> np.ndarray:
    """``sum_k F_k X F_k^dagger``; linear, so any square ``X`` is accepted."""
    X = _check_in(phi, X)
    return sum(F @ X @ F.conj().T for F in phi.kraus)


def adjoint_apply(phi: KrausChannel, X) -> np.ndarray:
    """Hilbert-Schmidt adjoint ``sum_k F_k^dagger X F_k``."""
    X = linalg.as_square(X)
    if X.shape[0] != phi.out_dim:
        raise DimMismatch(f"input of dimension {X.shape[0]}, adjoint expects {phi.out_dim}")
    return sum(F.conj().T @ X @ F for F in phi.kraus)


def compose(phi: KrausChannel, psi: KrausChannel) -> KrausChannel:
    """``phi o psi`` (apply ``psi`` first)."""
    if psi.out_dim != phi.in_dim:
        raise DimMismatch(f"cannot compose: {psi.out_dim} -> {phi.in_dim}")
    return KrausChannel(tuple(F @ G for F in phi.kraus for G in psi.kraus), psi.in_dim, phi.out_dim)


def stinespring(phi: KrausChannel) -> StinespringIsometry:
    """Stacked-block isometry ``V = sum_k |k> (x) F_k`` (environment first)."""
    V = np.vstack(phi.kraus)
    return StinespringIsometry(V, (phi.m, phi.out_dim), env_axis=0)


def qc_channel(M: Povm) -> KrausChannel:
    """Measure-and-record channel ``A -> sum_b |b><b| Tr(A E_b)`` with Kraus
    operators ``|b><k| sqrt(E_b)``."""
    d, n = M.dim, len(M)
    kraus = []
    for b, E in enumerate(M.elements):
        root = linalg.sqrtm(E)
        for k in range(d):
            F = np.zeros((n, d), dtype=complex)
            F[b] = root[k]
            kraus.append(F)
    return KrausChannel(tuple(kraus), d, n)


def povm_to_projective(M: Povm) -> tuple[StinespringIsometry, Povm]:
    """Naimark-style lift: ``V = sum_b sqrt(E_b) (x) |b>`` and the projective
    measurement ``F_b = I (x) |b><b|`` with ``Tr F_b V rho V^dagger = Tr E_b rho``."""
    d, n = M.dim, len(M)
    V = sum(np.kron(linalg.sqrtm(E), np.eye(n)[:, [b]]) for b, E in enumerate(M.elements))
    iso = StinespringIsometry(V, (d, n), env_axis=1)
    projectors = []
    for b in range(n):
        P = np.zeros((n, n))
        P[b, b] = 1.0
        projectors.append(np.kron(np.eye(d), P))
    return iso, Povm(tuple(projectors))


# Named channels ----------------------------------------------------------


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d),), d, d)


def unitary_channel(U) -> KrausChannel:
    U = linalg.as_square(U)
    return KrausChannel((U,), U.shape[0], U.shape[0])


def depolarizing_qubit() -> KrausChannel:
    """Fully depolarizing qubit channel from the four Paulis, each / 2."""
    paulis = [np.eye(2), PAULI_X, PAULI_Y, PAULI_Z]
    return KrausChannel(tuple(P / 2 for P in paulis), 2, 2)


def partial_trace_channel(dims: Sequence[int], traced: int) -> KrausChannel:
    """Trace over one factor of a bipartite system, as a Kraus channel
    ``F_k = <k| (x) I`` (or ``I (x) <k|``)."""
    d1, d2 = dims
    if traced == 0:
        kraus = [np.kron(np.eye(d1)[[k]], np.eye(d2)) for k in range(d1)]
        return KrausChannel(tuple(kraus), d1 * d2, d2)
    kraus = [np.kron(np.eye(d1), np.eye(d2)[[k]]) for k in range(d2)]
    return KrausChannel(tuple(kraus), d1 * d2, d1)


def append_channel(sigma, in_dim: int) -> KrausChannel:
    """``rho -> rho (x) sigma`` for a fixed density ``sigma``."""
    sigma = linalg.density(sigma)
    w, U = np.linalg.eigh(sigma)
    kraus = tuple(
        np.kron(np.eye(in_dim), np.sqrt(w[i]) * U[:, [i]]) for i in range(len(w)) if w[i] > 0
    )
    return KrausChannel(kraus, in_dim, in_dim * sigma.shape[0])


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


# Random objects ----------------------------------------------------------


def random_channel(in_dim: int, out_dim: int, m: int, seed=0) -> KrausChannel:
    return KrausChannel(tuple(sampling.random_kraus(in_dim, out_dim, m, seed)), in_dim, out_dim)


def random_povm(dim: int, n_outcomes: int, seed=0) -> Povm:
    return Povm(tuple(sampling.random_povm_elements(dim, n_outcomes, seed)))


def random_ensemble(dim: int, n: int, seed=0) -> Ensemble:
    gen = sampling.rng(seed)
    weights = sampling.random_weights(n, gen)
    states = [sampling.random_density(dim, gen) for _ in range(n)]
    return Ensemble(tuple(weights), tuple(states))
