"""Accessible information, the Holevo quantity and Hall's bound."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import linalg, sampling
from .channels import Ensemble, Povm, apply, qc_channel
from .entropy import (
    INFINITE,
    PROB_DROP,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy as S,
)
from .equality import DEFAULT_T_GRID, EQ_TOL
from .errors import DimMismatch, EnsembleMismatch, NotCommuting, ZeroOutcomeProbability
from .reports import InfoReport, ResidualReport, VerdictReport

COMMUTE_TOL = 1e-10
DIAG_TOL = 1e-8
HOLEVO_TOL = 1e-9


def _check_dims(E: Ensemble, M: Povm) -> None:
    if E.dim != M.dim:
        raise DimMismatch(f"ensemble on dimension {E.dim}, POVM on {M.dim}")


def _outcome_distribution(M: Povm, rho) -> np.ndarray:
    p = np.clip(M.probabilities(rho), 0.0, None)
    return p / p.sum()


def holevo_chi_forms(E: Ensemble) -> tuple[float, float]:
    """``S(rho) - sum pi_j S(rho_j)`` and ``sum pi_j H(rho_j, rho)``."""
    avg = E.average()
    entropy_form = S(avg) - sum(p * S(r) for p, r in zip(E.weights, E.states))
    rel_form = sum(p * relative_entropy(r, avg) for p, r in zip(E.weights, E.states))
    return entropy_form, rel_form


def holevo_chi(E: Ensemble) -> float:
    return holevo_chi_forms(E)[0]


def accessible_info(E: Ensemble, M: Povm) -> float:
    """Mutual information between the ensemble label and the outcome of ``M``."""
    _check_dims(E, M)
    total = shannon_entropy(_outcome_distribution(M, E.average()))
    return total - sum(
        p * shannon_entropy(_outcome_distribution(M, r)) for p, r in zip(E.weights, E.states)
    )


def commutes(E: Ensemble, tol: float = COMMUTE_TOL) -> tuple[bool, float]:
    """Whether all ensemble states commute, with the largest pairwise
    Frobenius norm of a commutator."""
    worst = 0.0
    for j, a in enumerate(E.states):
        for b in E.states[j + 1:]:
            worst = max(worst, linalg.fro(linalg.commutator(a, b)))
    return worst <= tol, worst


def _diagonalizes(U: np.ndarray, states) -> bool:
    for r in states:
        D = linalg.dagger(U) @ r @ U
        if linalg.fro(D - np.diag(np.diag(D))) > DIAG_TOL:
            return False
    return True


def _common_eigenbasis(states, tol: float = DIAG_TOL) -> np.ndarray:
    """Refine the whole space into joint eigenspaces, one state at a time."""
    d = states[0].shape[0]
    blocks = [np.eye(d, dtype=complex)]
    for r in states:
        refined = []
        for Q in blocks:
            w, W = np.linalg.eigh(linalg.dagger(Q) @ r @ Q)
            start = 0
            for i in range(1, len(w) + 1):
                if i == len(w) or w[i] - w[i - 1] > tol:
                    refined.append(Q @ W[:, start:i])
                    start = i
        blocks = refined
    return np.hstack(blocks)


def spectral_measurement_for_commuting(E: Ensemble, seed=0, attempts: int = 3) -> Povm:
    """Rank-one projectors onto a basis that diagonalizes every state."""
    ok, worst = commutes(E)
    if not ok:
        raise NotCommuting(f"largest commutator norm {worst:.3e} exceeds {COMMUTE_TOL:.0e}")
    gen = sampling.rng(seed)
    U = None
    for _ in range(attempts):
        c = gen.standard_normal(len(E))
        _, cand = np.linalg.eigh(sum(ci * r for ci, r in zip(c, E.states)))
        if _diagonalizes(cand, E.states):
            U = cand
            break
    if U is None:
        U = _common_eigenbasis(E.states)
    projectors = [np.outer(U[:, i], U[:, i].conj()) for i in range(U.shape[1])]
    # absorb rounding so the elements sum to I within the POVM tolerance
    total = sum(projectors)
    fix = linalg.matrix_function(total, lambda w: w**-0.5)
    return Povm(tuple(fix @ P @ fix for P in projectors))


def holevo_equality_residual(E: Ensemble, M: Povm, tol: float = EQ_TOL) -> ResidualReport:
    """Defect in ``log rho_j - log rho = sum_b E_b log(Tr E_b rho_j / Tr E_b rho)``.

    Both sides are compressed to the support of ``rho_j`` (``P_j X P_j``),
    and outcomes with ``Tr E_b rho_j = 0`` drop out of the sum.  Components:

    ``trace_condition``
        ``max |Tr E_b P Z_j P - Tr(P E_b P) z_bj|`` over retained outcomes.
    ``projector_condition``
        ``max_j |Z_j - sum_b E_b <E_b, Z_j> / Tr E_b|_F``.
    """
    _check_dims(E, M)
    avg = E.average()
    p = M.probabilities(avg)
    if np.any(p <= PROB_DROP):
        raise ZeroOutcomeProbability(f"outcome(s) {np.nonzero(p <= PROB_DROP)[0].tolist()} have zero probability")
    log_avg = linalg.logm(avg)
    per_state, trace_cond, proj_cond = [], 0.0, 0.0
    for r in E.states:
        P = linalg.support_projection(r)
        Z = P @ (linalg.logm(r) - log_avg) @ P
        pj = M.probabilities(r)
        keep = pj > PROB_DROP
        z = np.zeros(len(M))
        z[keep] = np.log(pj[keep] / p[keep])
        rhs = P @ sum(zb * Eb for zb, Eb, k in zip(z, M.elements, keep) if k) @ P
        per_state.append(linalg.fro(Z - rhs))
        for b, Eb in enumerate(M.elements):
            if keep[b]:
                lhs_b = np.vdot(Eb, Z).real
                trace_cond = max(trace_cond, abs(lhs_b - np.trace(P @ Eb @ P).real * z[b]))
        recon = sum(Eb * np.vdot(Eb, Z).real / np.trace(Eb).real for Eb in M.elements)
        proj_cond = max(proj_cond, linalg.fro(Z - recon))
    return ResidualReport.build(
        "holevo-equality", max(per_state), tol,
        per_state=per_state, trace_condition=trace_cond, projector_condition=proj_cond,
        dropped=int(sum(np.sum(M.probabilities(r) <= PROB_DROP) for r in E.states)),
    )


def hall_bound(rho, M: Povm, E: Ensemble, tol: float = HOLEVO_TOL) -> InfoReport:
    """``I(E, M) <= S(rho) - sum_b tau_b S(sqrt(rho) E_b sqrt(rho) / tau_b)``.

    Also reports the Holevo bound and the equality diagnostics: the largest
    commutator among the ``sqrt(rho) E_b sqrt(rho)``.
    """
    _check_dims(E, M)
    rho = linalg.density(rho)
    mismatch = linalg.fro(rho - E.average())
    if mismatch > 1e-10:
        raise EnsembleMismatch(f"rho differs from the ensemble average by {mismatch:.3e}")
    root = linalg.sqrtm(rho)
    tau = M.probabilities(rho)
    sandwiches, weights = [], []
    for t, Eb in zip(tau, M.elements):
        if t > PROB_DROP:
            sandwiches.append(root @ Eb @ root)
            weights.append(t)
    bound = S(rho) - sum(t * S(X / t) for t, X in zip(weights, sandwiches))
    rel_terms = [relative_entropy(X / t, rho) for t, X in zip(weights, sandwiches)]
    rel_form = INFINITE if any(x is INFINITE for x in rel_terms) else float(np.dot(weights, rel_terms))
    comm = 0.0
    for b, X in enumerate(sandwiches):
        for Y in sandwiches[b + 1:]:
            comm = max(comm, linalg.fro(linalg.commutator(X, Y)))
    info = accessible_info(E, M)
    chi, chi_rel = holevo_chi_forms(E)
    return InfoReport(
        accessible_info=info,
        chi=chi,
        hall_bound=bound,
        gaps={"holevo": chi - info, "hall": bound - info},
        equality_residuals={
            "hall_commutator": comm,
            "hall_forms": abs(bound - rel_form) if rel_form is not INFINITE else float("inf"),
            "chi_forms": abs(chi - chi_rel),
            "dropped_outcomes": len(tau) - len(weights),
        },
        tolerance=tol,
    )


def info_report(E: Ensemble, M: Povm, tol: float = HOLEVO_TOL) -> InfoReport:
    return hall_bound(E.average(), M, E, tol)


def qc_monotonicity_check(E: Ensemble, M: Povm, tol: float = HOLEVO_TOL) -> VerdictReport:
    """Per-state monotonicity of ``H(rho_j, rho)`` under the measure-and-record
    channel.  Weighted sums of the two sides recover ``I(E, M)`` and chi."""
    _check_dims(E, M)
    omega = qc_channel(M)
    avg = E.average()
    out_avg = apply(omega, avg)
    lhs_j, rhs_j = [], []
    for r in E.states:
        lhs_j.append(relative_entropy(apply(omega, r), out_avg))
        rhs_j.append(relative_entropy(r, avg))
    per_gap = [b - a for a, b in zip(lhs_j, rhs_j)]
    lhs = float(np.dot(E.weights, lhs_j))
    rhs = float(np.dot(E.weights, rhs_j))
    report = VerdictReport.compare(
        "holevo-qc-monotonicity", lhs, rhs, tol, 1e-8,
        residuals={
            "min_state_gap": min(per_gap),
            "accessible_info_mismatch": abs(lhs - accessible_info(E, M)),
            "chi_mismatch": abs(rhs - holevo_chi(E)),
        },
    )
    report.holds = report.holds and min(per_gap) >= -tol
    return report


def holevo_petz_residual(E: Ensemble, M: Povm, t_grid: Sequence[float] = DEFAULT_T_GRID,
                         tol: float = EQ_TOL) -> ResidualReport:
    """Diagnostic ``rho^{it} D^{-it} = rho_j^{it} D_j^{-it}`` where ``D`` is the
    part of a state that is diagonal in the (projective) measurement,
    ``D = sum_b E_b rho E_b``."""
    _check_dims(E, M)

    def pinch(r):
        return sum(Eb @ r @ Eb for Eb in M.elements)

    avg = E.average()
    ref = [(linalg.imaginary_power(avg, t), linalg.imaginary_power(pinch(avg), -t)) for t in t_grid]
    worst = 0.0
    for r in E.states:
        Dj = pinch(r)
        for (a, b), t in zip(ref, t_grid):
            left = a @ b
            right = linalg.imaginary_power(r, t) @ linalg.imaginary_power(Dj, -t)
            worst = max(worst, linalg.fro(left - right))
    return ResidualReport.build("holevo-petz", worst, tol)
