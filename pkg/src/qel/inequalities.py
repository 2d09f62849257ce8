"""Verifiers for the entropy and trace inequalities.

Each ``check_*`` function evaluates both sides of an inequality ``lhs <= rhs``
and returns a :class:`~qel.reports.VerdictReport`.  The ``*_probe`` functions
test the concavity statements behind the proofs numerically at given points.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
import scipy.integrate
import scipy.linalg

from . import linalg
from .channels import KrausChannel, apply
from .entropy import INFINITE, relative_entropy, von_neumann_entropy as S
from .equality import (
    jc_equality_residual,
    mono_equality_residual,
    mpt_equality_residual,
    ssa_equality_residual,
)
from .errors import DefectiveMatrix, InvariantError, ShapeMismatch, SingularState
from .reports import VerdictReport, default_tolerance
from .tensor import MultipartiteState, embed, kron, permute_subsystems

EQUALITY_TOL = 1e-8
HERGLOTZ_TOL = 1e-10
SECOND_DIFF_TOL = 1e-6
HERGLOTZ_SCALES = (0.1, 1.0, 10.0)
HERGLOTZ_POINTS = (0.1j, 1j, 1 + 1j, -1 + 1j)
SECOND_DIFF_STEPS = (1e-3, 1e-4)
LIEB_UMAX_FACTOR = 1e6
LIEB_QUAD_RTOL = 1e-6


def _tol(tol, dim):
    return default_tolerance(dim) if tol is None else tol


def _need(s: MultipartiteState, n: int) -> None:
    if s.n != n:
        raise ShapeMismatch(f"state with {n} subsystems required, got dims {s.dims}")


def _optional_residual(fn, *args):
    try:
        return fn(*args).residual
    except SingularState:
        return None


# Entropy inequalities --------------------------------------------------------


def check_subadditivity(s: MultipartiteState, tol=None) -> VerdictReport:
    """``S(rho_12) <= S(rho_1) + S(rho_2)``; equality iff product state."""
    _need(s, 2)
    rho1, rho2 = s.reduced([0]), s.reduced([1])
    dist = linalg.fro(s.rho - kron(rho1, rho2))
    report = VerdictReport.compare(
        "subadditivity", S(s.rho), S(rho1) + S(rho2), _tol(tol, s.dim),
        residuals={"product_distance": dist}, meta={"dims": list(s.dims)},
    )
    report.equality = dist <= EQUALITY_TOL
    return report


def check_triangle(s: MultipartiteState, tol=None) -> VerdictReport:
    """``|S(rho_1) - S(rho_2)| <= S(rho_12)``."""
    _need(s, 2)
    return VerdictReport.compare(
        "triangle", abs(S(s.reduced([0])) - S(s.reduced([1]))), S(s.rho),
        _tol(tol, s.dim), EQUALITY_TOL, meta={"dims": list(s.dims)},
    )


def check_araki_lieb(s: MultipartiteState, tol=None) -> VerdictReport:
    """``S(rho_123) <= S(rho_12) + S(rho_23)`` for a normalized state."""
    _need(s, 3)
    return VerdictReport.compare(
        "araki-lieb", S(s.rho), S(s.reduced([0, 1])) + S(s.reduced([1, 2])),
        _tol(tol, s.dim), EQUALITY_TOL, meta={"dims": list(s.dims)},
    )


def check_ssa(s: MultipartiteState, tol=None) -> VerdictReport:
    """Strong subadditivity ``S(rho_123) + S(rho_2) <= S(rho_12) + S(rho_23)``.

    When ``rho_123`` is strictly positive the report also carries the
    residual of the equality condition under ``residuals["ssa_equality"]``.
    """
    _need(s, 3)
    lhs = S(s.rho) + S(s.reduced([1]))
    rhs = S(s.reduced([0, 1])) + S(s.reduced([1, 2]))
    residuals = {}
    res = _optional_residual(ssa_equality_residual, s)
    if res is not None:
        residuals["ssa_equality"] = res
    return VerdictReport.compare(
        "ssa", lhs, rhs, _tol(tol, s.dim), EQUALITY_TOL,
        residuals=residuals, meta={"dims": list(s.dims)},
    )


def check_ssa_purified(s: MultipartiteState, tol=None) -> VerdictReport:
    """``S(rho_4) + S(rho_2) <= S(rho_12) + S(rho_14)`` on a state whose
    factors are labelled 1, 2, 4 (positions 0, 1, 2)."""
    _need(s, 3)
    lhs = S(s.reduced([2])) + S(s.reduced([1]))
    rhs = S(s.reduced([0, 1])) + S(s.reduced([0, 2]))
    return VerdictReport.compare(
        "ssa-purified", lhs, rhs, _tol(tol, s.dim), EQUALITY_TOL, meta={"dims": list(s.dims)}
    )


def ssa_as_mpt(s: MultipartiteState) -> tuple[MultipartiteState, MultipartiteState]:
    """Recast SSA on ``rho_123`` as monotonicity under tracing out factor 3.

    Returns ``(rho, gamma)`` on dims ``(d3, d1 d2)`` with ``rho = rho_123`` and
    ``gamma = (I_1 / d1) (x) rho_23``, both reordered so the traced factor
    comes first.  The MPT gap of this pair equals the SSA gap of ``s``.
    """
    _need(s, 3)
    d1, d2, d3 = s.dims
    gamma = MultipartiteState(kron(np.eye(d1) / d1, s.reduced([1, 2])), s.dims)
    rho_p = permute_subsystems(s, [2, 0, 1])
    gamma_p = permute_subsystems(gamma, [2, 0, 1])
    return (
        MultipartiteState(rho_p.rho, (d3, d1 * d2)),
        MultipartiteState(gamma_p.rho, (d3, d1 * d2)),
    )


# Relative entropy ------------------------------------------------------------


def check_mpt(rho12: MultipartiteState, gamma12: MultipartiteState, tol=None) -> VerdictReport:
    """``H(rho_2, gamma_2) <= H(rho_12, gamma_12)``, tracing out factor 1."""
    _need(rho12, 2)
    if rho12.dims != gamma12.dims:
        raise ShapeMismatch(f"dims differ: {rho12.dims} vs {gamma12.dims}")
    lhs = relative_entropy(rho12.reduced([1]), gamma12.reduced([1]))
    rhs = relative_entropy(rho12.rho, gamma12.rho)
    residuals = {}
    res = _optional_residual(mpt_equality_residual, rho12, gamma12)
    if res is not None:
        residuals["mpt_equality"] = res
    return VerdictReport.compare(
        "mpt", lhs, rhs, _tol(tol, rho12.dim), EQUALITY_TOL,
        residuals=residuals, meta={"dims": list(rho12.dims)},
    )


def check_joint_convexity(components, tol=None) -> VerdictReport:
    """``H(sum l_k rho_k, sum l_k gamma_k) <= sum l_k H(rho_k, gamma_k)``.

    ``components`` is a sequence of ``(lambda_k, rho_k, gamma_k)``.
    """
    lam = np.array([c[0] for c in components], dtype=float)
    if np.any(lam <= 0) or abs(lam.sum() - 1.0) > 1e-10:
        raise InvariantError(f"weights must be positive and sum to 1: {lam}")
    rhos = [linalg.density(c[1]) for c in components]
    gammas = [linalg.density(c[2]) for c in components]
    lhs = relative_entropy(sum(l * r for l, r in zip(lam, rhos)), sum(l * g for l, g in zip(lam, gammas)))
    terms = [relative_entropy(r, g) for r, g in zip(rhos, gammas)]
    rhs = INFINITE if any(t is INFINITE for t in terms) else float(np.dot(lam, terms))
    residuals = {}
    res = _optional_residual(jc_equality_residual, list(zip(lam, rhos, gammas)))
    if res is not None:
        residuals["jc_equality"] = res
    dim = rhos[0].shape[0]
    return VerdictReport.compare(
        "joint-convexity", lhs, rhs, _tol(tol, dim), EQUALITY_TOL,
        residuals=residuals, meta={"components": len(lam)},
    )


def check_monotonicity(phi: KrausChannel, rho, gamma, tol=None) -> VerdictReport:
    """``H(Phi(rho), Phi(gamma)) <= H(rho, gamma)``."""
    rho = linalg.density(rho)
    gamma = linalg.density(gamma)
    lhs = relative_entropy(apply(phi, rho), apply(phi, gamma))
    rhs = relative_entropy(rho, gamma)
    residuals = {}
    res = _optional_residual(mono_equality_residual, phi, rho, gamma)
    if res is not None:
        residuals["mono_equality"] = res
    return VerdictReport.compare(
        "monotonicity", lhs, rhs, _tol(tol, max(phi.in_dim, phi.out_dim)), EQUALITY_TOL,
        residuals=residuals, meta={"in_dim": phi.in_dim, "out_dim": phi.out_dim, "kraus": phi.m},
    )


def check_klein(A, B, tol=None) -> VerdictReport:
    """Klein: ``Tr(A - B) <= Tr A (log A - log B)``."""
    A = linalg.hermitian(A)
    B = linalg.hermitian(B)
    rhs = relative_entropy(A, B)
    return VerdictReport.compare(
        "klein", float(np.trace(A - B).real), rhs, _tol(tol, A.shape[0]), EQUALITY_TOL,
        residuals={"distance": linalg.fro(A - B)},
    )


# Trace inequalities ----------------------------------------------------------


def golden_thompson_gap(A, B, tol=None) -> VerdictReport:
    """``Tr e^{A+B} <= Tr e^A e^B``; equality iff ``[A, B] = 0``."""
    A = linalg.hermitian(A)
    B = linalg.hermitian(B)
    lhs = float(np.trace(linalg.expm(A + B)).real)
    rhs = float(np.trace(linalg.expm(A) @ linalg.expm(B)).real)
    return VerdictReport.compare(
        "golden-thompson", lhs, rhs, _tol(tol, A.shape[0]), EQUALITY_TOL,
        residuals={"commutator": linalg.fro(linalg.commutator(A, B))},
    )


def lieb_triple_rhs(R, S_, T) -> float:
    """``Tr int_0^inf R (S+u)^{-1} T (S+u)^{-1} du`` in closed form.

    In the eigenbasis of ``S`` the integral is a Hadamard product with the
    log divided-difference kernel.
    """
    spec = linalg.eig_hermitian(S_)
    linalg.require_positive(spec)
    U = spec.eigenvectors
    Rp = linalg.dagger(U) @ R @ U
    Tp = linalg.dagger(U) @ T @ U
    s = spec.eigenvalues
    k = linalg.log_divided_difference(s[:, None], s[None, :])
    return float(np.real(np.sum(Rp.T * Tp * k)))


def lieb_triple_quadrature(R, S_, T, umax_factor: float = LIEB_UMAX_FACTOR) -> tuple[float, float]:
    """Adaptive quadrature of the same integral, truncated at
    ``u_max = umax_factor * lambda_max(S)``.

    Returns ``(value, tail_bound)``; the value includes the leading tail term
    ``Tr(RT) / u_max`` and ``tail_bound = Tr R Tr T / u_max``.
    """
    R = np.asarray(R)
    T = np.asarray(T)
    S_ = np.asarray(S_)
    d = S_.shape[0]
    eye = np.eye(d)
    w = np.linalg.eigvalsh(S_)
    umax = umax_factor * w[-1]

    def integrand(u):
        X = np.linalg.inv(S_ + u * eye)
        return float(np.real(np.trace(R @ X @ T @ X)))

    # geometric breakpoints resolve the region u ~ spectrum of S
    points = [p for p in w[0] * np.logspace(-1, 8, 19) if 0 < p < umax]
    value, _ = scipy.integrate.quad(
        integrand, 0.0, umax, points=points, limit=400, epsabs=1e-14, epsrel=1e-11
    )
    tail = float(np.real(np.trace(R @ T))) / umax
    bound = float(np.real(np.trace(R)) * np.real(np.trace(T))) / umax
    return value + tail, bound


def lieb_triple_gap(R, S_, T, tol=None, quadrature: bool = True) -> VerdictReport:
    """Lieb's ``Tr e^{log R - log S + log T} <= Tr int R (S+u)^-1 T (S+u)^-1 du``
    for strictly positive ``R, S, T``."""
    specs = []
    for M in (R, S_, T):
        spec = linalg.eig_hermitian(M)
        linalg.require_positive(spec)
        specs.append(spec)
    R, S_, T = (linalg.hermitian(M) for M in (R, S_, T))
    logs = [sp.reconstruct(np.log(sp.eigenvalues)) for sp in specs]
    lhs = float(np.trace(linalg.expm(logs[0] - logs[1] + logs[2])).real)
    rhs = lieb_triple_rhs(R, S_, T)
    residuals = {}
    if quadrature:
        quad, tail = lieb_triple_quadrature(R, S_, T)
        residuals["quadrature"] = quad
        residuals["quadrature_rel_diff"] = abs(quad - rhs) / abs(rhs)
        residuals["tail_bound"] = tail
    report = VerdictReport.compare(
        "lieb-triple", lhs, rhs, _tol(tol, R.shape[0]), residuals=residuals
    )
    if quadrature and residuals["quadrature_rel_diff"] > LIEB_QUAD_RTOL:
        report.holds = False
        report.meta["quadrature_mismatch"] = True
    return report


def exp_log_trace(K, A) -> float:
    """``F(A) = Tr e^{K + log A}`` for ``A > 0``."""
    return float(np.trace(linalg.expm(linalg.hermitian(K) + linalg.logm_strict(A))).real)


def exp_log_concavity_probe(K, A1, A2, lam: float, tol=None) -> VerdictReport:
    """``lam F(A1) + (1-lam) F(A2) <= F(lam A1 + (1-lam) A2)``."""
    lhs = lam * exp_log_trace(K, A1) + (1 - lam) * exp_log_trace(K, A2)
    rhs = exp_log_trace(K, lam * np.asarray(A1) + (1 - lam) * np.asarray(A2))
    return VerdictReport.compare(
        "exp-log-concavity", lhs, rhs, _tol(tol, np.shape(K)[0]), EQUALITY_TOL, meta={"lambda": lam}
    )


def wyd_value(A, B, K, s: float) -> float:
    """``Tr A^s K^dagger B^{1-s} K``."""
    K = np.asarray(K)
    return float(np.trace(linalg.powm(A, s) @ K.conj().T @ linalg.powm(B, 1 - s) @ K).real)


def wyd_concavity_probe(A1, B1, A2, B2, K, s: float, lam: float, tol=None) -> VerdictReport:
    """Joint concavity of ``(A, B) -> Tr A^s K^dagger B^{1-s} K``."""
    lhs = lam * wyd_value(A1, B1, K, s) + (1 - lam) * wyd_value(A2, B2, K, s)
    A = lam * np.asarray(A1) + (1 - lam) * np.asarray(A2)
    B = lam * np.asarray(B1) + (1 - lam) * np.asarray(B2)
    rhs = wyd_value(A, B, K, s)
    return VerdictReport.compare(
        "wyd-concavity", lhs, rhs, _tol(tol, np.shape(K)[0]), EQUALITY_TOL,
        residuals={"value": rhs}, meta={"s": s, "lambda": lam},
    )


def default_x_list(start: float = 0.1, n: int = 10) -> list[float]:
    return [start / 2**k for k in range(n)]


def homogeneous_directional_probe(K, A, B, x_list: Sequence[float] | None = None, tol=None) -> VerdictReport:
    """``F(B) <= lim_{x->0} (F(A + xB) - F(A)) / x`` for ``F = Tr e^{K + log .}``.

    The difference quotients at the (decreasing) ``x_list`` must increase as
    ``x`` shrinks; the limit is estimated by linear Richardson extrapolation
    of the last two quotients.
    """
    xs = list(default_x_list() if x_list is None else x_list)
    if len(xs) < 2 or any(b >= a for a, b in zip(xs, xs[1:])):
        raise InvariantError("x_list must hold at least two strictly decreasing steps")
    A = np.asarray(A)
    B = np.asarray(B)
    tol = _tol(tol, A.shape[0])
    f0 = exp_log_trace(K, A)
    q = np.array([(exp_log_trace(K, A + x * B) - f0) / x for x in xs])
    x1, x2 = xs[-2], xs[-1]
    limit = (x1 * q[-1] - x2 * q[-2]) / (x1 - x2)
    backslide = float(np.max(np.maximum(q[:-1] - q[1:], 0.0)))
    report = VerdictReport.compare(
        "directional-derivative", exp_log_trace(K, B), limit, tol, EQUALITY_TOL,
        residuals={"monotone_violation": backslide, "quotients": q.tolist()},
        meta={"x_list": xs},
    )
    if backslide > tol:
        report.holds = False
    return report


def default_z_grid() -> list[complex]:
    return [c * z for c in HERGLOTZ_SCALES for z in HERGLOTZ_POINTS]


def herglotz_value(K, A, B, z: complex) -> complex:
    """``g(z) = Tr e^{K + log(zA + B)}`` with the principal-branch log of the
    (non-Hermitian) matrix ``zA + B``."""
    M = z * np.asarray(A) + np.asarray(B)
    L = linalg.funm_nonhermitian(M, np.log)
    return complex(np.trace(scipy.linalg.expm(np.asarray(K) + L)))


def epstein_herglotz_probe(K, A, B, z_samples: Sequence[complex] | None = None,
                           tol: float = HERGLOTZ_TOL) -> VerdictReport:
    """``Im g(z) > 0`` on samples in the upper half plane.

    Samples where ``zA + B`` has an eigenvalue on the closed negative real
    axis, or is numerically defective, are skipped and listed in ``meta``.
    """
    zs = default_z_grid() if z_samples is None else list(z_samples)
    K = linalg.hermitian(K)
    A = linalg.hermitian(A)
    linalg.require_positive(linalg.eig_hermitian(A))
    B = linalg.hermitian(B)
    retained, skipped = [], []
    for z in zs:
        z = complex(z)
        if z.imag <= 0:
            raise InvariantError(f"sample {z} is not in the upper half plane")
        ev = np.linalg.eigvals(z * A + B)
        if np.any((np.abs(ev.imag) <= 1e-14 * np.abs(ev)) & (ev.real <= 0)):
            skipped.append({"z": z, "reason": "branch cut"})
            continue
        try:
            g = herglotz_value(K, A, B, z)
        except DefectiveMatrix as exc:
            skipped.append({"z": z, "reason": str(exc)})
            continue
        retained.append({"z": z, "im_g": g.imag})
    worst = min((r["im_g"] for r in retained), default=math.inf)
    report = VerdictReport.compare(
        "herglotz", 0.0, worst, tol,
        residuals={"retained": len(retained), "skipped": len(skipped)},
        meta={"samples": retained, "skipped": skipped},
    )
    report.holds = report.holds and worst > -tol
    return report


def epstein_second_derivative_probe(K, A, B, steps: Sequence[float] = SECOND_DIFF_STEPS,
                                    tol: float = SECOND_DIFF_TOL) -> VerdictReport:
    """Central second difference of ``f(x) = Tr e^{K + log(A + xB)}`` at 0
    must be non-positive up to ``tol``."""
    A = np.asarray(A)
    B = np.asarray(B)

    def f(x):
        return exp_log_trace(K, A + x * B)

    f0 = f(0.0)
    est = {f"{h:g}": (f(h) - 2 * f0 + f(-h)) / h**2 for h in steps}
    worst = max(est.values())
    return VerdictReport.compare("second-derivative", worst, 0.0, tol, residuals=est)


def log_increment_residual(S_, T) -> float:
    """Distance between ``log(S + T) - log S`` computed directly and through
    the divided-difference (Frechet) construction; ``O(|T|^2)`` for small T."""
    direct = linalg.logm_strict(np.asarray(S_) + np.asarray(T)) - linalg.logm_strict(S_)
    return linalg.fro(direct - linalg.log_frechet(S_, T))


def lieb_equality_example(rho1, rho23, dims) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``R = rho1 (x) rho2 (x) I``, ``S = I (x) rho2 (x) I``, ``T = I (x) rho23``,
    for which both sides of Lieb's inequality equal ``Tr rho1 (x) rho23``."""
    d1, d2, d3 = dims
    rho23 = np.asarray(rho23)
    rho2 = np.einsum("aibi->ab", rho23.reshape(d2, d3, d2, d3))
    R = kron(rho1, rho2, np.eye(d3))
    S_ = embed(rho2, dims, [1])
    T = kron(np.eye(d1), rho23)
    return R, S_, T
