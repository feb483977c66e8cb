"""Retractions onto subspaces and the intersection-lemma verification.

A retraction is a linear T with T z = z on a subspace H0 = span(Z) that
is bounded on both legs of a norm pair (H, D). Its two measured bounds
give C = max(h_bound, d_bound), and for every u in H0 and t > 0 the
optimal ambient decomposition u = f + g transported by T yields

    K0(u, t)^2 <= |Tf|_H^2 + t^2 |Tg|_D^2 <= 2 C^2 K(u, t)^2,

alongside the free inequality K <= K0 (the subspace admits fewer
decompositions). Integrated, the subspace interpolation norm is
equivalent to the ambient one within [1, sqrt(2) C].

Bounds are measured as exact operator norms of the assembled discrete
maps (Cholesky similarity then largest singular value), not estimated
from probes, so the inequality chain above holds deterministically.

Two concrete retractions: the harmonic lift (solve the zero-boundary
Dirichlet problem with the same interior second differences) and the
divergence-free retraction T = Z Ac^-1 Z^T A built from a staggered-grid
Stokes system (Ac the constrained operator).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import (
    DimensionMismatch,
    InvalidConfig,
    RetractionIdentityViolated,
    SingularConstrainedOperator,
    SolverFailure,
)
from .kfunctional import (
    QuadraticPair,
    QuadratureRule,
    _interp_norm_sq_spectral,
    congruence,
)
from .operators import (
    GridDomain,
    SobolevGrams,
    StokesSystem,
    interior_indices,
    zero_boundary_basis,
)
from .reporting import make_report
from .spectral import SpectralModel

IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class Retraction:
    """Linear map with T|span(Z) = identity and measured pair bounds."""

    map: np.ndarray
    subspace_basis: np.ndarray
    h_bound: float
    d_bound: float


def gram_operator_norm(T: np.ndarray, gram: np.ndarray) -> float:
    """Operator norm of T in the norm |u| = sqrt(u^T gram u).

    Equals the largest singular value of L^T T L^-T for gram = L L^T.
    """
    L = linalg.cholesky(gram, lower=True)
    E = L.T @ T
    N = linalg.solve_triangular(L, E.T, lower=True).T
    return float(np.linalg.norm(N, 2))


def _check_identity(T: np.ndarray, Z: np.ndarray) -> None:
    resid = float(np.linalg.norm(T @ Z - Z, 2))
    if resid > IDENTITY_TOL:
        raise RetractionIdentityViolated(
            f"retraction deviates from the identity on the subspace: {resid:.3e}"
        )


def _build_retraction(T, Z, h_bound, d_bound) -> Retraction:
    _check_identity(T, Z)
    T = np.asarray(T, dtype=np.float64)
    T.setflags(write=False)
    return Retraction(map=T, subspace_basis=Z, h_bound=h_bound, d_bound=d_bound)


# ---- harmonic lift


def _stiffness_solver(grams: SobolevGrams, idx: np.ndarray):
    S = grams.g1 - grams.g0
    try:
        factor = linalg.cho_factor(S[np.ix_(idx, idx)], lower=True)
    except linalg.LinAlgError as exc:
        raise SolverFailure("interior stiffness failed to factorize") from exc
    return S, factor


def harmonic_lift(domain: GridDomain, grams: SobolevGrams, u) -> np.ndarray:
    """Zero-boundary solution of the interior equation of u.

    w has zero boundary values and the same interior second differences
    as u (interior rows of the stiffness agree), so w = u whenever u
    already vanishes on the boundary, and the gradient energy of w never
    exceeds that of u.
    """
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.shape[0] != grams.g0.shape[0]:
        raise DimensionMismatch(
            f"grid function length {u.shape[0]} != {grams.g0.shape[0]}"
        )
    idx = interior_indices(domain)
    S, factor = _stiffness_solver(grams, idx)
    w = np.zeros_like(u)
    w[idx] = linalg.cho_solve(factor, S[idx, :] @ u)
    return w


def harmonic_retraction(domain: GridDomain, grams: SobolevGrams) -> Retraction:
    """The harmonic lift as a retraction for the pair (g1, g2)."""
    idx = interior_indices(domain)
    S, factor = _stiffness_solver(grams, idx)
    m = grams.g0.shape[0]
    T = np.zeros((m, m))
    T[idx, :] = linalg.cho_solve(factor, S[idx, :])
    Z = zero_boundary_basis(domain)
    return _build_retraction(
        T, Z, gram_operator_norm(T, grams.g1), gram_operator_norm(T, grams.g2)
    )


# ---- divergence-free retraction


def stokes_retraction(sys: StokesSystem, model_a: SpectralModel) -> Retraction:
    """T = Z Ac^-1 Z^T A on velocity unknowns; identity on ker(divergence).

    model_a must be the spectral model of the ambient vector Laplacian A
    (same unknown layout); it pins the D-norm |f|_D = |A f|. The bounds
    are exact operator norms: h_bound = |T|_2 and
    d_bound = |A T A^-1|_2 = |A Z Ac^-1 Z^T|_2.
    """
    A = sys.vector_laplacian
    Z = sys.nullbasis
    if model_a.ambient_dim != A.shape[0] or model_a.dim != A.shape[0]:
        raise DimensionMismatch("ambient model does not match the velocity layout")
    recon = model_a.basis @ (model_a.eigenvalues[:, None] * model_a.basis.T)
    if np.max(np.abs(recon - A)) > 1e-8 * max(1.0, np.max(np.abs(A))):
        raise DimensionMismatch("ambient model does not reproduce the vector Laplacian")
    try:
        factor = linalg.cho_factor(sys.constrained_op, lower=True)
    except linalg.LinAlgError as exc:
        raise SingularConstrainedOperator(
            "constrained operator failed to factorize"
        ) from exc
    T = Z @ linalg.cho_solve(factor, Z.T @ A)
    d_map = A @ Z @ linalg.cho_solve(factor, Z.T)
    return _build_retraction(
        T, Z, float(np.linalg.norm(T, 2)), float(np.linalg.norm(d_map, 2))
    )


# ---- probe vectors


def subspace_probes(m1, m2, Z, n_random=20, n_eig=5, seed=42) -> list:
    """Probe family in span(Z): n_random decaying random vectors followed
    by the n_eig lowest constrained pencil eigenvectors.

    The pencil is (Z^T m2 Z, Z^T m1 Z); random probes decay like
    j^(-1.5) against its modes so they lie (numerically) in every
    intermediate space; low modes stress the large-t regime.
    """
    M1r = Z.T @ m1 @ Z
    M2r = Z.T @ m2 @ Z
    mu, V = linalg.eigh(M2r, M1r)
    del mu
    r = V.shape[1]
    rng = np.random.default_rng(seed)
    decay = np.arange(1, r + 1, dtype=np.float64) ** -1.5
    probes = []
    for _ in range(n_random):
        coeffs = decay * rng.uniform(-1.0, 1.0, size=r)
        probes.append(Z @ (V @ coeffs))
    for i in range(n_eig):
        probes.append(Z @ V[:, i])
    return probes


# ---- the intersection-lemma verification


def verify_intersection_lemma(
    pair_ambient: QuadraticPair,
    Z: np.ndarray,
    T: Retraction,
    theta_list,
    probe_vectors,
    rule: QuadratureRule,
    lemma_label: str = "Lemma 4.3",
    grid_label: str = "",
    experiment_name: str = "intersection",
    t_points: int = 65,
    seed: int | None = None,
    cfg_hash: str = "",
):
    """Pointwise and integrated checks of the retraction inequality chain.

    For each probe u in span(Z) and each t on the log-spaced grid
    spanning the rule's window: form the ambient optimal decomposition
    u = f + g, transport it, and check

        K <= K0,   K0^2 <= |Tf|_H^2 + t^2 |Tg|_D^2 <= 2 C^2 K^2,

    with C = max(h_bound, d_bound). Per theta, compare the subspace and
    ambient interpolation norms: the ratio must land in
    [1, sqrt(2) * max(C, h_bound)]. Cells carry a relative slack of 1e-9
    (pointwise) / 1e-5 (integrated) for rounding.
    """
    if pair_ambient.subspace_basis is not None:
        raise InvalidConfig("pass the ambient pair; the subspace enters through Z")
    M1, M2 = pair_ambient.m1, pair_ambient.m2
    Tm = T.map
    _check_identity(Tm, Z)
    C = max(T.h_bound, T.d_bound)
    c_prime = math.sqrt(2.0) * max(C, T.h_bound)
    M1r = Z.T @ M1 @ Z
    M2r = Z.T @ M2 @ Z
    coords = [Z.T @ np.asarray(u, dtype=np.float64) for u in probe_vectors]

    cells = []
    slack = 1.0 + 1e-9
    taus = np.linspace(rule.log_t_min, rule.log_t_max, t_points)
    for tau in taus:
        t = math.exp(tau)
        t2 = t * t
        try:
            amb = linalg.cho_factor(M1 + t2 * M2, lower=True)
            red = linalg.cho_factor(M1r + t2 * M2r, lower=True)
        except linalg.LinAlgError as exc:
            raise SolverFailure(f"minimizer factorization failed at t={t}") from exc
        for p, (u, c) in enumerate(zip(probe_vectors, coords)):
            g = linalg.cho_solve(amb, M1 @ u)
            f = u - g
            k2 = float(f @ (M1 @ f) + t2 * (g @ (M2 @ g)))
            gr = linalg.cho_solve(red, M1r @ c)
            fr = c - gr
            k02 = float(fr @ (M1r @ fr) + t2 * (gr @ (M2r @ gr)))
            tf = Tm @ f
            tg = Tm @ g
            mid = float(tf @ (M1 @ tf) + t2 * (tg @ (M2 @ tg)))
            r1 = math.sqrt(k2 / k02)
            r2 = k02 / mid
            r3 = mid / (2.0 * C * C * k2)
            worst = max(r1, r2, r3)
            cells.append(
                {
                    "lemma": lemma_label,
                    "grid": grid_label,
                    "check": "pointwise",
                    "theta": None,
                    "t": t,
                    "probe": p,
                    "ratio": worst,
                    "bound": 1.0,
                    "pass": bool(worst <= slack),
                }
            )

    # integrated comparison via one congruence per pair
    lam_amb, _, w_amb = congruence(pair_ambient)
    lam_red, _, w_red = congruence(QuadraticPair(M1r, M2r, None))
    for theta in theta_list:
        theta = float(theta)
        for p, (u, c) in enumerate(zip(probe_vectors, coords)):
            n_amb = math.sqrt(
                max(_interp_norm_sq_spectral(lam_amb, w_amb @ u, theta, rule), 0.0)
            )
            n_red = math.sqrt(
                max(_interp_norm_sq_spectral(lam_red, w_red @ c, theta, rule), 0.0)
            )
            ratio = n_red / n_amb
            ok = (1.0 - 1e-5) <= ratio <= c_prime * (1.0 + 1e-5)
            cells.append(
                {
                    "lemma": lemma_label,
                    "grid": grid_label,
                    "check": "interp-ratio",
                    "theta": theta,
                    "t": None,
                    "probe": p,
                    "ratio": ratio,
                    "bound": c_prime,
                    "pass": bool(ok),
                }
            )

    parameters = {
        "lemma": lemma_label,
        "grid": grid_label,
        "n_probes": len(probe_vectors),
        "t_points": t_points,
        "thetas": [float(th) for th in theta_list],
        "log_t_min": rule.log_t_min,
        "log_t_max": rule.log_t_max,
        "h_bound": T.h_bound,
        "d_bound": T.d_bound,
        "c_measured": C,
        "c_prime": c_prime,
    }
    return make_report(experiment_name, parameters, cells, seed=seed, cfg_hash=cfg_hash)
