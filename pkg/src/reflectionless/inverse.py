r"""Half-line coefficient reconstruction from a spectral measure.

The total mass gives the coupling a_0 (mass = a_0^2).  The normalized
measure is the delta_1 spectral measure of the half-line operator on sites
>= 1; its entries (b_1, a_1, b_2, ...) are the recurrence coefficients of
the measure's orthonormal polynomials, computed by Lanczos
tridiagonalization of multiplication-by-t on the discretized measure,
started from the constant vector, with full reorthogonalization.

Indexing: the returned window is [0, N] with a = (a_0, a_1, ..., a_N) and
b = (b_0, b_1, ..., b_N).  The site-0 diagonal b_0 is NOT determined by
half-line data; it is stored as 0.0 as a documented placeholder (use
`restrict(1, N)` to drop it for window comparisons with B != 0).
"""

from __future__ import annotations

import numpy as np

from .errors import NumericError
from .measures import SpectralMeasure, moments, quadrature_discretize, total_mass
from .operators import JacobiCoefficients, Tail

__all__ = ["reconstruct_coefficients", "coefficient_deviation", "lanczos_tridiag",
           "reconstruction_report", "coefficients_csv"]


def lanczos_tridiag(support: np.ndarray, weights: np.ndarray,
                    n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Recurrence coefficients (alpha_1..alpha_n, beta_1..beta_n) of the
    probability measure sum w_i delta_{t_i}, by Lanczos with full
    reorthogonalization.  Raises on breakdown (support too small or
    clustered for the requested depth)."""
    t = np.asarray(support, dtype=float)
    w = np.asarray(weights, dtype=float)
    if t.shape != w.shape or t.ndim != 1:
        raise ValueError("support and weights must be matching 1-d arrays")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    scale = max(1.0, float(np.max(np.abs(t))))
    q = np.sqrt(w)
    nrm = np.linalg.norm(q)
    if nrm == 0:
        raise ValueError("measure has no mass")
    q = q / nrm
    basis = [q]
    alphas, betas = [], []
    q_prev = np.zeros_like(q)
    beta_prev = 0.0
    for _ in range(n_steps):
        u = t * q - beta_prev * q_prev
        alpha = float(q @ u)
        u = u - alpha * q
        qm = np.asarray(basis)
        u = u - qm.T @ (qm @ u)
        u = u - qm.T @ (qm @ u)
        alphas.append(alpha)
        beta = float(np.linalg.norm(u))
        if beta <= 1e-12 * scale:
            raise NumericError(
                f"Lanczos breakdown at step {len(alphas)}: off-diagonal {beta} "
                "(discretization too coarse for the requested depth)")
        betas.append(beta)
        q_prev, q = q, u / beta
        beta_prev = beta
        basis.append(q)
    return np.asarray(alphas), np.asarray(betas)


def reconstruct_coefficients(nu: SpectralMeasure, n_coeffs: int,
                             nodes_per_piece: int = 400,
                             max_nodes: int = 3200) -> JacobiCoefficients:
    """Recover (a_0; a_1, b_1; ...; a_N, b_N) from the half-line measure.

    a_0 = sqrt(total mass); the rest from the Lanczos recurrence of the
    normalized discretized measure.  A Lanczos breakdown triggers automatic
    node doubling up to `max_nodes` before raising; positivity is never
    silently clamped.
    """
    if n_coeffs < 0:
        raise ValueError("n_coeffs must be >= 0")
    mass = total_mass(nu)
    if mass <= 0:
        raise ValueError("measure must have positive mass")
    a0 = float(np.sqrt(mass))
    n = nodes_per_piece
    last_err: NumericError | None = None
    while True:
        disc = quadrature_discretize(nu, n)
        support = np.array([x for x, _ in disc.atoms])
        weights = np.array([m for _, m in disc.atoms]) / mass
        if len(support) < n_coeffs + 1:
            if nu.is_atomic() or n >= max_nodes:
                raise ValueError(
                    f"measure support ({len(support)} points) too small for N={n_coeffs}")
            n *= 2
            continue
        try:
            alphas, betas = lanczos_tridiag(support, weights, n_coeffs)
            break
        except NumericError as exc:
            last_err = exc
            if nu.is_atomic() or n >= max_nodes:
                raise
            n *= 2
    a = (a0,) + tuple(betas[:n_coeffs])
    b = (0.0,) + tuple(alphas[:n_coeffs])
    return JacobiCoefficients(0, n_coeffs, a, b, Tail.free())


def coefficient_deviation(coeffs: JacobiCoefficients, a_ref: float, b_ref: float,
                          window: int) -> float:
    """max over |n| <= window (within the explicit window) of
    |a_n - a_ref| + |b_n - b_ref|."""
    lo = max(coeffs.n_lo, -window)
    hi = min(coeffs.n_hi, window)
    if lo > hi:
        raise ValueError("no coefficients inside the requested window")
    return max(abs(coeffs.a(n) - a_ref) + abs(coeffs.b(n) - b_ref)
               for n in range(lo, hi + 1))


def reconstruction_report(nu: SpectralMeasure, coeffs: JacobiCoefficients) -> dict:
    """Consistency summary {a0, mass, moments_checked, max_moment_error}: the
    spectral measure of the reconstructed finite section must reproduce the
    first 2N moments of the input (relative to their size)."""
    from scipy.linalg import eigh_tridiagonal

    n = coeffs.n_hi
    mass = total_mass(nu)
    exact = moments(nu, max(2 * n - 1, 0)) / mass
    if n >= 1:
        diag = np.array([coeffs.b(k) for k in range(1, n + 1)])
        off = np.array([coeffs.a(k) for k in range(1, n)])
        lam, vec = eigh_tridiagonal(diag, off)
        section = np.array([np.sum(vec[0, :] ** 2 * lam**k)
                            for k in range(len(exact))])
        err = float(np.max(np.abs(section - exact) / np.maximum(1.0, np.abs(exact))))
    else:
        err = 0.0
    return {"a0": coeffs.a(0), "mass": mass,
            "moments_checked": len(exact), "max_moment_error": err}


def coefficients_csv(coeffs: JacobiCoefficients) -> str:
    """CSV text of (n, a_n, b_n) over the explicit window."""
    lines = ["n,a,b"]
    lines += [f"{n},{coeffs.a(n)!r},{coeffs.b(n)!r}"
              for n in range(coeffs.n_lo, coeffs.n_hi + 1)]
    return "\n".join(lines) + "\n"
