"""Condition-number minimization over admissible Lyapunov matrices.

Three searches of increasing generality:

* 2x2 weighted family: closed form, the optimum is always at equal weights
  with kappa_min = (1 + alpha) / (1 - alpha).
* n-dimensional weighted family P(b) = W diag(b) W*: derivative-free simplex
  search in log-weights with restarts (the objective is smooth but not convex
  in general).
* full Hermitian family at a fixed rate: simplex search over a Cholesky
  factor with a penalty for violating the matrix inequality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import SearchFailure
from .lyapunov import LyapunovMatrix, lyapunov_residual
from .spectral import Canonical2DForm, as_complex_matrix

__all__ = [
    "WeightOptimum",
    "AdmissibleOptimum",
    "minimize_kappa_2d",
    "minimize_kappa_weights",
    "minimize_kappa_admissible",
]

PENALTY_WEIGHT = 1e6


@dataclass
class WeightOptimum:
    weights: np.ndarray
    kappa: float
    kappa_equal: float


@dataclass
class AdmissibleOptimum:
    P: LyapunovMatrix
    kappa: float
    residual: float


def minimize_kappa_2d(form: Canonical2DForm) -> WeightOptimum:
    """Optimal weights for the 2x2 projector family: equal, by symmetry.

    kappa(P(b)) depends on b only through trace(P) = b + 1/b while det(P) is
    fixed at 1 - alpha^2, so the minimum sits at b = 1 with
    kappa = (1 + alpha) / (1 - alpha).
    """
    a = form.alpha
    return WeightOptimum(
        weights=np.array([1.0, 1.0]),
        kappa=(1.0 + a) / (1.0 - a),
        kappa_equal=(1.0 + a) / (1.0 - a),
    )


def _kappa_of_weights(W: np.ndarray, b: np.ndarray) -> float:
    ev = np.linalg.eigvalsh((W * b) @ W.conj().T)
    if ev[0] <= 0.0:
        return np.inf
    return float(ev[-1] / ev[0])


def minimize_kappa_weights(W, n_restarts: int = 20, seed: int = 0,
                           xatol: float = 1e-12) -> WeightOptimum:
    """Minimize kappa(W diag(b) W*) over positive weights b, b[0] fixed at 1.

    Nelder-Mead in log-weights (kappa is scale invariant, so one weight can be
    pinned), restarted from the equal-weight point and from seeded random
    perturbations; the best restart wins. Weights are rescaled afterwards to
    the smallest-denominator presentation when they sit within 1e-3 of one.
    """
    W = as_complex_matrix(W)
    n = W.shape[0]
    equal = _kappa_of_weights(W, np.ones(n))
    if n == 1:
        return WeightOptimum(weights=np.ones(1), kappa=equal, kappa_equal=equal)

    def objective(x):
        return _kappa_of_weights(W, np.concatenate([[1.0], np.exp(x)]))

    rng = np.random.default_rng(seed)
    starts = [np.zeros(n - 1)]
    starts += [rng.normal(scale=1.0, size=n - 1) for _ in range(max(n_restarts - 1, 0))]

    best_x, best_f = np.zeros(n - 1), equal
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options=dict(maxiter=4000, maxfev=4000,
                                    xatol=xatol, fatol=1e-14))
        if np.isfinite(res.fun) and res.fun < best_f:
            best_x, best_f = res.x, float(res.fun)
    # polish: restart the simplex at the incumbent until it stops improving
    for _ in range(3):
        res = minimize(objective, best_x, method="Nelder-Mead",
                       options=dict(maxiter=4000, maxfev=4000,
                                    xatol=xatol, fatol=1e-15))
        if res.fun >= best_f - 1e-14:
            break
        best_x, best_f = res.x, float(res.fun)

    if not np.isfinite(best_f) or best_f > equal * (1.0 + 1e-9):
        raise SearchFailure(f"weight search did not reach the equal-weight value {equal}")
    weights = np.concatenate([[1.0], np.exp(best_x)])
    return WeightOptimum(weights=_nice_rescale(weights), kappa=best_f, kappa_equal=equal)


def _nice_rescale(b: np.ndarray, rtol: float = 1e-3, max_factor: int = 12) -> np.ndarray:
    """Scale weights by a small integer if that makes them all near-integers."""
    for q in range(1, max_factor + 1):
        cand = b * q
        if np.all(np.abs(cand - np.round(cand)) <= rtol * np.maximum(1.0, cand)):
            return cand
    return b


def minimize_kappa_admissible(C, mu: float, seed_P, tol: float = 1e-10,
                              n_restarts: int = 10, seed: int = 0) -> AdmissibleOptimum:
    """Minimize kappa(P) over all Hermitian P admissible at rate mu.

    Parameterization: P = L L* through a lower-triangular Cholesky factor
    (positive diagonal via exp), trace-normalized so the penalty scale is
    meaningful. The inequality residual enters as a one-sided penalty; since
    the slowest spectral direction pins the residual at zero, feasibility
    means "within -tol/2 of zero", and the search keeps a separate record of
    the best iterate that satisfies it, which is what gets returned.
    """
    C = as_complex_matrix(C)
    n = C.shape[0]
    seed_P = seed_P.matrix if isinstance(seed_P, LyapunovMatrix) else as_complex_matrix(seed_P)
    tril = np.tril_indices(n, -1)
    m = len(tril[0])
    feas_slack = 0.5 * tol

    def unpack(x):
        L = np.zeros((n, n), dtype=complex)
        L[np.diag_indices(n)] = np.exp(x[:n])
        L[tril] = x[n:n + m] + 1j * x[n + m:]
        P = L @ L.conj().T
        return P * (n / np.trace(P).real)

    def pack(P):
        P = P * (n / np.trace(P).real)
        L = np.linalg.cholesky(P)
        return np.concatenate([np.log(np.diag(L).real), L[tril].real, L[tril].imag])

    feasible = {"kappa": np.inf, "P": None, "residual": np.nan}

    def objective(x):
        P = unpack(x)
        ev = np.linalg.eigvalsh(P)
        if ev[0] <= 0.0:
            return np.inf
        k = float(ev[-1] / ev[0])
        r = lyapunov_residual(C, P, mu)
        if r >= -feas_slack and k < feasible["kappa"]:
            feasible.update(kappa=k, P=P.copy(), residual=r)
        return k + PENALTY_WEIGHT * max(0.0, -r)

    x_seed = pack(seed_P)
    objective(x_seed)  # the seed itself is a feasible candidate
    rng = np.random.default_rng(seed)
    starts = [x_seed] + [x_seed + 0.15 * rng.normal(size=len(x_seed))
                         for _ in range(max(n_restarts - 1, 0))]
    for x0 in starts:
        x, f_prev = x0, np.inf
        for _ in range(4):  # restart the simplex at the incumbent
            res = minimize(objective, x, method="Nelder-Mead",
                           options=dict(maxiter=4000, maxfev=4000,
                                        xatol=1e-12, fatol=1e-14))
            if res.fun >= f_prev - 1e-13:
                break
            x, f_prev = res.x, float(res.fun)

    if feasible["P"] is None:
        raise SearchFailure("no admissible iterate found (is the seed admissible?)")
    return AdmissibleOptimum(
        P=LyapunovMatrix(matrix=feasible["P"]),
        kappa=feasible["kappa"],
        residual=feasible["residual"],
    )
