"""The BFR map on a slice, its Jacobian, and its numerical inverse.

Tangent vectors of the zero-sum space and of the trace hyperplane are
written in the fixed basis ``e_k - e_{k+1}``, ``k = 0..n-2``. The coordinates
of a zero-sum vector ``y`` in that basis are ``cumsum(y)[:-1]``.
"""

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotInterior
from .flow import normalize_direction, toda_action
from .linalg import SpectralPair, apply_spectral_function, pi_skew
from .polytope import min_slack, spectral_polytope

MAX_NEWTON_STEP = 4.0


def bfr(pair: SpectralPair):
    """Diagonal of ``q @ diag(lam) @ q.T``: ``x[i] = sum_j lam[j] * q[i, j]**2``."""
    return (pair.q**2) @ pair.lam


def forward(pair: SpectralPair, tau):
    return bfr(toda_action(pair, tau))


def to_diff_coords(y):
    """Coordinates of a zero-sum vector in the basis ``e_k - e_{k+1}``."""
    return np.cumsum(np.asarray(y, dtype=float))[:-1]


def from_diff_coords(c):
    c = np.asarray(c, dtype=float)
    return np.append(c, 0.0) - np.insert(c, 0, 0.0)


def bfr_derivative(pair: SpectralPair, rho):
    """Derivative of ``tau -> forward(pair, tau)`` at ``tau = 0`` along ``rho``."""
    a = pi_skew(apply_spectral_function(pair, rho))
    lam_comm = a * pair.lam[None, :] - pair.lam[:, None] * a
    return np.einsum("ij,jk,ik->i", pair.q, lam_comm, pair.q)


def bfr_jacobian(pair: SpectralPair):
    """``(n-1) x (n-1)`` Jacobian of ``forward(pair, .)`` at 0 in the difference bases."""
    n = pair.n
    cols = []
    for k in range(n - 1):
        rho = np.zeros(n)
        rho[k], rho[k + 1] = 1.0, -1.0
        cols.append(to_diff_coords(bfr_derivative(pair, rho)))
    return np.array(cols).T.reshape(n - 1, n - 1)


class Inversion(NamedTuple):
    tau: np.ndarray
    residual: float
    iterations: int


def invert_bfr(
    pair: SpectralPair,
    target,
    tol=1e-11,
    max_iter=200,
    max_step=MAX_NEWTON_STEP,
    slack_min=None,
    polytope=None,
    full_output=False,
):
    """Zero-sum ``tau`` with ``forward(pair, tau) == target``.

    Damped Newton from ``tau = 0``. The Jacobian is always taken at the
    current slice point ``toda_action(pair, tau)``, which by the group law
    is the derivative of ``forward`` at ``tau``. A step whose spread
    ``max - min`` exceeds ``max_step`` is scaled down to it (the Jacobian can
    be nearly singular far from the target), then halved up to 30 times
    until the residual norm decreases.

    Raises
    ------
    NotInterior
        if ``target`` is off the trace hyperplane or its smallest half-space
        slack is below ``slack_min`` (default ``1e-6 * (lam[0] - lam[-1])``).
    NoConvergence
        after ``max_iter`` iterations or a failed line search.
    """
    target = np.asarray(target, dtype=float).reshape(-1)
    if target.size != pair.n:
        raise DimensionMismatch(f"target has {target.size} entries, expected {pair.n}")
    scale = float(pair.lam[0] - pair.lam[-1]) if pair.n > 1 else 1.0
    if abs(target.sum() - pair.lam.sum()) > 1e-9 * max(1.0, np.abs(pair.lam).max()):
        raise NotInterior("target is not on the trace hyperplane")
    if slack_min is None:
        slack_min = 1e-6 * scale
    if polytope is None:
        polytope = spectral_polytope(pair)
    slack = min_slack(polytope, target)
    if pair.n > 1 and slack < slack_min:
        raise NotInterior(f"target slack {slack:.3e} below {slack_min:.3e}")

    tau = np.zeros(pair.n)
    cur = pair
    res = bfr(cur) - target
    rnorm = np.linalg.norm(res)
    for it in range(max_iter + 1):
        if rnorm <= tol:
            tau = normalize_direction(tau, "zero-sum")
            if full_output:
                return Inversion(tau, float(rnorm), it)
            return tau
        if it == max_iter:
            break
        jac = bfr_jacobian(cur)
        step = from_diff_coords(np.linalg.solve(jac, -to_diff_coords(res)))
        spread = np.ptp(step)
        if not np.isfinite(spread):
            raise NoConvergence("singular Jacobian", residual=rnorm, iterations=it)
        if spread > max_step:
            step *= max_step / spread
        t = 1.0
        for _ in range(31):
            cand_tau = tau + t * step
            cand = toda_action(pair, cand_tau)
            cand_res = bfr(cand) - target
            cand_norm = np.linalg.norm(cand_res)
            if cand_norm < rnorm:
                break
            t *= 0.5
        else:
            raise NoConvergence(
                f"line search failed at residual {rnorm:.3e}", residual=rnorm, iterations=it
            )
        tau, cur, res, rnorm = cand_tau, cand, cand_res, cand_norm
    raise NoConvergence(
        f"no convergence after {max_iter} iterations (residual {rnorm:.3e})",
        residual=rnorm,
        iterations=max_iter,
    )
