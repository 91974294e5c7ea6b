"""Toda group action: closed form, ODE, derivatives and partial traces."""

import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, EmptyOrFullSet, NumericalBreakdown, SingularInput
from .linalg import (
    SpectralPair,
    apply_spectral_function,
    commutator,
    pi_skew,
    qr_pos,
    reconstruct,
    sym_eig,
)

# largest max(tau) - min(tau) applied in one QR step; exp(-100) ~ 4e-44
MAX_STEP_SPREAD = 100.0


def normalize_direction(tau, mode="zero-sum"):
    """Canonical representative of ``tau`` modulo constants.

    ``mode="zero-sum"`` subtracts the mean, ``mode="zero-max"`` the maximum.
    """
    tau = np.asarray(tau, dtype=float).reshape(-1)
    if mode == "zero-sum":
        return tau - tau.mean()
    if mode == "zero-max":
        return tau - tau.max()
    raise ValueError(f"unknown mode {mode!r}")


def indicator(i_set, n):
    e = np.zeros(n)
    e[list(i_set)] = 1.0
    return e


def _scaled_q_factor(d, q):
    """Orthogonal QR factor of ``diag(d) @ q``.

    Rows are sorted by decreasing weight before factoring. A row permutation
    ``P`` satisfies ``Q(P M) = P Q(M)``, and the sorted order keeps Householder
    accurate on strongly row-graded inputs.
    """
    order = np.argsort(-d, kind="stable")
    try:
        f = qr_pos(d[order, None] * q[order], rank_tol=0.0)
    except SingularInput as exc:
        raise NumericalBreakdown(f"QR pivot underflow in Toda step: {exc}") from exc
    out = np.empty_like(f.q)
    out[order] = f.q
    return out


def toda_action(pair: SpectralPair, tau, max_spread=MAX_STEP_SPREAD) -> SpectralPair:
    """Apply the Toda flow with time vector ``tau`` to ``pair``.

    The new pair is ``(lam, Q(exp(diag(tau)) @ q))`` where ``Q`` is the
    orthogonal factor of :func:`qr_pos`. Large spreads are split into equal
    substeps and composed through the group law; the loop stops early once
    a substep no longer changes ``q`` beyond rounding.
    """
    tau = np.asarray(tau, dtype=float).reshape(-1)
    if tau.size != pair.n:
        raise DimensionMismatch(f"tau has {tau.size} entries, expected {pair.n}")
    if not np.all(np.isfinite(tau)):
        raise NumericalBreakdown("non-finite Toda time")
    sigma = normalize_direction(tau, "zero-max")
    spread = -sigma.min(initial=0.0)
    if spread == 0.0:
        return SpectralPair(pair.lam, pair.q.copy())
    steps = max(1, math.ceil(spread / max_spread))
    d = np.exp(sigma / steps)
    q = pair.q
    for _ in range(steps):
        new = _scaled_q_factor(d, q)
        settled = np.abs(new - q).max() <= 4 * np.finfo(float).eps
        q = new
        if settled:
            break
    return SpectralPair(pair.lam, q)


def lagrange_polynomial_of_matrix(s, lam, v):
    """``p(s)`` for the interpolating polynomial with ``p(lam[k]) = v[k]``.

    Evaluated in Lagrange product form; ``lam`` must be simple.
    """
    s = np.asarray(s, dtype=float)
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    eye = np.eye(n)
    out = np.zeros_like(s)
    for k in range(n):
        term = eye * v[k]
        for j in range(n):
            if j != k:
                term = term @ (s - lam[j] * eye) / (lam[k] - lam[j])
        out += term
    return out


def toda_ode_rhs(s, v, lam=None):
    """Right-hand side ``[s, pi_skew(p_v(s))]`` of the Toda equation.

    ``p_v`` takes value ``v[i]`` at the i-th largest eigenvalue. With ``lam``
    given, ``p_v`` is the fixed interpolating polynomial on ``lam`` (no
    eigensolve); otherwise the spectrum of ``s`` is computed.
    """
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=float).reshape(-1)
    if lam is None:
        p = apply_spectral_function(sym_eig(s), v)
    else:
        p = lagrange_polynomial_of_matrix(s, lam, v)
    return commutator(s, pi_skew(p))


def integrate_toda_ode(s0, v, t, steps):
    """Classical fixed-step RK4 for the Toda equation up to time ``t``.

    The polynomial ``p_v`` is fixed once from the spectrum of ``s0``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    s = np.array(s0, dtype=float)
    h = t / steps
    if h == 0.0:
        return s
    lam = sym_eig(s).lam
    for _ in range(steps):
        k1 = toda_ode_rhs(s, v, lam)
        k2 = toda_ode_rhs(s + 0.5 * h * k1, v, lam)
        k3 = toda_ode_rhs(s + 0.5 * h * k2, v, lam)
        k4 = toda_ode_rhs(s + h * k3, v, lam)
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s = 0.5 * (s + s.T)
    return s


def toda_action_derivative_at_zero(pair: SpectralPair, rho):
    """Derivative of ``tau -> reconstruct(toda_action(pair, tau))`` at 0 along ``rho``.

    Equals ``[S, pi_skew(p_rho(S))]``, the Toda vector field itself.
    """
    s = reconstruct(pair)
    return commutator(s, pi_skew(apply_spectral_function(pair, rho)))


def _check_proper(i_set, n):
    idx = sorted(set(int(i) for i in i_set))
    if not idx or len(idx) >= n:
        raise EmptyOrFullSet(f"index set {idx} is not a proper nonempty subset")
    if idx[0] < 0 or idx[-1] >= n:
        raise DimensionMismatch(f"index set {idx} out of range for n={n}")
    return idx


def partial_trace(x, i_set):
    x = np.asarray(x, dtype=float).reshape(-1)
    return float(x[_check_proper(i_set, x.size)].sum())


def partial_trace_rate(pair: SpectralPair, i_set):
    """Time derivative of ``tr_I(bfr)`` along the flow ``t * e_I`` at ``t = 0``.

    Always nonnegative; zero exactly when ``p_{e_I}(S)`` is diagonal.
    """
    p = apply_spectral_function(pair, indicator(i_set, pair.n))
    dl = pair.lam[:, None] - pair.lam[None, :]
    return float(2.0 * np.sum(np.triu(dl * p**2, 1)))


class TrajectoryPoint(NamedTuple):
    t: float
    pair: SpectralPair
    x: np.ndarray


def toda_trajectory(pair: SpectralPair, sigma, t_samples):
    """Sample ``toda_action(pair, t * sigma)`` and its BFR image."""
    from .bfr import bfr

    sigma = np.asarray(sigma, dtype=float)
    out = []
    for t in t_samples:
        p = toda_action(pair, float(t) * sigma)
        out.append(TrajectoryPoint(float(t), p, bfr(p)))
    return out
