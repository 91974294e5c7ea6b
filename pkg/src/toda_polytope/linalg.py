"""Dense real linear algebra kernel.

Conventions used throughout the package:

* a symmetric matrix with simple spectrum is carried as a :class:`SpectralPair`
  ``(lam, q)`` with ``S = q.T @ diag(lam) @ q``; ``lam`` is strictly
  descending and the *rows* of ``q`` are unit eigenvectors;
* ``qr_pos`` returns the QR factorization whose triangular factor has a
  strictly positive diagonal, so the orthogonal factor is unique.

Row sign flips of ``q`` leave ``S`` unchanged. Only ``sym_eig`` and
``canonical_row_signs`` pick a representative; nothing enforces det(q) = +1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    NotSymmetric,
    SingularInput,
)

ORTH_TOL = 1e-10
RECON_TOL = 1e-10
GAP_TOL = 1e-8
RANK_TOL = 1e-9
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QrFactors:
    q: np.ndarray
    r: np.ndarray


@dataclass(frozen=True, eq=False)
class SpectralPair:
    """Spectrum ``lam`` (descending) and eigenvector rows ``q``."""

    lam: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float).reshape(-1)
        q = np.asarray(self.q, dtype=float)
        if q.shape != (lam.size, lam.size):
            raise DimensionMismatch(
                f"q has shape {q.shape}, expected {(lam.size, lam.size)}"
            )
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.lam.size

    def validate(self, orth_tol=ORTH_TOL, gap_tol=GAP_TOL):
        """Raise if the spectrum is not simple/descending or q is not orthogonal."""
        if not (np.all(np.isfinite(self.lam)) and np.all(np.isfinite(self.q))):
            raise DegenerateSpectrum("non-finite entries in spectral pair")
        gaps = -np.diff(self.lam)
        if gaps.size and gaps.min() < gap_tol:
            raise DegenerateSpectrum(
                f"spectrum not strictly descending with gap >= {gap_tol}: {self.lam}"
            )
        defect = np.abs(self.q @ self.q.T - np.eye(self.n)).max(initial=0.0)
        if defect > orth_tol:
            raise DimensionMismatch(f"q is not orthogonal (defect {defect:.3e})")
        return self


def _square(m, name="matrix"):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    return m


def qr_pos(m, rank_tol=RANK_TOL) -> QrFactors:
    """QR factorization with ``diag(r) > 0``.

    ``rank_tol`` is relative to the largest column norm of ``m``. Pass
    ``rank_tol=0`` to accept any nonzero pivot (used for badly row-scaled
    but invertible inputs such as ``D @ q``).
    """
    m = _square(m)
    if not np.all(np.isfinite(m)):
        raise SingularInput("matrix has non-finite entries")
    q, r = np.linalg.qr(m)
    d = np.diag(r)
    scale = np.linalg.norm(m, axis=0).max(initial=0.0)
    if d.size and (np.abs(d).min() <= rank_tol * scale or np.any(d == 0.0)):
        k = int(np.argmin(np.abs(d)))
        raise SingularInput(f"pivot {k} has norm {abs(d[k]):.3e} (scale {scale:.3e})")
    sign = np.where(d < 0, -1.0, 1.0)
    return QrFactors(q=q * sign, r=r * sign[:, None])


def canonical_row_signs(q):
    """Flip each row so that its largest-magnitude entry is positive."""
    q = np.array(q, dtype=float)
    idx = np.argmax(np.abs(q), axis=1)
    sign = np.where(q[np.arange(q.shape[0]), idx] < 0, -1.0, 1.0)
    return q * sign[:, None] + 0.0


def _jacobi_eigh(a, max_sweeps=100):
    """Cyclic Jacobi rotations; returns (eigenvalues, eigenvector columns)."""
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    eps = np.finfo(float).eps
    scale = max(np.abs(a).max(initial=0.0), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= eps * scale:
            break
        for p in range(n - 1):
            for k in range(p + 1, n):
                apq = a[p, k]
                if abs(apq) <= eps * eps * scale:
                    continue
                theta = (a[k, k] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                idx = [p, k]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.T @ a[idx, :]
                a[p, k] = a[k, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    return np.diag(a).copy(), v


def sym_eig(s, gap_tol=GAP_TOL, symmetry_tol=SYMMETRY_TOL) -> SpectralPair:
    """Eigendecomposition of a symmetric matrix with simple spectrum.

    Eigenvalues come out strictly descending; each eigenvector row is
    signed so its largest-magnitude entry is positive.

    Raises
    ------
    NotSymmetric
        if ``max|s - s.T| > symmetry_tol * max(1, max|s|)``.
    DegenerateSpectrum
        if two consecutive eigenvalues are closer than ``gap_tol``.
    """
    s = _square(s)
    if not np.all(np.isfinite(s)):
        raise NotSymmetric("matrix has non-finite entries")
    asym = np.abs(s - s.T).max(initial=0.0)
    if asym > symmetry_tol * max(1.0, np.abs(s).max(initial=0.0)):
        raise NotSymmetric(f"asymmetry {asym:.3e} exceeds tolerance")
    s = 0.5 * (s + s.T)
    w, v = _jacobi_eigh(s)
    order = np.argsort(-w, kind="stable")
    lam = w[order]
    gaps = -np.diff(lam)
    if gaps.size and gaps.min() < gap_tol:
        raise DegenerateSpectrum(f"eigenvalue gap {gaps.min():.3e} below {gap_tol}")
    q = canonical_row_signs(v[:, order].T)
    return SpectralPair(lam, q)


def reconstruct(pair: SpectralPair):
    s = (pair.q.T * pair.lam) @ pair.q
    return 0.5 * (s + s.T)


def apply_spectral_function(pair: SpectralPair, v):
    """Matrix ``p_v(S)`` for the polynomial taking value ``v[i]`` at ``lam[i]``."""
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != pair.n:
        raise DimensionMismatch(f"expected {pair.n} values, got {v.size}")
    m = (pair.q.T * v) @ pair.q
    return 0.5 * (m + m.T)


def pi_skew(m):
    """Strictly lower part minus its transpose."""
    low = np.tril(_square(m), -1)
    return low - low.T


def pi_upper(m):
    """Upper triangle plus the transposed strictly lower part."""
    m = _square(m)
    return np.triu(m) + np.tril(m, -1).T


def qr_q_derivative(m, mdot, rank_tol=RANK_TOL):
    """Directional derivative of the orthogonal QR factor of ``m`` along ``mdot``."""
    m = _square(m)
    mdot = _square(mdot, "mdot")
    if mdot.shape != m.shape:
        raise DimensionMismatch("m and mdot differ in shape")
    f = qr_pos(m, rank_tol)
    x = f.q.T @ mdot
    # x @ inv(r) without forming the inverse
    x_rinv = np.linalg.solve(f.r.T, x.T).T
    return f.q @ pi_skew(x_rinv)


def commutator(a, b):
    return a @ b - b @ a
