"""Accessible vertices, spectral completeness and the spectral polytope.

Permutations are 0-based tuples: ``pi[i]`` is the image of ``i``. The
accessible vertex for ``pi`` is ``diag(lam[pi[0]], ..., lam[pi[n-1]])`` and
its BFR image (the extremal vertex) has coordinate ``k`` equal to
``lam[pi^{-1}(k)]``.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrum, NotPositiveVector, TooLarge
from .linalg import GAP_TOL, RANK_TOL, SpectralPair, reconstruct
from .sieve import j_of_i

N_MAX = 8
COMPLETENESS_N_MAX = 12
DEDUP_RTOL = 1e-8


@dataclass(frozen=True)
class HalfSpace:
    """``sum(x[i] for i in i_set) <= bound``; ``j_set`` is the column set J(I)."""

    i_set: tuple
    bound: float
    j_set: tuple = ()

    def slack(self, x):
        return self.bound - float(np.sum(np.asarray(x)[list(self.i_set)]))


@dataclass(eq=False)
class SpectralPolytope:
    trace: float
    lam: np.ndarray
    extremal_vertices: np.ndarray
    halfspaces: list
    accessible_perms: list = field(default_factory=list)

    @property
    def n(self):
        return self.lam.size


def _leading_minors(q):
    """``{rows: |det q[rows, :len(rows)]|}`` for every nonempty row subset."""
    n = q.shape[0]
    out = {}
    for k in range(1, n + 1):
        for rows in itertools.combinations(range(n), k):
            out[rows] = abs(np.linalg.det(q[np.ix_(rows, range(k))]))
    return out


def minor_diagnostics(q, rank_tol=RANK_TOL, n_max=COMPLETENESS_N_MAX):
    """Every leading-column minor with its status.

    Returns a list of ``(rows, |det|, status)`` with status ``"nonzero"``,
    ``"zero"`` or ``"indeterminate"`` (``rank_tol < |det| < 10 * rank_tol``).
    """
    q = np.asarray(q, dtype=float)
    if q.shape[0] > n_max:
        raise TooLarge(f"n = {q.shape[0]} exceeds n_max = {n_max}")
    out = []
    for rows, det in _leading_minors(q).items():
        if det <= rank_tol:
            status = "zero"
        elif det < 10 * rank_tol:
            status = "indeterminate"
        else:
            status = "nonzero"
        out.append((rows, det, status))
    return out


def vertex_status(q, rank_tol=RANK_TOL, n_max=N_MAX):
    """Map each permutation to ``accessible``, ``inaccessible`` or ``indeterminate``."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    if n > n_max:
        raise TooLarge(f"n = {n} exceeds n_max = {n_max}")
    minors = {frozenset(r): d for r, d in _leading_minors(q).items()}
    status = {}
    for pi in itertools.permutations(range(n)):
        chain = [minors[frozenset(pi[: k + 1])] for k in range(n)]
        low = min(chain)
        if low <= rank_tol:
            status[pi] = "inaccessible"
        elif low < 10 * rank_tol:
            status[pi] = "indeterminate"
        else:
            status[pi] = "accessible"
    return status


def accessible_vertices(q, rank_tol=RANK_TOL, n_max=N_MAX):
    """Permutations whose nested minors ``q[{pi(0..k)}, 0..k]`` are all nonzero.

    Indeterminate permutations (smallest minor within 10x of ``rank_tol``)
    count as accessible; see :func:`vertex_status` to tell them apart.
    """
    status = vertex_status(q, rank_tol, n_max)
    return sorted(pi for pi, s in status.items() if s != "inaccessible")


def extremal_vertex(pi, lam):
    lam = np.asarray(lam, dtype=float)
    pi = np.asarray(pi, dtype=int)
    x = np.empty_like(lam)
    x[pi] = lam
    return x


def vertex_diagonal(pi, lam):
    """Diagonal of the accessible vertex ``Lambda_pi``."""
    return np.asarray(lam, dtype=float)[np.asarray(pi, dtype=int)]


def is_spectrally_complete(q, rank_tol=RANK_TOL, n_max=COMPLETENESS_N_MAX):
    q = np.asarray(q, dtype=float)
    if q.shape[0] > n_max:
        raise TooLarge(f"n = {q.shape[0]} exceeds n_max = {n_max}")
    return all(d > rank_tol for d in _leading_minors(q).values())


def proper_subsets(n):
    for k in range(1, n):
        yield from itertools.combinations(range(n), k)


def spectral_polytope(pair: SpectralPair, rank_tol=RANK_TOL, n_max=N_MAX) -> SpectralPolytope:
    perms = accessible_vertices(pair.q, rank_tol, n_max)
    verts = np.array([extremal_vertex(pi, pair.lam) for pi in perms]).reshape(-1, pair.n)
    halfspaces = []
    for i_set in proper_subsets(pair.n):
        j_set = j_of_i(pair.q, i_set, rank_tol)
        halfspaces.append(HalfSpace(i_set, float(pair.lam[list(j_set)].sum()), j_set))
    return SpectralPolytope(float(pair.lam.sum()), pair.lam.copy(), verts, halfspaces, perms)


def min_slack(p: SpectralPolytope, x):
    return min((h.slack(x) for h in p.halfspaces), default=np.inf)


def contains(p: SpectralPolytope, x, tol=1e-9):
    x = np.asarray(x, dtype=float)
    if abs(x.sum() - p.trace) > tol:
        return False
    return min_slack(p, x) >= -tol


def permutohedron_bound(lam, size):
    return float(np.sort(lam)[::-1][:size].sum())


def non_permutohedral(p: SpectralPolytope, tol=1e-9):
    """Half-spaces strictly tighter than the permutohedron's bound for ``|I|``."""
    return [h for h in p.halfspaces if h.bound < permutohedron_bound(p.lam, len(h.i_set)) - tol]


def facets(p: SpectralPolytope, tol=1e-8):
    """Half-spaces whose boundary carries an (n-2)-dimensional face of the V-rep."""
    out = []
    for h in p.halfspaces:
        on = [v for v in p.extremal_vertices if abs(h.slack(v)) <= tol]
        if len(on) < p.n - 1:
            continue
        diffs = np.array(on[1:]) - on[0] if len(on) > 1 else np.zeros((0, p.n))
        rank = np.linalg.matrix_rank(diffs, tol=tol) if diffs.size else 0
        if rank >= p.n - 2:
            out.append(h)
    return out


def dedup_points(points, rtol=DEDUP_RTOL):
    pts = sorted((tuple(map(float, x)) for x in points))
    out = []
    for x in pts:
        xa = np.array(x)
        if not any(np.all(np.abs(xa - y) <= rtol * np.maximum(1.0, np.abs(y))) for y in out):
            out.append(xa)
    return np.array(out).reshape(-1, len(pts[0]) if pts else 0)


def vertices_from_halfspaces(p: SpectralPolytope, tol=1e-9, n_max=5):
    """Brute-force vertex enumeration of the H-representation.

    Every choice of ``n - 1`` half-space boundaries plus the trace equation is
    solved; feasible solutions are kept and deduplicated.
    """
    n = p.n
    if n > n_max:
        raise TooLarge(f"n = {n} exceeds n_max = {n_max} for brute-force enumeration")
    if n == 1:
        return np.array([[p.trace]])
    a = np.array([[1.0 if i in h.i_set else 0.0 for i in range(n)] for h in p.halfspaces])
    b = np.array([h.bound for h in p.halfspaces])
    found = []
    for combo in itertools.combinations(range(len(p.halfspaces)), n - 1):
        m = np.vstack([a[list(combo)], np.ones(n)])
        if np.linalg.matrix_rank(m) < n:
            continue
        x = np.linalg.solve(m, np.append(b[list(combo)], p.trace))
        if np.all(a @ x <= b + tol):
            found.append(x)
    return dedup_points(found)


def _lanczos(lam, u):
    n = lam.size
    q = np.zeros((n, n))
    q[:, 0] = u
    for k in range(n - 1):
        w = lam * q[:, k]
        for _ in range(2):
            w -= q[:, : k + 1] @ (q[:, : k + 1].T @ w)
        beta = np.linalg.norm(w)
        if beta <= np.finfo(float).eps * np.abs(lam).max():
            raise DegenerateSpectrum(f"Krylov space stalls at dimension {k + 1}")
        q[:, k + 1] = w / beta
    return q


def jacobi_spectral_pair(lam, u, gap_tol=GAP_TOL) -> SpectralPair:
    """Spectral pair ``(lam, Q)`` of the Jacobi matrix with first eigenvector column ``u``.

    ``Q`` is the orthogonal factor of the Krylov matrix ``[u, L u, ..., L^{n-1} u]``
    with ``L = diag(lam)``, computed by fully reorthogonalized Lanczos.
    ``u`` is normalized to unit length.
    """
    lam = np.asarray(lam, dtype=float).reshape(-1)
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.shape != lam.shape:
        raise ValueError("lam and u differ in length")
    if not np.all(u > 0):
        raise NotPositiveVector("u must have strictly positive entries")
    gaps = -np.diff(lam)
    if gaps.size and gaps.min() < gap_tol:
        raise DegenerateSpectrum("lam must be strictly descending with simple spectrum")
    return SpectralPair(lam, _lanczos(lam, u / np.linalg.norm(u)))


def jacobi_from_spectral_data(lam, u, gap_tol=GAP_TOL):
    """Jacobi matrix with spectrum ``lam`` and positive eigenvector data ``u``."""
    return reconstruct(jacobi_spectral_pair(lam, u, gap_tol))
