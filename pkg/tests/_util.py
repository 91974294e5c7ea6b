"""Random instance generators shared by the test modules."""

import itertools

import numpy as np

from toda_polytope.linalg import SpectralPair, qr_pos


def random_orthogonal(rng, n):
    return qr_pos(rng.normal(size=(n, n))).q


def random_spectrum(rng, n, min_gap=0.2, width=6.0):
    gaps = min_gap + rng.uniform(0.0, width / max(n - 1, 1), size=n - 1)
    lam = np.concatenate([[0.0], -np.cumsum(gaps)])
    return lam - lam.mean() + rng.uniform(-1, 1)


def random_pair(rng, n, **kw):
    return SpectralPair(random_spectrum(rng, n, **kw), random_orthogonal(rng, n))


def random_symmetric(rng, n):
    a = rng.normal(size=(n, n))
    return 0.5 * (a + a.T)


def random_partition(rng, n, proper=True):
    """Random ordered partition of range(n) with at least two blocks if proper."""
    from toda_polytope.sieve import OrderedPartition

    k = rng.integers(2 if proper else 1, n + 1)
    perm = rng.permutation(n)
    cuts = np.sort(rng.choice(np.arange(1, n), size=k - 1, replace=False))
    blocks = [tuple(b) for b in np.split(perm, cuts)]
    return OrderedPartition(tuple(blocks))


def brute_force_lex_min(q, rows, tol):
    """First column subset (lexicographic order) giving an invertible square minor."""
    n = q.shape[0]
    for cols in itertools.combinations(range(n), len(rows)):
        if abs(np.linalg.det(q[np.ix_(rows, cols)])) > tol:
            return cols
    return None


def central_difference(f, h=1e-6):
    return (f(h) - f(-h)) / (2 * h)
