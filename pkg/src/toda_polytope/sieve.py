"""Sieved QR decomposition, ordered partitions and boundary limits of Toda flows.

Index sets are 0-based tuples here; the CLI converts to 1-based.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RankDeficiency
from .flow import toda_action
from .linalg import RANK_TOL, SpectralPair, canonical_row_signs, qr_pos

TIE_TOL = 1e-12


@dataclass(frozen=True)
class OrderedPartition:
    """Ordered disjoint blocks covering ``range(n)``; each block sorted."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        if any(len(b) == 0 for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        flat = [i for b in blocks for i in b]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError(f"blocks {blocks} do not partition range({len(flat)})")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def is_proper(self) -> bool:
        return len(self.blocks) >= 2

    @classmethod
    def two_block(cls, i_set, n):
        i_set = tuple(sorted(set(int(i) for i in i_set)))
        rest = tuple(i for i in range(n) if i not in i_set)
        return cls((i_set, rest))

    @classmethod
    def singletons(cls, perm):
        return cls(tuple((int(p),) for p in perm))


@dataclass(frozen=True, eq=False)
class SievedDecomposition:
    j_partition: OrderedPartition
    q_sieved: np.ndarray
    r_upper: np.ndarray


def partition_from_direction(sigma, tie_tol=TIE_TOL) -> OrderedPartition:
    """Equiasymptotic partition of ``exp(t * diag(sigma))`` as ``t -> inf``.

    Blocks are level sets of ``sigma`` ordered by decreasing value.
    """
    sigma = np.asarray(sigma, dtype=float).reshape(-1)
    order = np.argsort(-sigma, kind="stable")
    blocks, top = [], None
    for i in order:
        if top is None or top - sigma[i] > tie_tol:
            blocks.append([int(i)])
            top = sigma[i]
        else:
            blocks[-1].append(int(i))
    return OrderedPartition(tuple(blocks))


def sieve(m, i_partition: OrderedPartition, rank_tol=RANK_TOL) -> SievedDecomposition:
    """Sieved decomposition ``m = q_sieved @ r_upper`` driven by a row partition.

    Step ``alpha`` works on the rows ``I_alpha`` and the columns not yet
    claimed by earlier steps, scanning them left to right: every column whose
    restriction to ``I_alpha`` is nonzero joins ``J_alpha`` and is projected
    out of the restrictions of the columns to its right. The claimed columns
    are then scaled so that the block ``I_alpha x J_alpha`` is orthogonal.

    A restriction counts as zero when its norm is at most ``rank_tol`` times
    the norm of the corresponding input column.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n) or i_partition.n != n:
        raise DimensionMismatch(f"matrix {m.shape} vs partition of size {i_partition.n}")
    work = m.copy()
    # invariant: work == m @ t, with t upper triangular and positive diagonal
    t = np.eye(n)
    col_scale = np.linalg.norm(m, axis=0)
    remaining = list(range(n))
    j_blocks = []
    for rows in i_partition.blocks:
        rows = list(rows)
        claimed = []
        for pos, k in enumerate(remaining):
            u = work[rows, k]
            norm = np.linalg.norm(u)
            if norm <= rank_tol * col_scale[k]:
                continue
            claimed.append(k)
            if len(claimed) > len(rows):
                raise RankDeficiency(
                    f"rows {rows}: more than {len(rows)} independent columns "
                    f"(column {k} residual {norm:.3e}); rank_tol too small"
                )
            uu = u @ u
            for l in remaining[pos + 1 :]:
                c = (work[rows, l] @ u) / uu
                if c != 0.0:
                    work[:, l] -= c * work[:, k]
                    t[:, l] -= c * t[:, k]
        if len(claimed) != len(rows):
            raise RankDeficiency(
                f"rows {rows}: found {len(claimed)} independent columns, need {len(rows)}"
            )
        for k in claimed:
            nk = np.linalg.norm(work[rows, k])
            work[:, k] /= nk
            t[:, k] /= nk
        remaining = [k for k in remaining if k not in claimed]
        work[np.ix_(rows, remaining)] = 0.0
        j_blocks.append(tuple(claimed))
    r = np.triu(np.linalg.solve(t, np.eye(n)))
    return SievedDecomposition(OrderedPartition(tuple(j_blocks)), work, r)


def j_of_i(q, i_set, rank_tol=RANK_TOL):
    """Column set ``J(I)`` induced by the two-block partition ``(I, I^c)``."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    if len(set(i_set)) == n:
        return tuple(range(n))
    part = OrderedPartition.two_block(i_set, n)
    return sieve(q, part, rank_tol).j_partition.blocks[0]


def _block_weights(weights, partition):
    w = np.ones(partition.n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (partition.n,) or not np.all(w > 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be a positive vector of length n")
    w = w.copy()
    for b in partition.blocks:
        w[list(b)] /= w[list(b)].max()
    return w


def boundary_limit(
    pair: SpectralPair, i_partition: OrderedPartition, weights=None, rank_tol=RANK_TOL
) -> SpectralPair:
    """Exact limit of the Toda flow along a scaling family with given partition.

    For ``D(t) = diag(weights) * exp(t * sigma)`` whose equiasymptotic
    partition is ``i_partition``, returns ``(lam, Q_inf)`` where
    ``Q_inf[I_a, J_a]`` is the orthogonal QR factor of
    ``diag(weights[I_a]) @ q_sieved[I_a, J_a]`` and every other block is zero.
    Weights are renormalized to max 1 inside each block. Rows of ``Q_inf``
    are sign-canonicalized (largest entry positive), which leaves the
    reconstructed matrix unchanged.
    """
    w = _block_weights(weights, i_partition)
    dec = sieve(pair.q, i_partition, rank_tol)
    n = pair.n
    q_inf = np.zeros((n, n))
    for rows, cols in zip(i_partition.blocks, dec.j_partition.blocks):
        ix = np.ix_(rows, cols)
        block = w[list(rows), None] * dec.q_sieved[ix]
        q_inf[ix] = qr_pos(block, rank_tol=0.0).q
    return SpectralPair(pair.lam, canonical_row_signs(q_inf))


def flow_limit(pair: SpectralPair, sigma, base_weights=None, tie_tol=TIE_TOL, rank_tol=RANK_TOL):
    """Limit as ``t -> inf`` of the flow along ``diag(base_weights) * exp(t * sigma)``.

    A non-proper partition (constant ``sigma``) never leaves the slice; the
    result is then ``toda_action(pair, log(base_weights))``.
    """
    part = partition_from_direction(sigma, tie_tol)
    if not part.is_proper:
        w = np.ones(pair.n) if base_weights is None else np.asarray(base_weights, dtype=float)
        if not np.all(w > 0):
            raise ValueError("base_weights must be positive")
        return toda_action(pair, np.log(w))
    return boundary_limit(pair, part, base_weights, rank_tol)
