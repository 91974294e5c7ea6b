import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _util import central_difference, random_pair
from toda_polytope.bfr import bfr
from toda_polytope.errors import EmptyOrFullSet
from toda_polytope.flow import (
    indicator,
    integrate_toda_ode,
    lagrange_polynomial_of_matrix,
    normalize_direction,
    partial_trace,
    partial_trace_rate,
    toda_action,
    toda_action_derivative_at_zero,
    toda_ode_rhs,
    toda_trajectory,
)
from toda_polytope.linalg import SpectralPair, apply_spectral_function, reconstruct
from toda_polytope.sieve import OrderedPartition, boundary_limit


def test_normalize_direction():
    np.testing.assert_array_equal(normalize_direction([1, 1, 1], "zero-max"), [0, 0, 0])
    np.testing.assert_array_equal(normalize_direction([1, 2, 3], "zero-sum"), [-1, 0, 1])
    np.testing.assert_array_equal(normalize_direction([-1, 0, -2], "zero-max"), [-1, 0, -2])
    with pytest.raises(ValueError):
        normalize_direction([1, 2], "bogus")


def test_toda_action_zero_is_identity(hexagon):
    out = toda_action(hexagon, np.zeros(3))
    np.testing.assert_array_equal(out.q, hexagon.q)
    np.testing.assert_array_equal(out.lam, hexagon.lam)


def test_toda_action_constant_shift(rng):
    pair = random_pair(rng, 5)
    tau = rng.uniform(-4, 4, 5)
    a = toda_action(pair, tau)
    b = toda_action(pair, tau + 5.0)
    assert np.abs(a.q - b.q).max() <= 1e-12


def test_toda_action_hexagon_approaches_vertex(hexagon):
    # oracle: the exact boundary limit is diag(2, 4, 1)
    limit = reconstruct(boundary_limit(hexagon, OrderedPartition(((1,), (0,), (2,)))))
    np.testing.assert_allclose(limit, np.diag([2.0, 4.0, 1.0]), atol=1e-12)
    s = reconstruct(toda_action(hexagon, np.log(1e6) * np.array([-1.0, 0.0, -2.0])))
    assert np.abs(s - limit).max() <= 1e-4
    assert np.abs(s - np.diag(np.diag(s))).max() <= 1e-4


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_isospectral(n, seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, n)
    out = toda_action(pair, rng.uniform(-10, 10, n))
    assert np.abs(np.linalg.eigvalsh(reconstruct(out))[::-1] - pair.lam).max() <= 1e-9
    np.testing.assert_array_equal(out.lam, pair.lam)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_group_law(n, seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, n)
    t1, t2 = rng.uniform(-5, 5, n), rng.uniform(-5, 5, n)
    lhs = reconstruct(toda_action(toda_action(pair, t2), t1))
    rhs = reconstruct(toda_action(pair, t1 + t2))
    swapped = reconstruct(toda_action(toda_action(pair, t1), t2))
    assert np.abs(lhs - rhs).max() <= 1e-9
    assert np.abs(swapped - rhs).max() <= 1e-9


def test_step_splitting_matches_single_step(rng):
    pair = random_pair(rng, 4)
    tau = np.array([0.0, -30.0, -60.0, -90.0])
    a = reconstruct(toda_action(pair, tau))
    b = reconstruct(toda_action(pair, tau, max_spread=10.0))
    assert np.abs(a - b).max() <= 1e-10


def test_large_times_stay_finite(rng):
    pair = random_pair(rng, 4)
    out = toda_action(pair, np.array([0.0, -400.0, -800.0, -1200.0]))
    assert np.all(np.isfinite(out.q))
    assert np.abs(out.q @ out.q.T - np.eye(4)).max() <= 1e-12


def test_diagonal_fixed_point(rng):
    lam = np.array([3.0, 1.0, 0.5, -2.0])
    pair = SpectralPair(lam, np.eye(4)[[1, 3, 0, 2]])
    out = toda_action(pair, rng.uniform(-10, 10, 4))
    assert np.abs(reconstruct(out) - reconstruct(pair)).max() <= 1e-12


def test_ode_rhs_trivial_cases(rng):
    v = rng.normal(size=4)
    np.testing.assert_allclose(toda_ode_rhs(np.diag([4.0, 3.0, 1.0, -1.0]), v), 0.0, atol=1e-15)
    s = reconstruct(random_pair(rng, 4))
    np.testing.assert_allclose(toda_ode_rhs(s, np.full(4, 2.5)), 0.0, atol=1e-12)


def test_ode_rhs_identities(rng):
    s = reconstruct(random_pair(rng, 5))
    rhs = toda_ode_rhs(s, rng.normal(size=5))
    assert abs(np.trace(rhs)) <= 1e-12
    assert np.abs(rhs - rhs.T).max() <= 1e-12


def test_lagrange_form_matches_spectral_form(rng):
    pair = random_pair(rng, 5)
    v = rng.normal(size=5)
    p = lagrange_polynomial_of_matrix(reconstruct(pair), pair.lam, v)
    np.testing.assert_allclose(p, apply_spectral_function(pair, v), atol=1e-10)


def test_integrate_trivial(rng):
    s0 = reconstruct(random_pair(rng, 3))
    np.testing.assert_array_equal(integrate_toda_ode(s0, [1.0, 0.0, -1.0], 0.0, 10), s0)
    d = np.diag([3.0, 2.0, -1.0])
    np.testing.assert_allclose(integrate_toda_ode(d, [1.0, 0.0, -1.0], 2.0, 50), d, atol=1e-14)


def test_integrate_matches_closed_form(rng):
    pair = random_pair(rng, 4)
    v = normalize_direction(rng.normal(size=4))
    s1 = integrate_toda_ode(reconstruct(pair), v, 1.0, 1000)
    assert np.abs(s1 - reconstruct(toda_action(pair, v))).max() <= 1e-6


def test_derivative_at_zero(rng):
    pair = random_pair(rng, 4)
    np.testing.assert_array_equal(toda_action_derivative_at_zero(pair, np.zeros(4)), 0.0)
    rho = normalize_direction(rng.normal(size=4))
    an = toda_action_derivative_at_zero(pair, rho)
    assert np.abs(an).max() > 1e-3
    fd = central_difference(lambda h: reconstruct(toda_action(pair, h * rho)))
    assert np.abs(an - fd).max() <= 1e-5 * np.abs(an).max()
    # one-sided quotient as stated, looser because it is only first order
    one_sided = (reconstruct(toda_action(pair, 1e-6 * rho)) - reconstruct(pair)) / 1e-6
    assert np.abs(an - one_sided).max() <= 1e-5 * max(1.0, np.abs(an).max())


def test_partial_trace():
    x = np.array([4.0, 2.0, 1.0])
    assert partial_trace(x, {0, 1}) == 6.0
    assert partial_trace(x, {2}) == 1.0
    assert partial_trace(x, {0}) + partial_trace(x, {1, 2}) == x.sum()
    with pytest.raises(EmptyOrFullSet):
        partial_trace(x, set())
    with pytest.raises(EmptyOrFullSet):
        partial_trace(x, {0, 1, 2})


def test_partial_trace_rate_diagonal_is_zero():
    pair = SpectralPair([4.0, 2.0, 1.0], np.eye(3)[[2, 0, 1]])
    assert partial_trace_rate(pair, {0}) == 0.0


def test_partial_trace_rate_hexagon(hexagon):
    assert partial_trace_rate(hexagon, {0}) > 0.0


def test_partial_trace_rate_finite_difference(rng):
    for _ in range(10):
        n = int(rng.integers(3, 6))
        pair = random_pair(rng, n)
        i_set = sorted(rng.choice(n, size=int(rng.integers(1, n)), replace=False))
        e = indicator(i_set, n)
        fd = central_difference(lambda h: partial_trace(bfr(toda_action(pair, h * e)), i_set))
        rate = partial_trace_rate(pair, i_set)
        assert rate > 1e-14
        assert abs(rate - fd) <= 1e-6 * abs(rate)


def test_trajectory(hexagon, rng):
    [(t, p, x)] = toda_trajectory(hexagon, [1.0, 0.0, -1.0], [0.0])
    assert t == 0.0
    np.testing.assert_array_equal(p.q, hexagon.q)
    np.testing.assert_array_equal(x, bfr(hexagon))

    pair = random_pair(rng, 4)
    ts = np.linspace(-3, 3, 13)
    traj = toda_trajectory(pair, indicator([1, 3], 4), ts)
    for pt in traj:
        assert np.abs(np.linalg.eigvalsh(reconstruct(pt.pair))[::-1] - pair.lam).max() <= 1e-9
    traces = [partial_trace(pt.x, [1, 3]) for pt in traj]
    assert np.all(np.diff(traces) > 0)


def test_huge_times_terminate(hexagon):
    out = toda_action(hexagon, [0.0, -1e13, 1e12])
    # rows sorted by weight (3, 1, 2) claim columns 1, 2, 3 in turn
    np.testing.assert_allclose(np.abs(out.q), np.eye(3)[[1, 2, 0]], atol=1e-15)
