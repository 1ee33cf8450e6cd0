from hankel_one.spectral_opt import (
    DiagPlusRank1,
    SpectralCase,
    case1_test,
    degenerate_top,
    diag_rank1_det,
    error_bounds,
    psd_check,
    secular_eval,
    shifted_matrices,
    solve_spectral,
)
from hankel_one.hankel_core import Rank1HankelParams, build_rank1, structured_rows
from hankel_one.numerics import eig_symmetric, real_roots
from hankel_one import HypothesisMismatch, NoRank1Solution, NonSymmetric, PoleHit, RankZero
import numpy as np
import pytest


def test_sanity():
    assert True


@pytest.fixture
def symmetric4():
    return np.array([[3.0, 2, 1, 1], [2, 1, 1, 2], [1, 1, 2, 5], [1, 2, 5, 2]])


@pytest.fixture
def collapsing():
    return np.array([[1.0, 0.0, 0.5], [0.0, 0.5, 0.0], [0.5, 0.0, 1.0]])


@pytest.fixture
def attainable():
    """|l_1| = 1 is attained at z = 0: e_1 is orthogonal to the second
    eigenvector and the secular value there is positive"""
    t = 0.1
    V = np.array([[np.cos(t), 0.0, np.sin(t)],
                  [0.0, 1.0, 0.0],
                  [np.sin(t), 0.0, -np.cos(t)]])
    return (V * np.array([3.0, 1.0, -0.5])) @ V.T


@pytest.fixture
def rng():
    return np.random.default_rng(987)


def _spectral_oracle(A, count=400, steps=60):
    """min over a grid of real generators of min_c ||A - c z z^T||_2,
    by a golden section over c run for all generators at once"""
    N = A.shape[0]
    ts = np.linspace(-1.0, 1.0, count)
    rows = np.concatenate([structured_rows(ts, N), structured_rows(ts, N)[:, ::-1]])
    outer = rows[:, :, None] * rows[:, None, :]
    bound = 2 * np.linalg.norm(A, 2)

    def g(c):
        E = A[None, :, :] - c[:, None, None] * outer
        return np.max(np.abs(np.linalg.eigvalsh(E)), axis=1)

    ratio = (np.sqrt(5) - 1) / 2
    lo, hi = np.full(len(rows), -bound), np.full(len(rows), bound)
    for _ in range(steps):
        a = hi - ratio * (hi - lo)
        b = lo + ratio * (hi - lo)
        left = g(a) < g(b)
        hi = np.where(left, b, hi)
        lo = np.where(left, lo, a)
    return float(np.min(g(0.5 * (lo + hi))))



def test_error_bounds(symmetric4):
    lower, upper = error_bounds(eig_symmetric(symmetric4))
    assert lower == pytest.approx(3.155074, abs=1e-6)
    assert upper == pytest.approx(8.421093, abs=1e-6)


def test_secular_matches_resolvent(symmetric4, rng):
    eig = eig_symmetric(symmetric4)
    A2 = symmetric4 @ symmetric4
    for z in rng.uniform(-2, 2, 5):
        zn = structured_rows(np.array([z]), 4)[0]
        for x in (0.1, 4.0, 5.5):
            expected = zn @ np.linalg.solve(A2 - x ** 2 * np.eye(4), zn)
            assert secular_eval(eig, z, x ** 2) == pytest.approx(expected, rel=1e-9)


def test_second_eigenvector_zeros(symmetric4):
    eig = eig_symmetric(symmetric4)
    roots = real_roots(eig.eigenvectors[:, 1]).roots
    np.testing.assert_allclose(roots, [-0.391861, 0.193813, 1.126551], atol=1e-6)

    values = [secular_eval(eig, r, eig.eigenvalues[1] ** 2) for r in roots]
    np.testing.assert_allclose(values, [-0.455125, -0.808914, -0.002521], atol=1e-5)
    assert case1_test(eig).is_none()


def test_pole_hit(symmetric4):
    eig = eig_symmetric(symmetric4)
    with pytest.raises(PoleHit):
        secular_eval(eig, 0.0, eig.eigenvalues[1] ** 2)


def test_symmetric4(symmetric4):
    sol = solve_spectral(symmetric4)
    assert sol.case is SpectralCase.BISECTION
    assert sol.lambda_tilde == pytest.approx(3.159482, abs=1e-6)
    assert sol.params.z.value == pytest.approx(1.143122, abs=1e-5)
    assert sol.params.c == pytest.approx(9.962056, abs=1e-5)
    assert sol.params.c_unit_left == pytest.approx(3.986514, abs=1e-5)
    assert sol.error_spectral == pytest.approx(3.159482, abs=1e-6)
    assert sol.error_frobenius == pytest.approx(4.932743, abs=1e-5)
    assert sol.iterations > 0


def test_collapsing(collapsing):
    sol = solve_spectral(collapsing)
    target = np.sqrt(11 / 12)
    assert sol.case is SpectralCase.BISECTION
    assert sol.lambda_tilde == pytest.approx(target, abs=1e-9)
    assert abs(sol.params.z.value) == pytest.approx(1.0, abs=1e-5)
    assert sol.params.c == pytest.approx(2.0, abs=1e-6)
    assert sol.error_spectral == pytest.approx(0.957427, abs=1e-6)
    assert sol.error_frobenius == pytest.approx(1.443376, abs=1e-6)
    np.testing.assert_allclose(sol.error_spectrum, [target, 0.5, -target], atol=1e-7)


def test_negative_dominant(symmetric4):
    sol = solve_spectral(-symmetric4)
    assert sol.lambda_tilde == pytest.approx(3.159482, abs=1e-6)
    assert sol.params.c_unit_left == pytest.approx(-3.986514, abs=1e-5)
    assert sol.params.z.value == pytest.approx(1.143122, abs=1e-5)
    assert sol.error_spectral == pytest.approx(3.159482, abs=1e-6)


def test_lambda1_attained(attainable):
    eig = eig_symmetric(attainable)
    found = case1_test(eig)
    assert found.is_some()
    z, (c_low, c_high) = found.unwrap()
    assert z.value == pytest.approx(0.0, abs=1e-10)
    assert c_low < c_high

    e = np.array([1.0, 0.0, 0.0])
    for c in np.linspace(c_low, c_high, 5):
        assert np.linalg.norm(attainable - c * np.outer(e, e), 2) == pytest.approx(1.0, abs=1e-9)

    sol = solve_spectral(attainable)
    assert sol.case is SpectralCase.ACHIEVED
    assert sol.lambda_tilde == pytest.approx(1.0, abs=1e-12)
    assert sol.error_spectral == pytest.approx(1.0, abs=1e-9)
    assert sol.c_interval.unwrap() == pytest.approx((c_low, c_high))


def test_degenerate_same_sign():
    sol = solve_spectral(np.diag([2.0, 2.0]))
    assert sol.case is SpectralCase.DEGENERATE_SAME_SIGN
    assert sol.lambda_tilde == pytest.approx(2.0)
    assert sol.params.c == pytest.approx(4.0)
    assert sol.c_interval.unwrap() == pytest.approx((0.0, 4.0))
    assert sol.error_spectral == pytest.approx(2.0)


def test_degenerate_opposite_sign():
    with pytest.raises(NoRank1Solution) as info:
        solve_spectral(np.diag([1.0, -1.0]))
    assert info.value.diagnostic.case is SpectralCase.DEGENERATE_OPPOSITE_SIGN
    assert info.value.diagnostic.params is None


def test_exact_rank1_hankel():
    A = build_rank1(Rank1HankelParams(5.0, 0.5, 3, 3))
    sol = solve_spectral(A)
    assert sol.case is SpectralCase.ACHIEVED
    assert sol.params.c == pytest.approx(5.0, abs=1e-8)
    assert sol.params.z.value == pytest.approx(0.5, abs=1e-8)
    assert sol.error_spectral == pytest.approx(0.0, abs=1e-9)


def test_one_by_one():
    sol = solve_spectral([[3.0]])
    assert sol.error_spectral == 0.0
    assert sol.params.c == 3.0


def test_errors():
    with pytest.raises(NonSymmetric):
        solve_spectral([[1.0, 2.0], [0.0, 1.0]])

    with pytest.raises(RankZero):
        solve_spectral(np.zeros((3, 3)))



def test_random_invariants(rng):
    for k in range(30):
        N = 3 + k % 2
        B = rng.standard_normal((N, N))
        A = 0.5 * (B + B.T)
        eig = eig_symmetric(A)
        lower, upper = error_bounds(eig)
        sol = solve_spectral(A)

        assert lower - 1e-9 * upper <= sol.lambda_tilde < upper
        assert sol.error_spectral == pytest.approx(sol.lambda_tilde, abs=1e-6 * upper)

        if sol.case is SpectralCase.BISECTION:
            spectrum = np.array(sol.error_spectrum)
            assert np.min(np.abs(spectrum - sol.lambda_tilde)) <= 1e-6 * upper
            assert np.min(np.abs(spectrum + sol.lambda_tilde)) <= 1e-6 * upper

        for m in shifted_matrices(eig, sol.lambda_tilde, sol.params.c, sol.params.z):
            assert np.linalg.eigvalsh(m.matrix())[0] >= -1e-7 * upper

        assert sol.error_spectral <= _spectral_oracle(A) + 1e-4 * upper



def test_secular_increasing_in_lambda_squared(symmetric4, rng):
    eig = eig_symmetric(symmetric4)
    poles = np.sort(eig.eigenvalues ** 2)
    edges = np.concatenate([[0.0], poles, [2 * poles[-1]]])
    for z in rng.uniform(-2.0, 2.0, 5):
        for lo, hi in zip(edges[:-1], edges[1:]):
            gap = hi - lo
            ts = np.linspace(lo + 1e-3 * gap, hi - 1e-3 * gap, 50)
            values = np.array([secular_eval(eig, z, t) for t in ts])
            assert np.all(np.diff(values) > 0)


def test_shifted_matrix_singular_at_optimum(rng):
    for k in range(20):
        N = 3 + k % 2
        B = rng.standard_normal((N, N))
        A = 0.5 * (B + B.T)
        eig = eig_symmetric(A)
        sol = solve_spectral(A)
        if sol.case is not SpectralCase.BISECTION:
            continue
        scale = abs(eig.eigenvalues[0])
        smallest = [np.linalg.eigvalsh(m.matrix())[0]
                    for m in shifted_matrices(eig, sol.lambda_tilde, sol.params.c, sol.params.z)]
        assert min(smallest) >= -1e-7 * scale
        assert min(abs(s) for s in smallest) <= 1e-6 * scale



def test_diag_rank1_det(rng):
    for _ in range(200):
        n = int(rng.integers(1, 6))
        d = DiagPlusRank1(rng.standard_normal(n), rng.standard_normal(n), float(rng.uniform(0.1, 3)),
                          int(rng.choice([-1, 1])))
        expected = np.linalg.det(d.matrix())
        assert diag_rank1_det(d) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_psd_check_against_eigenvalues(rng):
    mismatches = 0
    for k in range(200):
        n = int(rng.integers(2, 6))
        diagonal = rng.uniform(0.1, 3.0, n)
        if k % 2:
            diagonal[rng.integers(n)] *= -1
            d = DiagPlusRank1(diagonal, rng.standard_normal(n), float(rng.uniform(0.1, 3)), 1)
        else:
            d = DiagPlusRank1(diagonal, rng.standard_normal(n), float(rng.uniform(0.1, 3)), -1)
        smallest = np.linalg.eigvalsh(d.matrix())[0]
        if abs(smallest) < 1e-8:
            continue
        mismatches += psd_check(d) != (smallest > 0)
    assert mismatches == 0


def test_psd_check_zero_diagonal():
    assert psd_check(DiagPlusRank1(np.array([0.0, 1.0]), np.array([0.0, 0.5]), 1.0, -1))
    assert not psd_check(DiagPlusRank1(np.array([0.0, 1.0]), np.array([0.5, 0.5]), 1.0, -1))


def test_psd_check_hypotheses():
    with pytest.raises(HypothesisMismatch):
        psd_check(DiagPlusRank1(np.ones(2), np.ones(2), -1.0, 1))

    with pytest.raises(HypothesisMismatch):
        psd_check(DiagPlusRank1(np.array([-1.0, -1.0]), np.ones(2), 1.0, 1))


def test_degenerate_top_any_generator():
    A = np.diag([2.0, 2.0, 0.5])
    eig = eig_symmetric(A)
    for z in (0.0, 0.7, -3.0, 'inf'):
        sol = degenerate_top(eig, z, A)
        assert sol.case is SpectralCase.DEGENERATE_SAME_SIGN
        assert sol.error_spectral == pytest.approx(2.0, abs=1e-12)
        low, high = sol.c_interval.unwrap()
        assert low == 0.0 and high == pytest.approx(sol.params.c)

    negative = degenerate_top(eig_symmetric(-A), 0.5, -A)
    assert negative.params.c < 0
    assert negative.error_spectral == pytest.approx(2.0, abs=1e-12)
