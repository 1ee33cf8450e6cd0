from hankel_one.numerics import (
    as_matrix,
    eig_symmetric,
    maximize_1d,
    real_roots,
    sign_variations,
    sturm_sequence,
    svd,
    trim_coefficients,
)
from hankel_one import DegenerateZeroPolynomial, InvalidMatrix, NonSymmetric, ZeroMatrix
import numpy as np
import pytest


def test_sanity():
    assert True


@pytest.fixture
def symmetric4():
    return np.array([[3.0, 2, 1, 1], [2, 1, 1, 2], [1, 1, 2, 5], [1, 2, 5, 2]])


@pytest.fixture
def rng():
    return np.random.default_rng(20211)



def test_as_matrix_rejects_bad_input():
    with pytest.raises(InvalidMatrix):
        as_matrix([1.0, 2.0])

    with pytest.raises(InvalidMatrix):
        as_matrix([[1.0, np.nan]])

    with pytest.raises(InvalidMatrix):
        as_matrix([['a', 'b']])

    with pytest.raises(InvalidMatrix):
        as_matrix(np.zeros((0, 3)))


def test_as_matrix_drops_vanishing_imaginary_parts():
    A = as_matrix([[1 + 0j, 2 + 0j]])
    assert not np.iscomplexobj(A)

    A = as_matrix([[1 + 1j, 2]])
    assert np.iscomplexobj(A)



def test_eig_symmetric_symmetric4(symmetric4):
    eig = eig_symmetric(symmetric4)
    np.testing.assert_allclose(eig.eigenvalues, [8.421093, -3.155074, 3.009151, -0.275170], atol=1e-6)
    np.testing.assert_allclose(eig.reconstruct(), symmetric4, atol=1e-12)
    np.testing.assert_allclose(eig.eigenvectors.T @ eig.eigenvectors, np.eye(4), atol=1e-12)


def test_eig_symmetric_positive_first_on_ties():
    eig = eig_symmetric(np.diag([-2.0, 1.0, 2.0]))
    assert list(eig.eigenvalues) == [2.0, -2.0, 1.0]


def test_eig_symmetric_rejects_asymmetric():
    with pytest.raises(NonSymmetric):
        eig_symmetric([[1.0, 2.0], [0.0, 1.0]])

    with pytest.raises(NonSymmetric):
        eig_symmetric(np.ones((2, 3)))

    with pytest.raises(NonSymmetric):
        eig_symmetric([[1.0, 1j], [-1j, 1.0]])


def test_eig_negated(symmetric4):
    eig = eig_symmetric(symmetric4).negated()
    assert eig.eigenvalues[0] == pytest.approx(-8.421093, abs=1e-6)
    np.testing.assert_allclose(eig.reconstruct(), -symmetric4, atol=1e-12)


def test_eig_sign_normalized(rng):
    B = rng.standard_normal((5, 5))
    eig = eig_symmetric(B + B.T)
    for _, v in eig:
        assert v[np.argmax(np.abs(v))] > 0



def test_svd_reconstructs(rng):
    for shape in ((3, 3), (5, 2), (2, 4)):
        A = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        dec = svd(A)
        np.testing.assert_allclose(dec.reconstruct(), A, atol=1e-12)
        assert np.all(np.diff(dec.s) <= 0)
        pivot = dec.u[np.argmax(np.abs(dec.u[:, 0])), 0]
        assert pivot.imag == pytest.approx(0.0, abs=1e-14)
        assert pivot.real > 0


def test_svd_rank1_is_best_rank1(rng):
    A = rng.standard_normal((4, 3))
    dec = svd(A)
    assert np.linalg.norm(A - dec.rank1(0), 2) == pytest.approx(dec.s[1], rel=1e-10)


def test_svd_zero_matrix():
    with pytest.raises(ZeroMatrix):
        svd(np.zeros((2, 2)))



def test_trim_coefficients():
    np.testing.assert_array_equal(trim_coefficients([1.0, 2.0, 1e-20], 1e-14), [1.0, 2.0])

    with pytest.raises(DegenerateZeroPolynomial):
        trim_coefficients([0.0, 0.0])


def test_sturm_counts_roots():
    # (x - 1)(x - 2)(x + 3)
    p = np.polynomial.polynomial.polyfromroots([1.0, 2.0, -3.0])
    chain = sturm_sequence(p)
    assert sign_variations(chain, -10.0) - sign_variations(chain, 10.0) == 3
    assert sign_variations(chain, 0.0) - sign_variations(chain, 1.5) == 1


def test_real_roots_known():
    p = np.polynomial.polynomial.polyfromroots([-0.5, 0.25, 3.0])
    roots = real_roots(p)
    np.testing.assert_allclose(roots.roots, [-0.5, 0.25, 3.0], atol=1e-12)

    inside = real_roots(p, (-1.0, 1.0))
    np.testing.assert_allclose(inside.roots, [-0.5, 0.25], atol=1e-12)


def test_real_roots_just_outside_interval():
    p = np.polynomial.polynomial.polyfromroots([0.25, 1.0 + 5e-10])
    np.testing.assert_allclose(real_roots(p, (-1.0, 1.0)).roots, [0.25], atol=1e-12)

    p = np.polynomial.polynomial.polyfromroots([-1.0 - 5e-10, 0.5])
    np.testing.assert_allclose(real_roots(p, (-1.0, 1.0)).roots, [0.5], atol=1e-12)

    on_edge = real_roots(np.polynomial.polynomial.polyfromroots([0.25, 1.0]), (-1.0, 1.0))
    np.testing.assert_allclose(on_edge.roots, [0.25, 1.0], atol=1e-12)


def test_real_roots_double_root():
    p = np.polynomial.polynomial.polyfromroots([0.5, 0.5, -1.0])
    np.testing.assert_allclose(real_roots(p).roots, [-1.0, 0.5], atol=1e-7)


def test_real_roots_none():
    assert len(real_roots([1.0, 0.0, 1.0])) == 0
    assert len(real_roots([5.0])) == 0


def test_real_roots_random(rng):
    for _ in range(20):
        expected = np.sort(rng.uniform(-2, 2, 4))
        if np.min(np.diff(expected)) < 1e-3:
            continue
        p = np.polynomial.polynomial.polyfromroots(expected)
        np.testing.assert_allclose(real_roots(p).roots, expected, atol=1e-9)



def test_maximize_1d():
    x, v = maximize_1d(lambda x: np.sin(3 * x), (0.0, 1.0), vectorized=True)
    assert x == pytest.approx(np.pi / 6, abs=1e-6)
    assert v == pytest.approx(1.0, abs=1e-12)


def test_maximize_1d_endpoint():
    x, v = maximize_1d(lambda x: x, (-1.0, 2.0))
    assert x == pytest.approx(2.0, abs=1e-9)
    assert v == pytest.approx(2.0, abs=1e-9)


def test_maximize_1d_threads():
    f = lambda x: -(x - 0.125) ** 2
    serial = maximize_1d(f, (-1.0, 1.0), grid=257)
    threaded = maximize_1d(f, (-1.0, 1.0), grid=257, threads=3)
    assert serial == pytest.approx(threaded)


def test_maximize_1d_small_grid():
    with pytest.raises(ValueError):
        maximize_1d(lambda x: x, (0.0, 1.0), grid=2)
