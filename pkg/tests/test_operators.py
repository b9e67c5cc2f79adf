import math

import numpy as np
import pytest

from hankellift.errors import AmbiguousRank, InsufficientCoefficients, NoConvergence
from hankellift.fourier import (
    conj_flip_symbol,
    flip,
    from_analytic,
    multiply_truncate,
    project_analytic,
    symbol_from_laurent,
)
from hankellift.fourier import generator_symbol
from hankellift.operators import (
    hankel_intertwine_residual,
    hankel_matrix,
    hilbert_generator,
    hilbert_hankel,
    matrix_to_jsonable,
    null_space,
    operator_norm,
    shift_matrix,
    singular_values_csv,
    toeplitz_matrix,
)


def random_symbol(seed, window=None):
    rng = np.random.default_rng(seed)
    m = window if window is not None else int(rng.integers(1, 6))
    pairs = [(k, complex(*rng.standard_normal(2))) for k in range(-m, m + 1)]
    return symbol_from_laurent(pairs, window=m)


def test_hankel_hilbert_small_section():
    h = hankel_matrix(hilbert_generator(), 2)
    expected = np.array(
        [[1, 1 / 2, 1 / 3], [1 / 2, 1 / 3, 1 / 4], [1 / 3, 1 / 4, 1 / 5]]
    )
    assert np.allclose(h.entries, expected, atol=0)
    assert h.structure == "hankel"


def test_hankel_ignores_antianalytic_part():
    phi = symbol_from_laurent([(-1, 1.0), (-3, 2.0)])
    assert not hankel_matrix(phi, 3).entries.any()


def test_hankel_shift_symbol():
    h = hankel_matrix(symbol_from_laurent([(1, 1.0)]), 1)
    assert np.array_equal(h.entries, np.array([[0, 1], [1, 0]], dtype=complex))


def hankel_column_oracle(phi, n, col):
    """Apply the definition to the monomial z^col: P_+ (phi * J z^col)."""
    monomial = np.zeros(col + 1, dtype=complex)
    monomial[col] = 1.0
    f = from_analytic(monomial, n + phi.window + col)
    product, _ = multiply_truncate(phi, flip(f), n)
    return project_analytic(product).analytic_part()


def test_hankel_matches_definition_on_monomials():
    for seed in range(5):
        phi = random_symbol(seed)
        n = 10
        h = hankel_matrix(phi, n).entries
        for col in range(n + 1):
            assert np.allclose(h[:, col], hankel_column_oracle(phi, n, col), atol=1e-14)


def test_toeplitz_identity_symbol():
    t = toeplitz_matrix(symbol_from_laurent([(0, 1.0)]), 4)
    assert np.array_equal(t.entries, np.eye(5, dtype=complex))


def test_toeplitz_shift_symbol():
    t = toeplitz_matrix(symbol_from_laurent([(1, 1.0)]), 3)
    assert np.array_equal(t.entries, shift_matrix(3))


def test_toeplitz_real_part_symbol():
    t = toeplitz_matrix(symbol_from_laurent([(1, 1.0), (-1, 1.0)]), 3).entries
    expected = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        expected[i + 1, i] = expected[i, i + 1] = 1.0
    assert np.array_equal(t, expected)


def test_hilbert_hankel_small_orders():
    assert np.array_equal(hilbert_hankel(0).entries, np.array([[1.0]], dtype=complex))
    assert np.allclose(
        hilbert_hankel(1).entries, np.array([[1, 1 / 2], [1 / 2, 1 / 3]]), atol=0
    )


def quadratic_eigenvalues(a, b, c, d):
    """Oracle: eigenvalues of [[a, b], [c, d]] from the characteristic polynomial."""
    tr, det = a + d, a * d - b * c
    disc = math.sqrt(tr * tr - 4 * det)
    return (tr - disc) / 2, (tr + disc) / 2


def test_hilbert_two_by_two_eigenvalues():
    lo, hi = quadratic_eigenvalues(1.0, 0.5, 0.5, 1 / 3)
    assert abs(lo - (4 - math.sqrt(13)) / 6) < 1e-15
    assert abs(hi - (4 + math.sqrt(13)) / 6) < 1e-15
    svals = np.linalg.svd(hilbert_hankel(1).entries, compute_uv=False)
    assert abs(svals[-1] - lo) < 1e-14
    assert abs(svals[0] - hi) < 1e-14


def test_operator_norm_examples():
    assert operator_norm(np.eye(3, dtype=complex)) == 1.0
    assert abs(operator_norm(np.array([[0, 1], [1, 0]], dtype=complex)) - 1.0) < 1e-15
    assert abs(operator_norm(hilbert_hankel(1)) - (4 + math.sqrt(13)) / 6) < 1e-12


def test_operator_norm_power_iteration_path():
    rng = np.random.default_rng(0)
    n = 1100  # above the full-SVD limit
    diag = np.concatenate([[2.0], rng.uniform(0.0, 1.0, n - 1)])
    a = np.diag(diag).astype(complex)
    assert abs(operator_norm(a) - 2.0) < 1e-9


def test_null_space_invertible():
    basis, report = null_space(np.array([[0, 1], [1, 0]], dtype=complex))
    assert basis.shape == (2, 0) and report.dim == 0


def test_null_space_hankel_shift():
    h = hankel_matrix(symbol_from_laurent([(1, 1.0)]), 3)
    basis, report = null_space(h)
    assert report.dim == 2
    expected = np.zeros((4, 2))
    expected[2, 0] = expected[3, 1] = 1.0
    # compare spans via projectors
    assert np.allclose(
        basis @ basis.conj().T, expected @ expected.T, atol=1e-14
    )


def test_null_space_zero_matrix():
    basis, report = null_space(np.zeros((5, 5), dtype=complex))
    assert report.dim == 5
    assert np.allclose(basis.conj().T @ basis, np.eye(5), atol=1e-14)


def test_null_space_contract():
    rng = np.random.default_rng(17)
    for _ in range(6):
        m, n, r = 12, 10, int(rng.integers(1, 6))
        a = (rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))) @ (
            rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
        )
        basis, report = null_space(a)
        assert report.dim == n - r
        assert np.allclose(basis.conj().T @ basis, np.eye(n - r), atol=1e-12)
        assert np.linalg.norm(a @ basis) <= report.cut * (1 + operator_norm(a))


def test_null_space_ambiguous_rank():
    with pytest.raises(AmbiguousRank):
        null_space(np.diag([1.0, 1e-7]).astype(complex), rank_tol=1e-8)


def test_hankel_intertwine_residual_hilbert():
    assert hankel_intertwine_residual(hilbert_generator(), 16) <= 1e-14


def test_hankel_intertwine_residual_monomial_symbol():
    phi = symbol_from_laurent([(3, 1.0)])
    assert hankel_intertwine_residual(phi, 8) == 0.0


def test_hankel_intertwine_residual_random():
    for seed in range(10):
        assert hankel_intertwine_residual(random_symbol(seed), 32) <= 1e-13


def test_hankel_adjoint_is_conjugate_symbol():
    for seed in range(5):
        phi = random_symbol(seed)
        h = hankel_matrix(phi, 12).entries
        h_adj = hankel_matrix(conj_flip_symbol(phi), 12).entries
        assert np.array_equal(h_adj, h.conj().T)


def test_brown_halmos_on_sections():
    for seed in range(5):
        phi = random_symbol(seed)
        n = 14
        t_big = toeplitz_matrix(phi, n + 1).entries
        s = shift_matrix(n + 1)
        squeezed = (s.conj().T @ t_big @ s)[: n + 1, : n + 1]
        assert np.array_equal(squeezed, toeplitz_matrix(phi, n).entries)


def test_hilbert_norm_ladder():
    norms = [operator_norm(hilbert_hankel(m)) for m in (8, 32, 128, 512)]
    assert all(b >= a for a, b in zip(norms, norms[1:]))
    assert all(v < math.pi for v in norms)


def test_hilbert_sections_positive():
    for m in (8, 64, 256):
        svals = np.linalg.svd(hilbert_hankel(m).entries, compute_uv=False)
        assert svals[-1] > 0.0


def test_bounded_generator_window():
    phi = generator_symbol(lambda k: 1.0, k_min=0, k_max=5)
    hankel_matrix(phi, 2)  # needs 0..4, fine
    with pytest.raises(InsufficientCoefficients):
        hankel_matrix(phi, 4)  # needs 0..8


def test_power_iteration_cap():
    from hankellift.operators import _power_norm

    rng = np.random.default_rng(1)
    a = rng.standard_normal((8, 8)).astype(complex)
    with pytest.raises(NoConvergence):
        _power_norm(a, max_iter=1)


def test_matrix_json_export():
    h = hankel_matrix(hilbert_generator(), 1)
    data = matrix_to_jsonable(h)
    assert data["shape"] == [2, 2] and data["structure"] == "hankel"
    assert data["entries"][1] == [0.5, 0.0]  # row-major (0, 1) entry


def test_singular_values_csv():
    text = singular_values_csv(hilbert_hankel(1))
    lines = text.strip().splitlines()
    assert lines[0] == "index,singular_value"
    assert len(lines) == 3
    assert float(lines[1].split(",")[1]) > float(lines[2].split(",")[1])
