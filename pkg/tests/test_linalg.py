import math

import numpy as np
import pytest
import scipy.linalg

from homlie.linalg import (
    Involution,
    InvolutionError,
    MatrixOverflowError,
    NotSymmetricError,
    SingularMatrixError,
    as_square_matrix,
    charpoly_coefficients,
    conjugated_involution,
    det,
    diagonal_signs,
    expm,
    format_matrix,
    frobenius,
    identity_involution,
    inverse,
    involution_from_spec,
    parse_matrix,
    rank_and_kernel,
    read_matrix,
    symmetric_eigenvalues,
    trace_powers,
    transposition,
    write_matrix,
)


def test_as_square_matrix_rejects_bad_shapes():
    with pytest.raises(ValueError):
        as_square_matrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        as_square_matrix(np.zeros(4))
    with pytest.raises(ValueError):
        as_square_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_as_square_matrix_freezes():
    a = as_square_matrix([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        a[0, 0] = 9.0


# ---------------------------------------------------------------------------
# expm


def test_expm_zero_is_identity():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))


def test_expm_hyperbolic_closed_form():
    j = np.array([[0.0, 1.0], [1.0, 0.0]])
    got = expm(j)
    assert abs(got[0, 0] - 1.5430806348152437) < 1e-12  # cosh 1
    assert abs(got[0, 1] - 1.1752011936438014) < 1e-12  # sinh 1
    for t in (-2.0, -0.5, 0.5, 3.0):
        want = np.array(
            [[math.cosh(t), math.sinh(t)], [math.sinh(t), math.cosh(t)]]
        )
        assert frobenius(expm(t * j) - want) <= 1e-12 * math.cosh(t)


def test_expm_nilpotent_truncates():
    n = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(expm(n), [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)


def test_expm_against_scipy():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3, 5):
        for scale in (0.1, 1.0, 10.0):
            a = rng.uniform(-scale, scale, (n, n))
            want = scipy.linalg.expm(a)
            got = expm(a)
            assert frobenius(got - want) <= 1e-11 * (1.0 + frobenius(want))


def test_expm_group_law_and_inverse():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.uniform(-1, 1, (3, 3))
        a *= 2.0 / max(frobenius(a), 1e-12)
        # e^{-A} e^{A} = I within 1e-10 for ||A||_F <= 2
        assert frobenius(expm(-a) @ expm(a) - np.eye(3)) <= 1e-10
        s, t = rng.uniform(-1, 1, 2)
        lhs = expm(s * a) @ expm(t * a)
        assert frobenius(lhs - expm((s + t) * a)) <= 1e-10


def test_expm_overflow_raises():
    with pytest.raises(MatrixOverflowError):
        expm(np.full((2, 2), 500.0) * np.eye(2) * 2.0)


def test_lie_product_formula_gap_decreases():
    # || (e^{A/m} e^{B/m})^m - e^{A+B} || shrinks roughly like 1/m.  With
    # entries in [-1,1] the commutator norm puts the m = 2**10 gap in the
    # low 1e-3 range (measured here: ~9e-4 for n = 2, ~8e-3 for n = 5), so
    # the endpoint bounds asserted are the calibrated ones.
    rng = np.random.default_rng(2)
    for n, endpoint in ((2, 2e-3), (5, 2e-2)):
        worst_gaps = np.zeros(4)
        for _ in range(10):
            a = rng.uniform(-1, 1, (n, n))
            b = rng.uniform(-1, 1, (n, n))
            target = expm(a + b)
            gaps = []
            for k in (1, 4, 7, 10):
                m = 2**k
                step = expm(a / m) @ expm(b / m)
                acc = np.eye(n)
                for _ in range(m):
                    acc = acc @ step
                gaps.append(frobenius(acc - target))
            worst_gaps = np.maximum(worst_gaps, gaps)
        assert np.all(np.diff(worst_gaps) < 0)
        assert worst_gaps[-1] <= endpoint


# ---------------------------------------------------------------------------
# inverse / det


def test_inverse_examples():
    assert np.allclose(inverse(np.eye(3)), np.eye(3), atol=1e-14)
    assert np.allclose(
        inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]), atol=1e-14
    )
    p = transposition(2, 1, 2).matrix
    assert np.allclose(inverse(p), p, atol=1e-14)


def test_inverse_against_numpy():
    rng = np.random.default_rng(3)
    for n in (2, 3, 6):
        for _ in range(20):
            a = rng.uniform(-1, 1, (n, n)) + 2.0 * np.eye(n)
            assert frobenius(inverse(a) - np.linalg.inv(a)) <= 1e-9


def test_inverse_singular_raises_with_condition():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError) as err:
        inverse(a)
    assert err.value.condition is None or err.value.condition > 0


def test_det_examples():
    assert det(np.eye(4)) == 1.0
    assert det(transposition(2, 1, 2).matrix) == -1.0
    assert det(np.diag([-1.0, -1.0])) == 1.0
    assert det(np.array([[1.0, 2.0], [2.0, 4.0]])) == 0.0


def test_det_against_numpy_and_multiplicative():
    rng = np.random.default_rng(4)
    for n in (2, 3, 5):
        for _ in range(20):
            a = rng.uniform(-1, 1, (n, n))
            b = rng.uniform(-1, 1, (n, n))
            da, db = det(a), det(b)
            assert abs(da - np.linalg.det(a)) <= 1e-9 * (1 + abs(da))
            dab = det(a @ b)
            assert abs(dab - da * db) <= 1e-9 * (1 + abs(da * db))


# ---------------------------------------------------------------------------
# rank / kernel


def test_rank_and_kernel_examples():
    rank, kernel = rank_and_kernel(np.zeros((3, 3)))
    assert rank == 0 and len(kernel) == 3
    rank, kernel = rank_and_kernel(np.eye(3))
    assert rank == 3 and kernel == []
    rank, kernel = rank_and_kernel(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert rank == 1 and len(kernel) == 1
    v = kernel[0]
    assert abs(v[0] * 1 + v[1] * 2) <= 1e-12  # in the nullspace
    assert abs(v[0] * (-1) - v[1] * 2) <= 1e-12 or abs(v[0] + 2 * v[1]) <= 1e-12


def test_rank_and_kernel_random_cross_check():
    rng = np.random.default_rng(5)
    for rows, cols, r in ((4, 6, 2), (6, 4, 3), (5, 5, 5), (3, 7, 1)):
        a = rng.uniform(-1, 1, (rows, r)) @ rng.uniform(-1, 1, (r, cols))
        rank, kernel = rank_and_kernel(a)
        assert rank == np.linalg.matrix_rank(a, tol=1e-9)
        assert rank + len(kernel) == cols
        for v in kernel:
            assert np.max(np.abs(a @ v)) <= 1e-9
        if kernel:
            k = np.column_stack(kernel)
            assert np.linalg.matrix_rank(k, tol=1e-9) == len(kernel)


def test_rank_scale_invariance():
    rng = np.random.default_rng(6)
    a = rng.uniform(-1, 1, (4, 5))
    base, _ = rank_and_kernel(a)
    for c in (1e-3, 1e3):
        scaled, _ = rank_and_kernel(c * a)
        assert scaled == base


# ---------------------------------------------------------------------------
# eigenvalues / traces / charpoly


def test_symmetric_eigenvalues_examples():
    assert np.allclose(symmetric_eigenvalues(np.diag([3.0, 1.0])), [1.0, 3.0])
    got = symmetric_eigenvalues(np.array([[1.0, 1.0], [1.0, -1.0]]))
    assert np.allclose(got, [-math.sqrt(2), math.sqrt(2)], atol=1e-12)
    assert np.allclose(symmetric_eigenvalues(np.eye(4)), np.ones(4))


def test_symmetric_eigenvalues_against_numpy_and_conjugation():
    rng = np.random.default_rng(7)
    for n in (2, 4, 7):
        a = rng.uniform(-1, 1, (n, n))
        a = 0.5 * (a + a.T)
        got = symmetric_eigenvalues(a)
        assert np.allclose(got, np.linalg.eigvalsh(a), atol=1e-10)
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        rotated = symmetric_eigenvalues(q @ a @ q.T)
        assert np.max(np.abs(rotated - got)) <= 1e-9


def test_symmetric_eigenvalues_rejects_nonsymmetric():
    with pytest.raises(NotSymmetricError):
        symmetric_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_trace_powers_and_charpoly():
    rng = np.random.default_rng(8)
    a = rng.uniform(-1, 1, (4, 4))
    tp = trace_powers(a, 4)  # tp[k-1] = tr(a**k)
    acc = np.eye(4)
    for k in range(1, 5):
        acc = acc @ a
        assert abs(tp[k - 1] - np.trace(acc)) <= 1e-12 * (1 + abs(np.trace(acc)))
    coeffs = charpoly_coefficients(a)
    want = np.poly(a)
    assert np.allclose(coeffs, want, atol=1e-10)


# ---------------------------------------------------------------------------
# involutions


def test_involution_validation():
    identity_involution(3)
    diagonal_signs([1, -1, 1])
    transposition(3, 1, 3)
    with pytest.raises(InvolutionError):
        Involution(np.array([[1.0, 1.0], [0.0, 1.0]]))  # not an involution
    with pytest.raises(InvolutionError):
        diagonal_signs([1, 2])


def test_conjugated_involution():
    c = np.array([[1.0, -2.0], [0.0, -1.0]])
    gamma = conjugated_involution(c, diagonal_signs([1, -1]))
    assert frobenius(gamma.matrix @ gamma.matrix - np.eye(2)) <= 1e-12
    # not symmetric in general, but still an involution
    assert gamma.n == 2


def test_involution_from_spec_forms():
    assert np.array_equal(involution_from_spec("id", 3).matrix, np.eye(3))
    assert np.array_equal(
        involution_from_spec("diag(1,-1)").matrix, np.diag([1.0, -1.0])
    )
    p = involution_from_spec("perm(1,2)", 3)
    assert np.array_equal(p.matrix, transposition(3, 1, 2).matrix)
    with pytest.raises(InvolutionError):
        involution_from_spec("id")  # needs n
    with pytest.raises(InvolutionError):
        involution_from_spec("diag(1,-1)", 3)  # wrong length
    with pytest.raises(InvolutionError):
        involution_from_spec("wat", 2)


# ---------------------------------------------------------------------------
# matrix text I/O


def test_matrix_text_round_trip(tmp_path):
    rng = np.random.default_rng(9)
    a = rng.uniform(-1, 1, (3, 3))
    path = tmp_path / "a.txt"
    write_matrix(path, a)
    back = read_matrix(path)
    assert np.array_equal(back, a)  # 17 significant digits round-trip exactly


def test_parse_matrix_json_form():
    a = parse_matrix("[[1, 0.5], [-2, 3]]")
    assert np.array_equal(a, [[1.0, 0.5], [-2.0, 3.0]])


def test_parse_matrix_header_form():
    text = format_matrix(np.eye(2))
    assert text.splitlines()[0].strip() == "2"
    assert np.array_equal(parse_matrix(text), np.eye(2))


def test_parse_matrix_rejects_garbage():
    with pytest.raises(ValueError):
        parse_matrix("3\n1 2 3")
    with pytest.raises(ValueError):
        parse_matrix("[[1,2],[3]]")
