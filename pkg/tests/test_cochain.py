import itertools
import math

import numpy as np
import pytest

from homlie.cochain import (
    Cochain,
    basis_stack,
    coboundary_hom,
    coboundary_lie,
    cochain_from_evaluations,
    cohomology,
    dual_basis_cochain,
    evaluate,
    gl_dim,
    hom_coboundary_matrix,
    intertwining_residuals,
    lie_coboundary_matrix,
    matrix_unit,
    matrix_unit_index,
    multi_indices,
    pullback_left,
    pullback_right,
    random_cochain,
    structure_tables,
)
from homlie.homalg import HomLieContext, ad_beta, bracket_beta
from homlie.linalg import (
    diagonal_signs,
    identity_involution,
    rank_and_kernel,
    transposition,
)

D11 = diagonal_signs([1, -1])


def test_multi_indices_lexicographic():
    got = multi_indices(4, 2)
    want = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert [tuple(row) for row in got] == want
    assert multi_indices(4, 0).shape == (1, 0)
    assert multi_indices(9, 3).shape == (math.comb(9, 3), 3)


def test_cochain_validation():
    Cochain(2, 1, np.zeros(4))
    with pytest.raises(ValueError):
        Cochain(2, 1, np.zeros(3))  # wrong length
    with pytest.raises(ValueError):
        Cochain(2, 5, np.zeros(1))  # degree beyond n**2
    with pytest.raises(ValueError):
        Cochain(2, 1, np.array([np.inf, 0.0, 0.0, 0.0]))


def _reference_evaluate(xi, mats):
    # independent alternating-sum evaluator: coordinates of each argument
    # over the matrix-unit basis, then an explicit permutation expansion
    coords = [m.reshape(-1) for m in mats]
    total = 0.0
    for c, idx in zip(xi.coeffs, multi_indices(xi.n * xi.n, xi.degree)):
        if c == 0.0:
            continue
        minor = 0.0
        for perm in itertools.permutations(range(xi.degree)):
            sign = 1.0
            for a, b in itertools.combinations(range(xi.degree), 2):
                if perm[a] > perm[b]:
                    sign = -sign
            term = 1.0
            for slot, which in enumerate(perm):
                term *= coords[slot][idx[which]]
            minor += sign * term
        total += c * minor
    return total


def test_evaluate_against_permutation_expansion():
    rng = np.random.default_rng(0)
    for k in (1, 2, 3):
        xi = random_cochain(2, k, rng)
        mats = rng.uniform(-1, 1, (k, 2, 2))
        got = evaluate(xi, mats)
        want = _reference_evaluate(xi, mats)
        assert abs(got - want) <= 1e-12 * (1 + abs(want))


def test_evaluate_is_alternating():
    rng = np.random.default_rng(1)
    xi = random_cochain(2, 2, rng)
    x, y = rng.uniform(-1, 1, (2, 2, 2))
    assert abs(evaluate(xi, (x, x))) <= 1e-15
    assert abs(evaluate(xi, (x, y)) + evaluate(xi, (y, x))) <= 1e-14


def test_degree_zero_evaluation():
    xi = Cochain(2, 0, np.array([2.5]))
    assert evaluate(xi, ()) == 2.5


def test_dual_basis_cochain_and_round_trip():
    idx = matrix_unit_index(2, 0, 1)  # E12 in row-major order
    xi = dual_basis_cochain(2, [idx])
    assert evaluate(xi, (matrix_unit(2, 0, 1),)) == 1.0
    assert evaluate(xi, (matrix_unit(2, 1, 0),)) == 0.0
    rng = np.random.default_rng(2)
    for k in (0, 1, 2):
        xi = random_cochain(2, k, rng)
        rebuilt = cochain_from_evaluations(
            2, k, lambda *mats, xi=xi: evaluate(xi, mats)
        )
        assert np.max(np.abs(rebuilt.coeffs - xi.coeffs)) <= 1e-14


def test_structure_tables_match_bracket():
    ctx = HomLieContext(D11)
    bracket_table, twist_table = structure_tables(ctx)
    stack = basis_stack(2)
    for i in (0, 1, 3):
        for j in (0, 2):
            want = bracket_beta(ctx, stack[i], stack[j]).reshape(-1)
            assert np.array_equal(bracket_table[i, j], want)
        want = ad_beta(ctx, stack[i]).reshape(-1)
        assert np.array_equal(twist_table[i], want)


def test_coboundary_hand_oracle_degree_one():
    # for xi dual to E12 and beta = diag(1,-1): [E11,E12]_b = -E12 so the
    # twisted coboundary gives d xi(E11, E12) = -xi([E11,E12]_b) = 1; the
    # classical bracket gives E12 itself, hence -1
    xi = dual_basis_cochain(2, [matrix_unit_index(2, 0, 1)])
    ctx = HomLieContext(D11)
    args = (matrix_unit(2, 0, 0), matrix_unit(2, 0, 1))
    assert abs(evaluate(coboundary_hom(ctx, xi), args) - 1.0) <= 1e-15
    assert abs(evaluate(coboundary_lie(xi), args) + 1.0) <= 1e-15


def test_coboundary_degree_zero_is_zero_map():
    # brackets of equal arguments vanish, so d of a 0-cochain is the zero
    # 1-cochain in this convention
    ctx = HomLieContext(D11)
    xi = Cochain(2, 0, np.array([3.0]))
    assert np.array_equal(coboundary_hom(ctx, xi).coeffs, np.zeros(4))


def test_coboundary_squares_to_zero():
    rng = np.random.default_rng(3)
    for beta in (D11, transposition(2, 1, 2), identity_involution(2)):
        ctx = HomLieContext(beta)
        for k in (0, 1, 2):
            xi = random_cochain(2, k, rng)
            assert coboundary_hom(ctx, coboundary_hom(ctx, xi)).norm() <= 1e-12
            assert coboundary_lie(coboundary_lie(xi)).norm() <= 1e-12
    ctx = HomLieContext(diagonal_signs([1, -1, 1]))
    xi = random_cochain(3, 1, rng)
    assert coboundary_hom(ctx, coboundary_hom(ctx, xi)).norm() <= 1e-12


def test_pullback_signs_on_dual_basis():
    # for xi dual to E12 and beta = diag(1,-1): the twist sends E12 to -E12,
    # so the right pullback (precompose every slot with the twist) flips the
    # sign while the left pullback (postcompose the values) keeps it
    xi = dual_basis_cochain(2, [matrix_unit_index(2, 0, 1)])
    left = pullback_left(D11, xi)
    right = pullback_right(D11, xi)
    assert np.array_equal(left.coeffs, xi.coeffs)
    assert np.array_equal(right.coeffs, -xi.coeffs)


def test_pullbacks_are_involutions():
    rng = np.random.default_rng(4)
    for beta in (D11, transposition(2, 1, 2)):
        for k in (1, 2, 3):
            xi = random_cochain(2, k, rng)
            assert (
                np.max(
                    np.abs(pullback_left(beta, pullback_left(beta, xi)).coeffs - xi.coeffs)
                )
                <= 1e-13
            )
            assert (
                np.max(
                    np.abs(
                        pullback_right(beta, pullback_right(beta, xi)).coeffs - xi.coeffs
                    )
                )
                <= 1e-13
            )


def test_identity_twist_pullbacks_are_identity():
    rng = np.random.default_rng(5)
    xi = random_cochain(2, 2, rng)
    beta = identity_involution(2)
    assert np.array_equal(pullback_left(beta, xi).coeffs, xi.coeffs)
    assert np.array_equal(pullback_right(beta, xi).coeffs, xi.coeffs)


def test_intertwining_identities_exact():
    # the two mixed identities hold exactly: all data here are integers
    rng = np.random.default_rng(6)
    for beta in (D11, transposition(2, 1, 2)):
        ctx = HomLieContext(beta)
        for k in (1, 2, 3):
            xi = random_cochain(2, k, rng)
            r1, r2, _, _ = intertwining_residuals(ctx, xi)
            assert r1 == 0.0
            assert r2 == 0.0


def test_pullback_coboundary_noncommutation_witness():
    # some basis 1-cochain sees the left pullback fail to commute with the
    # classical coboundary when the twist is genuine
    ctx = HomLieContext(D11)
    worst = 0.0
    for idx in range(4):
        xi = dual_basis_cochain(2, [idx])
        _, _, r3, r4 = intertwining_residuals(ctx, xi)
        worst = max(worst, r3, r4)
    assert worst > 1e-6
    # and for the identity twist everything commutes
    ctx = HomLieContext.classical(2)
    for idx in range(4):
        xi = dual_basis_cochain(2, [idx])
        _, _, r3, r4 = intertwining_residuals(ctx, xi)
        assert max(r3, r4) <= 1e-14


FROZEN_Z = [1, 1, 3, 4, 1]
FROZEN_B = [0, 0, 3, 3, 0]
FROZEN_H = [1, 1, 0, 1, 1]


@pytest.mark.parametrize(
    "beta",
    [D11, transposition(2, 1, 2)],
    ids=["diag", "perm"],
)
def test_cohomology_dimension_table_n2(beta):
    report = cohomology(HomLieContext(beta), 4)
    assert [r.z_twisted for r in report.rows] == FROZEN_Z
    assert [r.b_twisted for r in report.rows] == FROZEN_B
    assert [r.h_twisted for r in report.rows] == FROZEN_H
    assert [r.z_classical for r in report.rows] == FROZEN_Z
    assert [r.h_classical for r in report.rows] == FROZEN_H
    assert report.dims_match


def test_cohomology_dims_against_svd():
    ctx = HomLieContext(D11)
    report = cohomology(ctx, 4)
    m = gl_dim(2)
    for row in report.rows:
        k = row.degree
        d = hom_coboundary_matrix(ctx, k)
        rank = np.linalg.matrix_rank(d, tol=1e-9) if d.size else 0
        assert row.z_twisted == math.comb(m, k) - rank
        dd = lie_coboundary_matrix(2, k)
        rank_cl = np.linalg.matrix_rank(dd, tol=1e-9) if dd.size else 0
        assert row.z_classical == math.comb(m, k) - rank_cl


def test_cohomology_subspace_flags_honest():
    # the dimensions agree but the actual kernels move: the twisted derived
    # span contains the identity matrix ([E12,E21]_b = -I), so the trace
    # functional is closed classically but not twisted
    report = cohomology(HomLieContext(D11), 4)
    assert not report.subspaces_match
    flags = {(r.degree, "Z"): r.kernels_coincide for r in report.rows}
    assert flags[(1, "Z")] is False
    # identity twist: the complexes are literally equal
    report = cohomology(HomLieContext.classical(2), 4)
    assert report.dims_match and report.subspaces_match


def test_twisted_kernel_maps_onto_classical_kernel():
    # the true invariant behind the dimension match: the left pullback takes
    # twisted cocycles to classical cocycles, the right pullback takes
    # classical to twisted, and both directions preserve dimension
    ctx = HomLieContext(D11)
    for k in (1, 2):
        d_tw = hom_coboundary_matrix(ctx, k)
        d_cl = lie_coboundary_matrix(2, k)
        _, ker_tw = rank_and_kernel(d_tw)
        _, ker_cl = rank_and_kernel(d_cl)
        assert len(ker_tw) == len(ker_cl)
        for v in ker_tw:
            moved = pullback_left(D11, Cochain(2, k, v))
            assert np.max(np.abs(d_cl @ moved.coeffs)) <= 1e-9
        for v in ker_cl:
            moved = pullback_right(D11, Cochain(2, k, v))
            assert np.max(np.abs(d_tw @ moved.coeffs)) <= 1e-9


def test_images_transported_bijectively():
    ctx = HomLieContext(D11)
    for k in (1, 2):
        d_tw = hom_coboundary_matrix(ctx, k)
        d_cl = lie_coboundary_matrix(2, k)
        m_out = d_tw.shape[0]
        degree_out = k + 1
        # transport the twisted image with the right pullback; it must span
        # exactly the classical image
        cols = []
        for col in d_tw.T:
            cols.append(pullback_right(D11, Cochain(2, degree_out, col)).coeffs)
        moved = np.column_stack(cols) if cols else np.zeros((m_out, 0))
        ra = np.linalg.matrix_rank(moved, tol=1e-9)
        rb = np.linalg.matrix_rank(d_cl, tol=1e-9)
        assert ra == rb
        both = np.hstack([moved, d_cl])
        assert np.linalg.matrix_rank(both, tol=1e-9) == ra


def test_cohomology_n1():
    report = cohomology(HomLieContext(identity_involution(1)), 1)
    assert [r.h_twisted for r in report.rows] == [1, 1]
    assert [r.h_classical for r in report.rows] == [1, 1]


def test_cohomology_guard_rails():
    with pytest.raises(ValueError):
        cohomology(HomLieContext(diagonal_signs([1, -1, 1, -1])), 2)
    with pytest.raises(ValueError):
        cohomology(HomLieContext(D11), 5)  # beyond dim gl(2)
