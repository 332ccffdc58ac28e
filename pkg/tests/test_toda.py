import csv

import numpy as np
import pytest

from homlie.homalg import HomLieContext
from homlie.linalg import (
    NotSymmetricError,
    conjugated_involution,
    diagonal_signs,
    symmetric_eigenvalues,
    transposition,
)
from homlie.sampling import random_tridiagonal_symmetric
from homlie.toda import (
    FlowBlowupError,
    b_of_l,
    conservation_identity_check,
    integrate,
    rhs,
)

D1111 = diagonal_signs([1, -1, 1, -1])


def test_b_of_l():
    l_mat = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]])
    want = np.array([[0.0, 2.0, 3.0], [-2.0, 0.0, 5.0], [-3.0, -5.0, 0.0]])
    assert np.array_equal(b_of_l(l_mat), want)


def test_rhs_classical_closed_form_2x2():
    # for L = [[a,b],[b,c]] the classical rhs is
    # [[2b^2, b(c-a)], [b(c-a), -2b^2]]
    rng = np.random.default_rng(0)
    ctx = HomLieContext.classical(2)
    for _ in range(10):
        a, b, c = rng.uniform(-2, 2, 3)
        l_mat = np.array([[a, b], [b, c]])
        want = np.array([[2 * b * b, b * (c - a)], [b * (c - a), -2 * b * b]])
        assert np.abs(rhs(ctx, l_mat) - want).max() <= 1e-14


def test_rhs_twisted_trace_witness():
    # the deformed flow does NOT preserve the plain trace: for this L the
    # right-hand side is -2I
    ctx = HomLieContext(diagonal_signs([1, -1]))
    l_mat = np.array([[0.0, 1.0], [1.0, 0.0]])
    r = rhs(ctx, l_mat)
    assert np.array_equal(r, -2.0 * np.eye(2))
    assert abs(np.trace(r) + 4.0) <= 1e-15


def test_rhs_keeps_symmetry():
    rng = np.random.default_rng(1)
    for beta in (D1111, transposition(4, 1, 2)):
        ctx = HomLieContext(beta)
        for _ in range(10):
            a = rng.uniform(-1, 1, (4, 4))
            l_mat = 0.5 * (a + a.T)
            r = rhs(ctx, l_mat)
            assert np.abs(r - r.T).max() <= 1e-13


def test_conservation_identity():
    for beta in (D1111, transposition(4, 1, 2)):
        ctx = HomLieContext(beta)
        report = conservation_identity_check(ctx, samples=1000, seed=2)
        assert report.passed
        assert report.max_abs_trace_pairing <= 1e-12
        # while tr(L * rhs) vanishes, tr(rhs) itself does not for a twist
        assert report.max_abs_trace_rhs > 0.1


def test_classical_flow_is_isospectral():
    rng = np.random.default_rng(3)
    l0 = random_tridiagonal_symmetric(rng, 4)
    ctx = HomLieContext.classical(4)
    traj = integrate(ctx, l0, 5.0, 1e-3, record_every=100)
    drift = traj.drift_summary()
    assert not traj.aborted
    assert drift["eigenvalue_max_abs_drift"] <= 1e-6
    assert drift["symmetry_max_rel_defect"] <= 1e-10


def test_classical_flow_sorts_and_decouples():
    # the classical flow converges to a diagonal matrix with descending
    # diagonal; at t = 40 the off-diagonal part is tiny
    rng = np.random.default_rng(4)
    l0 = random_tridiagonal_symmetric(rng, 4)
    ctx = HomLieContext.classical(4)
    traj = integrate(ctx, l0, 40.0, 1e-3, record_every=1000)
    final = traj.states[-1]
    assert traj.drift_summary()["final_max_offdiag"] <= 1e-3
    diag = np.diag(final)
    assert np.all(np.diff(diag) <= 1e-8)  # descending
    assert np.allclose(
        sorted(diag), symmetric_eigenvalues(l0), atol=1e-5
    )


def test_deformed_flow_conserves_trace_square_not_spectrum():
    rng = np.random.default_rng(5)
    l0 = random_tridiagonal_symmetric(rng, 4)
    ctx = HomLieContext(D1111)
    traj = integrate(ctx, l0, 10.0, 1e-3, record_every=100)
    drift = traj.drift_summary()
    assert not traj.aborted
    assert drift["trace_l2_rel_drift"] <= 1e-8
    assert drift["symmetry_max_rel_defect"] <= 1e-8
    # the full spectrum genuinely moves under the deformed flow
    assert drift["eigenvalue_max_abs_drift"] > 1e-3


def test_deformed_flow_swap_twist():
    rng = np.random.default_rng(6)
    l0 = random_tridiagonal_symmetric(rng, 4)
    ctx = HomLieContext(transposition(4, 1, 2))
    traj = integrate(ctx, l0, 10.0, 1e-3, record_every=100)
    assert traj.drift_summary()["trace_l2_rel_drift"] <= 1e-8


def test_integrator_fourth_order():
    # error against a dt/8 reference shrinks ~16x when dt is halved
    rng = np.random.default_rng(7)
    l0 = random_tridiagonal_symmetric(rng, 4)
    for ctx in (HomLieContext.classical(4), HomLieContext(D1111)):
        dt = 0.05
        ref = integrate(ctx, l0, 1.0, dt / 8).states[-1]
        err1 = np.abs(integrate(ctx, l0, 1.0, dt).states[-1] - ref).max()
        err2 = np.abs(integrate(ctx, l0, 1.0, dt / 2).states[-1] - ref).max()
        assert 12.0 <= err1 / err2 <= 20.0


def test_step_refinement_cross_check():
    rng = np.random.default_rng(8)
    l0 = random_tridiagonal_symmetric(rng, 4)
    ctx = HomLieContext.classical(4)
    coarse = integrate(ctx, l0, 2.0, 1e-2).states[-1]
    fine = integrate(ctx, l0, 2.0, 1e-3).states[-1]
    assert np.abs(coarse - fine).max() <= 1e-8


def test_blow_up_raises_with_partial_trajectory():
    l0 = 50.0 * np.eye(3) + np.full((3, 3), 40.0)
    ctx = HomLieContext.classical(3)
    with pytest.raises(FlowBlowupError) as err:
        integrate(ctx, l0, 100.0, 2.0)
    traj = err.value.trajectory
    assert traj.aborted
    assert traj.drift_summary()["aborted"] is True
    assert len(traj) >= 1  # at least the initial record survives


def test_integrate_validation():
    ctx = HomLieContext(D1111)
    sym = np.eye(4)
    with pytest.raises(NotSymmetricError):
        integrate(ctx, np.triu(np.ones((4, 4))), 1.0, 1e-2)
    with pytest.raises(ValueError):
        integrate(ctx, sym, 1.0, -1e-2)
    with pytest.raises(ValueError):
        integrate(ctx, sym, -1.0, 1e-2)
    with pytest.raises(ValueError):
        integrate(ctx, np.eye(3), 1.0, 1e-2)  # dimension mismatch
    with pytest.raises(ValueError):
        integrate(ctx, sym, 1.0, 1e-2, record_every=0)
    # non-symmetric involutions cannot drive the symmetric flow
    c = np.array([[1.0, -2.0], [0.0, -1.0]])
    gamma = conjugated_involution(c, diagonal_signs([1, -1]))
    with pytest.raises(NotSymmetricError):
        integrate(HomLieContext(gamma), np.eye(2), 1.0, 1e-2)


def test_csv_schema(tmp_path):
    rng = np.random.default_rng(9)
    l0 = random_tridiagonal_symmetric(rng, 3)
    ctx = HomLieContext.classical(3)
    traj = integrate(ctx, l0, 0.1, 1e-2, record_every=2)
    out = tmp_path / "traj.csv"
    traj.write_csv(out)
    with open(out) as fh:
        rows = list(csv.reader(fh))
    want_header = (
        ["t"]
        + [f"L_{i}_{j}" for i in range(1, 4) for j in range(1, 4)]
        + [f"tr{k}" for k in range(1, 4)]
        + [f"eig{k}" for k in range(1, 4)]
        + ["trL2", "maxoffdiag", "maxofftridiag"]
    )
    assert rows[0] == want_header
    assert len(rows) == 1 + len(traj)
    # plot CSV holds t, eigenvalues, trL2 only
    plot = tmp_path / "plot.csv"
    traj.write_plot_csv(plot)
    with open(plot) as fh:
        plot_rows = list(csv.reader(fh))
    assert plot_rows[0] == ["t", "eig1", "eig2", "eig3", "trL2"]
    assert len(plot_rows) == 1 + len(traj)


def test_summary_dict_schema():
    rng = np.random.default_rng(10)
    l0 = random_tridiagonal_symmetric(rng, 3)
    traj = integrate(HomLieContext.classical(3), l0, 0.1, 1e-2)
    summary = traj.summary_dict({"n": 3})
    assert summary["schema"] == 1
    assert summary["n"] == 3
    assert summary["records"] == len(traj)
    assert "eigenvalue_max_abs_drift" in summary["drift"]
    assert summary["config"] == {"n": 3}
