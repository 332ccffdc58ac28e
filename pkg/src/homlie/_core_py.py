"""Pure numpy implementation of the inner-loop kernels.

Same contracts as the compiled module ``homlie._core``; see backend.py for
how one of the two gets selected at import time.
"""

from __future__ import annotations

import numpy as np


def wedge_coefficients(args: np.ndarray, combos: np.ndarray) -> np.ndarray:
    """All k-row minors of the (m, k) argument matrix.

    ``out[c] = det(args[combos[c], :])`` -- the coordinates of the wedge of
    the k argument vectors over the lexicographic multi-index basis.
    """
    if combos.shape[1] == 0:
        return np.ones(combos.shape[0])
    return np.linalg.det(args[combos])


def assemble_coboundary(
    bracket_table: np.ndarray,
    twist_table: np.ndarray,
    combos_out: np.ndarray,
    combos_in: np.ndarray,
) -> np.ndarray:
    """Matrix of the degree-k coboundary over the multi-index bases.

    ``bracket_table[a, b]`` holds the coordinates of the bracket of basis
    elements a and b, ``twist_table[g]`` the coordinates of the twist image
    of basis element g.  Row r of the result is the coefficient vector of
    the coboundary evaluated on the basis tuple ``combos_out[r]``, expanded
    as sum over pairs i < j with sign (-1)**(i+j).
    """
    nrows, kp1 = combos_out.shape
    ncols, k = combos_in.shape
    m = bracket_table.shape[0]
    out = np.zeros((nrows, ncols))
    if k + 1 != kp1:
        raise ValueError("combos_out must have one more column than combos_in")
    if kp1 < 2:
        return out  # no pairs to sum over: the coboundary of scalars is zero
    args = np.empty((m, k))
    for r in range(nrows):
        row = combos_out[r]
        for i in range(kp1):
            for j in range(i + 1, kp1):
                args[:, 0] = bracket_table[row[i], row[j]]
                rest = [row[p] for p in range(kp1) if p != i and p != j]
                if rest:
                    args[:, 1:] = twist_table[rest].T
                sign = 1.0 if (i + j) % 2 == 0 else -1.0
                out[r] += sign * wedge_coefficients(args, combos_in)
    return out


def _rhs(l_mat: np.ndarray, beta: np.ndarray) -> np.ndarray:
    b = np.triu(l_mat, 1) - np.tril(l_mat, -1)
    return (beta @ b @ beta) @ (l_mat @ beta) - (beta @ l_mat @ beta) @ (b @ beta)


def rk4_flow(
    l0: np.ndarray, beta: np.ndarray, dt: float, nsteps: int
) -> tuple[np.ndarray, int, bool]:
    """Advance the twisted Lax flow ``nsteps`` classical RK4 steps.

    The state is re-symmetrized after every step.  Returns
    ``(L, steps_done, ok)``; ``ok`` is False when the state stopped being
    finite, with ``L`` the last finite-entry iterate is replaced by the
    offending state for diagnosis.
    """
    l_mat = np.array(l0, dtype=np.float64)
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(nsteps):
            k1 = _rhs(l_mat, beta)
            k2 = _rhs(l_mat + (0.5 * dt) * k1, beta)
            k3 = _rhs(l_mat + (0.5 * dt) * k2, beta)
            k4 = _rhs(l_mat + dt * k3, beta)
            l_mat = l_mat + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            l_mat = 0.5 * (l_mat + l_mat.T)
            if not np.all(np.isfinite(l_mat)):
                return l_mat, step + 1, False
    return l_mat, nsteps, True
