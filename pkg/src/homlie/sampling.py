"""Random matrix draws shared by the verification suites and tests.

Every function takes a ``numpy.random.Generator`` so determinism is the
caller's decision (seed in, bytes out).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "random_matrix",
    "random_symmetric",
    "random_tridiagonal_symmetric",
    "random_orthogonal",
    "random_orthogonal_with_det",
    "random_invertible",
    "random_well_conditioned",
    "random_gl_negative",
    "random_unit_frobenius",
]


def random_matrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Entries independent uniform on [-scale, scale]."""
    return rng.uniform(-scale, scale, size=(n, n))


def random_symmetric(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    a = random_matrix(rng, n, scale)
    return 0.5 * (a + a.T)


def random_tridiagonal_symmetric(
    rng: np.random.Generator, n: int, scale: float = 1.0
) -> np.ndarray:
    out = np.diag(rng.uniform(-scale, scale, size=n))
    off = rng.uniform(-scale, scale, size=n - 1)
    out += np.diag(off, 1) + np.diag(off, -1)
    return out


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish orthogonal matrix via QR with sign-fixed R diagonal."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_orthogonal_with_det(
    rng: np.random.Generator, n: int, sign: float
) -> np.ndarray:
    q = random_orthogonal(rng, n)
    if np.linalg.det(q) * sign < 0:
        q = q.copy()
        q[:, 0] = -q[:, 0]
    return q


def random_invertible(
    rng: np.random.Generator, n: int, cond_max: float = 20.0
) -> np.ndarray:
    """Uniform-entry matrix, redrawn until its condition number is modest."""
    for _ in range(1000):
        a = random_matrix(rng, n)
        if np.linalg.cond(a) <= cond_max:
            return a
    raise RuntimeError("failed to draw a well-conditioned matrix")  # pragma: no cover


def random_well_conditioned(
    rng: np.random.Generator, n: int, smin: float = 0.5, smax: float = 2.0
) -> np.ndarray:
    """Matrix with singular values in [smin, smax], so cond <= smax/smin."""
    u = random_orthogonal(rng, n)
    v = random_orthogonal(rng, n)
    s = rng.uniform(smin, smax, size=n)
    return (u * s) @ v


def random_gl_negative(
    rng: np.random.Generator, n: int, cond_max: float = 20.0
) -> np.ndarray:
    """Well-conditioned matrix with strictly negative determinant."""
    a = random_invertible(rng, n, cond_max)
    if np.linalg.det(a) > 0:
        a = a.copy()
        a[[0, 1]] = a[[1, 0]]  # row swap flips the sign, keeps singular values
    return a


def random_unit_frobenius(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return a / np.linalg.norm(a)
