"""Dense small-matrix numerics used everywhere else in the package.

All routines work on ``numpy.float64`` arrays and are written for the small
dimensions this package cares about (n up to a few dozen).  Failure is always
explicit: singular inverses, non-symmetric spectra, and overflowing
exponentials raise instead of returning silent garbage.  Public functions
return arrays with the writeable flag cleared so results can be shared and
cached safely.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LinearAlgebraError",
    "SingularMatrixError",
    "NotSymmetricError",
    "MatrixOverflowError",
    "InvolutionError",
    "Involution",
    "as_square_matrix",
    "frobenius",
    "expm",
    "inverse",
    "det",
    "rank_and_kernel",
    "symmetric_eigenvalues",
    "spectrum_probe",
    "trace_powers",
    "charpoly_coefficients",
    "identity_involution",
    "diagonal_signs",
    "transposition",
    "conjugated_involution",
    "involution_from_spec",
    "is_sign_of_identity",
    "parse_matrix",
    "format_matrix",
    "read_matrix",
    "write_matrix",
]

# Relative defect allowed in beta @ beta == I, per ambient dimension.
INVOLUTION_TOL = 1e-12

# Default relative pivot threshold for rank decisions.
RANK_TOL = 1e-9


class LinearAlgebraError(Exception):
    """Base class for numerical failures raised by this module."""


class SingularMatrixError(LinearAlgebraError):
    """Inversion failed; carries a rough condition estimate."""

    def __init__(self, message: str, condition: float = math.inf):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class NotSymmetricError(LinearAlgebraError):
    """Raised when a symmetric-only routine receives an asymmetric input."""


class MatrixOverflowError(LinearAlgebraError):
    """Raised when a computation leaves the range of float64."""


class InvolutionError(ValueError):
    """Raised when a matrix fails the involution contract beta @ beta == I."""


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return a read-only float64 square-matrix copy of ``a``."""
    arr = np.array(a, dtype=np.float64, order="C")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"{name} must be a nonempty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def frobenius(a) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64)))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def expm(a, tol: float = 1e-14) -> np.ndarray:
    """Matrix exponential by scaling and squaring of the Taylor series.

    The argument is scaled by 1/2**s until its Frobenius norm is at most 1/2,
    the series is summed until the next term is below ``tol`` relative to the
    partial sum, and the result is squared s times.  Overflow is detected and
    raised as :class:`MatrixOverflowError` rather than returned as inf/nan.
    """
    a = as_square_matrix(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = a.shape[0]
    norm = frobenius(a)
    if not math.isfinite(norm):
        raise MatrixOverflowError("matrix norm overflows float64")
    squarings = 0 if norm <= 0.5 else int(math.ceil(math.log2(norm / 0.5)))
    with np.errstate(over="ignore", invalid="ignore"):
        x = a / (2.0 ** squarings)
        total = np.eye(n)
        term = np.eye(n)
        k = 1
        while True:
            term = term @ x / k
            total = total + term
            if frobenius(term) <= tol * frobenius(total):
                break
            k += 1
            if k > 120:  # unreachable for scaled input, pure safety stop
                break
        for _ in range(squarings):
            total = total @ total
    if not np.all(np.isfinite(total)):
        raise MatrixOverflowError("matrix exponential overflows float64")
    return _frozen(total)


def inverse(a) -> np.ndarray:
    """Matrix inverse by Gauss-Jordan elimination with partial pivoting.

    The result is verified: if ``a @ inverse(a)`` is not the identity to
    1e-10 * n in Frobenius norm the matrix is declared numerically singular.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        raise SingularMatrixError("zero matrix is singular")
    aug = np.hstack([a, np.eye(n)])
    for col in range(n):
        piv_row = col + int(np.argmax(np.abs(aug[col:, col])))
        piv = aug[piv_row, col]
        if abs(piv) <= 1e-14 * n * scale:
            raise SingularMatrixError(
                "matrix is singular to working precision",
                condition=scale / abs(piv) if piv != 0.0 else math.inf,
            )
        if piv_row != col:
            aug[[col, piv_row]] = aug[[piv_row, col]]
        aug[col] /= piv
        for row in range(n):
            if row != col and aug[row, col] != 0.0:
                aug[row] -= aug[row, col] * aug[col]
    inv = np.ascontiguousarray(aug[:, n:])
    residual = frobenius(a @ inv - np.eye(n))
    if residual > 1e-10 * n:
        raise SingularMatrixError(
            "inverse failed verification, matrix is near-singular",
            condition=frobenius(a) * frobenius(inv),
        )
    return _frozen(inv)


def det(a) -> float:
    """Determinant by LU elimination with partial pivoting.

    Returns exactly 0.0 when a zero pivot is hit, so sign tests on products
    of well-conditioned factors are reliable.
    """
    a = as_square_matrix(a)
    work = a.copy()
    n = work.shape[0]
    sign = 1.0
    for col in range(n):
        piv_row = col + int(np.argmax(np.abs(work[col:, col])))
        piv = work[piv_row, col]
        if piv == 0.0:
            return 0.0
        if piv_row != col:
            work[[col, piv_row]] = work[[piv_row, col]]
            sign = -sign
        factors = work[col + 1:, col] / piv
        work[col + 1:, col:] -= np.outer(factors, work[col, col:])
    return float(sign * np.prod(np.diag(work)))


def rank_and_kernel(mat, tol: float = RANK_TOL) -> tuple[int, list[np.ndarray]]:
    """Numerical rank and kernel basis of a rectangular matrix.

    Elimination with full (row and column) pivoting; a pivot counts while its
    magnitude exceeds ``tol`` times the largest absolute entry of the input.
    Returns ``(rank, basis)`` where ``basis`` is a list of 1-d kernel vectors
    with ``len(basis) == cols - rank``.
    """
    a = np.array(mat, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    rows, cols = a.shape
    if cols == 0:
        return 0, []
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if rows == 0 or scale == 0.0:
        return 0, [_frozen(v) for v in np.eye(cols)]
    threshold = tol * scale
    work = a.copy()
    col_perm = list(range(cols))
    rank = 0
    for step in range(min(rows, cols)):
        sub = np.abs(work[step:, step:])
        r_off, c_off = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[r_off, c_off] <= threshold:
            break
        pr, pc = step + int(r_off), step + int(c_off)
        if pr != step:
            work[[step, pr]] = work[[pr, step]]
        if pc != step:
            work[:, [step, pc]] = work[:, [pc, step]]
            col_perm[step], col_perm[pc] = col_perm[pc], col_perm[step]
        piv = work[step, step]
        factors = work[step + 1:, step] / piv
        work[step + 1:, step:] -= np.outer(factors, work[step, step:])
        rank += 1
    # reduce the pivot block so free columns read off directly
    for i in range(rank):
        work[i, i:] /= work[i, i]
    for i in range(rank - 1, -1, -1):
        for r in range(i):
            f = work[r, i]
            if f != 0.0:
                work[r, i:] -= f * work[i, i:]
    kernel = []
    for free in range(rank, cols):
        v = np.zeros(cols)
        v[col_perm[free]] = 1.0
        for i in range(rank):
            v[col_perm[i]] = -work[i, free]
        kernel.append(_frozen(v))
    return rank, kernel


def symmetric_eigenvalues(a, sym_tol: float = 1e-8) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
    ascending.  Raises :class:`NotSymmetricError` when the input is not
    symmetric to ``sym_tol`` relative to its largest entry."""
    a = as_square_matrix(a)
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > sym_tol * scale:
        raise NotSymmetricError(
            "matrix is not symmetric; use trace_powers or "
            "charpoly_coefficients for spectral data of general matrices"
        )
    s = 0.5 * (a + a.T)
    if n == 1:
        return _frozen(np.array([s[0, 0]]))
    norm = max(frobenius(s), 1.0)
    for _ in range(60):
        off = math.sqrt(max(frobenius(s) ** 2 - float(np.sum(np.diag(s) ** 2)), 0.0))
        if off <= 1e-15 * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = s[p, q]
                if abs(apq) <= 1e-18 * norm:
                    continue
                theta = (s[q, q] - s[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                col_p, col_q = s[:, p].copy(), s[:, q].copy()
                s[:, p] = c * col_p - sn * col_q
                s[:, q] = sn * col_p + c * col_q
                row_p, row_q = s[p, :].copy(), s[q, :].copy()
                s[p, :] = c * row_p - sn * row_q
                s[q, :] = sn * row_p + c * row_q
                s[p, q] = 0.0
                s[q, p] = 0.0
    return _frozen(np.sort(np.diag(s)))


def spectrum_probe(a, sym_tol: float = 1e-8) -> np.ndarray:
    """Sorted eigenvalues of a symmetric matrix (alias with a probing name)."""
    return symmetric_eigenvalues(a, sym_tol=sym_tol)


def trace_powers(a, kmax: int | None = None) -> np.ndarray:
    """Traces of the first ``kmax`` powers: ``[tr a, tr a**2, ...]``.

    Defaults to ``kmax = n``, enough to determine the spectrum.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    if kmax is None:
        kmax = n
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    out = np.empty(kmax)
    power = np.eye(n)
    for k in range(kmax):
        power = power @ a
        out[k] = np.trace(power)
    if not np.all(np.isfinite(out)):
        raise MatrixOverflowError("trace of a matrix power overflows float64")
    return _frozen(out)


def charpoly_coefficients(a) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first.

    Faddeev-LeVerrier recursion: returns ``[1, c1, ..., cn]`` with
    ``det(t I - a) = t**n + c1 t**(n-1) + ... + cn``.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    m = np.eye(n)
    for k in range(1, n + 1):
        am = a @ m
        ck = -np.trace(am) / k
        coeffs[k] = ck
        m = am + ck * np.eye(n)
    if not np.all(np.isfinite(coeffs)):
        raise MatrixOverflowError("characteristic polynomial overflows float64")
    return _frozen(coeffs)


# ---------------------------------------------------------------------------
# involutions


@dataclass(frozen=True, eq=False)
class Involution:
    """A validated linear involution: ``matrix @ matrix == I`` to 1e-12 * n.

    Involutions are their own inverses, which the rest of the package relies
    on; construction is the single place where that contract is checked.
    """

    matrix: np.ndarray

    def __post_init__(self):
        arr = as_square_matrix(self.matrix, name="involution")
        n = arr.shape[0]
        defect = frobenius(arr @ arr - np.eye(n))
        if defect > INVOLUTION_TOL * n:
            raise InvolutionError(
                f"matrix is not an involution: |b @ b - I|_F = {defect:.3e} "
                f"exceeds {INVOLUTION_TOL * n:.3e}"
            )
        object.__setattr__(self, "matrix", arr)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def key(self) -> tuple:
        """Hashable identity used for caching coordinate tables."""
        return (self.n, self.matrix.tobytes())

    def __eq__(self, other):
        return isinstance(other, Involution) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Involution(n={self.n})"


def identity_involution(n: int) -> Involution:
    return Involution(np.eye(n))


def diagonal_signs(signs) -> Involution:
    """Involution ``diag(s1, ..., sn)`` with every ``si`` in {+1, -1}."""
    arr = np.asarray(signs, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvolutionError("signs must be a nonempty 1-d sequence")
    if not np.all(np.abs(arr) == 1.0):
        raise InvolutionError("diagonal involution entries must be +1 or -1")
    return Involution(np.diag(arr))


def transposition(n: int, i: int, j: int) -> Involution:
    """Permutation involution swapping coordinates ``i`` and ``j`` (1-based)."""
    if not (1 <= i < j <= n):
        raise InvolutionError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    p = np.eye(n)
    p[[i - 1, j - 1]] = p[[j - 1, i - 1]]
    return Involution(p)


def conjugated_involution(c, base: Involution) -> Involution:
    """The conjugate ``c @ base @ c**-1``, revalidated as an involution."""
    c = as_square_matrix(c, name="conjugator")
    if c.shape[0] != base.n:
        raise ValueError("conjugator dimension does not match the involution")
    return Involution(c @ base.matrix @ inverse(c))


def is_sign_of_identity(b, tol: float = 1e-12) -> bool:
    """True when ``b`` is +I or -I, the degenerate (untwisted) cases."""
    b = np.asarray(b, dtype=np.float64)
    n = b.shape[0]
    eye = np.eye(n)
    return bool(
        np.allclose(b, eye, atol=tol, rtol=0.0)
        or np.allclose(b, -eye, atol=tol, rtol=0.0)
    )


_DIAG_RE = re.compile(r"diag\(\s*([+-]?1(?:\s*,\s*[+-]?1)*)\s*\)")
_PERM_RE = re.compile(r"perm\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def involution_from_spec(spec: str, n: int | None = None) -> Involution:
    """Build an involution from a compact text form.

    Accepted forms: ``id`` (needs ``n``), ``diag(1,-1,...)`` with entries
    +-1, and ``perm(i,j)`` for the 1-based coordinate swap (needs ``n``).
    """
    s = spec.strip()
    if s == "id":
        if n is None:
            raise InvolutionError("'id' needs an explicit dimension")
        return identity_involution(n)
    m = _DIAG_RE.fullmatch(s)
    if m:
        signs = [int(tok) for tok in m.group(1).split(",")]
        if n is not None and len(signs) != n:
            raise InvolutionError(
                f"diag(...) has {len(signs)} entries but n={n} was requested"
            )
        return diagonal_signs(signs)
    m = _PERM_RE.fullmatch(s)
    if m:
        if n is None:
            raise InvolutionError("'perm(i,j)' needs an explicit dimension")
        i, j = int(m.group(1)), int(m.group(2))
        return transposition(n, min(i, j), max(i, j))
    raise InvolutionError(f"unrecognized involution spec {spec!r}")


# ---------------------------------------------------------------------------
# matrix text I/O


def parse_matrix(text: str) -> np.ndarray:
    """Parse a matrix from the plain text form or from a JSON nested array.

    Text form: first token is n, followed by n*n entries in row-major order
    (line breaks are only cosmetic).  JSON form: ``[[...], ...]``.
    """
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty matrix text")
    if stripped[0] == "[":
        data = json.loads(stripped)
        return as_square_matrix(np.array(data, dtype=np.float64))
    tokens = stripped.split()
    try:
        n = int(tokens[0])
    except ValueError as exc:
        raise ValueError(f"matrix text must start with its dimension: {tokens[0]!r}") from exc
    if n < 1:
        raise ValueError(f"matrix dimension must be positive, got {n}")
    if len(tokens) != 1 + n * n:
        raise ValueError(
            f"matrix text for n={n} needs {n * n} entries, found {len(tokens) - 1}"
        )
    values = np.array([float(tok) for tok in tokens[1:]])
    return as_square_matrix(values.reshape(n, n))


def format_matrix(a) -> str:
    """Render a matrix in the plain text form with 17 significant digits."""
    a = as_square_matrix(a)
    lines = [str(a.shape[0])]
    lines.extend(" ".join(f"{v:.17g}" for v in row) for row in a)
    return "\n".join(lines) + "\n"


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, a) -> None:
    Path(path).write_text(format_matrix(a))
