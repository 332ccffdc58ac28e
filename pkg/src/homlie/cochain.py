"""Alternating multilinear forms on matrices and the two cochain complexes.

A k-cochain on the n**2-dimensional matrix space is stored by its
coefficients over the lexicographic basis of strictly increasing
multi-indices into the row-major matrix-unit basis E_(p,q).  Two coboundary
operators act on these:

* the twisted one, built from [x, y]_b and the twist Ad_b, and
* the classical one, built from the commutator with no twist,

both via

    d xi(x_1, ..., x_{k+1}) = sum_{i<j} (-1)**(i+j)
         xi([x_i, x_j], alpha(x_1), ..., omit i, ..., omit j, ..., alpha(x_{k+1}))

(indices counted from zero).  Right/left composition pullbacks

    (b^r xi)(x_1, ..., x_k) = xi(x_1 b, ..., x_k b)
    (b^l xi)(x_1, ..., x_k) = xi(b x_1, ..., b x_k)

link the two complexes: b^r after the twisted coboundary equals the
classical coboundary after b^l, and the twisted coboundary after b^r equals
b^l after the classical coboundary.  Both pullbacks are involutions on
cochains, so ranks and kernels of corresponding degrees agree; the kernels
themselves are exchanged by b^l rather than equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from . import backend
from .homalg import HomLieContext, ad_beta, bracket_beta
from .linalg import Involution, as_square_matrix, rank_and_kernel

__all__ = [
    "Cochain",
    "gl_dim",
    "multi_indices",
    "matrix_unit",
    "matrix_unit_index",
    "basis_stack",
    "dual_basis_cochain",
    "random_cochain",
    "cochain_from_evaluations",
    "evaluate",
    "structure_tables",
    "hom_coboundary_matrix",
    "lie_coboundary_matrix",
    "coboundary_hom",
    "coboundary_lie",
    "pullback_right",
    "pullback_left",
    "intertwining_residuals",
    "CohomologyRow",
    "CohomologyReport",
    "cohomology",
]

#: Largest ambient n accepted by the cohomology driver; the multi-index
#: spaces explode combinatorially beyond this.
MAX_COHOMOLOGY_N = 3


def gl_dim(n: int) -> int:
    """Dimension n**2 of the full matrix space."""
    return n * n


def matrix_unit_index(n: int, p: int, q: int) -> int:
    """Position of E_(p,q) (0-based p, q) in the row-major basis order."""
    if not (0 <= p < n and 0 <= q < n):
        raise ValueError(f"indices out of range for n={n}: ({p}, {q})")
    return p * n + q


def matrix_unit(n: int, p: int, q: int) -> np.ndarray:
    out = np.zeros((n, n))
    out[p, q] = 1.0
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def basis_stack(n: int) -> np.ndarray:
    """All matrix units stacked: shape (n**2, n, n), row-major order."""
    m = gl_dim(n)
    stack = np.eye(m).reshape(m, n, n)
    stack.setflags(write=False)
    return stack


@lru_cache(maxsize=None)
def _multi_indices(m: int, k: int) -> np.ndarray:
    combos = list(itertools.combinations(range(m), k))
    arr = np.array(combos, dtype=np.intp).reshape(len(combos), k)
    arr.setflags(write=False)
    return arr


def multi_indices(m: int, k: int) -> np.ndarray:
    """Strictly increasing k-subsets of range(m), lexicographic, as rows."""
    if k < 0 or m < 0:
        raise ValueError("m and k must be nonnegative")
    return _multi_indices(int(m), int(k))


@dataclass(frozen=True, eq=False)
class Cochain:
    """An alternating k-form on n x n matrices, stored by coefficients."""

    n: int
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        m = gl_dim(self.n)
        if not (0 <= self.degree <= m):
            raise ValueError(f"degree must lie in [0, {m}], got {self.degree}")
        arr = np.array(self.coeffs, dtype=np.float64).reshape(-1)
        expected = comb(m, self.degree)
        if arr.size != expected:
            raise ValueError(
                f"degree {self.degree} cochain on n={self.n} needs "
                f"{expected} coefficients, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("cochain coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __repr__(self):
        return f"Cochain(n={self.n}, degree={self.degree})"


def dual_basis_cochain(n: int, indices) -> Cochain:
    """The dual-basis k-form of one increasing multi-index (0-based)."""
    idx = tuple(int(i) for i in indices)
    if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
        raise ValueError("multi-index must be strictly increasing")
    m = gl_dim(n)
    k = len(idx)
    combos = multi_indices(m, k)
    coeffs = np.zeros(len(combos))
    matches = np.nonzero((combos == np.array(idx, dtype=np.intp)).all(axis=1))[0]
    if matches.size != 1:
        raise ValueError(f"multi-index {idx} out of range for n={n}")
    coeffs[matches[0]] = 1.0
    return Cochain(n, k, coeffs)


def random_cochain(n: int, k: int, rng: np.random.Generator) -> Cochain:
    m = gl_dim(n)
    return Cochain(n, k, rng.uniform(-1.0, 1.0, size=comb(m, k)))


def evaluate(xi: Cochain, args) -> float:
    """Evaluate the form on k matrices (alternating multilinear)."""
    mats = [as_square_matrix(a, name="argument") for a in args]
    if len(mats) != xi.degree:
        raise ValueError(f"degree {xi.degree} form got {len(mats)} arguments")
    if xi.degree == 0:
        return float(xi.coeffs[0])
    for a in mats:
        if a.shape[0] != xi.n:
            raise ValueError("argument dimension does not match the form")
    m = gl_dim(xi.n)
    cols = np.column_stack([a.reshape(-1) for a in mats])
    w = backend.wedge_coefficients(cols, multi_indices(m, xi.degree))
    return float(w @ xi.coeffs)


def cochain_from_evaluations(n: int, k: int, fn) -> Cochain:
    """Coefficients of an alternating form given as a callable on matrices.

    Evaluates ``fn`` on every increasing basis tuple; composing with
    ``evaluate`` is the identity on cochains.
    """
    m = gl_dim(n)
    stack = basis_stack(n)
    combos = multi_indices(m, k)
    coeffs = np.array([float(fn(*(stack[i] for i in row))) for row in combos])
    return Cochain(n, k, coeffs)


# ---------------------------------------------------------------------------
# coordinate tables and coboundary matrices

_TABLE_CACHE: dict = {}
_MATRIX_CACHE: dict = {}


def structure_tables(ctx: HomLieContext) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of the bracket and twist over the matrix-unit basis.

    Returns ``(bracket_table, twist_table)`` with shapes (m, m, m) and
    (m, m): ``bracket_table[a, b]`` is the coefficient vector of the bracket
    of units a and b, ``twist_table[g]`` that of the twist image of unit g.
    """
    key = ctx.beta.key()
    hit = _TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    n = ctx.n
    m = gl_dim(n)
    stack = basis_stack(n)
    bracket_table = np.zeros((m, m, m))
    twist_table = np.empty((m, m))
    for a in range(m):
        twist_table[a] = ad_beta(ctx, stack[a]).reshape(-1)
        for b in range(a + 1, m):
            v = bracket_beta(ctx, stack[a], stack[b]).reshape(-1)
            bracket_table[a, b] = v
            bracket_table[b, a] = -v
    bracket_table.setflags(write=False)
    twist_table.setflags(write=False)
    _TABLE_CACHE[key] = (bracket_table, twist_table)
    return bracket_table, twist_table


def _coboundary_matrix(ctx: HomLieContext, k: int) -> np.ndarray:
    m = gl_dim(ctx.n)
    if not (0 <= k <= m):
        raise ValueError(f"degree must lie in [0, {m}], got {k}")
    key = (ctx.beta.key(), k)
    hit = _MATRIX_CACHE.get(key)
    if hit is not None:
        return hit
    bracket_table, twist_table = structure_tables(ctx)
    mat = backend.assemble_coboundary(
        bracket_table, twist_table, multi_indices(m, k + 1), multi_indices(m, k)
    )
    mat.setflags(write=False)
    _MATRIX_CACHE[key] = mat
    return mat


def hom_coboundary_matrix(ctx: HomLieContext, k: int) -> np.ndarray:
    """Matrix of the twisted degree-k coboundary, shape (C(m,k+1), C(m,k))."""
    return _coboundary_matrix(ctx, k)


def lie_coboundary_matrix(n: int, k: int) -> np.ndarray:
    """Matrix of the classical (commutator, untwisted) coboundary."""
    return _coboundary_matrix(HomLieContext.classical(n), k)


def coboundary_hom(ctx: HomLieContext, xi: Cochain) -> Cochain:
    """Twisted coboundary of a cochain."""
    if xi.n != ctx.n:
        raise ValueError("cochain dimension does not match the context")
    mat = hom_coboundary_matrix(ctx, xi.degree)
    return Cochain(xi.n, xi.degree + 1, mat @ xi.coeffs)


def coboundary_lie(xi: Cochain) -> Cochain:
    """Classical coboundary of a cochain."""
    mat = lie_coboundary_matrix(xi.n, xi.degree)
    return Cochain(xi.n, xi.degree + 1, mat @ xi.coeffs)


# ---------------------------------------------------------------------------
# pullbacks


def _right_transport(beta: Involution) -> np.ndarray:
    """Coordinate matrix of x -> x b on the matrix-unit basis (columns are
    images of basis vectors)."""
    n = beta.n
    m = gl_dim(n)
    stack = basis_stack(n)
    return np.ascontiguousarray((stack @ beta.matrix).reshape(m, m).T)


def _left_transport(beta: Involution) -> np.ndarray:
    n = beta.n
    m = gl_dim(n)
    stack = basis_stack(n)
    return np.ascontiguousarray((beta.matrix @ stack).reshape(m, m).T)


def _pullback(transport: np.ndarray, xi: Cochain) -> Cochain:
    if xi.degree == 0:
        return xi
    m = gl_dim(xi.n)
    combos = multi_indices(m, xi.degree)
    out = np.empty(len(combos))
    for r, row in enumerate(combos):
        args = np.ascontiguousarray(transport[:, row])
        out[r] = backend.wedge_coefficients(args, combos) @ xi.coeffs
    return Cochain(xi.n, xi.degree, out)


def pullback_right(beta: Involution, xi: Cochain) -> Cochain:
    """(b^r xi)(x_1, ..., x_k) = xi(x_1 b, ..., x_k b)."""
    if beta.n != xi.n:
        raise ValueError("involution dimension does not match the cochain")
    return _pullback(_right_transport(beta), xi)


def pullback_left(beta: Involution, xi: Cochain) -> Cochain:
    """(b^l xi)(x_1, ..., x_k) = xi(b x_1, ..., b x_k)."""
    if beta.n != xi.n:
        raise ValueError("involution dimension does not match the cochain")
    return _pullback(_left_transport(beta), xi)


def intertwining_residuals(ctx: HomLieContext, xi: Cochain) -> tuple[float, float, float, float]:
    """Coefficient-norm residuals of the four pullback/coboundary squares.

    Returns ``(r1, r2, r3, r4)``:

    * r1: b^r after twisted d  vs  classical d after b^l   (zero),
    * r2: twisted d after b^r  vs  b^l after classical d   (zero),
    * r3: b^l after classical d  vs  classical d after b^l (nonzero in
      general -- the pullbacks do not commute with a single complex),
    * r4: b^r after twisted d  vs  twisted d after b^r     (nonzero in
      general, same phenomenon on the twisted side).
    """
    beta = ctx.beta
    d_xi = coboundary_hom(ctx, xi)
    dhat_xi = coboundary_lie(xi)
    left_xi = pullback_left(beta, xi)
    right_xi = pullback_right(beta, xi)
    r_d = pullback_right(beta, d_xi)
    dhat_l = coboundary_lie(left_xi)
    d_r = coboundary_hom(ctx, right_xi)
    l_dhat = pullback_left(beta, dhat_xi)
    r1 = float(np.linalg.norm(r_d.coeffs - dhat_l.coeffs))
    r2 = float(np.linalg.norm(d_r.coeffs - l_dhat.coeffs))
    r3 = float(np.linalg.norm(l_dhat.coeffs - dhat_l.coeffs))
    r4 = float(np.linalg.norm(r_d.coeffs - d_r.coeffs))
    return r1, r2, r3, r4


# ---------------------------------------------------------------------------
# cohomology


@dataclass(frozen=True)
class CohomologyRow:
    """Dimension data for one degree of both complexes."""

    degree: int
    dim_space: int
    z_twisted: int
    b_twisted: int
    h_twisted: int
    z_classical: int
    b_classical: int
    h_classical: int
    kernels_coincide: bool
    images_coincide: bool

    @property
    def dims_equal(self) -> bool:
        return (
            self.z_twisted == self.z_classical
            and self.b_twisted == self.b_classical
            and self.h_twisted == self.h_classical
        )


@dataclass(frozen=True)
class CohomologyReport:
    n: int
    k_max: int
    rows: tuple[CohomologyRow, ...]

    @property
    def dims_match(self) -> bool:
        return all(row.dims_equal for row in self.rows)

    @property
    def subspaces_match(self) -> bool:
        return all(row.kernels_coincide and row.images_coincide for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k_max": self.k_max,
            "dims_match": self.dims_match,
            "subspaces_match": self.subspaces_match,
            "rows": [
                {
                    "degree": r.degree,
                    "dim_space": r.dim_space,
                    "twisted": {"Z": r.z_twisted, "B": r.b_twisted, "H": r.h_twisted},
                    "classical": {
                        "Z": r.z_classical,
                        "B": r.b_classical,
                        "H": r.h_classical,
                    },
                    "dims_equal": r.dims_equal,
                    "kernels_coincide": r.kernels_coincide,
                    "images_coincide": r.images_coincide,
                }
                for r in self.rows
            ],
        }

    def format_table(self) -> str:
        head = (
            f"{'k':>2} {'dim':>5} | {'Z tw':>5} {'B tw':>5} {'H tw':>5} |"
            f" {'Z cl':>5} {'B cl':>5} {'H cl':>5} | {'dims':>5} {'Zset':>5} {'Bset':>5}"
        )
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.degree:>2} {r.dim_space:>5} | {r.z_twisted:>5} {r.b_twisted:>5} "
                f"{r.h_twisted:>5} | {r.z_classical:>5} {r.b_classical:>5} "
                f"{r.h_classical:>5} | {str(r.dims_equal):>5} "
                f"{str(r.kernels_coincide):>5} {str(r.images_coincide):>5}"
            )
        return "\n".join(lines)


def _same_span(basis_a: list, basis_b: list, tol: float) -> bool:
    if len(basis_a) != len(basis_b):
        return False
    if not basis_a:
        return True
    stacked = np.column_stack(list(basis_a) + list(basis_b))
    rank, _ = rank_and_kernel(stacked, tol)
    return rank == len(basis_a)


def _same_image(mat_a: np.ndarray, mat_b: np.ndarray, ra: int, rb: int, tol: float) -> bool:
    if ra != rb:
        return False
    if ra == 0:
        return True
    rank, _ = rank_and_kernel(np.hstack([mat_a, mat_b]), tol)
    return rank == ra


def cohomology(ctx: HomLieContext, k_max: int, tol: float = 1e-9) -> CohomologyReport:
    """Brute-force cohomology of both complexes through degree ``k_max``.

    For each degree: nullity and rank of the coboundary matrices give
    dim Z, dim B, and dim H = dim Z - dim B for the twisted and classical
    complexes.  The coincide flags additionally test whether the two kernels
    (and images) agree as subspaces, by ranking the concatenated bases.
    The twisted and classical dimensions always agree -- the complexes are
    exchanged by invertible pullbacks -- but the flags are generally False
    for a twist that is not a sign of the identity, because the pullback
    moves the subspaces while preserving their dimensions.
    """
    n = ctx.n
    if n > MAX_COHOMOLOGY_N:
        raise ValueError(
            f"cohomology supports n <= {MAX_COHOMOLOGY_N}, got n={n}"
        )
    m = gl_dim(n)
    if not (0 <= k_max <= m):
        raise ValueError(f"k_max must lie in [0, {m}], got {k_max}")
    # Rank decisions must be made at the structure-constant scale.  A
    # mathematically zero coboundary matrix assembles to pure cancellation
    # residue (~1e-16) when beta has irrational entries, and a threshold
    # relative to the matrix's own largest entry would then count the noise
    # as rank.  Snapping such all-residue matrices to exact zero keeps
    # conjugated involutions on the same integer tables as their diagonal
    # models.
    bracket_tab, ad_tab = structure_tables(ctx)
    scale = max(
        1.0, float(np.max(np.abs(bracket_tab))), float(np.max(np.abs(ad_tab)))
    )

    def snap(mat: np.ndarray) -> np.ndarray:
        if mat.size and float(np.max(np.abs(mat))) <= tol * scale:
            return np.zeros_like(mat)
        return mat

    rows = []
    prev: dict = {}
    for k in range(k_max + 1):
        d_tw = snap(hom_coboundary_matrix(ctx, k))
        d_cl = snap(lie_coboundary_matrix(n, k))
        rank_tw, ker_tw = rank_and_kernel(d_tw, tol)
        rank_cl, ker_cl = rank_and_kernel(d_cl, tol)
        dim_space = comb(m, k)
        z_tw, z_cl = dim_space - rank_tw, dim_space - rank_cl
        if k == 0:
            b_tw = b_cl = 0
            images_ok = True
        else:
            b_tw, b_cl = prev["rank_tw"], prev["rank_cl"]
            images_ok = _same_image(
                prev["d_tw"], prev["d_cl"], b_tw, b_cl, tol
            )
        kernels_ok = _same_span(ker_tw, ker_cl, tol)
        rows.append(
            CohomologyRow(
                degree=k,
                dim_space=dim_space,
                z_twisted=z_tw,
                b_twisted=b_tw,
                h_twisted=z_tw - b_tw,
                z_classical=z_cl,
                b_classical=b_cl,
                h_classical=z_cl - b_cl,
                kernels_coincide=kernels_ok,
                images_coincide=images_ok,
            )
        )
        prev = {"rank_tw": rank_tw, "rank_cl": rank_cl, "d_tw": d_tw, "d_cl": d_cl}
    return CohomologyReport(n=n, k_max=k_max, rows=tuple(rows))
