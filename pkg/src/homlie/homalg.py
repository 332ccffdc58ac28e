"""The twisted bracket on square matrices and its morphisms.

For an involution b the bracket is

    [x, y]_b = b x b y b - b y b x b

with companion twist Ad_b(x) = b x b.  The pair satisfies the twisted Jacobi
identity

    [Ad_b(x), [y, z]_b]_b + [Ad_b(y), [z, x]_b]_b + [Ad_b(z), [x, y]_b]_b = 0

while the plain Jacobi identity generically fails once b is not a sign of
the identity.  Conjugating by an invertible matrix transports the whole
structure: x -> c x c**-1 intertwines the brackets of b and c b c**-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import (
    Involution,
    as_square_matrix,
    frobenius,
    identity_involution,
    inverse,
)

__all__ = [
    "HomLieContext",
    "bracket_beta",
    "ad_beta",
    "hom_jacobi_residual",
    "untwisted_jacobi_residual",
    "MorphismData",
    "MorphismReport",
    "check_morphism",
    "conjugation_transport",
]


@dataclass(frozen=True, eq=False)
class HomLieContext:
    """The bracket context: ambient dimension plus the validated involution."""

    beta: Involution

    @classmethod
    def classical(cls, n: int) -> "HomLieContext":
        """The untwisted context (identity involution, commutator bracket)."""
        return cls(identity_involution(n))

    @property
    def n(self) -> int:
        return self.beta.n

    @property
    def beta_matrix(self) -> np.ndarray:
        return self.beta.matrix

    def __eq__(self, other):
        return isinstance(other, HomLieContext) and self.beta == other.beta

    def __hash__(self):
        return hash(("HomLieContext", self.beta.key()))

    def __repr__(self):
        return f"HomLieContext(n={self.n})"


def _check_operand(ctx: HomLieContext, x, name: str) -> np.ndarray:
    x = as_square_matrix(x, name=name)
    if x.shape[0] != ctx.n:
        raise ValueError(f"{name} has dimension {x.shape[0]}, context expects {ctx.n}")
    return x


def bracket_beta(ctx: HomLieContext, x, y) -> np.ndarray:
    """The twisted bracket [x, y]_b = b x b y b - b y b x b."""
    x = _check_operand(ctx, x, "x")
    y = _check_operand(ctx, y, "y")
    b = ctx.beta_matrix
    return b @ (x @ b @ y - y @ b @ x) @ b


def ad_beta(ctx: HomLieContext, x) -> np.ndarray:
    """The companion twist Ad_b(x) = b x b."""
    x = _check_operand(ctx, x, "x")
    b = ctx.beta_matrix
    return b @ x @ b


def hom_jacobi_residual(ctx: HomLieContext, x, y, z) -> float:
    """Frobenius norm of the twisted Jacobi cyclic sum (zero in exact arithmetic)."""
    s = bracket_beta(ctx, ad_beta(ctx, x), bracket_beta(ctx, y, z))
    s = s + bracket_beta(ctx, ad_beta(ctx, y), bracket_beta(ctx, z, x))
    s = s + bracket_beta(ctx, ad_beta(ctx, z), bracket_beta(ctx, x, y))
    return frobenius(s)


def untwisted_jacobi_residual(ctx: HomLieContext, x, y, z) -> float:
    """Frobenius norm of the plain (untwisted) Jacobi cyclic sum for the
    twisted bracket.

    Nonzero in general from dimension three on, which is the point of the
    twist.  It vanishes identically when beta is a sign of the identity,
    and also for every involution on 2x2 matrices (a planar coincidence:
    there the twisted bracket is still a Lie bracket)."""
    s = bracket_beta(ctx, x, bracket_beta(ctx, y, z))
    s = s + bracket_beta(ctx, y, bracket_beta(ctx, z, x))
    s = s + bracket_beta(ctx, z, bracket_beta(ctx, x, y))
    return frobenius(s)


@dataclass(frozen=True, eq=False)
class MorphismData:
    """A candidate morphism between two bracket contexts.

    The linear map may be given as a callable on matrices or as an
    (n**2, n**2) coefficient matrix over the row-major matrix-unit basis.
    """

    source: HomLieContext
    target: HomLieContext
    action: Callable[[np.ndarray], np.ndarray] | None = None
    coefficient_matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.action is None) == (self.coefficient_matrix is None):
            raise ValueError("provide exactly one of action or coefficient_matrix")
        if self.coefficient_matrix is not None:
            m = self.source.n ** 2
            cm = np.array(self.coefficient_matrix, dtype=np.float64)
            if cm.shape != (self.target.n ** 2, m):
                raise ValueError(
                    f"coefficient matrix must have shape {(self.target.n ** 2, m)}, "
                    f"got {cm.shape}"
                )
            cm.setflags(write=False)
            object.__setattr__(self, "coefficient_matrix", cm)

    @classmethod
    def conjugation(cls, c, source: HomLieContext) -> "MorphismData":
        """The transport x -> c x c**-1 onto the conjugated context."""
        c = as_square_matrix(c, name="conjugator")
        cinv = inverse(c)
        gamma = Involution(c @ source.beta_matrix @ cinv)
        target = HomLieContext(gamma)
        return cls(source=source, target=target, action=lambda x: c @ x @ cinv)

    def apply(self, x) -> np.ndarray:
        x = _check_operand(self.source, x, "x")
        if self.action is not None:
            out = as_square_matrix(self.action(x), name="morphism image")
            if out.shape[0] != self.target.n:
                raise ValueError("morphism image has the wrong dimension")
            return out
        n_t = self.target.n
        return (self.coefficient_matrix @ x.reshape(-1)).reshape(n_t, n_t)

    def as_coefficient_matrix(self) -> np.ndarray:
        """The (n_t**2, n_s**2) coordinate matrix over matrix-unit bases."""
        if self.coefficient_matrix is not None:
            return self.coefficient_matrix
        m = self.source.n ** 2
        basis = np.eye(m).reshape(m, self.source.n, self.source.n)
        cols = [self.apply(e).reshape(-1) for e in basis]
        out = np.column_stack(cols)
        out.setflags(write=False)
        return out


@dataclass(frozen=True)
class MorphismReport:
    """Residual maxima from sampling a candidate morphism."""

    samples: int
    linearity_residual: float
    bracket_residual: float
    twist_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.bracket_residual <= self.tolerance
            and self.twist_residual <= self.tolerance
        )


def check_morphism(
    morphism: MorphismData,
    samples: int = 100,
    seed: int = 0,
    tol: float = 1e-8,
) -> MorphismReport:
    """Sample random pairs and report how far the map is from a morphism.

    A morphism must be linear, send source brackets to target brackets, and
    intertwine the twists.  Residuals are Frobenius norms over matrices with
    entries drawn uniformly from [-1, 1].
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    n = morphism.source.n
    lin = bra = twi = 0.0
    for _ in range(samples):
        x = rng.uniform(-1.0, 1.0, size=(n, n))
        y = rng.uniform(-1.0, 1.0, size=(n, n))
        a, b = rng.uniform(-1.0, 1.0, size=2)
        fx = morphism.apply(x)
        fy = morphism.apply(y)
        lin = max(
            lin,
            frobenius(morphism.apply(a * x + b * y) - a * fx - b * fy),
        )
        bra = max(
            bra,
            frobenius(
                morphism.apply(bracket_beta(morphism.source, x, y))
                - bracket_beta(morphism.target, fx, fy)
            ),
        )
        twi = max(
            twi,
            frobenius(
                morphism.apply(ad_beta(morphism.source, x))
                - ad_beta(morphism.target, fx)
            ),
        )
    return MorphismReport(
        samples=samples,
        linearity_residual=lin,
        bracket_residual=bra,
        twist_residual=twi,
        tolerance=tol,
    )


def conjugation_transport(
    ctx: HomLieContext, c
) -> tuple[HomLieContext, MorphismData]:
    """Transport the context along x -> c x c**-1.

    Returns the conjugated context (involution c b c**-1, revalidated) and
    the transporting morphism, which check_morphism confirms exactly.
    """
    morphism = MorphismData.conjugation(c, ctx)
    return morphism.target, morphism
