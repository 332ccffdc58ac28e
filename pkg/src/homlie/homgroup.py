"""Matrix groups with a twisted product F(x)F(y) and their one-parameter
curves.

A subset S of invertible matrices together with a diffeomorphism F forms a
twisted group when F(S) is a group under matrix multiplication.  Here every
F is right multiplication by an involution P, so the translation between the
two pictures is y in F(S)  <=>  y P in S.  The twisted inverse of x is
P x**-1 P: its F-image is the group inverse of F(x).

The curves p(t) = exp(t b X) b with F = right multiplication by b are the
one-parameter families of the exponential family M_b = {exp(b X) b}; their
F-images satisfy the usual group law, and differentiating the conjugated
curve t -> exp(t b X) b Y exp(-t b X) b at t = 0 produces the twisted
bracket [X, Y]_b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .homalg import HomLieContext, ad_beta, bracket_beta
from .linalg import (
    Involution,
    as_square_matrix,
    det,
    diagonal_signs,
    expm,
    frobenius,
    identity_involution,
    inverse,
)
from .sampling import (
    random_gl_negative,
    random_orthogonal_with_det,
    random_unit_frobenius,
    random_well_conditioned,
)

__all__ = [
    "GroupTwist",
    "identity_twist",
    "hom_inverse",
    "ComponentPredicate",
    "component_predicate",
    "default_twist_for",
    "GroupAxiomReport",
    "hom_group_axiom_check",
    "HomGroupElement",
    "m_beta_sampler",
    "m_beta_membership",
    "OneParamSubgroup",
    "OneParamReport",
    "one_param_check",
    "o11_curve",
    "derivative_bracket_check",
    "HomGroupMorphism",
    "MorphismTheoremReport",
    "morphism_theorem_check",
    "DetHomReport",
    "det_homomorphism_check",
]

# Membership tolerance for quadratic-form components (orthogonal and
# signature (1,1)).
ORTHO_TOL = 1e-9

# Determinants closer to zero than this are not trusted for sign tests.
DET_MARGIN = 1e-12


@dataclass(frozen=True, eq=False)
class GroupTwist:
    """The diffeomorphism F = right multiplication by an involution."""

    involution: Involution

    @property
    def n(self) -> int:
        return self.involution.n

    def apply(self, a) -> np.ndarray:
        a = as_square_matrix(a, name="group element")
        return a @ self.involution.matrix

    def unapply(self, a) -> np.ndarray:
        """F**-1; the same multiplication since the twist is an involution."""
        return self.apply(a)


def identity_twist(n: int) -> GroupTwist:
    return GroupTwist(identity_involution(n))


def hom_inverse(x, twist: GroupTwist) -> np.ndarray:
    """The twisted inverse P x**-1 P, whose F-image inverts F(x)."""
    p = twist.involution.matrix
    return p @ inverse(x) @ p


# ---------------------------------------------------------------------------
# group components and the axiom check


@dataclass(frozen=True, eq=False)
class ComponentPredicate:
    """A named component of a matrix group: membership test plus sampler.

    ``membership`` returns True/False, or None when the question cannot be
    decided numerically (used by the exponential family, where membership
    hinges on a principal logarithm existing).
    """

    name: str
    n: int
    membership: Callable[[np.ndarray], bool | None]
    sample: Callable[[np.random.Generator], np.ndarray]


_J11 = np.diag([1.0, -1.0])


def _is_orthogonal(a: np.ndarray, form: np.ndarray) -> bool:
    return frobenius(a.T @ form @ a - form) <= ORTHO_TOL * a.shape[0]


def _o11_member(a: np.ndarray, component: int) -> bool:
    if a.shape != (2, 2) or not _is_orthogonal(a, _J11):
        return False
    d = det(a)
    if abs(d) <= DET_MARGIN or abs(a[0, 0]) <= DET_MARGIN:
        return False
    corner_positive = bool(a[0, 0] > 0)
    det_positive = d > 0
    return {
        1: corner_positive and det_positive,
        2: not corner_positive and det_positive,
        3: corner_positive and not det_positive,
        4: not corner_positive and not det_positive,
    }[component]


def _o11_sample(component: int) -> Callable[[np.random.Generator], np.ndarray]:
    def draw(rng: np.random.Generator) -> np.ndarray:
        t = rng.uniform(-2.0, 2.0)
        c, s = math.cosh(t), math.sinh(t)
        return {
            1: np.array([[c, s], [s, c]]),
            2: np.array([[-c, s], [s, -c]]),
            3: np.array([[c, -s], [s, -c]]),
            4: np.array([[-c, -s], [s, c]]),
        }[component]

    return draw


def m_beta_membership(beta: Involution, a) -> tuple[str, np.ndarray | None]:
    """Decide membership of ``a`` in the exponential family {exp(b X) b}.

    Returns (status, generator) with status one of

    * ``"member"``: a real principal logarithm of ``a @ b`` exists; the
      generator X with a = exp(b X) b is returned,
    * ``"nonmember"``: ``det(a @ b) <= 0``, which no exponential attains,
    * ``"undecidable"``: the spectrum of ``a @ b`` touches the closed
      negative real axis, where the principal logarithm does not exist but
      a non-principal real logarithm still might.
    """
    a = as_square_matrix(a, name="candidate")
    if a.shape[0] != beta.n:
        raise ValueError("candidate dimension does not match the involution")
    b = beta.matrix
    target = a @ b
    d = det(target)
    if d <= DET_MARGIN:
        return "nonmember", None
    eigs = np.linalg.eigvals(target)
    for e in eigs:
        if e.real <= 0.0 and abs(e.imag) <= 1e-9 * max(1.0, abs(e)):
            return "undecidable", None
    from scipy.linalg import logm  # heavy import, keep local

    log = logm(target)
    if np.max(np.abs(np.imag(log))) > 1e-8 * max(1.0, float(np.max(np.abs(log)))):
        return "undecidable", None
    log = np.real(log)
    if frobenius(expm(log) - target) > 1e-8 * (1.0 + frobenius(target)):
        return "undecidable", None
    generator = b @ log  # a = exp(b X) b  <=>  X = b log(a b)
    generator.setflags(write=False)
    return "member", generator


def component_predicate(
    name: str, n: int | None = None, beta: Involution | None = None
) -> ComponentPredicate:
    """Catalog of the group components used by the verification suites.

    Names: ``gl_negative`` (invertible, det < 0), ``orthogonal_negative``
    (orthogonal, det < 0), ``o11_s1`` .. ``o11_s4`` (the four components of
    the 2x2 group preserving diag(1,-1)), and ``m_beta`` (the exponential
    family of ``beta``, membership decided via the principal logarithm).
    """
    if name == "gl_negative":
        if n is None:
            raise ValueError("gl_negative needs n")

        def member(a, n=n):
            return a.shape == (n, n) and det(a) < -DET_MARGIN

        return ComponentPredicate(
            name, n, member, lambda rng, n=n: random_gl_negative(rng, n)
        )
    if name == "orthogonal_negative":
        if n is None:
            raise ValueError("orthogonal_negative needs n")

        def member(a, n=n):
            return (
                a.shape == (n, n)
                and _is_orthogonal(a, np.eye(n))
                and det(a) < -DET_MARGIN
            )

        return ComponentPredicate(
            name, n, member, lambda rng, n=n: random_orthogonal_with_det(rng, n, -1.0)
        )
    if name.startswith("o11_s"):
        component = int(name[-1])
        if component not in (1, 2, 3, 4):
            raise ValueError(f"unknown component {name!r}")
        return ComponentPredicate(
            name,
            2,
            lambda a, c=component: _o11_member(a, c),
            _o11_sample(component),
        )
    if name == "m_beta":
        if beta is None:
            raise ValueError("m_beta needs an involution")

        def member(a, beta=beta):
            status, _ = m_beta_membership(beta, a)
            if status == "undecidable":
                return None
            return status == "member"

        def draw(rng: np.random.Generator, beta=beta) -> np.ndarray:
            x = random_unit_frobenius(rng, beta.n)
            return expm(beta.matrix @ x) @ beta.matrix

        return ComponentPredicate(name, beta.n, member, draw)
    raise ValueError(f"unknown component {name!r}")


def default_twist_for(name: str, n: int | None = None, beta: Involution | None = None) -> GroupTwist:
    """The twist each catalog component is normally paired with."""
    if name in ("gl_negative", "orthogonal_negative"):
        if n is None:
            raise ValueError(f"{name} needs n")
        from .linalg import transposition

        return GroupTwist(transposition(n, 1, 2))
    if name == "o11_s1":
        return identity_twist(2)
    if name == "o11_s2":
        return GroupTwist(diagonal_signs([-1, -1]))
    if name == "o11_s3":
        return GroupTwist(diagonal_signs([1, -1]))
    if name == "o11_s4":
        return GroupTwist(diagonal_signs([-1, 1]))
    if name == "m_beta":
        if beta is None:
            raise ValueError("m_beta needs an involution")
        return GroupTwist(beta)
    raise ValueError(f"unknown component {name!r}")


@dataclass(frozen=True)
class GroupAxiomReport:
    """Sampled evidence that F maps a component onto a matrix group."""

    predicate: str
    samples: int
    closure_failures: int
    closure_undecided: int
    identity_in_image: bool
    inverse_failures: int
    inverse_undecided: int
    hom_inverse_residual: float
    hom_inverse_tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.closure_failures == 0
            and self.identity_in_image
            and self.inverse_failures == 0
            and self.hom_inverse_residual <= self.hom_inverse_tolerance
        )


def hom_group_axiom_check(
    pred: ComponentPredicate,
    twist: GroupTwist,
    samples: int = 100,
    seed: int = 0,
    hom_inverse_tol: float = 1e-10,
) -> GroupAxiomReport:
    """Sample the group axioms of F(S) and the twisted-inverse law.

    Closure: products F(x)F(y) must land in F(S); identity: I in F(S);
    inverses: F(x)**-1 in F(S); and the twisted inverse y = P x**-1 P must
    satisfy F(y) = F(x)**-1 up to ``hom_inverse_tol``.  Membership questions
    that come back undecided (possible only for the exponential family) are
    counted separately and do not fail the report.
    """
    if pred.n != twist.n:
        raise ValueError("predicate and twist dimensions differ")
    rng = np.random.default_rng(seed)
    p = twist.involution.matrix
    closure_failures = closure_undecided = 0
    inverse_failures = inverse_undecided = 0
    max_residual = 0.0
    identity_ok = pred.membership(np.asarray(p)) is True
    for _ in range(samples):
        x = pred.sample(rng)
        y = pred.sample(rng)
        fx = twist.apply(x)
        fy = twist.apply(y)
        verdict = pred.membership((fx @ fy) @ p)
        if verdict is None:
            closure_undecided += 1
        elif not verdict:
            closure_failures += 1
        fx_inv = inverse(fx)
        verdict = pred.membership(fx_inv @ p)
        if verdict is None:
            inverse_undecided += 1
        elif not verdict:
            inverse_failures += 1
        residual = frobenius(twist.apply(hom_inverse(x, twist)) - fx_inv)
        max_residual = max(max_residual, residual)
    return GroupAxiomReport(
        predicate=pred.name,
        samples=samples,
        closure_failures=closure_failures,
        closure_undecided=closure_undecided,
        identity_in_image=identity_ok,
        inverse_failures=inverse_failures,
        inverse_undecided=inverse_undecided,
        hom_inverse_residual=max_residual,
        hom_inverse_tolerance=hom_inverse_tol,
    )


# ---------------------------------------------------------------------------
# the exponential family


@dataclass(frozen=True, eq=False)
class HomGroupElement:
    """An element exp(b X) b of the exponential family, with its generator."""

    generator: np.ndarray
    beta: Involution
    value: np.ndarray

    @classmethod
    def from_generator(cls, x, beta: Involution) -> "HomGroupElement":
        x = as_square_matrix(x, name="generator")
        if x.shape[0] != beta.n:
            raise ValueError("generator dimension does not match the involution")
        value = expm(beta.matrix @ x) @ beta.matrix
        value.setflags(write=False)
        return cls(generator=x, beta=beta, value=value)

    def hom_inverse_element(self) -> "HomGroupElement":
        """The twisted inverse exp(-b X) b, staying inside the family."""
        return HomGroupElement.from_generator(-self.generator, self.beta)

    def hom_inverse_residual(self) -> float:
        """|F(y) - F(x)**-1| for y the twisted inverse; zero in theory."""
        b = self.beta.matrix
        fx = self.value @ b
        fy = self.hom_inverse_element().value @ b
        return frobenius(fy - inverse(fx))


def m_beta_sampler(
    beta: Involution, count: int = 10, seed: int = 0, radius: float = 1.0
) -> list[HomGroupElement]:
    """Draw elements exp(b X) b with |X|_F = radius."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        x = radius * random_unit_frobenius(rng, beta.n)
        out.append(HomGroupElement.from_generator(x, beta))
    return out


# ---------------------------------------------------------------------------
# one-parameter curves


@dataclass(frozen=True, eq=False)
class OneParamSubgroup:
    """The curve p(t) = exp(t b X) b inside the exponential family."""

    generator: np.ndarray
    beta: Involution

    def __post_init__(self):
        x = as_square_matrix(self.generator, name="generator")
        if x.shape[0] != self.beta.n:
            raise ValueError("generator dimension does not match the involution")
        object.__setattr__(self, "generator", x)

    def __call__(self, t: float) -> np.ndarray:
        return expm(float(t) * (self.beta.matrix @ self.generator)) @ self.beta.matrix

    def twist(self) -> GroupTwist:
        return GroupTwist(self.beta)


@dataclass(frozen=True)
class OneParamReport:
    identity_residual: float
    max_group_law_residual: float
    grid: tuple[float, ...]

    def max_residual(self) -> float:
        return max(self.identity_residual, self.max_group_law_residual)


def one_param_check(
    curve, t_grid, twist: GroupTwist | None = None
) -> OneParamReport:
    """Check F(p(0)) = I and F(p(t+s)) = F(p(t)) F(p(s)) over a grid.

    ``curve`` is an :class:`OneParamSubgroup` (twist optional, defaults to
    right multiplication by its involution) or any callable t -> matrix
    (twist required).
    """
    if twist is None:
        if not isinstance(curve, OneParamSubgroup):
            raise ValueError("a plain callable curve needs an explicit twist")
        twist = curve.twist()
    grid = tuple(float(t) for t in t_grid)
    if not grid:
        raise ValueError("t_grid must be nonempty")
    n = twist.n
    identity_residual = frobenius(twist.apply(curve(0.0)) - np.eye(n))
    images = {t: twist.apply(curve(t)) for t in grid}
    law = 0.0
    for t in grid:
        for s in grid:
            lhs = twist.apply(curve(t + s))
            law = max(law, frobenius(lhs - images[t] @ images[s]))
    return OneParamReport(
        identity_residual=identity_residual,
        max_group_law_residual=law,
        grid=grid,
    )


def o11_curve(component: int) -> tuple[Callable[[float], np.ndarray], GroupTwist, OneParamSubgroup]:
    """Closed-form hyperbolic curve through one  component, its twist, and
    the equivalent exponential-family curve.

    Component 1 is the untwisted subgroup; components 2-4 need the sign
    twists -I, diag(1,-1), diag(-1,1) respectively.
    """
    j = np.array([[0.0, 1.0], [1.0, 0.0]])
    if component == 1:
        closed = lambda t: np.array(
            [[math.cosh(t), math.sinh(t)], [math.sinh(t), math.cosh(t)]]
        )
        beta = identity_involution(2)
        x = j
    elif component == 2:
        closed = lambda t: np.array(
            [[-math.cosh(t), math.sinh(t)], [math.sinh(t), -math.cosh(t)]]
        )
        beta = diagonal_signs([-1, -1])
        x = j
    elif component == 3:
        closed = lambda t: np.array(
            [[math.cosh(t), -math.sinh(t)], [math.sinh(t), -math.cosh(t)]]
        )
        beta = diagonal_signs([1, -1])
        x = np.array([[0.0, 1.0], [-1.0, 0.0]])
    elif component == 4:
        closed = lambda t: np.array(
            [[-math.cosh(t), -math.sinh(t)], [math.sinh(t), math.cosh(t)]]
        )
        beta = diagonal_signs([-1, 1])
        x = np.array([[0.0, 1.0], [-1.0, 0.0]])
    else:
        raise ValueError(f"component must be 1..4, got {component}")
    return closed, GroupTwist(beta), OneParamSubgroup(x, beta)


def derivative_bracket_check(
    ctx: HomLieContext, x, y, h: float = 1e-4
) -> float:
    """Residual of the derivative identity

        d/dt exp(t b X) b Y exp(-t b X) b |_{t=0} = [X, Y]_b

    by central differences at stepsize ``h``; second-order accurate, so the
    residual shrinks by about 4 when h is halved.
    """
    x = as_square_matrix(x, name="x")
    y = as_square_matrix(y, name="y")
    b = ctx.beta_matrix
    bx = b @ x

    def curve(t: float) -> np.ndarray:
        return expm(t * bx) @ b @ y @ expm(-t * bx) @ b

    quotient = (curve(h) - curve(-h)) / (2.0 * h)
    return frobenius(quotient - bracket_beta(ctx, x, y))


# ---------------------------------------------------------------------------
# the homomorphism construction


@dataclass(frozen=True, eq=False)
class HomGroupMorphism:
    """Conjugation data relating two exponential families.

    From a source involution gamma and an invertible C, the group-level map
    is Phi(A) = C A C**-1 and the generator-level map phi(X) = C X C**-1;
    the target involution is beta = C gamma C**-1 (revalidated).
    """

    conjugator: np.ndarray
    gamma: Involution
    beta: Involution

    @classmethod
    def from_conjugator(cls, c, gamma: Involution) -> "HomGroupMorphism":
        c = as_square_matrix(c, name="conjugator")
        if c.shape[0] != gamma.n:
            raise ValueError("conjugator dimension does not match the involution")
        beta = Involution(c @ gamma.matrix @ inverse(c))
        return cls(conjugator=c, gamma=gamma, beta=beta)

    def phi_group(self, a) -> np.ndarray:
        return self.conjugator @ as_square_matrix(a, "a") @ inverse(self.conjugator)

    def phi_algebra(self, x) -> np.ndarray:
        return self.phi_group(x)


@dataclass(frozen=True)
class MorphismTheoremReport:
    """Residual maxima of the five identities tying Phi and phi together."""

    samples: int
    exp_intertwining: float
    twist_equivariance: float
    conjugation_covariance: float
    bracket_preservation: float
    generator_derivative: float
    exact_tolerance: float
    derivative_tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.exp_intertwining <= self.exact_tolerance
            and self.twist_equivariance <= self.exact_tolerance
            and self.conjugation_covariance <= self.exact_tolerance
            and self.bracket_preservation <= self.exact_tolerance
            and self.generator_derivative <= self.derivative_tolerance
        )


def morphism_theorem_check(
    morphism: HomGroupMorphism,
    samples: int = 100,
    seed: int = 0,
    h: float = 1e-4,
    exact_tol: float = 1e-9,
    derivative_tol: float = 1e-6,
    phi_override: Callable[[np.ndarray], np.ndarray] | None = None,
) -> MorphismTheoremReport:
    """Sample the compatibility identities of the conjugation morphism.

    With gamma the source and beta = C gamma C**-1 the target involution,
    Phi(A) = C A C**-1 and phi = Phi restricted to generators must satisfy

    1. Phi(exp(gamma X)) = exp(beta phi(X)),
    2. phi(Ad_gamma(X)) = Ad_beta(phi(X)),
    3. phi(exp(gamma X) gamma Y exp(-gamma X) gamma)
       = Phi(exp(gamma X) gamma) phi(Y) Phi(exp(-gamma X) gamma),
    4. phi([X, Y]_gamma) = [phi(X), phi(Y)]_beta,
    5. beta phi(X) = d/dt Phi(exp(t gamma X)) |_{t=0}  (central difference).

    ``phi_override`` substitutes a corrupted generator map; a correct
    morphism with an overridden phi must fail, which the negative-control
    tests rely on.
    """
    rng = np.random.default_rng(seed)
    g = morphism.gamma.matrix
    b = morphism.beta.matrix
    n = morphism.gamma.n
    phi = phi_override if phi_override is not None else morphism.phi_algebra
    src = HomLieContext(morphism.gamma)
    dst = HomLieContext(morphism.beta)
    r_exp = r_twist = r_conj = r_bracket = r_deriv = 0.0
    for _ in range(samples):
        x = random_unit_frobenius(rng, n)
        y = random_unit_frobenius(rng, n)
        phix = phi(x)
        phiy = phi(y)
        r_exp = max(
            r_exp,
            frobenius(morphism.phi_group(expm(g @ x)) - expm(b @ phix)),
        )
        r_twist = max(
            r_twist, frobenius(phi(ad_beta(src, x)) - ad_beta(dst, phix))
        )
        egx = expm(g @ x)
        egx_inv = expm(-(g @ x))
        lhs = phi(egx @ g @ y @ egx_inv @ g)
        rhs = (
            morphism.phi_group(egx @ g)
            @ phiy
            @ morphism.phi_group(egx_inv @ g)
        )
        r_conj = max(r_conj, frobenius(lhs - rhs))
        r_bracket = max(
            r_bracket,
            frobenius(phi(bracket_beta(src, x, y)) - bracket_beta(dst, phix, phiy)),
        )
        quotient = (
            morphism.phi_group(expm(h * (g @ x)))
            - morphism.phi_group(expm(-h * (g @ x)))
        ) / (2.0 * h)
        r_deriv = max(r_deriv, frobenius(b @ phix - quotient))
    return MorphismTheoremReport(
        samples=samples,
        exp_intertwining=r_exp,
        twist_equivariance=r_twist,
        conjugation_covariance=r_conj,
        bracket_preservation=r_bracket,
        generator_derivative=r_deriv,
        exact_tolerance=exact_tol,
        derivative_tolerance=derivative_tol,
    )


# ---------------------------------------------------------------------------
# the determinant picture


@dataclass(frozen=True)
class DetHomReport:
    """The determinant as a twisted homomorphism onto the negative reals."""

    samples: int
    max_sign_identity_relerr: float
    dets_all_negative: bool
    orthogonal_included: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.max_sign_identity_relerr <= self.tolerance
            and self.dets_all_negative
            and self.orthogonal_included
        )


def det_homomorphism_check(
    n: int, samples: int = 100, seed: int = 0, tol: float = 1e-12
) -> DetHomReport:
    """Sample det(A B P) = -det(A B) on the negative-determinant component.

    P is the coordinate swap of the first two axes, so A B P is the twisted
    product of the component; its determinant is minus the plain product
    determinant, keeping everything on the negative side.  Also confirms
    the orthogonal negative-determinant samples belong to the component.
    """
    if n < 2:
        raise ValueError("need n >= 2 for the coordinate swap")
    from .linalg import transposition

    rng = np.random.default_rng(seed)
    p = transposition(n, 1, 2).matrix
    gl = component_predicate("gl_negative", n)
    ortho = component_predicate("orthogonal_negative", n)
    max_rel = 0.0
    all_negative = True
    included = True
    for _ in range(samples):
        a = gl.sample(rng)
        bmat = gl.sample(rng)
        all_negative = all_negative and det(a) < 0 and det(bmat) < 0
        d_plain = det(a @ bmat)
        d_twisted = det(a @ bmat @ p)
        max_rel = max(max_rel, abs(d_twisted + d_plain) / abs(d_plain))
        q = ortho.sample(rng)
        included = included and gl.membership(q) is True
    return DetHomReport(
        samples=samples,
        max_sign_identity_relerr=max_rel,
        dets_all_negative=all_negative,
        orthogonal_included=included,
        tolerance=tol,
    )
