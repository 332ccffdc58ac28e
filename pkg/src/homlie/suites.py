"""Verification suites: sampled checks of the core identities, packaged as
:class:`homlie.report.Report` values for the command line tool and tests.

Witness cases (things that must be large, or checks that must fail) store
the negated witness size as the residual with a negated threshold, keeping
the uniform rule pass == (residual <= tolerance); their anchors say so.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import cochain as co
from . import homgroup as hg
from . import toda
from .homalg import (
    HomLieContext,
    ad_beta,
    bracket_beta,
    check_morphism,
    conjugation_transport,
    hom_jacobi_residual,
    untwisted_jacobi_residual,
)
from .linalg import Involution, frobenius, is_sign_of_identity
from .report import Case, Report
from .sampling import random_matrix, random_unit_frobenius, random_well_conditioned

__all__ = ["algebra_suite", "cochain_suite", "group_suite", "combined_suite"]


def _config(n: int, beta_id: str, seed: int, samples: int) -> dict:
    return {"n": n, "beta_id": beta_id, "seed": seed, "samples": samples}


def algebra_suite(
    beta: Involution, seed: int = 0, samples: int = 100, beta_id: str = "custom"
) -> Report:
    """Bracket axioms, the twisted Jacobi identity, and conjugation transport."""
    n = beta.n
    ctx = HomLieContext(beta)
    rng = np.random.default_rng(seed)
    cases = []

    r_anti = r_bilin = r_mult = r_invol = r_jacobi = 0.0
    for _ in range(samples):
        x = random_matrix(rng, n)
        y = random_matrix(rng, n)
        z = random_matrix(rng, n)
        a, b = rng.uniform(-1.0, 1.0, size=2)
        r_anti = max(
            r_anti, frobenius(bracket_beta(ctx, x, y) + bracket_beta(ctx, y, x))
        )
        scale = 1.0 + frobenius(x) * frobenius(y) + frobenius(z) * frobenius(y)
        r_bilin = max(
            r_bilin,
            frobenius(
                bracket_beta(ctx, a * x + b * z, y)
                - a * bracket_beta(ctx, x, y)
                - b * bracket_beta(ctx, z, y)
            )
            / scale,
        )
        r_mult = max(
            r_mult,
            frobenius(
                ad_beta(ctx, bracket_beta(ctx, x, y))
                - bracket_beta(ctx, ad_beta(ctx, x), ad_beta(ctx, y))
            ),
        )
        r_invol = max(
            r_invol,
            frobenius(ad_beta(ctx, ad_beta(ctx, x)) - x) / (1.0 + frobenius(x)),
        )
        r_jacobi = max(
            r_jacobi,
            hom_jacobi_residual(ctx, x, y, z)
            / (1.0 + frobenius(x) * frobenius(y) * frobenius(z)),
        )
    cases.append(Case("antisymmetry", "bracket antisymmetry", r_anti, 1e-13))
    cases.append(Case("bilinearity", "bracket bilinearity (normalized)", r_bilin, 1e-12))
    cases.append(
        Case(
            "twist_multiplicativity",
            "the twist is an automorphism of the twisted bracket",
            r_mult,
            1e-10,
        )
    )
    cases.append(
        Case("twist_involutive", "applying the twist twice is the identity", r_invol, 1e-13)
    )
    cases.append(
        Case(
            "twisted_jacobi",
            "twisted Jacobi identity (normalized by the argument norms)",
            r_jacobi,
            1e-9,
        )
    )

    # exhaustive over distinct basis triples (repeated arguments cancel by
    # antisymmetry): the plain Jacobi identity fails for a genuine twist in
    # dimension three and up, degenerates to zero for beta = +-I, and holds
    # identically on 2x2 matrices for every involution (a planar coincidence;
    # the twisted bracket on gl(2) is still a Lie bracket)
    stack = co.basis_stack(n)
    worst = max(
        untwisted_jacobi_residual(ctx, stack[i], stack[j], stack[k])
        for i, j, k in itertools.combinations(range(n * n), 3)
    )
    if is_sign_of_identity(beta.matrix):
        cases.append(
            Case(
                "classical_jacobi_degenerate",
                "with a sign-of-identity twist the bracket is (up to sign) the "
                "commutator, so the plain Jacobi identity holds",
                worst,
                1e-12,
            )
        )
    elif n <= 2:
        cases.append(
            Case(
                "classical_jacobi_planar_identity",
                "on 2x2 matrices the twisted bracket satisfies the plain "
                "Jacobi identity for every involution; genuine failure "
                "needs dimension three",
                worst,
                1e-12,
            )
        )
    else:
        cases.append(
            Case(
                "classical_jacobi_witness",
                "the plain Jacobi identity fails on some basis triple "
                "(witness size negated: pass while residual <= tolerance)",
                -worst,
                -0.5,
            )
        )

    c = random_well_conditioned(rng, n)
    _, morphism = conjugation_transport(ctx, c)
    rep = check_morphism(morphism, samples=min(samples, 100), seed=seed + 1)
    cases.append(
        Case(
            "conjugation_transport",
            "conjugation intertwines the twisted brackets and twists",
            max(rep.linearity_residual, rep.bracket_residual, rep.twist_residual),
            1e-9,
        )
    )
    return Report("algebra", _config(n, beta_id, seed, samples), tuple(cases))


def _cochain_degrees(n: int) -> int:
    # keep the multi-index spaces small: max degree by ambient dimension
    return {1: 1, 2: 3, 3: 2}.get(n, 1)


def cochain_suite(
    beta: Involution, seed: int = 0, samples: int = 100, beta_id: str = "custom"
) -> Report:
    """Coboundary and pullback identities on random cochains."""
    n = beta.n
    ctx = HomLieContext(beta)
    rng = np.random.default_rng(seed)
    kmax = _cochain_degrees(n)
    per_degree = max(1, samples // max(kmax, 1))
    cases = []

    r_dd_tw = r_dd_cl = 0.0
    for k in range(kmax):
        for _ in range(per_degree):
            xi = co.random_cochain(n, k, rng)
            dd_tw = co.coboundary_hom(ctx, co.coboundary_hom(ctx, xi))
            dd_cl = co.coboundary_lie(co.coboundary_lie(xi))
            r_dd_tw = max(r_dd_tw, dd_tw.norm() / (1.0 + xi.norm()))
            r_dd_cl = max(r_dd_cl, dd_cl.norm() / (1.0 + xi.norm()))
    cases.append(
        Case("dd_zero_twisted", "the twisted coboundary squares to zero", r_dd_tw, 1e-10)
    )
    cases.append(
        Case("dd_zero_classical", "the classical coboundary squares to zero", r_dd_cl, 1e-10)
    )

    r1_max = r2_max = 0.0
    for k in range(1, kmax + 1):
        for _ in range(per_degree):
            xi = co.random_cochain(n, k, rng)
            r1, r2, _, _ = co.intertwining_residuals(ctx, xi)
            r1_max = max(r1_max, r1 / (1.0 + xi.norm()))
            r2_max = max(r2_max, r2 / (1.0 + xi.norm()))
    cases.append(
        Case(
            "intertwining_right",
            "right pullback of the twisted coboundary equals the classical "
            "coboundary of the left pullback",
            r1_max,
            1e-10,
        )
    )
    cases.append(
        Case(
            "intertwining_left",
            "twisted coboundary of the right pullback equals the left "
            "pullback of the classical coboundary",
            r2_max,
            1e-10,
        )
    )

    # basis 1-cochains: does the left pullback commute with the classical
    # coboundary?  It must not, unless the twist is a sign of the identity.
    worst = 0.0
    m = co.gl_dim(n)
    for idx in range(m):
        xi = co.dual_basis_cochain(n, [idx])
        _, _, r3, _ = co.intertwining_residuals(ctx, xi)
        worst = max(worst, r3)
    if is_sign_of_identity(beta.matrix):
        cases.append(
            Case(
                "pullback_commutation_degenerate",
                "for a sign-of-identity twist the left pullback commutes "
                "with the classical coboundary",
                worst,
                1e-12,
            )
        )
    else:
        cases.append(
            Case(
                "pullback_noncommutation_witness",
                "the left pullback does not commute with the classical "
                "coboundary (witness size negated: pass while residual <= "
                "tolerance)",
                -worst,
                -1e-6,
            )
        )

    r_inv = 0.0
    for k in range(1, kmax + 1):
        xi = co.random_cochain(n, k, rng)
        r_inv = max(
            r_inv,
            float(
                np.linalg.norm(
                    co.pullback_left(beta, co.pullback_left(beta, xi)).coeffs - xi.coeffs
                )
            ),
            float(
                np.linalg.norm(
                    co.pullback_right(beta, co.pullback_right(beta, xi)).coeffs - xi.coeffs
                )
            ),
        )
    cases.append(
        Case("pullback_involutive", "both pullbacks are involutions on cochains", r_inv, 1e-12)
    )

    r_round = 0.0
    for k in range(min(kmax, 2) + 1):
        xi = co.random_cochain(n, k, rng)
        rebuilt = co.cochain_from_evaluations(
            n, k, lambda *mats, xi=xi: co.evaluate(xi, mats)
        )
        r_round = max(r_round, float(np.max(np.abs(rebuilt.coeffs - xi.coeffs))))
    cases.append(
        Case(
            "evaluation_round_trip",
            "coefficients, evaluation on basis tuples, and reconstruction agree",
            r_round,
            1e-15,
        )
    )
    return Report("cochain", _config(n, beta_id, seed, samples), tuple(cases))


def group_suite(
    beta: Involution, seed: int = 0, samples: int = 100, beta_id: str = "custom"
) -> Report:
    """Group axioms of the catalog components, curves, and homomorphisms."""
    n = beta.n
    cases = []
    axiom_samples = min(samples, 100)

    def axiom_cases(pred_name: str, pred, twist, tag: str):
        rep = hg.hom_group_axiom_check(pred, twist, samples=axiom_samples, seed=seed)
        cases.extend(_axiom_cases(pred_name, rep, tag))

    gl = hg.component_predicate("gl_negative", max(n, 2))
    axiom_cases("the negative-determinant component", gl,
                hg.default_twist_for("gl_negative", max(n, 2)), "gl_negative")
    ortho = hg.component_predicate("orthogonal_negative", max(n, 2))
    axiom_cases("the negative-determinant orthogonal component", ortho,
                hg.default_twist_for("orthogonal_negative", max(n, 2)), "orthogonal_negative")
    for comp in (1, 2, 3, 4):
        name = f"o11_s{comp}"
        axiom_cases(f"hyperbolic component {comp}", hg.component_predicate(name),
                    hg.default_twist_for(name), name)
    mb = hg.component_predicate("m_beta", beta=beta)
    axiom_cases("the exponential family", mb,
                hg.default_twist_for("m_beta", beta=beta), "m_beta")

    # negative control: with the identity twist the image of the
    # negative-determinant component is NOT closed; every sampled product
    # must escape (fraction of non-escaping pairs, expected zero)
    rng = np.random.default_rng(seed + 10)
    ctrl = hg.component_predicate("gl_negative", max(n, 2))
    stay = 0
    trials = axiom_samples
    for _ in range(trials):
        x = ctrl.sample(rng)
        y = ctrl.sample(rng)
        if ctrl.membership(x @ y) is True:
            stay += 1
    cases.append(
        Case(
            "identity_twist_control",
            "without a twist the negative-determinant component is not "
            "closed under products (fraction of closed pairs, expected 0)",
            stay / trials,
            0.0,
        )
    )

    grid = [-2.0, -1.0, 0.0, 1.0, 2.0]
    r_exp = 0.0
    rng = np.random.default_rng(seed + 11)
    for _ in range(5):
        x = random_unit_frobenius(rng, n)
        rep = hg.one_param_check(hg.OneParamSubgroup(x, beta), grid)
        r_exp = max(r_exp, rep.max_residual())
    cases.append(
        Case(
            "one_param_exponential",
            "curves exp(t b X) b satisfy the twisted one-parameter group law",
            r_exp,
            1e-9,
        )
    )

    r_closed = r_match = 0.0
    for comp in (1, 2, 3, 4):
        closed, twist, sub = hg.o11_curve(comp)
        rep = hg.one_param_check(closed, grid, twist)
        r_closed = max(r_closed, rep.max_residual())
        r_match = max(
            r_match,
            max(frobenius(closed(t) - sub(t)) for t in grid),
        )
    cases.append(
        Case(
            "o11_closed_form_curves",
            "the four hyperbolic closed-form curves satisfy their "
            "twisted group laws",
            r_closed,
            1e-12,
        )
    )
    cases.append(
        Case(
            "o11_exponential_match",
            "each hyperbolic closed-form curve equals its exponential form",
            r_match,
            1e-12,
        )
    )

    ctx = HomLieContext(beta)
    rng = np.random.default_rng(seed + 12)
    deriv_samples = min(samples, 100)
    r_h = r_h2 = 0.0
    for _ in range(deriv_samples):
        x = random_matrix(rng, n)
        y = random_matrix(rng, n)
        r_h = max(r_h, hg.derivative_bracket_check(ctx, x, y, 1e-4))
        r_h2 = max(r_h2, hg.derivative_bracket_check(ctx, x, y, 5e-5))
    cases.append(
        Case(
            "derivative_bracket",
            "differentiating the conjugated exponential curve at zero "
            "produces the twisted bracket (central difference, h = 1e-4)",
            r_h,
            1e-6,
        )
    )
    ratio = r_h / r_h2 if r_h2 > 0 else 4.0
    cases.append(
        Case(
            "derivative_bracket_order",
            "the central difference converges at second order "
            "(residual ratio between h and h/2, distance from 4)",
            abs(ratio - 4.0),
            0.5,
        )
    )

    rng = np.random.default_rng(seed + 13)
    c = random_well_conditioned(rng, n)
    morphism = hg.HomGroupMorphism.from_conjugator(c, beta)
    rep = hg.morphism_theorem_check(morphism, samples=min(samples, 100), seed=seed + 14)
    cases.append(
        Case(
            "morphism_exact_properties",
            "conjugation between exponential families: exponential "
            "intertwining, twist equivariance, conjugation covariance, "
            "bracket preservation",
            max(
                rep.exp_intertwining,
                rep.twist_equivariance,
                rep.conjugation_covariance,
                rep.bracket_preservation,
            ),
            1e-9,
        )
    )
    cases.append(
        Case(
            "morphism_generator_derivative",
            "the generator map is recovered by differentiating the group map",
            rep.generator_derivative,
            1e-6,
        )
    )
    bad = hg.morphism_theorem_check(
        morphism,
        samples=min(samples, 100),
        seed=seed + 14,
        phi_override=lambda x: morphism.phi_algebra(x) + 1e-3 * np.eye(n),
    )
    cases.append(
        Case(
            "corrupted_generator_map_detected",
            "perturbing the generator map breaks the checker "
            "(0 when detected, 1 when missed)",
            0.0 if not bad.passed else 1.0,
            0.0,
        )
    )

    rep = hg.det_homomorphism_check(max(n, 2), samples=min(samples, 100), seed=seed + 15)
    cases.append(
        Case(
            "det_sign_homomorphism",
            "the determinant of the twisted product is minus the plain "
            "product determinant (relative error)",
            rep.max_sign_identity_relerr if rep.dets_all_negative and rep.orthogonal_included else 1.0,
            rep.tolerance,
        )
    )

    rep = toda.conservation_identity_check(ctx, samples=min(samples * 10, 1000), seed=seed + 16)
    cases.append(
        Case(
            "lax_trace_pairing",
            "tr(L * [B(L), L]_b) vanishes for symmetric L, so tr(L**2) is "
            "conserved along the deformed Toda flow",
            rep.max_abs_trace_pairing,
            1e-12,
        )
    )

    return Report("group", _config(n, beta_id, seed, samples), tuple(cases))


def _axiom_cases(pred_name: str, rep, tag: str) -> list:
    violations = float(
        rep.closure_failures
        + rep.inverse_failures
        + (0 if rep.identity_in_image else 1)
    )
    return [
        Case(
            f"{tag}_axioms",
            f"twisted image of {pred_name} is closed, contains the "
            "identity, and contains inverses (violation count)",
            violations,
            0.0,
        ),
        Case(
            f"{tag}_hom_inverse",
            "the twisted inverse maps to the group inverse",
            rep.hom_inverse_residual,
            rep.hom_inverse_tolerance,
        ),
    ]


def group_case_report(
    case: str,
    n: int,
    beta: Involution,
    seed: int = 0,
    samples: int = 100,
    beta_id: str = "custom",
    conjugator: np.ndarray | None = None,
) -> Report:
    """One focused group check for the command line: ``gl``, ``on``,
    ``o11``, ``mbeta``, ``morphism``, or ``det``."""
    cases = []
    if case == "gl":
        pred = hg.component_predicate("gl_negative", n)
        rep = hg.hom_group_axiom_check(
            pred, hg.default_twist_for("gl_negative", n), samples=samples, seed=seed
        )
        cases += _axiom_cases("the negative-determinant component", rep, "gl_negative")
    elif case == "on":
        pred = hg.component_predicate("orthogonal_negative", n)
        rep = hg.hom_group_axiom_check(
            pred, hg.default_twist_for("orthogonal_negative", n),
            samples=samples, seed=seed,
        )
        cases += _axiom_cases(
            "the negative-determinant orthogonal component", rep, "orthogonal_negative"
        )
    elif case == "o11":
        for comp in (1, 2, 3, 4):
            name = f"o11_s{comp}"
            rep = hg.hom_group_axiom_check(
                hg.component_predicate(name), hg.default_twist_for(name),
                samples=samples, seed=seed,
            )
            cases += _axiom_cases(f"hyperbolic component {comp}", rep, name)
        grid = [-2.0, -1.0, 0.0, 1.0, 2.0]
        r_closed = r_match = 0.0
        for comp in (1, 2, 3, 4):
            closed, twist, sub = hg.o11_curve(comp)
            r_closed = max(r_closed, hg.one_param_check(closed, grid, twist).max_residual())
            r_match = max(r_match, max(frobenius(closed(t) - sub(t)) for t in grid))
        cases.append(
            Case(
                "o11_closed_form_curves",
                "the four hyperbolic closed-form curves satisfy their twisted group laws",
                r_closed,
                1e-12,
            )
        )
        cases.append(
            Case(
                "o11_exponential_match",
                "each hyperbolic closed-form curve equals its exponential form",
                r_match,
                1e-12,
            )
        )
    elif case == "mbeta":
        pred = hg.component_predicate("m_beta", beta=beta)
        rep = hg.hom_group_axiom_check(
            pred, hg.default_twist_for("m_beta", beta=beta), samples=samples, seed=seed
        )
        cases += _axiom_cases("the exponential family", rep, "m_beta")
        grid = [-2.0, -1.0, 0.0, 1.0, 2.0]
        rng = np.random.default_rng(seed + 1)
        r_exp = 0.0
        for _ in range(5):
            x = random_unit_frobenius(rng, beta.n)
            r_exp = max(
                r_exp, hg.one_param_check(hg.OneParamSubgroup(x, beta), grid).max_residual()
            )
        cases.append(
            Case(
                "one_param_exponential",
                "curves exp(t b X) b satisfy the twisted one-parameter group law",
                r_exp,
                1e-9,
            )
        )
    elif case == "morphism":
        if conjugator is None:
            rng = np.random.default_rng(seed)
            conjugator = random_well_conditioned(rng, beta.n)
        morphism = hg.HomGroupMorphism.from_conjugator(conjugator, beta)
        rep = hg.morphism_theorem_check(morphism, samples=samples, seed=seed + 1)
        cases.append(
            Case(
                "morphism_exact_properties",
                "conjugation between exponential families: exponential "
                "intertwining, twist equivariance, conjugation covariance, "
                "bracket preservation",
                max(
                    rep.exp_intertwining,
                    rep.twist_equivariance,
                    rep.conjugation_covariance,
                    rep.bracket_preservation,
                ),
                rep.exact_tolerance,
            )
        )
        cases.append(
            Case(
                "morphism_generator_derivative",
                "the generator map is recovered by differentiating the group map",
                rep.generator_derivative,
                rep.derivative_tolerance,
            )
        )
    elif case == "det":
        rep = hg.det_homomorphism_check(n, samples=samples, seed=seed)
        cases.append(
            Case(
                "det_sign_homomorphism",
                "the determinant of the twisted product is minus the plain "
                "product determinant (relative error)",
                rep.max_sign_identity_relerr
                if rep.dets_all_negative and rep.orthogonal_included
                else 1.0,
                rep.tolerance,
            )
        )
    else:
        raise ValueError(f"unknown group case {case!r}")
    return Report(f"group:{case}", _config(n, beta_id, seed, samples), tuple(cases))


def combined_suite(
    beta: Involution, seed: int = 0, samples: int = 100, beta_id: str = "custom"
) -> Report:
    """All three suites, with case names prefixed by their suite."""
    parts = [
        algebra_suite(beta, seed, samples, beta_id),
        cochain_suite(beta, seed, samples, beta_id),
        group_suite(beta, seed, samples, beta_id),
    ]
    cases = tuple(
        Case(f"{part.suite}/{case.name}", case.anchor, case.max_residual, case.tolerance)
        for part in parts
        for case in part.cases
    )
    return Report("all", _config(beta.n, beta_id, seed, samples), cases)
