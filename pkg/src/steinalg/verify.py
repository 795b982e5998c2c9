"""Randomised and exhaustive property suites behind the `verify` command.

Each property runs a fixed number of cases from its own deterministically
derived generator, so a (seed, trials) pair fully determines the output.
Suites: ``axioms`` (groupoid and bisection laws), ``convolution``
(*-algebra laws against the brute-force oracle), ``representation``
(regular-representation laws and norm bounds), ``lemmas`` (the rewriting
algorithms' postconditions).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import algebra, oracle, representation, rewriting, sampling
from .algebra import (
    UNIT_SPACE,
    AlgebraElement,
    convolve,
    equals,
    evaluate,
    i_norm,
    involute,
    is_supported_in,
    spectral_radius,
    sup_norm,
)
from .cantor import ClopenSet
from .errors import AxiomError
from .groupoid import (
    TestPoint,
    contains_bisection,
    disjointify,
    enumerate_test_points,
    fiber_product_points,
)
from .scalars import QC

SUITES = ("axioms", "convolution", "representation", "lemmas")


@dataclass
class PropertyOutcome:
    suite: str
    name: str
    cases: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def records_line(self) -> str:
        status = "pass" if self.passed else "fail"
        line = (
            f"suite={self.suite} property={self.name} "
            f"cases={self.cases} failures={self.failures} status={status}"
        )
        if self.detail and not self.passed:
            line += f" detail={self.detail.replace(' ', '_')}"
        return line


@dataclass
class VerifyContext:
    trials: int
    seed: int
    tolerance: float = 1e-10
    extra_groupoid: object = None
    models: dict = field(default_factory=sampling.fixture_models)

    def rng(self, label: str) -> random.Random:
        return random.Random(f"{self.seed}:{label}")


def _run_cases(suite, name, ctx, body, models) -> PropertyOutcome:
    rng = ctx.rng(f"{suite}.{name}")
    cases = failures = 0
    detail = ""
    for _ in range(ctx.trials):
        model = models[rng.randrange(len(models))] if models else None
        cases += 1
        try:
            ok = body(model, rng)
        except Exception as exc:  # a crash counts as a failure, with its reason
            ok = False
            detail = detail or f"{type(exc).__name__}: {exc}"
        if not ok:
            failures += 1
    return PropertyOutcome(suite, name, cases, failures, detail)


# ---------------------------------------------------------------------------
# axioms suite


def _axioms_properties(ctx: VerifyContext) -> list:
    out = []
    finite = sampling.finite_fixtures(ctx.models)
    snakes = sampling.snake_fixtures(ctx.models, cyclic_only=False)
    all_models = finite + snakes

    def model_axioms(_model, _rng):
        for m in finite:
            m.validate()
        return True

    out.append(_run_cases("axioms", "fixture_groupoid_axioms", _one_case(ctx), model_axioms, []))

    if ctx.extra_groupoid is not None:

        def file_axioms(_model, _rng):
            ctx.extra_groupoid.validate()
            return True

        out.append(
            _run_cases("axioms", "file_groupoid_axioms", _one_case(ctx), file_axioms, [])
        )

    def semigroup_laws(model, rng):
        b = sampling.random_bisection(model, rng)
        d = sampling.random_bisection(model, rng)
        e = sampling.random_bisection(model, rng)
        if b.product(d).product(e) != b.product(d.product(e)):
            return False
        if b.product(d).inverse() != d.inverse().product(b.inverse()):
            return False
        return b.product(b.inverse()).product(b) == b

    out.append(_run_cases("axioms", "bisection_semigroup_laws", ctx, semigroup_laws, all_models))

    def fiber_products(model, rng):
        b = sampling.random_bisection(model, rng)
        x = sampling.random_unit(model, rng)
        return len(fiber_product_points(b, x)) <= 1

    out.append(_run_cases("axioms", "fiber_product_singleton", ctx, fiber_products, all_models))

    def disjointify_laws(model, rng):
        within = sampling.random_bisection(model, rng)
        members = [sampling.random_sub_bisection(within, rng) for _ in range(rng.randint(1, 4))]
        pieces = disjointify(members, within)
        if len(pieces) != len(members):
            return False
        points = enumerate_test_points(model, members + pieces + [within])
        for p in points:
            in_union = any(m.contains(p) for m in members)
            hits = [piece for piece in pieces if piece.contains(p)]
            if in_union != (len(hits) == 1):
                return False
            if not in_union and hits:
                return False
        return True

    out.append(_run_cases("axioms", "disjointify_partition", ctx, disjointify_laws, all_models))

    def clopen_canonical(_model, rng):
        words = [
            "".join(rng.choice("01") for _ in range(rng.randint(0, 4)))
            for _ in range(rng.randint(0, 4))
        ]
        s = ClopenSet(words)
        t = ClopenSet(s.words)
        if s != t:
            return False
        other = ClopenSet(
            ["".join(rng.choice("01") for _ in range(rng.randint(0, 4)))
             for _ in range(rng.randint(0, 4))]
        )
        depth = max(s.depth(), other.depth(), 1)
        same_points = all(
            s.contains_point(format(i, f"0{depth}b")) == other.contains_point(format(i, f"0{depth}b"))
            for i in range(2**depth)
        )
        return same_points == (s == other)

    out.append(_run_cases("axioms", "clopen_canonical_forms", ctx, clopen_canonical, [None]))
    return out


def _one_case(ctx: VerifyContext) -> VerifyContext:
    clone = VerifyContext(
        trials=1 if ctx.trials > 0 else 0,
        seed=ctx.seed,
        tolerance=ctx.tolerance,
        extra_groupoid=ctx.extra_groupoid,
        models=ctx.models,
    )
    return clone


# ---------------------------------------------------------------------------
# convolution suite


def _convolution_properties(ctx: VerifyContext) -> list:
    out = []
    finite = sampling.finite_fixtures(ctx.models)
    snakes = sampling.snake_fixtures(ctx.models, cyclic_only=False)
    all_models = finite + snakes

    def against_brute(model, rng):
        f = sampling.random_element(model, rng)
        g = sampling.random_element(model, rng)
        got = convolve(f, g)
        expected = oracle.brute_convolve(f, g)
        return all(
            evaluate(got, TestPoint.arrow(a)) == expected[a] for a in model.arrows
        )

    out.append(_run_cases("convolution", "convolve_matches_bruteforce", ctx, against_brute, finite))

    def support_against_brute(model, rng):
        f = sampling.random_element(model, rng)
        reported = {cls.descriptor[1] for cls in algebra.open_support(f).classes}
        return reported == set(oracle.brute_support(f))

    out.append(
        _run_cases("convolution", "support_matches_bruteforce", ctx, support_against_brute, finite)
    )

    def associativity(model, rng):
        f = sampling.random_element(model, rng, max_terms=3)
        g = sampling.random_element(model, rng, max_terms=3)
        h = sampling.random_element(model, rng, max_terms=3)
        return equals(convolve(convolve(f, g), h), convolve(f, convolve(g, h)))

    out.append(_run_cases("convolution", "convolution_associative", ctx, associativity, all_models))

    def distributivity(model, rng):
        f = sampling.random_element(model, rng, max_terms=3)
        g = sampling.random_element(model, rng, max_terms=3)
        h = sampling.random_element(model, rng, max_terms=3)
        return equals(convolve(f, g + h), convolve(f, g) + convolve(f, h))

    out.append(_run_cases("convolution", "convolution_distributive", ctx, distributivity, all_models))

    def involution_laws(model, rng):
        f = sampling.random_element(model, rng, max_terms=3)
        g = sampling.random_element(model, rng, max_terms=3)
        if not equals(involute(convolve(f, g)), convolve(involute(g), involute(f))):
            return False
        c = sampling.random_coefficient(rng)
        if not equals(involute(c * f), c.conjugate() * involute(f)):
            return False
        return equals(involute(involute(f)), f)

    out.append(_run_cases("convolution", "involution_laws", ctx, involution_laws, all_models))

    def identity_element(model, rng):
        f = sampling.random_element(model, rng)
        one = AlgebraElement.indicator(model.unit_bisection())
        return equals(convolve(f, one), f) and equals(convolve(one, f), f)

    out.append(_run_cases("convolution", "unit_indicator_is_identity", ctx, identity_element, all_models))

    def norm_symmetry(model, rng):
        f = sampling.random_element(model, rng)
        if sup_norm(involute(f)) != sup_norm(f):
            return False
        return i_norm(involute(f)) == i_norm(f)

    out.append(_run_cases("convolution", "norms_involution_invariant", ctx, norm_symmetry, all_models))

    def inorm_submultiplicative(model, rng):
        f = sampling.random_element(model, rng, max_terms=3)
        g = sampling.random_element(model, rng, max_terms=3)
        return i_norm(convolve(f, g)) <= i_norm(f) * i_norm(g)

    out.append(
        _run_cases("convolution", "inorm_submultiplicative", ctx, inorm_submultiplicative, all_models)
    )

    def adjoint_product_unit_supported(model, rng):
        f, _ = sampling.random_single_bisection_element(model, rng)
        return is_supported_in(convolve(involute(f), f), UNIT_SPACE)

    out.append(
        _run_cases(
            "convolution",
            "adjoint_product_lands_in_units",
            ctx,
            adjoint_product_unit_supported,
            all_models,
        )
    )

    def spectral_identity(model, rng):
        f = sampling.random_unit_supported_element(model, rng)
        window = rewriting.unit_support_window(f)
        return spectral_radius(convolve(involute(f), f), window) == sup_norm(f) ** 2

    out.append(_run_cases("convolution", "spectral_identity", ctx, spectral_identity, all_models))
    return out


# ---------------------------------------------------------------------------
# representation suite


def _representation_properties(ctx: VerifyContext) -> list:
    out = []
    finite = sampling.finite_fixtures(ctx.models)
    cyclic_snakes = sampling.snake_fixtures(ctx.models)
    rep_models = finite + cyclic_snakes
    z_snake = [m for m in ctx.models.values() if m.kind == "snake" and m.heads is None]

    def star_hom(model, rng):
        f = sampling.random_element(model, rng, max_terms=3)
        g = sampling.random_element(model, rng, max_terms=3)
        x = sampling.random_unit(model, rng)
        lhs = representation.regular_rep(convolve(f, g), x)
        rhs = representation.regular_rep(f, x).matmul(representation.regular_rep(g, x))
        if lhs.entries != rhs.entries:
            return False
        adj = representation.regular_rep(involute(f), x)
        return adj.entries == representation.regular_rep(f, x).conjugate_transpose().entries

    out.append(_run_cases("representation", "regular_rep_star_homomorphism", ctx, star_hom, rep_models))

    def inorm_domination(model, rng):
        f = sampling.random_element(model, rng)
        x = sampling.random_unit(model, rng)
        return representation.fiber_norm(f, x) <= float(i_norm(f)) + 1e-10

    out.append(_run_cases("representation", "fiber_norm_below_inorm", ctx, inorm_domination, rep_models))

    def cstar_identity(model, rng):
        f = sampling.random_element(model, rng, max_terms=4)
        lhs = representation.reduced_norm(convolve(involute(f), f))
        rhs = representation.reduced_norm(f) ** 2
        return abs(lhs - rhs) <= 1e-8

    out.append(_run_cases("representation", "reduced_norm_cstar_identity", ctx, cstar_identity, finite))

    def unit_supported_diagonal(model, rng):
        f = sampling.random_unit_supported_element(model, rng)
        reduced = representation.reduced_norm(f)
        return abs(reduced - float(sup_norm(f))) <= 1e-10

    out.append(
        _run_cases(
            "representation", "unit_supported_reduced_equals_sup", ctx, unit_supported_diagonal, rep_models
        )
    )

    def bisection_bound(model, rng):
        f, _ = sampling.random_single_bisection_element(model, rng)
        return representation.reduced_norm(f) <= float(sup_norm(f)) + 1e-10

    out.append(
        _run_cases("representation", "bisection_supported_norm_bound", ctx, bisection_bound, rep_models)
    )

    def faithfulness(model, rng):
        f = sampling.random_element(model, rng, max_terms=4)
        if rng.random() < 0.3:
            f = f - AlgebraElement(model, f.terms)  # an elaborate zero
        vanished = representation.reduced_norm(f) <= 1e-12
        return vanished == algebra.is_zero(f)

    out.append(_run_cases("representation", "reduced_norm_faithful", ctx, faithfulness, rep_models))

    def matrix_norm_closed_forms(_model, rng):
        a = rng.randint(-3, 3)
        b = rng.randint(-3, 3)
        c = rng.randint(-3, 3)
        m = np.array([[a, b], [b, c]], dtype=complex)
        trace, det = a + c, a * c - b * b
        disc = max(trace * trace - 4 * det, 0) ** 0.5
        expected = max(abs((trace + disc) / 2), abs((trace - disc) / 2))
        return abs(oracle.matrix_norm(m) - expected) <= 1e-8

    out.append(
        _run_cases(
            "representation", "matrix_norm_2x2_closed_form", ctx, matrix_norm_closed_forms, [None]
        )
    )

    def symbol_closed_forms(_model, _rng):
        model = z_snake[0]
        full = model.unit_bisection()
        one = AlgebraElement.indicator(full)
        sn = representation.symbol_norm(one)
        if not (abs(sn.value - 1.0) <= sn.error + 1e-12):
            return False
        shifted = one + AlgebraElement.indicator(model.bisection(ClopenSet.full(), 1))
        sn2 = representation.symbol_norm(shifted)
        return abs(sn2.value - 2.0) <= sn2.error + 1e-12

    if z_snake:
        out.append(
            _run_cases("representation", "symbol_norm_closed_forms", _one_case(ctx), symbol_closed_forms, [])
        )
    return out


# ---------------------------------------------------------------------------
# lemmas suite


def _region_for(f, rng):
    """A covering region made of class-shaped bisections, for rewriting."""
    model = f.model
    support = algebra.open_support(f)
    members = []
    if model.kind == "finite":
        for cls in support.classes:
            members.append(model.bisection([cls.descriptor[1]]))
        extra = sampling.random_bisection(model, rng)
        members.append(extra)
        return members
    depth = max((len(w) for _, b in f.terms for w in b.clopen.words), default=0)
    depth = max(depth, 1)
    for cls in support.classes:
        if cls.descriptor[0] == "word":
            members.append(model.bisection(ClopenSet([cls.descriptor[1]]), 0))
        elif cls.descriptor[0] == "punctured":
            members.append(model.bisection(ClopenSet(["0" * depth + "1"]), 0))
            members.append(model.bisection(ClopenSet(["0" * (depth + 1)]), 0))
        elif cls.descriptor[0] == "base":
            members.append(model.bisection(ClopenSet(["0" * depth]), 0))
        else:
            members.append(model.bisection(ClopenSet(["0" * depth]), cls.descriptor[1]))
    members.append(sampling.random_bisection(model, rng))
    return members


def _lemmas_properties(ctx: VerifyContext) -> list:
    out = []
    finite = sampling.finite_fixtures(ctx.models)
    snakes = sampling.snake_fixtures(ctx.models, cyclic_only=False)
    all_models = finite + snakes

    def rewrite_postconditions(model, rng):
        f = sampling.random_element(model, rng, max_terms=4)
        region = _region_for(f, rng)
        g = rewriting.rewrite_within(f, region)
        if not equals(f, g):
            return False
        # term containment in the union region, decided on class representatives
        points = algebra.element_test_points(g, extra_family=region)
        for _, bis in g.terms:
            for p in points:
                if bis.contains(p) and not any(m.contains(p) for m in region):
                    return False
        return True

    out.append(_run_cases("lemmas", "rewrite_within_postconditions", ctx, rewrite_postconditions, all_models))

    def restrict_reconstruction(model, rng):
        ambient_f, ambient = sampling.random_single_bisection_element(model, rng)
        b = sampling.random_sub_bisection(ambient, rng)
        r = rewriting.restrict(ambient_f, b, within=ambient)
        points = algebra.element_test_points(ambient_f, r, extra_family=[ambient, b])
        for p in points:
            want = evaluate(ambient_f, p) if b.contains(p) else QC(0)
            if evaluate(r, p) != want:
                return False
        return True

    out.append(_run_cases("lemmas", "restrict_reconstruction", ctx, restrict_reconstruction, all_models))

    def window_properties(model, rng):
        f = sampling.random_unit_supported_element(model, rng)
        window = rewriting.unit_support_window(f)
        return is_supported_in(f, window)

    out.append(_run_cases("lemmas", "unit_support_window_contains_support", ctx, window_properties, all_models))

    def summands_postconditions(model, rng):
        f = sampling.random_element(model, rng, max_terms=4)
        cover = [b for _, b in f.nonzero_terms()]
        cover.append(sampling.random_bisection(model, rng))
        eps = rng.choice([Fraction(1), Fraction(1, 10), Fraction(1, 100)])
        dec = rewriting.bounded_summands(f, cover, eps)
        if not equals(dec.total(), f):
            return False
        budget = sup_norm(f) + eps
        for part, assigned in dec.parts:
            if not is_supported_in(part, assigned):
                return False
            if sup_norm(part) > budget:
                return False
        return True

    out.append(_run_cases("lemmas", "bounded_summands_postconditions", ctx, summands_postconditions, all_models))

    def trivial_bound_dominates(model, rng):
        f = sampling.random_element(model, rng, max_terms=4)
        bound = rewriting.trivial_bound(f)
        if bound < sup_norm(f):
            return False
        if model.kind == "snake" and model.heads is None:
            return True
        return representation.reduced_norm(f) <= float(bound) + 1e-8

    out.append(_run_cases("lemmas", "trivial_bound_dominates", ctx, trivial_bound_dominates, all_models))
    return out


# ---------------------------------------------------------------------------
# driver


def run_verify(
    suites=SUITES,
    trials: int = 200,
    seed: int = 0,
    tolerance: float = 1e-10,
    extra_groupoid=None,
) -> list:
    ctx = VerifyContext(trials=trials, seed=seed, tolerance=tolerance, extra_groupoid=extra_groupoid)
    registry = {
        "axioms": _axioms_properties,
        "convolution": _convolution_properties,
        "representation": _representation_properties,
        "lemmas": _lemmas_properties,
    }
    outcomes = []
    for suite in suites:
        if suite not in registry:
            raise ValueError(f"unknown suite {suite!r}")
        outcomes.extend(registry[suite](ctx))
    return outcomes
