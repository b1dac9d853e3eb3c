"""Seeded random generators for grammar objects, shared across test modules."""

import random
from fractions import Fraction

from oscint import (
    Bound,
    ConstantValue,
    ExactComplex,
    GammaFactor,
    Phase,
    PreparedSum,
    Term,
    normalize,
)
from oscint.constants import CV_ZERO

# phase degrees stay <= 3/2 so that double-precision phase evaluation keeps
# ~1e-11 relative accuracy on y <= 1e3 (the homomorphism checks need it)
_EXPONENTS = [Fraction(-2), Fraction(-3, 2), Fraction(-1), Fraction(-1, 2),
              Fraction(0), Fraction(1, 2), Fraction(1)]
_PHASE_EXPS = [Fraction(1, 2), Fraction(1), Fraction(3, 2)]
_PHASE_CONSTS = ["one", "sqrt2", "sqrt3", "pi"]


def random_cv(rng: random.Random) -> ConstantValue:
    name = rng.choice(_PHASE_CONSTS)
    w = Fraction(rng.randint(1, 2), rng.randint(1, 2)) * rng.choice([1, -1])
    return ConstantValue.named(name, w)


def random_phase(rng: random.Random, max_monos=2, allow_negative=False) -> Phase:
    n = rng.randint(0, max_monos)
    exps = list(_PHASE_EXPS)
    if allow_negative:
        exps = exps + [Fraction(-1, 2), Fraction(-1)]
    rng.shuffle(exps)
    monos = [(e, random_cv(rng)) for e in exps[:n]]
    return Phase.from_monomials(monos)


def random_coeff(rng: random.Random, exact_only=False):
    if exact_only or rng.random() < 0.7:
        re = ConstantValue.rational(
            Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
        im = CV_ZERO
        if rng.random() < 0.3:
            im = ConstantValue.rational(Fraction(rng.randint(-2, 2)))
        return ExactComplex(re, im)
    return complex(round(rng.uniform(-2, 2), 6), round(rng.uniform(-1, 1), 6))


def random_naive_term(rng: random.Random, exact_only=False) -> Term:
    return Term(
        random_coeff(rng, exact_only),
        r=rng.choice(_EXPONENTS),
        s=rng.randint(0, 2),
        phase=random_phase(rng),
    )


def random_naive_sum(rng: random.Random, max_terms=3, exact_only=False) -> PreparedSum:
    terms = tuple(random_naive_term(rng, exact_only)
                  for _ in range(rng.randint(1, max_terms)))
    return normalize(PreparedSum(terms=terms))


def random_simple_gamma(rng: random.Random) -> GammaFactor:
    rho = rng.choice([Fraction(-2), Fraction(-3, 2), Fraction(-5, 2)])
    sigma = rng.randint(0, 1)
    orient = rng.choice([1, -1])
    a = rng.randint(1, 3)
    if rng.random() < 0.5:
        return GammaFactor(rho, sigma, orient, Bound.const(a), None)
    return GammaFactor(rho, sigma, orient, Bound.const(a),
                       Bound.const(a + rng.randint(1, 5)))


def random_printable_sum(rng: random.Random, max_terms=3) -> PreparedSum:
    """Sums in the text grammar: naive terms plus y-free gamma factors."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        t = random_naive_term(rng)
        if rng.random() < 0.3:
            t = Term(t.coeff, t.r, t.s, t.phase, (random_simple_gamma(rng),))
        terms.append(t)
    return normalize(PreparedSum(terms=tuple(terms)))


def random_grammar_term(rng: random.Random) -> Term:
    """Terms exercising every prepare rule: decaying phase tails, gammas
    with y-dependent bounds of each supported shape."""
    t = random_naive_term(rng, exact_only=True)
    kind = rng.random()
    if kind < 0.25:
        # decaying phase tail to absorb
        phase = random_phase(rng, max_monos=1) + Phase.from_monomials(
            [(rng.choice([Fraction(-1, 2), Fraction(-1)]), random_cv(rng))])
        return Term(t.coeff, t.r, t.s, phase)
    if kind < 0.45:
        # ray gamma with growing lower bound -> integration by parts
        g = GammaFactor(
            rng.choice([Fraction(-2), Fraction(-5, 2)]), rng.randint(0, 1),
            rng.choice([1, -1]),
            Bound.monomial(rng.randint(1, 2), rng.choice(
                [Fraction(1), Fraction(1, 2)])), None)
        return Term(t.coeff, min(t.r, Fraction(0)), t.s, t.phase, (g,))
    if kind < 0.65:
        # bounded gamma with growing upper bound -> splitting
        g = GammaFactor(
            rng.choice([Fraction(-2), Fraction(-3, 2)]), rng.randint(0, 1),
            rng.choice([1, -1]), Bound.const(rng.randint(1, 2)),
            Bound.monomial(rng.randint(1, 2), rng.choice(
                [Fraction(1), Fraction(1, 2)])))
        return Term(t.coeff, min(t.r, Fraction(0)), t.s, t.phase, (g,))
    if kind < 0.8:
        # bounds converging to constants -> freezing
        a0 = rng.randint(2, 3)
        lower = Bound(((Fraction(0), Fraction(a0)),
                       (Fraction(-1), Fraction(rng.randint(1, 2), 2))))
        g = GammaFactor(Fraction(-2), rng.randint(0, 1), rng.choice([1, -1]),
                        lower, None)
        return Term(t.coeff, t.r, t.s, t.phase, (g,))
    if kind < 0.9:
        return Term(t.coeff, t.r, t.s, t.phase, (random_simple_gamma(rng),))
    return t


def random_grammar_sum(rng: random.Random, max_terms=3) -> PreparedSum:
    terms = tuple(random_grammar_term(rng)
                  for _ in range(rng.randint(1, max_terms)))
    return normalize(PreparedSum(terms=terms))
