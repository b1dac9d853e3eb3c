"""Grammar model: normalization, ring operations, pointwise semantics."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from oscint import (
    Bound,
    ExactComplex,
    GammaFactor,
    Phase,
    PreparedSum,
    SQRT2,
    Term,
    add,
    conj,
    mul,
    normalize,
    parse,
)
from oscint.constants import ConstantValue
from oscint.errors import DomainError, DomainMismatch
from oscint.golden import G1
from oscint.model import check_distinct_signatures

from gen import random_naive_sum, random_simple_gamma

Y_SAMPLES = [1.5, 2.0, 3.7, 10.0, 99.0, 500.0]


def _close(a, b, scale=1.0, tol=1e-10):
    assert abs(a - b) <= tol * (1.0 + scale), f"{a} vs {b}"


# normalization ------------------------------------------------------------

def test_merge_like_terms():
    e_iy = Phase.linear(1)
    s = PreparedSum.of(Term(2, phase=e_iy), Term(3, phase=e_iy))
    assert len(s.terms) == 1
    assert s.terms[0].coeff == ExactComplex(
        ConstantValue.rational(5), ConstantValue.zero())


def test_cancellation_gives_zero_sum():
    t = Term(1, r=Fraction(-1), phase=Phase.linear(1))
    s = PreparedSum.of(t, Term(-1, r=Fraction(-1), phase=Phase.linear(1)))
    assert s.terms == ()
    assert s.is_zero()


def test_exponent_lowest_terms_merge():
    a = Term(1, r=Fraction(1, 2))
    b = Term(1, r=Fraction(2, 4))
    s = PreparedSum.of(a, b)
    assert len(s.terms) == 1
    assert s.terms[0].r == Fraction(1, 2)


def test_normalize_idempotent_random():
    rng = random.Random(7)
    for _ in range(30):
        s = random_naive_sum(rng, max_terms=4)
        assert normalize(s) == s
        check_distinct_signatures(s)


def test_phase_denominator_reduction():
    p = Phase.from_monomials([(Fraction(2, 4), SQRT2)])
    assert p.denominator == 2
    q = Phase.from_monomials([(Fraction(1, 2), SQRT2)])
    assert p == q


# evaluation ---------------------------------------------------------------

def test_evaluate_euler_identity():
    s = parse("exp(i*y)")
    _close(s.evaluate(math.pi), -1.0)


def test_evaluate_power_log_closed_form():
    s = parse("y^(-1)*log(y)")
    _close(s.evaluate(math.e), math.exp(-1))


def test_evaluate_gamma_against_oracle():
    g = GammaFactor(Fraction(-2), 0, 1, Bound.const(1), None)
    s = PreparedSum.of(Term(1, gammas=(g,)))
    _close(s.evaluate(5.0), G1, tol=1e-9)


def test_evaluate_outside_domain():
    s = parse("exp(i*y)")
    with pytest.raises(DomainError):
        s.evaluate(0.5)


# ring operations ------------------------------------------------------------

def test_mul_adds_exponents_and_phases():
    a = parse("y^(1)*exp(i*y)")
    b = parse("y^(-2)*exp(i*sqrt2*y)")
    prod = mul(a, b)
    assert len(prod.terms) == 1
    t = prod.terms[0]
    assert t.r == Fraction(-1)
    assert t.phase == Phase.from_monomials(
        [(Fraction(1), ConstantValue.rational(1) + SQRT2)])


def test_conj_negates_phase():
    s = parse("exp(i*y)")
    c = conj(s)
    assert c.terms[0].phase == Phase.linear(-1)
    y = 2.0
    _close(c.evaluate(y), s.evaluate(y).conjugate())


def test_domain_mismatch():
    from oscint.model import Domain
    a = parse("y")
    b = PreparedSum(Domain(2.0, None), a.terms)
    with pytest.raises(DomainMismatch):
        add(a, b)


def test_add_homomorphism_random():
    rng = random.Random(11)
    for _ in range(10):
        s1 = random_naive_sum(rng)
        s2 = random_naive_sum(rng)
        total = add(s1, s2)
        for y in [rng.uniform(1.01, 1000.0) for _ in range(20)]:
            lhs = total.evaluate(y)
            rhs = s1.evaluate(y) + s2.evaluate(y)
            _close(lhs, rhs, scale=abs(lhs) + abs(rhs))


def test_mul_homomorphism_random():
    rng = random.Random(13)
    for _ in range(10):
        s1 = random_naive_sum(rng)
        s2 = random_naive_sum(rng)
        prod = mul(s1, s2)
        for y in [rng.uniform(1.01, 1000.0) for _ in range(20)]:
            lhs = prod.evaluate(y)
            rhs = s1.evaluate(y) * s2.evaluate(y)
            _close(lhs, rhs, scale=abs(lhs) + abs(rhs))


def test_conj_involution_random():
    rng = random.Random(17)
    for _ in range(10):
        s = random_naive_sum(rng)
        assert conj(conj(s)) == s
        y = rng.uniform(1.5, 100.0)
        _close(conj(s).evaluate(y), s.evaluate(y).conjugate(),
               scale=abs(s.evaluate(y)))


def test_signatures_distinct_after_operations():
    rng = random.Random(19)
    for _ in range(10):
        s1 = random_naive_sum(rng)
        s2 = random_naive_sum(rng)
        check_distinct_signatures(add(s1, s2))
        check_distinct_signatures(mul(s1, s2))
        check_distinct_signatures(conj(s1))


def test_gamma_product_matches_oracle_product():
    rng = random.Random(23)
    g1 = random_simple_gamma(rng)
    g2 = random_simple_gamma(rng)
    prod = mul(PreparedSum.of(Term(1, gammas=(g1,))),
               PreparedSum.of(Term(1, gammas=(g2,))))
    assert len(prod.terms) == 1
    assert len(prod.terms[0].gammas) == 2
    y = 10.0
    _close(prod.evaluate(y), g1.evaluate(y) * g2.evaluate(y), tol=1e-8)


def test_mul_with_gamma_conjugate_pair():
    g = GammaFactor(Fraction(-2), 0, 1, Bound.const(1), None)
    s = PreparedSum.of(Term(1, gammas=(g,)))
    sq = mul(s, conj(s))
    _close(sq.evaluate(3.0), abs(G1) ** 2, tol=1e-8)


# bounded domains ------------------------------------------------------------

def test_bounded_domain_evaluation():
    from oscint.model import Domain
    s = parse("exp(i*y)", domain=Domain(-math.pi / 2, math.pi / 2))
    _close(s.evaluate(0.0), 1.0)
    with pytest.raises(DomainError):
        s.evaluate(2.0)


def test_bounded_domain_rejects_log_at_nonpositive():
    from oscint.model import Domain
    s = parse("log(y)", domain=Domain(-1.0, 1.0))
    with pytest.raises(DomainError):
        s.evaluate(-0.5)
