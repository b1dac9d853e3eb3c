"""Expression model: prepared power-log-phase terms and their ring operations.

A term is c * y^r * (log y)^s * e^{i*phi(y)} * gamma_1(y)*...*gamma_k(y),
where phi is a Puiseux polynomial with coefficients in the fixed constant
field and each gamma factor is a canonical one-variable oscillatory
integral over a prepared interval.  Sums of terms are normalized so that
term signatures (r, s, phi, gamma identity) are pairwise distinct.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple, Union

from .constants import CV_ONE, CV_ZERO, ConstantValue
from .errors import DomainError, DomainMismatch, GrammarError
from . import quad

Exponent = Fraction  # exact rationals in lowest terms; total order is the real one


# ---------------------------------------------------------------------------
# coefficients: exact pairs over the constant field, or plain complex floats

@dataclass(frozen=True)
class ExactComplex:
    re: ConstantValue
    im: ConstantValue

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def value(self) -> complex:
        return complex(self.re.value(), self.im.value())


Coeff = Union[ExactComplex, complex]


def as_coeff(x) -> Coeff:
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, ConstantValue):
        return ExactComplex(x, CV_ZERO)
    if isinstance(x, (int, Fraction)):
        return ExactComplex(ConstantValue.rational(x), CV_ZERO)
    return complex(x)


def coeff_is_exact(c: Coeff) -> bool:
    return isinstance(c, ExactComplex)


def coeff_value(c: Coeff) -> complex:
    return c.value() if isinstance(c, ExactComplex) else c


def coeff_is_zero(c: Coeff) -> bool:
    return c.is_zero() if isinstance(c, ExactComplex) else c == 0


def coeff_add(a: Coeff, b: Coeff) -> Coeff:
    if isinstance(a, ExactComplex) and isinstance(b, ExactComplex):
        return ExactComplex(a.re + b.re, a.im + b.im)
    return coeff_value(a) + coeff_value(b)


def coeff_neg(a: Coeff) -> Coeff:
    if isinstance(a, ExactComplex):
        return ExactComplex(-a.re, -a.im)
    return -a


def coeff_conj(a: Coeff) -> Coeff:
    if isinstance(a, ExactComplex):
        return ExactComplex(a.re, -a.im)
    return a.conjugate()


def coeff_mul(a: Coeff, b: Coeff) -> Coeff:
    # exact*exact stays exact only when the component products stay in the
    # constant field; otherwise coerce to floats (recorded by the type).
    if isinstance(a, ExactComplex) and isinstance(b, ExactComplex):
        rr = a.re.try_mul(b.re)
        ii = a.im.try_mul(b.im)
        ri = a.re.try_mul(b.im)
        ir = a.im.try_mul(b.re)
        if None not in (rr, ii, ri, ir):
            return ExactComplex(rr - ii, ri + ir)
    return coeff_value(a) * coeff_value(b)


def coeff_scale(a: Coeff, q) -> Coeff:
    if isinstance(a, ExactComplex) and isinstance(q, (int, Fraction)):
        return ExactComplex(a.re.scale(q), a.im.scale(q))
    return coeff_value(a) * complex(q)


# ---------------------------------------------------------------------------
# phases

@dataclass(frozen=True)
class Phase:
    """phi(y) = sum over k of c_k * y^(k/d), with c_k in the constant field.

    k ranges over nonzero integers; phi has no constant term, so phi(0)=0
    holds identically.  Negative k encode decaying tails that the prepare
    pass absorbs; the prepared normal form has k >= 1 only.
    """

    denominator: int
    coeffs: Tuple[Tuple[int, ConstantValue], ...]

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("denominator must be a positive integer")
        items = [(k, c) for k, c in self.coeffs if not c.is_zero()]
        for k, _ in items:
            if k == 0:
                raise GrammarError("phase must vanish at 0 (no constant term)")
        d = self.denominator
        g = d
        for k, _ in items:
            g = gcd(g, abs(k))
        if items and g > 1:
            d //= g
            items = [(k // g, c) for k, c in items]
        elif not items:
            d = 1
        items.sort(key=lambda kc: kc[0])
        object.__setattr__(self, "denominator", d)
        object.__setattr__(self, "coeffs", tuple(items))

    @staticmethod
    def zero() -> "Phase":
        return Phase(1, ())

    @staticmethod
    def linear(c=1) -> "Phase":
        cv = c if isinstance(c, ConstantValue) else ConstantValue.rational(c)
        return Phase(1, ((1, cv),))

    @staticmethod
    def from_monomials(monomials) -> "Phase":
        """Build from (exponent: Fraction, coeff: ConstantValue) pairs."""
        d = 1
        for e, _ in monomials:
            d = d * Fraction(e).denominator // gcd(d, Fraction(e).denominator)
        acc = {}
        for e, c in monomials:
            k = int(Fraction(e) * d)
            acc[k] = acc.get(k, CV_ZERO) + c
        return Phase(d, tuple(acc.items()))

    def monomials(self):
        """Yield (exponent: Fraction, coeff) pairs, ascending exponent."""
        d = self.denominator
        return [(Fraction(k, d), c) for k, c in self.coeffs]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_polynomial(self) -> bool:
        return all(k > 0 for k, _ in self.coeffs)

    def positive_part(self) -> "Phase":
        return Phase(self.denominator,
                     tuple((k, c) for k, c in self.coeffs if k > 0))

    def negative_part(self) -> "Phase":
        return Phase(self.denominator,
                     tuple((k, c) for k, c in self.coeffs if k < 0))

    def degree(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return Fraction(self.coeffs[-1][0], self.denominator)

    def leading(self):
        if not self.coeffs:
            return Fraction(0), CV_ZERO
        k, c = self.coeffs[-1]
        return Fraction(k, self.denominator), c

    def __add__(self, other: "Phase") -> "Phase":
        return Phase.from_monomials(self.monomials() + other.monomials())

    def __neg__(self) -> "Phase":
        return Phase(self.denominator,
                     tuple((k, -c) for k, c in self.coeffs))

    def scale(self, q) -> "Phase":
        q = Fraction(q)
        if q == 0:
            return Phase.zero()
        return Phase(self.denominator,
                     tuple((k, c.scale(q)) for k, c in self.coeffs))

    def __call__(self, y: float) -> float:
        d = self.denominator
        return sum(c.value() * y ** (k / d) for k, c in self.coeffs)

    def order_key(self):
        return (self.denominator,
                tuple((k, c.order_key()) for k, c in self.coeffs))

    def to_json(self) -> dict:
        return {
            "d": self.denominator,
            "coeffs": {str(k): c.to_json() for k, c in self.coeffs},
        }

    @staticmethod
    def from_json(obj: dict) -> "Phase":
        return Phase(obj["d"], tuple(
            (int(k), ConstantValue.from_json(c))
            for k, c in obj["coeffs"].items()
        ))


# ---------------------------------------------------------------------------
# gamma-factor bounds and units

@dataclass(frozen=True)
class Bound:
    """Finite sum of rational-coefficient powers c*y^alpha, used as an
    integration limit.  Coefficients stay rational so that boundary terms
    produced by integration by parts keep exact phases."""

    powers: Tuple[Tuple[Fraction, Fraction], ...]  # (alpha, coeff), alpha desc

    def __post_init__(self):
        items = sorted(
            ((Fraction(a), Fraction(c)) for a, c in self.powers if c != 0),
            key=lambda ac: ac[0], reverse=True,
        )
        object.__setattr__(self, "powers", tuple(items))

    @staticmethod
    def const(c) -> "Bound":
        return Bound(((Fraction(0), Fraction(c)),))

    @staticmethod
    def monomial(c, alpha) -> "Bound":
        return Bound(((Fraction(alpha), Fraction(c)),))

    def __call__(self, y: float) -> float:
        return sum(float(c) * y ** float(a) for a, c in self.powers)

    def is_const(self) -> bool:
        return all(a == 0 for a, _ in self.powers)

    def is_monomial(self) -> bool:
        return len(self.powers) == 1

    def leading(self):
        if not self.powers:
            return Fraction(0), Fraction(0)
        return self.powers[0]

    def constant_part(self) -> Fraction:
        for a, c in self.powers:
            if a == 0:
                return c
        return Fraction(0)

    def decaying_part(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return tuple((a, c) for a, c in self.powers if a < 0)

    def order_key(self):
        return self.powers

    def to_json(self):
        return [[str(a), str(c)] for a, c in self.powers]

    @staticmethod
    def from_json(obj) -> "Bound":
        return Bound(tuple((Fraction(a), Fraction(c)) for a, c in obj))

    def to_text(self) -> str:
        parts = []
        for a, c in self.powers:
            if a == 0:
                parts.append(str(c))
            elif a == 1:
                parts.append(f"{c}*y" if c != 1 else "y")
            else:
                parts.append(f"{c}*y^({a})" if c != 1 else f"y^({a})")
        return "+".join(parts).replace("+-", "-") if parts else "0"


@dataclass(frozen=True)
class UnitSeries:
    """Truncated power series 1 + sum a_k (lower/t)^(k/d) + sum b_k (t/upper)^(k/d).

    Coefficients are rationals; the discarded analytic tail is covered by
    tail_bound, which feeds rewrite certificates.
    """

    d: int
    lower_coeffs: Tuple[Tuple[int, Fraction], ...] = ()
    upper_coeffs: Tuple[Tuple[int, Fraction], ...] = ()
    tail_bound: float = 0.0

    def __post_init__(self):
        lo = tuple(sorted((int(k), Fraction(c)) for k, c in self.lower_coeffs
                          if c != 0))
        hi = tuple(sorted((int(k), Fraction(c)) for k, c in self.upper_coeffs
                          if c != 0))
        for k, _ in lo + hi:
            if k < 1:
                raise ValueError("unit series indices start at 1")
        object.__setattr__(self, "lower_coeffs", lo)
        object.__setattr__(self, "upper_coeffs", hi)

    def value(self, t, a: float, b: Optional[float]):
        out = 1.0 + 0.0 * t
        for k, c in self.lower_coeffs:
            out = out + float(c) * (a / t) ** (k / self.d)
        if self.upper_coeffs:
            if b is None:
                raise ValueError("upper-variable unit on an unbounded interval")
            for k, c in self.upper_coeffs:
                out = out + float(c) * (t / b) ** (k / self.d)
        return out

    def abs_bound(self) -> float:
        # |lower/t| <= 1 and |t/upper| <= 1 on the interval
        s = sum(abs(float(c)) for _, c in self.lower_coeffs)
        s += sum(abs(float(c)) for _, c in self.upper_coeffs)
        return 1.0 + s + self.tail_bound

    def order_key(self):
        return (self.d, self.lower_coeffs, self.upper_coeffs, self.tail_bound)

    def to_json(self):
        return {
            "d": self.d,
            "lower": [[k, str(c)] for k, c in self.lower_coeffs],
            "upper": [[k, str(c)] for k, c in self.upper_coeffs],
            "tail_bound": self.tail_bound,
        }

    @staticmethod
    def from_json(obj) -> "UnitSeries":
        return UnitSeries(
            obj["d"],
            tuple((int(k), Fraction(c)) for k, c in obj["lower"]),
            tuple((int(k), Fraction(c)) for k, c in obj["upper"]),
            float(obj.get("tail_bound", 0.0)),
        )


@dataclass(frozen=True)
class PhaseTail:
    """Pointwise factor e^{i*p(y)} - sum_{m<=order} (i*p(y))^m / m! with p a
    decaying phase tail (all exponents negative).  Produced by the prepare
    pass; the Taylor bound |p|^(order+1)/(order+1)! certifies its envelope.
    """

    phase_neg: Phase
    order: int

    def __post_init__(self):
        if self.phase_neg.is_zero():
            raise ValueError("tail requires a nonzero decaying phase")
        if any(k > 0 for k, _ in self.phase_neg.coeffs):
            raise ValueError("tail phase must be decaying")

    def value(self, y: float) -> complex:
        p = self.phase_neg(y)
        acc = 0.0 + 0.0j
        pw = 1.0 + 0.0j
        fact = 1.0
        for m in range(self.order + 1):
            if m > 0:
                pw *= 1j * p
                fact *= m
            acc += pw / fact
        return cmath.exp(1j * p) - acc

    def decay_exponent(self) -> Fraction:
        # |p(y)| <= C*y^lead with lead < 0, so |value| = O(y^(lead*(order+1)))
        lead, _ = self.phase_neg.leading()
        return lead * (self.order + 1)

    def coeff_sum(self) -> float:
        return sum(abs(c.value()) for _, c in self.phase_neg.coeffs)

    def order_key(self):
        return (self.phase_neg.order_key(), self.order)

    def to_json(self):
        return {"phase": self.phase_neg.to_json(), "order": self.order}

    @staticmethod
    def from_json(obj) -> "PhaseTail":
        return PhaseTail(Phase.from_json(obj["phase"]), int(obj["order"]))


# ---------------------------------------------------------------------------
# gamma factors

_GAMMA_CACHE: dict = {}


@dataclass(frozen=True)
class GammaFactor:
    """integral over (lower(y), upper(y)) of t^rho (log t)^sigma e^{i*orient*t} u(t) dt.

    Prepared intervals satisfy lower >= 1 and upper > lower (or +inf); ray
    factors require rho < -1 so the integral is absolutely convergent.
    Correction factors are the frozen-bound differences of the prepare
    pass: small signed integrals between a bound and its y-limit.
    """

    rho: Fraction
    sigma: int
    orientation: int
    lower: Bound
    upper: Optional[Bound]  # None means +infinity
    unit: Optional[UnitSeries] = None
    correction: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rho", Fraction(self.rho))
        if self.sigma < 0:
            raise ValueError("log power must be a natural number")
        if self.orientation not in (-1, 1):
            raise ValueError("orientation must be +1 or -1")
        if self.upper is None and self.rho >= -1:
            raise ValueError("ray gamma factor requires rho < -1")
        if self.upper is None and self.unit is not None \
                and self.unit.upper_coeffs:
            raise ValueError("upper-variable unit on a ray")

    @staticmethod
    def ray(rho, sigma=0, orientation=1, a=1, unit=None) -> "GammaFactor":
        return GammaFactor(Fraction(rho), sigma, orientation,
                           Bound.const(a), None, unit)

    @staticmethod
    def over(rho, sigma, orientation, lower: Bound, upper: Bound,
             unit=None, correction=False) -> "GammaFactor":
        return GammaFactor(Fraction(rho), sigma, orientation, lower, upper,
                           unit, correction)

    def is_y_free(self) -> bool:
        return self.lower.is_const() and (
            self.upper is None or self.upper.is_const())

    def key(self):
        up = (1,) if self.upper is None else (0,) + self.upper.order_key()
        un = () if self.unit is None else self.unit.order_key()
        return (self.rho, self.sigma, self.orientation,
                self.lower.order_key(), up, un, self.correction)

    def evaluate(self, y: Optional[float] = None, tol: float = 1e-10) -> complex:
        """Numeric value via the quadrature oracle (memoized when y-free)."""
        if self.is_y_free():
            ck = (self.key(), tol)
            hit = _GAMMA_CACHE.get(ck)
            if hit is not None:
                return hit
            a = self.lower(1.0)
            b = None if self.upper is None else self.upper(1.0)
            res = quad.osc_integral(self.rho, self.sigma, self.orientation,
                                    a, b, unit=self.unit, tol=tol)
            _GAMMA_CACHE[ck] = res.value
            return res.value
        if y is None:
            raise DomainError("y-dependent gamma factor needs an evaluation point")
        a = self.lower(y)
        b = None if self.upper is None else self.upper(y)
        if b is not None and b < a:
            res = quad.osc_integral(self.rho, self.sigma, self.orientation,
                                    b, a, unit=self.unit, tol=tol)
            return -res.value
        res = quad.osc_integral(self.rho, self.sigma, self.orientation,
                                a, b, unit=self.unit, tol=tol)
        return res.value

    def growth(self) -> Tuple[Fraction, int, float]:
        """Certified envelope |gamma(y)| <= C * y^g * (log y)^e on the ray.

        Uses |unit| <= its coefficient-sum bound and the exact power-log
        antiderivative of the absolute integrand.
        """
        ub = self.unit.abs_bound() if self.unit is not None else 1.0
        la, ca = self.lower.leading()
        if self.upper is None:
            # |gamma| <= ub * tail(rho, sigma, lower(y)) with lower ~ ca*y^la
            if la == 0:
                a0 = self.lower(1.0)
                return Fraction(0), 0, ub * quad.abs_power_log_tail(
                    float(self.rho), self.sigma, max(a0, 1.0))
            # tail(A) ~ A^(rho+1) (log A)^sigma: exponent la*(rho+1)
            c = ub * quad.abs_power_log_tail(float(self.rho), self.sigma,
                                             max(float(ca), 1.0)) \
                * (1.0 + float(abs(la)) ** self.sigma)
            return la * (self.rho + 1), self.sigma, max(c, 1.0)
        if self.correction:
            # |gamma| <= max-kernel * |upper(y) - lower(y)|; the difference's
            # leading behaviour gives the decay exponent.
            diff = _bound_difference_leading(self.lower, self.upper)
            dexp, dc = diff
            a0 = max(self.lower(1.0), 1.0)
            kern = ub * (a0 + 1.0) ** max(float(self.rho), 0.0) \
                * (math.log(a0 + 2.0) + 1.0) ** self.sigma
            return dexp, 0, abs(float(dc)) * kern + 1.0
        lb, cb = self.upper.leading()
        if la == 0 and lb == 0:
            a0, b0 = self.lower(1.0), self.upper(1.0)
            return Fraction(0), 0, ub * quad.abs_power_log_integral(
                float(self.rho), self.sigma, max(a0, 1.0), max(b0, a0 + 1.0))
        # growing upper bound ~ cb*y^lb: mass ~ B^(rho+1) log^sigma when
        # rho > -1, log^(sigma+1) at rho == -1, constant when rho < -1
        if self.rho > -1:
            g = lb * (self.rho + 1)
            extra = self.sigma
        elif self.rho == -1:
            g = Fraction(0)
            extra = self.sigma + 1
        else:
            g = la * (self.rho + 1)
            extra = self.sigma
        c = ub * (1.0 + abs(float(cb)) ** (float(self.rho) + 1.0)) \
            * (1.0 + float(max(abs(la), abs(lb))) ** (self.sigma + 1))
        return g, extra, max(c, 1.0) * 4.0

    def conjugate(self) -> "GammaFactor":
        return GammaFactor(self.rho, self.sigma, -self.orientation,
                           self.lower, self.upper, self.unit, self.correction)

    def to_json(self):
        return {
            "rho": str(self.rho),
            "sigma": self.sigma,
            "orientation": self.orientation,
            "lower": self.lower.to_json(),
            "upper": "inf" if self.upper is None else self.upper.to_json(),
            "unit": None if self.unit is None else self.unit.to_json(),
            "correction": self.correction,
        }

    @staticmethod
    def from_json(obj) -> "GammaFactor":
        return GammaFactor(
            Fraction(obj["rho"]), int(obj["sigma"]), int(obj["orientation"]),
            Bound.from_json(obj["lower"]),
            None if obj["upper"] == "inf" else Bound.from_json(obj["upper"]),
            None if obj.get("unit") is None else UnitSeries.from_json(obj["unit"]),
            bool(obj.get("correction", False)),
        )


def _bound_difference_leading(lower: Bound, upper: Bound):
    """Leading (exponent, coeff) of upper(y) - lower(y), for correction
    envelopes.  Exponent 0 differences count as O(1)."""
    acc = {}
    for a, c in upper.powers:
        acc[a] = acc.get(a, Fraction(0)) + c
    for a, c in lower.powers:
        acc[a] = acc.get(a, Fraction(0)) - c
    items = sorted(((a, c) for a, c in acc.items() if c != 0), reverse=True)
    if not items:
        return Fraction(-1) * 10 ** 6, Fraction(0)
    return items[0]


# ---------------------------------------------------------------------------
# terms and prepared sums

@dataclass(frozen=True)
class Term:
    coeff: Coeff
    r: Fraction = Fraction(0)
    s: int = 0
    phase: Phase = field(default_factory=Phase.zero)
    gammas: Tuple[GammaFactor, ...] = ()
    tails: Tuple[PhaseTail, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_coeff(self.coeff))
        object.__setattr__(self, "r", Fraction(self.r))
        if self.s < 0:
            raise ValueError("log power must be a natural number")
        object.__setattr__(
            self, "gammas",
            tuple(sorted(self.gammas, key=lambda g: g.key())))
        object.__setattr__(
            self, "tails",
            tuple(sorted(self.tails, key=lambda t: t.order_key())))

    def signature(self):
        return (self.r, self.s, self.phase.order_key(),
                tuple(g.key() for g in self.gammas),
                tuple(t.order_key() for t in self.tails))

    def sort_key(self):
        return (-self.r, -self.s, self.phase.order_key(),
                tuple(g.key() for g in self.gammas),
                tuple(t.order_key() for t in self.tails))

    def is_zero(self) -> bool:
        return coeff_is_zero(self.coeff)

    def gamma(self) -> Optional[GammaFactor]:
        """The single gamma factor, if there is exactly one."""
        return self.gammas[0] if len(self.gammas) == 1 else None

    def evaluate(self, y: float, tol: float = 1e-10) -> complex:
        c = coeff_value(self.coeff)
        if c == 0:
            return 0.0j
        if y > 0:
            v = c * y ** float(self.r)
            if self.s:
                v *= math.log(y) ** self.s
        else:
            if self.s or self.r.denominator != 1 or (self.r < 0 and y == 0):
                raise DomainError(f"term not defined at y={y}")
            v = c * y ** int(self.r)
        if not self.phase.is_zero():
            if y <= 0 and any(Fraction(k, self.phase.denominator).denominator != 1
                              or k < 0 for k, _ in self.phase.coeffs):
                raise DomainError(f"phase not defined at y={y}")
            v *= cmath.exp(1j * self.phase(y))
        for g in self.gammas:
            v *= g.evaluate(y, tol)
        for t in self.tails:
            v *= t.value(y)
        return v

    def scaled(self, c) -> "Term":
        return Term(coeff_mul(self.coeff, as_coeff(c)), self.r, self.s,
                    self.phase, self.gammas, self.tails)

    def to_json(self):
        cv = coeff_value(self.coeff)
        return {
            "coeff": {"re": cv.real, "im": cv.imag},
            "r": str(self.r),
            "s": self.s,
            "phase": self.phase.to_json(),
            "gammas": [g.to_json() for g in self.gammas],
            "tails": [t.to_json() for t in self.tails],
        }

    @staticmethod
    def from_json(obj) -> "Term":
        return Term(
            complex(obj["coeff"]["re"], obj["coeff"]["im"]),
            Fraction(obj["r"]), int(obj["s"]),
            Phase.from_json(obj["phase"]),
            tuple(GammaFactor.from_json(g) for g in obj.get("gammas", ())),
            tuple(PhaseTail.from_json(t) for t in obj.get("tails", ())),
        )


@dataclass(frozen=True)
class Domain:
    lower: float = 1.0
    upper: Optional[float] = None  # None is +infinity

    def __post_init__(self):
        if self.upper is not None and not self.upper > self.lower:
            raise ValueError("empty domain")

    def is_ray(self) -> bool:
        return self.upper is None

    def contains(self, y: float) -> bool:
        return y > self.lower and (self.upper is None or y < self.upper)

    def to_json(self):
        return {"lower": self.lower,
                "upper": "inf" if self.upper is None else self.upper}

    @staticmethod
    def from_json(obj) -> "Domain":
        up = obj["upper"]
        return Domain(float(obj["lower"]),
                      None if up == "inf" else float(up))


RAY1 = Domain(1.0, None)


@dataclass(frozen=True)
class PreparedSum:
    domain: Domain = RAY1
    terms: Tuple[Term, ...] = ()

    @staticmethod
    def of(*terms, domain: Domain = RAY1) -> "PreparedSum":
        return normalize(PreparedSum(domain, tuple(terms)))

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.terms)

    def evaluate(self, y: float, tol: float = 1e-10) -> complex:
        if not self.domain.contains(y):
            raise DomainError(f"y={y} outside domain")
        return sum((t.evaluate(y, tol) for t in self.terms), 0.0j)

    def map_terms(self, f) -> "PreparedSum":
        return normalize(PreparedSum(self.domain,
                                     tuple(f(t) for t in self.terms)))

    def to_json(self):
        return {"domain": self.domain.to_json(),
                "terms": [t.to_json() for t in self.terms]}

    @staticmethod
    def from_json(obj) -> "PreparedSum":
        return normalize(PreparedSum(
            Domain.from_json(obj["domain"]),
            tuple(Term.from_json(t) for t in obj["terms"]),
        ))


def normalize(s: PreparedSum) -> PreparedSum:
    """Merge like-signature terms, drop zeros, enforce the sort order.

    Merging uses exact signature equality only; it is idempotent.
    """
    merged: dict = {}
    order: list = []
    for t in s.terms:
        sig = t.signature()
        if sig in merged:
            merged[sig] = coeff_add(merged[sig], t.coeff)
        else:
            merged[sig] = t.coeff
            order.append((sig, t))
    out = []
    for sig, t in order:
        c = merged[sig]
        if not coeff_is_zero(c):
            out.append(Term(c, t.r, t.s, t.phase, t.gammas, t.tails))
    out.sort(key=Term.sort_key)
    return PreparedSum(s.domain, tuple(out))


def check_distinct_signatures(s: PreparedSum) -> None:
    sigs = [t.signature() for t in s.terms]
    if len(sigs) != len(set(sigs)):
        raise AssertionError("duplicate term signatures after normalization")


def add(a: PreparedSum, b: PreparedSum) -> PreparedSum:
    if a.domain != b.domain:
        raise DomainMismatch(f"domains differ: {a.domain} vs {b.domain}")
    return normalize(PreparedSum(a.domain, a.terms + b.terms))


def sub(a: PreparedSum, b: PreparedSum) -> PreparedSum:
    return add(a, scale(b, -1))


def scale(a: PreparedSum, c) -> PreparedSum:
    return a.map_terms(lambda t: t.scaled(c))


def mul(a: PreparedSum, b: PreparedSum) -> PreparedSum:
    """Product sum; phases and (r, s) add, gamma factors accumulate as a
    product marker whose integration defers to the Fubini path."""
    if a.domain != b.domain:
        raise DomainMismatch(f"domains differ: {a.domain} vs {b.domain}")
    out = []
    for ta in a.terms:
        for tb in b.terms:
            out.append(Term(
                coeff_mul(ta.coeff, tb.coeff),
                ta.r + tb.r, ta.s + tb.s,
                ta.phase + tb.phase,
                ta.gammas + tb.gammas,
                ta.tails + tb.tails,
            ))
    return normalize(PreparedSum(a.domain, tuple(out)))


def conj(a: PreparedSum) -> PreparedSum:
    def c(t: Term) -> Term:
        if t.tails:
            raise GrammarError("conjugation of tail remainders is not supported")
        return Term(coeff_conj(t.coeff), t.r, t.s, -t.phase,
                    tuple(g.conjugate() for g in t.gammas), ())
    return a.map_terms(c)


def clear_gamma_cache() -> None:
    _GAMMA_CACHE.clear()
