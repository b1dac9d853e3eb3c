"""Expression mini-language: tokenizer, recursive-descent parser, printer.

Grammar (see README for examples):

    sum    := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := number | const | 'i' | 'y' pow? | 'log(y)' pow?
            | 'exp(i*' phase ')' | 'gamma(' kwargs ')' | '(' sum ')'
    pow    := '^(' rational ')'
    number := integer | integer '/' integer | decimal
    const  := 'sqrt2' | 'sqrt3' | 'pi' | 'log2'

Phases are sums of monomials c*y^(k/d) with c in the constant field and no
constant term.  Gamma factors take keyword arguments, e.g.
gamma(rho=-2, sigma=0, orient=1, a=1, b=inf); bounds a and b are finite
sums of rational multiples of powers of y.

parse(print(S)) == S structurally, up to normalization.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .constants import CV_ONE, CV_ZERO, ConstantValue
from .errors import ExpressionSyntaxError, GrammarError
from .model import (
    Bound,
    Domain,
    ExactComplex,
    GammaFactor,
    Phase,
    PreparedSum,
    RAY1,
    Term,
    coeff_value,
    mul,
    normalize,
    scale,
)

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>[-+*/^(),=]))"
)

_CONST_NAMES = ("sqrt2", "sqrt3", "pi", "log2")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(
                f"unexpected character {text[bad]!r}", bad)
        if m.group("num") is not None:
            out.append(("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            out.append(("name", m.group("name"), m.start("name")))
        else:
            out.append(("sym", m.group("sym"), m.start("sym")))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _PhasePoly:
    """Polynomial in rational powers of y over the constant field; the
    working value while parsing inside exp(i*...)."""

    def __init__(self, monos=None):
        self.monos = dict(monos or {})  # Fraction exponent -> ConstantValue

    @staticmethod
    def const(cv: ConstantValue) -> "_PhasePoly":
        return _PhasePoly({Fraction(0): cv})

    @staticmethod
    def power(e: Fraction) -> "_PhasePoly":
        return _PhasePoly({Fraction(e): CV_ONE})

    def add(self, other: "_PhasePoly") -> "_PhasePoly":
        monos = dict(self.monos)
        for e, c in other.monos.items():
            monos[e] = monos.get(e, CV_ZERO) + c
        return _PhasePoly(monos)

    def neg(self) -> "_PhasePoly":
        return _PhasePoly({e: -c for e, c in self.monos.items()})

    def mul(self, other: "_PhasePoly", pos: int) -> "_PhasePoly":
        monos: dict = {}
        for e1, c1 in self.monos.items():
            for e2, c2 in other.monos.items():
                p = c1.try_mul(c2)
                if p is None:
                    raise GrammarError(
                        "phase coefficient product leaves the constant field "
                        f"(near position {pos})")
                e = e1 + e2
                monos[e] = monos.get(e, CV_ZERO) + p
        return _PhasePoly(monos)

    def to_phase(self) -> Phase:
        c0 = self.monos.get(Fraction(0))
        if c0 is not None and not c0.is_zero():
            raise GrammarError("phase with nonzero constant term")
        return Phase.from_monomials(
            [(e, c) for e, c in self.monos.items() if e != 0])


class _Parser:
    def __init__(self, text: str, domain: Domain):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.domain = domain

    # token helpers -------------------------------------------------------
    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, kind, value=None) -> bool:
        k, v, _ = self.peek()
        if k == kind and (value is None or v == value):
            self.i += 1
            return True
        return False

    def expect(self, kind, value=None):
        k, v, p = self.peek()
        if k != kind or (value is not None and v != value):
            want = value if value is not None else kind
            raise ExpressionSyntaxError(f"expected {want!r}, found {v!r}", p)
        return self.next()

    # grammar -------------------------------------------------------------
    def parse_sum(self) -> PreparedSum:
        negate = self.accept("sym", "-")
        acc = self.parse_term()
        if negate:
            acc = scale(acc, -1)
        while True:
            if self.accept("sym", "+"):
                acc = normalize(PreparedSum(
                    acc.domain, acc.terms + self.parse_term().terms))
            elif self.accept("sym", "-"):
                acc = normalize(PreparedSum(
                    acc.domain, acc.terms + scale(self.parse_term(), -1).terms))
            else:
                return acc

    def parse_term(self) -> PreparedSum:
        acc = self.parse_factor()
        while self.accept("sym", "*"):
            acc = mul(acc, self.parse_factor())
        return acc

    def parse_factor(self) -> PreparedSum:
        k, v, p = self.peek()
        if k == "num":
            return self._one_term(Term(self._number()))
        if k == "sym" and v == "(":
            self.next()
            inner = self.parse_sum()
            self.expect("sym", ")")
            return inner
        if k != "name":
            raise ExpressionSyntaxError(f"unexpected token {v!r}", p)
        if v == "y":
            self.next()
            e = self._maybe_pow()
            return self._one_term(Term(1, r=e if e is not None else Fraction(1)))
        if v == "log":
            self.next()
            self.expect("sym", "(")
            self.expect("name", "y")
            self.expect("sym", ")")
            e = self._maybe_pow()
            if e is None:
                s = 1
            else:
                if e.denominator != 1 or e < 0:
                    raise GrammarError(
                        f"log power must be a natural number, got {e}")
                s = int(e)
            return self._one_term(Term(1, s=s))
        if v == "exp":
            self.next()
            self.expect("sym", "(")
            self.expect("name", "i")
            self.expect("sym", "*")
            poly = self._parse_phase_sum()
            self.expect("sym", ")")
            return self._one_term(Term(1, phase=poly.to_phase()))
        if v == "gamma":
            self.next()
            return self._one_term(Term(1, gammas=(self._parse_gamma(),)))
        if v == "i":
            self.next()
            return self._one_term(Term(ExactComplex(CV_ZERO, CV_ONE)))
        if v in _CONST_NAMES:
            self.next()
            return self._one_term(
                Term(ExactComplex(ConstantValue.named(v), CV_ZERO)))
        raise ExpressionSyntaxError(f"unknown name {v!r}", p)

    def _one_term(self, t: Term) -> PreparedSum:
        return PreparedSum(self.domain, (t,))

    def _number(self):
        """Integer, integer/integer, or decimal; exact unless decimal."""
        k, v, p = self.next()
        if "." in v or "e" in v or "E" in v:
            return complex(float(v))
        n = int(v)
        k2, v2, _ = self.peek()
        if k2 == "sym" and v2 == "/":
            k3, v3, _ = self.toks[self.i + 1]
            if k3 == "num" and "." not in v3:
                self.i += 2
                return ExactComplex(
                    ConstantValue.rational(Fraction(n, int(v3))), CV_ZERO)
        return ExactComplex(ConstantValue.rational(n), CV_ZERO)

    def _maybe_pow(self) -> Optional[Fraction]:
        if not self.accept("sym", "^"):
            return None
        self.expect("sym", "(")
        e = self._signed_rational()
        self.expect("sym", ")")
        return e

    def _signed_rational(self) -> Fraction:
        sign = -1 if self.accept("sym", "-") else 1
        k, v, p = self.expect("num")
        if "." in v:
            raise ExpressionSyntaxError("exponents must be rational", p)
        num = int(v)
        den = 1
        k2, v2, _ = self.peek()
        k3, v3, _ = self.toks[self.i + 1] if self.i + 1 < len(self.toks) \
            else ("end", "", 0)
        if k2 == "sym" and v2 == "/" and k3 == "num" and "." not in v3:
            self.i += 2
            den = int(v3)
        return Fraction(sign * num, den)

    # phases ----------------------------------------------------------------
    def _parse_phase_sum(self) -> _PhasePoly:
        negate = self.accept("sym", "-")
        acc = self._parse_phase_term()
        if negate:
            acc = acc.neg()
        while True:
            if self.accept("sym", "+"):
                acc = acc.add(self._parse_phase_term())
            elif self.accept("sym", "-"):
                acc = acc.add(self._parse_phase_term().neg())
            else:
                return acc

    def _parse_phase_term(self) -> _PhasePoly:
        acc = self._parse_phase_factor()
        while self.accept("sym", "*"):
            _, _, p = self.peek()
            acc = acc.mul(self._parse_phase_factor(), p)
        return acc

    def _parse_phase_factor(self) -> _PhasePoly:
        k, v, p = self.peek()
        if k == "num":
            num = self._number()
            if not isinstance(num, ExactComplex):
                raise GrammarError(
                    f"phase coefficients must be exact (position {p})")
            return _PhasePoly.const(num.re)
        if k == "sym" and v == "(":
            self.next()
            inner = self._parse_phase_sum()
            self.expect("sym", ")")
            return inner
        if k == "name" and v == "y":
            self.next()
            e = self._maybe_pow()
            return _PhasePoly.power(e if e is not None else Fraction(1))
        if k == "name" and v in _CONST_NAMES:
            self.next()
            return _PhasePoly.const(ConstantValue.named(v))
        raise ExpressionSyntaxError(
            f"unexpected token {v!r} in phase", p)

    # gamma factors ----------------------------------------------------------
    def _parse_gamma(self) -> GammaFactor:
        self.expect("sym", "(")
        kwargs = {}
        while True:
            k, v, p = self.expect("name")
            self.expect("sym", "=")
            if v == "rho":
                kwargs["rho"] = self._signed_rational()
            elif v == "sigma":
                e = self._signed_rational()
                if e.denominator != 1 or e < 0:
                    raise GrammarError("sigma must be a natural number")
                kwargs["sigma"] = int(e)
            elif v == "orient":
                e = self._signed_rational()
                if e not in (1, -1):
                    raise GrammarError("orient must be +1 or -1")
                kwargs["orientation"] = int(e)
            elif v == "a":
                kwargs["lower"] = self._parse_bound()
            elif v == "b":
                if self.accept("name", "inf"):
                    kwargs["upper"] = None
                else:
                    kwargs["upper"] = self._parse_bound()
            else:
                raise ExpressionSyntaxError(f"unknown gamma argument {v!r}", p)
            if not self.accept("sym", ","):
                break
        self.expect("sym", ")")
        if "rho" not in kwargs:
            raise GrammarError("gamma requires rho=")
        lower = kwargs.get("lower", Bound.const(1))
        if lower(1.0) < 1 and lower.is_const():
            raise GrammarError("gamma lower bound must be >= 1")
        return GammaFactor(
            kwargs["rho"], kwargs.get("sigma", 0),
            kwargs.get("orientation", 1), lower,
            kwargs.get("upper", None))

    def _parse_bound(self) -> Bound:
        powers = []
        negate = self.accept("sym", "-")
        powers.append(self._parse_bound_term(negate))
        while True:
            if self.accept("sym", "+"):
                powers.append(self._parse_bound_term(False))
            elif self.accept("sym", "-"):
                powers.append(self._parse_bound_term(True))
            else:
                break
        return Bound(tuple(powers))

    def _parse_bound_term(self, negate: bool):
        k, v, p = self.peek()
        coeff = Fraction(1)
        alpha = Fraction(0)
        if k == "num":
            coeff = self._signed_rational()
            if self.accept("sym", "*"):
                self.expect("name", "y")
                e = self._maybe_pow()
                alpha = e if e is not None else Fraction(1)
            elif self.peek()[:2] == ("sym", "/") \
                    and self.toks[self.i + 1][:2] == ("name", "y"):
                self.i += 2
                e = self._maybe_pow()
                alpha = -(e if e is not None else Fraction(1))
        elif k == "name" and v == "y":
            self.next()
            e = self._maybe_pow()
            alpha = e if e is not None else Fraction(1)
        else:
            raise ExpressionSyntaxError(f"bad bound term {v!r}", p)
        if negate:
            coeff = -coeff
        return (alpha, coeff)


def parse(text: str, domain: Domain = RAY1) -> PreparedSum:
    """Parse an expression into its normalized PreparedSum."""
    p = _Parser(text, domain)
    out = p.parse_sum()
    k, v, pos = p.peek()
    if k != "end":
        raise ExpressionSyntaxError(f"trailing input {v!r}", pos)
    return normalize(out)


# ---------------------------------------------------------------------------
# printing

def _signed_join(parts) -> str:
    out = ""
    for part in parts:
        if not out:
            out = part
        elif part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out or "0"


def _frac_text(q: Fraction) -> str:
    return str(q)


def _cv_factor_text(cv: ConstantValue) -> str:
    """Constant-field element as a multiplicative factor (parenthesized
    when it is a sum)."""
    pieces = []
    for w, b in zip(cv.weights, ("one", "sqrt2", "sqrt3", "pi", "log2")):
        if w == 0:
            continue
        if b == "one":
            pieces.append(_frac_text(w))
        elif w == 1:
            pieces.append(b)
        elif w == -1:
            pieces.append(f"-{b}")
        else:
            pieces.append(f"{_frac_text(w)}*{b}")
    if not pieces:
        return "0"
    if len(pieces) == 1:
        return pieces[0]
    return "(" + _signed_join(pieces) + ")"


def _phase_text(phase: Phase) -> str:
    parts = []
    for e, c in phase.monomials():
        if e == 1:
            ytxt = "y"
        else:
            ytxt = f"y^({e})"
        ctxt = _cv_factor_text(c)
        if ctxt == "1":
            parts.append(ytxt)
        elif ctxt == "-1":
            parts.append(f"-{ytxt}")
        else:
            parts.append(f"{ctxt}*{ytxt}")
    return _signed_join(parts)


def _coeff_text(c) -> Optional[str]:
    """Coefficient as a factor string, or None when it is exactly 1."""
    if isinstance(c, ExactComplex):
        if c.im.is_zero():
            if c.re == CV_ONE:
                return None
            return _cv_factor_text(c.re)
        re_txt = None if c.re.is_zero() else _cv_factor_text(c.re)
        im_base = _cv_factor_text(c.im)
        im_txt = "i" if im_base == "1" else (
            "-i" if im_base == "-1" else f"{im_base}*i")
        if re_txt is None:
            return im_txt if not im_txt.startswith("(") else f"({im_txt})"
        return "(" + _signed_join([re_txt, im_txt]) + ")"
    # float coefficients always print with a decimal marker so that the
    # round trip preserves float-ness
    z = complex(c)
    if z.imag == 0:
        return repr(z.real)
    re_txt = repr(z.real) if z.real else None
    im_txt = f"{repr(z.imag)}*i" if z.imag >= 0 else f"-{repr(-z.imag)}*i"
    if re_txt is None:
        return f"({im_txt})" if im_txt.startswith("-") else im_txt
    return "(" + _signed_join([re_txt, im_txt]) + ")"


def _gamma_text(g: GammaFactor) -> str:
    if g.unit is not None or g.correction:
        raise GrammarError(
            "gamma units and corrections are not in the text grammar; "
            "use the JSON serialization")
    parts = [f"rho={g.rho}", f"sigma={g.sigma}", f"orient={g.orientation}",
             f"a={g.lower.to_text()}"]
    parts.append("b=inf" if g.upper is None else f"b={g.upper.to_text()}")
    return "gamma(" + ", ".join(parts) + ")"


def term_text(t: Term) -> str:
    if t.tails:
        raise GrammarError(
            "tail remainders are not in the text grammar; use JSON")
    factors = []
    ct = _coeff_text(t.coeff)
    if ct is not None:
        factors.append(ct)
    if t.r != 0:
        factors.append("y" if t.r == 1 else f"y^({t.r})")
    if t.s:
        factors.append("log(y)" if t.s == 1 else f"log(y)^({t.s})")
    if not t.phase.is_zero():
        factors.append(f"exp(i*({_phase_text(t.phase)}))")
    for g in t.gammas:
        factors.append(_gamma_text(g))
    return "*".join(factors) if factors else "1"


def to_text(s: PreparedSum) -> str:
    """Canonical text for a prepared sum; parse(to_text(s)) == normalize(s)."""
    if not s.terms:
        return "0"
    return _signed_join([term_text(t) for t in s.terms])
