"""Exact univariate polynomial and rational-function arithmetic.

Scalars are Gaussian rationals (exact rational real and imaginary parts,
backed by ``fractions.Fraction``), so every identity check in the package can
be decided exactly instead of to floating tolerance.  Floats are admitted as
inputs and embedded exactly (every IEEE double is a dyadic rational).

A polynomial is a tuple of scalar coefficients indexed by degree, with no
trailing zeros; the zero polynomial is the empty tuple and its degree is the
``None`` sentinel.  A rational function is a reduced fraction of polynomials
with monic denominator, which makes the representation canonical: two equal
rational functions compare equal componentwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union


class PoleEvaluationError(ArithmeticError):
    """Evaluation was requested at (or too close to) a pole."""

    def __init__(self, point):
        super().__init__(f"evaluation at pole z={point}")
        self.point = point


ScalarLike = Union[int, float, complex, Fraction, "GaussianRational"]


def _sqrt_fraction(q: Fraction):
    """Exact square root of a nonnegative Fraction, or None."""
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class GaussianRational:
    """Exact scalar a + b*i with rational a, b."""

    re: Fraction
    im: Fraction

    # -- construction ------------------------------------------------------

    @staticmethod
    def of(value: ScalarLike) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return GaussianRational(Fraction(value.real), Fraction(value.imag))
        return GaussianRational(Fraction(value), Fraction(0))

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other):
        return GaussianRational.of(other) + (-self)

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero scalar")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational.of(1) / self ** (-k)
        out = GaussianRational.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = GaussianRational.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def sqrt(self):
        """Exact square root in Q(i) if one exists, else None."""
        if self.is_zero:
            return GaussianRational.of(0)
        if self.is_real:
            r = _sqrt_fraction(self.re)
            if r is not None:
                return GaussianRational(r, Fraction(0))
            r = _sqrt_fraction(-self.re)
            if r is not None:
                return GaussianRational(Fraction(0), r)
            return None
        norm = _sqrt_fraction(self.re * self.re + self.im * self.im)
        if norm is None:
            return None
        t2 = (self.re + norm) / 2
        t = _sqrt_fraction(t2)
        if t is None or not t:
            return None
        u = self.im / (2 * t)
        cand = GaussianRational(t, u)
        return cand if cand * cand == self else None

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __str__(self):
        if self.is_real:
            return str(self.re)
        im = f"{self.im}*i" if abs(self.im) != 1 else ("i" if self.im > 0 else "-i")
        if not self.re:
            return im
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imtxt = f"{mag}*i" if mag != 1 else "i"
        return f"({self.re}{sign}{imtxt})"

    __repr__ = __str__


QG_ZERO = GaussianRational(Fraction(0), Fraction(0))
QG_ONE = GaussianRational(Fraction(1), Fraction(0))
QG_I = GaussianRational(Fraction(0), Fraction(1))


def scalar(value: ScalarLike) -> GaussianRational:
    """Embed an int/float/complex/Fraction exactly into the scalar field."""
    return GaussianRational.of(value)


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial over Gaussian rationals.

    ``coeffs[k]`` is the coefficient of z^k; no trailing zeros are stored and
    the zero polynomial is the empty tuple.
    """

    coeffs: tuple

    @staticmethod
    def of(coeffs: Iterable[ScalarLike]) -> "Polynomial":
        cs = [GaussianRational.of(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        return Polynomial(tuple(cs))

    @staticmethod
    def const(value: ScalarLike) -> "Polynomial":
        return Polynomial.of([value])

    @staticmethod
    def variable() -> "Polynomial":
        return Polynomial.of([0, 1])

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> GaussianRational:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else QG_ZERO

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial.of([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial(())
        out = [QG_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial.of(out)

    def scale(self, value: ScalarLike) -> "Polynomial":
        v = GaussianRational.of(value)
        if v.is_zero:
            return Polynomial(())
        return Polynomial(tuple(c * v for c in self.coeffs))

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "Polynomial"):
        """Exact polynomial division with remainder."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = Polynomial(())
        r = self
        d = other.degree
        lc = other.leading
        while not r.is_zero and r.degree >= d:
            k = r.degree - d
            c = r.leading / lc
            mono = Polynomial.of([0] * k + [c])
            q = q + mono
            r = r - mono * other
        return q, r

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self.scale(QG_ONE / self.leading)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd by the Euclidean remainder sequence.

        Field scalars auto-reduce, so no primitive-part bookkeeping is
        needed at the degrees (<= ~10) this package manipulates.
        """
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero else a

    def derivative(self) -> "Polynomial":
        return Polynomial.of(
            [self.coeffs[k] * k for k in range(1, len(self.coeffs))]
        )

    # -- evaluation -----------------------------------------------------------

    def eval_exact(self, z: ScalarLike) -> GaussianRational:
        zz = GaussianRational.of(z)
        out = QG_ZERO
        for c in reversed(self.coeffs):
            out = out * zz + c
        return out

    def __call__(self, z: complex) -> complex:
        out = 0j
        for c in reversed(self.coeffs):
            out = out * z + c.to_complex()
        return out

    def compose_rational(self, s: "RationalFunction") -> "RationalFunction":
        """self(s(z)) as a rational function."""
        out = RationalFunction.const(0)
        for c in reversed(self.coeffs):
            out = out * s + RationalFunction.const(c)
        return out

    # -- formatting -----------------------------------------------------------

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero:
                continue
            if c.is_real and c.re < 0:
                sign, mag = "-", GaussianRational(-c.re, Fraction(0))
            else:
                sign, mag = "+", c
            if k == 0:
                body = str(mag)
            else:
                zpow = "z" if k == 1 else f"z^{k}"
                body = zpow if mag == QG_ONE else f"{mag}*{zpow}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    __repr__ = __str__


P_ZERO = Polynomial(())
P_ONE = Polynomial.const(1)
P_Z = Polynomial.variable()


def poly(*coeffs: ScalarLike) -> Polynomial:
    """Polynomial from coefficients in increasing degree order."""
    return Polynomial.of(coeffs)


class RationalFunction:
    """Reduced fraction of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=P_ONE):
        if not isinstance(num, Polynomial):
            num = Polynomial.const(num)
        if not isinstance(den, Polynomial):
            den = Polynomial.const(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            self.num, self.den = P_ZERO, P_ONE
            return
        g = num.gcd(den)
        if g.degree and g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lc = den.leading
        self.num = num.scale(QG_ONE / lc)
        self.den = den.scale(QG_ONE / lc)

    @staticmethod
    def const(value: ScalarLike) -> "RationalFunction":
        return RationalFunction(Polynomial.const(value))

    @staticmethod
    def variable() -> "RationalFunction":
        return RationalFunction(P_Z)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return (self.num.degree in (None, 0)) and self.den.degree == 0

    def constant_value(self) -> GaussianRational:
        if not self.is_constant:
            raise ValueError("not a constant rational function")
        return self.num.coeff(0)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = _as_rf(other)
        return RationalFunction(
            self.num * o.den + o.num * self.den, self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) + (-self)

    def __mul__(self, other):
        o = _as_rf(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_rf(other)
        if o.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _as_rf(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction.const(1) / self ** (-k)
        return RationalFunction(self.num**k, self.den**k)

    def __eq__(self, other):
        try:
            o = _as_rf(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self) -> "RationalFunction":
        """Exact derivative by the quotient rule."""
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """self(inner(z))."""
        n = self.num.compose_rational(inner)
        d = self.den.compose_rational(inner)
        return n / d

    # -- evaluation -----------------------------------------------------------

    def __call__(self, z: complex, pole_floor: float = 1e-300) -> complex:
        d = self.den(z)
        if abs(d) <= pole_floor:
            raise PoleEvaluationError(z)
        return self.num(z) / d

    def eval_exact(self, z: ScalarLike) -> GaussianRational:
        d = self.den.eval_exact(z)
        if d.is_zero:
            raise PoleEvaluationError(z)
        return self.num.eval_exact(z) / d

    def eval_grid(self, zs):
        """Vectorized evaluation on a numpy array (poles unguarded)."""
        import numpy as np

        nc = np.array([c.to_complex() for c in self.num.coeffs][::-1] or [0j])
        dc = np.array([c.to_complex() for c in self.den.coeffs][::-1])
        return np.polyval(nc, zs) / np.polyval(dc, zs)

    def __str__(self):
        return f"({self.num})/({self.den})"

    __repr__ = __str__


RF_ZERO = RationalFunction(P_ZERO)
RF_ONE = RationalFunction(P_ONE)
RF_Z = RationalFunction(P_Z)


def _as_rf(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value)
    return RationalFunction.const(value)


def rf(num, den=1) -> RationalFunction:
    return _as_rf(num) / _as_rf(den) if den != 1 else _as_rf(num)


# -- spec-level operation wrappers ------------------------------------------


def rf_arith(op: str, f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """Exact field arithmetic: op in {add, sub, mul, div}."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def rf_diff(f: RationalFunction) -> RationalFunction:
    return f.derivative()


def rf_eval(f: RationalFunction, z: complex, pole_floor: float = 1e-300) -> complex:
    return f(z, pole_floor=pole_floor)


# -- parsing -----------------------------------------------------------------


class _Parser:
    """Recursive-descent parser for rational-function expressions.

    Accepts integers, fractions written with '/', the variable 'z', the
    imaginary unit 'i', parentheses, '+', '-', '*', '/' and integer '^'
    powers, e.g. ``(1/4)/(z^2*(1-z))``.
    """

    def __init__(self, text: str):
        self.toks = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str):
        toks = []
        k = 0
        while k < len(text):
            ch = text[k]
            if ch.isspace():
                k += 1
            elif ch.isdigit():
                j = k
                while j < len(text) and text[j].isdigit():
                    j += 1
                toks.append(("int", int(text[k:j])))
                k = j
            elif ch in "+-*/^()":
                toks.append((ch, ch))
                k += 1
            elif ch in "zZ":
                toks.append(("z", ch))
                k += 1
            elif ch in "iI":
                toks.append(("i", ch))
                k += 1
            else:
                raise ValueError(f"unexpected character {ch!r} in expression")
        toks.append(("end", None))
        return toks

    def peek(self):
        return self.toks[self.pos][0]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r}, found {tok[0]!r}")
        self.pos += 1
        return tok

    def parse(self) -> RationalFunction:
        out = self.expr()
        self.take("end")
        return out

    def expr(self) -> RationalFunction:
        sign = 1
        while self.peek() in "+-":
            if self.take()[0] == "-":
                sign = -sign
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek() in "+-":
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> RationalFunction:
        out = self.power()
        while self.peek() in "*/":
            op = self.take()[0]
            rhs = self.power()
            out = out * rhs if op == "*" else out / rhs
        return out

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            k = self.take("int")[1]
            return base ** (sign * k)
        return base

    def atom(self) -> RationalFunction:
        kind = self.peek()
        if kind == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if kind == "-":
            self.take()
            return -self.atom()
        if kind == "int":
            return RationalFunction.const(self.take()[1])
        if kind == "z":
            self.take()
            return RF_Z
        if kind == "i":
            self.take()
            return RationalFunction.const(QG_I)
        raise ValueError(f"unexpected token {kind!r}")


def parse_rational(text: str) -> RationalFunction:
    return _Parser(text).parse()


def format_rational(f: RationalFunction) -> str:
    return str(f)
