"""Second-order linear operators, Bose invariants and named equation families.

A ``LinearODE2`` is the operator a(z) d^2 + b(z) d + c(z) with exact rational
coefficients.  Gauging away the first-order term produces the canonical form
d^2 + I with the Bose invariant

    I = (4ac - 2ab' + 2ba' - b^2) / (4a^2),

which is shared by every operator of the form f * A * g; this is the exact
equivalence the reduction certificates are built on.

Named constructors cover the hypergeometric equation, the general Riemann
operator with three regular singular points, the generalized confluent /
2F0 / 0F1 family, and the generalized harmonic oscillator together with its
Hermite and Airy reductions.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .exactalg import (
    GaussianRational,
    Polynomial,
    RationalFunction,
    RF_ONE,
    RF_Z,
    parse_rational,
    rf,
    scalar,
)

INFINITY = "inf"  # marker for the point at infinity in Riemann data


@dataclass(frozen=True)
class LinearODE2:
    """Operator a(z) d^2/dz^2 + b(z) d/dz + c(z)."""

    a: RationalFunction
    b: RationalFunction
    c: RationalFunction

    def __post_init__(self):
        if self.a.is_zero:
            raise ValueError("leading coefficient must be nonzero")

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c)}

    @staticmethod
    def from_json(doc: dict) -> "LinearODE2":
        return LinearODE2(
            parse_rational(doc["a"]),
            parse_rational(doc["b"]),
            parse_rational(doc["c"]),
        )


def bose_invariant(ode: LinearODE2) -> RationalFunction:
    """(4ac - 2ab' + 2ba' - b^2) / (4a^2), exactly normalized."""
    a, b, c = ode.a, ode.b, ode.c
    ap, bp = a.derivative(), b.derivative()
    return (4 * a * c - 2 * a * bp + 2 * b * ap - b * b) / (4 * a * a)


def gauge_equivalent(ode1: LinearODE2, ode2: LinearODE2) -> bool:
    """True iff the two operators have exactly equal Bose invariants."""
    return bose_invariant(ode1) == bose_invariant(ode2)


def apply_operator(
    ode: LinearODE2, f_value: complex, f_prime: complex, f_second: complex, z: complex
) -> complex:
    """a(z) f'' + b(z) f' + c(z) f for supplied jet values."""
    return ode.a(z) * f_second + ode.b(z) * f_prime + ode.c(z) * f_value


def conjugate_ode(
    ode: LinearODE2, left: RationalFunction, right: RationalFunction
) -> LinearODE2:
    """The operator left * A * right (multiplication operators), expanded.

    (left A right) phi = left * A(right * phi); any such sandwich has the
    same Bose invariant as A.
    """
    a, b, c = ode.a, ode.b, ode.c
    g1 = right.derivative()
    g2 = g1.derivative()
    return LinearODE2(
        left * a * right,
        left * (2 * a * g1 + b * right),
        left * (a * g2 + b * g1 + c * right),
    )


# ---------------------------------------------------------------------------
# Gauge factors and the canonical form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaugeFactor:
    """Structured multiplier const * exp(E(z)) * prod_i (z - r_i)^{e_i}.

    ``exp_part`` is a rational function (a polynomial for every named family
    here; inverse powers appear only for irregular gauges).  Kept structural
    so certificates can be serialized and differentiated exactly.
    """

    exp_part: RationalFunction
    power_factors: tuple  # ((root: GaussianRational, exponent: GaussianRational), ...)
    const: GaussianRational = scalar(1)

    def log_derivative(self) -> RationalFunction:
        """h'/h as an exact rational function."""
        out = self.exp_part.derivative()
        for root, expo in self.power_factors:
            out = out + rf(scalar(expo)) / (RF_Z - rf(scalar(root)))
        return out

    def __call__(self, z: complex) -> complex:
        out = self.const.to_complex() * cmath.exp(self.exp_part(z))
        for root, expo in self.power_factors:
            out *= (complex(z) - root.to_complex()) ** expo.to_complex()
        return out

    def with_derivatives(self, z: complex):
        """(h, h', h'') at z via the logarithmic derivative."""
        h = self(z)
        lder = self.log_derivative()
        lval = lder(z)
        lp = lder.derivative()(z)
        return h, h * lval, h * (lval * lval + lp)

    def inverse(self) -> "GaugeFactor":
        return GaugeFactor(
            -self.exp_part,
            tuple((root, -expo) for root, expo in self.power_factors),
            scalar(1) / self.const,
        )

    def to_json(self) -> dict:
        return {
            "power_factors": [[str(r), str(e)] for r, e in self.power_factors],
            "exp_poly": str(self.exp_part),
            "const": str(self.const),
        }

    @staticmethod
    def from_json(doc: dict) -> "GaugeFactor":
        pf = tuple(
            (
                parse_rational(r).constant_value(),
                parse_rational(e).constant_value(),
            )
            for r, e in doc["power_factors"]
        )
        return GaugeFactor(
            parse_rational(doc["exp_poly"]),
            pf,
            parse_rational(doc["const"]).constant_value(),
        )


TRIVIAL_GAUGE = GaugeFactor(RationalFunction.const(0), ())


def _exact_roots(q: Polynomial):
    """Roots with multiplicity of a monic polynomial, over Q(i).

    Linear and quadratic factors are solved exactly; higher degrees go
    through numpy roots followed by exact verification of rationalized
    candidates.  Raises if the polynomial does not split over Q(i).
    """
    roots = []
    rem = q.monic()
    # peel off roots found exactly, tracking multiplicity by repeated division
    while rem.degree and rem.degree > 0:
        root = _one_exact_root(rem)
        if root is None:
            raise ValueError(f"denominator does not split over Q(i): {q}")
        lin = Polynomial.of([-root, 1])
        mult = 0
        while True:
            quo, r = rem.divmod(lin)
            if not r.is_zero:
                break
            rem = quo
            mult += 1
        roots.append((root, mult))
    return roots


def _one_exact_root(p: Polynomial) -> Optional[GaussianRational]:
    if p.degree == 1:
        return -p.coeff(0) / p.coeff(1)
    if p.degree == 2:
        a, b, c = p.coeff(2), p.coeff(1), p.coeff(0)
        disc = b * b - scalar(4) * a * c
        s = disc.sqrt()
        if s is not None:
            return (-b + s) / (scalar(2) * a)
    # numeric candidates, verified exactly after rationalization
    coeffs = [c.to_complex() for c in reversed(p.coeffs)]
    for cand in np.roots(coeffs):
        approx = GaussianRational(
            Fraction(cand.real).limit_denominator(10**9),
            Fraction(cand.imag).limit_denominator(10**9),
        )
        if p.eval_exact(approx).is_zero:
            return approx
    return None


def partial_fractions(f: RationalFunction):
    """(polynomial part, {root: [c_1, c_2, ...]}) with f = P + sum c_k/(z-r)^k."""
    poly_part, rem = f.num.divmod(f.den)
    terms = {}
    if rem.is_zero:
        return poly_part, terms
    den = f.den
    for root, mult in _exact_roots(den):
        lin = Polynomial.of([-root, 1])
        # successive extraction from the highest order down; coefficients at
        # distinct roots are independent, so each chain restarts from f.
        num = rem
        q_red = den
        cs = [scalar(0)] * mult
        for k in range(mult, 0, -1):
            qq = q_red.divmod(lin**k)[0]
            c = num.eval_exact(root) / qq.eval_exact(root)
            cs[k - 1] = c
            # subtract c/(z-root)^k from num/q_red and deflate one power
            num = num - qq.scale(c)
            num, r0 = num.divmod(lin)
            assert r0.is_zero
            q_red = q_red.divmod(lin)[0]
        terms[root] = cs
    return poly_part, terms


def canonical_form(ode: LinearODE2):
    """Bose invariant plus the structural gauge h = exp(int b/2a).

    Returns (invariant, gauge) with h * A * h^{-1} = a * (d^2 + I): simple
    poles of b/2a become power factors, the polynomial part and higher
    poles integrate into the rational exponent part.
    """
    w = ode.b / (2 * ode.a)
    poly_part, pole_terms = partial_fractions(w)
    # antiderivative of the polynomial part
    anti = Polynomial.of(
        [scalar(0)]
        + [poly_part.coeff(k) / scalar(k + 1) for k in range(len(poly_part.coeffs))]
    )
    exp_part = rf(anti)
    powers = []
    for root, cs in pole_terms.items():
        if not cs[0].is_zero:
            powers.append((root, cs[0]))
        for k in range(2, len(cs) + 1):
            ck = cs[k - 1]
            if ck.is_zero:
                continue
            exp_part = exp_part - rf(scalar(ck) / scalar(k - 1)) / (
                (RF_Z - rf(scalar(root))) ** (k - 1)
            )
    gauge = GaugeFactor(exp_part, tuple(powers))
    return bose_invariant(ode), gauge


# ---------------------------------------------------------------------------
# Hypergeometric equation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameters (a, b, c); the symmetric triple is alpha=c-1, beta=a+b-c,
    mu=a-b (differences of the Riemann indices at 0, 1, infinity)."""

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational

    @staticmethod
    def of(a, b, c) -> "HypergeometricParams":
        return HypergeometricParams(scalar(a), scalar(b), scalar(c))

    @staticmethod
    def from_symmetric(alpha, beta, mu) -> "HypergeometricParams":
        alpha, beta, mu = scalar(alpha), scalar(beta), scalar(mu)
        half = scalar(Fraction(1, 2))
        return HypergeometricParams(
            (scalar(1) + alpha + beta - mu) * half,
            (scalar(1) + alpha + beta + mu) * half,
            scalar(1) + alpha,
        )

    @property
    def alpha(self):
        return self.c - scalar(1)

    @property
    def beta(self):
        return self.a + self.b - self.c

    @property
    def mu(self):
        return self.a - self.b


def make_hypergeometric(p: HypergeometricParams) -> LinearODE2:
    """z(1-z) d^2 + (c - (a+b+1) z) d - ab."""
    z = RF_Z
    return LinearODE2(
        z * (RF_ONE - z),
        rf(scalar(p.c)) - rf(scalar(p.a + p.b + scalar(1))) * z,
        rf(-scalar(p.a * p.b)),
    )


def hypergeometric_invariant_symmetric(alpha, beta, mu) -> RationalFunction:
    """((1-a^2)(1-z) + (1-b^2) z + (m^2-1) z(1-z)) / (4 z^2 (1-z)^2)."""
    alpha, beta, mu = scalar(alpha), scalar(beta), scalar(mu)
    z = RF_Z
    one = RF_ONE
    num = (
        rf(scalar(1) - alpha * alpha) * (one - z)
        + rf(scalar(1) - beta * beta) * z
        + rf(mu * mu - scalar(1)) * z * (one - z)
    )
    return num / (4 * z * z * (one - z) * (one - z))


# ---------------------------------------------------------------------------
# Riemann equation (three regular singular points)
# ---------------------------------------------------------------------------

PointOrInf = Union[GaussianRational, str]


@dataclass(frozen=True)
class RiemannData:
    """Three singular points with index pairs (rho_i, rho~_i); the six
    indices must sum to exactly 1."""

    points: tuple  # three entries, GaussianRational or INFINITY
    indices: tuple  # three pairs of GaussianRational

    @staticmethod
    def of(points, indices) -> "RiemannData":
        pts = tuple(
            INFINITY if p == INFINITY else scalar(p) for p in points
        )
        idx = tuple((scalar(r), scalar(rt)) for r, rt in indices)
        return RiemannData(pts, idx)

    def __post_init__(self):
        total = scalar(0)
        for r, rt in self.indices:
            total = total + r + rt
        if total != scalar(1):
            raise ValueError("Riemann indices must sum to 1")
        finite = [p for p in self.points if p != INFINITY]
        if len(set(finite)) != len(finite) or (
            sum(1 for p in self.points if p == INFINITY) > 1
        ):
            raise ValueError("singular points must be pairwise distinct")

    def index_sum(self) -> GaussianRational:
        total = scalar(0)
        for r, rt in self.indices:
            total = total + r + rt
        return total

    def to_json(self) -> dict:
        return {
            "points": [p if p == INFINITY else str(p) for p in self.points],
            "indices": [[str(r), str(rt)] for r, rt in self.indices],
        }

    @staticmethod
    def from_json(doc: dict) -> "RiemannData":
        pts = [
            p if p == INFINITY else parse_rational(p).constant_value()
            for p in doc["points"]
        ]
        idx = [
            (
                parse_rational(r).constant_value(),
                parse_rational(rt).constant_value(),
            )
            for r, rt in doc["indices"]
        ]
        return RiemannData(tuple(pts), tuple(idx))


def _rotate_infinity_last(d: RiemannData) -> RiemannData:
    order = list(range(3))
    for i, p in enumerate(d.points):
        if p == INFINITY:
            order = [j for j in range(3) if j != i] + [i]
            break
    return RiemannData(
        tuple(d.points[j] for j in order), tuple(d.indices[j] for j in order)
    )


def make_riemann(d: RiemannData) -> LinearODE2:
    """The normalized (leading coefficient 1) operator with the given
    regular singular points and indices."""
    d = _rotate_infinity_last(d)
    z = RF_Z
    one = scalar(1)
    (p1, p2, p3) = d.points
    (r1, t1), (r2, t2), (r3, t3) = d.indices
    if p3 == INFINITY:
        z1, z2 = rf(scalar(p1)), rf(scalar(p2))
        b = -(
            rf(scalar(r1 + t1 - one)) / (z - z1)
            + rf(scalar(r2 + t2 - one)) / (z - z2)
        )
        c = (
            rf(scalar(r1 * t1 * (p1 - p2))) / ((z - z1) ** 2 * (z - z2))
            + rf(scalar(r2 * t2 * (p2 - p1))) / ((z - z2) ** 2 * (z - z1))
            + rf(scalar(r3 * t3)) / ((z - z1) * (z - z2))
        )
        return LinearODE2(RF_ONE, b, c)
    z1, z2, z3 = rf(scalar(p1)), rf(scalar(p2)), rf(scalar(p3))
    b = -(
        rf(scalar(r1 + t1 - one)) / (z - z1)
        + rf(scalar(r2 + t2 - one)) / (z - z2)
        + rf(scalar(r3 + t3 - one)) / (z - z3)
    )
    c = (
        rf(scalar(r1 * t1 * (p1 - p2) * (p1 - p3)))
        / ((z - z1) ** 2 * (z - z2) * (z - z3))
        + rf(scalar(r2 * t2 * (p2 - p3) * (p2 - p1)))
        / ((z - z2) ** 2 * (z - z3) * (z - z1))
        + rf(scalar(r3 * t3 * (p3 - p1) * (p3 - p2)))
        / ((z - z3) ** 2 * (z - z1) * (z - z2))
    )
    return LinearODE2(RF_ONE, b, c)


@dataclass(frozen=True)
class Moebius:
    """w = (a z + b)/(c z + d) with exact coefficients, normalized ad-bc=1."""

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational
    d: GaussianRational

    @staticmethod
    def of(a, b, c, d) -> "Moebius":
        m = Moebius(scalar(a), scalar(b), scalar(c), scalar(d))
        if m.a * m.d - m.b * m.c != scalar(1):
            raise ValueError("Moebius coefficients must satisfy ad - bc = 1")
        return m

    def apply(self, p: PointOrInf) -> PointOrInf:
        if p == INFINITY:
            if self.c.is_zero:
                return INFINITY
            return self.a / self.c
        num = self.a * p + self.b
        den = self.c * p + self.d
        if den.is_zero:
            return INFINITY
        return num / den

    def as_rational(self) -> RationalFunction:
        z = RF_Z
        return (rf(scalar(self.a)) * z + rf(scalar(self.b))) / (
            rf(scalar(self.c)) * z + rf(scalar(self.d))
        )


def riemann_mobius(d: RiemannData, h: Moebius) -> RiemannData:
    """Transport the singular points through a Moebius map; indices travel
    unchanged with their points."""
    return RiemannData(tuple(h.apply(p) for p in d.points), d.indices)


def riemann_conjugate(d: RiemannData, lam) -> RiemannData:
    """Index shift induced by conjugation with (z-z1)^(-lam) (z-z2)^lam."""
    lam = scalar(lam)
    if d.points[0] == INFINITY or d.points[1] == INFINITY:
        raise ValueError("conjugation requires the first two points finite")
    (r1, t1), (r2, t2), (r3, t3) = d.indices
    return RiemannData(
        d.points,
        ((r1 - lam, t1 - lam), (r2 + lam, t2 + lam), (r3, t3)),
    )


def hypergeometric_riemann_data(p: HypergeometricParams) -> RiemannData:
    """P-data of the hypergeometric equation: indices 0,1-c | 0,c-a-b | a,b."""
    zero = scalar(0)
    one = scalar(1)
    return RiemannData(
        (zero, one, INFINITY),
        (
            (zero, one - p.c),
            (zero, p.c - p.a - p.b),
            (p.a, p.b),
        ),
    )


# ---------------------------------------------------------------------------
# Confluent family: generalized confluent, 2F0, 0F1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfluentParams:
    """Generalized confluent equation z d^2 + (c - gamma z) d - a.

    Symmetric parameters: alpha = c - 1, nu = c*gamma - 2a.
    """

    a: GaussianRational
    c: GaussianRational
    gamma: GaussianRational

    @staticmethod
    def of(a, c, gamma) -> "ConfluentParams":
        return ConfluentParams(scalar(a), scalar(c), scalar(gamma))

    @staticmethod
    def from_symmetric(alpha, nu, gamma) -> "ConfluentParams":
        alpha, nu, gamma = scalar(alpha), scalar(nu), scalar(gamma)
        half = scalar(Fraction(1, 2))
        return ConfluentParams(
            (gamma + alpha * gamma - nu) * half, scalar(1) + alpha, gamma
        )

    @property
    def alpha(self):
        return self.c - scalar(1)

    @property
    def nu(self):
        return self.c * self.gamma - scalar(2) * self.a


@dataclass(frozen=True)
class TwoF0Params:
    a: GaussianRational
    b: GaussianRational

    @staticmethod
    def of(a, b) -> "TwoF0Params":
        return TwoF0Params(scalar(a), scalar(b))


@dataclass(frozen=True)
class ZeroF1Params:
    c: GaussianRational

    @staticmethod
    def of(c) -> "ZeroF1Params":
        return ZeroF1Params(scalar(c))


def make_confluent_family(p) -> LinearODE2:
    """Constructor for the confluent-type operators.

    * ConfluentParams -> z d^2 + (c - gamma z) d - a  (gamma=1: confluent)
    * TwoF0Params     -> z^2 d^2 + (-1 + (1+a+b) z) d + ab
    * ZeroF1Params    -> z d^2 + c d - 1
    """
    z = RF_Z
    if isinstance(p, ConfluentParams):
        return LinearODE2(
            z,
            rf(scalar(p.c)) - rf(scalar(p.gamma)) * z,
            rf(-scalar(p.a)),
        )
    if isinstance(p, TwoF0Params):
        return LinearODE2(
            z * z,
            rf(-1) + rf(scalar(scalar(1) + p.a + p.b)) * z,
            rf(scalar(p.a * p.b)),
        )
    if isinstance(p, ZeroF1Params):
        return LinearODE2(z, rf(scalar(p.c)), rf(-1))
    raise TypeError(f"unsupported parameter type {type(p)!r}")


def confluent_invariant_symmetric(alpha, nu, gamma) -> RationalFunction:
    """-gamma^2/4 + nu/(2z) + (1-alpha^2)/(4 z^2)."""
    alpha, nu, gamma = scalar(alpha), scalar(nu), scalar(gamma)
    z = RF_Z
    return (
        rf(-scalar(gamma * gamma)) / 4
        + rf(scalar(nu)) / (2 * z)
        + rf(scalar(1) - alpha * alpha) / (4 * z * z)
    )


# ---------------------------------------------------------------------------
# Generalized harmonic oscillator and its Hermite / Airy reductions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OscillatorParams:
    """Canonical-form operator -d^2 + theta^2 z^2 + rho z + lambda."""

    theta_sq: GaussianRational
    rho: GaussianRational
    lam: GaussianRational

    @staticmethod
    def of(theta_sq, rho, lam) -> "OscillatorParams":
        return OscillatorParams(scalar(theta_sq), scalar(rho), scalar(lam))


def make_oscillator(p: OscillatorParams) -> LinearODE2:
    z = RF_Z
    return LinearODE2(
        rf(-1),
        RationalFunction.const(0),
        rf(scalar(p.theta_sq)) * z * z + rf(scalar(p.rho)) * z + rf(scalar(p.lam)),
    )


@dataclass(frozen=True)
class HermiteReduction:
    """Data of the substitution y = sqrt(theta) (z + rho / (2 theta^2)).

    Conjugating the Hermite operator d_y^2 - 2y d_y - 2a by exp(y^2/2) and
    scaling by theta reproduces minus the oscillator operator whose constant
    term is lambda = rho^2/(4 theta^2) + theta (2a - 1).  (The naive constant
    rho^2/(2 theta^2) + 2a - 1 fails the theta=1, rho=0 oscillator check;
    the spectrum suite pins the corrected value.)
    """

    a: complex
    shift: complex  # rho / (2 theta^2)
    scale: complex  # sqrt(theta)

    def y_of_z(self, z: complex) -> complex:
        return self.scale * (z + self.shift)


def hermite_reduction(p: OscillatorParams) -> HermiteReduction:
    theta_sq = p.theta_sq.to_complex()
    rho = p.rho.to_complex()
    lam = p.lam.to_complex()
    if theta_sq == 0:
        raise ValueError("Hermite reduction requires theta != 0")
    theta = cmath.sqrt(theta_sq)
    a = ((lam - rho * rho / (4 * theta_sq)) / theta + 1) / 2
    return HermiteReduction(a=a, shift=rho / (2 * theta_sq), scale=cmath.sqrt(theta))


def oscillator_lambda_for_hermite(theta_sq, rho, a):
    """lambda making the oscillator equal the conjugated Hermite operator."""
    theta = cmath.sqrt(complex(theta_sq))
    return complex(rho) ** 2 / (4 * complex(theta_sq)) + theta * (2 * complex(a) - 1)


@dataclass(frozen=True)
class AiryReduction:
    """theta = 0, rho != 0: with y = rho^(1/3) z + rho^(-2/3) lambda and
    w = y^3 / 9 the oscillator solutions are carried by the c=2/3 member of
    the 0F1 family."""

    y_scale: complex  # rho^(1/3)
    y_shift: complex  # rho^(-2/3) lambda
    zero_f1_c: Fraction = Fraction(2, 3)

    def y_of_z(self, z: complex) -> complex:
        return self.y_scale * z + self.y_shift

    def w_of_y(self, y: complex) -> complex:
        return y**3 / 9


def airy_reduction(p: OscillatorParams) -> AiryReduction:
    if not p.theta_sq.is_zero:
        raise ValueError("Airy reduction requires theta = 0")
    rho = p.rho.to_complex()
    if rho == 0:
        raise ValueError("Airy reduction requires rho != 0")
    lam = p.lam.to_complex()
    third = rho ** (1.0 / 3.0) if rho.imag == 0 and rho.real > 0 else rho ** (1 / 3)
    return AiryReduction(y_scale=third, y_shift=lam * third ** (-2))
