"""Schwarzian derivatives: exact for rational maps, numeric for callables.

The Schwarzian {r,y} = (r''/r')' - (r''/r')^2/2 is the obstruction term of
the Liouville change of variables.  Three routes are provided:

* ``schwarz_rational`` -- exact, for rational maps;
* ``schwarz_numeric``  -- finite differences with Richardson extrapolation,
  for arbitrary smooth callables;
* ``schwarz_power_ansatz`` / ``schwarz_from_speed`` -- closed forms for maps
  defined autonomously through their speed, dz/dr = k z^p (1-z)^q or more
  generally (dz/dr)^2 = G(z) with rational G.  The latter is what the
  catalog certificates use: it is exact and branch-independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (
    Polynomial,
    RationalFunction,
    GaussianRational,
    RF_Z,
    RF_ONE,
    rf,
    scalar,
)


class CriticalPointError(ArithmeticError):
    """The map's derivative (nearly) vanishes where a Schwarzian was asked."""


def schwarz_rational(r: RationalFunction) -> RationalFunction:
    """Exact Schwarzian of a rational map; Moebius maps give exactly 0."""
    d1 = r.derivative()
    if d1.is_zero:
        raise CriticalPointError("Schwarzian of a constant map")
    w = d1.derivative() / d1
    return w.derivative() - w * w / 2


def schwarz_numeric(fmap, y: float, h: float = 1e-3) -> float:
    """Finite-difference Schwarzian of ``fmap`` at ``y``.

    Fourth-order central stencils for f', f'', f''' plus one Richardson step
    on (h, h/2).  Raises if |f'| < 1e-12 (near-critical point).
    """

    def estimate(step):
        f = [fmap(y + k * step) for k in range(-3, 4)]
        d1 = (-f[5] + 8 * f[4] - 8 * f[2] + f[1]) / (12 * step)
        d2 = (-f[5] + 16 * f[4] - 30 * f[3] + 16 * f[2] - f[1]) / (12 * step**2)
        d3 = (f[6] - 8 * f[5] + 13 * f[4] - 13 * f[2] + 8 * f[1] - f[0]) / (
            8 * step**3
        )
        if abs(d1) < 1e-12:
            raise CriticalPointError(f"|f'({y})| < 1e-12")
        return d3 / d1 - 1.5 * (d2 / d1) ** 2

    s_h = estimate(h)
    s_h2 = estimate(h / 2)
    return (16 * s_h2 - s_h) / 15


@dataclass(frozen=True)
class PowerAnsatz:
    """Autonomous speed dz/dr = k * z^p * (1-z)^q with rational exponents."""

    p: Fraction
    q: Fraction
    k: Fraction = Fraction(1)

    def speed(self, z: complex) -> complex:
        return float(self.k) * z ** float(self.p) * (1 - z) ** float(self.q)


@dataclass(frozen=True)
class PowerForm:
    """const * z^e0 * (1-z)^e1 * R(z) with rational exponents e0, e1.

    Used to carry the fractional-power prefactor of the power-ansatz
    Schwarzian without leaving exact arithmetic for the rational part.
    """

    const: GaussianRational
    e0: Fraction
    e1: Fraction
    rational: RationalFunction

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        out = self.const.to_complex() * self.rational(z)
        if self.e0:
            out *= z ** float(self.e0)
        if self.e1:
            out *= (1 - z) ** float(self.e1)
        return out

    def as_rational(self) -> RationalFunction:
        """Collapse to a plain rational function (integer exponents only)."""
        if self.e0.denominator != 1 or self.e1.denominator != 1:
            raise ValueError("fractional exponents cannot be collapsed")
        z = RF_Z
        out = RationalFunction.const(self.const) * self.rational
        out = out * z ** int(self.e0) if self.e0 >= 0 else out / z ** int(-self.e0)
        one_minus = RF_ONE - z
        e1 = int(self.e1)
        out = out * one_minus**e1 if e1 >= 0 else out / one_minus ** (-e1)
        return out


def schwarz_power_ansatz(pa: PowerAnsatz) -> PowerForm:
    """Closed-form {z,r} for dz/dr = k z^p (1-z)^q.

    {z,r} = (k^2/2) z^(2p-2) (1-z)^(2q-2)
            [ (p^2-2p)(1-z)^2 + (q^2-2q) z^2 - 2pq z(1-z) ],
    the k^2 factor coming from the quadratic scaling of the bracket under
    speed rescaling.
    """
    p, q = pa.p, pa.q
    z = RF_Z
    one_minus = RF_ONE - z
    bracket = (
        rf(scalar(p * p - 2 * p)) * one_minus**2
        + rf(scalar(q * q - 2 * q)) * z**2
        - rf(scalar(2 * p * q)) * z * one_minus
    )
    return PowerForm(
        const=scalar(Fraction(pa.k * pa.k, 2)),
        e0=2 * p - 2,
        e1=2 * q - 2,
        rational=bracket,
    )


def schwarz_from_speed(speed_squared: RationalFunction) -> RationalFunction:
    """Exact {z,r} for a map defined by (dz/dr)^2 = G(z(r)).

    With G = (z')^2 one has z'' = G'/2 and z''' = G'' z'/2, hence
    {z,r} = G''/2 - (3/8) G'^2 / G, independent of the branch sign of z'.
    """
    g1 = speed_squared.derivative()
    g2 = g1.derivative()
    return g2 / 2 - rf(3, 8) * g1 * g1 / speed_squared
