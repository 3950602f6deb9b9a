"""Liouville transformations and the generic ansatz engine.

Transforming the canonical-form equation d^2 + I(z) through a change of
variables z = z(r) yields d^2 + J(r) with

    J(r) = (dz/dr)^2 I(z(r)) + {z,r}/2.

Given a parametric invariant split as I = sum_i b_i * T_i(z) + E * T_n(z),
demanding that the transformed invariant equal E - V(r) forces
(dz/dr)^2 = 1/T_n(z) and determines the potential

    V(r) = -[ (dz/dr)^2 * sum_i b_i T_i(z(r)) + {z,r}/2 ].

``integrate_cov`` manufactures the change of variables numerically from the
energy term alone (r(z) = int sqrt(T_n), inverted by bracketing), which is
how non-closed-form ansatzes are explored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .exactalg import RationalFunction, rf
from .schwarz import schwarz_from_speed, schwarz_numeric


class CovMismatchError(ValueError):
    """Change of variables inconsistent with the requested invariant basis."""

    def __init__(self, message, worst_point=None):
        super().__init__(message)
        self.worst_point = worst_point


@dataclass(frozen=True)
class ChangeOfVariables:
    """Invertible monotone map r <-> z with its derivative.

    ``speed_squared`` is G(z) = (dz/dr)^2 as an exact rational function when
    the map is autonomous in that sense (all closed-form catalog maps are);
    it provides the exact Schwarzian route.
    """

    label: str
    forward: Callable[[float], float]  # r -> z
    inverse: Callable[[float], float]  # z -> r
    dz_dr: Callable[[float], float]
    r_domain: tuple
    z_codomain: tuple
    speed_squared: Optional[RationalFunction] = None
    branch: Optional[str] = None

    def validate(self, samples: int = 100, tol: float = 1e-10) -> None:
        """Round-trip identity on codomain samples plus monotonicity."""
        zlo, zhi = self.z_codomain
        pad = 1e-3 * (zhi - zlo)
        zs = np.linspace(zlo + pad, zhi - pad, samples)
        worst = 0.0
        last_sign = None
        for z in zs:
            r = self.inverse(z)
            worst = max(worst, abs(self.forward(r) - z) / max(1.0, abs(z)))
            s = math.copysign(1.0, self.dz_dr(r))
            if last_sign is not None and s != last_sign:
                raise CovMismatchError(f"dz/dr changes sign near z={z}")
            last_sign = s
        if worst > tol:
            raise CovMismatchError(f"round-trip error {worst:.3e} exceeds {tol}")

    def schwarzian(self, r: float) -> float:
        """{z,r} at r: exact through G when available, else finite differences."""
        if self.speed_squared is not None:
            s = schwarz_from_speed(self.speed_squared)
            return complex(s(complex(self.forward(r)))).real
        scale = abs(self.r_domain[1] - self.r_domain[0])
        if not math.isfinite(scale) or scale <= 0:
            scale = 1.0
        return schwarz_numeric(self.forward, r, h=1e-3 * min(scale, 1.0))

    def table(self, n: int = 64):
        """Sampled (z, r, dz/dr) rows for audit export."""
        zlo, zhi = self.z_codomain
        pad = 1e-6 * (zhi - zlo)
        rows = []
        for z in np.linspace(zlo + pad, zhi - pad, n):
            r = self.inverse(z)
            rows.append((z, r, self.dz_dr(r)))
        return rows


def identity_cov(lo=-math.inf, hi=math.inf) -> ChangeOfVariables:
    return ChangeOfVariables(
        label="identity",
        forward=lambda r: r,
        inverse=lambda z: z,
        dz_dr=lambda r: 1.0,
        r_domain=(lo, hi),
        z_codomain=(lo, hi),
        speed_squared=rf(1),
    )


def cov_table_csv(cov: ChangeOfVariables, n: int = 64) -> str:
    lines = ["z,r,dzdr"]
    for z, r, d in cov.table(n):
        lines.append(f"{z:.12e},{r:.12e},{d:.12e}")
    return "\n".join(lines) + "\n"


def liouville_transform(
    invariant: Callable[[complex], complex], cov: ChangeOfVariables
) -> Callable[[float], float]:
    """J(r) = (dz/dr)^2 I(z(r)) + {z,r}/2 for a pointwise invariant I."""

    def J(r: float) -> complex:
        z = cov.forward(r)
        d = cov.dz_dr(r)
        return d * d * invariant(z) + 0.5 * cov.schwarzian(r)

    return J


@dataclass(frozen=True)
class InvariantBasis:
    """Invariant split I = sum_i coeffs[i] * terms[i] + E * energy_term."""

    terms: tuple
    coeffs: tuple
    energy_term: RationalFunction

    def __post_init__(self):
        if self.energy_term.is_zero:
            raise ValueError("energy term must be nonzero")
        if len(self.terms) != len(self.coeffs):
            raise ValueError("terms and coefficients must pair up")


def natanzon_potential(
    basis: InvariantBasis,
    cov: ChangeOfVariables,
    check_samples: int = 20,
    check_tol: float = 1e-8,
) -> Callable[[float], float]:
    """Potential generated by an invariant basis through a change of variables.

    Requires (dz/dr)^2 * T_n(z(r)) = 1 on the domain (checked on samples);
    returns V(r) = -[(dz/dr)^2 * sum_i b_i T_i(z(r)) + {z,r}/2], so that the
    transformed target invariant equals E - V(r).
    """
    rlo, rhi = cov.r_domain
    lo = rlo if math.isfinite(rlo) else -10.0
    hi = rhi if math.isfinite(rhi) else 10.0
    span = hi - lo
    rs = np.linspace(lo + 0.05 * span, hi - 0.05 * span, check_samples)
    worst = (0.0, None)
    for r in rs:
        z = cov.forward(r)
        d = cov.dz_dr(r)
        err = abs(d * d * complex(basis.energy_term(complex(z))) - 1.0)
        if err > worst[0]:
            worst = (err, r)
    if worst[0] > check_tol:
        raise CovMismatchError(
            f"(dz/dr)^2 != 1/T_n: worst error {worst[0]:.3e} at r={worst[1]}",
            worst_point=worst[1],
        )

    def V(r: float) -> float:
        z = complex(cov.forward(r))
        d = cov.dz_dr(r)
        acc = 0j
        for b, term in zip(basis.coeffs, basis.terms):
            acc += complex(b) * term(z)
        return -(d * d * acc + 0.5 * cov.schwarzian(r)).real

    return V


def _real_positivity_window(term: RationalFunction, z0: float):
    """Largest interval around z0 on which the rational term stays positive,
    bounded by its nearest real roots/poles."""
    lo, hi = -math.inf, math.inf
    crits = []
    for p in (term.num, term.den):
        if p.degree and p.degree > 0:
            cs = [c.to_complex() for c in reversed(p.coeffs)]
            for root in np.roots(cs):
                if abs(root.imag) < 1e-12:
                    crits.append(root.real)
    for c in crits:
        if c < z0:
            lo = max(lo, c)
        elif c > z0:
            hi = min(hi, c)
    return lo, hi


def integrate_cov(
    energy_term: RationalFunction,
    z0: float,
    direction: int = 1,
    z_window: Optional[tuple] = None,
    r0: float = 0.0,
    n_table: int = 512,
) -> ChangeOfVariables:
    """Numeric change of variables from (dr/dz)^2 = T_n(z).

    r(z) = r0 + direction * int_{z0}^{z} sqrt(T_n); the inverse is obtained
    by monotone bracketing on a dense table followed by root polishing, and
    dz/dr = 1 / sqrt(T_n(z(r))).
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +-1")
    tval = complex(energy_term(complex(z0)))
    if abs(tval.imag) > 1e-12 or tval.real <= 0:
        raise CovMismatchError(f"energy term not positive at z0={z0}")

    if z_window is None:
        lo, hi = _real_positivity_window(energy_term, z0)
        # stay clear of endpoint roots/poles; cap infinite sides
        if not math.isfinite(lo):
            lo = z0 - 8.0
        else:
            lo = lo + 1e-9 * max(1.0, abs(lo))
        if not math.isfinite(hi):
            hi = z0 + 8.0
        else:
            hi = hi - 1e-9 * max(1.0, abs(hi))
        z_window = (lo, hi)
    zlo, zhi = z_window

    def speed(z: float) -> float:
        v = complex(energy_term(complex(z)))
        if v.real <= 0:
            raise CovMismatchError(f"energy term <= 0 inside window at z={z}")
        return math.sqrt(v.real)

    # cumulative integral on a clustered table (denser near the endpoints
    # where sqrt singularities of T_n live)
    t = np.linspace(-1.0, 1.0, n_table)
    cluster = np.tanh(2.2 * t) / math.tanh(2.2)
    zs = zlo + (zhi - zlo) * (cluster + 1.0) / 2.0
    # make sure z0 is a node
    zs = np.sort(np.unique(np.append(zs, z0)))
    i0 = int(np.searchsorted(zs, z0))
    rs = np.empty_like(zs)
    rs[i0] = r0
    for i in range(i0 + 1, len(zs)):
        seg, _ = quad(speed, zs[i - 1], zs[i], limit=200)
        rs[i] = rs[i - 1] + direction * seg
    for i in range(i0 - 1, -1, -1):
        seg, _ = quad(speed, zs[i], zs[i + 1], limit=200)
        rs[i] = rs[i + 1] - direction * seg

    sign = float(direction)

    def r_of_z(z: float) -> float:
        z = min(max(z, zs[0]), zs[-1])
        i = int(np.searchsorted(zs, z))
        i = max(1, min(i, len(zs) - 1))
        base = zs[i - 1]
        seg, _ = quad(speed, base, z, limit=200)
        return rs[i - 1] + direction * seg

    rlo, rhi = (rs[0], rs[-1]) if sign > 0 else (rs[-1], rs[0])

    def z_of_r(r: float) -> float:
        if not (min(rs[0], rs[-1]) <= r <= max(rs[0], rs[-1])):
            raise CovMismatchError(f"r={r} outside tabulated range")
        vals = rs if sign > 0 else rs[::-1]
        nodes = zs if sign > 0 else zs[::-1]
        i = int(np.searchsorted(vals, r))
        i = max(1, min(i, len(vals) - 1))
        a, b = nodes[i - 1], nodes[i]
        if a > b:
            a, b = b, a
        return brentq(lambda z: r_of_z(z) - r, a, b, xtol=1e-14, rtol=1e-15)

    def dz_dr(r: float) -> float:
        z = z_of_r(r)
        return sign / speed(z)

    return ChangeOfVariables(
        label="numeric",
        forward=z_of_r,
        inverse=r_of_z,
        dz_dr=dz_dr,
        r_domain=(rlo, rhi),
        z_codomain=(zs[0], zs[-1]),
        speed_squared=rf(1) / energy_term,
    )
