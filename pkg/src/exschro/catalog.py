"""The ten exactly solvable potential families.

Each family packages: the closed-form potential V(r) on its natural real
domain, the closed-form change of variables z(r) with exact squared speed
G(z) = (dz/dr)^2, the map from (family parameters, energy) to the target
equation's parameters, and the bound-state energies from series termination.

The reduction certificate is the machine check that glues it together: the
target equation's Bose invariant I(z), Liouville-transformed through z(r),

    J(r) = G(z(r)) I(z(r)) + {z,r}/2,

must equal E - V(r) identically; ``family_reduction`` evaluates the exact
rational data on a grid and records the worst relative mismatch.

Solution profiles are assembled uniformly as

    phi(r) = G(z)^(-1/4) * h(z) * f(z),   z = z(r),

with h the target's gauge factor and f its series solution.

Potential formulas follow the reduction identities themselves.  Where the
commonly printed closed forms disagree with the identity (the Rosen family's
exponential-over-cosh form differs by the sign of the 1/cosh^2 term and an
additive constant absorbed into the energy), the certificate is the arbiter;
``list_families`` notes both forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exactalg import RationalFunction, RF_ONE, RF_Z, rf, scalar
from .equations import (
    ConfluentParams,
    GaugeFactor,
    HypergeometricParams,
    LinearODE2,
    OscillatorParams,
    TRIVIAL_GAUGE,
    bose_invariant,
    canonical_form,
    hermite_reduction,
    airy_reduction,
    make_confluent_family,
    make_hypergeometric,
    make_oscillator,
)
from .liouville import ChangeOfVariables
from .schwarz import schwarz_from_speed
from .specfun import (
    SolutionProfile,
    hermite_solution,
    hyp0f1,
    hyp1f1,
    hyp2f1,
)
from . import verify as _verify


class FamilyError(ValueError):
    pass


class DomainError(FamilyError):
    """Point outside the family's natural real domain."""


CERT_TOL = 1e-9


def _sqrtc(x) -> complex:
    return cmath.sqrt(complex(x))


# ---------------------------------------------------------------------------
# family table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    id: str
    name: str
    aliases: tuple
    param_names: tuple
    domain: tuple  # natural real domain (lo, hi), possibly infinite
    endpoint_kinds: tuple  # 'singular' | 'regular' | 'infinite'
    energy_label: str
    target_kind: str  # 'hypergeometric' | 'confluent' | 'oscillator'
    cert_window: tuple  # finite box standing in for the natural domain
    reality_conditions: str
    bound_state_conditions: str
    speed_squared: RationalFunction  # G(z) = (dz/dr)^2
    z_of_r: Callable
    r_of_z: Callable
    potential: Callable  # (params, r) -> value; complex r admitted
    target_params: Callable  # (params, E) -> parameter object
    series_solution: Callable  # (target params object, z) -> complex
    spectrum: Callable  # (params, n_max) -> list of E_n
    profile_window: tuple  # grid window keeping series arguments in-domain
    notes: str = ""

    def cov(self) -> ChangeOfVariables:
        g = self.speed_squared

        def dz_dr(r):
            z = self.z_of_r(r)
            val = complex(g(complex(z)))
            return math.copysign(math.sqrt(abs(val.real)), self._speed_sign(r))

        return ChangeOfVariables(
            label=self.id,
            forward=self.z_of_r,
            inverse=self.r_of_z,
            dz_dr=dz_dr,
            r_domain=self.domain,
            z_codomain=(
                min(self.z_of_r(self.cert_window[0]), self.z_of_r(self.cert_window[1])),
                max(self.z_of_r(self.cert_window[0]), self.z_of_r(self.cert_window[1])),
            ),
            speed_squared=g,
            branch=self.id,
        )

    def _speed_sign(self, r) -> float:
        eps = 1e-6
        return 1.0 if self.z_of_r(r + eps) >= self.z_of_r(r - eps) else -1.0


def _params_dict(family: "Family", params: dict) -> dict:
    unknown = set(params) - set(family.param_names)
    if unknown:
        raise FamilyError(
            f"unknown parameter(s) {sorted(unknown)} for family {family.id}; "
            f"expected {list(family.param_names)}"
        )
    missing = set(family.param_names) - set(params)
    if missing:
        raise FamilyError(f"missing parameter(s) {sorted(missing)} for {family.id}")
    return {k: float(params[k]) for k in family.param_names}


def _check_domain(family: "Family", r) -> None:
    if isinstance(r, complex):
        return  # analytic continuation probes bypass the real-domain guard
    lo, hi = family.domain
    if not (lo < r < hi):
        raise DomainError(f"r={r} outside the natural domain ({lo}, {hi}) of {family.id}")


# -- potentials (closed forms pinned by the reduction identity) --------------


def _v_pt_trig(p, r):
    asq, bsq = p["alpha"] ** 2, p["beta"] ** 2
    s, c = np.sin(r), np.cos(r)
    return (asq - 0.25) / (s * s) + (bsq - 0.25) / (c * c)


def _v_pt_hyp(p, r):
    asq, bsq = p["alpha"] ** 2, p["beta"] ** 2
    s, c = np.sinh(r), np.cosh(r)
    return (asq - 0.25) / (s * s) - (bsq - 0.25) / (c * c)


def _v_rosen(p, r):
    kappa, musq = p["kappa"], p["mu"] ** 2
    e2 = np.exp(2 * r)
    return kappa / (1 + e2) - (musq - 1) * e2 / (1 + e2) ** 2


def _v_eckart(p, r):
    kappa, musq = p["kappa"], p["mu"] ** 2
    s = np.sinh(r)
    return kappa * np.exp(r) / (2 * s) + (musq - 1) / (4 * s * s)


def _v_hydrogen(p, r):
    return -p["nu"] / r + (p["alpha"] ** 2 / 4 - 0.25) / (r * r)


def _v_radial_osc(p, r):
    return p["gamma"] ** 2 * r * r + (p["alpha"] ** 2 - 0.25) / (r * r)


def _v_morse(p, r):
    return p["gamma"] ** 2 / 4 * np.exp(-2 * r) - p["nu"] / 2 * np.exp(-r)


def _v_gho(p, r):
    return p["theta2"] * r * r + p["rho"] * r


def _v_special_i(p, r):
    return (
        p["theta2"] * (1.5 * r) ** (2.0 / 3.0)
        + p["lambda"] * (2.0 / (3.0 * r)) ** (2.0 / 3.0)
        - 5.0 / 36.0 / (r * r)
    )


def _v_special_ii(p, r):
    return (
        p["rho"] / np.sqrt(2 * r) + p["lambda"] / (2 * r) - 3.0 / 16.0 / (r * r)
    )


# -- target parameter maps ----------------------------------------------------


def _t_pt_trig(p, E):
    mu = _sqrtc(E)
    return HypergeometricParams.from_symmetric(p["alpha"], p["beta"], mu)


def _t_pt_hyp(p, E):
    # decaying gauge branch carries -beta; the invariant only sees beta^2
    mu = _sqrtc(-E)
    return HypergeometricParams.from_symmetric(p["alpha"], -p["beta"], mu)


def _t_rosen(p, E):
    alpha = _sqrtc(-E)
    beta = _sqrtc(p["kappa"] + alpha * alpha)
    return HypergeometricParams.from_symmetric(alpha, beta, p["mu"])


def _t_eckart(p, E):
    alpha = _sqrtc(-E)
    beta = _sqrtc(p["kappa"] + alpha * alpha)
    return HypergeometricParams.from_symmetric(alpha, beta, p["mu"])


def _t_hydrogen(p, E):
    gamma = _sqrtc(-E)
    return ConfluentParams.from_symmetric(p["alpha"], p["nu"], gamma)


def _t_radial_osc(p, E):
    return ConfluentParams.from_symmetric(p["alpha"], E / 2.0, p["gamma"])


def _t_morse(p, E):
    alpha = 2 * _sqrtc(-E)
    return ConfluentParams.from_symmetric(alpha, p["nu"], p["gamma"])


def _t_gho(p, E):
    return OscillatorParams.of(p["theta2"], p["rho"], -E)


def _t_special_i(p, E):
    return OscillatorParams.of(p["theta2"], -E, p["lambda"])


def _t_special_ii(p, E):
    return OscillatorParams.of(-E, p["rho"], p["lambda"])


# -- series solutions of the targets ------------------------------------------


def _f_hypergeometric(tp: HypergeometricParams, z: complex) -> complex:
    return hyp2f1(
        tp.a.to_complex(), tp.b.to_complex(), tp.c.to_complex(), z
    )


def _f_confluent(tp: ConfluentParams, z: complex) -> complex:
    gamma = tp.gamma.to_complex()
    if gamma == 0:
        raise FamilyError("confluent series solution requires gamma != 0")
    return hyp1f1(tp.a.to_complex() / gamma, tp.c.to_complex(), gamma * z)


def _f_oscillator(tp: OscillatorParams, z: complex) -> complex:
    if not tp.theta_sq.is_zero:
        red = hermite_reduction(tp)
        y = red.y_of_z(complex(z))
        return cmath.exp(-y * y / 2) * hermite_solution(red.a, y)
    red = airy_reduction(tp)
    y = red.y_of_z(complex(z))
    return hyp0f1(2.0 / 3.0, red.w_of_y(y))


# -- termination spectra -------------------------------------------------------


def _s_pt_trig(p, n_max):
    a, b = p["alpha"], p["beta"]
    if a <= -0.5 or b <= -0.5:
        return []
    return [(a + b + 1 + 2 * n) ** 2 for n in range(n_max + 1)]


def _s_pt_hyp(p, n_max):
    a, b = p["alpha"], p["beta"]
    if a <= -0.5:
        return []
    return [
        -((b - a - 1 - 2 * n) ** 2)
        for n in range(n_max + 1)
        if b - a - 1 - 2 * n > 0
    ]


def _s_rosen(p, n_max):
    kappa, mu = p["kappa"], abs(p["mu"])
    out = []
    for n in range(n_max + 1):
        m = mu - 1 - 2 * n
        if m <= 0 or m * m <= abs(kappa):
            continue
        out.append(-(((m * m - kappa) / (2 * m)) ** 2))
    return out


def _s_eckart(p, n_max):
    kappa, mu = p["kappa"], abs(p["mu"])
    out = []
    for n in range(n_max + 1):
        m = mu + 1 + 2 * n
        if kappa < -m * m:
            out.append(-(((m * m - kappa) / (2 * m)) ** 2))
    return out


def _s_hydrogen(p, n_max):
    a, nu = p["alpha"], p["nu"]
    if nu <= 0 or a <= -1:
        return []
    return [-((nu / (a + 1 + 2 * n)) ** 2) for n in range(n_max + 1)]


def _s_radial_osc(p, n_max):
    a, g = p["alpha"], p["gamma"]
    if g <= 0 or a <= -1:
        return []
    return [2 * g * (a + 1 + 2 * n) for n in range(n_max + 1)]


def _s_morse(p, n_max):
    nu, g = p["nu"], p["gamma"]
    if g <= 0 or nu <= 0:
        return []
    return [
        -((nu / g - 1 - 2 * n) ** 2) / 4
        for n in range(n_max + 1)
        if nu / g - 1 - 2 * n > 0
    ]


def _s_gho(p, n_max):
    t2, rho = p["theta2"], p["rho"]
    if t2 <= 0:
        return []
    th = math.sqrt(t2)
    return [th * (2 * n + 1) - rho * rho / (4 * t2) for n in range(n_max + 1)]


def _s_special_i(p, n_max):
    # reduction-branch boundary condition (phi ~ r^(1/6) at the origin);
    # the increasing tower uses the rho < 0 termination root
    t2, lam = p["theta2"], p["lambda"]
    if t2 <= 0:
        return []
    th = math.sqrt(t2)
    out = []
    for n in range(n_max + 1):
        disc = lam + th * (2 * n + 1)
        if disc > 0:
            out.append(2 * th * math.sqrt(disc))
    return out


def _s_special_ii(p, n_max):
    # reduction-branch boundary condition (phi ~ r^(1/4) at the origin);
    # theta_n is the unique positive root of 4(2n+1) t^3 + 4 lam t^2 = rho^2
    rho, lam = p["rho"], p["lambda"]
    if rho == 0:
        return []
    out = []
    for n in range(n_max + 1):
        roots = np.roots([4.0 * (2 * n + 1), 4.0 * lam, 0.0, -rho * rho])
        pos = [t.real for t in roots if abs(t.imag) < 1e-9 and t.real > 0]
        if pos:
            out.append(-max(pos) ** 2)
    return out


# -- changes of variables -------------------------------------------------------

_Z = RF_Z
_ONE = RF_ONE

FAMILIES = {}


def _register(fam: Family) -> None:
    FAMILIES[fam.id] = fam


_register(
    Family(
        id="pt_trig",
        name="trigonometric Poschl-Teller",
        aliases=("Poschl-Teller potential of the first kind",),
        param_names=("alpha", "beta"),
        domain=(0.0, math.pi / 2),
        endpoint_kinds=("singular", "singular"),
        energy_label="E = mu^2",
        target_kind="hypergeometric",
        cert_window=(0.0, math.pi / 2),
        reality_conditions="alpha^2, beta^2 real",
        bound_state_conditions="alpha > -1/2 and beta > -1/2",
        speed_squared=4 * _Z * (_ONE - _Z),
        z_of_r=lambda r: np.sin(r) ** 2,
        r_of_z=lambda z: math.asin(math.sqrt(z)),
        potential=_v_pt_trig,
        target_params=_t_pt_trig,
        series_solution=_f_hypergeometric,
        spectrum=_s_pt_trig,
        profile_window=(0.15, 1.0),
    )
)

_register(
    Family(
        id="pt_hyp",
        name="hyperbolic Poschl-Teller",
        aliases=(
            "generalized Poschl-Teller potential",
            "Poschl-Teller potential of the second kind",
        ),
        param_names=("alpha", "beta"),
        domain=(0.0, math.inf),
        endpoint_kinds=("singular", "infinite"),
        energy_label="E = -mu^2",
        target_kind="hypergeometric",
        cert_window=(0.0, 3.0),
        reality_conditions="alpha^2, beta^2 real",
        bound_state_conditions="alpha > -1/2 and beta - alpha > 1",
        speed_squared=4 * _Z * (_Z - _ONE),
        z_of_r=lambda r: -np.sinh(r) ** 2,
        r_of_z=lambda z: math.asinh(math.sqrt(-z)),
        potential=_v_pt_hyp,
        target_params=_t_pt_hyp,
        series_solution=_f_hypergeometric,
        spectrum=_s_pt_hyp,
        profile_window=(0.1, 1.2),
        notes="energy enters as E = -mu^2: the z = -sinh^2 r substitution "
        "flips the overall sign of the reduced operator relative to the "
        "trigonometric case",
    )
)

_register(
    Family(
        id="rosen",
        name="Rosen-Morse (Manning-Rosen)",
        aliases=("Scarf", "Woods-Saxon"),
        param_names=("kappa", "mu"),
        domain=(-math.inf, math.inf),
        endpoint_kinds=("infinite", "infinite"),
        energy_label="E = -alpha^2",
        target_kind="hypergeometric",
        cert_window=(-3.0, 3.0),
        reality_conditions="kappa, mu^2 real",
        bound_state_conditions="(|mu|-1-2n)^2 > |kappa|",
        speed_squared=4 * _Z * _Z * (_ONE - _Z) * (_ONE - _Z),
        z_of_r=lambda r: 1.0 / (1.0 + np.exp(2 * r)),
        r_of_z=lambda z: 0.5 * math.log(1.0 / z - 1.0),
        potential=_v_rosen,
        target_params=_t_rosen,
        series_solution=_f_hypergeometric,
        spectrum=_s_rosen,
        profile_window=(-0.5, 2.5),
        notes="potential fixed by the reduction identity: "
        "V = kappa e^{-r}/(2 cosh r) - (mu^2-1)/(4 cosh^2 r); the widely "
        "printed form kappa e^{r}/(2 cosh r) + (mu^2-1)/(4 cosh^2 r) equals "
        "kappa - V",
    )
)

_register(
    Family(
        id="eckart",
        name="Eckart",
        aliases=("Hulthen", "generalized Morse"),
        param_names=("kappa", "mu"),
        domain=(0.0, math.inf),
        endpoint_kinds=("singular", "infinite"),
        energy_label="E = -alpha^2",
        target_kind="hypergeometric",
        cert_window=(0.0, 3.0),
        reality_conditions="kappa, mu^2 real",
        bound_state_conditions="kappa < -(mu+1+2n)^2",
        speed_squared=4 * _Z * _Z * (_ONE - _Z) * (_ONE - _Z),
        z_of_r=lambda r: 1.0 / (1.0 - np.exp(-2 * r)),
        r_of_z=lambda z: -0.5 * math.log(1.0 - 1.0 / z),
        potential=_v_eckart,
        target_params=_t_eckart,
        series_solution=_f_hypergeometric,
        spectrum=_s_eckart,
        profile_window=(0.2, 2.5),
        notes="z(r) > 1 on the natural domain, so only terminating "
        "(bound-state) hypergeometric solutions are evaluated",
    )
)

_register(
    Family(
        id="hydrogen",
        name="radial Coulomb (hydrogen atom)",
        aliases=("Coulomb potential",),
        param_names=("alpha", "nu"),
        domain=(0.0, math.inf),
        endpoint_kinds=("singular", "infinite"),
        energy_label="E = -gamma^2",
        target_kind="confluent",
        cert_window=(0.0, 12.0),
        reality_conditions="nu, alpha^2 real",
        bound_state_conditions="nu > 0 and alpha > -1",
        speed_squared=rf(4),
        z_of_r=lambda r: 2.0 * r,
        r_of_z=lambda z: z / 2.0,
        potential=_v_hydrogen,
        target_params=_t_hydrogen,
        series_solution=_f_confluent,
        spectrum=_s_hydrogen,
        profile_window=(0.1, 8.0),
    )
)

_register(
    Family(
        id="radial_osc",
        name="radial harmonic oscillator",
        aliases=("rotationally symmetric harmonic oscillator",),
        param_names=("alpha", "gamma"),
        domain=(0.0, math.inf),
        endpoint_kinds=("singular", "infinite"),
        energy_label="E = 2 nu",
        target_kind="confluent",
        cert_window=(0.0, 4.0),
        reality_conditions="gamma^2, alpha^2 real",
        bound_state_conditions="gamma > 0 and alpha > -1",
        speed_squared=4 * _Z,
        z_of_r=lambda r: r * r,
        r_of_z=lambda z: math.sqrt(z),
        potential=_v_radial_osc,
        target_params=_t_radial_osc,
        series_solution=_f_confluent,
        spectrum=_s_radial_osc,
        profile_window=(0.1, 3.0),
    )
)

_register(
    Family(
        id="morse",
        name="Morse",
        aliases=(),
        param_names=("nu", "gamma"),
        domain=(-math.inf, math.inf),
        endpoint_kinds=("infinite", "infinite"),
        energy_label="E = -alpha^2/4",
        target_kind="confluent",
        cert_window=(-2.0, 5.0),
        reality_conditions="nu, gamma^2 real",
        bound_state_conditions="gamma > 0 and nu/gamma > 1 + 2n",
        speed_squared=_Z * _Z,
        z_of_r=lambda r: np.exp(-r),
        r_of_z=lambda z: -math.log(z),
        potential=_v_morse,
        target_params=_t_morse,
        series_solution=_f_confluent,
        spectrum=_s_morse,
        profile_window=(-1.5, 4.0),
    )
)

_register(
    Family(
        id="gho",
        name="generalized harmonic oscillator",
        aliases=("translated harmonic oscillator",),
        param_names=("theta2", "rho"),
        domain=(-math.inf, math.inf),
        endpoint_kinds=("infinite", "infinite"),
        energy_label="E = -lambda",
        target_kind="oscillator",
        cert_window=(-4.0, 4.0),
        reality_conditions="theta^2, rho real",
        bound_state_conditions="theta^2 > 0",
        speed_squared=rf(1),
        z_of_r=lambda r: r,
        r_of_z=lambda z: z,
        potential=_v_gho,
        target_params=_t_gho,
        series_solution=_f_oscillator,
        spectrum=_s_gho,
        profile_window=(-2.5, 2.5),
    )
)

_register(
    Family(
        id="special_I",
        name="special potential I (two-thirds power with fixed -5/36 r^-2)",
        aliases=(),
        param_names=("theta2", "lambda"),
        domain=(0.0, math.inf),
        endpoint_kinds=("singular", "infinite"),
        energy_label="E = -rho",
        target_kind="oscillator",
        cert_window=(0.0, 5.0),
        reality_conditions="theta^2, lambda real",
        bound_state_conditions="theta^2 > 0 and lambda + theta(2n+1) > 0 "
        "(reduction-branch boundary condition at r=0)",
        speed_squared=rf(1) / _Z,
        z_of_r=lambda r: (1.5 * r) ** (2.0 / 3.0),
        r_of_z=lambda z: (z**1.5) / 1.5,
        potential=_v_special_i,
        target_params=_t_special_i,
        series_solution=_f_oscillator,
        spectrum=_s_special_i,
        profile_window=(0.2, 4.0),
        notes="the r^-2 coefficient -5/36 is scale-rigid: r -> s r maps the "
        "family to itself with theta^2 -> s^(8/3) theta^2, "
        "lambda -> s^(4/3) lambda and the same -5/36",
    )
)

_register(
    Family(
        id="special_II",
        name="special potential II (inverse square root with fixed -3/16 r^-2)",
        aliases=(),
        param_names=("rho", "lambda"),
        domain=(0.0, math.inf),
        endpoint_kinds=("singular", "infinite"),
        energy_label="E = -theta^2",
        target_kind="oscillator",
        cert_window=(0.0, 6.0),
        reality_conditions="rho, lambda real",
        bound_state_conditions="rho != 0 "
        "(reduction-branch boundary condition at r=0)",
        speed_squared=rf(1) / (_Z * _Z),
        z_of_r=lambda r: np.sqrt(2.0 * r),
        r_of_z=lambda z: z * z / 2.0,
        potential=_v_special_ii,
        target_params=_t_special_ii,
        series_solution=_f_oscillator,
        spectrum=_s_special_ii,
        profile_window=(0.3, 6.0),
        notes="the r^-2 coefficient -3/16 is scale-rigid: r -> s r maps the "
        "family to itself with rho -> s^(3/2) rho, lambda -> s lambda and "
        "the same -3/16",
    )
)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def get_family(family_id: str) -> Family:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise FamilyError(
            f"unknown family {family_id!r}; known: {sorted(FAMILIES)}"
        ) from None


def family_potential(family_id: str, params: dict, r):
    """V(r); raises DomainError for real r outside the natural domain."""
    fam = get_family(family_id)
    p = _params_dict(fam, params)
    _check_domain(fam, r)
    val = fam.potential(p, r)
    if not isinstance(r, complex) and not math.isfinite(float(np.real(val))):
        raise DomainError(f"potential singular at r={r}")
    return val if isinstance(r, complex) else float(val)


def target_equation(family_id: str, params: dict, energy: float):
    """(parameter object, LinearODE2) of the family's target equation."""
    fam = get_family(family_id)
    p = _params_dict(fam, params)
    tp = fam.target_params(p, energy)
    if fam.target_kind == "hypergeometric":
        return tp, make_hypergeometric(tp)
    if fam.target_kind == "confluent":
        return tp, make_confluent_family(tp)
    return tp, make_oscillator(tp)


@dataclass(frozen=True)
class ReductionCertificate:
    """Grid evidence for the Liouville identity J(r) = E - V(r)."""

    family: str
    params: dict
    energy: float
    target: dict
    max_mismatch: float
    grid: tuple  # (lo, hi, n)
    worst_r: float
    tolerance: float = CERT_TOL

    @property
    def passed(self) -> bool:
        return self.max_mismatch <= self.tolerance

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "energy": self.energy,
            "target": dict(self.target),
            "max_mismatch": self.max_mismatch,
            "grid": {"lo": self.grid[0], "hi": self.grid[1], "n": self.grid[2]},
            "passed": self.passed,
            "worst_r": self.worst_r,
        }


def _target_description(fam: Family, tp) -> dict:
    if fam.target_kind == "hypergeometric":
        vals = {"a": tp.a, "b": tp.b, "c": tp.c}
    elif fam.target_kind == "confluent":
        vals = {"a": tp.a, "c": tp.c, "gamma": tp.gamma}
    else:
        vals = {"theta2": tp.theta_sq, "rho": tp.rho, "lambda": tp.lam}
    out = {"kind": fam.target_kind}
    for k, v in vals.items():
        cv = v.to_complex()
        out[k] = [cv.real, cv.imag]
    return out


def family_reduction(
    family_id: str, params: dict, energy: float, n_grid: int = 200
) -> ReductionCertificate:
    """Evaluate the reduction identity on a grid spanning the middle 90% of
    the (boxed) natural domain and record the worst relative mismatch.

    A mismatch above tolerance is reported in the certificate, never hidden.
    """
    fam = get_family(family_id)
    p = _params_dict(fam, params)
    tp, ode = target_equation(family_id, p, energy)
    invariant = bose_invariant(ode)
    half_schwarz = schwarz_from_speed(fam.speed_squared) / 2
    lo, hi = fam.cert_window
    span = hi - lo
    rs = np.linspace(lo + 0.05 * span, hi - 0.05 * span, n_grid)
    worst, worst_r = 0.0, rs[0]
    for r in rs:
        z = complex(fam.z_of_r(r))
        g = complex(fam.speed_squared(z))
        j = g * complex(invariant(z)) + complex(half_schwarz(z))
        target_val = energy - fam.potential(p, r)
        scale = max(1.0, abs(energy), abs(fam.potential(p, r)))
        mism = abs(j - target_val) / scale
        if mism > worst:
            worst, worst_r = mism, r
    return ReductionCertificate(
        family=family_id,
        params=p,
        energy=float(energy),
        target=_target_description(fam, tp),
        max_mismatch=float(worst),
        grid=(float(rs[0]), float(rs[-1]), n_grid),
        worst_r=float(worst_r),
    )


def analytic_spectrum(family_id: str, params: dict, n_max: int) -> list:
    """Bound-state energies from series termination, lowest first.

    Termination (first series parameter a nonpositive integer) is filtered
    by decay of the full gauge-times-polynomial wavefunction at both ends of
    the natural domain; families without bound states yield an empty list.
    """
    if n_max > 20:
        raise FamilyError("n_max is capped at 20")
    fam = get_family(family_id)
    p = _params_dict(fam, params)
    return sorted(fam.spectrum(p, n_max))


def list_families() -> list:
    """Metadata for all ten families."""
    out = []
    for fam in FAMILIES.values():
        out.append(
            {
                "id": fam.id,
                "name": fam.name,
                "aliases": list(fam.aliases),
                "params": list(fam.param_names),
                "domain": [fam.domain[0], fam.domain[1]],
                "energy": fam.energy_label,
                "target": fam.target_kind,
                "reality": fam.reality_conditions,
                "bound_states": fam.bound_state_conditions,
                "notes": fam.notes,
            }
        )
    return out


# ---------------------------------------------------------------------------
# solution profiles
# ---------------------------------------------------------------------------


def _target_gauge(fam: Family, ode: LinearODE2) -> GaugeFactor:
    if fam.target_kind == "oscillator":
        return TRIVIAL_GAUGE  # already in canonical form
    return canonical_form(ode)[1]


def build_solution(
    family_id: str, params: dict, energy: float, grid: Sequence[float]
) -> SolutionProfile:
    """phi(r) = G(z)^(-1/4) h(z) f(z) on the given grid, anchor-normalized.

    Requires a passing reduction certificate for (family, params, energy);
    series domain violations propagate with the offending r attached.
    """
    fam = get_family(family_id)
    p = _params_dict(fam, params)
    cert = family_reduction(family_id, p, energy)
    if not cert.passed:
        raise FamilyError(
            f"reduction certificate failed for {family_id} at E={energy}: "
            f"mismatch {cert.max_mismatch:.3e} at r={cert.worst_r}"
        )
    tp, ode = target_equation(family_id, p, energy)
    gauge = _target_gauge(fam, ode)

    def phi(r: float) -> complex:
        _check_domain(fam, float(r))
        z = complex(fam.z_of_r(r))
        try:
            g = complex(fam.speed_squared(z))
            val = g ** (-0.25) * gauge(z) * fam.series_solution(tp, z)
        except Exception as exc:
            raise type(exc)(f"{exc} (while evaluating at r={r})") from exc
        return val

    values = [phi(r) for r in grid]
    mid = len(grid) // 2
    anchor_val = values[mid]
    if anchor_val == 0:
        raise FamilyError("anchor value vanished; pick a different grid")
    values = [v / anchor_val for v in values]
    dr = 1e-6 * max(1.0, abs(grid[mid]))
    dphi = (phi(grid[mid] + dr) - phi(grid[mid] - dr)) / (2 * dr * anchor_val)
    route = {
        "family": family_id,
        "target": fam.target_kind,
        "params": dict(p),
        "energy": float(energy),
        "gauge": gauge.to_json(),
    }
    return SolutionProfile(
        grid=tuple(float(r) for r in grid),
        values=tuple(values),
        route=route,
        anchor=(float(grid[mid]), 1.0 + 0.0j, dphi),
    )


# ---------------------------------------------------------------------------
# shooting comparison, continuation checks and alternative substitutions
# ---------------------------------------------------------------------------


def shooting_problem(
    family_id: str, params: dict, bracket: Optional[tuple] = None, n_grid: int = 12001
) -> _verify.ShootingProblem:
    """A verify.ShootingProblem for the family's natural domain."""
    fam = get_family(family_id)
    p = _params_dict(fam, params)
    lo, hi = fam.domain
    kinds = fam.endpoint_kinds

    def V(r):
        return float(fam.potential(p, r))

    return _verify.ShootingProblem(
        potential=V,
        left=_verify.Endpoint(lo, kinds[0]),
        right=_verify.Endpoint(hi, kinds[1]),
        n_grid=n_grid,
        bracket=bracket,
    )


def spectrum_comparison(
    family_id: str, params: dict, n_max: int, n_grid: int = 12001
) -> list:
    """Rows (n, E_analytic, E_shooting, |difference|).

    The shooting bracket is seeded around the analytic values (standard
    bracket seeding; the eigenvalues themselves come entirely from the
    Numerov oracle).
    """
    analytic = analytic_spectrum(family_id, params, n_max)
    if not analytic:
        return []
    spread = max(1.0, (analytic[-1] - analytic[0]))
    bracket = (analytic[0] - 0.45 * spread, analytic[-1] + 0.45 * spread)
    problem = shooting_problem(family_id, params, bracket=bracket, n_grid=n_grid)
    shots = _verify.shoot_spectrum(problem, len(analytic) - 1)
    return [
        (n, analytic[n], shots[n], abs(analytic[n] - shots[n]))
        for n in range(len(analytic))
    ]


def spectrum_csv(rows) -> str:
    lines = ["n,E_n,E_shoot,abs_err"]
    for n, ea, es, err in rows:
        lines.append(f"{n},{ea:.12e},{es:.12e},{err:.12e}")
    return "\n".join(lines) + "\n"


# -- analytic continuations between real forms --------------------------------

CONTINUATIONS = {
    # trig <-> hyperbolic: r -> i r maps z = sin^2 onto z = -sinh^2 and
    # negates the potential, so the energies swap sign as well
    ("pt_trig", "pt_hyp"): {
        "map": lambda r: 1j * r,
        "param_map": lambda p: dict(p),
        "potential_factor": -1.0,
        "energy_factor": -1.0,
        "label": "r -> i r",
    },
    # Rosen <-> Eckart: r -> i pi/2 - r carries 1/(1+e^{2r}) onto
    # 1/(1-e^{-2r}) with identical parameters
    ("rosen", "eckart"): {
        "map": lambda r: 1j * math.pi / 2 - r,
        "param_map": lambda p: dict(p),
        "potential_factor": 1.0,
        "energy_factor": 1.0,
        "label": "r -> i pi/2 - r",
    },
}


def continuation_check(pair: tuple, params: dict, rs: Sequence[float]) -> float:
    """Sup over rs of the continuation identity residual for a family pair.

    Checks both the potential relation V_src(map(r)) = factor * V_dst(r) and
    the change-of-variables relation z_src(map(r)) = z_dst(r).
    """
    spec = CONTINUATIONS[pair]
    src, dst = get_family(pair[0]), get_family(pair[1])
    p_src = _params_dict(src, params)
    p_dst = _params_dict(dst, spec["param_map"](params))
    worst = 0.0
    for r in rs:
        w = spec["map"](r)
        v_src = complex(src.potential(p_src, w))
        v_dst = complex(dst.potential(p_dst, float(r)))
        z_src = complex(src.z_of_r(w))
        z_dst = complex(dst.z_of_r(float(r)))
        scale = max(1.0, abs(v_dst))
        worst = max(worst, abs(v_src - spec["potential_factor"] * v_dst) / scale)
        worst = max(worst, abs(z_src - z_dst) / max(1.0, abs(z_dst)))
    return worst


# -- alternative substitutions landing on catalog families --------------------
#
# Each entry: an alternative change of variables for the same invariant
# family, the catalog family it actually lands on, the parameter remap and
# the additive constant absorbed into the energy.  The landing family is
# recorded from the actual substitution; commonly quoted labels for these
# swap the two members of each pair.

ALTERNATE_SUBSTITUTIONS = [
    {
        "label": "z = tanh^2 r (speed 2 z^(1/2) (1-z))",
        "z_of_r": lambda r: np.tanh(r) ** 2,
        "speed_squared": 4 * _Z * (_ONE - _Z) ** 2,
        "lands_on": "pt_hyp",
        "window": (0.35, 2.5),
        # invariant coefficients (alpha, mu of the source triple) -> catalog
        # params; the energy carrier of this ansatz is 1 - beta^2
        "param_map": lambda a, m: {
            "alpha": math.sqrt(0.5 - a * a),
            "beta": math.sqrt(0.5 - m * m),
        },
        "const_shift": lambda a, m: -1.0,
        "source_coeffs": lambda a, m: ((1 - a * a), (m * m - 1)),
    },
    {
        "label": "z = -tan^2 r (speed -2 (-z)^(1/2) (1-z))",
        "z_of_r": lambda r: -np.tan(r) ** 2,
        "speed_squared": 4 * _Z * (_ONE - _Z) ** 2,
        "lands_on": "pt_trig",
        "window": (0.2, 1.35),
        "param_map": lambda a, m: {"alpha": a, "beta": m},
        "const_shift": lambda a, m: -1.0,
        "source_coeffs": lambda a, m: ((1 - a * a), (m * m - 1)),
    },
    {
        "label": "z = 1 - e^{2r} (speed 2 (z-1))",
        "z_of_r": lambda r: 1.0 - np.exp(2 * r),
        "speed_squared": 4 * (_Z - _ONE) ** 2,
        "lands_on": "eckart",
        "window": (-2.5, -0.2),
        "reflect": True,  # lands on the catalog family at r' = -r
        "param_map": lambda a, m, b: {"kappa": m * m - b * b, "mu": math.sqrt(2 - a * a)},
        "const_shift": lambda a, m, b: b * b - m * m - 1.0,
        "source_coeffs": lambda a, m, b: ((1 - a * a), (m * m - b * b)),
    },
    {
        "label": "z = 1 + e^{2r} (speed -2 (z-1))",
        "z_of_r": lambda r: 1.0 + np.exp(2 * r),
        "speed_squared": 4 * (_Z - _ONE) ** 2,
        "lands_on": "rosen",
        "window": (-2.0, 2.0),
        "reflect": False,
        "param_map": lambda a, m, b: {"kappa": m * m - b * b, "mu": math.sqrt(2 - a * a)},
        "const_shift": lambda a, m, b: b * b - m * m - 1.0,
        "source_coeffs": lambda a, m, b: ((1 - a * a), (m * m - b * b)),
    },
]


def alternate_potential(entry: dict, source_params: tuple):
    """V(r) generated by an alternative substitution, via the engine formula
    V = -[G * (sum of non-energy invariant terms) + {z,r}/2]."""
    g = entry["speed_squared"]
    half_schwarz = schwarz_from_speed(g) / 2
    # hypergeometric invariant pieces: A = 1/(4 z^2 (1-z)), B = 1/(4 z (1-z)^2),
    # C = 1/(4 z (1-z)); which of them carries the energy depends on the
    # substitution's speed, the rest enter V with their coefficients.
    z = _Z
    one = _ONE
    A = rf(1) / (4 * z * z * (one - z))
    B = rf(1) / (4 * z * (one - z) ** 2)
    C = rf(1) / (4 * z * (one - z))
    if entry["lands_on"] in ("pt_trig", "pt_hyp"):
        # energy carrier B: remaining terms A and C with coefficients
        (ca, cc) = entry["source_coeffs"](*source_params)
        terms = [(ca, A), (cc, C)]
    else:
        # energy carrier B - C (ansatz with speed 4(z-1)^2): basis (A, C)
        (ca, cc) = entry["source_coeffs"](*source_params)
        terms = [(ca, A), (cc, C)]
    zfun = entry["z_of_r"]

    def V(r: float) -> float:
        zz = complex(zfun(r))
        gg = complex(g(zz))
        acc = 0j
        for coeff, term in terms:
            acc += coeff * term(zz)
        return -(gg * acc + complex(half_schwarz(zz))).real

    return V
