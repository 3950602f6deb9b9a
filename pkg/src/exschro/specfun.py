"""Series evaluation of the solving special functions and profile assembly.

The evaluation domains are deliberately conservative: the Gauss series is
used on |z| <= 0.75 with the Pfaff transformation covering |z/(z-1)| <= 0.75
(in particular all real z < 0); the confluent-type series are admitted for
|z| <= 50.  Terminating (polynomial) cases are recognized first and are
evaluated exactly everywhere.  All series use compensated summation with an
explicit geometric tail bound and a 10,000-term cap.

``build_solution`` assembles catalog wavefunctions uniformly as

    phi(r) = G(z)^(-1/4) * h(z) * f(z),   z = z(r),

where G is the squared speed of the change of variables, h the target
equation's gauge factor and f the chosen series solution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .exactalg import PoleEvaluationError


class SeriesDomainError(ValueError):
    """Argument outside every admitted convergence strategy."""


class SeriesParameterError(ValueError):
    """Lower parameter at a pole (non-positive integer c)."""


_MAX_TERMS = 10_000


def _is_nonpositive_int(x: complex, tol: float = 0.0) -> Optional[int]:
    x = complex(x)
    if abs(x.imag) > tol:
        return None
    n = round(x.real)
    if n <= 0 and abs(x.real - n) <= tol:
        return int(n)
    return None


def _kahan_series(
    first_term: complex, ratio_fn, tol: float, cap_terms: int, limit_ratio: float = 0.0
):
    """Sum term_0 + term_1 + ... with term_{k+1} = term_k * ratio_fn(k).

    Stops once a geometric tail bound drops below tol * max(1, |sum|); the
    bound uses max(current ratio, asymptotic ratio) * 1.02 so that it majorizes
    every later ratio.
    """
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    term = complex(first_term)
    for k in range(cap_terms):
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        ratio = complex(ratio_fn(k))
        term = term * ratio
        q = 1.02 * max(abs(ratio), limit_ratio)
        if q < 0.98:
            tail = abs(term) * (1.0 if q <= 0 else 1.0 / (1.0 - q))
            if tail < tol * max(1.0, abs(s)):
                return s
    raise SeriesDomainError(
        f"series failed to meet tol={tol} within {cap_terms} terms"
    )


def _terminating_sum(first_term: complex, ratio_fn, n_terms: int) -> complex:
    s = 0.0 + 0.0j
    term = complex(first_term)
    for k in range(n_terms):
        s += term
        term = term * complex(ratio_fn(k))
    return s


def hyp2f1(a, b, c, z, tol: float = 1e-14) -> complex:
    """Gauss hypergeometric series with automatic Pfaff transformation."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _is_nonpositive_int(c) is not None:
        raise SeriesParameterError(f"c={c} is a non-positive integer")
    na = _is_nonpositive_int(a)
    nb = _is_nonpositive_int(b)
    if na is not None or nb is not None:
        n = max(x for x in (na, nb) if x is not None)  # least truncation
        ratio = lambda k: (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        return _terminating_sum(1.0, ratio, -n + 1)
    if abs(z) <= 0.75:
        ratio = lambda k: (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        return _kahan_series(1.0, ratio, tol, _MAX_TERMS, limit_ratio=abs(z))
    w = z / (z - 1.0)
    if abs(w) <= 0.75:
        # Pfaff: (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
        ratio = lambda k: (a + k) * (c - b + k) / ((c + k) * (k + 1)) * w
        return (1.0 - z) ** (-a) * _kahan_series(
            1.0, ratio, tol, _MAX_TERMS, limit_ratio=abs(w)
        )
    raise SeriesDomainError(
        f"z={z} outside |z|<=0.75 and the Pfaff disc |z/(z-1)|<=0.75"
    )


def hyp1f1(a, c, z, tol: float = 1e-14) -> complex:
    """Confluent (Kummer) series."""
    a, c, z = complex(a), complex(c), complex(z)
    if _is_nonpositive_int(c) is not None:
        raise SeriesParameterError(f"c={c} is a non-positive integer")
    ratio = lambda k: (a + k) / ((c + k) * (k + 1)) * z
    na = _is_nonpositive_int(a)
    if na is not None:
        return _terminating_sum(1.0, ratio, -na + 1)
    if abs(z) > 50.0:
        raise SeriesDomainError(f"|z|={abs(z):.3g} beyond the |z|<=50 guard")
    return _kahan_series(1.0, ratio, tol, _MAX_TERMS)


def hyp0f1(c, z, tol: float = 1e-14) -> complex:
    """Limit series 0F1(;c;z)."""
    c, z = complex(c), complex(z)
    if _is_nonpositive_int(c) is not None:
        raise SeriesParameterError(f"c={c} is a non-positive integer")
    if abs(z) > 50.0:
        raise SeriesDomainError(f"|z|={abs(z):.3g} beyond the |z|<=50 guard")
    ratio = lambda k: z / ((c + k) * (k + 1))
    return _kahan_series(1.0, ratio, tol, _MAX_TERMS)


def hyp0f1_with_derivative(c, z, tol: float = 1e-14):
    """(0F1(;c;z), d/dz 0F1(;c;z)); the derivative is 0F1(;c+1;z)/c."""
    return hyp0f1(c, z, tol), hyp0f1(complex(c) + 1, z, tol) / complex(c)


def hermite_solution(a, y, tol: float = 1e-14) -> complex:
    """A solution of f'' - 2y f' - 2a f = 0.

    For a = -n (n a nonnegative integer) this is the degree-n polynomial
    solution (even/odd Kummer branch by parity); otherwise the sum of the
    even and odd branches, which is a generic solution of the equation.
    """
    a, y = complex(a), complex(y)
    if abs(y) > 20.0:
        raise SeriesDomainError(f"|y|={abs(y):.3g} beyond the |y|<=20 guard")
    na = _is_nonpositive_int(-a)  # a = -n  <=>  -a = n >= 0
    even = lambda: hyp1f1(a / 2, 0.5, y * y, tol)
    odd = lambda: y * hyp1f1((a + 1) / 2, 1.5, y * y, tol)
    if na is not None:
        n = -na
        return even() if n % 2 == 0 else odd()
    return even() + odd()


# ---------------------------------------------------------------------------
# Solution profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolutionProfile:
    """Wavefunction samples with construction metadata.

    ``anchor`` is (r0, value, derivative) after normalization; the grid must
    be strictly increasing inside the family's natural domain.
    """

    grid: tuple
    values: tuple
    route: dict
    anchor: tuple

    def __post_init__(self):
        g = self.grid
        if any(g[i + 1] <= g[i] for i in range(len(g) - 1)):
            raise ValueError("profile grid must be strictly increasing")

    def to_csv(self) -> str:
        lines = ["r,re,im"]
        for r, v in zip(self.grid, self.values):
            lines.append(f"{r:.12e},{v.real:.12e},{v.imag:.12e}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "route": self.route,
            "anchor": {
                "r": self.anchor[0],
                "value": [self.anchor[1].real, self.anchor[1].imag],
                "derivative": [self.anchor[2].real, self.anchor[2].imag],
            },
            "grid": list(self.grid),
            "values": [[v.real, v.imag] for v in self.values],
        }


def build_solution(family_id: str, params: dict, energy: float, grid: Sequence[float]):
    """Gauge x series solution along the family's change of variables.

    Implemented in :mod:`exschro.catalog` (which owns the family data); this
    thin forwarder keeps the operation discoverable next to the series code.
    """
    from . import catalog

    return catalog.build_solution(family_id, params, energy, grid)
