"""Numerical oracle: Numerov integration, residual checks, shooting spectra.

Everything here is independent of the exact-algebra reduction machinery; it
only consumes a potential callable.  That independence is the point: the
shooting spectra and finite-difference residuals adjudicate every termination
formula and every assembled wavefunction in the catalog.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._kernels import count_nodes, numerov_sweep

log = logging.getLogger(__name__)


def _as_f_array(V, E, grid):
    if callable(V):
        vals = np.array([V(r) for r in grid], dtype=np.float64)
    else:
        vals = np.asarray(V, dtype=np.float64)
    return E - vals


def numerov(V, E: float, grid, y0: float, y1: float) -> np.ndarray:
    """Numerov solution of -y'' + (V - E) y = 0 on a uniform grid.

    ``V`` may be a callable or an array of samples.  Overflow triggers
    rescaled continuation; the returned array is unified onto the final
    scale (which flushes far-away prefixes toward zero, never corrupts the
    shape), with every rescale event logged.
    """
    grid = np.asarray(grid, dtype=np.float64)
    h = grid[1] - grid[0]
    if not np.allclose(np.diff(grid), h, rtol=0, atol=1e-9 * abs(h)):
        raise ValueError("numerov requires a uniform grid")
    f = _as_f_array(V, E, grid)
    y, ev_idx, ev_fac, nev = numerov_sweep(f, h, y0, y1)
    for k in range(nev):
        idx, fac = int(ev_idx[k]), float(ev_fac[k])
        log.info("numerov rescale by %.3e at grid index %d", fac, idx)
        y[: idx - 1] *= fac
    return y


def residual(V, E: float, profile) -> float:
    """Max relative Schrodinger residual of a profile, 4th-order stencil.

    residual_i = |-phi'' + (V - E) phi|_i / (max|phi| * max(1, |V_i - E|)),
    maximized over interior points.  Needs a uniform grid with >= 7 points.
    """
    grid = np.asarray(profile.grid, dtype=np.float64)
    vals = np.asarray(profile.values, dtype=np.complex128)
    if len(grid) < 7:
        raise ValueError("residual needs at least 7 grid points")
    h = grid[1] - grid[0]
    if not np.allclose(np.diff(grid), h, rtol=0, atol=1e-9 * abs(h)):
        raise ValueError("residual requires a uniform grid")
    vpot = np.array([V(r) for r in grid], dtype=np.float64)
    scale = np.max(np.abs(vals))
    if scale == 0:
        return 0.0
    worst = 0.0
    for i in range(2, len(grid) - 2):
        d2 = (
            -vals[i - 2]
            + 16 * vals[i - 1]
            - 30 * vals[i]
            + 16 * vals[i + 1]
            - vals[i + 2]
        ) / (12 * h * h)
        num = abs(-d2 + (vpot[i] - E) * vals[i])
        worst = max(worst, num / (scale * max(1.0, abs(vpot[i] - E))))
    return float(worst)


# ---------------------------------------------------------------------------
# Shooting
# ---------------------------------------------------------------------------


@dataclass
class Endpoint:
    """One boundary of a shooting domain.

    kind 'regular':  Dirichlet start at the given position.
    kind 'singular': 1/r^2-type edge; truncated by ``offset`` (default
                     1e-4 * domain scale) and started on the corrected power
                     law d^s (1 + c1 d / (2s)), s = 1/2 + sqrt(c2 + 1/4),
                     where c2, c1 are the inverse-square and Coulomb-like
                     coefficients (estimated if c2 is not given).
    kind 'infinite': truncated where the WKB decay integral past the
                     turning point exceeds ~30; box doubled until the
                     eigenvalues stop moving.
    """

    position: float
    kind: str = "regular"
    offset: Optional[float] = None
    c2: Optional[float] = None


@dataclass
class ShootingProblem:
    potential: Callable[[float], float]
    left: Endpoint
    right: Endpoint
    n_grid: int = 8001
    bracket: Optional[tuple] = None
    bisect_tol: float = 1e-10
    box_tol: float = 1e-9

    def domain_scale(self) -> float:
        lo, hi = self.left.position, self.right.position
        if math.isfinite(lo) and math.isfinite(hi):
            return hi - lo
        return 1.0


def _edge_coefficients(V, r_edge: float, toward: float):
    """(c2, c1) of V ~ c2/d^2 + c1/d + O(1) at a singular endpoint.

    V * d^2 = c2 + c1 d + O(d^2), so one Richardson step on (d, d/2) isolates
    c2; a second difference then isolates the Coulomb-like c1.
    """
    d1 = min(abs(toward - r_edge) * 1e-3, 1e-3)
    step = math.copysign(1.0, toward - r_edge)
    a = V(r_edge + step * d1) * d1**2
    b = V(r_edge + step * d1 / 2) * (d1 / 2) ** 2
    c2 = 2 * b - a
    f1 = (V(r_edge + step * d1) - c2 / d1**2) * d1
    f2 = (V(r_edge + step * d1 / 2) - c2 / (d1 / 2) ** 2) * (d1 / 2)
    c1 = 2 * f2 - f1
    return c2, c1


def _truncate_infinite(
    V, E_top: float, start: float, direction: float, scale: float, target: float = 30.0
):
    """Walk outward until the WKB decay integral past the turning point
    reaches ``target``; capped at 50 * scale * (target/30) when no forbidden
    region is found (energies at the continuum edge).

    Box convergence is driven by raising ``target``: on steep walls the edge
    then moves only logarithmically, which keeps h^2 |V| small and the
    recursion stable."""
    step = max(0.25, 0.05 * scale)
    cap = 50.0 * max(1.0, scale) * (target / 30.0)
    r = start
    integral = 0.0
    while abs(r - start) < cap:
        r += direction * step
        gap = V(r) - E_top
        if gap > 0:
            integral += math.sqrt(gap) * step
        else:
            integral = 0.0
        if integral >= target:
            return r
    return r


class _Box:
    """Concrete truncated domain with start data for both sweeps."""

    def __init__(self, problem: ShootingProblem, E_top: float, target: float = 30.0):
        p = problem
        scale = p.domain_scale()
        lo, hi = p.left.position, p.right.position
        self.s_left = None
        self.s_right = None
        self.c1_left = 0.0
        self.c1_right = 0.0
        if p.left.kind == "singular":
            off = p.left.offset if p.left.offset is not None else 1e-4 * scale
            c2 = p.left.c2
            if c2 is None:
                c2, c1 = _edge_coefficients(
                    p.potential, lo, hi if math.isfinite(hi) else lo + 1
                )
            else:
                _, c1 = _edge_coefficients(
                    p.potential, lo, hi if math.isfinite(hi) else lo + 1
                )
            self.s_left = 0.5 + math.sqrt(max(c2 + 0.25, 0.0))
            self.c1_left = c1
            lo = lo + off
        elif p.left.kind == "infinite":
            anchor = 0.0 if not math.isfinite(hi) else hi
            lo = _truncate_infinite(p.potential, E_top, anchor, -1.0, 1.0, target)
        if p.right.kind == "singular":
            off = p.right.offset if p.right.offset is not None else 1e-4 * scale
            c2 = p.right.c2
            if c2 is None:
                c2, c1 = _edge_coefficients(p.potential, hi, lo)
            else:
                _, c1 = _edge_coefficients(p.potential, hi, lo)
            self.s_right = 0.5 + math.sqrt(max(c2 + 0.25, 0.0))
            self.c1_right = c1
            hi = hi - off
        elif p.right.kind == "infinite":
            anchor = 0.0 if not math.isfinite(p.left.position) else lo
            hi = _truncate_infinite(p.potential, E_top, anchor, +1.0, 1.0, target)
        self.lo, self.hi = float(lo), float(hi)
        n_pts = min(int(problem.n_grid * max(1.0, target / 30.0)) | 1, 120_001)
        self.grid = np.linspace(self.lo, self.hi, n_pts)
        self.h = self.grid[1] - self.grid[0]
        self.vvals = np.array([p.potential(r) for r in self.grid], dtype=np.float64)
        self.problem = p

    def _start_values(self, side: str, E: float):
        h = self.h
        if side == "left":
            kind = self.problem.left.kind
            s, c1 = self.s_left, self.c1_left
            edge = self.problem.left.position
            r0, r1 = self.grid[0], self.grid[1]
            v_end = self.vvals[0]
        else:
            kind = self.problem.right.kind
            s, c1 = self.s_right, self.c1_right
            edge = self.problem.right.position
            r0, r1 = self.grid[-1], self.grid[-2]
            v_end = self.vvals[-1]
        if kind == "singular":
            d0, d1_ = abs(r0 - edge), abs(r1 - edge)
            y0 = d0**s * (1.0 + c1 * d0 / (2 * s))
            y1 = d1_**s * (1.0 + c1 * d1_ / (2 * s))
            return y0, y1
        if kind == "infinite":
            kappa = math.sqrt(max(v_end - E, 1e-12))
            y0 = 1e-250
            y1 = y0 * math.exp(min(kappa * h, 500.0))
            return y0, y1
        return 0.0, h  # regular Dirichlet

    def sweep(self, E: float):
        """Outward and inward Numerov solutions, each sup-normalized."""
        f = E - self.vvals
        y0, y1 = self._start_values("left", E)
        yl, ev_i, ev_f, nev = numerov_sweep(f, self.h, y0, y1)
        for k in range(nev):
            yl[: int(ev_i[k]) - 1] *= float(ev_f[k])
        y0, y1 = self._start_values("right", E)
        yr_rev, ev_i, ev_f, nev = numerov_sweep(f[::-1].copy(), self.h, y0, y1)
        for k in range(nev):
            yr_rev[: int(ev_i[k]) - 1] *= float(ev_f[k])
        # scale freedom of a linear equation; keeps matching products away
        # from the underflow floor
        ml = np.max(np.abs(yl))
        mr = np.max(np.abs(yr_rev))
        if ml > 0:
            yl = yl / ml
        if mr > 0:
            yr_rev = yr_rev / mr
        return yl, yr_rev[::-1]

    def node_count(self, E: float) -> int:
        yl, _ = self.sweep(E)
        return int(count_nodes(yl, 1, len(yl) - 1))

    def matching_index(self, E: float) -> int:
        """Classical turning point nearest mid-domain (tie toward middle)."""
        mid = len(self.grid) // 2
        gap = self.vvals - E
        signs = np.sign(gap)
        turn = np.nonzero(np.diff(signs) != 0)[0]
        if len(turn) == 0:
            return mid
        best = min(turn, key=lambda i: abs(int(i) - mid))
        best = int(np.clip(best, 4, len(self.grid) - 5))
        return best

    def wronskian_mismatch(self, E: float, m: Optional[int] = None) -> float:
        """W(E) = y_l y_r' - y_l' y_r at the matching point, scale-normalized."""
        if m is None:
            m = self.matching_index(E)
        yl, yr = self.sweep(E)
        h = self.h
        dl = (yl[m - 2] - 8 * yl[m - 1] + 8 * yl[m + 1] - yl[m + 2]) / (12 * h)
        dr = (yr[m - 2] - 8 * yr[m - 1] + 8 * yr[m + 1] - yr[m + 2]) / (12 * h)
        w = yl[m] * dr - dl * yr[m]
        norm = abs(yl[m] * yr[m]) + abs(dl * yr[m]) + abs(yl[m] * dr)
        return w / norm if norm > 0 else 0.0

    def eigenfunction(self, E: float) -> np.ndarray:
        m = self.matching_index(E)
        yl, yr = self.sweep(E)
        out = np.empty_like(yl)
        if abs(yr[m]) > 0 and abs(yl[m]) > 0:
            out[: m + 1] = yl[: m + 1] / yl[m]
            out[m:] = yr[m:] / yr[m]
        else:
            out = yl
        nrm = np.max(np.abs(out))
        return out / nrm if nrm > 0 else out


def _bracket_by_nodes(box: _Box, n: int, e_lo: float, e_hi: float):
    """Expand/bisect until node counts (<= n, >= n+1) bracket E_n."""
    lo, hi = e_lo, e_hi
    span = max(hi - lo, 1.0)
    for _ in range(80):
        if box.node_count(lo) <= n:
            break
        lo -= span
        span *= 2
    else:
        raise RuntimeError("could not find a lower node bracket")
    span = max(hi - lo, 1.0)
    for _ in range(80):
        if box.node_count(hi) >= n + 1:
            break
        hi += span
        span *= 2
    else:
        raise RuntimeError(f"bracket exhausted before level {n}")
    return lo, hi


def _refine(box: _Box, n: int, lo: float, hi: float, abs_tol: float, floor: float):
    """Locate E_n: node-count bisection isolates the level, the matched
    (Wronskian / log-derivative) zero nearby gives the eigenvalue.

    The node-count jump of the outward sweep lags the matched eigenvalue by
    O(h), so after isolation the sign change of W(E) is hunted in a bracket
    expanding below the jump (never below ``floor``); if no sign change is
    found the node-bisection midpoint is returned (guaranteed fallback).
    """
    iso = max(abs_tol, 1e-7 * max(1.0, abs(lo), abs(hi)))
    for _ in range(260):
        if hi - lo < iso:
            break
        mid = 0.5 * (lo + hi)
        if box.node_count(mid) <= n:
            lo = mid
        else:
            hi = mid
    jump = 0.5 * (lo + hi)
    b = hi
    wb = box.wronskian_mismatch(b)
    d = max(iso, 1e-9 * max(1.0, abs(jump)))
    a = None
    for _ in range(60):
        cand = max(jump - d, floor)
        wa = box.wronskian_mismatch(cand)
        if math.copysign(1.0, wa) != math.copysign(1.0, wb):
            a = cand
            break
        if cand <= floor:
            break
        d *= 4.0
    if a is None:
        return jump
    wa = box.wronskian_mismatch(a)
    for _ in range(200):
        if b - a < abs_tol:
            break
        mid = 0.5 * (a + b)
        wm = box.wronskian_mismatch(mid)
        if wm == 0.0:
            return mid
        if math.copysign(1.0, wm) == math.copysign(1.0, wa):
            a, wa = mid, wm
        else:
            b = mid
    return 0.5 * (a + b)


def shoot_spectrum(
    problem: ShootingProblem,
    n_max: int,
    reverse_convention: bool = False,
) -> list:
    """Bound-state energies E_0..E_n_max of -d^2/dr^2 + V.

    Levels are isolated by node counting of the outward sweep, refined by
    bisection (node count, then the log-derivative/Wronskian matching
    function when it changes sign inside the isolating bracket).  For
    domains truncating an infinite side, the box is doubled until every
    requested eigenvalue moves by less than ``box_tol`` (scaled).
    """
    if problem.bracket is not None:
        e_lo, e_hi = problem.bracket
    else:
        probe = np.linspace(
            problem.left.position
            if math.isfinite(problem.left.position)
            else -10.0,
            problem.right.position
            if math.isfinite(problem.right.position)
            else 10.0,
            512,
        )[1:-1]
        vmin = min(problem.potential(r) for r in probe)
        e_lo, e_hi = vmin - 1.0, vmin + 10.0

    has_infinite = "infinite" in (problem.left.kind, problem.right.kind)
    target = 30.0
    prev = None
    for attempt in range(7):
        box = _Box(problem, E_top=e_hi, target=target)
        energies = []
        lo_guess = e_lo
        floor = e_lo
        for n in range(n_max + 1):
            lo, hi = _bracket_by_nodes(box, n, lo_guess, e_hi)
            scale = max(1.0, abs(lo), abs(hi))
            if reverse_convention:
                # isolate by counting nodes on the inward sweep instead; the
                # physics must not care about the direction convention
                e_n = _refine_reversed(
                    box, n, lo, hi, problem.bisect_tol * scale, floor
                )
            else:
                e_n = _refine(box, n, lo, hi, problem.bisect_tol * scale, floor)
            energies.append(e_n)
            floor = e_n + problem.bisect_tol * scale
            lo_guess = e_n
        if not has_infinite:
            return energies
        if prev is not None:
            move = max(
                abs(a - b) / max(1.0, abs(a)) for a, b in zip(energies, prev)
            )
            if move < problem.box_tol:
                return energies
        prev = energies
        target *= 2.0
    log.warning("box doubling did not fully converge; returning last values")
    return prev


def _refine_reversed(
    box: _Box, n: int, lo: float, hi: float, abs_tol: float, floor: float
):
    """Same refinement isolating with the inward sweep's node count; the
    matched Wronskian zero is direction-symmetric, so both conventions must
    land on the same energy."""
    iso = max(abs_tol, 1e-7 * max(1.0, abs(lo), abs(hi)))
    for _ in range(260):
        if hi - lo < iso:
            break
        mid = 0.5 * (lo + hi)
        _, yr = box.sweep(mid)
        nodes = int(count_nodes(yr[::-1].copy(), 1, len(yr) - 1))
        if nodes <= n:
            lo = mid
        else:
            hi = mid
    jump = 0.5 * (lo + hi)
    b = hi
    wb = box.wronskian_mismatch(b)
    d = max(iso, 1e-9 * max(1.0, abs(jump)))
    a = None
    for _ in range(60):
        cand = max(jump - d, floor)
        wa = box.wronskian_mismatch(cand)
        if math.copysign(1.0, wa) != math.copysign(1.0, wb):
            a = cand
            break
        if cand <= floor:
            break
        d *= 4.0
    if a is None:
        return jump
    wa = box.wronskian_mismatch(a)
    for _ in range(200):
        if b - a < abs_tol:
            break
        mid = 0.5 * (a + b)
        wm = box.wronskian_mismatch(mid)
        if math.copysign(1.0, wm) == math.copysign(1.0, wa):
            a, wa = mid, wm
        else:
            b = mid
    return 0.5 * (a + b)
