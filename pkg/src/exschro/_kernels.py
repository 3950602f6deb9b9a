"""Hot numeric kernels: Numerov sweeps and node counting.

The three-term Numerov recursion is inherently sequential, so numpy cannot
vectorize it; the kernels below are JIT-compiled with numba when available.
Set ``EXSCHRO_DISABLE_NUMBA=1`` (or install without numba) to force the pure
Python reference path -- identical semantics, just slower.  Both variants are
importable directly (``numerov_sweep_python`` / ``numerov_sweep_jit``) so the
benchmark in ``benchmarks/bench_numerov.py`` can time them side by side.
"""

from __future__ import annotations

import os

import numpy as np

_RESCALE_LIMIT = 1e250
_MAX_EVENTS = 128


def _numerov_core(f, h, y0, y1):
    """Integrate y'' = -f(r) y over a uniform grid (y_{i} given f_i).

    Recursion: y_{i+1} = [2 y_i (1 - 5 c f_i) - y_{i-1} (1 + c f_{i-1})]
                         / (1 + c f_{i+1}),  c = h^2/12.

    When |y| exceeds 1e250 the running pair is rescaled and the event is
    recorded; the caller re-unifies the scale.  Returns
    (y, event_indices, event_factors, n_events).
    """
    n = f.shape[0]
    y = np.empty(n, dtype=np.float64)
    ev_idx = np.empty(_MAX_EVENTS, dtype=np.int64)
    ev_fac = np.empty(_MAX_EVENTS, dtype=np.float64)
    nev = 0
    c = h * h / 12.0
    y[0] = y0
    y[1] = y1
    for i in range(1, n - 1):
        num = 2.0 * y[i] * (1.0 - 5.0 * c * f[i]) - y[i - 1] * (1.0 + c * f[i - 1])
        den = 1.0 + c * f[i + 1]
        yi = num / den
        y[i + 1] = yi
        ay = abs(yi)
        if ay > _RESCALE_LIMIT:
            s = 1.0 / ay
            y[i + 1] *= s
            y[i] *= s
            if nev < _MAX_EVENTS:
                ev_idx[nev] = i + 1
                ev_fac[nev] = s
            nev += 1
    return y, ev_idx, ev_fac, nev


def _count_nodes_core(y, start, stop):
    """Strict sign changes of y on the index window [start, stop).

    Signs are compared directly (products of tiny amplitudes underflow to
    zero and would hide nodes); exact zeros are skipped.
    """
    count = 0
    prev_neg = y[start] < 0.0
    prev_set = y[start] != 0.0
    for i in range(start + 1, stop):
        cur = y[i]
        if cur != 0.0:
            cur_neg = cur < 0.0
            if prev_set and (cur_neg != prev_neg):
                count += 1
            prev_neg = cur_neg
            prev_set = True
    return count


def _env_disabled() -> bool:
    return os.environ.get("EXSCHRO_DISABLE_NUMBA", "").strip().lower() in {
        "1",
        "true",
        "yes",
        "on",
    }


numerov_sweep_python = _numerov_core
count_nodes_python = _count_nodes_core

try:
    import numba

    numerov_sweep_jit = numba.njit(cache=True)(_numerov_core)
    count_nodes_jit = numba.njit(cache=True)(_count_nodes_core)
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    numerov_sweep_jit = None
    count_nodes_jit = None
    NUMBA_AVAILABLE = False

NUMBA_ENABLED = NUMBA_AVAILABLE and not _env_disabled()

if NUMBA_ENABLED:
    numerov_sweep = numerov_sweep_jit
    count_nodes = count_nodes_jit
else:
    numerov_sweep = numerov_sweep_python
    count_nodes = count_nodes_python
