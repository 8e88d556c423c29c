"""Half-period segmentation with repeated averaging for slowly decaying
oscillatory integrals ``int_{y0}^inf amp(y) trig(phase(y)) dy``.

The tail is cut at successive points where ``phase`` crosses a zero of the
trigonometric factor. The partial sums over those half periods form an
alternating sequence; repeated neighbour averaging (the Euler transform in
its van Wijngaarden form) then removes the oscillation. For amplitudes that
tend to a non-zero constant the same averaging returns the Abel-summed value,
which is the meaning given to such integrals in the spectral formulas.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _segment_integrals(f, pts):
    a = pts[:-1, None]
    h = 0.5 * (pts[1:, None] - a)
    x = a + h * (1.0 + _GL_NODES[None, :])
    return (h[:, 0]) * (f(x) @ _GL_WEIGHTS)


def _crossings(phase, dphase, y0, targets, increasing):
    pts = np.empty(len(targets) + 1)
    pts[0] = y = y0
    for i, c in enumerate(targets):
        g = (lambda yy, c=c: phase(yy) - c) if increasing else (lambda yy, c=c: c - phase(yy))
        step = math.pi / max(abs(dphase(y)), 1e-300)
        hi = y + step
        while g(hi) < 0.0:
            step *= 2.0
            hi = y + step
        y = optimize.brentq(g, y, hi, xtol=1e-15 * max(1.0, y), rtol=1e-15)
        pts[i + 1] = y
    return pts


def _averaged(partial, levels):
    prev = cur = partial
    for _ in range(levels):
        prev, cur = cur, 0.5 * (cur[1:] + cur[:-1])
    return cur[-1], abs(cur[-1] - prev[-1])


def oscillatory_tail(amp, phase, dphase, kind, y0, tol, max_segments, levels=20):
    """Integrate ``amp * cos(phase)`` (kind='cos') or ``amp * sin(phase)``
    from ``y0`` to infinity. ``phase`` must be strictly monotone on
    ``[y0, inf)``.

    Returns ``(value, est_error, converged)``.
    """
    increasing = dphase(y0) > 0
    sgn = 1.0 if increasing else -1.0
    offset = 0.5 * math.pi if kind == "cos" else 0.0
    trig = np.cos if kind == "cos" else np.sin
    f = lambda y: amp(y) * trig(phase(y))  # noqa: E731

    p0 = sgn * phase(y0)
    first = math.floor((p0 - offset) / math.pi) + 1
    nseg = 40
    pts = np.array([y0])
    best = (math.nan, math.inf)
    while True:
        total = nseg + levels
        need = total - (len(pts) - 1)
        if need > 0:
            start = first + len(pts) - 1
            targets = sgn * (offset + math.pi * np.arange(start, start + need))
            more = _crossings(phase, dphase, pts[-1], targets, increasing)
            pts = np.concatenate([pts, more[1:]])
        partial = np.cumsum(_segment_integrals(f, pts[: total + 1]))[nseg - 1:]
        value, err = _averaged(partial, levels)
        # averaging cannot resolve below the rounding of the partial sums
        err = max(err, 4.0 * np.finfo(float).eps * float(np.max(np.abs(partial))))
        if err < best[1]:
            best = (value, err)
        if err <= tol(value):
            return value, err, True
        if 2 * nseg + levels > max_segments:
            return best[0], best[1], False
        nseg *= 2
