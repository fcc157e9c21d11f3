"""Sign-change isolation and bisection for smooth one-dimensional residuals."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["ScanResolutionError", "isolate_sign_changes", "bisect_root"]


class ScanResolutionError(RuntimeError):
    """Sign-change isolation kept finding new crossings at maximum refinement."""


def _scan(f, lo, hi, n):
    ts = np.linspace(lo, hi, n + 1)
    vs = np.asarray(f(ts), dtype=float)
    if vs.shape != ts.shape:
        raise ValueError("residual callable must evaluate elementwise")
    exact = [float(t) for t, v in zip(ts, vs) if v == 0.0]
    signs = np.sign(vs)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0.0)[0]
    brackets = [
        (float(ts[i]), float(ts[i + 1]), float(vs[i]), float(vs[i + 1]))
        for i in flips
    ]
    return brackets, exact


def isolate_sign_changes(f, lo, hi, samples, refine=4, max_levels=4):
    """Bracket every sign change of ``f`` on [lo, hi].

    ``f`` must map a float ndarray to an ndarray elementwise.  The
    interval is scanned at ``samples`` cells and rescanned ``refine``
    times finer until the number of crossings stops growing; this turns
    the assumption that the scan resolution suffices into a runtime
    check.  Instability at the deepest level raises
    :class:`ScanResolutionError`.

    Returns ``(brackets, exact_zeros)`` where each bracket is a tuple
    ``(a, b, f(a), f(b))`` with a single sign change and exact_zeros
    collects sample points where f vanished identically.
    """
    if not hi > lo:
        raise ValueError(f"empty scan interval [{lo}, {hi}]")
    n = max(int(samples), 2)
    brackets, exact = _scan(f, lo, hi, n)
    for _ in range(max_levels):
        n *= refine
        finer = _scan(f, lo, hi, n)
        if len(finer[0]) + len(finer[1]) == len(brackets) + len(exact):
            return finer
        brackets, exact = finer
    raise ScanResolutionError(
        f"sign-change count on [{lo}, {hi}] still growing at {n} samples"
    )


def bisect_root(f, a, b, fa, fb, tol):
    """Shrink a sign-change bracket until its width is at most 2*tol.

    The width is also floored near machine precision of the midpoint, so
    very small absolute tolerances degrade gracefully to full relative
    precision instead of looping.
    """
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa < 0.0) == (fb < 0.0):
        raise ValueError("bracket endpoints must have opposite signs")
    for _ in range(256):
        mid = 0.5 * (a + b)
        width = b - a
        if width <= 2.0 * tol or width <= 8.0 * math.ulp(mid) or mid <= a or mid >= b:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (fa < 0.0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)
