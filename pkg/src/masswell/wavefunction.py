"""Piecewise wavefunctions: evaluation, exact node counts, exact integrals.

Every region solution is one of three closed forms in the local
coordinate t = x - x_ref: trig A cos(q t) + B sin(q t), hyperbolic
A cosh(q t) + B sinh(q t), or linear A + B t.  Zeros, extrema and L2
integrals of each form have elementary expressions, so node counting and
localization never rely on sampling; dense sampling appears only in the
test suite as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

__all__ = [
    "RegionSolution",
    "PiecewiseWavefunction",
    "evaluate",
    "count_nodes",
    "localization_fraction",
    "region_zeros",
    "region_abs_max",
    "region_l2",
]

#: relative scale used when deduplicating zeros that meet at region seams
_SEAM_PAD = 1e-9


@dataclass(frozen=True)
class RegionSolution:
    """One closed-form solution piece on the span ``(x_left, x_right)``.

    ``kind`` is "trig", "hyper" or "linear"; ``q`` is the local
    wavenumber (0 for linear).  The value is
    ``a_coef * u(q (x - x_ref)) + b_coef * v(q (x - x_ref))`` with
    (u, v) = (cos, sin), (cosh, sinh) or (1, t).
    """

    kind: str
    q: float
    x_ref: float
    a_coef: float
    b_coef: float
    span: tuple[float, float]

    def __post_init__(self) -> None:
        if self.kind not in ("trig", "hyper", "linear"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if not self.span[0] < self.span[1]:
            raise ValueError(f"empty span {self.span!r}")

    def value(self, x):
        t = np.subtract(x, self.x_ref)
        if self.kind == "trig":
            return self.a_coef * np.cos(self.q * t) + self.b_coef * np.sin(self.q * t)
        if self.kind == "hyper":
            return self.a_coef * np.cosh(self.q * t) + self.b_coef * np.sinh(self.q * t)
        return self.a_coef + self.b_coef * t

    def slope(self, x):
        t = np.subtract(x, self.x_ref)
        if self.kind == "trig":
            return self.q * (
                -self.a_coef * np.sin(self.q * t) + self.b_coef * np.cos(self.q * t)
            )
        if self.kind == "hyper":
            return self.q * (
                self.a_coef * np.sinh(self.q * t) + self.b_coef * np.cosh(self.q * t)
            )
        return self.b_coef * np.ones_like(t)

    def scaled(self, factor: float) -> "RegionSolution":
        return replace(self, a_coef=self.a_coef * factor, b_coef=self.b_coef * factor)

    def reflected(self, parity_sign: float) -> "RegionSolution":
        """Mirror image under x -> -x, multiplied by ``parity_sign``.

        u is even and v odd in every basis, so the coefficients map to
        (s*A, -s*B) with the reference point and span negated.
        """
        return RegionSolution(
            kind=self.kind,
            q=self.q,
            x_ref=-self.x_ref,
            a_coef=parity_sign * self.a_coef,
            b_coef=-parity_sign * self.b_coef,
            span=(-self.span[1], -self.span[0]),
        )


def region_zeros(region: RegionSolution, lo: float, hi: float) -> list[float]:
    """Zeros of the region's closed form strictly inside (lo, hi), ascending."""
    if not hi > lo:
        return []
    a, b, q = region.a_coef, region.b_coef, region.q
    t1 = lo - region.x_ref
    t2 = hi - region.x_ref
    if region.kind == "linear":
        if b == 0.0:
            return []
        t0 = -a / b
        return [t0 + region.x_ref] if t1 < t0 < t2 else []
    if region.kind == "hyper":
        # A cosh + B sinh vanishes only where tanh(q t) = -A/B, so |A| < |B|
        if b == 0.0 or abs(a) >= abs(b):
            return []
        t0 = math.atanh(-a / b) / q
        return [t0 + region.x_ref] if t1 < t0 < t2 else []
    r = math.hypot(a, b)
    if r == 0.0:
        return []
    # A cos + B sin = R cos(q t - phi); zeros at q t - phi = pi/2 + n pi
    phi = math.atan2(b, a)
    n_lo = math.ceil((q * t1 - phi - math.pi / 2.0) / math.pi) - 1
    n_hi = math.floor((q * t2 - phi - math.pi / 2.0) / math.pi) + 1
    zeros = []
    for n in range(n_lo, n_hi + 1):
        t0 = (phi + math.pi / 2.0 + n * math.pi) / q
        if t1 < t0 < t2:
            zeros.append(t0 + region.x_ref)
    return zeros


def region_abs_max(region: RegionSolution) -> float:
    """Exact maximum of |value| over the region span."""
    t1 = region.span[0] - region.x_ref
    t2 = region.span[1] - region.x_ref
    a, b, q = region.a_coef, region.b_coef, region.q
    best = max(abs(float(region.value(region.span[0]))), abs(float(region.value(region.span[1]))))
    if region.kind == "trig":
        r = math.hypot(a, b)
        if r == 0.0:
            return 0.0
        phi = math.atan2(b, a)
        # |R cos(q t - phi)| peaks where q t - phi = n pi
        n_lo = math.ceil((q * t1 - phi) / math.pi)
        n_hi = math.floor((q * t2 - phi) / math.pi)
        if n_hi >= n_lo:
            return r
        return best
    if region.kind == "hyper":
        # interior critical point where tanh(q t) = -B/A
        if a != 0.0 and abs(b) < abs(a):
            t0 = math.atanh(-b / a) / q
            if t1 < t0 < t2:
                best = max(best, abs(float(region.value(t0 + region.x_ref))))
        return best
    return best


def _l2_antiderivative(region: RegionSolution, t: float) -> float:
    a, b, q = region.a_coef, region.b_coef, region.q
    if region.kind == "trig":
        s2 = math.sin(2.0 * q * t)
        c2 = math.cos(2.0 * q * t)
        return (
            0.5 * (a * a + b * b) * t
            + (a * a - b * b) * s2 / (4.0 * q)
            - a * b * c2 / (2.0 * q)
        )
    if region.kind == "hyper":
        sh2 = math.sinh(2.0 * q * t)
        ch2 = math.cosh(2.0 * q * t)
        return (
            0.5 * (a * a - b * b) * t
            + (a * a + b * b) * sh2 / (4.0 * q)
            + a * b * ch2 / (2.0 * q)
        )
    return a * a * t + a * b * t * t + b * b * t ** 3 / 3.0


def region_l2(region: RegionSolution, lo: Optional[float] = None, hi: Optional[float] = None) -> float:
    """Exact integral of value**2 over span intersected with [lo, hi]."""
    x1 = region.span[0] if lo is None else max(lo, region.span[0])
    x2 = region.span[1] if hi is None else min(hi, region.span[1])
    if not x2 > x1:
        return 0.0
    t1 = x1 - region.x_ref
    t2 = x2 - region.x_ref
    return _l2_antiderivative(region, t2) - _l2_antiderivative(region, t1)


@dataclass(frozen=True)
class PiecewiseWavefunction:
    """Solution candidate on (-L, L): ordered regions plus bookkeeping.

    ``norm`` records the L2 norm the regions had before normalization,
    so a normalized state keeps the raw magnitude for diagnostics.
    """

    regions: tuple[RegionSolution, ...]
    parity: str
    energy: float
    norm: float

    def __post_init__(self) -> None:
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")

    @property
    def half_width(self) -> float:
        return -self.regions[0].span[0]

    @property
    def inner_half_width(self) -> float:
        return -self.regions[0].span[1]

    def l2_norm(self) -> float:
        return math.sqrt(sum(region_l2(r) for r in self.regions))

    def normalized(self) -> "PiecewiseWavefunction":
        """Copy rescaled to unit L2 norm on (-L, L)."""
        current = self.l2_norm()
        if current == 0.0:
            raise ValueError("cannot normalize the zero solution")
        factor = 1.0 / current
        return replace(self, regions=tuple(r.scaled(factor) for r in self.regions))


def evaluate(psi: PiecewiseWavefunction, x):
    """Pointwise value of psi; accepts scalars or arrays on [-L, L]."""
    arr = np.asarray(x, dtype=float)
    half = psi.half_width
    if np.any(np.abs(arr) > half):
        raise ValueError(f"position outside [-{half}, {half}]")
    out = np.zeros_like(arr)
    for region in psi.regions:
        mask = (arr >= region.span[0]) & (arr <= region.span[1])
        if np.any(mask):
            out = np.where(mask, region.value(arr), out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def node_positions(psi: PiecewiseWavefunction) -> list[float]:
    """Deduplicated interior zero locations of psi, ascending.

    Zeros are enumerated per region in closed form, with each span padded
    by a hair so a zero sitting exactly on a region seam (or at x = 0 for
    odd states) is seen by both neighbors and then merged into one.  The
    wall zeros at +-L are excluded.
    """
    half = psi.half_width
    pad = _SEAM_PAD * max(1.0, half)
    zeros: list[float] = []
    for region in psi.regions:
        zeros.extend(region_zeros(region, region.span[0] - pad, region.span[1] + pad))
    zeros = sorted(z for z in zeros if abs(z) < half - pad)
    merged: list[float] = []
    for z in zeros:
        if not merged or z - merged[-1] > 4.0 * pad:
            merged.append(z)
    return merged


def count_nodes(psi: PiecewiseWavefunction) -> int:
    """Number of strict sign changes of psi inside the open well (-L, L).

    The candidate locations come from :func:`node_positions`, so they are
    exhaustive; psi keeps one sign on each gap between consecutive
    candidates.  A candidate counts only if the signs on its two gaps
    differ, which discards touching zeros of even multiplicity.
    """
    half = psi.half_width
    zeros = node_positions(psi)
    if not zeros:
        return 0
    probes = [-half] + zeros + [half]
    gap_signs = []
    for left, right in zip(probes, probes[1:]):
        value = evaluate(psi, 0.5 * (left + right))
        gap_signs.append(math.copysign(1.0, value) if value != 0.0 else 0.0)
    count = 0
    for s0, s1 in zip(gap_signs, gap_signs[1:]):
        if s0 != 0.0 and s1 != 0.0 and s0 != s1:
            count += 1
    return count


def localization_fraction(psi: PiecewiseWavefunction, a: Optional[float] = None) -> float:
    """Probability fraction inside |x| < a (defaults to the profile's a).

    Computed from the exact per-region antiderivatives, so the result is
    independent of the overall normalization and always lies in [0, 1].
    """
    if a is None:
        a = psi.inner_half_width
    if not 0.0 < a <= psi.half_width:
        raise ValueError(f"inner half-width {a!r} outside (0, {psi.half_width}]")
    inner = sum(region_l2(r, -a, a) for r in psi.regions)
    total = sum(region_l2(r) for r in psi.regions)
    return inner / total
