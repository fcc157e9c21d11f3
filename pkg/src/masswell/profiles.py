"""Well geometry and the catalog of piecewise-constant effective-mass laws.

The potential is an infinite square well: V = 0 on (-L, L) and infinite
outside, so every state obeys psi(-L) = psi(L) = 0.  The effective mass
equals 1 in the outer region a < |x| < L and follows one of the inner
laws below for |x| < a.  Inner laws may depend on the energy and may be
negative.  Units fix hbar^2/2 = 1, so the squared local wavenumber of a
region is simply m * E.

All profile values are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Union

__all__ = [
    "WellGeometry",
    "ConstantInner",
    "TanhInner",
    "StepInner",
    "ScaledInner",
    "InnerLaw",
    "MassProfile",
    "Region",
    "mass_at",
    "local_q2",
]

Region = Literal["inner", "outer"]


@dataclass(frozen=True)
class WellGeometry:
    """Infinite-well half-width ``L`` and inner-region half-width ``a``."""

    L: float
    a: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.a < self.L):
            raise ValueError(f"require 0 < a < L, got a={self.a!r}, L={self.L!r}")


@dataclass(frozen=True)
class ConstantInner:
    """Energy-independent inner mass ``m0``."""

    m0: float = -1.0

    def value(self, energy: float) -> float:
        return self.m0


@dataclass(frozen=True)
class TanhInner:
    """Inner mass -tanh(E): tends to +1 far below E = 0 and to -1 far above."""

    def value(self, energy: float) -> float:
        return -math.tanh(energy)


@dataclass(frozen=True)
class StepInner:
    """Inner mass -1 for E >= e_thr and +1 below the threshold.

    The threshold branch is closed from above: exactly at ``e_thr`` the
    inner mass is -1.
    """

    e_thr: float

    def value(self, energy: float) -> float:
        return -1.0 if energy >= self.e_thr else 1.0


@dataclass(frozen=True)
class ScaledInner:
    """Inner mass -1/b**2 with a constant scale ``b > 0``."""

    b: float

    def __post_init__(self) -> None:
        if not self.b > 0.0:
            raise ValueError(f"require b > 0, got b={self.b!r}")

    def value(self, energy: float) -> float:
        return -1.0 / (self.b * self.b)


InnerLaw = Union[ConstantInner, TanhInner, StepInner, ScaledInner]


@dataclass(frozen=True)
class MassProfile:
    """Symmetric piecewise-constant mass over the well.

    ``outer_mass`` is stored for clarity but pinned to 1: the closed-form
    quantization conditions in :mod:`masswell.secular` assume a unit outer
    mass, so anything else is rejected at construction.
    """

    geometry: WellGeometry
    inner: InnerLaw
    outer_mass: float = 1.0

    def __post_init__(self) -> None:
        if self.outer_mass != 1.0:
            raise ValueError("outer mass is fixed to 1")

    @property
    def threshold(self) -> Optional[float]:
        """Energy where the inner law jumps, if it has one."""
        return self.inner.e_thr if isinstance(self.inner, StepInner) else None


def mass_at(profile: MassProfile, x: float, energy: float) -> float:
    """Effective mass at position ``x`` and energy ``energy``.

    Exactly even in ``x`` because only |x| enters.  The breakpoint
    |x| = a belongs to the outer region; |x| >= L is outside the well
    and raises ``ValueError``.
    """
    r = abs(x)
    if r >= profile.geometry.L:
        raise ValueError(
            f"|x| = {r!r} is outside the open well (L = {profile.geometry.L!r})"
        )
    if r < profile.geometry.a:
        return profile.inner.value(energy)
    return profile.outer_mass


def local_q2(profile: MassProfile, region: Region, energy: float) -> float:
    """Squared local wavenumber m * E of the requested region.

    Positive values select oscillatory solutions, negative values
    hyperbolic ones, and zero the linear limit.
    """
    if region == "inner":
        return profile.inner.value(energy) * energy
    if region == "outer":
        return profile.outer_mass * energy
    raise ValueError(f"unknown region {region!r}")
