"""Scenario-level spectral reports, threshold staircases and the delta limit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._rootscan import isolate_sign_changes
from .matching import build_solution, eigenvalues, mismatch
from .profiles import ConstantInner, MassProfile, WellGeometry
from .secular import (
    DEFAULT_TOL,
    ConstantNegNeg,
    ConstantNegPos,
    RootWindow,
    TwoParamNeg,
    find_roots,
    reduced_kappa1,
)
from .wavefunction import count_nodes, localization_fraction

__all__ = [
    "Level",
    "Verdict",
    "SpectrumReport",
    "StaircaseStep",
    "DeltaLimitRow",
    "run_scenario",
    "ground_state_staircase",
    "delta_limit_study",
]

# growth-probe windows in kappa for the boundedness verdict; the evidence
# inequality itself is fixed, only these probe sizes are a choice
PROBE_KAPPA_SMALL = 10.0
PROBE_KAPPA_LARGE = 40.0


@dataclass(frozen=True)
class Level:
    energy: float
    parity: str
    nodes: int
    localization: float


@dataclass(frozen=True)
class Verdict:
    """Boundedness-below call: 'bounded_below', 'unbounded_below' or 'empty'.

    An unbounded verdict always carries the root-count growth evidence
    that justified it; no finite computation proves unboundedness, so the
    evidence is stored rather than the claim alone.
    """

    kind: str
    evidence: Optional[dict] = None


@dataclass(frozen=True)
class SpectrumReport:
    scenario: str
    profile: MassProfile
    window: tuple[float, float]
    parities: tuple[str, ...]
    levels: tuple[Level, ...]
    verdict: Verdict


@dataclass(frozen=True)
class StaircaseStep:
    beta: float
    negative_count: int
    ground_state_nodes: int


@dataclass(frozen=True)
class DeltaLimitRow:
    nu: float
    a: float
    b: float
    leftmost_root: float
    second_root: float
    reduced_fixed_point: float


def _negative_level_count(profile: MassProfile, parity: str, kappa_hi: float) -> int:
    """Number of negative-energy levels with kappa = sqrt(-E) in (0, kappa_hi]."""
    thr = profile.threshold
    beta = math.sqrt(-thr) if thr is not None and thr < 0.0 else None
    bounds = [1e-6, kappa_hi]
    if beta is not None and bounds[0] < beta < kappa_hi:
        # kappa <= beta sits on the negative-mass side of the step
        bounds = [1e-6, beta, kappa_hi]

    def f_vec(kaps):
        return np.array(
            [mismatch(profile, -float(k) * float(k), parity) for k in np.atleast_1d(kaps)]
        )

    total = 0
    for i, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
        if i > 0:
            lo = lo + 1e-13 * max(1.0, lo)
        samples = max(64, int((hi - lo) / 0.05))
        brackets, exact = isolate_sign_changes(f_vec, lo, hi, samples=samples)
        total += len(brackets) + len(exact)
    return total


def _boundedness_verdict(profile: MassProfile, parities: Sequence[str], have_levels: bool) -> Verdict:
    k1, k2 = PROBE_KAPPA_SMALL, PROBE_KAPPA_LARGE
    c1 = sum(_negative_level_count(profile, p, k1) for p in parities)
    c2 = sum(_negative_level_count(profile, p, k2) for p in parities)
    required = math.floor((k2 - k1) / math.pi) - 1
    if c2 - c1 >= required:
        return Verdict(
            "unbounded_below",
            evidence={
                "kappa_window_small": k1,
                "count_small": c1,
                "kappa_window_large": k2,
                "count_large": c2,
                "required_growth": required,
            },
        )
    if not have_levels:
        return Verdict("empty")
    return Verdict("bounded_below")


def run_scenario(
    profile: MassProfile,
    window: tuple[float, float],
    parities: Sequence[str] = ("even", "odd"),
    tol: float = DEFAULT_TOL,
    scenario: str = "",
) -> SpectrumReport:
    """Enumerate the spectrum in the window and attach per-level diagnostics.

    Negative energies below a step threshold are handled by the honest
    energy dependence of the mass itself: below the threshold the inner
    mass is +1 and the matching solver finds nothing there, which is the
    admissibility cut kappa <= beta in disguise.
    """
    levels: list[Level] = []
    for parity in parities:
        for energy, psi in eigenvalues(profile, window, parity, tol=tol):
            levels.append(
                Level(
                    energy=energy,
                    parity=parity,
                    nodes=count_nodes(psi),
                    localization=localization_fraction(psi),
                )
            )
    levels.sort(key=lambda lv: lv.energy)
    verdict = _boundedness_verdict(profile, parities, bool(levels))
    return SpectrumReport(
        scenario=scenario or _profile_label(profile),
        profile=profile,
        window=(float(window[0]), float(window[1])),
        parities=tuple(parities),
        levels=tuple(levels),
        verdict=verdict,
    )


def _profile_label(profile: MassProfile) -> str:
    inner = profile.inner
    name = type(inner).__name__
    geo = profile.geometry
    return f"{name} L={geo.L:g} a={geo.a:g}"


def ground_state_staircase(
    L: float,
    beta_max: float,
    steps: int,
    tol: float = DEFAULT_TOL,
) -> list[StaircaseStep]:
    """Admissible negative-level count and ground-state node count along beta.

    Uses the canonical inner half-width a = 1.  The admissibility rule is
    kappa <= beta with the boundary admitted, so counts jump exactly at
    the critical beta values.  For beta below the first critical value
    the ground state is the lowest positive-energy state.
    """
    if not beta_max > 0.0:
        raise ValueError(f"require beta_max > 0, got {beta_max!r}")
    if steps < 1:
        raise ValueError(f"require steps >= 1, got {steps!r}")
    geometry = WellGeometry(L, 1.0)
    neg_roots = find_roots(ConstantNegNeg(geometry), RootWindow(0.0, beta_max, tol=tol))

    # below threshold and at positive energy the step model has inner mass -1
    frozen_profile = MassProfile(geometry, ConstantInner(-1.0))
    k_first = find_roots(
        ConstantNegPos(geometry), RootWindow(0.0, 2.0 * math.pi / (L - 1.0), tol=tol)
    )[0]
    positive_ground_nodes = count_nodes(
        build_solution(frozen_profile, k_first * k_first, "even").normalized()
    )

    nodes_at_root: dict[float, int] = {}
    rows: list[StaircaseStep] = []
    for i in range(1, steps + 1):
        beta = beta_max * i / steps
        admissible = [r for r in neg_roots if r <= beta]
        if admissible:
            kappa_low = admissible[-1]
            if kappa_low not in nodes_at_root:
                psi = build_solution(frozen_profile, -kappa_low * kappa_low, "even")
                nodes_at_root[kappa_low] = count_nodes(psi.normalized())
            nodes = nodes_at_root[kappa_low]
        else:
            nodes = positive_ground_nodes
        rows.append(StaircaseStep(beta=beta, negative_count=len(admissible), ground_state_nodes=nodes))
    return rows


def delta_limit_study(
    b_over_nu: float,
    L: float,
    nus: Sequence[float],
    tol: float = 1e-10,
) -> list[DeltaLimitRow]:
    """Track the two lowest kappa roots of the full two-parameter equation
    along the deep-narrow sequence nu -> 0 at fixed b/nu.

    Each nu gives (a, b) = (b_over_nu * nu**2, b_over_nu * nu).  The
    leftmost root converges to the reduced fixed point while the second
    root grows like pi/nu and escapes to infinity.
    """
    if not b_over_nu > 0.0:
        raise ValueError(f"require b/nu > 0, got {b_over_nu!r}")
    kappa1 = reduced_kappa1(b_over_nu, L, tol=min(tol, DEFAULT_TOL))
    rows: list[DeltaLimitRow] = []
    for nu in nus:
        if not nu > 0.0:
            raise ValueError(f"require nu > 0, got {nu!r}")
        b = b_over_nu * nu
        a = nu * b
        if not a < L:
            raise ValueError(f"inner half-width a = {a!r} does not fit inside L = {L!r}")
        branch = TwoParamNeg(WellGeometry(L, a), b=b, nu=nu)
        hi = 1.45 * math.pi / nu
        roots = find_roots(branch, RootWindow(0.0, hi, tol=tol))
        if len(roots) < 2:
            raise RuntimeError(
                f"expected at least two roots below {hi!r} for nu = {nu!r}, found {len(roots)}"
            )
        rows.append(
            DeltaLimitRow(
                nu=nu,
                a=a,
                b=b,
                leftmost_root=roots[0],
                second_root=roots[1],
                reduced_fixed_point=kappa1,
            )
        )
    return rows
