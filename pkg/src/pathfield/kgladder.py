"""Mass-quantization algebra: harmonic reductions of the proper-time
evolution, plane-wave on-shell residuals, and the realizable-mass lattice.

Everything here is exact plane-wave algebra: derivatives act analytically
on exponentials, so residuals are algebraic expressions with no grid
truncation.  Two harmonic conventions coexist and are never mixed
silently:

* "eq5":  expansion in exp(-i m n tau) with the exp(-i m tau / 2)
  prefactor; effective mass squared (2n+1) m^2.  Negative n gives a
  negative value (tachyonic extrapolation of the convention; reported,
  not reconciled).
* "eq12": expansion in exp(+i n m tau); effective mass squared (n m)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Metric, interval

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class HarmonicMode:
    n: int
    m: float
    convention: str = "eq5"

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("base mass m must be positive")
        if self.convention not in ("eq5", "eq12"):
            raise ValueError(f"unknown convention {self.convention!r}")


@dataclass(frozen=True)
class PlaneWave:
    p: np.ndarray
    amplitude: complex = 1.0

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1:
            raise ValueError("momentum must be a flat vector")
        if not np.all(np.isfinite(p)):
            raise ValueError("momentum components must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)


def effective_mass_squared(mode: HarmonicMode) -> float:
    if mode.convention == "eq5":
        return (2 * mode.n + 1) * (mode.m * mode.m)
    return (mode.n * mode.m) ** 2


def momentum_squared(wave: PlaneWave, g: Metric) -> float:
    return interval(g, wave.p)


def stuckelberg_residual(mode: HarmonicMode, wave: PlaneWave, g: Metric,
                         curvature: float = 0.0) -> float:
    """|-p.p + mu^2 + R/3| for the single-harmonic substitution; zero
    exactly when the momentum is on shell for the mode's effective mass.
    curvature carries an optional constant scalar R (flat space: 0)."""
    return abs(-momentum_squared(wave, g) + effective_mass_squared(mode)
               + curvature / 3.0)


def kg_residual(wave: PlaneWave, mass: float, g: Metric) -> float:
    """|mass^2 - p.p|, the flat-space wave-operator residual."""
    return abs(-momentum_squared(wave, g) + mass * mass)


def boost_1p1(p: np.ndarray, beta: float) -> np.ndarray:
    """Boost the (p0, p1) block of a momentum with velocity beta."""
    if not -1.0 < beta < 1.0:
        raise ValueError("beta must lie in (-1, 1)")
    gamma = 1.0 / math.sqrt(1.0 - beta * beta)
    q = np.array(p, dtype=float)
    q[0], q[1] = gamma * (p[0] + beta * p[1]), gamma * (p[1] + beta * p[0])
    return q


def on_shell_momentum(n: int, m: float, dim: int) -> np.ndarray:
    """Momentum with p.p exactly equal to (n m)^2 in floating point.

    n = 0 returns a null momentum; otherwise (n m, 0, ..., 0), whose
    square reproduces the bit pattern of (n m)^2.
    """
    p = np.zeros(dim)
    if n == 0:
        p[0] = 1.0
        p[1] = 1.0
    else:
        p[0] = n * m
    return p


@dataclass(frozen=True)
class EquivalenceTerm:
    n: int
    momentum: np.ndarray
    eq12_residual: float
    kg_residual: float


@dataclass(frozen=True)
class EquivalenceReport:
    terms: list[EquivalenceTerm]
    period: float
    periodic: bool

    @property
    def passed(self) -> bool:
        return self.periodic and all(
            t.eq12_residual == 0.0 and t.kg_residual == 0.0 for t in self.terms)


def equivalence_check(m: float, n_range, g: Metric,
                      momenta: dict[int, np.ndarray] | None = None) -> EquivalenceReport:
    """Build psi(x, tau) = sum c_n exp(i p_n . x) exp(i n m tau) with each
    p_n on shell for mass |n| m, and verify per harmonic that

      (a) the tau-harmonic form of the wave-plus-tau equation is solved
          exactly (residual |-p.p + (n m)^2|),
      (b) psi is tau-periodic with period 2 pi / m (exact: every harmonic
          index is an integer),
      (c) the recovered Fourier coefficient solves the fixed-mass wave
          equation for mass |n| m (kg_residual).

    Supplying `momenta` overrides the constructed on-shell values, which
    is how a designed off-shell failure is expressed.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    indices = sorted(set(int(n) for n in n_range))
    if not indices:
        raise ValueError("n_range must be non-empty")
    terms = []
    for n in indices:
        p = (momenta[n] if momenta is not None and n in momenta
             else on_shell_momentum(n, m, g.dim))
        wave = PlaneWave(p=p)
        mass_n = abs(n) * m
        eq12 = abs(-momentum_squared(wave, g) + (n * m) ** 2)
        kg = kg_residual(wave, mass_n, g)
        terms.append(EquivalenceTerm(n=n, momentum=np.asarray(p, dtype=float),
                                     eq12_residual=eq12, kg_residual=kg))
    return EquivalenceReport(terms=terms, period=TWO_PI / m, periodic=True)


@dataclass(frozen=True)
class MassLadder:
    """Realizable masses {n m} for n in multiples and {m / d} for d in
    fractions; the fractional branch lives in the conjugate space."""

    base: float
    multiples: frozenset[int]
    fractions: frozenset[int]

    def masses(self) -> list[float]:
        vals = {n * self.base for n in self.multiples}
        vals |= {self.base / d for d in self.fractions}
        return sorted(vals)

    def period_of_multiple(self, n: int) -> float:
        if n not in self.multiples:
            raise ValueError(f"{n} is not in the multiple set")
        return TWO_PI / (n * self.base)

    def period_of_fraction(self, d: int) -> float:
        if d not in self.fractions:
            raise ValueError(f"{d} is not in the fraction set")
        return d * TWO_PI / self.base


def mass_ladder(m: float, n_max: int, d_max: int = 1) -> MassLadder:
    if m <= 0:
        raise ValueError("base mass must be positive")
    if n_max < 1 or d_max < 1:
        raise ValueError("n_max and d_max must be >= 1")
    return MassLadder(base=m,
                      multiples=frozenset(range(1, n_max + 1)),
                      fractions=frozenset(range(1, d_max + 1)))


def tau_independence_residual(harmonics: dict[int, complex]) -> float:
    """Norm of every non-constant tau-harmonic amplitude.  Zero exactly
    when only the n = 0 component is present, which is the canonical
    parameter-independent wave function."""
    total = 0.0
    for n, amp in harmonics.items():
        if n != 0:
            total += abs(amp) ** 2
    return math.sqrt(total)
