"""Finite-difference oscillator spectra.

Three stationary problems on a uniform q-grid with Dirichlet walls:

* non-relativistic:  (1/2)(-d2/dq2 + eta q^2) psi = E psi
* relativistic:      (E - eta q^2 / 2)^2 psi + psi'' = psi
* curvature-corrected: same left side, right side [1 - R(q)/3] psi with
  R(q) = (eta q^2)^2 / 2.

The quadratic problems are linearized to the companion form acting on
(psi, E psi) and solved densely; returned pairs are residual-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import NumericalError
from .grid import Grid1D

#: residual ceiling enforced on every returned quadratic eigenpair
RESIDUAL_TOL = 1e-8

#: reality filter for companion eigenvalues
_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class Hamiltonian1D:
    """Symmetric tridiagonal -(1/2m) d2/dq2 + V(q) with Dirichlet walls."""

    grid: Grid1D
    potential: np.ndarray
    mass: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.potential, dtype=float)
        if v.shape != (self.grid.points,):
            raise ValueError("potential length must match the grid")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "potential", v)

    @property
    def kinetic_coefficient(self) -> float:
        return 1.0 / (2.0 * self.mass * self.grid.spacing**2)

    def diagonal(self) -> np.ndarray:
        return 2.0 * self.kinetic_coefficient + self.potential

    def offdiagonal(self) -> np.ndarray:
        return np.full(self.grid.points - 1, -self.kinetic_coefficient)

    def matrix(self) -> np.ndarray:
        h = np.diag(self.diagonal())
        off = self.offdiagonal()
        h += np.diag(off, 1) + np.diag(off, -1)
        return h


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    scheme: str
    eta: float
    grid: Grid1D
    vectors: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.size > self.grid.points:
            raise ValueError("more eigenvalues than grid points")
        if ev.size > 1 and not np.all(np.diff(ev) > 0):
            raise ValueError("eigenvalues must be strictly ascending")
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)


def harmonic_hamiltonian(eta: float, grid: Grid1D) -> Hamiltonian1D:
    q = grid.coordinates()
    return Hamiltonian1D(grid=grid, potential=0.5 * eta * q**2)


def schrodinger_spectrum(eta: float, grid: Grid1D, count: int,
                         vectors: bool = False) -> Spectrum:
    """Lowest eigenvalues of (1/2)(-d2 + eta q^2); converges to
    (n + 1/2) sqrt(eta) as the grid is refined."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    if not 1 <= count <= grid.points:
        raise ValueError(f"count must be in [1, {grid.points}], got {count}")
    ham = harmonic_hamiltonian(eta, grid)
    if vectors:
        vals, vecs = linalg.eigh_tridiagonal(
            ham.diagonal(), ham.offdiagonal(), select="i",
            select_range=(0, count - 1))
        return Spectrum(vals, "schrodinger", eta, grid, vectors=vecs)
    vals = linalg.eigh_tridiagonal(
        ham.diagonal(), ham.offdiagonal(), select="i",
        select_range=(0, count - 1), eigvals_only=True)
    return Spectrum(vals, "schrodinger", eta, grid)


def curvature_scalar(eta: float, q) -> float:
    """Scalar curvature of the oscillator's compactified construction,
    R(q) = (eta q^2)^2 / 2; vanishes at the origin, so the curvature
    correction leaves the potential floor untouched."""
    return (eta * np.asarray(q) ** 2) ** 2 / 2.0


def kg_window_grid(eta: float, points: int = 401, margin: float = 0.8) -> Grid1D:
    """Default grid for the quadratic problems.

    The half-width is margin * sqrt(2/eta), the largest window on which
    the potential stays below the rest energy, so the lower branch cannot
    turn oscillatory and pollute the positive spectrum.  For eta = 0 the
    potential is flat and a fixed wide box is returned.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if not 0 < margin < 1:
        raise ValueError("margin must lie in (0, 1)")
    half = 20.0 if eta == 0.0 else min(margin * np.sqrt(2.0 / eta), 60.0)
    return Grid1D(-half, half, points)


def _second_difference(grid: Grid1D) -> np.ndarray:
    n = grid.points
    h2 = grid.spacing**2
    d2 = np.diag(np.full(n, -2.0 / h2))
    off = np.full(n - 1, 1.0 / h2)
    d2 += np.diag(off, 1) + np.diag(off, -1)
    return d2


def _quadratic_spectrum(eta: float, grid: Grid1D, count: int, scheme: str,
                        curvature: bool, negative: bool) -> Spectrum:
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if not 1 <= count <= grid.points:
        raise ValueError(f"count must be in [1, {grid.points}], got {count}")
    q = grid.coordinates()
    v = 0.5 * eta * q**2
    edge = max(v[0], v[-1])
    if edge >= 1.0:
        raise ValueError(
            f"potential reaches {edge:.3f} >= 1 at the grid edge; restrict the "
            "grid to the single-particle window (see kg_window_grid)")

    n = grid.points
    rhs = np.ones(n)
    if curvature:
        rhs = rhs - curvature_scalar(eta, q) / 3.0
    k_mat = _second_difference(grid) + np.diag(v**2 - rhs)
    c_diag = -eta * q**2

    companion = np.zeros((2 * n, 2 * n))
    companion[:n, n:] = np.eye(n)
    companion[n:, :n] = -k_mat
    companion[n:, n:] = np.diag(-c_diag)
    vals, vecs = linalg.eig(companion)

    real = np.abs(vals.imag) <= _IMAG_TOL * (1.0 + np.abs(vals.real))
    side = vals.real < 0 if negative else vals.real > 0
    idx = np.flatnonzero(real & side)
    if idx.size < count:
        raise NumericalError(
            f"{scheme}: only {idx.size} real {'negative' if negative else 'positive'} "
            f"eigenvalues found, {count} requested (eta={eta}, points={n})")
    # order by |E| so the negative branch mirrors the positive one
    idx = idx[np.argsort(np.abs(vals.real[idx]))][:count]

    energies = vals.real[idx]
    psis = vecs[:n, idx].real
    for j, e in enumerate(energies):
        psi = psis[:, j]
        op = np.diag((e - v) ** 2) + _second_difference(grid) - np.diag(rhs)
        res = np.linalg.norm(op @ psi) / np.linalg.norm(psi)
        if res > RESIDUAL_TOL:
            raise NumericalError(
                f"{scheme}: eigenpair E={e:.6g} fails the residual check "
                f"({res:.3e} > {RESIDUAL_TOL:.0e})")

    order = np.argsort(energies)
    return Spectrum(energies[order], scheme, eta, grid, vectors=psis[:, order])


def kg_oscillator_spectrum(eta: float, grid: Grid1D, count: int,
                           negative_branch: bool = False) -> Spectrum:
    """Smallest-|E| solutions of (E - eta q^2/2)^2 psi + psi'' = psi.

    By default the E > 0 branch is returned; negative_branch selects the
    E < 0 mirror family instead.
    """
    return _quadratic_spectrum(eta, grid, count, "kg", curvature=False,
                               negative=negative_branch)


def kk_oscillator_spectrum(eta: float, grid: Grid1D, count: int,
                           negative_branch: bool = False) -> Spectrum:
    """Same quadratic problem with the right side 1 - R(q)/3,
    R(q) = (eta q^2)^2 / 2."""
    return _quadratic_spectrum(eta, grid, count, "kk", curvature=True,
                               negative=negative_branch)


@dataclass(frozen=True)
class LimitRow:
    eta: float
    max_rel_deviation: float


def schrodinger_reference_grid(eta: float, points: int = 1501) -> Grid1D:
    """Grid wide enough for the first few non-relativistic levels."""
    half = min(10.0 / eta**0.25, 40.0)
    return Grid1D(-half, half, points)


def nonrel_limit_report(eta_list, count: int = 4,
                        kg_points: int = 401) -> list[LimitRow]:
    """Per eta: max over the lowest `count` levels of
    |E_kg - 1 - E_schrodinger| / E_schrodinger.

    The deviation shrinks as eta does, which is the non-relativistic
    reduction made quantitative.
    """
    etas = list(eta_list)
    if not etas:
        raise ValueError("eta_list must be non-empty")
    if any(e <= 0 for e in etas):
        raise ValueError("eta values must be positive")
    if any(b >= a for a, b in zip(etas, etas[1:])):
        raise ValueError("eta_list must be strictly descending")
    rows = []
    for eta in etas:
        ek = kg_oscillator_spectrum(eta, kg_window_grid(eta, kg_points), count)
        es = schrodinger_spectrum(eta, schrodinger_reference_grid(eta), count)
        dev = np.abs(ek.eigenvalues - 1.0 - es.eigenvalues) / es.eigenvalues
        rows.append(LimitRow(eta=eta, max_rel_deviation=float(np.max(dev))))
    return rows
