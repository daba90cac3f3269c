"""Massless field sector: periodic wave evolution, Fourier mode dynamics,
transversality, time-periodicity quantization k_n = n*omega, and the two
vacuum-energy bookkeeping schemes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import StabilityError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FieldConfig:
    """Sampled vector field on a uniform periodic spatial grid.

    frames has shape (T, C, n1, ..., nd): T time slices of a C-component
    field on a d-dimensional grid with spacing h and time step dt.
    """

    frames: np.ndarray
    spacing: float
    dt: float

    def __post_init__(self):
        fr = np.asarray(self.frames)
        if fr.ndim < 3:
            raise ValueError("frames must be shaped (T, C, n1, ..., nd)")
        if self.spacing <= 0 or self.dt <= 0:
            raise ValueError("spacing and dt must be positive")
        object.__setattr__(self, "frames", fr)

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def n_components(self) -> int:
        return self.frames.shape[1]

    @property
    def spatial_shape(self) -> tuple[int, ...]:
        return self.frames.shape[2:]

    @property
    def spatial_dim(self) -> int:
        return self.frames.ndim - 2

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_frames)


def periodic_laplacian(u: np.ndarray, spacing: float, first_axis: int) -> np.ndarray:
    out = np.zeros_like(u)
    for ax in range(first_axis, u.ndim):
        out += np.roll(u, 1, axis=ax) - 2.0 * u + np.roll(u, -1, axis=ax)
    return out / spacing**2


def wave_solve(initial: np.ndarray, velocity: np.ndarray, spacing: float,
               dt: float, steps: int) -> FieldConfig:
    """Leapfrog evolution of the wave equation u_tt = laplacian(u), every
    component independent, periodic in space.  Refuses to run when dt
    exceeds the stability bound h / sqrt(d)."""
    u0 = np.asarray(initial, dtype=float)
    v0 = np.asarray(velocity, dtype=float)
    if u0.ndim < 2:  # allow a bare scalar field (no component axis)
        u0 = u0[None, ...]
        v0 = v0[None, ...]
    if u0.shape != v0.shape:
        raise ValueError("initial value and derivative shapes differ")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    d = u0.ndim - 1
    limit = spacing / math.sqrt(d)
    if dt > limit * (1.0 + 1e-12):
        raise StabilityError(
            f"dt={dt} violates the stability bound h/sqrt(d)={limit:.6g}")

    frames = np.empty((steps + 1,) + u0.shape)
    frames[0] = u0
    lap = periodic_laplacian(u0, spacing, 1)
    frames[1] = u0 + dt * v0 + 0.5 * dt**2 * lap
    for n in range(1, steps):
        lap = periodic_laplacian(frames[n], spacing, 1)
        frames[n + 1] = 2.0 * frames[n] - frames[n - 1] + dt**2 * lap
    return FieldConfig(frames=frames, spacing=spacing, dt=dt)


def _forward_gradients(u: np.ndarray, spacing: float, first_axis: int):
    for ax in range(first_axis, u.ndim):
        yield (np.roll(u, -1, axis=ax) - u) / spacing


def field_energy(fld: FieldConfig) -> np.ndarray:
    """Discrete energy (dt/2-staggered) of each leapfrog interval:

        E = (h^d / 2) * sum[ ((u+ - u)/dt)^2 + grad(u) . grad(u+) ]

    with forward-difference gradients.  This is the quadrature of
    (d_t u)^2 + |grad u|^2 that leapfrog conserves exactly.
    """
    if fld.n_frames < 2:
        raise ValueError("need at least two frames")
    cell = fld.spacing**fld.spatial_dim
    out = np.empty(fld.n_frames - 1)
    for n in range(fld.n_frames - 1):
        u, up = fld.frames[n], fld.frames[n + 1]
        kin = ((up - u) / fld.dt) ** 2
        pot = np.zeros_like(u)
        for ga, gb in zip(_forward_gradients(u, fld.spacing, 1),
                          _forward_gradients(up, fld.spacing, 1)):
            pot += ga * gb
        out[n] = 0.5 * cell * np.sum(kin + pot)
    return out


def energy_drift(fld: FieldConfig) -> float:
    e = field_energy(fld)
    if e[0] == 0.0:
        return float(np.max(np.abs(e - e[0])))
    return float(np.max(np.abs(e - e[0])) / abs(e[0]))


def dispersion_omega(k: float, spacing: float, dt: float) -> float:
    """Frequency of the discrete standing wave sin(kx) cos(w t) under
    leapfrog with the 3-point Laplacian."""
    s = (dt / spacing) * math.sin(0.5 * k * spacing)
    if abs(s) > 1.0:
        raise StabilityError("mode is outside the stable band")
    return 2.0 / dt * math.asin(s)


@dataclass(frozen=True)
class ModeSet:
    """Spatial Fourier data: wavevector axes (2*pi*fftfreq per axis) and
    complex coefficient trajectories shaped (T, C, m1, ..., md)."""

    k_axes: tuple[np.ndarray, ...]
    coeffs: np.ndarray
    dt: float
    omega: float | None = field(default=None)

    @property
    def n_frames(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n_components(self) -> int:
        return self.coeffs.shape[1]

    @property
    def k_shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[2:]

    def wavevector(self, idx: tuple[int, ...]) -> tuple[float, ...]:
        return tuple(float(ax[i]) for ax, i in zip(self.k_axes, idx))


def decompose(fld: FieldConfig) -> ModeSet:
    """Spatial DFT of every frame and component; for real fields the
    coefficients obey a(-k) = conj(a(k))."""
    axes = tuple(range(2, fld.frames.ndim))
    coeffs = np.fft.fftn(fld.frames, axes=axes) / np.prod(fld.spatial_shape)
    k_axes = tuple(TWO_PI * np.fft.fftfreq(n, d=fld.spacing)
                   for n in fld.spatial_shape)
    return ModeSet(k_axes=k_axes, coeffs=coeffs, dt=fld.dt)


def reconstruct(modes: ModeSet, spacing: float) -> FieldConfig:
    axes = tuple(range(2, modes.coeffs.ndim))
    n_cells = np.prod(modes.k_shape)
    frames = np.fft.ifftn(modes.coeffs * n_cells, axes=axes)
    if np.max(np.abs(frames.imag)) <= 1e-9 * max(np.max(np.abs(frames.real)), 1e-30):
        frames = frames.real
    return FieldConfig(frames=frames, spacing=spacing, dt=modes.dt)


def _k_squared(modes: ModeSet, idx: tuple[int, ...]) -> float:
    return sum(v * v for v in modes.wavevector(idx))


def mode_residual(modes: ModeSet) -> dict[tuple[float, ...], float]:
    """Second-difference residual of a_k'' + k^2 a_k = 0 per wavevector,
    normalized by ||D2 a|| + ||k^2 a|| (so a stationary k != 0 mode scores
    ~1 and an exact oscillator trajectory scores at truncation level)."""
    if modes.n_frames < 3:
        raise ValueError("need at least three frames for a second difference")
    a = modes.coeffs
    d2 = (a[2:] - 2.0 * a[1:-1] + a[:-2]) / modes.dt**2
    out: dict[tuple[float, ...], float] = {}
    for idx in np.ndindex(modes.k_shape):
        k2 = _k_squared(modes, idx)
        sl = (slice(None), slice(None)) + idx
        num = np.linalg.norm(d2[sl] + k2 * a[1:-1][sl])
        den = np.linalg.norm(d2[sl]) + np.linalg.norm(k2 * a[1:-1][sl])
        out[modes.wavevector(idx)] = 0.0 if den == 0.0 else float(num / den)
    return out


def transversality_residual(modes: ModeSet) -> dict[tuple[float, ...], float]:
    """Per k != 0: (|k . a_spatial| + |k| |a_time|) / (|k| ||a||), folded
    over frames.  Zero for a transverse gauge-fixed field."""
    if modes.n_components != 4:
        raise ValueError("transversality check expects 4 components (t, x, y, z)")
    if len(modes.k_axes) != 3:
        raise ValueError("transversality check expects 3 spatial dimensions")
    out: dict[tuple[float, ...], float] = {}
    for idx in np.ndindex(modes.k_shape):
        k = np.array(modes.wavevector(idx))
        kn = np.linalg.norm(k)
        if kn == 0.0:
            continue
        sl = (slice(None),) + idx
        a0 = modes.coeffs[:, 0][sl]
        asp = np.stack([modes.coeffs[:, 1 + i][sl] for i in range(3)])
        total = np.linalg.norm(np.vstack([a0[None, :], asp]))
        if total == 0.0:
            out[modes.wavevector(idx)] = 0.0
            continue
        longitudinal = np.linalg.norm(k @ asp)
        temporal = kn * np.linalg.norm(a0)
        out[modes.wavevector(idx)] = float((longitudinal + temporal) / (kn * total))
    return out


def transverse_project(modes: ModeSet) -> ModeSet:
    """Zero the time component and apply P = I - k k^T / |k|^2 to the
    spatial components of every mode (k = 0 modes are left alone)."""
    if modes.n_components != 4 or len(modes.k_axes) != 3:
        raise ValueError("projector expects 4 components on a 3D grid")
    coeffs = modes.coeffs.copy()
    coeffs[:, 0] = 0.0
    for idx in np.ndindex(modes.k_shape):
        k = np.array(modes.wavevector(idx))
        k2 = float(k @ k)
        if k2 == 0.0:
            continue
        sl = (slice(None),) + idx
        asp = np.stack([coeffs[:, 1 + i][sl] for i in range(3)])
        asp = asp - np.outer(k, k) @ asp / k2
        for i in range(3):
            coeffs[:, 1 + i][sl] = asp[i]
    return ModeSet(k_axes=modes.k_axes, coeffs=coeffs, dt=modes.dt,
                   omega=modes.omega)


def _trajectory(obj) -> tuple[np.ndarray, float]:
    if isinstance(obj, FieldConfig):
        return obj.frames, obj.dt
    if isinstance(obj, ModeSet):
        return obj.coeffs, obj.dt
    raise TypeError("expected a FieldConfig or ModeSet")


def periodicity_residual(obj, omega: float) -> float:
    """||xi(2 pi / omega) - xi(0)|| / ||xi(0)|| with the final slice
    linearly interpolated when the period is not a step multiple."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    frames, dt = _trajectory(obj)
    period = TWO_PI / omega
    span = dt * (frames.shape[0] - 1)
    if span < period * (1.0 - 1e-12):
        raise ValueError(
            f"trajectory covers {span:.6g} < one period {period:.6g}")
    pos = period / dt
    j = min(int(math.floor(pos)), frames.shape[0] - 1)
    frac = pos - j
    if frac <= 1e-12 or j + 1 >= frames.shape[0]:
        final = frames[j]
    else:  # this form is exact whenever the two frames coincide
        final = frames[j] + frac * (frames[j + 1] - frames[j])
    diff = np.linalg.norm(final - frames[0])
    base = np.linalg.norm(frames[0])
    if base == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return float(diff / base)


def pure_mode_trajectory(k: float, omega: float, frames: int = 33) -> ModeSet:
    """Analytic single-mode trajectory a(t) = exp(-i |k| t) sampled over
    exactly one period 2 pi / omega, so the endpoint needs no
    interpolation and the quantization test is free of solver error."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if frames < 2:
        raise ValueError("need at least two frames")
    t = np.linspace(0.0, TWO_PI / omega, frames)
    coeffs = np.exp(-1j * abs(k) * t)[:, None, None]
    return ModeSet(k_axes=(np.array([k]),), coeffs=coeffs,
                   dt=t[1] - t[0], omega=omega)


@dataclass(frozen=True)
class ScanRow:
    k: float
    residual: float
    admissible: bool


def quantized_mode_scan(omega: float, k_max: float, tol: float,
                        k_step: float | None = None,
                        frames: int = 33) -> list[ScanRow]:
    """Sweep candidate wavenumbers 0, k_step, 2 k_step, ... <= k_max and
    keep those whose pure mode returns to its initial value after one
    period.  With the default k_step = omega/4 exactly the integer
    multiples of omega survive any tol below ~sqrt(2)*pi/4."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    step = omega / 4.0 if k_step is None else k_step
    if step <= 0:
        raise ValueError("k_step must be positive")
    rows: list[ScanRow] = []
    j = 0
    while True:
        k = j * step
        if k > k_max * (1.0 + 1e-12):
            break
        res = periodicity_residual(pure_mode_trajectory(k, omega, frames), omega)
        rows.append(ScanRow(k=k, residual=res, admissible=res <= tol))
        j += 1
    return rows


def admissible_wavenumbers(rows: list[ScanRow]) -> list[float]:
    return [r.k for r in rows if r.admissible]


@dataclass(frozen=True)
class EnergySpectrum:
    """Oscillator level bookkeeping.

    scheme "present":  level(n) = n * omega (zero vacuum energy; extends
    oddly to negative n, read as net absorption).
    scheme "standard": level(n) = (n + 1/2) * omega, n >= 0.

    coefficient(n) returns the exact rational multiple of omega, so
    spacing identities can be checked in exact arithmetic.
    """

    scheme: str
    omega: float
    n_max: int

    def __post_init__(self):
        if self.scheme not in ("present", "standard"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")

    def coefficient(self, n: int) -> Fraction:
        if self.scheme == "present":
            return Fraction(n)
        if n < 0:
            raise ValueError("standard scheme has no negative levels")
        return Fraction(2 * n + 1, 2)

    def level(self, n: int) -> float:
        if self.scheme == "present":
            return n * self.omega
        if n < 0:
            raise ValueError("standard scheme has no negative levels")
        return (n + 0.5) * self.omega

    @property
    def levels(self) -> dict[int, float]:
        return {n: self.level(n) for n in range(self.n_max + 1)}


def energy_spectrum(scheme: str, omega: float, n_max: int) -> EnergySpectrum:
    return EnergySpectrum(scheme=scheme, omega=omega, n_max=n_max)


def field_to_text(fld: FieldConfig) -> str:
    """Portable text dump: a shape header then one line per (frame,
    component) with the flattened grid values."""
    shape = " ".join(str(s) for s in fld.frames.shape)
    lines = [f"# shape {shape} spacing {fld.spacing!r} dt {fld.dt!r}"]
    flat = fld.frames.reshape(fld.n_frames, fld.n_components, -1)
    for t in range(fld.n_frames):
        for c in range(fld.n_components):
            lines.append(" ".join(repr(float(v)) for v in flat[t, c]))
    return "\n".join(lines) + "\n"


def field_from_text(text: str) -> FieldConfig:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# shape"):
        raise ValueError("missing shape header")
    head = lines[0].split()
    tail = head[2:]
    if "spacing" not in tail or "dt" not in tail:
        raise ValueError("malformed header")
    si = tail.index("spacing")
    shape = tuple(int(v) for v in tail[:si])
    spacing = float(tail[si + 1])
    dt = float(tail[tail.index("dt") + 1])
    rows = [np.array([float(v) for v in ln.split()]) for ln in lines[1:]]
    if len(rows) != shape[0] * shape[1]:
        raise ValueError("row count does not match the header shape")
    frames = np.vstack(rows).reshape(shape)
    return FieldConfig(frames=frames, spacing=spacing, dt=dt)
