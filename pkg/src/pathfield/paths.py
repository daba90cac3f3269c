"""Polygonal spacetime paths, their actions, and the action-quantization
filter S = 2*pi*n.

Paths are immutable: the event and parameter arrays are frozen after
construction, so values can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CausalityError
from .geometry import Metric

TWO_PI = 2.0 * math.pi

# Tiny negative intervals from roundoff on null segments are clamped to zero.
_NULL_SLACK = 1e-12


@dataclass(frozen=True)
class Path:
    """Ordered vertices (events) with strictly increasing parameter values."""

    events: np.ndarray  # (V, N)
    params: np.ndarray  # (V,)

    def __post_init__(self):
        ev = np.asarray(self.events, dtype=float)
        pa = np.asarray(self.params, dtype=float)
        if ev.ndim != 2 or ev.shape[0] < 2:
            raise ValueError("a path needs at least two vertices of equal dimension")
        if pa.shape != (ev.shape[0],):
            raise ValueError("params length must match the number of vertices")
        if not np.all(np.diff(pa) > 0):
            raise ValueError("params must be strictly increasing")
        ev.setflags(write=False)
        pa.setflags(write=False)
        object.__setattr__(self, "events", ev)
        object.__setattr__(self, "params", pa)

    @property
    def n_vertices(self) -> int:
        return self.events.shape[0]

    @property
    def dim(self) -> int:
        return self.events.shape[1]


@dataclass(frozen=True)
class ActionModel:
    """Action functional selector.

    kind "arc_length": S = m * signed proper time (mass times arc length).
    kind "free_alt":   S = sum over segments of m*(v.v + 1)/2 * dtau with
                       finite-difference velocities v.
    kind "rel_ho":     free_alt plus the oscillator coupling
                       (eta/2) * q^2 * v0 evaluated at segment midpoints,
                       q being coordinate 1.
    """

    kind: str
    m: float = 1.0
    eta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("arc_length", "free_alt", "rel_ho"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.m <= 0:
            raise ValueError("mass-like invariant m must be positive")
        if self.eta < 0:
            raise ValueError("oscillator stiffness eta must be >= 0")


def arc_length_action(m: float) -> ActionModel:
    return ActionModel("arc_length", m=m)


def free_alt_action(m: float) -> ActionModel:
    return ActionModel("free_alt", m=m)


def rel_ho_action(eta: float, m: float = 1.0) -> ActionModel:
    return ActionModel("rel_ho", m=m, eta=eta)


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    nearest_n: int
    deviation: float


def _segment_intervals(path: Path, g: Metric) -> np.ndarray:
    if path.dim != g.dim:
        raise ValueError(f"path dimension {path.dim} != metric dimension {g.dim}")
    dx = np.diff(path.events, axis=0)
    s2 = (dx * dx) @ g.signs
    bad = s2 < -_NULL_SLACK * np.maximum(1.0, (dx * dx).sum(axis=1))
    if np.any(bad):
        k = int(np.argmax(bad))
        raise CausalityError(
            f"segment {k} is spacelike (interval {s2[k]:.3e}); "
            "arc-length actions need timelike or null segments"
        )
    return np.maximum(s2, 0.0)


def proper_time(path: Path, g: Metric) -> float:
    """Total proper time: sum over segments of sqrt(interval)."""
    return float(np.sum(np.sqrt(_segment_intervals(path, g))))


def action(path: Path, model: ActionModel, g: Metric) -> float:
    """Action of a polygonal path under the chosen model.

    Arc-length actions are signed per monotonic segment: a segment
    traversed backwards in coordinate time contributes with a minus sign,
    which is exactly the sum-over-monotonic-segments rule and makes the
    winding number odd under path reversal.
    """
    if model.kind == "arc_length":
        s2 = _segment_intervals(path, g)
        sgn = np.where(np.diff(path.events[:, 0]) >= 0.0, 1.0, -1.0)
        return float(model.m * np.sum(sgn * np.sqrt(s2)))

    dx = np.diff(path.events, axis=0)
    dtau = np.diff(path.params)
    v = dx / dtau[:, None]
    vv = (v * v) @ g.signs
    lagr = 0.5 * model.m * (vv + 1.0)
    if model.kind == "rel_ho":
        qmid = 0.5 * (path.events[:-1, 1] + path.events[1:, 1])
        lagr = lagr + 0.5 * model.eta * qmid**2 * v[:, 0]
    return float(np.sum(lagr * dtau))


def is_admissible(path: Path, model: ActionModel, g: Metric, tol: float) -> AdmissibilityReport:
    """Quantization filter: admissible iff the action is within tol of an
    integer multiple of 2*pi.  tol must lie in (0, pi]."""
    if not 0.0 < tol <= math.pi:
        raise ValueError(f"tolerance must lie in (0, pi], got {tol}")
    s = action(path, model, g)
    n = int(round(s / TWO_PI))
    dev = abs(s - TWO_PI * n)
    return AdmissibilityReport(admissible=dev <= tol, nearest_n=n, deviation=dev)


def translate_parameter(path: Path, dtau: float) -> Path:
    """Shift every parameter value by dtau; events are untouched."""
    return Path(events=path.events, params=path.params + dtau)


def reverse(path: Path) -> Path:
    """Traverse the path backwards.  Parameters are reflected so they stay
    strictly increasing over the same span."""
    p = path.params
    return Path(events=path.events[::-1].copy(), params=(p[0] + p[-1]) - p[::-1])


def sample_paths(seed: int, count: int, segments: int, g: Metric,
                 envelope: float = 1.0) -> list[Path]:
    """Deterministic ensemble of timelike polygonal paths, arc-length
    parameterized (params accumulate per-segment proper time).

    Per-path streams are seeded from (seed, index), so the ensemble is
    identical no matter how generation is partitioned across workers.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if segments < 1:
        raise ValueError("segments must be >= 1")
    if envelope <= 0:
        raise ValueError("envelope must be positive")
    sdim = g.dim - 1
    out = []
    for i in range(count):
        rng = np.random.default_rng((seed, i))
        dxs = rng.uniform(-envelope, envelope, size=(segments, sdim))
        pad = rng.uniform(0.05, 1.0, size=segments) * envelope
        spatial = np.sqrt(np.sum(dxs * dxs, axis=1))
        dts = spatial + pad
        steps = np.column_stack([dts, dxs])
        events = np.vstack([np.zeros(g.dim), np.cumsum(steps, axis=0)])
        dtau = np.sqrt(dts * dts - spatial * spatial)
        params = np.concatenate([[0.0], np.cumsum(dtau)])
        out.append(Path(events=events, params=params))
    return out


def admissible_fraction(ensemble: list[Path], model: ActionModel, g: Metric,
                        tol: float) -> float:
    """Fraction of the ensemble passing the quantization filter."""
    if not ensemble:
        raise ValueError("admissible_fraction needs a non-empty ensemble")
    hits = sum(is_admissible(p, model, g, tol).admissible for p in ensemble)
    return hits / len(ensemble)


def path_to_text(path: Path) -> str:
    """Serialize: one vertex per line as `tau x0 x1 ... x{N-1}`."""
    lines = []
    for tau, ev in zip(path.params, path.events):
        lines.append(" ".join(repr(float(v)) for v in (tau, *ev)))
    return "\n".join(lines) + "\n"


def path_from_text(text: str) -> Path:
    """Parse the plain-text vertex table; rejects non-increasing tau."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if len(rows) < 2:
        raise ValueError("path text needs at least two vertex lines")
    width = len(rows[0])
    if width < 2 or any(len(r) != width for r in rows):
        raise ValueError("every line must be `tau x0 ... x{N-1}` with a fixed width")
    data = np.array([[float(v) for v in r] for r in rows])
    params, events = data[:, 0], data[:, 1:]
    if not np.all(np.diff(params) > 0):
        raise ValueError("tau column must be strictly increasing")
    return Path(events=events, params=params)
