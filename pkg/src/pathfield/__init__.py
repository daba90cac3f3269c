"""Path-quantization toolkit.

Numerical studies built around one restriction: only trajectories whose
action is an integer multiple of 2*pi contribute.  The package covers the
resulting machinery end to end: filtered path ensembles, imaginary-time
kernel evolution with an independent spectral oracle, relativistic and
curvature-corrected oscillator spectra, periodic-mode quantization with
its two vacuum-energy bookkeepings, discrete field-tensor identities in N
dimensions, and the multiplicative mass lattice.
"""

from .errors import CausalityError, GaugeError, NumericalError, StabilityError
from .geometry import (Metric, dual_rank, extend_metric, interval,
                       levi_civita_sign, minkowski_metric)
from .grid import Grid1D

__all__ = [
    "CausalityError", "GaugeError", "NumericalError", "StabilityError",
    "Metric", "dual_rank", "extend_metric", "interval", "levi_civita_sign",
    "minkowski_metric", "Grid1D",
]

__version__ = "0.1.0"
