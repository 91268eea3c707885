"""Numerical laboratory for the free Salpeter equation in one dimension.

Evolves compactly supported initial data by a spectral propagator, by
position-space singular-integral kernels, and (outside the light cone) by a
branch-cut integral, and measures the amplitude that appears outside the
causal shadow of the initial support.
"""

__version__ = "0.1.0"

from .errors import (
    AccuracyError,
    BoundNotVerifiedError,
    DomainTooSmallError,
    InvalidArgumentError,
    SalpeterLabError,
)
from .field import (
    Field,
    Grid1D,
    Profile,
    Spectrum,
    TruncatedBump,
    forward_transform,
    inverse_transform,
    l2_norm,
    make_bump,
    sample,
)
from .massless import (
    MoverPair,
    cauchy_kernel_evolve,
    evolve_massless,
    exterior_derivative_positivity_scan,
    exterior_derivative_reduced,
    hilbert_integral,
    spectral_time_derivative,
    split_movers,
    time_derivative_at_zero,
)
from .massive import (
    MassParams,
    PaleyWienerReport,
    TailReport,
    entire_transform_imag_axis,
    evolve_massive,
    fourier_transform,
    log_transform_imag_axis,
    paley_wiener_check,
    tail_amplitude,
    tail_survey,
)
from .wave import (
    CauchyData,
    ShadowInterval,
    causal_shadow,
    dalembert_evolve,
    salpeter_as_wave,
    wave_residual,
)
