"""Grids, bump profiles, sampled fields and the symmetric Fourier pair.

The infinite line is replaced by the periodic box ``[-L, L)`` sampled at
``n`` points. Transforms use the unitary convention

    F(p) = (2 pi)^(-1/2) * integral exp(-i p x) f(x) dx

discretized on the dual lattice ``p_k = pi k / L``, ``k = -n/2 .. n/2 - 1``,
so that spectrum values can be compared directly with continuous-space
quadratures of the same integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainTooSmallError, InvalidArgumentError

SQRT_2PI = math.sqrt(2.0 * math.pi)

# Required clearance between the profile support and the box edge, in grid spacings.
SUPPORT_MARGIN_CELLS = 4


@dataclass(frozen=True)
class Grid1D:
    half_length: float
    n_points: int

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise InvalidArgumentError(f"n_points must be a power of two >= 8, got {n!r}")
        if not self.half_length > 0:
            raise InvalidArgumentError(f"half_length must be positive, got {self.half_length!r}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.n_points

    @property
    def momentum_spacing(self) -> float:
        return math.pi / self.half_length

    @cached_property
    def x(self) -> np.ndarray:
        return -self.half_length + self.spacing * np.arange(self.n_points)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer lattice labels k = -n/2, ..., n/2 - 1."""
        return np.arange(-(self.n_points // 2), self.n_points // 2)

    @cached_property
    def momenta(self) -> np.ndarray:
        return self.momentum_spacing * self.wavenumbers

    @cached_property
    def _parity(self) -> np.ndarray:
        # exp(i p_k L) = (-1)^k shifts the FFT origin from x_0 = -L to x = 0
        return np.where(self.wavenumbers % 2 == 0, 1.0, -1.0)

    def wrap(self, x):
        """Map positions into the fundamental cell [-L, L)."""
        L = self.half_length
        return np.mod(np.asarray(x) + L, 2.0 * L) - L

    def index_of(self, x: float) -> int:
        """Index of the grid node at ``x``; raises if ``x`` is not a node."""
        j = (float(self.wrap(x)) + self.half_length) / self.spacing
        k = int(round(j))
        if abs(j - k) > 1e-9:
            raise InvalidArgumentError(f"x = {x!r} is not a grid node (h = {self.spacing!r})")
        return k % self.n_points


@dataclass(frozen=True)
class Profile:
    """Smooth bump ``A exp(-1/(1 - w^2))`` with ``w = (x - c)/R`` on |w| < 1, else 0.

    Accepts scalars or arrays, real or complex; complex arguments are
    evaluated by analytic continuation wherever ``|Re w| < 1``.
    """

    center: float
    radius: float
    amplitude: float

    smooth = True

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidArgumentError(f"radius must be positive, got {self.radius!r}")
        if not self.amplitude > 0:
            raise InvalidArgumentError(f"amplitude must be positive, got {self.amplitude!r}")

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.radius, self.center + self.radius)

    @property
    def sup_norm(self) -> float:
        return self.amplitude * math.exp(-1.0)

    def _inside(self, x):
        lo, hi = self.support
        return (x > lo) & (x < hi)

    def __call__(self, x):
        if isinstance(x, (float, int)):
            w = (x - self.center) / self.radius
            if not self._inside(x) or abs(w) >= 1.0:
                return 0.0
            return self.amplitude * math.exp(-1.0 / (1.0 - w * w))
        x = np.asarray(x)
        out = np.zeros(x.shape, dtype=np.complex128 if np.iscomplexobj(x) else np.float64)
        w = (x - self.center) / self.radius
        mask = self._inside(x.real) & (np.abs(w.real) < 1.0)
        wm = w[mask]
        out[mask] = self.amplitude * np.exp(-1.0 / (1.0 - wm * wm))
        return out if out.ndim else out[()]

    def derivative(self, x):
        """First derivative, evaluated in closed form."""
        x = np.asarray(x, dtype=float)
        w = (x - self.center) / self.radius
        out = np.zeros(x.shape)
        mask = self._inside(x) & (np.abs(w) < 1.0)
        wm = w[mask]
        g = 1.0 - wm * wm
        out[mask] = self.amplitude * np.exp(-1.0 / g) * (-2.0 * wm / g**2) / self.radius
        return out if out.ndim else float(out)

    def reflected(self) -> "Profile":
        """The mirror image x -> -x."""
        return Profile(-self.center, self.radius, self.amplitude)


@dataclass(frozen=True)
class TruncatedBump(Profile):
    """Bump set to zero for x > ``cut``: non-negative but discontinuous at the cut.

    Used as a negative control for decay estimates that rely on smoothness.
    """

    cut: float = 0.0
    smooth = False

    def __post_init__(self):
        super().__post_init__()
        if not (self.center - self.radius < self.cut < self.center + self.radius):
            raise InvalidArgumentError("cut must lie strictly inside the bump support")

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.radius, self.cut)

    def _inside(self, x):
        lo, hi = self.support
        return (x > lo) & (x <= hi)

    def reflected(self):
        raise NotImplementedError("reflection of a truncated bump is not a TruncatedBump")


def make_bump(center: float, radius: float, amplitude: float = 1.0) -> Profile:
    return Profile(float(center), float(radius), float(amplitude))


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples of a wave function on a grid at time ``t``."""

    grid: Grid1D
    samples: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.shape != (self.grid.n_points,):
            raise InvalidArgumentError(
                f"expected {self.grid.n_points} samples, got shape {samples.shape}"
            )
        object.__setattr__(self, "samples", samples)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def at(self, x: float) -> complex:
        """Sample at the grid node ``x``."""
        return complex(self.samples[self.grid.index_of(x)])

    def evaluate(self, points) -> np.ndarray:
        """Trigonometric interpolation at arbitrary positions.

        Exact for fields band-limited to the lattice; for smooth data the error
        is set by the spectrum's size at the Nyquist momentum.
        """
        spec = forward_transform(self)
        dp = self.grid.momentum_spacing / SQRT_2PI
        pts = np.atleast_1d(np.asarray(points, dtype=float))
        out = np.empty(pts.shape, dtype=np.complex128)
        for i, xi in enumerate(pts):
            out[i] = dp * np.dot(spec.coefficients, np.exp(1j * self.grid.momenta * xi))
        return out

    def scaled(self, factor) -> "Field":
        return Field(self.grid, factor * self.samples, self.t)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients on ``grid.momenta`` (ascending order)."""

    grid: Grid1D
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.shape != (self.grid.n_points,):
            raise InvalidArgumentError(
                f"expected {self.grid.n_points} coefficients, got shape {c.shape}"
            )
        object.__setattr__(self, "coefficients", c)

    def l2_norm(self) -> float:
        return math.sqrt(self.grid.momentum_spacing) * float(np.linalg.norm(self.coefficients))

    def multiply(self, multiplier) -> "Spectrum":
        return Spectrum(self.grid, self.coefficients * multiplier)


def sample(profile: Profile, grid: Grid1D) -> Field:
    lo, hi = profile.support
    margin = SUPPORT_MARGIN_CELLS * grid.spacing
    L = grid.half_length
    if lo < -L + margin or hi > L - margin:
        raise DomainTooSmallError(
            f"support [{lo:g}, {hi:g}] needs clearance {margin:g} inside [-{L:g}, {L:g})"
        )
    return Field(grid, profile(grid.x), 0.0)


def forward_transform(field: Field) -> Spectrum:
    g = field.grid
    coeffs = np.fft.fftshift(np.fft.fft(field.samples))
    return Spectrum(g, (g.spacing / SQRT_2PI) * g._parity * coeffs)


def inverse_transform(spectrum: Spectrum, t: float = 0.0) -> Field:
    g = spectrum.grid
    samples = np.fft.ifft(np.fft.ifftshift(g._parity * spectrum.coefficients))
    return Field(g, (SQRT_2PI / g.spacing) * samples, t)


def l2_norm(field: Field) -> float:
    """sqrt(integral |f|^2 dx) by the periodic trapezoid rule."""
    return math.sqrt(field.grid.spacing) * float(np.linalg.norm(field.samples))
