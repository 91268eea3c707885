"""d'Alembert evolution of the 1D wave equation from explicit Cauchy data.

A massless Salpeter solution is also a wave-equation solution, but one whose
initial velocity is slaved to the initial profile and is not compactly
supported. Packaging that velocity as ordinary Cauchy data shows the same
exterior values arising causally, from the velocity already present there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._quad import integrate
from .errors import InvalidArgumentError
from .field import Field, Profile
from .massless import time_derivative_at_zero


@dataclass(frozen=True)
class ShadowInterval:
    left: float
    right: float

    def __post_init__(self):
        if not self.left < self.right:
            raise InvalidArgumentError(f"empty shadow [{self.left!r}, {self.right!r}]")

    def contains(self, x):
        return (np.asarray(x) >= self.left) & (np.asarray(x) <= self.right)


def causal_shadow(support: tuple[float, float], t: float) -> ShadowInterval:
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t!r}")
    a, b = support
    return ShadowInterval(a - t, b + t)


def _field_sampler(field: Field) -> Callable[[float], complex]:
    grid = field.grid
    x = np.append(grid.x, grid.half_length)
    y = np.append(field.samples, field.samples[0])

    def evaluate(pos):
        pos = float(grid.wrap(pos))
        return complex(np.interp(pos, x, y.real), np.interp(pos, x, y.imag))

    return evaluate


@dataclass(frozen=True, eq=False)
class CauchyData:
    """Initial displacement and velocity for the wave equation.

    Either component may be a callable of position or a sampled :class:`Field`
    (evaluated by periodic linear interpolation). ``velocity_support`` set to
    an interval declares the velocity compact; ``None`` means it extends over
    the whole line.
    """

    displacement: Callable | Field
    velocity: Callable | Field | None = None
    velocity_support: tuple[float, float] | None = None

    def __post_init__(self):
        if self.velocity_support is not None and self.velocity is not None:
            a, b = self.velocity_support
            g = self._velocity()
            for y in (a - 1.0, a - 1e-3, b + 1e-3, b + 1.0):
                if g(y) != 0:
                    raise InvalidArgumentError(
                        f"velocity declared compact on [{a:g}, {b:g}] but g({y:g}) != 0"
                    )

    @property
    def compact_velocity(self) -> bool:
        return self.velocity is None or self.velocity_support is not None

    def _displacement(self):
        f = self.displacement
        return _field_sampler(f) if isinstance(f, Field) else f

    def _velocity(self):
        g = self.velocity
        return _field_sampler(g) if isinstance(g, Field) else g

    def velocity_integral(self, lo: float, hi: float) -> complex:
        """integral_lo^hi g(y) dy."""
        g = self.velocity
        if g is None or lo == hi:
            return 0j
        if isinstance(g, Field):
            return _trapezoid_integral(g, lo, hi)
        if self.velocity_support is not None:
            a, b = self.velocity_support
            lo, hi = max(lo, a), min(hi, b)
            if lo >= hi:
                return 0j
        cache: dict[float, complex] = {}

        def value(y):
            if y not in cache:
                cache[y] = complex(g(y))
            return cache[y]

        re = integrate(lambda y: value(y).real, lo, hi, epsabs=1e-14, epsrel=1e-11,
                       label="velocity integral (real)")
        im = integrate(lambda y: value(y).imag, lo, hi, epsabs=1e-14, epsrel=1e-11,
                       label="velocity integral (imag)")
        return complex(re, im)


def _trapezoid_integral(field: Field, lo: float, hi: float) -> complex:
    """Trapezoid rule on the periodic samples; error O(h^2)."""
    grid = field.grid
    sampler = _field_sampler(field)
    h = grid.spacing
    first = math.ceil((lo + grid.half_length) / h)
    last = math.floor((hi + grid.half_length) / h)
    nodes = [lo] + [-grid.half_length + k * h for k in range(first, last + 1)] + [hi]
    nodes = sorted(set(nodes))
    values = [sampler(y) for y in nodes]
    total = 0j
    for (y0, v0), (y1, v1) in zip(zip(nodes, values), zip(nodes[1:], values[1:])):
        total += 0.5 * (y1 - y0) * (v0 + v1)
    return total


def dalembert_evolve(data: CauchyData, x: float, t: float) -> complex:
    """Phi(x,t) = [f(x-t) + f(x+t)]/2 + (1/2) integral_{x-t}^{x+t} g(y) dy."""
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t!r}")
    f = data._displacement()
    if t == 0:
        return complex(f(x))
    return 0.5 * (complex(f(x - t)) + complex(f(x + t))) + 0.5 * data.velocity_integral(x - t, x + t)


def salpeter_as_wave(profile: Profile, half_length=None) -> CauchyData:
    """Wave-equation Cauchy data whose evolution is the massless Salpeter solution.

    The velocity is ``-i |D| f``, the principal-value derivative of the
    profile; it is nonzero on the whole line. ``half_length`` selects the
    periodic box, as in :mod:`salpeter_lab.massless`.
    """
    if half_length is None:
        displacement = profile
    else:
        L = half_length

        def displacement(y):
            return profile((y + L) % (2.0 * L) - L)

    return CauchyData(
        displacement=displacement,
        velocity=lambda y: time_derivative_at_zero(profile, y, half_length),
        velocity_support=None,
    )


def wave_residual(history, tau: float | None = None, mass: float = 0.0) -> float:
    """Max discrete residual of ``(d_tt - d_xx + m^2) Phi = 0`` over a history.

    Second central differences in time (step ``tau``) and space (the grid
    spacing, periodic), normalized by the sup norm of the first slice.
    """
    history = list(history)
    if len(history) < 3:
        raise InvalidArgumentError(f"need at least 3 time slices, got {len(history)}")
    grid = history[0].grid
    times = np.array([f.t for f in history])
    steps = np.diff(times)
    if tau is None:
        tau = float(steps[0])
    if not tau > 0 or not np.allclose(steps, tau, rtol=1e-9, atol=0.0):
        raise InvalidArgumentError("time slices must be uniformly spaced by tau")
    if any(f.grid != grid for f in history):
        raise InvalidArgumentError("all slices must share one grid")
    h = grid.spacing
    scale = float(np.max(np.abs(history[0].samples))) or 1.0
    worst = 0.0
    for prev, cur, nxt in zip(history, history[1:], history[2:]):
        u = cur.samples
        d_tt = (nxt.samples - 2.0 * u + prev.samples) / tau**2
        d_xx = (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / h**2
        worst = max(worst, float(np.max(np.abs(d_tt - d_xx + mass**2 * u))))
    return worst / scale
