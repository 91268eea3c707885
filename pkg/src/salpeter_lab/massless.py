"""Massless evolution ``i dPhi/dt = |p| Phi`` and its position-space kernels.

Two routes to the same solution live here:

* spectral: multiply the Fourier coefficients by ``exp(-i |p| t)``;
* kernel: the boundary values of the Cauchy integrals of the initial
  profile, evaluated through the Plemelj split

      Phi(x, t) = [f(x-t) + f(x+t)] / 2 + (i / 2 pi) [H(x-t) - H(x+t)],
      H(u) = PV integral f(y) / (u - y) dy.

The right mover ``f(u)/2 + (i/2pi) H(u)`` is the positive-momentum half
(``+i eps`` boundary value); the left mover carries the opposite sign
(``-i eps``), which is what makes the t = 0 limit return ``f``.

Kernel routines accept ``half_length``: when given they use the periodic
kernels (``cot`` and ``csc^2``) of the box ``[-L, L)``, i.e. they solve the
same periodic problem the spectral route does. ``None`` means the real line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import integrate
from .errors import InvalidArgumentError
from .field import Field, Profile, forward_transform, inverse_transform

_EPSABS = 1e-14
_EPSREL = 1e-12


def evolve_massless(field0: Field, t: float) -> Field:
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t!r}")
    if t == 0:
        return Field(field0.grid, field0.samples.copy(), field0.t)
    spec = forward_transform(field0)
    phase = np.exp(-1j * np.abs(field0.grid.momenta) * t)
    return inverse_transform(spec.multiply(phase), field0.t + t)


def spectral_time_derivative(field0: Field) -> Field:
    """dPhi/dt at the field's time: ``-i |p|`` applied in momentum space."""
    spec = forward_transform(field0)
    return inverse_transform(spec.multiply(-1j * np.abs(field0.grid.momenta)), field0.t)


def _projectors(grid):
    p = grid.momenta
    right = np.where(p > 0, 1.0, 0.0)
    right[p == 0] = 0.5  # DC split evenly so right + left is exactly the identity
    return right, 1.0 - right


@dataclass(frozen=True, eq=False)
class MoverPair:
    """Positive- and negative-momentum parts of a massless solution."""

    right: Field
    left: Field

    @property
    def t(self) -> float:
        return self.right.t

    def total(self) -> Field:
        return Field(self.right.grid, self.right.samples + self.left.samples, self.right.t)

    def translated(self, t: float) -> "MoverPair":
        """Shift right by +t and left by -t (a spectral phase on each)."""
        grid = self.right.grid
        p = grid.momenta
        r = forward_transform(self.right).multiply(np.exp(-1j * p * t))
        l = forward_transform(self.left).multiply(np.exp(1j * p * t))
        t1 = self.t + t
        return MoverPair(inverse_transform(r, t1), inverse_transform(l, t1))


def split_movers(field0: Field) -> MoverPair:
    spec = forward_transform(field0)
    right, left = _projectors(field0.grid)
    return MoverPair(
        inverse_transform(spec.multiply(right), field0.t),
        inverse_transform(spec.multiply(left), field0.t),
    )


def _check_periodic(profile: Profile, half_length):
    if half_length is None:
        return
    lo, hi = profile.support
    if not (-half_length < lo and hi < half_length):
        raise InvalidArgumentError(
            f"profile support [{lo:g}, {hi:g}] is not inside [-{half_length:g}, {half_length:g})"
        )


def _wrap(x: float, half_length) -> float:
    if half_length is None:
        return x
    L = half_length
    return (x + L) % (2.0 * L) - L


def _cot_remainder(w: float, a: float) -> float:
    """a cot(a w) - 1/w, regular at w = 0."""
    if abs(a * w) < 1e-4:
        aw2 = (a * w) ** 2
        return -a * a * w / 3.0 * (1.0 + aw2 / 15.0)
    return a / math.tan(a * w) - 1.0 / w


def hilbert_integral(profile: Profile, u: float, half_length=None) -> float:
    """``PV integral f(y)/(u - y) dy`` (line) or with the ``a cot(a (u-y))``
    kernel, ``a = pi / 2L`` (periodic box)."""
    _check_periodic(profile, half_length)
    u = _wrap(u, half_length)
    lo, hi = profile.support
    if lo < u < hi:
        # quad's Cauchy weight computes PV integral f(y) / (y - u)
        value = -integrate(profile, lo, hi, weight="cauchy", wvar=u,
                           epsabs=_EPSABS, epsrel=_EPSREL, label="Cauchy PV")
    else:
        value = integrate(lambda y: profile(y) / (u - y), lo, hi,
                          epsabs=_EPSABS, epsrel=_EPSREL, label="Cauchy integral")
    if half_length is not None:
        a = math.pi / (2.0 * half_length)
        kw = {"points": [u]} if lo < u < hi else {}
        value += integrate(lambda y: profile(y) * _cot_remainder(u - y, a), lo, hi,
                           epsabs=_EPSABS, epsrel=_EPSREL, label="periodic kernel", **kw)
    return value


def cauchy_kernel_evolve(profile: Profile, x: float, t: float, half_length=None) -> complex:
    """Massless solution at (x, t) from the Cauchy-kernel representation."""
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t!r}")
    if t == 0:
        return complex(profile(_wrap(x, half_length)))
    local = 0.5 * (profile(_wrap(x - t, half_length)) + profile(_wrap(x + t, half_length)))
    nonlocal_part = hilbert_integral(profile, x - t, half_length) - hilbert_integral(
        profile, x + t, half_length
    )
    return complex(local, nonlocal_part / (2.0 * math.pi))


def time_derivative_at_zero(profile: Profile, x: float, half_length=None) -> complex:
    """dPhi/dt at t = 0 from the symmetrized principal-value integral

        (i/pi) integral_0^inf [f(x+z) + f(x-z) - 2 f(x)] / z^2 dz,

    whose integrand extends continuously to z = 0. On the line the range is
    cut at Z = R + |x - c|; past it only ``-2 f(x)/z^2`` survives and
    integrates to ``-2 f(x)/Z``. On the periodic box the kernel is
    ``a^2 csc^2(a z)`` on (0, L].
    """
    _check_periodic(profile, half_length)
    x = _wrap(x, half_length)
    lo, hi = profile.support
    fx = profile(x)

    if half_length is None:
        f = profile
        c = 0.5 * (lo + hi)
        Z = 0.5 * (hi - lo) + abs(x - c)

        def kernel(z):
            return 1.0 / (z * z)

        breaks = {abs(x - lo), abs(x - hi)}
        tail = -2.0 * fx / Z
    else:
        L = half_length
        a = math.pi / (2.0 * L)

        def f(y):
            return profile((y + L) % (2.0 * L) - L)

        def kernel(z):
            s = math.sin(a * z)
            return a * a / (s * s)

        Z = L
        breaks = set()
        for edge in (lo, hi):
            for shift in (-2.0 * L, 0.0, 2.0 * L):
                breaks.update({edge + shift - x, x - edge - shift})
        tail = 0.0

    def integrand(z):
        return (f(x + z) + f(x - z) - 2.0 * fx) * kernel(z)

    points = sorted(z for z in breaks if 0.0 < z < Z)
    # inside the support the numerator cancels as z -> 0, leaving an absolute
    # noise floor proportional to the profile height
    epsabs = 1e-12 * profile.sup_norm if fx != 0 else _EPSABS
    core = integrate(integrand, 0.0, Z, points=points or None,
                     epsabs=epsabs, epsrel=_EPSREL, label="time derivative")
    return complex(0.0, (core + tail) / math.pi)


def exterior_derivative_reduced(profile: Profile, x: float) -> complex:
    """dPhi/dt at t = 0 for x outside the support, from the reduced form

        (i/pi) integral_support f(y) / (x - y)^2 dy,

    valid because every other term of the symmetrized integrand vanishes there.
    """
    lo, hi = profile.support
    if lo <= x <= hi:
        raise InvalidArgumentError(f"x = {x!r} lies inside the support [{lo:g}, {hi:g}]")
    value = integrate(lambda y: profile(y) / (x - y) ** 2, lo, hi,
                      epsabs=_EPSABS, epsrel=_EPSREL, label="reduced derivative")
    return complex(0.0, value / math.pi)


def exterior_derivative_positivity_scan(profile: Profile, points) -> list[tuple[float, float]]:
    """Imaginary part of dPhi/dt|_{t=0} at exterior points, one pair per point.

    Every value is strictly positive for a non-negative profile.
    """
    lo, hi = profile.support
    out = []
    for x in points:
        x = float(x)
        if lo <= x <= hi:
            raise InvalidArgumentError(f"point {x!r} lies inside the support [{lo:g}, {hi:g}]")
        out.append((x, time_derivative_at_zero(profile, x).imag))
    return out
