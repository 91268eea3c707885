"""Massive evolution ``i dPhi/dt = sqrt(m^2 - d^2/dx^2) Phi``.

Besides the spectral propagator this module evaluates the solution outside
the light cone of the initial support directly from the profile. For
``x > b + t`` (``b`` the right edge of the support) the momentum integral can
be pushed into the upper half plane, where it collapses onto the branch cut
of ``sqrt(p^2 + m^2)`` running from ``im`` to ``i inf``. On the two lips of the
cut the frequency is ``+/- i sqrt(q^2 - m^2)`` (``p = iq``), so the jump of
``exp(-i omega t)`` is ``2 sinh(sqrt(q^2 - m^2) t)`` and

    Phi(x, t) = i sqrt(2/pi) * integral_m^inf F(iq) exp(-q x) sinh(sqrt(q^2 - m^2) t) dq

with ``F(iq) = (2 pi)^(-1/2) integral exp(q y) f(y) dy > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._quad import integrate
from .errors import BoundNotVerifiedError, InvalidArgumentError
from .field import SQRT_2PI, Field, Grid1D, Profile, forward_transform, inverse_transform, sample

DEFAULT_GRID = Grid1D(64.0, 2**14)

# Relative size of the discarded tail of the cut integral.
TAIL_TRUNCATION = 1e-16


@dataclass(frozen=True)
class MassParams:
    mass: float

    def __post_init__(self):
        if not self.mass > 0:
            raise InvalidArgumentError(f"mass must be positive, got {self.mass!r}")


def _mass(m) -> float:
    return m.mass if isinstance(m, MassParams) else MassParams(float(m)).mass


def dispersion(p, m):
    return np.sqrt(np.asarray(p) ** 2 + _mass(m) ** 2)


def evolve_massive(field0: Field, t: float, m) -> Field:
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t!r}")
    if t == 0:
        return Field(field0.grid, field0.samples.copy(), field0.t)
    spec = forward_transform(field0)
    phase = np.exp(-1j * dispersion(field0.grid.momenta, m) * t)
    return inverse_transform(spec.multiply(phase), field0.t + t)


def fourier_transform(profile: Profile, p: float) -> complex:
    """``F(p)`` on the real axis by oscillatory-weight quadrature."""
    lo, hi = profile.support
    if p == 0:
        return complex(integrate(profile, lo, hi, epsabs=1e-15, label="transform") / SQRT_2PI)
    kw = dict(epsabs=1e-15, epsrel=1e-11, limit=400, wvar=abs(p))
    c = integrate(profile, lo, hi, weight="cos", label="cosine transform", **kw)
    s = integrate(profile, lo, hi, weight="sin", label="sine transform", **kw)
    return complex(c, -s if p > 0 else s) / SQRT_2PI


def log_transform_imag_axis(profile: Profile, p: float) -> float:
    """``log F(ip)`` computed without overflow.

    The exponential is scaled by its value at the support edge it grows
    toward, so the integrand never exceeds the profile itself.
    """
    lo, hi = profile.support
    edge = hi if p >= 0 else lo
    kw = {}
    if p != 0:
        # peak of exp(p (y - edge)) f(y) sits about sqrt(R / 2|p|) from the edge
        d = math.sqrt(0.5 * (hi - lo) / (2.0 * abs(p)))
        peak = edge - math.copysign(d, p)
        if lo < peak < hi:
            kw["points"] = [peak]
    scaled = integrate(lambda y: math.exp(p * (y - edge)) * profile(y), lo, hi,
                       epsabs=0.0, epsrel=1e-13, label="imaginary-axis transform", **kw)
    if scaled <= 0.0:
        return -math.inf
    return p * edge + math.log(scaled / SQRT_2PI)


def entire_transform_imag_axis(profile: Profile, p: float) -> float:
    """``F(ip) = (2 pi)^(-1/2) integral exp(p x) f(x) dx``, positive for f >= 0."""
    return math.exp(log_transform_imag_axis(profile, p))


@dataclass(frozen=True)
class PaleyWienerReport:
    order: int
    constant: float
    argmax: float
    p_max: float

    @property
    def interior(self) -> bool:
        return self.argmax < 0.9 * self.p_max


@lru_cache(maxsize=16)
def _transform_modulus(profile: Profile, p_max: float, n_samples: int):
    p = np.linspace(0.0, p_max, n_samples)
    mod = np.array([abs(fourier_transform(profile, float(q))) for q in p])
    p.setflags(write=False)
    mod.setflags(write=False)
    return p, mod


def paley_wiener_check(profile: Profile, order: int, p_max: float = 200.0,
                       n_samples: int = 2001) -> PaleyWienerReport:
    """Empirical ``C_N = sup (1 + p)^N |F(p)|`` over sampled ``p`` in [0, p_max].

    Raises :class:`BoundNotVerifiedError` when the supremum sits in the last
    tenth of the range, i.e. the weighted transform is still growing there.
    """
    if not 0 <= order <= 8:
        raise InvalidArgumentError(f"order must be in 0..8, got {order!r}")
    p, mod = _transform_modulus(profile, float(p_max), int(n_samples))
    weighted = (1.0 + p) ** order * mod
    k = int(np.argmax(weighted))
    report = PaleyWienerReport(order, float(weighted[k]), float(p[k]), float(p_max))
    if not report.interior:
        raise BoundNotVerifiedError(
            f"(1+p)^{order} |F(p)| peaks at p = {report.argmax:g}, the edge of [0, {p_max:g}]",
            report,
        )
    return report


def _cut_integral(profile: Profile, x: float, t: float, m: float) -> float:
    """integral_m^inf F(iq) exp(-q x) sinh(sqrt(q^2 - m^2) t) dq for x > b + t.

    Substituting q = m cosh(theta) removes the square-root branch point.
    """
    hi = profile.support[1]
    margin = x - hi - t

    def integrand(theta):
        q = m * math.cosh(theta)
        s = m * math.sinh(theta)
        base = log_transform_imag_axis(profile, q) - q * x
        # both exponents formed before exponentiating; each factor alone may overflow
        return 0.5 * (math.exp(base + s * t) - math.exp(base - s * t)) * s

    # integrand <= F(0) exp(-margin q) / 2, so the tail past Q is below F(0) exp(-margin Q) / (2 margin)
    f0 = entire_transform_imag_axis(profile, 0.0)
    q_hi = m + 40.0 / margin
    total = integrate(integrand, 0.0, math.acosh(q_hi / m), epsabs=0.0, epsrel=1e-11,
                      label="cut integral")
    while f0 * math.exp(-margin * q_hi) / (2.0 * margin) > TAIL_TRUNCATION * abs(total):
        q_next = m + 2.0 * (q_hi - m)
        total += integrate(integrand, math.acosh(q_hi / m), math.acosh(q_next / m),
                           epsabs=0.0, epsrel=1e-11, label="cut integral")
        q_hi = q_next
    return total


def tail_amplitude(profile: Profile, x: float, t: float, m) -> complex:
    """Phi(x, t) for x strictly outside the light cone of the support.

    Right-exterior points use the cut integral directly; left-exterior
    points are handled by reflecting the profile.
    """
    m = _mass(m)
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t!r}")
    lo, hi = profile.support
    if x > hi + t:
        pass
    elif x < lo - t:
        profile, x = profile.reflected(), -x
    else:
        raise InvalidArgumentError(
            f"x = {x!r} is inside the causal shadow [{lo - t:g}, {hi + t:g}] at t = {t!r}"
        )
    if t == 0:
        return 0j
    return complex(0.0, math.sqrt(2.0 / math.pi) * _cut_integral(profile, x, t, m))


@dataclass(frozen=True)
class TailReport:
    x: float
    t: float
    spectral: complex
    tail: complex
    discrepancy: float
    margin: float


def tail_survey(profile: Profile, t: float, m, points, grid: Grid1D | None = None) -> list[TailReport]:
    """Compare the spectral solution with the cut integral at exterior points."""
    points = [float(x) for x in points]
    if not points:
        return []
    lo, hi = profile.support
    for x in points:
        if lo - t <= x <= hi + t:
            raise InvalidArgumentError(
                f"point {x!r} is inside the causal shadow [{lo - t:g}, {hi + t:g}] at t = {t!r}"
            )
    field_t = evolve_massive(sample(profile, grid or DEFAULT_GRID), t, m)
    spectral = field_t.evaluate(points)
    reports = []
    for x, s in zip(points, spectral):
        tail = tail_amplitude(profile, x, t, m)
        margin = x - (hi + t) if x > hi else (lo - t) - x
        reports.append(TailReport(x, t, complex(s), tail, abs(s - tail) / abs(s), margin))
    return reports
