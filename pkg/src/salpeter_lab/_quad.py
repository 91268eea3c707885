"""Thin wrapper around QUADPACK that turns silent failures into exceptions."""

from __future__ import annotations

from scipy.integrate import quad

from .errors import AccuracyError

# QUADPACK flags roundoff (ier=2) well before the result is unusable; only
# escalate when the returned error estimate is this many times the request.
_SLACK = 100.0


def integrate(func, a, b, *, epsabs=1e-13, epsrel=1e-12, limit=200, label="integral", **kwargs):
    """Integrate a real scalar function on [a, b] and return the value.

    Extra keyword arguments (``points``, ``weight``, ``wvar``, ``args``) are
    forwarded to :func:`scipy.integrate.quad`. Raises :class:`AccuracyError`
    when QUADPACK reports a problem and its error estimate exceeds the request.
    """
    if a == b:
        return 0.0
    out = quad(func, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1, **kwargs)
    value, abserr, info = out[0], out[1], out[2]
    ier = 0 if len(out) == 3 else 1
    if isinstance(info, dict) and "ier" in info:
        ier = info["ier"]
    requested = max(epsabs, epsrel * abs(value))
    if ier != 0 and abserr > _SLACK * requested:
        raise AccuracyError(f"{label} did not converge on [{a:g}, {b:g}]", abserr, requested)
    return value
