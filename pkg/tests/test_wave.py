import math

import numpy as np
import pytest

from salpeter_lab import (
    CauchyData,
    Field,
    Grid1D,
    InvalidArgumentError,
    ShadowInterval,
    causal_shadow,
    dalembert_evolve,
    evolve_massive,
    evolve_massless,
    make_bump,
    salpeter_as_wave,
    sample,
    wave_residual,
)

L_DEFAULT = 64.0


def test_causal_shadow():
    s = causal_shadow((-1.0, 1.0), 0.5)
    assert (s.left, s.right) == (-1.5, 1.5)
    assert s.contains(1.5) and s.contains(0.0)
    assert not s.contains(1.5000001)
    assert list(s.contains([-2.0, 0.0, 2.0])) == [False, True, False]


def test_shadow_validation():
    with pytest.raises(InvalidArgumentError):
        causal_shadow((-1.0, 1.0), -0.1)
    with pytest.raises(InvalidArgumentError):
        ShadowInterval(1.0, 1.0)


def test_zero_velocity_splits_the_profile(bump):
    data = CauchyData(bump)
    assert dalembert_evolve(data, 2.5, 2.0) == pytest.approx(0.5 * bump(0.5), abs=1e-16)
    assert dalembert_evolve(data, 0.0, 0.0) == bump(0.0)
    assert dalembert_evolve(data, 0.0, 3.0) == 0


def test_zero_data_stays_zero():
    data = CauchyData(lambda y: 0.0, lambda y: 0.0, velocity_support=(-1.0, 1.0))
    assert dalembert_evolve(data, 0.7, 2.0) == 0


def test_negative_time_rejected(bump):
    with pytest.raises(InvalidArgumentError):
        dalembert_evolve(CauchyData(bump), 0.0, -1.0)


def test_compact_data_is_confined(bump):
    # g = f' has zero integral, so the solution vanishes outside the shadow and
    # also in the emptied interior once both movers have left
    data = CauchyData(bump, bump.derivative, velocity_support=bump.support)
    assert data.compact_velocity
    rng = np.random.default_rng(7)
    for _ in range(50):
        t = float(rng.uniform(0.05, 3.0))
        shadow = causal_shadow(bump.support, t)
        side = rng.choice([-1.0, 1.0])
        x = float(side * (shadow.right + rng.uniform(1e-3, 5.0)))
        assert dalembert_evolve(data, x, t) == 0


def test_compact_velocity_plateau(bump):
    # nonzero integral: exterior stays zero but the interior keeps half the velocity's mass
    data = CauchyData(lambda y: 0.0, bump, velocity_support=bump.support)
    mass = data.velocity_integral(-1.0, 1.0)
    t = 3.0
    for x in (-1.5, 0.0, 1.9):
        assert dalembert_evolve(data, x, t) == pytest.approx(0.5 * mass, rel=1e-12)
    assert dalembert_evolve(data, 4.5, t) == 0


def test_arctan_closed_form():
    data = CauchyData(lambda y: 0.0, lambda y: 1.0 / (1.0 + y * y))
    assert not data.compact_velocity
    for x, t in [(0.0, 1.0), (3.0, 0.5), (-7.0, 2.0)]:
        ref = 0.5 * (math.atan(x + t) - math.atan(x - t))
        assert dalembert_evolve(data, x, t) == pytest.approx(ref, rel=1e-12)


def test_declared_support_is_checked(bump):
    with pytest.raises(InvalidArgumentError, match="compact"):
        CauchyData(lambda y: 0.0, bump, velocity_support=(-0.5, 0.5))


def test_sampled_data_fallback(bump):
    g = Grid1D(8.0, 4096)
    f = sample(bump, g)
    v = Field(g, bump.derivative(g.x))
    sampled = CauchyData(f, v)
    exact = CauchyData(bump, bump.derivative, velocity_support=bump.support)
    for x, t in [(0.2, 0.3), (1.1, 0.5), (-0.4, 0.8)]:
        assert dalembert_evolve(sampled, x, t) == pytest.approx(dalembert_evolve(exact, x, t), abs=1e-5)


@pytest.mark.parametrize("x,t", [(0.3125, 0.5), (3.0, 0.1), (3.0, 1.0), (-2.5, 0.75)])
def test_salpeter_data_reproduces_spectral(field0, bump, x, t):
    data = salpeter_as_wave(bump, half_length=L_DEFAULT)
    assert not data.compact_velocity
    ref = evolve_massless(field0, t).at(x)
    got = dalembert_evolve(data, x, t)
    assert abs(got - ref) / abs(ref) <= 1e-6


def test_salpeter_exterior_amplitude_comes_from_exterior_velocity(bump):
    # outside the shadow the displacement terms vanish; everything is the velocity integral
    data = salpeter_as_wave(bump)
    x, t = 3.0, 1.0
    assert bump(x - t) == bump(x + t) == 0
    got = dalembert_evolve(data, x, t)
    assert got == pytest.approx(0.5 * data.velocity_integral(x - t, x + t), rel=1e-15)
    assert got.imag > 0


def _mode_history(g, k, m, tau, steps=4):
    p = g.momentum_spacing * k
    w = math.sqrt(p * p + m * m)
    return [Field(g, np.exp(1j * (p * g.x - w * j * tau)), j * tau) for j in range(steps)]


@pytest.mark.parametrize("m", [0.0, 1.5])
def test_residual_converges_quadratically(m):
    # residual / (h^2 + tau^2) settles to a constant under refinement
    consts = []
    for n in (256, 512, 1024):
        g = Grid1D(8.0, n)
        h = g.spacing
        tau = h / 2
        consts.append(wave_residual(_mode_history(g, 3, m, tau), mass=m) / (h * h + tau * tau))
    assert consts[1] == pytest.approx(consts[0], rel=0.02)
    assert consts[2] == pytest.approx(consts[1], rel=0.02)


@pytest.mark.parametrize("m", [0.0, 1.0])
def test_residual_of_evolved_bump_converges(bump, m):
    res = []
    for n in (2**11, 2**12, 2**13):
        f = sample(bump, Grid1D(8.0, n))
        tau = f.grid.spacing / 2
        evolve = (lambda u, t: evolve_massless(u, t)) if m == 0 else (lambda u, t: evolve_massive(u, t, m))
        res.append(wave_residual([evolve(f, 0.5 + j * tau) for j in range(3)], mass=m))
    assert res[0] / res[1] > 3.5
    assert res[1] / res[2] > 3.5


def test_residual_of_constant_history():
    g = Grid1D(4.0, 64)
    hist = [Field(g, np.ones(64), 0.1 * j) for j in range(5)]
    assert wave_residual(hist) == 0.0
    assert wave_residual(hist, mass=2.0) == pytest.approx(4.0)


def test_residual_input_validation():
    g = Grid1D(4.0, 64)
    with pytest.raises(InvalidArgumentError):
        wave_residual([Field(g, np.ones(64), 0.0), Field(g, np.ones(64), 0.1)])
    uneven = [Field(g, np.ones(64), t) for t in (0.0, 0.1, 0.3)]
    with pytest.raises(InvalidArgumentError):
        wave_residual(uneven)
    mixed = [Field(g, np.ones(64), 0.0), Field(g, np.ones(64), 0.1), Field(Grid1D(4.0, 128), np.ones(128), 0.2)]
    with pytest.raises(InvalidArgumentError):
        wave_residual(mixed)
