"""Experiment configuration, measurement suites and the run driver.

A run is a pure function of its :class:`ExperimentConfig`: every suite
collects its series and assertions in memory, and files are written only
after all suites finish, so a failing computation leaves no partial output.
"""

from __future__ import annotations

import csv
import io
import math
import os
import shutil
import tempfile
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BoundNotVerifiedError, DomainTooSmallError, InvalidArgumentError
from .field import SQRT_2PI, Grid1D, Profile, TruncatedBump, l2_norm, make_bump, sample
from .massive import (
    evolve_massive,
    fourier_transform,
    paley_wiener_check,
    tail_survey,
)
from .massless import (
    cauchy_kernel_evolve,
    evolve_massless,
    exterior_derivative_reduced,
    spectral_time_derivative,
    split_movers,
    time_derivative_at_zero,
)
from .wave import (
    CauchyData,
    ShadowInterval,
    causal_shadow,
    dalembert_evolve,
    salpeter_as_wave,
    wave_residual,
)

MODES = ("massless-evolve", "massive-evolve", "tail-survey", "derivative-scan",
         "wave-contrast", "verify-all")

DEFAULT_TOLERANCES = {
    "unitarity": 1e-12,
    "initial_leakage": 1e-20,
    "cross_path_massless": 1e-6,
    "initial_reproduction": 1e-10,
    "mover_cancellation": 1e-12,
    "mover_nonlocality": 1e-4,
    "cross_path_massive": 1e-4,
    "derivative_real_part": 1e-12,
    "reduced_form": 1e-10,
    "spectral_derivative": 1e-6,
    "confinement": 1e-12,
    "wave_equivalence": 1e-6,
    "wave_convergence": 3.5,
}

CONFINEMENT_PROBES = 50
SNAPSHOT_STRIDE = 4
SNAPSHOT_PAD = 4.0


class ConfigError(InvalidArgumentError):
    pass


@dataclass
class ExperimentConfig:
    mode: str = "verify-all"
    center: float = 0.0
    radius: float = 1.0
    amplitude: float = 1.0
    half_length: float = 64.0
    n_points: int = 2**14
    mass: float | None = 1.0
    times: tuple[float, ...] = (0.0, 0.05, 0.1, 0.2, 1.0)
    points: tuple[float, ...] = (3.0, 4.0, 6.0, 8.0)
    output_dir: str = "salpeter-out"
    tolerances: dict[str, float] = field(default_factory=dict)

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    def profile(self) -> Profile:
        return make_bump(self.center, self.radius, self.amplitude)

    def grid(self) -> Grid1D:
        return Grid1D(self.half_length, self.n_points)

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode: unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        for name in ("radius", "amplitude", "half_length"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name}: must be positive, got {getattr(self, name)!r}")
        try:
            grid = self.grid()
        except InvalidArgumentError as exc:
            raise ConfigError(f"n_points: {exc}") from None
        try:
            sample(self.profile(), grid)
        except (InvalidArgumentError, DomainTooSmallError) as exc:
            raise ConfigError(f"half_length: {exc}") from None
        if self.mass is not None and not self.mass > 0:
            raise ConfigError(f"mass: must be positive, got {self.mass!r}")
        if self.mode in ("massive-evolve", "tail-survey") and self.mass is None:
            raise ConfigError(f"mass: required for mode {self.mode}")
        if not self.times or any(t < 0 for t in self.times):
            raise ConfigError(f"times: need a non-empty list of non-negative times, got {self.times!r}")
        for name in self.tolerances:
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"tolerance.{name}: unknown tolerance")


_SCALARS = {"mode": str, "center": float, "radius": float, "amplitude": float,
            "half_length": float, "n_points": int, "output_dir": str}


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(config: ExperimentConfig) -> str:
    """Serialize to the flat ``key = value`` format read by :func:`parse_config`."""
    lines = []
    for f in fields(config):
        if f.name == "tolerances":
            continue
        lines.append(f"{f.name} = {_format_value(getattr(config, f.name))}")
    for name in sorted(config.tolerances):
        lines.append(f"tolerance.{name} = {config.tolerances[name]!r}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment. Unknown keys are errors."""
    values: dict = {}
    tolerances: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key.startswith("tolerance."):
                name = key[len("tolerance."):]
                if name not in DEFAULT_TOLERANCES:
                    raise ConfigError(f"{key}: unknown tolerance")
                tolerances[name] = float(value)
            elif key in _SCALARS:
                values[key] = _SCALARS[key](value)
            elif key == "mass":
                values[key] = float(value) if value else None
            elif key in ("times", "points"):
                values[key] = tuple(float(v) for v in value.split(",") if v.strip())
            else:
                raise ConfigError(f"{key}: unknown configuration key (line {lineno})")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{key}: cannot parse {value!r} ({exc})") from None
    config = ExperimentConfig(**values, tolerances=tolerances)
    config.validate()
    return config


@dataclass(frozen=True)
class LeakageRecord:
    t: float
    shadow: ShadowInterval
    interior: float
    exterior: float

    @property
    def fraction(self) -> float:
        total = self.interior + self.exterior
        return self.exterior / total if total else 0.0


def leakage_series(history, shadows) -> list[LeakageRecord]:
    """Split ``integral |Phi|^2`` of each slice into inside/outside its shadow."""
    records = []
    for f, shadow in zip(history, shadows, strict=True):
        density = f.grid.spacing * np.abs(f.samples) ** 2
        inside = shadow.contains(f.x)
        records.append(LeakageRecord(f.t, shadow, float(density[inside].sum()),
                                     float(density[~inside].sum())))
    return records


@dataclass(frozen=True)
class Assertion:
    name: str
    achieved: float
    tolerance: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if math.isnan(self.achieved):
            return False
        if self.relation == "<=":
            return self.achieved <= self.tolerance
        if self.relation == ">=":
            return self.achieved >= self.tolerance
        return self.achieved > self.tolerance


@dataclass
class SuiteResult:
    series: dict[str, tuple[list[str], list[list]]] = field(default_factory=dict)
    assertions: list[Assertion] = field(default_factory=list)

    def merge(self, other: "SuiteResult"):
        self.series.update(other.series)
        self.assertions.extend(other.assertions)


def _rel(a, b) -> float:
    return abs(a - b) / abs(b)


def _evolution_suite(config: ExperimentConfig, massive: bool) -> SuiteResult:
    tag = "massive" if massive else "massless"
    profile, grid = config.profile(), config.grid()
    field0 = sample(profile, grid)
    times = sorted(set(config.times))
    if massive:
        history = [evolve_massive(field0, t, config.mass) for t in times]
    else:
        history = [evolve_massless(field0, t) for t in times]
    shadows = [causal_shadow(profile.support, t) for t in times]
    records = leakage_series(history, shadows)

    out = SuiteResult()
    out.series[f"{tag}_leakage"] = (
        ["t", "shadow_left", "shadow_right", "interior_mass", "exterior_mass", "leakage_fraction"],
        [[r.t, r.shadow.left, r.shadow.right, r.interior, r.exterior, r.fraction] for r in records],
    )
    lo, hi = profile.support
    window = (grid.x >= lo - max(times) - SNAPSHOT_PAD) & (grid.x <= hi + max(times) + SNAPSHOT_PAD)
    idx = np.flatnonzero(window)[::SNAPSHOT_STRIDE]
    out.series[f"{tag}_fields"] = (
        ["t", "x", "re", "im"],
        [[f.t, grid.x[j], f.samples[j].real, f.samples[j].imag] for f in history for j in idx],
    )

    norm0 = l2_norm(field0)
    out.assertions.append(Assertion(
        f"{tag}.unitarity", max(abs(l2_norm(f) - norm0) / norm0 for f in history),
        config.tolerance("unitarity")))
    if times[0] == 0:
        out.assertions.append(Assertion(
            f"{tag}.initial_leakage", records[0].fraction, config.tolerance("initial_leakage")))
    if len(records) > 1:
        growth = min(b.exterior - a.exterior for a, b in zip(records, records[1:]))
        out.assertions.append(Assertion(f"{tag}.exterior_mass_increasing", growth, 0.0, ">"))

    if not massive:
        out.merge(_massless_kernel_checks(config, field0, history))
    return out


def _massless_kernel_checks(config, field0, history) -> SuiteResult:
    profile, L = config.profile(), config.half_length
    lo, hi = profile.support
    probes = sorted(set(config.points) | {profile.center + 0.3 * profile.radius})
    rows, worst, worst_t0 = [], 0.0, 0.0
    for f in history:
        spectral = f.evaluate(probes)
        for x, s in zip(probes, spectral):
            k = cauchy_kernel_evolve(profile, x, f.t, half_length=L)
            rows.append([f.t, x, s.real, s.imag, k.real, k.imag])
            if f.t == 0:
                worst_t0 = max(worst_t0, abs(k - profile(x)))
            elif abs(s) > 1e-10:
                worst = max(worst, _rel(k, s))
    out = SuiteResult()
    out.series["massless_kernel"] = (
        ["t", "x", "spectral_re", "spectral_im", "kernel_re", "kernel_im"], rows)
    out.assertions.append(Assertion("massless.cross_path", worst, config.tolerance("cross_path_massless")))
    out.assertions.append(Assertion("massless.initial_reproduction", worst_t0,
                                    config.tolerance("initial_reproduction")))

    movers = split_movers(field0)
    exterior = (field0.x < lo) | (field0.x > hi)
    scale = profile.sup_norm
    cancel = float(np.max(np.abs(movers.total().samples[exterior]))) / scale
    nonlocal_ = float(np.max(np.abs(movers.right.samples[exterior]))) / scale
    out.assertions.append(Assertion("movers.cancellation", cancel, config.tolerance("mover_cancellation")))
    out.assertions.append(Assertion("movers.nonlocality", nonlocal_,
                                    config.tolerance("mover_nonlocality"), ">="))
    return out


def _tail_suite(config: ExperimentConfig) -> SuiteResult:
    profile, grid = config.profile(), config.grid()
    rows, reports = [], []
    for t in sorted(set(config.times)):
        if t == 0:
            continue
        batch = tail_survey(profile, t, config.mass, config.points, grid)
        reports.append(batch)
        rows += [[r.t, r.x, r.margin, r.spectral.real, r.spectral.imag, r.tail.real, r.tail.imag,
                  r.discrepancy] for r in batch]
    out = SuiteResult()
    out.series["tail_survey"] = (
        ["t", "x", "margin", "spectral_re", "spectral_im", "tail_re", "tail_im", "discrepancy"], rows)
    flat = [r for batch in reports for r in batch]
    if flat:
        out.assertions.append(Assertion("tail.cross_path", max(r.discrepancy for r in flat),
                                        config.tolerance("cross_path_massive")))
        out.assertions.append(Assertion("tail.nonvanishing", min(abs(r.tail) for r in flat), 0.0, ">"))
        gaps = []
        for batch in reports:
            right = sorted((r for r in batch if r.x > profile.center), key=lambda r: r.x)
            gaps += [abs(a.tail) - abs(b.tail) for a, b in zip(right, right[1:])]
        if gaps:
            out.assertions.append(Assertion("tail.decreasing", min(gaps), 0.0, ">"))
    return out


def _derivative_suite(config: ExperimentConfig) -> SuiteResult:
    profile, grid = config.profile(), config.grid()
    lo, hi = profile.support
    for x in config.points:
        if lo <= x <= hi:
            raise ConfigError(f"points: {x!r} lies inside the profile support [{lo:g}, {hi:g}]")
    points = sorted(config.points)
    spectral = spectral_time_derivative(sample(profile, grid)).evaluate(points)
    rows, real_part, reduced_err, spectral_err = [], 0.0, 0.0, 0.0
    values = []
    for x, s in zip(points, spectral):
        d = time_derivative_at_zero(profile, x)
        r = exterior_derivative_reduced(profile, x)
        dp = time_derivative_at_zero(profile, x, half_length=config.half_length)
        rows.append([x, d.real, d.imag, r.imag, dp.imag, s.real, s.imag])
        values.append((x, d.imag))
        real_part = max(real_part, abs(d.real) / profile.sup_norm)
        reduced_err = max(reduced_err, _rel(d, r))
        spectral_err = max(spectral_err, _rel(dp, s))
    out = SuiteResult()
    out.series["derivative_scan"] = (
        ["x", "re", "im", "reduced_im", "periodic_im", "spectral_re", "spectral_im"], rows)
    if values:
        out.assertions += [
            Assertion("derivative.positive", min(v for _, v in values), 0.0, ">"),
            Assertion("derivative.real_part", real_part, config.tolerance("derivative_real_part")),
            Assertion("derivative.reduced_form", reduced_err, config.tolerance("reduced_form")),
            Assertion("derivative.spectral", spectral_err, config.tolerance("spectral_derivative")),
        ]
        gaps = []
        for side in (lambda x: x > hi, lambda x: x < lo):
            run = sorted(((abs(x - profile.center), v) for x, v in values if side(x)))
            gaps += [a[1] - b[1] for a, b in zip(run, run[1:])]
        if gaps:
            out.assertions.append(Assertion("derivative.decreasing", min(gaps), 0.0, ">"))
    return out


def _wave_suite(config: ExperimentConfig) -> SuiteResult:
    profile, grid = config.profile(), config.grid()
    lo, hi = profile.support
    times = [t for t in sorted(set(config.times)) if t > 0]
    out = SuiteResult()

    # compact zero-mean velocity: the profile's own derivative
    compact = CauchyData(profile, profile.derivative, velocity_support=(lo, hi))
    rows, worst = [], 0.0
    offsets = np.linspace(1e-3, 5.0, CONFINEMENT_PROBES // 2)
    for t in times:
        shadow = causal_shadow(profile.support, t)
        for x in np.concatenate([shadow.left - offsets, shadow.right + offsets]):
            v = dalembert_evolve(compact, float(x), t)
            rows.append([t, float(x), v.real, v.imag])
            worst = max(worst, abs(v) / profile.sup_norm)
    out.series["wave_confinement"] = (["t", "x", "re", "im"], rows)
    out.assertions.append(Assertion("wave.confinement", worst, config.tolerance("confinement")))

    data = salpeter_as_wave(profile, half_length=config.half_length)
    field0 = sample(profile, grid)
    probes = sorted(set(config.points) | {profile.center + 0.3 * profile.radius})
    rows, worst = [], 0.0
    for t in times:
        spectral = evolve_massless(field0, t).evaluate(probes)
        for x, s in zip(probes, spectral):
            w = dalembert_evolve(data, x, t)
            rows.append([t, x, w.real, w.imag, s.real, s.imag])
            worst = max(worst, _rel(w, s))
    out.series["wave_salpeter"] = (["t", "x", "wave_re", "wave_im", "spectral_re", "spectral_im"], rows)
    out.assertions.append(Assertion("wave.salpeter_equivalence", worst, config.tolerance("wave_equivalence")))
    return out


def _residual_suite(config: ExperimentConfig) -> SuiteResult:
    """Second-order convergence of the discrete wave residual under joint refinement."""
    profile = config.profile()
    out = SuiteResult()
    rows = []
    masses = [0.0] + ([config.mass] if config.mass else [])
    for m in masses:
        residuals = []
        for level in range(3):
            grid = Grid1D(config.half_length, config.n_points * 2**level)
            field0 = sample(profile, grid)
            tau = 0.5 * grid.spacing
            t0 = 0.5
            if m:
                history = [evolve_massive(field0, t0 + k * tau, m) for k in range(3)]
            else:
                history = [evolve_massless(field0, t0 + k * tau) for k in range(3)]
            residuals.append(wave_residual(history, tau, mass=m))
            rows.append([m, grid.spacing, tau, residuals[-1]])
        ratio = min(a / b for a, b in zip(residuals, residuals[1:]))
        label = "massive" if m else "massless"
        out.assertions.append(Assertion(f"residual.{label}_convergence", ratio,
                                        config.tolerance("wave_convergence"), ">="))
    out.series["wave_residual"] = (["mass", "h", "tau", "residual"], rows)
    return out


def _paley_wiener_suite(config: ExperimentConfig) -> SuiteResult:
    profile = config.profile()
    rows = []
    out = SuiteResult()
    for order in (1, 2, 4):
        try:
            report = paley_wiener_check(profile, order)
            interior = 1.0
        except BoundNotVerifiedError as exc:
            report, interior = exc.report, 0.0
        rows.append(["bump", order, report.constant, report.argmax, report.p_max])
        out.assertions.append(Assertion(f"paley_wiener.order_{order}", interior, 1.0, ">="))
    truncated = TruncatedBump(profile.center, profile.radius, profile.amplitude,
                              cut=profile.center + 0.5 * profile.radius)
    try:
        report = paley_wiener_check(truncated, 2)
        rejected = 0.0
    except BoundNotVerifiedError as exc:
        report, rejected = exc.report, 1.0
    rows.append(["truncated", 2, report.constant, report.argmax, report.p_max])
    out.assertions.append(Assertion("paley_wiener.truncated_rejected", rejected, 1.0, ">="))
    out.series["paley_wiener"] = (["profile", "order", "constant", "argmax", "p_max"], rows)
    return out


_SUITES = {
    "massless-evolve": [lambda c: _evolution_suite(c, massive=False)],
    "massive-evolve": [lambda c: _evolution_suite(c, massive=True)],
    "tail-survey": [_tail_suite],
    "derivative-scan": [_derivative_suite],
    "wave-contrast": [_wave_suite],
}
_SUITES["verify-all"] = [s for mode in MODES[:-1] for s in _SUITES[mode]] + [
    _residual_suite, _paley_wiener_suite]


def wraparound_estimates(config: ExperimentConfig) -> dict[str, float]:
    """Rough size of periodic-image contamination, relative to the profile height.

    Massless tails decay like t * integral(f) / (pi x^2), so the images at
    distance 2Ln add up to about t * integral(f) * pi / (12 L^2); massive
    tails are exponentially small in the image distance.
    """
    profile = config.profile()
    area = SQRT_2PI * fourier_transform(profile, 0.0).real
    t_max = max(config.times)
    L = config.half_length
    est = {"massless": area * t_max * math.pi / (12.0 * L * L) / profile.sup_norm}
    if config.mass:
        gap = 2.0 * L - 2.0 * profile.radius - t_max
        est["massive"] = area * math.exp(-config.mass * gap) / profile.sup_norm
    return est


@dataclass
class RunResult:
    config: ExperimentConfig
    assertions: list[Assertion]
    files: dict[str, str]

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1


def _manifest_lines(config: ExperimentConfig) -> list[str]:
    lines = [f"salpeter-lab {__version__}", "units: hbar = c = 1", "config:"]
    lines += ["  " + line for line in format_config(config).splitlines()]
    for name, value in wraparound_estimates(config).items():
        lines.append(f"wraparound_{name}_relative_amplitude = {value:.3e}")
    return lines


def _csv_text(manifest: list[str], header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    for line in manifest:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.17g}" if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def run(config: ExperimentConfig, output_dir: str | os.PathLike | None = None) -> RunResult:
    """Execute the suites for ``config.mode`` and write all outputs at the end."""
    config.validate()
    result = SuiteResult()
    for suite in _SUITES[config.mode]:
        result.merge(suite(config))

    manifest = _manifest_lines(config)
    files = {"config.txt": format_config(config),
             "manifest.txt": "".join(f"# {line}\n" for line in manifest)}
    for name, (header, rows) in result.series.items():
        files[f"{name}.csv"] = _csv_text(manifest, header, rows)
    files["summary.csv"] = _csv_text(
        manifest, ["assertion", "achieved", "tolerance", "relation", "passed"],
        [[a.name, float(a.achieved), float(a.tolerance), a.relation, "pass" if a.passed else "FAIL"]
         for a in result.assertions])

    out = Path(output_dir if output_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    try:
        for name, text in files.items():
            (staging / name).write_text(text)
        for name in files:
            os.replace(staging / name, out / name)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return RunResult(replace(config), result.assertions, files)
