"""Run configuration for the command-line tools.

Configs are flat ``key = value`` text files; ``#`` starts a comment, blank
lines are ignored.  Unknown or duplicate keys are hard errors so that a
typo in a physics parameter cannot silently fall back to a default.

Keys
----
model:       omega0, beta ("vacuum" or a positive float), and exactly one of
             * modes            explicit list, "omega:g, omega:g, ..."
             * density (ohmic|flat), eta, omega_c (ohmic only),
               omega_min, omega_max, mode_count
simulation:  t_max, samples, rk4_substeps (optional, default automatic)
state:       rho00, rho01 (complex literal, e.g. "0.3+0.1j")
oracle:      oracle_enabled (true|false, default false), n_max (default 4)
output:      output_format (csv), output_path (optional if --out is given)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spin_boson import (SpectralDiscretization, SpinBosonModel, flat_density,
                         ohmic_density)

__all__ = ["ConfigError", "RunConfig", "parse_config_text", "load_config"]


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


_KNOWN_KEYS = {
    "omega0", "beta", "modes",
    "density", "eta", "omega_c", "omega_min", "omega_max", "mode_count",
    "t_max", "samples", "rk4_substeps",
    "rho00", "rho01",
    "oracle_enabled", "n_max",
    "output_format", "output_path",
}

_REQUIRED_KEYS = {"omega0", "beta", "t_max", "samples", "rho00", "rho01"}

_DISCRETIZATION_KEYS = ("density", "eta", "omega_min", "omega_max", "mode_count")


@dataclass(frozen=True)
class RunConfig:
    omega0: float
    beta: float
    modes: tuple[tuple[float, float], ...] | None
    density: str | None
    eta: float | None
    omega_c: float | None
    omega_min: float | None
    omega_max: float | None
    mode_count: int | None
    t_max: float
    samples: int
    rk4_substeps: int | None
    rho00: float
    rho01: complex
    oracle_enabled: bool
    n_max: int
    output_format: str
    output_path: str | None

    def discretization(self) -> SpectralDiscretization | None:
        if self.density is None:
            return None
        if self.density == "ohmic":
            j = ohmic_density(self.eta, self.omega_c)
        else:
            j = flat_density(self.eta)
        return SpectralDiscretization(j, self.omega_min, self.omega_max,
                                      self.mode_count)

    def model(self) -> SpinBosonModel:
        if self.modes is not None:
            return SpinBosonModel(self.omega0, self.modes, self.beta)
        return self.discretization().build_model(self.omega0, self.beta)

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    def initial_state(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01],
                         [np.conj(self.rho01), 1.0 - self.rho00]], dtype=complex)

    def model_tag(self) -> str:
        beta = "vacuum" if self.beta == math.inf else f"{self.beta:g}"
        n = len(self.modes) if self.modes is not None else self.mode_count
        return f"spin-boson(omega0={self.omega0:g},beta={beta},modes={n})"


def _parse_float(value: str) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ConfigError(f"expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"expected a finite number, got {value!r}")
    return out


def _parse_positive_float(value: str) -> float:
    out = _parse_float(value)
    if out <= 0:
        raise ConfigError(f"expected a positive number, got {value!r}")
    return out


def _parse_int(value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"expected an integer, got {value!r}") from None


def _parse_beta(value: str) -> float:
    if value.lower() == "vacuum":
        return math.inf
    return _parse_positive_float(value)


def _parse_bool(value: str) -> bool:
    low = value.lower()
    if low in ("true", "false"):
        return low == "true"
    raise ConfigError(f"expected true or false, got {value!r}")


def _parse_complex(value: str) -> complex:
    try:
        return complex(value.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"expected a complex literal like 0.3+0.1j, got {value!r}") from None


def _parse_modes(value: str) -> tuple[tuple[float, float], ...]:
    modes = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 2:
            raise ConfigError(f"mode entries are 'omega:g', got {item!r}")
        omega = _parse_positive_float(parts[0].strip())
        g = _parse_float(parts[1].strip())
        modes.append((omega, g))
    if not modes:
        raise ConfigError("mode list is empty")
    return tuple(modes)


def parse_config_text(text: str) -> RunConfig:
    raw: dict[str, str] = {}
    line_of: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} "
                              f"(first set on line {line_of[key]})")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        raw[key] = value
        line_of[key] = lineno

    def convert(key, parser, default=None):
        if key not in raw:
            return default
        try:
            return parser(raw[key])
        except ConfigError as exc:
            raise ConfigError(f"line {line_of[key]}: field {key!r}: {exc}") from None

    missing = sorted(_REQUIRED_KEYS - raw.keys())
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    has_modes = "modes" in raw
    disc_present = [k for k in _DISCRETIZATION_KEYS + ("omega_c",) if k in raw]
    if has_modes and disc_present:
        raise ConfigError(
            f"give either an explicit mode list or a discretization, not both "
            f"(offending keys: {', '.join(sorted(disc_present))})")
    if not has_modes:
        missing_disc = [k for k in _DISCRETIZATION_KEYS if k not in raw]
        if missing_disc:
            raise ConfigError(
                f"no mode list given and the discretization block is incomplete: "
                f"missing {', '.join(missing_disc)}")

    density = convert("density", str)
    if density is not None and density not in ("ohmic", "flat"):
        raise ConfigError(
            f"line {line_of['density']}: field 'density': expected ohmic or flat, "
            f"got {density!r}")
    if density == "ohmic" and "omega_c" not in raw:
        raise ConfigError("ohmic density requires omega_c")

    cfg = RunConfig(
        omega0=convert("omega0", _parse_positive_float),
        beta=convert("beta", _parse_beta),
        modes=convert("modes", _parse_modes),
        density=density,
        eta=convert("eta", _parse_positive_float),
        omega_c=convert("omega_c", _parse_positive_float),
        omega_min=convert("omega_min", _parse_float),
        omega_max=convert("omega_max", _parse_positive_float),
        mode_count=convert("mode_count", _parse_int),
        t_max=convert("t_max", _parse_positive_float),
        samples=convert("samples", _parse_int),
        rk4_substeps=convert("rk4_substeps", _parse_int),
        rho00=convert("rho00", _parse_float),
        rho01=convert("rho01", _parse_complex, default=0j),
        oracle_enabled=convert("oracle_enabled", _parse_bool, default=False),
        n_max=convert("n_max", _parse_int, default=4),
        output_format=convert("output_format", str, default="csv"),
        output_path=convert("output_path", str),
    )

    if cfg.samples < 1:
        raise ConfigError(f"samples must be at least 1, got {cfg.samples}")
    if cfg.samples > 1 and cfg.t_max <= 0:
        raise ConfigError("t_max must be positive")
    if cfg.rk4_substeps is not None and cfg.rk4_substeps < 1:
        raise ConfigError(f"rk4_substeps must be at least 1, got {cfg.rk4_substeps}")
    if cfg.n_max < 1:
        raise ConfigError(f"n_max must be at least 1, got {cfg.n_max}")
    if cfg.mode_count is not None and cfg.mode_count < 1:
        raise ConfigError(f"mode_count must be at least 1, got {cfg.mode_count}")
    if cfg.output_format != "csv":
        raise ConfigError(f"output_format must be csv, got {cfg.output_format!r}")
    if not 0.0 <= cfg.rho00 <= 1.0:
        raise ConfigError(f"rho00 must lie in [0, 1], got {cfg.rho00}")
    if abs(cfg.rho01) ** 2 > cfg.rho00 * (1.0 - cfg.rho00) + 1e-15:
        raise ConfigError(
            f"initial state not positive semidefinite: |rho01|^2 = {abs(cfg.rho01)**2:.6g} "
            f"exceeds rho00*(1-rho00) = {cfg.rho00 * (1 - cfg.rho00):.6g}")
    try:
        if cfg.density is not None:
            cfg.discretization()
        cfg.model()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    return parse_config_text(text)
