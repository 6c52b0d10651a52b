"""
Run configuration: TOML files mapped onto strict dataclasses.

Unknown keys, missing required keys and type mismatches raise ConfigError
with the dotted path of the offending entry.
"""

import dataclasses
import math
import sys
import typing
from dataclasses import dataclass, field

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .kinetic_mc import McConfig
from .params import BeamParams, MediumParams

ENGINES = ("general", "dicke", "ramsey-1d", "ramsey-2d")
EVOLVE_MODES = ("store", "slowlight")


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the field path."""


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    num: int
    spacing: str = "linear"

    def validate(self, path):
        if self.num < 2:
            raise ConfigError(f"{path}.num: need at least 2 points, got {self.num}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"{path}.spacing: expected 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError(f"{path}: log spacing needs positive start and stop")
        if not self.stop > self.start:
            raise ConfigError(f"{path}: stop must exceed start")

    def values(self):
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.num)
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class MediumSection:
    v_th: float
    gamma: float
    Gamma_d: float
    Gamma_21: float
    omega_21: float = 0.0
    coupling: float = 1.0


@dataclass(frozen=True)
class BeamSection:
    q1: float
    delta_q: typing.List[float] = (0.0, 0.0, 0.0)
    Omega_2: typing.List[float] = (0.0, 0.0)
    Delta_1: float = 0.0
    Delta: float = 0.0


@dataclass(frozen=True)
class SpectrumSection:
    engine: str
    grid: GridSpec
    k_perp: typing.List[float] = (0.0, 0.0)
    omega: float = 0.0
    rtol: float = 1e-10


@dataclass(frozen=True)
class RamseySection:
    a: float
    Gamma: float
    K_pow: float
    D: float
    K: float = 1.0


@dataclass(frozen=True)
class FwhmScanSection:
    k: GridSpec
    gammas: typing.List[float]
    rtol: float = 1e-10


@dataclass(frozen=True)
class FilterSection:
    propagation_length: float
    include_diffraction: bool = True


@dataclass(frozen=True)
class EvolveSection:
    mode: str
    t: float


@dataclass(frozen=True)
class McSection:
    n_atoms: int
    dt: float
    t_total: float
    seed: int
    deltas: typing.List[float]
    k_perp: typing.List[float] = (0.0, 0.0)
    chunk_size: typing.Optional[int] = None


@dataclass(frozen=True)
class VerifySection:
    suites: typing.List[str] = ()
    dicke_rel_tol: float = 0.05
    dicke_draws: int = 50
    ramsey_rel_tol: float = 1e-4
    mc_sigmas: float = 3.0


@dataclass(frozen=True)
class RunConfig:
    medium: typing.Optional[MediumSection] = None
    beams: typing.Optional[BeamSection] = None
    spectrum: typing.Optional[SpectrumSection] = None
    ramsey: typing.Optional[RamseySection] = None
    fwhm_scan: typing.Optional[FwhmScanSection] = None
    filter: typing.Optional[FilterSection] = None
    evolve: typing.Optional[EvolveSection] = None
    mc: typing.Optional[McSection] = None
    verify: typing.Optional[VerifySection] = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(f"{name}: section is required for this command")

    def medium_params(self):
        self.require("medium")
        try:
            return MediumParams(**dataclasses.asdict(self.medium))
        except ValueError as exc:
            raise ConfigError(f"medium: {exc}") from None

    def beam_params(self):
        self.require("beams")
        b = self.beams
        om = list(b.Omega_2)
        try:
            return BeamParams(q1=b.q1, delta_q=tuple(b.delta_q), Omega_2=complex(om[0], om[1]),
                              Delta_1=b.Delta_1, Delta=b.Delta)
        except ValueError as exc:
            raise ConfigError(f"beams: {exc}") from None

    def mc_config(self):
        self.require("mc")
        m = self.mc
        try:
            return McConfig(m.n_atoms, m.dt, m.t_total, m.seed, m.chunk_size)
        except ValueError as exc:
            raise ConfigError(f"mc: {exc}") from None


def _type_name(tp):
    return getattr(tp, "__name__", str(tp))


def _convert(value, tp, path):
    origin = typing.get_origin(tp)
    if origin is typing.Union:
        inner = [a for a in typing.get_args(tp) if a is not type(None)][0]
        return _convert(value, inner, path)
    if origin in (list, typing.List):
        (inner,) = typing.get_args(tp)
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list, got {type(value).__name__}")
        return tuple(_convert(v, inner, f"{path}[{i}]") for i, v in enumerate(value))
    if dataclasses.is_dataclass(tp):
        return _build(tp, value, path)
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected true/false, got {value!r}")
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        if not math.isfinite(value):
            raise ConfigError(f"{path}: must be finite")
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{path}: unsupported type {_type_name(tp)}")


def _build(cls, data, path):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or '<root>'}: expected a table")
    hints = typing.get_type_hints(cls)
    known = {f.name: f for f in dataclasses.fields(cls) if f.name != "raw"}
    prefix = f"{path}." if path else ""
    for key in data:
        if key not in known:
            raise ConfigError(f"{prefix}{key}: unknown key")
    kwargs = {}
    for name, f in known.items():
        if name in data:
            kwargs[name] = _convert(data[name], hints[name], prefix + name)
        elif f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING:
            raise ConfigError(f"{prefix}{name}: required key missing")
    return cls(**kwargs)


def _vector(values, path, sizes=(2, 3)):
    if len(values) not in sizes:
        raise ConfigError(f"{path}: expected {' or '.join(map(str, sizes))} components")


def _validate(cfg):
    if cfg.beams is not None:
        _vector(cfg.beams.delta_q, "beams.delta_q")
        _vector(cfg.beams.Omega_2, "beams.Omega_2", (2,))
    if cfg.spectrum is not None:
        if cfg.spectrum.engine not in ENGINES:
            raise ConfigError(f"spectrum.engine: expected one of {ENGINES}, got {cfg.spectrum.engine!r}")
        cfg.spectrum.grid.validate("spectrum.grid")
        _vector(cfg.spectrum.k_perp, "spectrum.k_perp")
    if cfg.fwhm_scan is not None:
        cfg.fwhm_scan.k.validate("fwhm_scan.k")
        if not cfg.fwhm_scan.gammas:
            raise ConfigError("fwhm_scan.gammas: must list at least one gamma")
        if any(g <= 0 for g in cfg.fwhm_scan.gammas):
            raise ConfigError("fwhm_scan.gammas: values must be > 0")
    if cfg.evolve is not None:
        if cfg.evolve.mode not in EVOLVE_MODES:
            raise ConfigError(f"evolve.mode: expected one of {EVOLVE_MODES}, got {cfg.evolve.mode!r}")
        if not cfg.evolve.t >= 0:
            raise ConfigError("evolve.t: must be >= 0")
    if cfg.filter is not None and not cfg.filter.propagation_length >= 0:
        raise ConfigError("filter.propagation_length: must be >= 0")
    if cfg.mc is not None:
        _vector(cfg.mc.k_perp, "mc.k_perp")
        if not cfg.mc.deltas:
            raise ConfigError("mc.deltas: must list at least one detuning")
    if cfg.medium is not None:
        cfg.medium_params()
    if cfg.beams is not None:
        cfg.beam_params()
    if cfg.mc is not None:
        cfg.mc_config()


def parse_config(data):
    """Build a validated RunConfig from a parsed TOML mapping."""
    cfg = _build(RunConfig, data, "")
    _validate(cfg)
    return dataclasses.replace(cfg, raw=data)


def load_config(path):
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"<file>: cannot read {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"<file>: invalid TOML: {exc}") from None
    return parse_config(data)


def flatten(data, prefix=""):
    """Dotted key/value pairs of a nested mapping, sorted."""
    out = []
    for key in sorted(data):
        value = data[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.extend(flatten(value, name + "."))
        else:
            out.append((name, value))
    return out
