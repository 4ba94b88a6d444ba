"""Run configuration: INI parsing, validation and SI to reduced-unit conversion.

Grammar (all physical inputs in SI)::

    [atom_a]                 ; the moving, excited atom
    name = Rb
    omega = 2.0e15           ; transition angular frequency, rad/s
    dipole = 2.5e-29         ; transition dipole magnitude, C m
    linewidth = 1.0e9        ; rad/s
    mass = 1.4e-25           ; kg

    [atom_b]                 ; ground-state partner (same keys)

    [pair]                   ; exactly one of [pair] or [plate]
    separation = 1e-8        ; m, along z
    speed = 10               ; m/s
    direction = 0, 0, 1      ; velocity direction, separation along +z

    [plate]
    height = 1e-8            ; m
    density = 1e18           ; m^-2
    speed = 10               ; m/s, parallel to the plate (along x)

    [time]                   ; optional; omit for the long-time average
    observation = 1e-9       ; s

    [sweep]                  ; optional
    variable = separation    ; separation | height | speed | rho
    grid = log               ; log | linear
    start = 1e-9
    stop = 1e-7
    count = 20

    [output]
    format = csv             ; csv | jsonl
    path = forces.csv        ; omit or "-" for stdout
    components = vdw_doppler, vdw_lag, vdw_theta, roentgen_c, roentgen_nc, total

    [validity]
    enforce = strict         ; strict | warn

    [verify]                 ; optional settings for the verify subcommand
    suite = gradients, residues
"""
import configparser
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
from scipy import constants

from .errors import ConfigError, PoleError, ValidityError, ValidityWarning
from .plate import PlateConfig
from .state import PairState, validity_problems

C_SI = constants.c
HBAR = constants.hbar
EPS0 = constants.epsilon_0

COMPONENTS = ("vdw_doppler", "vdw_lag", "vdw_theta", "roentgen_c", "roentgen_nc", "total")
SWEEP_VARIABLES = ("separation", "height", "speed", "rho")
SUITES = ("gradients", "residues", "linearity", "plate", "orientation")


@dataclass(frozen=True)
class AtomSpecies:
    """Two-level atom in SI units."""

    name: str
    omega: float
    dipole: float
    linewidth: float
    mass: float

    def __post_init__(self):
        for key in ("omega", "dipole", "linewidth", "mass"):
            value = getattr(self, key)
            if not (np.isfinite(value) and value > 0):
                raise ConfigError(f"atom {self.name!r}: {key} must be positive, got {value}")


@dataclass(frozen=True)
class PairGeometry:
    separation: float
    speed: float
    direction: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not self.separation > 0:
            raise ConfigError("pair separation must be positive")
        if self.speed < 0:
            raise ConfigError("speed must be non-negative")
        u = np.asarray(self.direction, dtype=float)
        if u.shape != (3,) or not np.linalg.norm(u) > 0:
            raise ConfigError("direction must be a nonzero 3-vector")
        object.__setattr__(self, "direction", tuple(u / np.linalg.norm(u)))


@dataclass(frozen=True)
class PlateGeometry:
    height: float
    density: float
    speed: float

    def __post_init__(self):
        if not self.height > 0:
            raise ConfigError("plate height must be positive")
        if not self.density > 0:
            raise ConfigError("plate density must be positive")
        if self.speed < 0:
            raise ConfigError("speed must be non-negative")


@dataclass(frozen=True)
class Sweep:
    variable: str
    grid: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if self.grid not in ("log", "linear"):
            raise ConfigError("sweep grid must be 'log' or 'linear'")
        if not (0 < self.start < self.stop):
            raise ConfigError("sweep bounds must be positive and ordered")
        if self.count < 1:
            raise ConfigError("sweep count must be at least 1")

    def values(self):
        if self.grid == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration (SI units)."""

    atom_a: AtomSpecies
    atom_b: AtomSpecies
    pair: Optional[PairGeometry] = None
    plate: Optional[PlateGeometry] = None
    observation_time: Optional[float] = None
    sweep: Optional[Sweep] = None
    format: str = "csv"
    path: Optional[str] = None
    components: Tuple[str, ...] = COMPONENTS
    enforce: str = "strict"
    suite: Tuple[str, ...] = ()

    def __post_init__(self):
        if (self.pair is None) == (self.plate is None):
            raise ConfigError("exactly one of [pair] or [plate] is required")
        if self.format not in ("csv", "jsonl"):
            raise ConfigError("format must be 'csv' or 'jsonl'")
        if self.enforce not in ("strict", "warn"):
            raise ConfigError("validity enforce must be 'strict' or 'warn'")
        bad = [c for c in self.components if c not in COMPONENTS]
        if bad or not self.components:
            raise ConfigError(f"components must be a non-empty subset of {COMPONENTS}")
        if self.observation_time is not None and not self.observation_time > 0:
            raise ConfigError("observation time must be positive")
        if self.observation_time is not None and self.plate is not None:
            raise ConfigError("[time] is not supported with [plate]: plate sums use the long-time average")
        if self.sweep is not None:
            geometry_var = {"separation": self.pair, "height": self.plate}
            if self.sweep.variable in geometry_var and geometry_var[self.sweep.variable] is None:
                raise ConfigError(f"sweep variable {self.sweep.variable!r} does not match the geometry")

    @property
    def geometry(self):
        return "pair" if self.pair is not None else "plate"

    def with_(self, **changes):
        return replace(self, **changes)

    def at(self, variable, value):
        """Copy with one sweep variable set to ``value`` (SI, or ratio for ``rho``)."""
        if variable == "separation":
            return self.with_(pair=replace(self.pair, separation=value))
        if variable == "height":
            return self.with_(plate=replace(self.plate, height=value))
        if variable == "speed":
            if self.pair is not None:
                return self.with_(pair=replace(self.pair, speed=value))
            return self.with_(plate=replace(self.plate, speed=value))
        if variable == "rho":
            return self.with_(atom_b=replace(self.atom_b, omega=value * self.atom_a.omega))
        raise ConfigError(f"unknown sweep variable {variable!r}")


def _split(text):
    return tuple(s.strip() for s in text.replace(";", ",").split(",") if s.strip())


def _float(section, key, default=None):
    if key not in section:
        if default is None:
            raise ConfigError(f"[{section.name}] missing key {key!r}")
        return default
    try:
        return float(section[key])
    except ValueError as exc:
        raise ConfigError(f"[{section.name}] {key} is not a number: {section[key]!r}") from exc


def _atom(cp, name):
    if name not in cp:
        raise ConfigError(f"missing section [{name}]")
    s = cp[name]
    return AtomSpecies(
        name=s.get("name", name),
        omega=_float(s, "omega"),
        dipole=_float(s, "dipole"),
        linewidth=_float(s, "linewidth"),
        mass=_float(s, "mass"),
    )


def parse_config(text):
    """Parse INI text into a :class:`RunConfig`."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    known = {"atom_a", "atom_b", "pair", "plate", "time", "sweep", "output", "validity", "verify"}
    unknown = set(cp.sections()) - known
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    pair = plate = None
    if "pair" in cp:
        s = cp["pair"]
        direction = _split(s.get("direction", "0, 0, 1"))
        try:
            direction = tuple(float(c) for c in direction)
        except ValueError as exc:
            raise ConfigError(f"[pair] direction must be three numbers: {s['direction']!r}") from exc
        pair = PairGeometry(_float(s, "separation"), _float(s, "speed"), direction)
    if "plate" in cp:
        s = cp["plate"]
        plate = PlateGeometry(_float(s, "height"), _float(s, "density"), _float(s, "speed"))
    observation = None
    if "time" in cp and "observation" in cp["time"]:
        observation = _float(cp["time"], "observation")
    sweep = None
    if "sweep" in cp:
        s = cp["sweep"]
        try:
            count = int(s.get("count", "10"))
        except ValueError as exc:
            raise ConfigError("[sweep] count must be an integer") from exc
        sweep = Sweep(s.get("variable", ""), s.get("grid", "log"),
                      _float(s, "start"), _float(s, "stop"), count)
    out = cp["output"] if "output" in cp else {}
    path = out.get("path") if out else None
    components = _split(out.get("components", ",".join(COMPONENTS))) if out else COMPONENTS
    enforce = cp["validity"].get("enforce", "strict") if "validity" in cp else "strict"
    suite = _split(cp["verify"].get("suite", "")) if "verify" in cp else ()
    return RunConfig(
        atom_a=_atom(cp, "atom_a"), atom_b=_atom(cp, "atom_b"), pair=pair, plate=plate,
        observation_time=observation, sweep=sweep,
        format=out.get("format", "csv") if out else "csv",
        path=None if path in (None, "", "-") else path,
        components=components, enforce=enforce, suite=suite,
    )


def load_config(path):
    """Read and parse a config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc


@dataclass(frozen=True)
class Scales:
    """SI back-conversion factors of a reduced run.

    ``force_scale`` multiplies a reduced force (coupling numerator 1) to give
    newtons; ``coupling_si`` is ``mu_A^2 mu_B^2 / ((4 pi eps0)^2 hbar Delta)``
    in J m^6.
    """

    k_a: float
    delta_red: float
    numerator_si: float
    coupling_si: float
    force_scale: float
    length_scale: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "length_scale", 1.0 / self.k_a)


@dataclass(frozen=True)
class Reduced:
    """Reduced-unit state of a run point plus its SI scales and validity notes."""

    state: object
    scales: Scales
    problems: Tuple[str, ...] = ()


def reduced_scales(cfg):
    """Reduced detuning and SI scale factors for the configured atoms."""
    a, b = cfg.atom_a, cfg.atom_b
    if a.omega == b.omega:
        raise PoleError("omega_A = omega_B: zero detuning")
    k_a = a.omega / C_SI
    delta_red = 1.0 - b.omega / a.omega
    numerator_si = a.dipole**2 * b.dipole**2 / ((4 * np.pi * EPS0) ** 2 * HBAR * a.omega)
    return Scales(k_a=k_a, delta_red=delta_red, numerator_si=numerator_si,
                  coupling_si=numerator_si / delta_red, force_scale=numerator_si * k_a**7)


def to_reduced(cfg):
    """Convert a :class:`RunConfig` to a :class:`PairState` or :class:`PlateConfig`.

    Raises
    ------
    PoleError
        If the two transition frequencies coincide.
    ValidityError
        If the quasiresonant window is violated and ``enforce = strict``.
    """
    sc = reduced_scales(cfg)
    a, b = cfg.atom_a, cfg.atom_b
    rho = b.omega / a.omega
    gamma_a, gamma_b = a.linewidth / a.omega, b.linewidth / a.omega
    T_red = None if cfg.observation_time is None else a.omega * cfg.observation_time
    problems = tuple(validity_problems(rho, gamma_a, gamma_b, T_red))
    if problems:
        message = "quasiresonant window violated: " + "; ".join(problems)
        if cfg.enforce == "strict":
            raise ValidityError(message)
        warnings.warn(message, ValidityWarning, stacklevel=2)
    if cfg.pair is not None:
        g = cfg.pair
        beta = g.speed / C_SI
        state = PairState.from_vectors(
            np.array([0.0, 0.0, sc.k_a * g.separation]), beta * np.asarray(g.direction), rho,
            T_red=T_red, gamma_A=gamma_a, gamma_B=gamma_b,
        )
    else:
        g = cfg.plate
        state = PlateConfig(
            d_red=sc.k_a * g.height, sigma_red=g.density / sc.k_a**2, beta=g.speed / C_SI,
            rho=rho, T_red=T_red, gamma_A=gamma_a, gamma_B=gamma_b,
        )
    return Reduced(state=state, scales=sc, problems=problems)
