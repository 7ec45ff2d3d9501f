"""Physical input handling and nondimensionalization.

All downstream numerics work in units hbar = m = Omega = 1: frequencies are
measured in units of the base frequency Omega, positions in sqrt(hbar/(m*Omega)),
momenta in sqrt(hbar*m*Omega).  The geometry enters only through the reduced
distances rho = R*omega_c/c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, GeometryError

# CODATA values
HBAR_JS = 1.054571817e-34      # J s
HBAR_EVS = 6.582119569e-16     # eV s
KB_JK = 1.380649e-23           # J / K

GHZ = 1.0e9                    # rad/s per "GHz" frequency unit used in configs
NM = 1.0e-9                    # m


def cutoff_from_mev(energy_mev: float) -> float:
    """Convert a cutoff energy hbar*omega_c in meV to omega_c in rad/s."""
    return energy_mev * 1.0e-3 / HBAR_EVS


def temperature_ratio_from_kelvin(temperature_k: float, cutoff: float) -> float:
    """Convert a temperature in K to the dimensionless ratio k_B T / (hbar omega_c)."""
    return KB_JK * temperature_k / (HBAR_JS * cutoff)


@dataclass
class Geometry:
    """Oscillator arrangement; distances are in meters.

    kind is one of 'two_oscillators', 'linear', 'isosceles_perp',
    'equilateral', 'custom'.  For 'linear' the middle oscillator sits at
    R/2 + r from the first, so the three separations are (R/2+r, R/2-r, R).
    For 'isosceles_perp' it is displaced by r perpendicular to the pair axis,
    giving two equal separations sqrt(r^2 + (R/2)^2).
    """

    kind: str
    R: float = 0.0
    r: float = 0.0
    positions: list | None = None

    @classmethod
    def two_oscillators(cls, R: float) -> "Geometry":
        return cls("two_oscillators", R=R)

    @classmethod
    def linear(cls, R: float, r: float = 0.0) -> "Geometry":
        return cls("linear", R=R, r=r)

    @classmethod
    def isosceles_perp(cls, R: float, r: float = 0.0) -> "Geometry":
        return cls("isosceles_perp", R=R, r=r)

    @classmethod
    def equilateral(cls, R: float) -> "Geometry":
        return cls("equilateral", R=R)

    @classmethod
    def custom(cls, positions) -> "Geometry":
        return cls("custom", positions=[np.asarray(p, dtype=float) for p in positions])

    @property
    def n_oscillators(self) -> int:
        if self.kind == "two_oscillators":
            return 2
        if self.kind in ("linear", "isosceles_perp", "equilateral"):
            return 3
        if self.kind == "custom":
            return len(self.positions or [])
        raise GeometryError(f"unknown geometry kind {self.kind!r}")

    def validate(self) -> None:
        if self.kind not in ("two_oscillators", "linear", "isosceles_perp",
                             "equilateral", "custom"):
            raise GeometryError(f"unknown geometry kind {self.kind!r}")
        if self.kind == "custom":
            if not self.positions:
                raise GeometryError("custom geometry needs at least one position")
            dims = {np.asarray(p).shape for p in self.positions}
            if len(dims) != 1 or len(next(iter(dims))) != 1:
                raise GeometryError("custom positions must be equal-length flat vectors")
            return
        if self.R < 0:
            raise GeometryError(f"distance R must be nonnegative, got {self.R}")
        if self.kind == "linear":
            if abs(self.r) >= self.R / 2:
                raise GeometryError(
                    f"linear displacement must satisfy |r| < R/2, got r={self.r}, R={self.R}")


def pair_distances(geometry: Geometry) -> np.ndarray:
    """Symmetric matrix of pairwise oscillator distances in meters."""
    geometry.validate()
    n = geometry.n_oscillators
    d = np.zeros((n, n))
    if geometry.kind == "two_oscillators":
        d[0, 1] = d[1, 0] = geometry.R
    elif geometry.kind == "linear":
        ab = geometry.R / 2 + geometry.r
        bc = geometry.R / 2 - geometry.r
        d[0, 1] = d[1, 0] = ab
        d[1, 2] = d[2, 1] = bc
        d[0, 2] = d[2, 0] = geometry.R
    elif geometry.kind == "isosceles_perp":
        leg = math.hypot(geometry.r, geometry.R / 2)
        d[0, 1] = d[1, 0] = leg
        d[1, 2] = d[2, 1] = leg
        d[0, 2] = d[2, 0] = geometry.R
    elif geometry.kind == "equilateral":
        d[:] = geometry.R
        np.fill_diagonal(d, 0.0)
    else:  # custom
        pos = np.array(geometry.positions, dtype=float)
        diff = pos[:, None, :] - pos[None, :, :]
        d = np.sqrt((diff ** 2).sum(axis=-1))
    return d


@dataclass
class PhysicalConfig:
    """Laboratory-unit description of the oscillators and their environment.

    mass in kg, all rates (base_frequency, frequencies, gamma, cutoff) in
    rad/s, sound_speed in m/s, temperature as the dimensionless ratio
    k_B T / (hbar omega_c).  Use `cutoff_from_mev` / `temperature_ratio_from_kelvin`
    to build these from an energy cutoff or a temperature in kelvin.
    """

    mass: float
    base_frequency: float
    frequencies: tuple
    bath_dimension: int
    gamma: float
    cutoff: float
    sound_speed: float
    temperature_ratio: float
    geometry: Geometry

    def validate(self) -> None:
        if self.mass <= 0:
            raise ConfigurationError(f"mass must be positive, got {self.mass}")
        if self.base_frequency <= 0:
            raise ConfigurationError("base frequency must be positive")
        if len(self.frequencies) < 1:
            raise ConfigurationError("need at least one oscillator frequency")
        if any(f <= 0 for f in self.frequencies):
            raise ConfigurationError(f"oscillator frequencies must be positive: {self.frequencies}")
        if self.bath_dimension not in (1, 2, 3):
            raise ConfigurationError(f"bath dimension must be 1, 2 or 3, got {self.bath_dimension}")
        if self.gamma < 0:
            raise ConfigurationError("coupling gamma must be nonnegative")
        if self.cutoff <= 0:
            raise ConfigurationError("cutoff frequency must be positive")
        if self.sound_speed <= 0:
            raise ConfigurationError("sound speed must be positive")
        if self.temperature_ratio < 0:
            raise ConfigurationError("temperature must be nonnegative")
        self.geometry.validate()
        n = self.geometry.n_oscillators
        if len(self.frequencies) != n:
            raise ConfigurationError(
                f"{len(self.frequencies)} frequencies given for {n}-oscillator geometry")
        if self.geometry.kind == "custom":
            space = len(np.asarray(self.geometry.positions[0]))
            if space != self.bath_dimension:
                raise GeometryError(
                    f"custom positions are {space}-dimensional but the bath is "
                    f"{self.bath_dimension}-dimensional")


@dataclass
class DimensionlessConfig:
    """The nondimensionalized problem (hbar = m = Omega = 1).

    frequencies are omega_lambda/Omega, gamma and cutoff likewise ratios to
    Omega, theta = k_B T/(hbar omega_c), rho[i, j] = R_ij * omega_c / c.
    """

    frequencies: np.ndarray
    gamma: float
    cutoff: float
    theta: float
    rho: np.ndarray
    dimension: int

    @property
    def n(self) -> int:
        return len(self.frequencies)

    def validate(self) -> None:
        if np.any(self.frequencies <= 0) or self.cutoff <= 0:
            raise ConfigurationError("dimensionless frequencies and cutoff must be positive")
        if self.gamma < 0 or self.theta < 0:
            raise ConfigurationError("gamma and theta must be nonnegative")
        rho = np.asarray(self.rho)
        n = self.n
        if rho.shape != (n, n):
            raise ConfigurationError(f"rho must be {n}x{n}, got {rho.shape}")
        if not np.allclose(rho, rho.T) or np.any(np.diag(rho) != 0) or np.any(rho < 0):
            raise ConfigurationError("rho must be symmetric, nonnegative, with zero diagonal")
        if self.dimension not in (1, 2, 3):
            raise ConfigurationError(f"bath dimension must be 1, 2 or 3, got {self.dimension}")


def to_dimensionless(cfg: PhysicalConfig) -> DimensionlessConfig:
    """Reduce a PhysicalConfig to the internal dimensionless system."""
    cfg.validate()
    omega = cfg.base_frequency
    distances = pair_distances(cfg.geometry)
    out = DimensionlessConfig(
        frequencies=np.asarray(cfg.frequencies, dtype=float) / omega,
        gamma=cfg.gamma / omega,
        cutoff=cfg.cutoff / omega,
        theta=cfg.temperature_ratio,
        rho=distances * cfg.cutoff / cfg.sound_speed,
        dimension=cfg.bath_dimension,
    )
    out.validate()
    return out


# --- configuration files -----------------------------------------------------

_SCALAR_KEYS = {
    "mass_kg", "base_frequency_ghz", "bath_dimension", "gamma_ghz",
    "cutoff_mev", "cutoff_ghz", "sound_speed_mps", "temperature_ratio",
    "temperature_k", "geometry.R_nm", "geometry.r_nm",
}
_KNOWN_KEYS = _SCALAR_KEYS | {"frequencies_ghz", "geometry.kind"}

_GEOMETRY_KINDS = ("two_oscillators", "linear", "isosceles_perp", "equilateral")


def parse_config_text(text: str) -> dict:
    """Parse the flat `key = value` configuration format.

    Lines starting with '#' and blank lines are ignored.  Unknown keys are
    rejected.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigurationError(f"line {lineno}: unknown configuration key {key!r}")
        if key in raw:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def _require(raw: dict, key: str) -> str:
    if key not in raw:
        raise ConfigurationError(f"missing required configuration key {key!r}")
    return raw[key]


def _float(raw: dict, key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigurationError(f"key {key!r}: not a number: {value!r}") from exc


def config_from_mapping(raw: dict) -> PhysicalConfig:
    """Build a validated PhysicalConfig from parsed flat key/value pairs."""
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")

    mass = _float(raw, "mass_kg", raw.get("mass_kg", "1e-16"))
    omega = _float(raw, "base_frequency_ghz", _require(raw, "base_frequency_ghz")) * GHZ
    freq_text = _require(raw, "frequencies_ghz")
    try:
        frequencies = tuple(float(tok) * GHZ for tok in freq_text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigurationError(f"frequencies_ghz: not a number list: {freq_text!r}") from exc
    if not frequencies:
        raise ConfigurationError("frequencies_ghz must list at least one frequency")

    dim_text = _require(raw, "bath_dimension")
    try:
        bath_dimension = int(dim_text)
    except ValueError as exc:
        raise ConfigurationError(f"bath_dimension: not an integer: {dim_text!r}") from exc

    gamma = _float(raw, "gamma_ghz", _require(raw, "gamma_ghz")) * GHZ

    if "cutoff_mev" in raw and "cutoff_ghz" in raw:
        raise ConfigurationError("give either cutoff_mev or cutoff_ghz, not both")
    if "cutoff_mev" in raw:
        cutoff = cutoff_from_mev(_float(raw, "cutoff_mev", raw["cutoff_mev"]))
    elif "cutoff_ghz" in raw:
        cutoff = _float(raw, "cutoff_ghz", raw["cutoff_ghz"]) * GHZ
    else:
        raise ConfigurationError("missing cutoff: give cutoff_mev or cutoff_ghz")

    sound_speed = _float(raw, "sound_speed_mps", _require(raw, "sound_speed_mps"))

    if "temperature_ratio" in raw and "temperature_k" in raw:
        raise ConfigurationError("give either temperature_ratio or temperature_k, not both")
    if "temperature_ratio" in raw:
        theta = _float(raw, "temperature_ratio", raw["temperature_ratio"])
    elif "temperature_k" in raw:
        theta = temperature_ratio_from_kelvin(_float(raw, "temperature_k", raw["temperature_k"]), cutoff)
    else:
        raise ConfigurationError("missing temperature: give temperature_ratio or temperature_k")

    kind = _require(raw, "geometry.kind")
    if kind not in _GEOMETRY_KINDS:
        raise ConfigurationError(
            f"geometry.kind must be one of {_GEOMETRY_KINDS}, got {kind!r}")
    R = _float(raw, "geometry.R_nm", _require(raw, "geometry.R_nm")) * NM
    r = _float(raw, "geometry.r_nm", raw.get("geometry.r_nm", "0")) * NM
    if kind == "two_oscillators":
        geometry = Geometry.two_oscillators(R)
    elif kind == "linear":
        geometry = Geometry.linear(R, r)
    elif kind == "isosceles_perp":
        geometry = Geometry.isosceles_perp(R, r)
    else:
        geometry = Geometry.equilateral(R)

    cfg = PhysicalConfig(
        mass=mass, base_frequency=omega, frequencies=frequencies,
        bath_dimension=bath_dimension, gamma=gamma, cutoff=cutoff,
        sound_speed=sound_speed, temperature_ratio=theta, geometry=geometry)
    cfg.validate()
    return cfg


def load_config(path) -> PhysicalConfig:
    """Read and validate a configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_mapping(parse_config_text(fh.read()))


def with_parameter(cfg: PhysicalConfig, name: str, value: float) -> PhysicalConfig:
    """Return a copy of cfg with one sweepable parameter replaced.

    Recognized names: R_nm, r_nm, temperature_ratio, gamma_ghz, cutoff_ghz.
    """
    if name == "temperature_ratio":
        return replace(cfg, temperature_ratio=value)
    if name == "gamma_ghz":
        return replace(cfg, gamma=value * GHZ)
    if name == "cutoff_ghz":
        return replace(cfg, cutoff=value * GHZ)
    if name == "R_nm":
        if cfg.geometry.kind == "custom":
            raise ConfigurationError("cannot sweep R_nm of a custom geometry")
        return replace(cfg, geometry=replace(cfg.geometry, R=value * NM))
    if name == "r_nm":
        if cfg.geometry.kind not in ("linear", "isosceles_perp"):
            raise ConfigurationError(
                f"r_nm applies only to linear/isosceles_perp geometries, not {cfg.geometry.kind}")
        return replace(cfg, geometry=replace(cfg.geometry, r=value * NM))
    raise ConfigurationError(f"unknown sweep parameter {name!r}")
