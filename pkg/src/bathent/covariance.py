"""Stationary covariance matrix from adaptive frequency quadrature of the kernel.

The negative-frequency half is folded analytically using K(-w) = conj K(w):

    C_XX = (1/pi) int_0^inf Re K(w) dw
    C_XP = -(1/pi) int_0^inf w Im K(w) dw
    C_PP = (1/pi) int_0^inf w^2 Re K(w) dw

All three moments share the kernel evaluations of a single adaptive pass.
The resulting 2N x 2N matrix G = [[C_XX, C_XP], [C_XP^T, C_PP]] must satisfy
the uncertainty relation (every symplectic eigenvalue >= 1/2); a violation is
raised as PhysicsError because it can only come from an upstream sign or
formula bug, never from the state itself.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import gaussian, response
from .errors import ConfigurationError, PhysicsError
from .quadrature import integrate_adaptive
from .units import DimensionlessConfig


@dataclass
class QuadratureSpec:
    """Tolerances and layout of the frequency integration."""

    rtol: float = 1e-8
    atol: float = 1e-12
    tail_epsilon: float = 1e-14    # envelope e^{-w/wc} below this truncates the tail
    tail_factor: float = 20.0      # and at least this multiple of max(w_l, wc)
    max_panels: int = 2000
    use_seeds: bool = True         # seed panel edges at resonances and the cutoff

    def validate(self) -> None:
        if self.rtol <= 0 or self.atol <= 0:
            raise ConfigurationError("quadrature tolerances must be positive")
        if not (0 < self.tail_epsilon < 1):
            raise ConfigurationError("tail_epsilon must be in (0, 1)")
        if self.max_panels < 4:
            raise ConfigurationError("max_panels too small")


@dataclass
class CovarianceMatrix:
    """Position/momentum covariance blocks of the stationary Gaussian state."""

    c_xx: np.ndarray
    c_xp: np.ndarray
    c_pp: np.ndarray
    error_xx: np.ndarray
    error_xp: np.ndarray
    error_pp: np.ndarray
    n_panels: int = 0
    n_evals: int = 0

    @property
    def n(self) -> int:
        return len(self.c_xx)

    @property
    def matrix(self) -> np.ndarray:
        g = np.block([[self.c_xx, self.c_xp], [self.c_xp.T, self.c_pp]])
        return 0.5 * (g + g.T)

    @property
    def error_estimate(self) -> float:
        return float(max(self.error_xx.max(), self.error_xp.max(), self.error_pp.max()))


def omega_max(config: DimensionlessConfig, spec: QuadratureSpec) -> float:
    """Upper integration limit: past the envelope tail and every resonance."""
    wmax = config.cutoff * np.log(1.0 / spec.tail_epsilon)
    wmax = max(wmax, spec.tail_factor * max(config.frequencies.max(), config.cutoff))
    nm = response.normal_modes(config).frequencies
    return float(max(wmax, 2.0 * nm.max()))


def seed_points(config: DimensionlessConfig, spec: QuadratureSpec, wmax: float) -> list:
    """Panel edges: 0, bare frequencies, normal-mode frequencies, the cutoff."""
    pts = [0.0, wmax]
    if spec.use_seeds:
        pts.extend(float(v) for v in config.frequencies)
        pts.extend(float(v) for v in response.normal_modes(config).frequencies)
        pts.append(float(config.cutoff))
    return sorted({p for p in pts if 0.0 <= p <= wmax})


def covariance_blocks(config: DimensionlessConfig,
                      spec: QuadratureSpec | None = None) -> CovarianceMatrix:
    """Integrate the kernel into the three covariance blocks."""
    spec = spec or QuadratureSpec()
    spec.validate()
    config.validate()
    if config.dimension not in (1, 3):
        raise ConfigurationError("stationary covariances are available for 1D and 3D baths")
    if config.gamma <= 0:
        raise ConfigurationError(
            "gamma must be positive: an uncoupled system keeps its initial state "
            "and has no unique stationary covariance")

    n = config.n
    wmax = omega_max(config, spec)
    seeds = seed_points(config, spec, wmax)

    def integrand(w):
        k = response.kernel_batch(config, w)
        parts = np.empty((len(w), 3, n, n))
        parts[:, 0] = k.real
        parts[:, 1] = w[:, None, None] * k.imag
        parts[:, 2] = (w**2)[:, None, None] * k.real
        return parts.reshape(len(w), -1)

    total, err, info = integrate_adaptive(
        integrand, seeds, rtol=spec.rtol, atol=spec.atol, max_panels=spec.max_panels)
    total = total.reshape(3, n, n) / np.pi
    err = err.reshape(3, n, n) / np.pi

    c_xx, c_xp, c_pp = total[0], -total[1], total[2]

    scale = max(np.abs(c_xx).max(), np.abs(c_pp).max(), 1e-300)
    for name, mat in (("C_XX", c_xx), ("C_PP", c_pp)):
        asym = np.abs(mat - mat.T).max()
        if asym > 1e-9 * scale:
            raise PhysicsError(f"{name} asymmetric beyond tolerance ({asym:.3e})")
    xp_scale = np.sqrt(max(np.abs(c_xx).max(), 1e-300) * max(np.abs(c_pp).max(), 1e-300))
    sym_xp = np.abs(c_xp + c_xp.T).max() / 2
    if sym_xp > 1e-8 * xp_scale + 1e-12:
        raise PhysicsError(
            f"symmetric part of C_XP is {sym_xp:.3e}, violating stationarity")

    c_xx = 0.5 * (c_xx + c_xx.T)
    c_pp = 0.5 * (c_pp + c_pp.T)
    c_xp = 0.5 * (c_xp - c_xp.T)

    blocks = CovarianceMatrix(c_xx, c_xp, c_pp, err[0], err[1], err[2],
                              n_panels=info["n_panels"], n_evals=info["n_evals"])
    _check_physicality(blocks)
    return blocks


def _check_physicality(blocks: CovarianceMatrix) -> None:
    for name, mat in (("C_XX", blocks.c_xx), ("C_PP", blocks.c_pp)):
        if np.linalg.eigvalsh(mat)[0] <= 0:
            raise PhysicsError(f"{name} is not positive definite")
    nu = gaussian.symplectic_eigenvalues(blocks.matrix)
    if nu[0] < 0.5 - 1e-9:
        raise PhysicsError(
            f"uncertainty relation violated: smallest symplectic eigenvalue {nu[0]:.12f}")


def assemble(config: DimensionlessConfig, blocks: CovarianceMatrix) -> np.ndarray:
    """Full 2N x 2N covariance matrix with C_PX = C_XP^T."""
    if blocks.n != config.n:
        raise ConfigurationError("covariance blocks do not match the configuration size")
    g = np.block([[blocks.c_xx, blocks.c_xp], [blocks.c_xp.T, blocks.c_pp]])
    if np.abs(g - g.T).max() > 1e-9 * max(np.abs(g).max(), 1e-300):
        raise PhysicsError("assembled covariance matrix is not symmetric")
    return 0.5 * (g + g.T)


def covariance_to_csv(g: np.ndarray) -> str:
    """Row-major CSV of a 2N x 2N covariance matrix, columns x1..xN, p1..pN."""
    n = len(g) // 2
    header = ",".join([f"x{i+1}" for i in range(n)] + [f"p{i+1}" for i in range(n)])
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in np.asarray(g):
        buf.write(",".join(repr(float(v)) for v in row) + "\n")
    return buf.getvalue()
