"""Frequency-domain dynamical matrix alpha(omega), integration kernel, normal modes.

alpha(omega) is the Fourier symbol of the damped equations of motion: entry
(l, m) carries the free part (w_l^2 - w^2) delta_lm plus the closed-form
environment response for the pair separation rho_lm.  The static counter-term
cancels exactly, so alpha(0) = diag(w_l^2).  The stationary covariance kernel
is K(w) = alpha(w)^-1 Gamma(w) [alpha(-w)^T]^-1, computed with pivoted solves;
alpha(-w)^T equals the conjugate transpose of alpha(w).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bath, specfun
from .errors import ConfigurationError, PhysicsError, SingularityError
from .units import DimensionlessConfig


def _env_1d_coincident(gamma, wc, w):
    """Diagonal (rho = 0) 1D environment response, complex, vectorized."""
    aw = np.abs(w)
    re = np.zeros_like(w)
    nz = aw > 0
    re[nz] = gamma * aw[nz] * specfun.sym_exp_integral(aw[nz] / wc)
    im = -np.pi * gamma * w * np.exp(-aw / wc)
    return re + 1j * im


def _env_3d_coincident(gamma, wc, w):
    """Diagonal (rho = 0) 3D environment response."""
    aw = np.abs(w)
    z = aw / wc
    bracket = np.full_like(w, 2.0)
    nz = aw > 0
    bracket[nz] = 2.0 - z[nz] * specfun.sym_exp_integral(z[nz])
    re = -4 * np.pi * gamma * (w**2 / wc) * bracket
    im = -4 * np.pi**2 * gamma * (w**3 / wc**2) * np.exp(-z)
    # the w = 0 value is exactly zero; bracket is finite there anyway
    return re + 1j * im


def _env_pair(dimension, gamma, wc, rho, w):
    """Environment response for one pair at reduced distance rho, vectorized."""
    w = np.asarray(w, dtype=float)
    if rho == 0.0:
        if dimension == 1:
            return _env_1d_coincident(gamma, wc, w)
        return _env_3d_coincident(gamma, wc, w)
    aw = np.abs(w)
    env = np.exp(-aw / wc)
    out = np.zeros(w.shape, dtype=complex)
    nz = w != 0.0
    wnz = w[nz]
    gp = specfun.g_function_vec(wnz, rho, wc)
    gm = specfun.g_function_vec(-wnz, rho, wc)
    if dimension == 1:
        re = -gamma * wnz * (gp - gm).real \
            + np.pi * gamma * wnz * env[nz] * np.sin(rho * wnz / wc)
        im = -np.pi * gamma * wnz * np.cos(rho * wnz / wc) * env[nz]
    else:
        pref = 4 * np.pi * gamma * wnz**2 / (wc * rho)
        re = -pref * (gp + gm).imag \
            - np.pi * pref * env[nz] * np.cos(rho * wnz / wc)
        im = -np.pi * pref * env[nz] * np.sin(rho * wnz / wc)
    out[nz] = re + 1j * im
    return out


def alpha_batch(config: DimensionlessConfig, omega: np.ndarray) -> np.ndarray:
    """alpha(omega) over a frequency batch, shape (len(omega), N, N) complex."""
    if config.dimension not in (1, 3):
        raise ConfigurationError("response matrices are available for 1D and 3D baths only")
    w = np.asarray(omega, dtype=float)
    n = config.n
    gam, wc = config.gamma, config.cutoff
    out = np.zeros((w.size, n, n), dtype=complex)
    free = config.frequencies[None, :] ** 2 - w[:, None] ** 2
    idx = np.arange(n)
    out[:, idx, idx] = free
    if gam == 0.0:
        return out
    diag_env = _env_pair(config.dimension, gam, wc, 0.0, w)
    out[:, idx, idx] += diag_env[:, None]
    done = {}
    for i in range(n):
        for k in range(i + 1, n):
            rho = float(config.rho[i, k])
            if rho not in done:
                done[rho] = _env_pair(config.dimension, gam, wc, rho, w)
            out[:, i, k] += done[rho]
            out[:, k, i] += done[rho]
    return out


@dataclass
class ResponseMatrix:
    """alpha at one frequency with its inverse computed on demand."""

    omega: float
    alpha: np.ndarray

    @property
    def alpha_inv(self) -> np.ndarray:
        try:
            inv = np.linalg.inv(self.alpha)
        except np.linalg.LinAlgError as exc:
            raise SingularityError(self.omega) from exc
        if not np.all(np.isfinite(inv)):
            raise SingularityError(self.omega)
        resid = np.abs(self.alpha @ inv - np.eye(len(inv))).max()
        if resid > 1e-6:
            raise SingularityError(self.omega, f"alpha nearly singular at omega={self.omega} "
                                               f"(inverse residual {resid:.2e})")
        return inv


def alpha_matrix(config: DimensionlessConfig, omega: float) -> ResponseMatrix:
    """Assemble alpha at a single (possibly negative) frequency."""
    return ResponseMatrix(float(omega), alpha_batch(config, np.array([float(omega)]))[0])


@dataclass
class SpectralKernel:
    """Integration kernel K at one frequency."""

    omega: float
    matrix: np.ndarray


def kernel_batch(config: DimensionlessConfig, omega: np.ndarray,
                 check_noise: bool = True) -> np.ndarray:
    """K(omega) = alpha^-1 Gamma (alpha^dagger)^-1 over a batch of frequencies.

    With check_noise the noise matrices are verified to be positive
    semidefinite at every node; a violation is reported as a PhysicsError
    rather than clipped, since it would poison the covariance integrals.
    """
    w = np.asarray(omega, dtype=float)
    model = bath.SpectralDensityModel(config.dimension, config.gamma, config.cutoff)
    gam = bath.noise_batch(model, config.rho, w, config.theta)
    if check_noise and gam.size:
        eigs = np.linalg.eigvalsh(gam)
        scale = np.abs(gam).max(axis=(1, 2))
        bad = eigs[:, 0] < -1e-12 * np.maximum(scale, 1e-300)
        if bad.any():
            at = w[bad][:3]
            raise PhysicsError(f"noise matrix not positive semidefinite at omega={at}")
    alpha = alpha_batch(config, w)
    try:
        b = np.linalg.solve(alpha, gam.astype(complex))
        c = np.linalg.solve(alpha, b.conj().transpose(0, 2, 1))
    except np.linalg.LinAlgError as exc:
        raise SingularityError(None, "alpha singular inside kernel evaluation") from exc
    return c.conj().transpose(0, 2, 1)


def kernel(config: DimensionlessConfig, omega: float) -> SpectralKernel:
    """Kernel at a single frequency."""
    return SpectralKernel(float(omega), kernel_batch(config, np.array([float(omega)]))[0])


@dataclass
class NormalModeMap:
    """Orthogonal map O to the normal modes of the renormalized potential.

    O @ phi @ O.T is diagonal with ascending entries phi_diag; the mode
    frequencies are their square roots.
    """

    matrix: np.ndarray
    phi_diag: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        return np.sqrt(self.phi_diag)


def potential_matrix(config: DimensionlessConfig) -> np.ndarray:
    """phi = diag(w_l^2) + 2 * renormalization matrix."""
    model = bath.SpectralDensityModel(config.dimension, config.gamma, config.cutoff)
    return np.diag(config.frequencies**2) + 2.0 * bath.renormalization_matrix(model, config.rho)


def normal_modes(config: DimensionlessConfig) -> NormalModeMap:
    """Diagonalize the renormalized potential; eigenvalues ascending."""
    phi = potential_matrix(config)
    vals, vecs = np.linalg.eigh(phi)
    return NormalModeMap(matrix=vecs.T, phi_diag=vals)
