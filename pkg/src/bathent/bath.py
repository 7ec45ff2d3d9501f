"""Bath models: spectral densities, potential renormalizations, memory kernels.

Everything is dimensionless (hbar = m = Omega = 1).  A bath is characterized
by its spatial dimension d, the coupling strength gamma and the cutoff
frequency omega_c; a pair of oscillators enters through the reduced distance
rho = R * omega_c / c.  Closed forms:

    J_1D(w) = pi gamma w e^{-w/wc} cos(w rho / wc)
    J_2D(w) = 2 pi^2 gamma (w^2/wc) e^{-w/wc} J0(w rho / wc)
    J_3D(w) = 4 pi^2 gamma (wc/rho) (w/wc)^2 e^{-w/wc} sin(w rho / wc)

with the rho -> 0 limit 4 pi^2 gamma w^3/wc^2 e^{-w/wc} in 3D.  The matching
renormalizations (1/pi) int J(w)/w dw are

    1D: gamma wc / (1 + rho^2)
    2D: 2 pi gamma wc / (1 + rho^2)^{3/2}
    3D: 8 pi gamma wc / (1 + rho^2)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import j0

from .errors import ConfigurationError, DomainError


@dataclass
class SpectralDensityModel:
    """Continuum-limit bath: spatial dimension, coupling and cutoff."""

    dimension: int
    gamma: float
    cutoff: float

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ConfigurationError(f"bath dimension must be 1, 2 or 3, got {self.dimension}")
        if self.gamma < 0:
            raise ConfigurationError("gamma must be nonnegative")
        if self.cutoff <= 0:
            raise ConfigurationError("cutoff must be positive")


def spectral_density(model: SpectralDensityModel, rho: float, omega):
    """J(omega) for one oscillator pair at reduced distance rho; omega >= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("spectral density is defined for omega >= 0; callers use |omega|")
    gam, wc = model.gamma, model.cutoff
    env = np.exp(-omega / wc)
    if model.dimension == 1:
        out = np.pi * gam * omega * env * np.cos(omega * rho / wc)
    elif model.dimension == 2:
        out = 2 * np.pi**2 * gam * (omega**2 / wc) * env * j0(omega * rho / wc)
    else:
        if rho == 0.0:
            out = 4 * np.pi**2 * gam * omega**3 / wc**2 * env
        else:
            out = 4 * np.pi**2 * gam * (wc / rho) * (omega / wc) ** 2 * env \
                * np.sin(omega * rho / wc)
    return out if out.ndim else float(out)


def renormalization(model: SpectralDensityModel, rho: float) -> float:
    """Static potential renormalization for a pair at reduced distance rho."""
    if rho < 0:
        raise DomainError("rho must be nonnegative")
    gam, wc = model.gamma, model.cutoff
    if model.dimension == 1:
        return gam * wc / (1 + rho**2)
    if model.dimension == 2:
        return 2 * np.pi * gam * wc / (1 + rho**2) ** 1.5
    return 8 * np.pi * gam * wc / (1 + rho**2) ** 2


def renormalization_matrix(model: SpectralDensityModel, rho_matrix: np.ndarray) -> np.ndarray:
    """Entrywise renormalization over a full reduced-distance matrix."""
    rho = np.asarray(rho_matrix, dtype=float)
    out = np.empty_like(rho)
    for idx, val in np.ndenumerate(rho):
        out[idx] = renormalization(model, float(val))
    return out


def susceptibility_time(model: SpectralDensityModel, rho: float, t):
    """Retarded memory kernel chi(t)/hbar for one pair at reduced distance rho.

    The kernel vanishes for t <= 0 and is the superposition of the two
    retarded images at ct = -R and ct = +R:

        1D: 2 gamma wc^2 [ q(rho - t wc) - q(rho + t wc) ],  q(u) = u/(1+u^2)^2
        3D: 8 pi gamma wc^2/rho [ f(rho + t wc) - f(rho - t wc) ],
            f(u) = (1-3u^2)/(1+u^2)^3

    with the 3D coincidence limit 192 pi gamma wc^2 s(s^2-1)/(1+s^2)^4,
    s = t wc.  A strictly sharp front chi = 0 for t < R/c would require an
    infinitely stiff spectrum; the exponential cutoff spreads the front over
    the memory time 1/wc, and the forms above are exactly the ones whose
    Fourier transform reproduces -J(|omega|) sign(omega) in the imaginary
    part (the fluctuation-dissipation identity).  The 2D kernel has no
    practical closed form and is not provided.
    """
    if model.dimension == 2:
        raise ConfigurationError("no closed-form 2D susceptibility is provided")
    t = np.asarray(t, dtype=float)
    gam, wc = model.gamma, model.cutoff
    s = t * wc
    if model.dimension == 1:
        def q(u):
            return u / (1 + u**2) ** 2
        val = 2 * gam * wc**2 * (q(rho - s) - q(rho + s))
    else:
        def f(u):
            return (1 - 3 * u**2) / (1 + u**2) ** 3
        if rho == 0.0:
            val = 192 * np.pi * gam * wc**2 * s * (s**2 - 1) / (1 + s**2) ** 4
        else:
            val = 8 * np.pi * gam * (wc**2 / rho) * (f(rho + s) - f(rho - s))
    val = np.where(t > 0, val, 0.0)
    return val if val.ndim else float(val)


def _coth(x: np.ndarray) -> np.ndarray:
    # 1/tanh is stable for every positive float: tanh saturates at 1 for
    # large x and behaves like x for small x
    return 1.0 / np.tanh(x)


def noise_entry(model: SpectralDensityModel, rho: float, omega, theta: float):
    """One entry of the symmetrized noise spectrum J(|w|) coth(|w|/(2 theta wc)).

    theta = 0 means coth -> 1.  The w = 0 value is the analytic limit:
    2 pi gamma theta wc in 1D (any rho), 0 in 2D and 3D.
    """
    omega = np.asarray(omega, dtype=float)
    aw = np.abs(omega)
    safe = np.where(aw == 0, 1.0, aw)
    j = spectral_density(model, rho, safe)
    if theta > 0:
        val = j * _coth(safe / (2 * theta * model.cutoff))
        zero_limit = 2 * np.pi * model.gamma * theta * model.cutoff if model.dimension == 1 else 0.0
    else:
        val = j
        zero_limit = 0.0
    val = np.where(aw == 0, zero_limit, val)
    return val if val.ndim else float(val)


def noise_matrix(model: SpectralDensityModel, rho_matrix: np.ndarray, omega: float,
                 theta: float) -> np.ndarray:
    """Symmetric N x N noise matrix Gamma(omega) at a single frequency."""
    if theta < 0:
        raise DomainError("theta must be nonnegative")
    rho = np.asarray(rho_matrix, dtype=float)
    n = rho.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        for k in range(i, n):
            val = noise_entry(model, float(rho[i, k]), float(omega), theta)
            out[i, k] = out[k, i] = val
    return out


def noise_batch(model: SpectralDensityModel, rho_matrix: np.ndarray, omega: np.ndarray,
                theta: float) -> np.ndarray:
    """Noise matrices over a frequency batch, shape (len(omega), N, N)."""
    rho = np.asarray(rho_matrix, dtype=float)
    omega = np.asarray(omega, dtype=float)
    n = rho.shape[0]
    out = np.empty((omega.size, n, n))
    for i in range(n):
        for k in range(i, n):
            val = noise_entry(model, float(rho[i, k]), omega, theta)
            out[:, i, k] = out[:, k, i] = val
    return out
