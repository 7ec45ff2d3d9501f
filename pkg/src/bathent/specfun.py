"""Complex exponential integral Gamma(0, z) = E1(z) and derived combinations.

Two evaluation branches cover the plane on the principal branch:

* power series  E1(z) = -gamma_E - ln z + sum_{k>=1} (-1)^{k+1} z^k / (k k!),
  used for small |z| and throughout the left half-plane near the cut, where
  the terms are nearly sign-aligned and the sum is cancellation-free;
* modified Lentz continued fraction
  E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...)))),
  used away from the negative real axis where it converges in O(sqrt|z|) steps.

Arguments exactly on the negative real axis take the limit from above,
Gamma(0, -x) = -Ei(x) - i pi, which is the continuous continuation of the
off-axis values used by the distance -> 0 limits downstream.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, OverflowDomainError

EULER_GAMMA = float(np.euler_gamma)

# series if |z| <= _SERIES_RADIUS, or if the cancellation exponent |z| + Re z
# stays small in the left half-plane (terms nearly aligned near the cut)
_SERIES_RADIUS = 4.0
_CANCEL_BUDGET = 8.0
_MAX_SERIES_TERMS = 3000
_MAX_CF_ITER = 20000


def _use_series(z: np.ndarray) -> np.ndarray:
    az = np.abs(z)
    return (az <= _SERIES_RADIUS) | ((z.real <= 0.0) & (az + z.real <= _CANCEL_BUDGET))


def _e1_series(z: np.ndarray) -> np.ndarray:
    """Power series branch, vectorized.  Caller guarantees z != 0."""
    z = np.asarray(z, dtype=complex)
    total = np.full(z.shape, -EULER_GAMMA, dtype=complex) - np.log(z)
    term = np.ones_like(z)
    acc = np.zeros_like(z)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, _MAX_SERIES_TERMS + 1):
        term = term * (-z) / k
        contrib = -term / k
        acc = np.where(active, acc + contrib, acc)
        scale = np.maximum(np.abs(acc), 1e-300)
        active = active & (np.abs(contrib) > 1e-18 * scale)
        if not active.any():
            break
    return total + acc


def _e1_continued_fraction(z: np.ndarray) -> np.ndarray:
    """Modified Lentz continued fraction branch, vectorized.

    Returns e^{-z} * h where h is the continued fraction, so callers that
    need the scaled value e^{z} E1(z) can use `_e1_cf_scaled` directly.
    """
    return np.exp(-np.asarray(z, dtype=complex)) * _e1_cf_scaled(z)


def _e1_cf_scaled(z: np.ndarray) -> np.ndarray:
    """Continued fraction for e^{z} E1(z) (no exponential over/underflow)."""
    z = np.asarray(z, dtype=complex)
    tiny = 1e-300
    b = z + 1.0
    c = np.full(z.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    converged = np.zeros(z.shape, dtype=bool)
    for i in range(1, _MAX_CF_ITER + 1):
        a = -float(i * i)
        b = b + 2.0
        d = b + a * d
        d = np.where(d == 0, tiny, d)
        c = b + a / c
        c = np.where(c == 0, tiny, c)
        d = 1.0 / d
        delta = c * d
        h = np.where(converged, h, h * delta)
        converged = converged | (np.abs(delta - 1.0) < 1e-16)
        if converged.all():
            break
    return h


def _e1_complex(z: np.ndarray) -> np.ndarray:
    """E1 on the principal branch for arbitrary nonzero complex arrays.

    Points exactly on the negative real axis (either signed zero) take the
    limit from above, -Ei(x) - i pi, matching the coincidence limit of the
    off-axis arguments produced by finite separations.
    """
    z = np.asarray(z, dtype=complex)
    on_cut = (z.imag == 0.0) & (z.real < 0.0)
    if on_cut.any():
        z = z.copy()
        z[on_cut] = z[on_cut].real + 0.0j   # -0.0 + 0.0 is +0.0: branch from above
    out = np.empty(z.shape, dtype=complex)
    series = _use_series(z)
    if series.any():
        out[series] = _e1_series(z[series])
    rest = ~series
    if rest.any():
        out[rest] = _e1_continued_fraction(z[rest])
    return out


def incomplete_gamma_0(z: complex) -> complex:
    """Principal-branch upper incomplete gamma Gamma(0, z) = E1(z).

    Raises DomainError at z = 0 (logarithmic divergence) and
    OverflowDomainError for Re z < -700 where e^{-z} overflows.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("Gamma(0, z) diverges logarithmically at z = 0")
    if z.real < -700.0:
        raise OverflowDomainError(f"Gamma(0, z) overflows for Re z = {z.real} < -700")
    return complex(_e1_complex(np.array([z]))[0])


def g_function(omega: float, rho: float, cutoff: float) -> complex:
    """The retarded-response combination e^{-w} Gamma(0, -w), w = (1 - i rho) omega/cutoff.

    omega, rho and cutoff are dimensionless (base-frequency units); omega = 0
    is excluded because only full kernel combinations have finite limits there.
    """
    if omega == 0:
        raise DomainError("g(omega) is undefined at omega = 0; use the kernel limits")
    return complex(g_function_vec(np.array([float(omega)]), rho, cutoff)[0])


def g_function_vec(omega: np.ndarray, rho: float, cutoff: float) -> np.ndarray:
    """Vectorized g over an array of nonzero frequencies at fixed rho."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0):
        raise DomainError("g(omega) is undefined at omega = 0")
    w = (1.0 - 1j * rho) * omega / cutoff
    if np.any(-w.real < -700.0):
        raise OverflowDomainError("g(omega): exponential prefactor overflows")
    return np.exp(-w) * _e1_complex(-w)


# --- real-axis helpers for the coincidence (rho = 0) limits -------------------

def _ei_scaled(x: np.ndarray) -> np.ndarray:
    """e^{-x} Ei(x) for x > 0, vectorized, overflow-free."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= 40.0
    if small.any():
        xs = x[small]
        # e^{-x} (gamma + ln x) + sum_k e^{-x} x^k/(k k!), all terms positive
        term = np.exp(-xs)
        acc = term * (EULER_GAMMA + np.log(xs))
        t = term.copy()
        for k in range(1, 400):
            t = t * xs / k
            contrib = t / k
            acc = acc + contrib
            if np.all(contrib <= 1e-18 * np.maximum(np.abs(acc), 1e-300)):
                break
        out[small] = acc
    large = ~small
    if large.any():
        xl = x[large]
        # asymptotic sum_k k!/x^{k+1}, truncated at the smallest term
        acc = 1.0 / xl
        t = acc.copy()
        for k in range(1, 60):
            t_next = t * k / xl
            grow = np.abs(t_next) >= np.abs(t)
            t = np.where(grow, 0.0, t_next)
            acc = acc + t
            if np.all(t == 0):
                break
        out[large] = acc
    return out


def _e1_scaled_real(x: np.ndarray) -> np.ndarray:
    """e^{x} E1(x) for x > 0, vectorized."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= _SERIES_RADIUS
    if small.any():
        out[small] = np.exp(x[small]) * _e1_series(x[small].astype(complex)).real
    large = ~small
    if large.any():
        out[large] = _e1_cf_scaled(x[large].astype(complex)).real
    return out


def sym_exp_integral(x: np.ndarray) -> np.ndarray:
    """The even combination e^{-x} Ei(x) + e^{x} E1(x) for x > 0.

    This is the coincidence limit of the principal-value parts of
    g(omega) -/+ g(-omega) that enters the diagonal response entries.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("sym_exp_integral requires x > 0")
    return _ei_scaled(x) + _e1_scaled_real(x)
