"""Independent numerical oracles shared between unit and acceptance tests.

These deliberately avoid the code paths they check: the fluctuation-
dissipation oracle Fourier-transforms the time-domain kernel with a plain
trapezoid rule, and the Kramers-Kronig oracle evaluates the principal-value
Hilbert transform of the spectral density with scipy's Cauchy-weight
quadrature.
"""

import numpy as np
from scipy import integrate

from bathent import bath


def fd_imag_part(model, rho, omega, t_max_factor=200.0, n_samples=2**20):
    """Im chi(omega) via trapezoid transform of the time-domain kernel."""
    t = np.linspace(0.0, t_max_factor / model.cutoff, n_samples)
    chi = bath.susceptibility_time(model, rho, t)
    return integrate.trapezoid(chi * np.sin(omega * t), t)


def fd_relative_errors(model, rhos, omegas):
    """Relative FD errors |Im chi_FT + J| / |J| over a (rho, omega) sample set."""
    out = []
    for rho in rhos:
        for w in omegas:
            target = -bath.spectral_density(model, rho, w)
            got = fd_imag_part(model, rho, w)
            out.append(abs(got - target) / abs(target))
    return np.array(out)


def kk_real_part(model, rho, omega_prime, upper_factor=60.0):
    """Re of the environment response at omega_prime from the Hilbert transform.

    Re chi(w') = -(1/pi) P int_0^W J(w) [1/(w - w') + 1/(w + w')] dw, and the
    environment part of the dynamical matrix adds back twice the static
    renormalization (the counter-term).
    """
    w_hi = upper_factor * model.cutoff

    def j(w):
        return bath.spectral_density(model, rho, w)

    pv, _ = integrate.quad(j, 0.0, w_hi, weight="cauchy", wvar=omega_prime, limit=400)
    reg, _ = integrate.quad(lambda w: j(w) / (w + omega_prime), 0.0, w_hi, limit=400)
    re_chi = -(pv + reg) / np.pi
    return re_chi + 2.0 * bath.renormalization(model, rho)
