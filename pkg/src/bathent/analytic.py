"""Closed-form weak-dissipation results for two identical oscillators.

Valid to first order in gamma * wc / base^2.  The shifted normal-mode
frequencies and the entanglement threshold are

    1D:  W_pm = W sqrt(1 + 2 g wc / W^2 +- 2 g wc / (W^2 (1 + rho^2)))
         (2N_+ + 1)(2N_- + 1)(1 - 2 g wc / (W^2 (1 + rho^2))) < 1
    3D:  W_pm = W sqrt(1 + 16 pi g wc / W^2 +- 16 pi g wc / (W^2 (1 + rho^2)^2))
         (2N_+ + 1)(2N_- + 1)(1 - 16 pi g wc / (W^2 (1 + rho^2)^2)) < 1

with Bose occupations N_pm of the shifted modes.  These thresholds are known
to overestimate the distance out to which the exact stationary state stays
entangled; they serve as a fast diagnostic next to the full pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidityError


@dataclass
class AnalyticPairResult:
    """Normal-mode data and the closed-form entanglement verdict."""

    omega_plus: float
    omega_minus: float
    occupation_plus: float
    occupation_minus: float
    lhs: float
    entangled_prediction: bool


def thermal_occupation(mode_frequency: float, theta: float, cutoff: float) -> float:
    """Bose-Einstein occupation of a mode at temperature theta * cutoff."""
    if mode_frequency <= 0:
        raise ValidityError("mode frequency must be positive")
    if theta <= 0:
        return 0.0
    x = mode_frequency / (theta * cutoff)
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)


def _distance_term(dim: int, base: float, gamma: float, cutoff: float, rho: float) -> float:
    if dim == 1:
        return 2 * gamma * cutoff / (base**2 * (1 + rho**2))
    if dim == 3:
        return 16 * math.pi * gamma * cutoff / (base**2 * (1 + rho**2) ** 2)
    raise ValidityError("analytic pair results exist for 1D and 3D baths only")


def _mean_term(dim: int, base: float, gamma: float, cutoff: float) -> float:
    if dim == 1:
        return 2 * gamma * cutoff / base**2
    return 16 * math.pi * gamma * cutoff / base**2


def normal_frequencies(dim: int, base: float, gamma: float, cutoff: float,
                       rho: float) -> tuple:
    """Shifted normal-mode frequencies (W_plus, W_minus) of the identical pair."""
    mean = _mean_term(dim, base, gamma, cutoff)
    split = _distance_term(dim, base, gamma, cutoff, rho)
    rad_plus = 1 + mean + split
    rad_minus = 1 + mean - split
    if rad_minus <= 0 or rad_plus <= 0:
        raise ValidityError("shifted frequencies undefined: outside gamma*wc < base^2 regime")
    return base * math.sqrt(rad_plus), base * math.sqrt(rad_minus)


def entanglement_condition(dim: int, base: float, gamma: float, cutoff: float,
                           rho: float, theta: float) -> AnalyticPairResult:
    """Evaluate the weak-dissipation entanglement threshold for the pair."""
    if gamma * cutoff >= base**2:
        raise ValidityError(
            f"expansion requires gamma*wc < base^2 (got {gamma * cutoff} >= {base**2})")
    w_plus, w_minus = normal_frequencies(dim, base, gamma, cutoff, rho)
    n_plus = thermal_occupation(w_plus, theta, cutoff)
    n_minus = thermal_occupation(w_minus, theta, cutoff)
    lhs = (2 * n_plus + 1) * (2 * n_minus + 1) \
        * (1 - _distance_term(dim, base, gamma, cutoff, rho))
    return AnalyticPairResult(
        omega_plus=w_plus, omega_minus=w_minus,
        occupation_plus=n_plus, occupation_minus=n_minus,
        lhs=lhs, entangled_prediction=bool(lhs < 1.0))
