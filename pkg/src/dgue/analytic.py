"""Analytic eigenvector statistics from the mean-field solution.

Within the bulk, the squared components ``y_n = |psi_n|**2`` of an
eigenvector at energy ``E`` are exponentially distributed with an
index-dependent rate, and their moments follow in closed form from the
saddle ``(t, s)`` and the density of states:

    I_q(n) = <y_n**q> = Gamma(q+1) * r_n**q,
    r_n    = s * c_n / (pi * rho * N),      c_n = x_n / (z_n**2 + s**2),

with ``z_n = E * x_n - t`` as in :mod:`dgue.meanfield`.  Because
``pi * rho * N`` equals ``s * sum_i c_i``, the ratio ``r_n`` never
exceeds 1 and the formulas stay finite for arbitrarily skewed profiles.

At ``E = 0`` the saddle is ``(0, 1)`` for every profile and everything
collapses to ratios of inverse strengths; :func:`zero_energy_moments`
implements that limit directly.  :func:`finite_n_oracle` provides an
independent finite-``N`` evaluation of the zero-energy moments as a
one-dimensional integral, used to validate the large-``N`` formulas.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .meanfield import SaddlePoint, SpectralDensity, _terms
from .profiles import DeformationProfile

__all__ = [
    "QuadratureError",
    "MomentPrediction",
    "ComponentLaw",
    "ScalingLaw",
    "moment_prediction",
    "zero_energy_moments",
    "component_law",
    "finite_n_oracle",
    "scaling_regime",
]


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested accuracy."""

    def __init__(self, message: str, estimate: float, error: float):
        self.estimate = estimate
        self.error = error
        super().__init__(message)


@dataclass(frozen=True)
class MomentPrediction:
    """Predicted moments ``<y_n**q>`` for every component at one energy."""

    q: float
    energy: float
    per_component: np.ndarray
    total: float


@dataclass(frozen=True)
class ComponentLaw:
    """Exponential law of one squared component: density ``rate*exp(-rate*y)``."""

    index: int
    energy: float
    rate: float


@dataclass(frozen=True)
class ScalingLaw:
    """Large-``N`` behaviour of the total moment ``sum_n I_q(n) ~ N**exponent``.

    ``d_q`` is the generalized dimension ``-exponent / (q - 1)``; it is
    NaN at ``q = 1`` where that ratio is undefined.  ``log_correction``
    marks marginal cases carrying an extra power of ``ln N``.
    """

    regime: str
    exponent: float
    d_q: float
    log_correction: bool = False


def _component_ratios(profile: DeformationProfile, saddle: SaddlePoint,
                      density: SpectralDensity) -> np.ndarray:
    x = profile.inverse()
    z, a = _terms(x, saddle.energy, saddle.t, saddle.s * saddle.s)
    c = x * a
    return saddle.s * c / (math.pi * density.rho * profile.size)


def moment_prediction(profile: DeformationProfile, saddle: SaddlePoint,
                      density: SpectralDensity, q: float) -> MomentPrediction:
    """Moments ``I_q(n)`` of all squared components at the saddle's energy."""
    if q <= 0:
        raise ValueError("moment order q must be positive")
    r = _component_ratios(profile, saddle, density)
    per = math.gamma(q + 1.0) * r**q
    return MomentPrediction(q, saddle.energy, per, float(np.sum(per)))


def zero_energy_moments(profile: DeformationProfile, q: float) -> MomentPrediction:
    """Closed-form moments at ``E = 0``: ``I_q(n) = q! * (x_n / sum x)**q``."""
    if q <= 0:
        raise ValueError("moment order q must be positive")
    x = profile.inverse()
    share = x / np.sum(x)
    per = math.gamma(q + 1.0) * share**q
    return MomentPrediction(q, 0.0, per, float(np.sum(per)))


def component_law(profile: DeformationProfile, saddle: SaddlePoint,
                  density: SpectralDensity, index: int) -> ComponentLaw:
    """Exponential distribution of component ``index`` (1-based).

    The squared modulus ``y = |psi_index|**2`` is exponentially
    distributed with the returned rate; its mean is ``1 / rate``.
    """
    if not 1 <= index <= profile.size:
        raise ValueError(f"component index {index} outside 1..{profile.size}")
    r = _component_ratios(profile, saddle, density)
    return ComponentLaw(index, saddle.energy, 1.0 / r[index - 1])


def finite_n_oracle(profile: DeformationProfile, q: float, index: int,
                    rel_tol: float = 1e-8) -> float:
    """Exact finite-``N`` moment ``<y_index**q>`` at zero energy.

    Evaluates the one-dimensional integral representation

        I_q(n) = q * (x_n/N)**q * Int_0^inf da a**(q-1)
                 * (1 + a*x_n/N)**(-q) * prod_i (1 + a*x_i/N)**(-1)

    by adaptive quadrature on the compactified variable ``a = tau/(1-tau)``.
    Independent of every large-``N`` approximation; serves as the ground
    truth the asymptotic formulas are checked against.
    """
    if q <= 0:
        raise ValueError("moment order q must be positive")
    if not 1 <= index <= profile.size:
        raise ValueError(f"component index {index} outside 1..{profile.size}")
    x = profile.inverse()
    n = profile.size
    xs = x / n
    xn = xs[index - 1]

    def integrand(tau: float) -> float:
        if tau <= 0.0 or tau >= 1.0:
            return 0.0
        alpha = tau / (1.0 - tau)
        log_f = (q - 1.0) * math.log(alpha)
        log_f -= q * math.log1p(alpha * xn)
        log_f -= float(np.sum(np.log1p(alpha * xs)))
        log_f -= 2.0 * math.log1p(-tau)  # jacobian d alpha / d tau
        return math.exp(log_f) if log_f > -745.0 else 0.0

    with warnings.catch_warnings():
        # non-convergence is reported as a typed error below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr = integrate.quad(integrand, 0.0, 1.0,
                                       epsabs=0.0, epsrel=rel_tol, limit=200)
    if value <= 0.0 or abserr > 10.0 * rel_tol * value:
        raise QuadratureError(
            f"oracle quadrature reached relative error {abserr / max(value, 1e-300):.2g}",
            estimate=value, error=abserr,
        )
    log_pref = math.log(q) + q * math.log(xn)
    return math.exp(log_pref + math.log(value))


_REGIME_EXTENDED = "extended"
_REGIME_FROZEN_EXT = "frozen_quasi_extended"
_REGIME_FROZEN_LOC = "frozen_quasi_localized"
_REGIME_LOCALIZED = "localized"
_REGIME_MARGINAL = "marginal_log"


def _law(regime: str, exponent: float, q: float, log: bool = False) -> ScalingLaw:
    d_q = math.nan if q == 1.0 else -exponent / (q - 1.0) + 0.0
    return ScalingLaw(regime, exponent, d_q, log)


def scaling_regime(p: float | str, q: float) -> ScalingLaw:
    """Classify the large-``N`` scaling of the total moment for a family.

    ``p`` is the power-law exponent, or the string ``"exp"`` for
    exponentially decaying profiles (any base).  Positive ``p`` and the
    constant profile scale like the GUE (fully extended states); for
    decaying profiles the exponent of ``N`` changes branch at ``q = -1/p``.
    """
    if q <= 0:
        raise ValueError("moment order q must be positive")
    if isinstance(p, str):
        if p in ("exp", "exponential"):
            return _law(_REGIME_LOCALIZED, 0.0, q)
        raise ValueError(f"unknown profile tag {p!r}")
    p = float(p)
    if p == -1.0:
        raise ValueError("power-law exponent p = -1 is not supported")
    if p == 0.0 or p > 0.0:
        return _law(_REGIME_EXTENDED, 1.0 - q, q)
    q_star = -1.0 / p
    if p > -1.0:
        # weak decay: moments of low order still look extended
        if q < q_star:
            return _law(_REGIME_EXTENDED, 1.0 - q, q)
        if q == q_star:
            return _law(_REGIME_MARGINAL, 1.0 - q, q, log=True)
        return _law(_REGIME_FROZEN_EXT, -q * (p + 1.0), q)
    # strong decay: high orders are dominated by a vanishing fraction
    # of components and the total moment saturates
    if q < q_star:
        return _law(_REGIME_FROZEN_LOC, p * q + 1.0, q)
    if q == q_star:
        return _law(_REGIME_MARGINAL, 0.0, q, log=True)
    return _law(_REGIME_LOCALIZED, 0.0, q)
