"""Self-consistent mean-field equations of the deformed ensemble.

At energy ``E`` inside the spectral bulk, the resolvent of the deformed
matrix is characterized by two real numbers ``(t, s)`` solving

    t = (1/N) * sum_i z_i / (z_i**2 + s**2),
    1 = (1/N) * sum_i  1  / (z_i**2 + s**2),        z_i = E * x_i - t,

with ``x_i = 1 / v_i`` the inverse profile strengths.  The density of
states follows from the same quantities:

    rho(E) = (s / (pi * N)) * sum_i x_i / (z_i**2 + s**2).

Everything is formulated in terms of ``z_i`` rather than the raw
strengths; the two forms are algebraically identical, but this one stays
finite for profiles whose strengths span hundreds of orders of
magnitude (``z**2`` may overflow to ``inf``, in which case the affected
terms correctly vanish instead of producing NaNs).

For the constant profile the system closes: ``t = E/2`` and
``s = sqrt(1 - (E/2)**2)`` for ``|E| < 2``, the semicircle law.  At
``E = 0`` the pair ``(t, s) = (0, 1)`` solves the system exactly for
*every* profile, which makes zero energy the universal anchor for the
continuation strategy used when direct iteration fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import DeformationProfile

__all__ = [
    "MeanFieldError",
    "NoBulkSolution",
    "NonConvergence",
    "SaddlePoint",
    "SpectralDensity",
    "gue_closed_form",
    "solve_saddle",
    "density_of_states",
    "residuals",
]

RESIDUAL_TOL = 1e-12
MAX_ITERATIONS = 200

# Large z contributes ~1/z to the sums; beyond this magnitude the terms
# are below double-precision resolution and clipping avoids inf*0.
_Z_CLIP = 1e300


class MeanFieldError(RuntimeError):
    """Base class for solver failures."""


class NoBulkSolution(MeanFieldError):
    """The energy lies outside the spectral bulk; no real solution exists."""

    def __init__(self, energy: float, message: str | None = None):
        self.energy = energy
        super().__init__(message or f"no bulk solution at E = {energy}")


class NonConvergence(MeanFieldError):
    """Iteration failed to reach tolerance inside the bulk."""


@dataclass(frozen=True)
class SaddlePoint:
    """Solution ``(t, s)`` of the self-consistency system at one energy."""

    energy: float
    t: float
    s: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class SpectralDensity:
    """Density of states ``rho`` at one energy (normalized to integrate to 1)."""

    energy: float
    rho: float


def _terms(x: np.ndarray, energy: float, t: float, u: float):
    """Shifted variables ``z_i`` and weights ``a_i = 1/(z_i**2 + u)``."""
    z = np.clip(energy * x - t, -_Z_CLIP, _Z_CLIP)
    with np.errstate(over="ignore"):
        a = 1.0 / (z * z + u)
    return z, a


def _residual_pair(x: np.ndarray, energy: float, t: float, u: float):
    z, a = _terms(x, energy, t, u)
    f1 = t - float(np.mean(z * a))
    f2 = 1.0 - float(np.mean(a))
    return f1, f2


def residuals(profile: DeformationProfile, energy: float, t: float, s: float):
    """Defects of the two self-consistency equations at ``(t, s)``.

    Returns ``(f1, f2)``; both vanish at a solution.  Exposed so external
    checks can verify reported solutions independently.
    """
    return _residual_pair(profile.inverse(), energy, t, s * s)


def _newton(x: np.ndarray, energy: float, t: float, u: float,
            tol: float, max_iter: int):
    """Damped Newton iteration on ``(t, u)`` with ``u = s**2 > 0``.

    Returns ``(t, u, residual, iterations, converged)``.  Steps are
    halved until the residual sup-norm decreases; ``u`` is kept positive
    by shrinking any step that would cross zero.
    """
    f1, f2 = _residual_pair(x, energy, t, u)
    res = max(abs(f1), abs(f2))
    for it in range(max_iter):
        if res <= tol:
            return t, u, res, it, True
        z, a = _terms(x, energy, t, u)
        a2 = a * a
        # d/dz [z/(z**2+u)] = (u - z**2)/(z**2+u)**2, written via a to stay
        # finite when z**2 overflows: (u - z**2)*a**2 == (2*u*a - 1)*a
        j11 = 1.0 + float(np.mean((2.0 * u * a - 1.0) * a))
        j12 = float(np.mean(z * a2))
        j21 = -2.0 * j12
        j22 = float(np.mean(a2))
        det = j11 * j22 - j12 * j21
        if not math.isfinite(det) or det == 0.0:
            return t, u, res, it, False
        dt = -(f1 * j22 - f2 * j12) / det
        du = -(j11 * f2 - j21 * f1) / det
        if not (math.isfinite(dt) and math.isfinite(du)):
            return t, u, res, it, False
        step = 1.0
        if du < 0.0 and u + du <= 0.0:
            step = -0.5 * u / du
        moved = False
        for _ in range(60):
            t_new = t + step * dt
            u_new = u + step * du
            if u_new > 0.0 and math.isfinite(t_new):
                g1, g2 = _residual_pair(x, energy, t_new, u_new)
                res_new = max(abs(g1), abs(g2))
                if res_new < res:
                    t, u, f1, f2, res = t_new, u_new, g1, g2, res_new
                    moved = True
                    break
            step *= 0.5
        if not moved:
            return t, u, res, it + 1, False
    return t, u, res, max_iter, res <= tol


def gue_closed_form(energy: float) -> SaddlePoint:
    """Exact solution for the constant profile: the semicircle law.

    Valid for ``|energy| < 2``; outside, :class:`NoBulkSolution` is raised.
    """
    if abs(energy) >= 2.0:
        raise NoBulkSolution(energy)
    t = energy / 2.0
    s = math.sqrt(1.0 - t * t)
    f1, f2 = _residual_pair(np.ones(2), energy, t, s * s)
    return SaddlePoint(energy, t, s, max(abs(f1), abs(f2)), 0)


def _gue_guess(energy: float) -> tuple[float, float]:
    if abs(energy) < 2.0:
        t = energy / 2.0
        return t, 1.0 - t * t
    return energy / 2.0, 1e-2


def solve_saddle(profile: DeformationProfile, energy: float,
                 tol: float = RESIDUAL_TOL,
                 max_iter: int = MAX_ITERATIONS) -> SaddlePoint:
    """Solve the self-consistency system at one energy.

    Strategy: direct Newton from the semicircle guess; if that fails,
    deform the profile gradually from constant to the target (valid while
    the semicircle anchor ``|E| < 2`` exists); finally walk the energy
    from the universal anchor ``E = 0`` toward the target, shrinking the
    step when convergence is lost.  A walk that stalls with vanishing
    ``s`` has hit the edge of the spectral bulk and raises
    :class:`NoBulkSolution`; any other stall raises :class:`NonConvergence`.
    """
    energy = float(energy)
    x = profile.inverse()

    if energy == 0.0:
        # (t, s) = (0, 1) is exact for every profile
        f1, f2 = _residual_pair(x, 0.0, 0.0, 1.0)
        return SaddlePoint(0.0, 0.0, 1.0, max(abs(f1), abs(f2)), 0)

    t0, u0 = _gue_guess(energy)
    t, u, res, its, ok = _newton(x, energy, t0, u0, tol, max_iter)
    if ok:
        return SaddlePoint(energy, t, math.sqrt(u), res, its)

    if abs(energy) < 2.0:
        sol = _homotopy_from_constant(profile, energy, tol, max_iter)
        if sol is not None:
            return sol

    return _continue_in_energy(x, energy, tol, max_iter)


def _homotopy_from_constant(profile: DeformationProfile, energy: float,
                            tol: float, max_iter: int,
                            steps: int = 8) -> SaddlePoint | None:
    """Warm-start Newton along ``v(lam) = 1 + lam*(v - 1)``, lam: 0 -> 1."""
    v = profile.values
    t, u = _gue_guess(energy)
    total = 0
    for k in range(1, steps + 1):
        lam = k / steps
        x_lam = 1.0 / (1.0 + lam * (v - 1.0))
        if not np.all(np.isfinite(x_lam)) or np.any(x_lam <= 0.0):
            return None
        t, u, res, its, ok = _newton(x_lam, energy, t, u, tol, max_iter)
        total += its
        if not ok:
            return None
    return SaddlePoint(energy, t, math.sqrt(u), res, total)


def _continue_in_energy(x: np.ndarray, energy: float,
                        tol: float, max_iter: int) -> SaddlePoint:
    """March from the exact anchor at ``E = 0`` toward the target energy."""
    t, u = 0.0, 1.0
    e_cur = 0.0
    step = energy / 8.0
    min_step = 1e-7 * max(1.0, abs(energy))
    total = 0
    while True:
        e_try = e_cur + step
        if (energy > 0 and e_try > energy) or (energy < 0 and e_try < energy):
            e_try = energy
        t_new, u_new, res, its, ok = _newton(x, e_try, t, u, tol, max_iter)
        total += its
        if ok:
            t, u, e_cur = t_new, u_new, e_try
            if e_cur == energy:
                return SaddlePoint(energy, t, math.sqrt(u), res, total)
            step *= 1.7
        else:
            step *= 0.5
            if abs(step) < min_step:
                # s**2 -> 0 along the walk marks the bulk edge
                if u < 1e-2:
                    raise NoBulkSolution(
                        energy,
                        f"bulk ends near E = {e_cur:.6g}; no solution at E = {energy}",
                    )
                raise NonConvergence(
                    f"continuation stalled at E = {e_cur:.6g} "
                    f"(residual {res:.3g}, s**2 = {u:.3g})"
                )


def density_of_states(profile: DeformationProfile,
                      saddle: SaddlePoint) -> SpectralDensity:
    """Density of states at the saddle's energy, from the solved ``(t, s)``."""
    x = profile.inverse()
    z, a = _terms(x, saddle.energy, saddle.t, saddle.s * saddle.s)
    rho = saddle.s / (math.pi * profile.size) * float(np.sum(x * a))
    return SpectralDensity(saddle.energy, rho)
