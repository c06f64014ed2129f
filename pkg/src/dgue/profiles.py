"""Deformation profiles for the weighted GUE ensemble.

A profile assigns a positive strength ``v_n`` to each matrix index. The
ensemble couples row and column strengths multiplicatively, so entry
``(i, j)`` of the deformed matrix has variance ``v_i * v_j / N``.  All
analytic results downstream are parametrized by the ``v_n`` alone, which
is why the profile object is the common currency of the package.

Supported families
------------------
constant
    ``v_n = 1`` for all ``n``; reduces every result to the plain GUE.
power_law
    With exponent ``p > 0`` or ``-1 < p < 0``: ``v_n = (N / n)**p``.
    With ``p < -1`` the normalization changes to ``v_n = 1 / (N * n**p)``
    so that the strengths stay summable in the same sense.  ``p = -1``
    separates the two conventions and is rejected.
exponential
    ``v_n = N * base**(-n)`` for ``base > 1``.
explicit
    Arbitrary positive strengths supplied directly or loaded from a file
    with one value per line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ProfileError",
    "DeformationProfile",
    "ProfileSpec",
    "constant_profile",
    "power_law_profile",
    "exponential_profile",
    "explicit_profile",
    "load_profile",
    "build_profile",
    "validity_ratio",
]


class ProfileError(ValueError):
    """Raised when a profile description is malformed or degenerate."""


@dataclass(frozen=True)
class DeformationProfile:
    """Positive per-index strengths ``v_n`` of a deformed ensemble.

    Attributes
    ----------
    size : int
        Matrix dimension ``N``.
    values : numpy.ndarray
        The strengths ``v_1 .. v_N`` as a read-only float array.
    family : str
        One of ``constant``, ``power_law``, ``exponential``, ``explicit``.
    param : float or None
        Family parameter (``p`` for power_law, ``base`` for exponential).
    """

    size: int
    values: np.ndarray = field(repr=False)
    family: str = "explicit"
    param: float | None = None

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise ProfileError("profile values must form a one-dimensional array")
        if vals.shape[0] != self.size:
            raise ProfileError(
                f"profile has {vals.shape[0]} values but size is {self.size}"
            )
        if self.size < 2:
            raise ProfileError("profile needs at least 2 entries")
        if not np.all(np.isfinite(vals)):
            raise ProfileError("profile values must be finite")
        if np.any(vals <= 0.0):
            # exponential tails underflow to exactly 0.0 once N is large
            # enough; refuse rather than propagate zeros into divisions
            raise ProfileError("profile values must be strictly positive")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def weights(self) -> np.ndarray:
        """Multiplicative weights ``w_n = sqrt(v_n)`` applied to the GUE."""
        return np.sqrt(self.values)

    def inverse(self) -> np.ndarray:
        """Inverse strengths ``x_n = 1 / v_n`` used by the mean-field equations."""
        return 1.0 / self.values


def constant_profile(size: int) -> DeformationProfile:
    """Profile with ``v_n = 1``; the undeformed GUE."""
    return DeformationProfile(size, np.ones(size), family="constant")


def power_law_profile(size: int, p: float) -> DeformationProfile:
    """Power-law profile with exponent ``p`` (``p != -1``).

    For ``p > -1`` the strengths are ``(N / n)**p``; for ``p < -1`` they
    are ``1 / (N * n**p)``.
    """
    p = float(p)
    if p == -1.0:
        raise ProfileError("power-law exponent p = -1 is not supported")
    if p == 0.0:
        raise ProfileError("power-law exponent p = 0 is the constant profile")
    n = np.arange(1, size + 1, dtype=float)
    if p > -1.0:
        vals = (size / n) ** p
    else:
        vals = 1.0 / (size * n**p)
    return DeformationProfile(size, vals, family="power_law", param=p)


def exponential_profile(size: int, base: float) -> DeformationProfile:
    """Exponentially decaying profile ``v_n = N * base**(-n)``, ``base > 1``."""
    base = float(base)
    if not base > 1.0:
        raise ProfileError("exponential profile requires base > 1")
    n = np.arange(1, size + 1, dtype=float)
    with np.errstate(under="ignore"):
        vals = size * base ** (-n)
    if np.any(vals <= 0.0):
        raise ProfileError(
            f"exponential profile underflows to zero at size {size} with base {base}"
        )
    return DeformationProfile(size, vals, family="exponential", param=base)


def explicit_profile(values) -> DeformationProfile:
    """Profile from an explicit sequence of positive strengths."""
    vals = np.asarray(list(values), dtype=float)
    return DeformationProfile(vals.shape[0], vals, family="explicit")


def load_profile(path, size: int | None = None) -> DeformationProfile:
    """Read an explicit profile from a text file, one strength per line.

    Blank lines and ``#`` comments are ignored.  If ``size`` is given the
    file must contain exactly that many values.
    """
    vals: list[float] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                vals.append(float(text))
            except ValueError:
                raise ProfileError(f"{path}:{lineno}: not a number: {text!r}") from None
    if size is not None and len(vals) != size:
        raise ProfileError(
            f"{path}: expected {size} values, found {len(vals)}"
        )
    if not vals:
        raise ProfileError(f"{path}: no values found")
    return explicit_profile(vals)


@dataclass(frozen=True)
class ProfileSpec:
    """Lightweight description of a profile family, independent of size.

    Used wherever the same family must be rebuilt at several matrix sizes
    (size scans, configuration files).
    """

    family: str
    p: float | None = None
    base: float | None = None
    values: tuple[float, ...] | None = None
    path: str | None = None

    def label(self) -> str:
        if self.family == "power_law":
            return f"power_law(p={self.p})"
        if self.family == "exponential":
            return f"exponential(base={self.base})"
        return self.family


def build_profile(spec: ProfileSpec, size: int) -> DeformationProfile:
    """Construct the profile described by ``spec`` at dimension ``size``."""
    if spec.family == "constant":
        return constant_profile(size)
    if spec.family == "power_law":
        if spec.p is None:
            raise ProfileError("power_law spec requires exponent p")
        return power_law_profile(size, spec.p)
    if spec.family == "exponential":
        if spec.base is None:
            raise ProfileError("exponential spec requires a base")
        return exponential_profile(size, spec.base)
    if spec.family == "explicit":
        if spec.values is not None:
            prof = explicit_profile(spec.values)
            if prof.size != size:
                raise ProfileError(
                    f"explicit spec has {prof.size} values, expected {size}"
                )
            return prof
        if spec.path is not None:
            return load_profile(spec.path, size)
        raise ProfileError("explicit spec requires values or a file path")
    raise ProfileError(f"unknown profile family {spec.family!r}")


def validity_ratio(profile: DeformationProfile, rho0: float) -> float:
    """Ratio ``sum(x_n**2) / (rho0 * N**2)`` controlling the mean-field error.

    ``rho0`` is the spectral density at zero energy.  The analytic moment
    formulas hold when this ratio is small compared to 1; heavy profiles
    (power laws with ``p < -1``, exponential decay) drive it large and the
    ratio may overflow to ``inf``, which faithfully signals breakdown.
    """
    if rho0 <= 0.0:
        raise ValueError("rho0 must be positive")
    x = profile.inverse()
    with np.errstate(over="ignore"):
        num = float(np.sum(x * x))
    return num / (rho0 * profile.size**2)
