"""Monte Carlo estimation of eigenvector moments and their size scaling.

Each realization draws one deformed matrix, selects the eigenvectors in
a window around the target energy, and accumulates moments of their
squared components.  Realizations are the unit of independence: standard
errors are clustered by realization, and every realization consumes its
own child of a single root seed sequence, so results are reproducible
bit for bit regardless of how many worker threads execute them.

Determinism contract
--------------------
For a fixed seed the estimates (and anything derived from them) are
bitwise identical across runs and across ``threads`` settings.  Three
ingredients make this hold: per-realization seed streams that do not
depend on the worker layout, reductions over realizations performed
with exact summation in realization order, and LAPACK pinned to one
internal thread while experiment code runs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.stats import kstwobign
from threadpoolctl import threadpool_limits

from . import analytic, meanfield
from .ensemble import deform, sample_gue
from .profiles import DeformationProfile, ProfileSpec, build_profile

__all__ = [
    "WindowPolicy",
    "MomentEstimate",
    "ScanResult",
    "FitResult",
    "FractalDimension",
    "DistributionCheck",
    "default_window",
    "default_realizations",
    "parse_window",
    "estimate_moments",
    "moment_realizations",
    "scan_sizes",
    "fit_loglog",
    "fractal_dimension",
    "distribution_check",
    "ks_critical",
    "bootstrap_stderr",
]


def default_window(size: int) -> int:
    """Default window: the central 2 percent of the spectrum, at least 1."""
    return max(1, math.ceil(0.02 * size))


def default_realizations(size: int) -> int:
    """Default realization schedule, tapering with matrix size."""
    if size <= 512:
        return 500
    if size <= 1024:
        return 200
    return 100


@dataclass(frozen=True)
class WindowPolicy:
    """Eigenvector selection rule around the target energy.

    ``nearest_k`` takes the ``k`` eigenvalues closest to the energy
    (``k = None`` means the 2-percent default for the size at hand);
    ``halfwidth`` takes every eigenvalue within ``delta`` of it, which
    may select none in a given realization.
    """

    kind: str = "nearest_k"
    k: int | None = None
    delta: float | None = None

    @staticmethod
    def nearest(k: int | None = None) -> "WindowPolicy":
        return WindowPolicy("nearest_k", k=k)

    @staticmethod
    def halfwidth(delta: float) -> "WindowPolicy":
        if delta <= 0:
            raise ValueError("halfwidth must be positive")
        return WindowPolicy("halfwidth", delta=float(delta))

    def describe(self, size: int | None = None) -> str:
        if self.kind == "nearest_k":
            k = self.k if self.k is not None else (
                default_window(size) if size else None)
            return f"nearest_k:{k if k is not None else 'auto'}"
        return f"halfwidth:{self.delta}"

    def select(self, eigenvalues: np.ndarray, energy: float):
        """Inclusive sorted-index range ``(i0, i1)`` or None if empty.

        Because the eigenvalues are sorted, both rules select a
        contiguous index range, which is what lets the second
        diagonalization pass target a subset.
        """
        n = eigenvalues.shape[0]
        if self.kind == "nearest_k":
            k = min(self.k if self.k is not None else default_window(n), n)
            hi = int(np.searchsorted(eigenvalues, energy))
            lo = hi - 1
            for _ in range(k):
                if hi >= n or (lo >= 0 and
                               energy - eigenvalues[lo] <= eigenvalues[hi] - energy):
                    lo -= 1
                else:
                    hi += 1
            return lo + 1, hi - 1
        if self.kind == "halfwidth":
            i0 = int(np.searchsorted(eigenvalues, energy - self.delta, side="left"))
            i1 = int(np.searchsorted(eigenvalues, energy + self.delta, side="right")) - 1
            if i1 < i0:
                return None
            return i0, i1
        raise ValueError(f"unknown window kind {self.kind!r}")


def parse_window(text: str) -> WindowPolicy:
    """Parse ``auto``, ``nearest_k:K``, or ``halfwidth:DELTA``."""
    if text in ("auto", "nearest_k", "nearest_k:auto"):
        return WindowPolicy.nearest()
    kind, sep, arg = text.partition(":")
    if sep and kind == "nearest_k":
        return WindowPolicy.nearest(int(arg))
    if sep and kind == "halfwidth":
        return WindowPolicy.halfwidth(float(arg))
    raise ValueError(f"cannot parse window policy {text!r}")


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo estimate of the total moment ``sum_n <y_n**q>``."""

    q: float
    energy: float
    size: int
    total_iq: float
    std_error: float
    samples_used: int
    realizations: int
    seed: int
    skipped: int = 0


@dataclass(frozen=True)
class FitResult:
    """Weighted least-squares line through ``(ln N, ln I)`` points."""

    slope: float
    intercept: float
    slope_stderr: float
    dof: int


@dataclass(frozen=True)
class ScanResult:
    """Moment estimates across sizes plus the fitted scaling exponent."""

    q: float
    energy: float
    sizes: tuple[int, ...]
    estimates: tuple[MomentEstimate, ...]
    slope: float
    slope_stderr: float
    intercept: float


@dataclass(frozen=True)
class FractalDimension:
    d_q: float
    stderr: float


@dataclass(frozen=True)
class DistributionCheck:
    """Comparison of one component's sample law against the predicted
    exponential distribution."""

    component: int
    size: int
    energy: float
    samples: int
    ks_distance: float
    rate_theory: float
    rate_empirical: float


def _normalize_qs(qs) -> list[float]:
    if np.isscalar(qs):
        out = [float(qs)]
    else:
        out = [float(q) for q in qs]
    if not out:
        raise ValueError("need at least one moment order")
    for q in out:
        if q <= 0:
            raise ValueError("moment orders must be positive")
    return out


def _harvest(profile: DeformationProfile, energy: float, qs: list[float],
             realizations: int, window: WindowPolicy, stream, threads: int,
             component: int | None = None):
    """Run the realizations and return per-realization records in order.

    Each record is ``(totals, count, samples)`` where ``totals`` holds
    one accumulated moment sum per requested order, ``count`` is the
    number of eigenvectors the window selected, and ``samples`` collects
    the squared modulus of one component when requested.
    """
    if realizations < 1:
        raise ValueError("need at least one realization")
    children = stream.spawn(realizations)
    size = profile.size

    def one(r: int):
        rng = np.random.default_rng(children[r])
        h = deform(sample_gue(size, rng), profile)
        eigenvalues = np.linalg.eigvalsh(h)
        sel = window.select(eigenvalues, energy)
        if sel is None:
            return tuple(0.0 for _ in qs), 0, None
        i0, i1 = sel
        _, vecs = scipy.linalg.eigh(h, subset_by_index=(i0, i1))
        y = vecs.real**2 + vecs.imag**2
        totals = tuple(float(np.sum(y**q)) for q in qs)
        samples = y[component - 1, :].copy() if component is not None else None
        return totals, y.shape[1], samples

    # LAPACK is pinned to one internal thread even for serial runs so the
    # floating-point results cannot depend on the threads setting
    with threadpool_limits(limits=1):
        if threads <= 1:
            return [one(r) for r in range(realizations)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, range(realizations)))


def _resolve(spec: ProfileSpec, size: int, realizations: int | None,
             window: WindowPolicy | None, seed: int, stream):
    profile = build_profile(spec, size)
    if realizations is None:
        realizations = default_realizations(size)
    if window is None:
        window = WindowPolicy.nearest()
    if stream is None:
        stream = np.random.SeedSequence(seed)
    return profile, realizations, window, stream


def moment_realizations(spec: ProfileSpec, size: int, energy: float, qs,
                        realizations: int | None = None,
                        window: WindowPolicy | None = None,
                        seed: int = 0, threads: int = 1, stream=None):
    """Per-realization moment sums and window counts, in realization order.

    Returns ``(totals, counts)`` where ``totals`` maps each moment order
    to an array of per-realization sums.  This is the raw material for
    both the pooled estimates and resampling error analyses.
    """
    qlist = _normalize_qs(qs)
    profile, realizations, window, stream = _resolve(
        spec, size, realizations, window, seed, stream)
    records = _harvest(profile, energy, qlist, realizations, window,
                       stream, threads)
    counts = np.array([rec[1] for rec in records], dtype=np.int64)
    totals = {q: np.array([rec[0][j] for rec in records])
              for j, q in enumerate(qlist)}
    return totals, counts


def _pooled(q: float, energy: float, size: int, totals: np.ndarray,
            counts: np.ndarray, seed: int) -> MomentEstimate:
    live = counts > 0
    used = int(np.count_nonzero(live))
    skipped = counts.shape[0] - used
    if used == 0:
        raise RuntimeError("every realization produced an empty window")
    n_tot = float(math.fsum(float(c) for c in counts))
    t_tot = math.fsum(float(t) for t in totals)
    mean = t_tot / n_tot
    if used > 1:
        # ratio-estimator variance clustered by realization; exact for
        # equal window counts, still consistent when counts vary
        dev = [float(t) - mean * float(c) for t, c in zip(totals, counts)]
        ss = math.fsum(d * d for d in dev)
        se = math.sqrt(used / (used - 1.0) * ss) / n_tot
    else:
        se = 0.0
    return MomentEstimate(q, energy, size, mean, se,
                          int(n_tot), used, seed, skipped)


def estimate_moments(spec: ProfileSpec, size: int, energy: float, qs,
                     realizations: int | None = None,
                     window: WindowPolicy | None = None,
                     seed: int = 0, threads: int = 1,
                     stream=None) -> dict[float, MomentEstimate]:
    """Monte Carlo total moments at one size, for one or several orders.

    All orders share the same realizations and diagonalizations.  The
    result maps each order to its :class:`MomentEstimate`.
    """
    qlist = _normalize_qs(qs)
    totals, counts = moment_realizations(spec, size, energy, qlist,
                                         realizations, window, seed,
                                         threads, stream)
    return {q: _pooled(q, energy, size, totals[q], counts, seed)
            for q in qlist}


def fit_loglog(points) -> FitResult:
    """Weighted least-squares power-law fit ``I = C * N**slope``.

    ``points`` is a sequence of ``(size, value, sigma)``.  When every
    sigma is positive the weights are ``(value / sigma)**2``, the
    delta-method weights for a log transform; otherwise the fit is
    unweighted.  The slope error comes from the residual scatter, so it
    is meaningful even if the sigmas are only relative.
    """
    pts = [(float(n), float(v), float(s)) for n, v, s in points]
    if len(pts) < 2:
        raise ValueError("need at least two points to fit")
    for n, v, _ in pts:
        if n <= 0 or v <= 0:
            raise ValueError("sizes and values must be positive for a log fit")
    xs = np.log([p[0] for p in pts])
    ys = np.log([p[1] for p in pts])
    sig = np.array([p[2] for p in pts])
    if np.all(sig > 0):
        w = (np.array([p[1] for p in pts]) / sig) ** 2
    else:
        w = np.ones_like(xs)
    wsum = float(np.sum(w))
    xb = float(np.sum(w * xs)) / wsum
    yb = float(np.sum(w * ys)) / wsum
    sxx = float(np.sum(w * (xs - xb) ** 2))
    if sxx == 0.0:
        raise ValueError("all sizes identical; slope undefined")
    slope = float(np.sum(w * (xs - xb) * (ys - yb))) / sxx
    intercept = yb - slope * xb
    dof = len(pts) - 2
    if dof > 0:
        chi2 = float(np.sum(w * (ys - intercept - slope * xs) ** 2))
        stderr = math.sqrt(max(chi2, 0.0) / dof / sxx)
    else:
        stderr = 0.0
    return FitResult(slope, intercept, stderr, dof)


def fractal_dimension(scan: ScanResult) -> FractalDimension:
    """Generalized dimension ``d_q = -slope / (q - 1)`` from a scan."""
    if scan.q == 1.0:
        raise ValueError("d_q is undefined at q = 1")
    denom = scan.q - 1.0
    return FractalDimension(-scan.slope / denom + 0.0,
                            abs(scan.slope_stderr / denom))


def scan_sizes(spec: ProfileSpec, sizes, energy: float, q,
               realizations=None, window: WindowPolicy | None = None,
               seed: int = 0, threads: int = 1):
    """Estimate moments across sizes and fit the scaling exponent.

    ``q`` may be a single order (returns one :class:`ScanResult`) or a
    sequence (returns a list, all orders sharing the same
    realizations).  ``realizations`` may be None (size-dependent
    default), a single count, or one count per size.
    """
    sizes = [int(n) for n in sizes]
    if len(sizes) < 2:
        raise ValueError("a scan needs at least two sizes")
    if sorted(set(sizes)) != sizes:
        raise ValueError("sizes must be strictly increasing")
    scalar = np.isscalar(q)
    qlist = _normalize_qs(q)
    if realizations is None or isinstance(realizations, int):
        per_size = [realizations] * len(sizes)
    else:
        per_size = [int(r) for r in realizations]
        if len(per_size) != len(sizes):
            raise ValueError("one realization count per size required")
    root = np.random.SeedSequence(seed)
    streams = root.spawn(len(sizes))
    by_size = [estimate_moments(spec, n, energy, qlist, per_size[i],
                                window, seed, threads, stream=streams[i])
               for i, n in enumerate(sizes)]
    results = []
    for qv in qlist:
        ests = tuple(d[qv] for d in by_size)
        fit = fit_loglog([(e.size, e.total_iq, e.std_error) for e in ests])
        results.append(ScanResult(qv, energy, tuple(sizes), ests,
                                  fit.slope, fit.slope_stderr, fit.intercept))
    return results[0] if scalar else results


def ks_critical(samples: int, alpha: float = 0.01) -> float:
    """Asymptotic Kolmogorov-Smirnov critical distance at level ``alpha``."""
    if samples < 1:
        raise ValueError("need at least one sample")
    return float(kstwobign.isf(alpha)) / math.sqrt(samples)


def distribution_check(spec: ProfileSpec, size: int, energy: float,
                       component: int, realizations: int | None = None,
                       window: WindowPolicy | None = None,
                       seed: int = 0, threads: int = 1) -> DistributionCheck:
    """Test one squared component against its predicted exponential law.

    Pools the component's squared modulus over all selected eigenvectors
    and realizations, computes the Kolmogorov-Smirnov distance to the
    exponential distribution with the analytically predicted rate, and
    the empirical rate ``1 / mean`` for comparison.
    """
    if not 1 <= component <= size:
        raise ValueError(f"component {component} outside 1..{size}")
    profile, realizations, window, stream = _resolve(
        spec, size, realizations, window, seed, None)
    records = _harvest(profile, energy, [1.0], realizations, window,
                       stream, threads, component=component)
    chunks = [rec[2] for rec in records if rec[2] is not None and rec[2].size]
    if not chunks:
        raise RuntimeError("no eigenvectors selected; widen the window")
    samples = np.concatenate(chunks)
    if samples.size < 100:
        raise RuntimeError(
            f"only {samples.size} samples collected; too few for a "
            "distribution test")

    saddle = meanfield.solve_saddle(profile, energy)
    density = meanfield.density_of_states(profile, saddle)
    law = analytic.component_law(profile, saddle, density, component)

    srt = np.sort(samples)
    n = srt.size
    cdf = -np.expm1(-law.rate * srt)
    grid = np.arange(n, dtype=float)
    dist = max(float(np.max(cdf - grid / n)),
               float(np.max((grid + 1.0) / n - cdf)))
    mean = float(np.mean(samples))
    return DistributionCheck(component, size, energy, n, dist,
                             law.rate, 1.0 / mean)


def bootstrap_stderr(totals: np.ndarray, counts: np.ndarray,
                     resamples: int = 1000, seed: int = 0) -> float:
    """Bootstrap standard error of the pooled mean, resampling realizations.

    Cross-checks the closed-form clustered error returned by
    :func:`estimate_moments`.
    """
    totals = np.asarray(totals, dtype=float)
    counts = np.asarray(counts, dtype=float)
    live = counts > 0
    totals, counts = totals[live], counts[live]
    r = totals.shape[0]
    if r < 2:
        raise ValueError("need at least two contributing realizations")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, r, size=(resamples, r))
    means = totals[idx].sum(axis=1) / counts[idx].sum(axis=1)
    return float(np.std(means, ddof=1))
