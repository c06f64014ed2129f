"""Command-line interface.

Subcommands
-----------
solve
    Mean-field saddle and density of states on an energy grid.
predict
    Analytic moments, component rates, and validity diagnostics at one
    energy.
scan
    Monte Carlo moment estimates across matrix sizes with a power-law
    fit against the analytic scaling.
check
    Built-in consistency suite (closed forms, oracle, determinism).
oracle
    Exact finite-size zero-energy moments from quadrature, compared with
    the asymptotic formula.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure, 3 check-suite failure.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__, runio
from .analytic import (QuadratureError, component_law, finite_n_oracle,
                       moment_prediction, scaling_regime, zero_energy_moments)
from .ensemble import generalized_equivalence_check
from .experiment import (distribution_check, estimate_moments,
                         fractal_dimension, ks_critical,
                         moment_realizations, parse_window, scan_sizes)
from .meanfield import (NoBulkSolution, NonConvergence, density_of_states,
                        gue_closed_form, solve_saddle)
from .profiles import (ProfileError, ProfileSpec, build_profile,
                       validity_ratio)

OK, USAGE_ERROR, NUMERIC_ERROR, CHECK_FAILURE = 0, 1, 2, 3


class _CliError(Exception):
    """Usage or configuration problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let values like -1.9:1.9:0.1 or -0.5,2 pass as arguments
        self._negative_number_matcher = re.compile(r"^-\d[\d.:,eE+-]*$")

    def error(self, message):
        raise _CliError(message)


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one command invocation.

    Defaults are overridden first by a configuration file, then by
    command-line flags.
    """

    profile: str = "constant"
    p: float | None = None
    base: float | None = None
    values_file: str | None = None
    size: int = 1000
    sizes: tuple[int, ...] = (128, 256, 512, 1024, 2048)
    energy: float = 0.0
    egrid: tuple[float, float, float] | None = None
    qs: tuple[float, ...] = (2.0,)
    realizations: tuple[int, ...] | int | None = None
    seed: int = 12345
    window: str = "auto"
    threads: int = 1
    out: str | None = None
    threshold: float = 0.1
    components: tuple[int, ...] = (1,)
    tol_scale: float = 1.0

    def spec(self) -> ProfileSpec:
        return ProfileSpec(self.profile, p=self.p, base=self.base,
                           path=self.values_file)

    def validate(self) -> None:
        if self.profile not in ("constant", "power_law", "exponential",
                                "explicit"):
            raise _CliError(f"unknown profile family {self.profile!r}")
        if self.profile == "power_law":
            if self.p is None:
                raise _CliError("profile power_law requires --p")
            if self.p == -1.0:
                raise _CliError("power-law exponent p = -1 is not supported")
        if self.profile == "exponential":
            if self.base is None:
                raise _CliError("profile exponential requires --base")
            if self.base <= 1.0:
                raise _CliError("exponential base must exceed 1")
        if self.profile == "explicit" and not self.values_file:
            raise _CliError("profile explicit requires --values-file")
        if self.size < 2:
            raise _CliError("--N must be at least 2")
        if len(self.sizes) < 2 or list(self.sizes) != sorted(set(self.sizes)):
            raise _CliError("--sizes must be strictly increasing, at least two")
        if any(n < 2 for n in self.sizes):
            raise _CliError("every size must be at least 2")
        if not all(q > 0 for q in self.qs):
            raise _CliError("--q values must be positive")
        if isinstance(self.realizations, int) and self.realizations < 1:
            raise _CliError("--realizations must be positive")
        if isinstance(self.realizations, tuple):
            if any(r < 1 for r in self.realizations):
                raise _CliError("--realizations must be positive")
            if len(self.realizations) != len(self.sizes):
                raise _CliError("--realizations list must match --sizes")
        if self.threads < 1:
            raise _CliError("--threads must be at least 1")
        if self.threshold <= 0:
            raise _CliError("--threshold must be positive")
        if any(c < 1 for c in self.components):
            raise _CliError("--component indices start at 1")
        if self.tol_scale <= 0:
            raise _CliError("--tol-scale must be positive")
        try:
            parse_window(self.window)
        except ValueError as exc:
            raise _CliError(str(exc)) from None
        if self.egrid is not None:
            lo, hi, step = self.egrid
            if step <= 0 or hi < lo:
                raise _CliError("--egrid wants MIN:MAX:STEP with STEP > 0")

    def family_tag(self):
        """Argument for the scaling classifier, or None if no family law."""
        if self.profile == "constant":
            return 0.0
        if self.profile == "power_law":
            return self.p
        if self.profile == "exponential":
            return "exp"
        return None

    def profile_dict(self) -> dict:
        d = {"profile": self.profile}
        if self.profile == "power_law":
            d["p"] = self.p
        elif self.profile == "exponential":
            d["base"] = self.base
        elif self.profile == "explicit":
            d["values_file"] = self.values_file
        return d


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}")


def _grid(text: str) -> tuple[float, float, float]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--egrid wants MIN:MAX:STEP")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number grid: {text!r}")


def _build_parser() -> _Parser:
    shared = argparse.ArgumentParser(add_help=False)
    add = shared.add_argument
    add("--config", metavar="FILE",
        help="YAML options file, or a summary.json from a previous run")
    add("--profile", choices=["constant", "power_law", "exponential",
                              "explicit"])
    add("--p", type=float, help="power-law exponent (p != -1)")
    add("--base", type=float, help="exponential decay base (> 1)")
    add("--values-file", dest="values_file",
        help="explicit profile, one strength per line")
    add("--N", dest="size", type=int, help="matrix dimension")
    add("--sizes", type=_int_list, help="comma list of scan dimensions")
    add("--energy", type=float)
    add("--egrid", type=_grid, metavar="MIN:MAX:STEP",
        help="energy grid for solve")
    add("--q", dest="qs", type=_float_list, help="comma list of moment orders")
    add("--realizations", type=_int_list,
        help="matrix draws: one count, or one per size")
    add("--seed", type=int)
    add("--window", help="auto, nearest_k:K, or halfwidth:DELTA")
    add("--threads", type=int, help="worker threads (results do not depend on it)")
    add("--out", help="output directory")
    add("--threshold", type=float, help="validity-ratio alarm level")
    add("--component", dest="components", type=_int_list,
        help="comma list of 1-based component indices")
    add("--tol-scale", dest="tol_scale", type=float,
        help="multiply check tolerances (testing aid)")

    parser = _Parser(prog="dgue",
                     description="Eigenvector statistics of deformed GUE "
                                 "ensembles: mean-field theory vs Monte Carlo.")
    parser.add_argument("--version", action="version",
                        version=f"dgue {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    subs.add_parser("solve", parents=[shared],
                    help="mean-field saddle and density of states")
    subs.add_parser("predict", parents=[shared],
                    help="analytic moments and component rates at one energy")
    subs.add_parser("scan", parents=[shared],
                    help="Monte Carlo size scan with scaling fit")
    subs.add_parser("check", parents=[shared],
                    help="built-in consistency suite")
    subs.add_parser("oracle", parents=[shared],
                    help="finite-size quadrature moments vs asymptotics")
    return parser


_FILE_KEYS = {
    "profile": "profile", "p": "p", "base": "base",
    "values_file": "values_file", "values-file": "values_file",
    "N": "size", "sizes": "sizes", "energy": "energy", "egrid": "egrid",
    "q": "qs", "realizations": "realizations", "seed": "seed",
    "window": "window", "threads": "threads", "out": "out",
    "threshold": "threshold", "component": "components",
    "tol_scale": "tol_scale",
}


def _coerce_file_value(field_name: str, value):
    if field_name in ("sizes", "components"):
        if isinstance(value, (int, float)):
            value = [value]
        if isinstance(value, str):
            return _int_list(value)
        return tuple(int(v) for v in value)
    if field_name == "qs":
        if isinstance(value, (int, float)):
            value = [value]
        if isinstance(value, str):
            return _float_list(value)
        return tuple(float(v) for v in value)
    if field_name == "realizations":
        if value is None:
            return None
        if isinstance(value, int):
            return value
        if isinstance(value, str):
            got = _int_list(value)
            return got[0] if len(got) == 1 else got
        return tuple(int(v) for v in value)
    if field_name == "egrid":
        if value is None:
            return None
        if isinstance(value, str):
            return _grid(value)
        return tuple(float(v) for v in value)
    if field_name in ("size", "seed", "threads"):
        return int(value)
    if field_name in ("energy", "threshold", "tol_scale"):
        return float(value)
    if field_name == "p" or field_name == "base":
        return None if value is None else float(value)
    return value


def _assemble(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            raw = runio.load_config_file(args.config)
        except (OSError, ValueError) as exc:
            raise _CliError(str(exc)) from None
        updates = {}
        for key, value in raw.items():
            if key not in _FILE_KEYS:
                raise _CliError(f"{args.config}: unknown option {key!r}")
            name = _FILE_KEYS[key]
            try:
                updates[name] = _coerce_file_value(name, value)
            except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
                raise _CliError(f"{args.config}: bad value for {key}: {exc}")
        cfg = replace(cfg, **updates)
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    if "realizations" in overrides and len(overrides["realizations"]) == 1:
        overrides["realizations"] = overrides["realizations"][0]
    cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def _echo(line: str = "") -> None:
    print(line)


# ---------------------------------------------------------------- solve


def _energy_list(cfg: RunConfig) -> list[float]:
    if cfg.egrid is None:
        return [cfg.energy]
    lo, hi, step = cfg.egrid
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


def cmd_solve(cfg: RunConfig) -> int:
    profile = build_profile(cfg.spec(), cfg.size)
    rows = []
    rc = OK
    for energy in _energy_list(cfg):
        try:
            sp = solve_saddle(profile, energy)
            rho = density_of_states(profile, sp).rho
            rows.append((energy, sp.t, sp.s, rho, 1, sp.residual,
                         sp.iterations))
        except NoBulkSolution:
            rows.append((energy, math.nan, math.nan, 0.0, 0, math.nan, 0))
        except NonConvergence as exc:
            print(f"dgue: solve failed at E = {energy:g}: {exc}",
                  file=sys.stderr)
            rows.append((energy, math.nan, math.nan, math.nan, 0, math.nan, 0))
            rc = NUMERIC_ERROR
    _echo(f"{'E':>10} {'t':>13} {'s':>13} {'rho':>13}  bulk")
    for energy, t, s, rho, flag, _, _ in rows:
        if flag:
            _echo(f"{energy:10.5f} {t:13.6e} {s:13.6e} {rho:13.6e}  yes")
        else:
            _echo(f"{energy:10.5f} {'-':>13} {'-':>13} {rho:13.6e}  no")
    if cfg.out:
        outdir = runio.ensure_outdir(cfg.out)
        config = {**cfg.profile_dict(), "N": cfg.size,
                  "egrid": list(cfg.egrid) if cfg.egrid else None,
                  "energy": cfg.energy}
        header = runio.config_header(__version__, "solve", config)
        runio.write_csv(os.path.join(outdir, "solve.csv"), header,
                        ["energy", "t", "s", "rho", "in_bulk", "residual",
                         "iterations"], rows)
        _echo(f"wrote {os.path.join(outdir, 'solve.csv')}")
    return rc


# -------------------------------------------------------------- predict


def cmd_predict(cfg: RunConfig) -> int:
    profile = build_profile(cfg.spec(), cfg.size)
    try:
        sp = solve_saddle(profile, cfg.energy)
    except NoBulkSolution as exc:
        print(f"dgue: {exc}", file=sys.stderr)
        return NUMERIC_ERROR
    density = density_of_states(profile, sp)
    rho0 = density_of_states(profile, solve_saddle(profile, 0.0)).rho
    ratio = validity_ratio(profile, rho0)
    verdict = "ok" if ratio <= cfg.threshold else "exceeded"

    _echo(f"profile {cfg.spec().label()}  N = {cfg.size}  E = {cfg.energy:g}")
    _echo(f"saddle: t = {sp.t:.12g}  s = {sp.s:.12g}  "
          f"(residual {sp.residual:.2e}, {sp.iterations} iterations)")
    _echo(f"density of states: rho = {density.rho:.12g}")
    _echo(f"validity ratio {ratio:.4g} against threshold {cfg.threshold:g}: "
          f"{verdict}")

    preds = {q: moment_prediction(profile, sp, density, q) for q in cfg.qs}
    laws = {c: component_law(profile, sp, density, c) for c in cfg.components}
    for q in cfg.qs:
        _echo(f"q = {q:g}: total moment {preds[q].total:.10g}")
    for c in cfg.components:
        _echo(f"component {c}: exponential rate {laws[c].rate:.10g}")
    tag = cfg.family_tag()
    law_rows = []
    if tag is not None:
        for q in cfg.qs:
            sl = scaling_regime(tag, q)
            d_q = "undefined" if math.isnan(sl.d_q) else f"{sl.d_q:g}"
            extra = " (log corrections)" if sl.log_correction else ""
            _echo(f"q = {q:g}: regime {sl.regime}, total ~ N^{sl.exponent:g}"
                  f"{extra}, d_q = {d_q}")
            law_rows.append((q, sl))

    if cfg.out:
        outdir = runio.ensure_outdir(cfg.out)
        config = {**cfg.profile_dict(), "N": cfg.size, "energy": cfg.energy,
                  "q": list(cfg.qs), "threshold": cfg.threshold}
        header = runio.config_header(__version__, "predict", config)
        columns = ["index", "strength", "rate"] + [f"I_{q:g}" for q in cfg.qs]
        all_rates = [component_law(profile, sp, density, i).rate
                     for i in range(1, profile.size + 1)]
        rows = [(i + 1, float(profile.values[i]), all_rates[i],
                 *(float(preds[q].per_component[i]) for q in cfg.qs))
                for i in range(profile.size)]
        runio.write_csv(os.path.join(outdir, "components.csv"), header,
                        columns, rows)
        payload = {
            "version": __version__, "command": "predict", "config": config,
            "saddle": {"t": sp.t, "s": sp.s, "residual": sp.residual},
            "rho": density.rho,
            "validity_ratio": None if math.isinf(ratio) else ratio,
            "validity_ok": ratio <= cfg.threshold,
            "totals": {f"{q:g}": preds[q].total for q in cfg.qs},
            "rates": {str(c): laws[c].rate for c in cfg.components},
            "scaling": [
                {"q": q, "regime": sl.regime, "exponent": sl.exponent,
                 "d_q": None if math.isnan(sl.d_q) else sl.d_q,
                 "log_correction": sl.log_correction}
                for q, sl in law_rows
            ],
        }
        runio.write_json(os.path.join(outdir, "summary.json"), payload)
        _echo(f"wrote {outdir}/components.csv and {outdir}/summary.json")
    return OK


# ----------------------------------------------------------------- scan


def cmd_scan(cfg: RunConfig) -> int:
    window = parse_window(cfg.window)
    reals = cfg.realizations
    if isinstance(reals, tuple):
        reals = list(reals)
    try:
        scans = scan_sizes(cfg.spec(), list(cfg.sizes), cfg.energy,
                           list(cfg.qs), reals, window, cfg.seed,
                           cfg.threads)
    except (NonConvergence, RuntimeError) as exc:
        print(f"dgue: scan failed: {exc}", file=sys.stderr)
        return NUMERIC_ERROR
    tag = cfg.family_tag()
    references = {}
    if tag is not None:
        for scan in scans:
            law = scaling_regime(tag, scan.q)
            references[scan.q] = (law.exponent,
                                  f"reference N^{law.exponent:g}")

    for scan in scans:
        line = (f"q = {scan.q:g}: slope {scan.slope:.4f} "
                f"+/- {scan.slope_stderr:.4f}")
        if scan.q in references:
            line += f" (reference {references[scan.q][0]:g})"
        if scan.q != 1.0:
            fd = fractal_dimension(scan)
            line += f", d_q {fd.d_q:.4f} +/- {fd.stderr:.4f}"
        _echo(line)

    outdir = runio.ensure_outdir(cfg.out or "scan_out")
    resolved_reals = [
        e.realizations + e.skipped for e in scans[0].estimates]
    config = {**cfg.profile_dict(), "sizes": list(cfg.sizes),
              "energy": cfg.energy, "q": list(cfg.qs),
              "realizations": resolved_reals, "seed": cfg.seed,
              "window": cfg.window}
    header = runio.config_header(__version__, "scan", config)
    rows = []
    for scan in scans:
        for est in scan.estimates:
            rows.append((scan.q, est.size, est.total_iq, est.std_error,
                         est.samples_used, est.realizations, est.skipped))
    runio.write_csv(os.path.join(outdir, "moments.csv"), header,
                    ["q", "size", "total_iq", "std_error", "samples_used",
                     "realizations", "skipped"], rows)

    results = []
    for scan in scans:
        entry = {
            "q": scan.q, "slope": scan.slope,
            "slope_stderr": scan.slope_stderr, "intercept": scan.intercept,
            "estimates": [
                {"size": e.size, "total_iq": e.total_iq,
                 "std_error": e.std_error, "samples_used": e.samples_used,
                 "realizations": e.realizations, "skipped": e.skipped}
                for e in scan.estimates],
        }
        if scan.q != 1.0:
            fd = fractal_dimension(scan)
            entry["d_q"] = fd.d_q
            entry["d_q_stderr"] = fd.stderr
        if scan.q in references:
            entry["reference_exponent"] = references[scan.q][0]
            entry["regime"] = scaling_regime(tag, scan.q).regime
        results.append(entry)
    runio.write_json(os.path.join(outdir, "summary.json"),
                     {"version": __version__, "command": "scan",
                      "config": config, "results": results})
    runio.plot_scan(os.path.join(outdir, "scan.svg"), scans, references,
                    title=cfg.spec().label())
    _echo(f"wrote moments.csv, summary.json, scan.svg in {outdir}")
    return OK


# ---------------------------------------------------------------- check


def _check_semicircle(scale: float):
    tol = 1e-10 * scale
    from .profiles import constant_profile
    profile = constant_profile(16)
    worst = 0.0
    for energy in np.linspace(-1.9, 1.9, 21):
        sp = solve_saddle(profile, float(energy))
        ref = gue_closed_form(float(energy))
        rho = density_of_states(profile, sp).rho
        worst = max(worst, abs(sp.t - ref.t), abs(sp.s - ref.s),
                    abs(rho - ref.s / math.pi))
    return worst <= tol, f"max deviation {worst:.2e} (tol {tol:.0e})"


def _check_zero_energy(scale: float):
    from .profiles import (constant_profile, exponential_profile,
                           power_law_profile)
    tol = 1e-12 * scale
    worst = 0.0
    profs = [constant_profile(500), power_law_profile(500, -0.5),
             power_law_profile(500, -2.0), exponential_profile(500, 2.0)]
    for profile in profs:
        sp = solve_saddle(profile, 0.0)
        density = density_of_states(profile, sp)
        for q in (1.0, 2.0, 3.0):
            a = moment_prediction(profile, sp, density, q).per_component
            b = zero_energy_moments(profile, q).per_component
            with np.errstate(invalid="ignore"):
                rel = np.max(np.abs(a - b) / np.where(b > 0, b, 1.0))
            worst = max(worst, float(rel))
    return worst <= tol, f"max relative gap {worst:.2e} (tol {tol:.0e})"


def _check_oracle(scale: float):
    from .profiles import constant_profile
    tol = 1e-6 * scale
    devs = []
    worst = 0.0
    for size in (200, 400):
        profile = constant_profile(size)
        got = finite_n_oracle(profile, 2.0, 1)
        closed = math.exp(math.lgamma(3.0) + math.lgamma(size)
                          - math.lgamma(2.0 + size))
        worst = max(worst, abs(got / closed - 1.0))
        asym = zero_energy_moments(profile, 2.0).per_component[0]
        devs.append(abs(got / asym - 1.0))
    ok = worst <= tol and devs[1] < devs[0]
    return ok, (f"closed-form gap {worst:.2e} (tol {tol:.0e}), "
                f"asymptotic deviation {devs[0]:.2e} -> {devs[1]:.2e}")


def _check_equivalence(scale: float):
    from .profiles import power_law_profile
    tol = 1e-8 * scale
    profile = power_law_profile(48, -0.5)
    worst_gap = worst_angle = 0.0
    for seed in range(5):
        rep = generalized_equivalence_check(profile, 7000 + seed)
        worst_gap = max(worst_gap, rep.max_value_gap)
        worst_angle = max(worst_angle, rep.max_angle)
    ok = worst_gap <= tol and worst_angle <= tol
    return ok, (f"max eigenvalue gap {worst_gap:.2e}, "
                f"max angle {worst_angle:.2e} (tol {tol:.0e})")


def _check_gue_moment(scale: float):
    spec = ProfileSpec("constant")
    est = estimate_moments(spec, 128, 0.0, 2.0, realizations=200,
                           seed=424242)[2.0]
    expected = 2.0 / 129.0
    band = 4.0 * est.std_error * scale
    gap = abs(est.total_iq - expected)
    return gap <= band, (f"|estimate - exact| = {gap:.2e} "
                         f"within {band:.2e} (4 sigma)")


def _check_distribution(scale: float):
    spec = ProfileSpec("constant")
    chk = distribution_check(spec, 192, 0.0, 1, realizations=250,
                             seed=434343)
    crit = ks_critical(chk.samples, 0.01) * scale
    rate_band = 3.0 * chk.rate_theory / math.sqrt(chk.samples) * scale
    ok = (chk.ks_distance <= crit
          and abs(chk.rate_empirical - chk.rate_theory) <= rate_band)
    return ok, (f"KS {chk.ks_distance:.4f} vs critical {crit:.4f}, "
                f"rate {chk.rate_empirical:.1f} vs {chk.rate_theory:.1f}")


def _check_determinism(scale: float):
    spec = ProfileSpec("power_law", p=-0.5)
    runs = [moment_realizations(spec, 48, 0.0, [1.5, 2.0], realizations=20,
                                seed=515151, threads=threads)
            for threads in (1, 3)]
    same = all(
        np.array_equal(runs[0][0][q], runs[1][0][q]) for q in (1.5, 2.0)
    ) and np.array_equal(runs[0][1], runs[1][1])
    return same, "bitwise identical across thread counts" if same else \
        "results differ between thread counts"


_CHECKS = [
    ("semicircle_recovery", _check_semicircle),
    ("zero_energy_consistency", _check_zero_energy),
    ("oracle_agreement", _check_oracle),
    ("generalized_equivalence", _check_equivalence),
    ("gue_moment_monte_carlo", _check_gue_moment),
    ("component_distribution", _check_distribution),
    ("determinism", _check_determinism),
]


def cmd_check(cfg: RunConfig) -> int:
    failures = 0
    results = []
    for name, func in _CHECKS:
        ok, detail = func(cfg.tol_scale)
        results.append({"name": name, "ok": bool(ok), "detail": detail})
        _echo(f"check {name}: {'PASS' if ok else 'FAIL'} ({detail})")
        if not ok:
            failures += 1
    if cfg.out:
        outdir = runio.ensure_outdir(cfg.out)
        runio.write_json(os.path.join(outdir, "check.json"),
                         {"version": __version__, "command": "check",
                          "tol_scale": cfg.tol_scale, "results": results})
    if failures:
        print(f"dgue: {failures} of {len(_CHECKS)} checks failed",
              file=sys.stderr)
        return CHECK_FAILURE
    _echo(f"all {len(_CHECKS)} checks passed")
    return OK


# --------------------------------------------------------------- oracle


def cmd_oracle(cfg: RunConfig) -> int:
    profile = build_profile(cfg.spec(), cfg.size)
    rows = []
    rc = OK
    for q in cfg.qs:
        asym = zero_energy_moments(profile, q)
        for comp in cfg.components:
            if comp > cfg.size:
                raise _CliError(f"component {comp} exceeds N = {cfg.size}")
            try:
                exact = finite_n_oracle(profile, q, comp)
            except QuadratureError as exc:
                print(f"dgue: oracle failed at q = {q:g}, component {comp}: "
                      f"{exc}", file=sys.stderr)
                return NUMERIC_ERROR
            approx = float(asym.per_component[comp - 1])
            ratio = exact / approx if approx > 0 else math.inf
            rows.append((q, comp, exact, approx, ratio))
            _echo(f"q = {q:g} component {comp}: finite-N {exact:.10g}, "
                  f"asymptotic {approx:.10g}, ratio {ratio:.6f}")
            if cfg.profile == "constant":
                closed = math.exp(math.lgamma(q + 1.0)
                                  + math.lgamma(cfg.size)
                                  - math.lgamma(q + cfg.size))
                _echo(f"    constant-profile closed form {closed:.10g} "
                      f"(relative gap {abs(exact / closed - 1.0):.2e})")
    if cfg.out:
        outdir = runio.ensure_outdir(cfg.out)
        config = {**cfg.profile_dict(), "N": cfg.size, "q": list(cfg.qs),
                  "component": list(cfg.components)}
        header = runio.config_header(__version__, "oracle", config)
        runio.write_csv(os.path.join(outdir, "oracle.csv"), header,
                        ["q", "component", "finite_n", "asymptotic", "ratio"],
                        rows)
        _echo(f"wrote {outdir}/oracle.csv")
    return rc


# ----------------------------------------------------------------- main


_COMMANDS = {
    "solve": cmd_solve,
    "predict": cmd_predict,
    "scan": cmd_scan,
    "check": cmd_check,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _assemble(args)
        return _COMMANDS[args.command](cfg)
    except _CliError as exc:
        print(f"dgue: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ProfileError as exc:
        print(f"dgue: profile error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"dgue: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except NonConvergence as exc:
        print(f"dgue: numerical failure: {exc}", file=sys.stderr)
        return NUMERIC_ERROR
    except QuadratureError as exc:
        print(f"dgue: numerical failure: {exc}", file=sys.stderr)
        return NUMERIC_ERROR


if __name__ == "__main__":
    sys.exit(main())
