"""Experiment runner: named experiments in, deterministic CSV reports out.

Report layout: `#`-prefixed header lines (tool version, config echo, seed,
wall time), one CSV header row matching the experiment's schema exactly,
the data rows, then `#`-prefixed summary lines. Reruns with the same config
and seed reproduce the non-`#` body bitwise; the header may differ (wall
time). Files are written to a temporary name and moved into place, so a
failed run leaves nothing behind.
"""
import math
import os
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__, chain, dynamics, fermion, fits, hierarchy, locality, modelio, suites
from .errors import ConfigError

EXPERIMENTS = ("quench", "w-hierarchy", "lightcone", "kcheck", "quasilocal",
               "fermion-scaling", "ring-check", "property-suite")

SCHEMAS = {
    "quench": "t,m,S,sMax,effRank",
    "w-hierarchy": "l,wDeviation,lrBound",
    "lightcone": "t,d,commNorm",
    "kcheck": "t,spectrumMaxDiff,groundFidelity,firstOrderResidual",
    "quasilocal": "t,k,truncNorm",
    "fermion-scaling": "m,S_exact,D_det,logAbsDet",
    "ring-check": "n,m,maxDeviation",
    "property-suite": "suite,trials,violations,maxError",
}

SPIN_EXPERIMENTS = {"quench", "w-hierarchy", "lightcone", "kcheck", "quasilocal"}
SYMBOL_EXPERIMENTS = {"fermion-scaling", "ring-check"}

_DENSE_ONLY = {"w-hierarchy", "lightcone", "kcheck", "quasilocal"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    preset: str = None
    config_path: str = None
    n: int = None
    t_grid: tuple = None
    m_list: tuple = None
    seed: int = 0
    out: str = None


@dataclass(frozen=True)
class ReportEnvelope:
    header_lines: tuple
    schema: str
    rows: tuple
    summary_lines: tuple
    path: str = None

    def body_text(self):
        lines = [self.schema]
        lines.extend(",".join(_fmt_cell(c) for c in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def full_text(self):
        parts = [f"# {line}" for line in self.header_lines]
        parts.append(self.body_text().rstrip("\n"))
        parts.extend(f"# {line}" for line in self.summary_lines)
        return "\n".join(parts) + "\n"


def _fmt_cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _config_echo(config):
    parts = [f"experiment={config.experiment}"]
    if config.preset:
        parts.append(f"preset={config.preset}")
    if config.config_path:
        parts.append(f"config={config.config_path}")
    if config.n is not None:
        parts.append(f"n={config.n}")
    if config.t_grid is not None:
        parts.append("t-grid=" + ",".join(f"{t:.17g}" for t in config.t_grid))
    if config.m_list is not None:
        parts.append("m-list=" + ",".join(str(m) for m in config.m_list))
    parts.append(f"seed={config.seed}")
    return " ".join(parts)


def _resolve_spin_model(config, max_n):
    default_n = 8
    if config.config_path:
        model = modelio.parse_model(config.config_path)
        if not isinstance(model, chain.LocalHamiltonian):
            raise ConfigError(f"{config.experiment} needs a spin model config")
        if config.n is not None and config.n != model.n:
            raise ConfigError(f"--n {config.n} conflicts with config n={model.n}")
    else:
        preset = config.preset or "xy_cross"
        model = chain.build_hamiltonian(preset, n=config.n or default_n)
    if model.n > max_n:
        raise ConfigError(f"{config.experiment} supports n <= {max_n}, got {model.n}")
    return model


def _resolve_symbol(config):
    if config.config_path:
        symbol = modelio.parse_model(config.config_path)
        if not isinstance(symbol, fermion.PiecewiseSymbol):
            raise ConfigError(f"{config.experiment} needs a symbol config")
        return symbol
    preset = config.preset or "paper"
    try:
        return fermion.SYMBOL_PRESETS[preset]()
    except KeyError:
        raise ConfigError(
            f"unknown symbol preset {preset!r}; expected one of "
            f"{sorted(fermion.SYMBOL_PRESETS)}") from None


def _default_t(config, default):
    if config.t_grid is None:
        return tuple(default)
    grid = tuple(float(t) for t in config.t_grid)
    if not grid:
        raise ConfigError("t grid must be nonempty")
    if any(not math.isfinite(t) for t in grid):
        raise ConfigError("t grid contains non-finite values")
    return grid


def _check_m_list(m_list, n):
    for m in m_list:
        if not (1 <= m <= n - 1):
            raise ConfigError(f"cut m={m} out of range [1, {n - 1}]")
    return tuple(int(m) for m in m_list)


def _run_quench(config):
    model = _resolve_spin_model(config, max_n=chain.N_MAX)
    t_grid = _default_t(config, np.linspace(0.0, 2.0, 9))
    m_list = _check_m_list(config.m_list or (model.n // 2,), model.n)
    curve = dynamics.entropy_profile(model, t_grid, m_list)
    summary = [f"rows={len(curve.rows)}"]
    if len(m_list) == 1 and len(t_grid) >= 5:
        t_cap = model.n / 4.0 / model.hNorm
        if max(abs(t) for t in t_grid) <= t_cap + 1e-12:
            tt = [r[0] for r in curve.rows]
            ss = [r[2] for r in curve.rows]
            c0, c1, resid = fits.entropy_envelope_fit(tt, ss)
            summary.append(f"envelope c0={c0:.17g} c1={c1:.17g} maxResidual={resid:.17g}")
        else:
            summary.append(f"envelope skipped: t grid exceeds recurrence guard {t_cap:.17g}")
    return SCHEMAS["quench"], curve.rows, summary


def _run_w_hierarchy(config):
    model = _resolve_spin_model(config, max_n=chain.DENSE_SITE_LIMIT)
    t_grid = _default_t(config, (0.25,))
    if len(t_grid) != 1:
        raise ConfigError("w-hierarchy reports one fixed t; pass a single-point t grid")
    m_list = _check_m_list(config.m_list or (model.n // 2,), model.n)
    if len(m_list) != 1:
        raise ConfigError("w-hierarchy takes a single cut m")
    (m,) = m_list
    report = hierarchy.w_hierarchy(model, m, t_grid[0])
    rows = tuple((l, dev, bound) for l, dev, bound in report.rows)
    holds = all(dev <= min(2.0, bound) for _, dev, bound in report.rows)
    summary = [f"t={t_grid[0]:.17g} m={m}",
               f"reassemblyError={report.reassembly_error:.17g}",
               f"mNorm={report.m_norm:.17g}",
               f"boundHolds={'true' if holds else 'false'}"]
    return SCHEMAS["w-hierarchy"], rows, summary


def _run_lightcone(config):
    model = _resolve_spin_model(config, max_n=chain.DENSE_SITE_LIMIT)
    t_grid = _default_t(config, (0.5,))
    rows = locality.lightcone_probe(model, 0, t_grid)
    return SCHEMAS["lightcone"], rows, [f"rows={len(rows)} siteA=0"]


def _run_kcheck(config):
    model = _resolve_spin_model(config, max_n=chain.DENSE_SITE_LIMIT)
    t_grid = _default_t(config, (0.05,))
    rows = []
    degenerate = 0
    for t in sorted(t_grid):
        rep = dynamics.k_hamiltonian_check(model, t)
        degenerate += int(rep.degenerate)
        rows.append((rep.t, rep.spectrum_max_diff, rep.ground_fidelity,
                     rep.first_order_residual))
    return SCHEMAS["kcheck"], tuple(rows), [f"degenerateGroundSpaces={degenerate}"]


def _run_quasilocal(config):
    model = _resolve_spin_model(config, max_n=chain.DENSE_SITE_LIMIT)
    t_grid = _default_t(config, (0.5,))
    k_list = tuple(int(k) for k in (config.m_list or (1, 2, 3, 4)))
    j = model.n // 2
    report = locality.quasilocality_decay(model, j, t_grid, k_list)
    summary = [f"j={j}",
               f"c={report.c:.17g} kappa={report.kappa:.17g} v={report.v:.17g} "
               f"r2={report.r_squared:.17g}",
               f"kappaIdentifiable={'true' if report.kappa_identifiable else 'false'}"]
    return SCHEMAS["quasilocal"], report.rows, summary


def _run_fermion_scaling(config):
    symbol = _resolve_symbol(config)
    m_list = tuple(int(m) for m in (config.m_list or (8, 16, 32, 64, 128, 256, 512)))
    report = fermion.fh_scaling_fit(symbol, m_list)
    summary = [f"a={report.a:.17g} r2={report.a_r_squared:.17g}",
               f"d={report.d:.17g} r2={report.d_r_squared:.17g}",
               f"boundHeld={'true' if report.bound_held else 'false'}"]
    return SCHEMAS["fermion-scaling"], report.rows, summary


def _run_ring_check(config):
    symbol = _resolve_symbol(config)
    m_list = config.m_list or (16,)
    if len(m_list) != 1:
        raise ConfigError("ring-check takes a single m")
    m = int(m_list[0])
    n_values = (int(config.n),) if config.n is not None else (256, 1024, 4096)
    for n in n_values:
        if n < 4 * m:
            raise ConfigError(f"ring-check needs n >= 4m (n={n}, m={m})")
    rows = []
    gapless_flags = []
    for n in n_values:
        res = fermion.finite_ring_crosscheck(symbol, n, m)
        rows.append((res.n, res.m, res.max_deviation))
        gapless_flags.append(res.gapless)
    deviations = [r[2] for r in rows]
    decreasing = all(b < a for a, b in zip(deviations, deviations[1:]))
    summary = [f"gapless={','.join('true' if g else 'false' for g in gapless_flags)}",
               f"strictlyDecreasing={'true' if decreasing else 'false'}"]
    return SCHEMAS["ring-check"], tuple(rows), summary


def _run_property_suite(config):
    results = suites.run_all(config.seed)
    rows = tuple((r.name, r.trials, r.violations, r.max_error) for r in results)
    total = sum(r.violations for r in results)
    return SCHEMAS["property-suite"], rows, [f"totalViolations={total}"]


_RUNNERS = {
    "quench": _run_quench,
    "w-hierarchy": _run_w_hierarchy,
    "lightcone": _run_lightcone,
    "kcheck": _run_kcheck,
    "quasilocal": _run_quasilocal,
    "fermion-scaling": _run_fermion_scaling,
    "ring-check": _run_ring_check,
    "property-suite": _run_property_suite,
}


def run(config):
    """Execute one experiment and write its report; returns the envelope."""
    if config.experiment not in _RUNNERS:
        raise ConfigError(f"unknown experiment {config.experiment!r}; "
                          f"expected one of {EXPERIMENTS}")
    started = time.perf_counter()
    schema, rows, summary = _RUNNERS[config.experiment](config)
    elapsed = time.perf_counter() - started
    header = (f"entscale {__version__}",
              _config_echo(config),
              f"seed: {config.seed}",
              f"wall-time-s: {elapsed:.3f}")
    out_path = config.out or f"{config.experiment}.csv"
    envelope = ReportEnvelope(header_lines=header, schema=schema, rows=tuple(rows),
                              summary_lines=tuple(summary), path=os.path.abspath(out_path))
    _write_atomic(envelope.full_text(), envelope.path)
    return envelope


def _write_atomic(text, path):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(prefix=".entscale-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
