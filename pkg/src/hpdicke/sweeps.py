"""Deterministic parameter sweeps serialized to CSV or JSON.

A sweep is a validated SweepConfig walked point by point: single-chain
sweeps scan the coupling, double-model sweeps scan a radius at fixed
polar angle in the (lambda_C, lambda_I) plane.  Rows always appear in
grid order; identical config and seed give byte-identical files.

Divergences are first-class results: a field whose value diverges at a
critical point is written as the literal string "inf" with the reason
column set, never as an error.  Fields whose finite limit exists but is
not evaluated exactly on the line are written as "nan" with the same
reason.  Per-row solver failures are recorded in-row and counted; only
BudgetExceeded aborts a sweep.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields as dc_fields

import numpy as np

from . import __version__
from .dicke import (DickeParams, classify_phase, entropy_thermo, hp_thermo,
                    solve_thermo)
from .double import (DoubleDickeParams, classify_double_phase, double_gaps,
                     entropy_double, hp_double)
from .ed import (DEFAULT_BUDGET_NNZ, DEFAULT_SEED, EDBasis,
                 build_hamiltonian, converge_cutoff, ground_state,
                 photon_entropy_ed, photon_moments_ed)
from .double_ed import converge_cutoff_double, double_ed
from .errors import (BudgetExceeded, ConfigError, CriticalPointDivergence,
                     CutoffWarning, HpDickeError)

__all__ = ["SCHEMA", "SweepConfig", "SweepRow", "run_sweep", "radial_sweep",
           "sweep_rows", "render_csv", "render_json", "write_atomic"]

SCHEMA = "hpdicke-sweep-v1"

_MODELS = ("dicke", "double-dicke")
_MODES = ("thermo", "ed")
_FORMATS = ("csv", "json")

# accepted spellings for config keys, mapped onto dataclass fields
_ALIASES = {
    "lambda": "coupling_min",
    "lambda_min": "coupling_min",
    "lambda_max": "coupling_max",
    "budget": "budget_nnz",
    "n": "n_spins",
}


@dataclass(frozen=True)
class SweepConfig:
    """Validated sweep description; build from raw dicts via from_dict."""

    model: str = "dicke"
    mode: str = "thermo"
    omega: float = 1.0
    omega0: float = 1.0
    omega0_c: float = 1.0
    omega0_i: float = 1.0
    coupling_min: float = 0.0
    coupling_max: float = 1.0
    theta: float = 0.25 * math.pi
    r_min: float = 0.0
    r_max: float = 1.0
    steps: int = 11
    n_spins: int = 8
    n_max: int | None = None
    tol: float = 1e-8
    budget_nnz: int = DEFAULT_BUDGET_NNZ
    seed: int = DEFAULT_SEED
    renyi: tuple[float, ...] = ()
    format: str = "csv"
    out: str | None = None
    workers: int = 1

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepConfig":
        known = {f.name: f for f in dc_fields(cls)}
        kwargs = {}
        for key, value in raw.items():
            name = _ALIASES.get(key, key)
            if name not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[name] = value
        try:
            cfg = cls(**_coerced(kwargs, known))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self):
        if self.model not in _MODELS:
            raise ConfigError(f"model must be one of {_MODELS}")
        if self.mode not in _MODES:
            raise ConfigError(f"mode must be one of {_MODES}")
        if self.format not in _FORMATS:
            raise ConfigError(f"format must be one of {_FORMATS}")
        if self.steps < 1:
            raise ConfigError("grid must be nonempty (steps >= 1)")
        for name in ("omega", "omega0", "omega0_c", "omega0_i"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.model == "dicke":
            if self.coupling_min < 0 or self.coupling_max < self.coupling_min:
                raise ConfigError("coupling range must be 0 <= min <= max")
        else:
            if not 0.0 <= self.theta <= 0.5 * math.pi:
                raise ConfigError("theta must lie in [0, pi/2]")
            if self.r_min < 0 or self.r_max < self.r_min:
                raise ConfigError("radial range must be 0 <= min <= max")
        if self.mode == "ed":
            if self.n_spins < 1:
                raise ConfigError("n_spins must be a positive integer")
            if self.n_max is not None and self.n_max < 1:
                raise ConfigError("n_max must be positive when given")
            if self.renyi:
                raise ConfigError("renyi entropies are thermo-only")
        if self.budget_nnz <= 0:
            raise ConfigError("budget must be positive")
        if self.tol <= 0:
            raise ConfigError("tolerance must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        for a in self.renyi:
            if not a > 0 or abs(a - 1.0) < 1e-9:
                raise ConfigError(f"invalid Renyi order {a!r}")

    def grid(self) -> np.ndarray:
        if self.model == "dicke":
            return np.linspace(self.coupling_min, self.coupling_max,
                               self.steps)
        return np.linspace(self.r_min, self.r_max, self.steps)

    def config_sha256(self) -> str:
        """Hash of the computation-defining fields (output path and format
        are presentation, not computation)."""
        payload = {f.name: getattr(self, f.name) for f in dc_fields(self)
                   if f.name not in ("out", "format", "workers")}
        payload["renyi"] = list(payload["renyi"])
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _coerced(kwargs: dict, known: dict) -> dict:
    out = {}
    for name, value in kwargs.items():
        hint = known[name].type
        if name == "renyi":
            if isinstance(value, str):
                value = [v for v in value.split(";") if v]
            out[name] = tuple(float(v) for v in value)
        elif name == "n_max":
            out[name] = None if value in (None, "", "auto") else int(value)
        elif hint in ("int", int):
            out[name] = int(value)
        elif hint in ("float", float):
            out[name] = float(value)
        else:
            out[name] = value
    return out


@dataclass(frozen=True)
class SweepRow:
    """One grid point: column names and values, plus a warning flag."""

    index: int
    values: dict = field(default_factory=dict)
    failed: bool = False


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def columns_for(cfg: SweepConfig) -> list[str]:
    renyi = [f"renyi_{format(a, 'g')}" for a in cfg.renyi]
    if cfg.model == "dicke":
        if cfg.mode == "thermo":
            return (["index", "coupling", "dist_cr", "phase", "critical",
                     "dx", "dp", "hp", "s_vn", "s_vn_bare"] + renyi
                    + ["gap_minus", "gap_plus", "reason"])
        return ["index", "coupling", "dist_cr", "n_spins", "n_max_used",
                "ground_energy", "gap01", "parity", "converged",
                "dx", "dp", "hp", "s_vn", "reason"]
    if cfg.mode == "thermo":
        return (["index", "r", "theta", "lambda_c", "lambda_i",
                 "dist_c", "dist_i", "phase", "critical_c", "critical_i",
                 "dx", "dp", "hp", "s_vn", "s_vn_bare"] + renyi
                + ["gap_1", "gap_2", "gap_3", "reason"])
    return ["index", "r", "theta", "lambda_c", "lambda_i", "n_spins",
            "n_max_used", "ground_energy", "gap01", "parity", "converged",
            "dx", "dp", "hp", "s_vn", "reason"]


def _renyi_items(cfg: SweepConfig, report) -> list[tuple[str, float]]:
    return [(f"renyi_{format(a, 'g')}", report.s_renyi[a])
            for a in cfg.renyi]


def _thermo_row_dicke(cfg: SweepConfig, i: int, lam: float) -> SweepRow:
    p = DickeParams(omega=cfg.omega, omega0=cfg.omega0, coupling=float(lam))
    info = classify_phase(p)
    sol = solve_thermo(p)
    vals = {"index": i, "coupling": float(lam),
            "dist_cr": float(lam) - info.lambda_cr,
            "phase": info.phase.value, "critical": info.critical}
    if info.critical:
        # dp stays finite on the boundary (only the soft polariton is
        # weighted by 1/gap, and that term belongs to dx)
        c2 = math.cos(sol.gamma) ** 2
        dp2 = 0.5 * (c2 * sol.gap_minus
                     + (1.0 - c2) * sol.gap_plus) / cfg.omega
        vals.update(dx=math.inf, dp=math.sqrt(dp2), hp=math.inf,
                    s_vn=math.inf, s_vn_bare=math.inf)
        vals.update({k: math.inf for k, _ in _renyi_items_names(cfg)})
        reason = "critical-point"
    else:
        rep = hp_thermo(p)
        ent = entropy_thermo(p, renyi_alphas=cfg.renyi)
        vals.update(dx=rep.dx, dp=rep.dp, hp=rep.hp, s_vn=ent.s_vn,
                    s_vn_bare=ent.s_vn - ent.degeneracy_offset)
        vals.update(dict(_renyi_items(cfg, ent)))
        reason = ""
    vals.update(gap_minus=sol.gap_minus, gap_plus=sol.gap_plus,
                reason=reason)
    return SweepRow(index=i, values=vals)


def _renyi_items_names(cfg: SweepConfig) -> list[tuple[str, None]]:
    return [(f"renyi_{format(a, 'g')}", None) for a in cfg.renyi]


def _thermo_row_double(cfg: SweepConfig, i: int, r: float) -> SweepRow:
    lam_c = float(r) * math.cos(cfg.theta)
    lam_i = float(r) * math.sin(cfg.theta)
    p = DoubleDickeParams(omega_cav=cfg.omega, omega0_c=cfg.omega0_c,
                          omega0_i=cfg.omega0_i,
                          lambda_c=lam_c, lambda_i=lam_i)
    info = classify_double_phase(p)
    gaps = double_gaps(p)
    vals = {"index": i, "r": float(r), "theta": cfg.theta,
            "lambda_c": lam_c, "lambda_i": lam_i,
            "dist_c": lam_c - info.lambda_c_cr,
            "dist_i": lam_i - info.lambda_i_cr,
            "phase": info.phase.value,
            "critical_c": info.critical_c, "critical_i": info.critical_i}
    try:
        rep = hp_double(p)
        ent = entropy_double(p, renyi_alphas=cfg.renyi)
        vals.update(dx=rep.dx, dp=rep.dp, hp=rep.hp, s_vn=ent.s_vn,
                    s_vn_bare=ent.s_vn - ent.degeneracy_offset)
        vals.update(dict(_renyi_items(cfg, ent)))
        reason = ""
    except CriticalPointDivergence:
        # hp and S diverge on a line; the bounded quadrature's limit is
        # not evaluated exactly on it
        vals.update(dx=math.nan, dp=math.nan, hp=math.inf, s_vn=math.inf,
                    s_vn_bare=math.inf)
        vals.update({k: math.inf for k, _ in _renyi_items_names(cfg)})
        reason = "critical-point"
    vals.update(gap_1=gaps[0], gap_2=gaps[1], gap_3=gaps[2], reason=reason)
    return SweepRow(index=i, values=vals)


def _nan_ed_values(note: str) -> dict:
    return dict(n_max_used=0, ground_energy=math.nan, gap01=math.nan,
                parity=math.nan, converged=False, dx=math.nan, dp=math.nan,
                hp=math.nan, s_vn=math.nan, reason=note)


def _ed_row_dicke(cfg: SweepConfig, i: int, lam: float) -> SweepRow:
    p = DickeParams(omega=cfg.omega, omega0=cfg.omega0, coupling=float(lam))
    base = {"index": i, "coupling": float(lam),
            "dist_cr": float(lam) - math.sqrt(cfg.omega * cfg.omega0) / 2.0,
            "n_spins": cfg.n_spins}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CutoffWarning)
            n_max = cfg.n_max if cfg.n_max is not None else converge_cutoff(
                p, cfg.n_spins, tol=cfg.tol, budget_nnz=cfg.budget_nnz,
                seed=cfg.seed)
            basis = EDBasis(n_spins=cfg.n_spins, n_max=n_max)
            res = ground_state(build_hamiltonian(p, basis), basis,
                               seed=cfg.seed)
            rep = photon_moments_ed(res, basis)
            s = photon_entropy_ed(res, basis)
    except BudgetExceeded:
        raise
    except HpDickeError as exc:
        base.update(_nan_ed_values(f"solver: {type(exc).__name__}"))
        return SweepRow(index=i, values=base, failed=True)
    base.update(n_max_used=res.n_max_used, ground_energy=res.ground_energy,
                gap01=res.gap01, parity=res.parity,
                converged=res.cutoff_converged, dx=rep.dx, dp=rep.dp,
                hp=rep.hp, s_vn=s, reason="")
    return SweepRow(index=i, values=base)


def _ed_row_double(cfg: SweepConfig, i: int, r: float) -> SweepRow:
    lam_c = float(r) * math.cos(cfg.theta)
    lam_i = float(r) * math.sin(cfg.theta)
    p = DoubleDickeParams(omega_cav=cfg.omega, omega0_c=cfg.omega0_c,
                          omega0_i=cfg.omega0_i, lambda_c=lam_c,
                          lambda_i=lam_i, n_c=cfg.n_spins, n_i=cfg.n_spins)
    base = {"index": i, "r": float(r), "theta": cfg.theta,
            "lambda_c": lam_c, "lambda_i": lam_i, "n_spins": cfg.n_spins}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CutoffWarning)
            n_max = cfg.n_max
            if n_max is None:
                n_max = converge_cutoff_double(
                    p, tol=cfg.tol, budget_nnz=cfg.budget_nnz, seed=cfg.seed)
            res, s, rep = double_ed(p, n_max=n_max, seed=cfg.seed,
                                    budget_nnz=cfg.budget_nnz)
    except BudgetExceeded:
        raise
    except HpDickeError as exc:
        base.update(_nan_ed_values(f"solver: {type(exc).__name__}"))
        return SweepRow(index=i, values=base, failed=True)
    base.update(n_max_used=res.n_max_used, ground_energy=res.ground_energy,
                gap01=res.gap01, parity=res.parity,
                converged=res.cutoff_converged, dx=rep.dx, dp=rep.dp,
                hp=rep.hp, s_vn=s, reason="")
    return SweepRow(index=i, values=base)


def _row_task(args) -> SweepRow:
    cfg, i, x = args
    if cfg.model == "dicke":
        fn = _thermo_row_dicke if cfg.mode == "thermo" else _ed_row_dicke
    else:
        fn = _thermo_row_double if cfg.mode == "thermo" else _ed_row_double
    return fn(cfg, i, x)


def sweep_rows(cfg: SweepConfig) -> list[SweepRow]:
    """All rows of the sweep, in grid order.

    ED rows may be computed in parallel; they are scheduled largest grid
    value first (a proxy for matrix size) and reassembled in order, so the
    output is independent of the worker count.
    """
    grid = cfg.grid()
    jobs = [(cfg, i, float(x)) for i, x in enumerate(grid)]
    if cfg.mode == "ed" and cfg.workers > 1 and len(jobs) > 1:
        order = sorted(jobs, key=lambda j: -abs(j[2]))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            done = list(pool.map(_row_task, order))
        rows = sorted(done, key=lambda r: r.index)
    else:
        rows = [_row_task(j) for j in jobs]
    return rows


def _header_lines(cfg: SweepConfig, cols: list[str]) -> list[str]:
    return [
        f"# schema: {SCHEMA}",
        f"# version: {__version__}",
        f"# config-sha256: {cfg.config_sha256()}",
        f"# seed: {cfg.seed}",
        "# units: frequencies and couplings in units of omega_cav",
        f"# columns: {','.join(cols)}",
    ]


def render_csv(cfg: SweepConfig, rows: list[SweepRow]) -> str:
    cols = columns_for(cfg)
    lines = _header_lines(cfg, cols)
    for row in rows:
        lines.append(",".join(_fmt(row.values.get(c, "nan")) for c in cols))
    return "\n".join(lines) + "\n"


def render_json(cfg: SweepConfig, rows: list[SweepRow]) -> str:
    cols = columns_for(cfg)
    payload = {
        "schema": SCHEMA,
        "version": __version__,
        "config_sha256": cfg.config_sha256(),
        "seed": cfg.seed,
        "units": "frequencies and couplings in units of omega_cav",
        "columns": cols,
        "rows": [[_json_value(r.values.get(c, math.nan)) for c in cols]
                 for r in rows],
    }
    return json.dumps(payload, indent=1, sort_keys=False) + "\n"


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v) or math.isnan(v):
            return _fmt(v)
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def write_atomic(path: str, text: str):
    """Write-to-temp then rename, so a killed run never leaves a torn
    file and re-runs overwrite cleanly."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sweep-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_sweep(cfg: SweepConfig) -> tuple[str, int]:
    """Execute the sweep and write its output file.

    Returns (path, warning count); warning count is the number of rows
    with recorded solver failures.  Raises ConfigError when no output
    path is configured; lets BudgetExceeded escape to the caller.
    """
    if not cfg.out:
        raise ConfigError("no output path configured")
    rows = sweep_rows(cfg)
    text = (render_csv if cfg.format == "csv" else render_json)(cfg, rows)
    write_atomic(cfg.out, text)
    return cfg.out, sum(1 for r in rows if r.failed)


def radial_sweep(theta: float, r_min: float, r_max: float, steps: int,
                 mode: str = "thermo", **overrides) -> list[SweepRow]:
    """Double-model sweep along a polar ray; convenience wrapper used by
    the figure generators and tests."""
    cfg = SweepConfig.from_dict(dict(model="double-dicke", mode=mode,
                                     theta=theta, r_min=r_min, r_max=r_max,
                                     steps=steps, **overrides))
    return sweep_rows(cfg)
