"""Named experiment configurations, truncation control, and data export.

A scenario is a flat INI file (sections [scenario], [physics],
[numerics], [probe], [sweep], [outputs]) naming one of four models and
its numbers. The builtin files under ``data/`` cover every standard
study this package ships; ``kerrdce run --builtin fig2`` runs one of
them end to end.

run() owns the Fock-truncation convergence loop: a run is accepted only
if the top two photon levels stay below the configured tail budget
(numerics.tail_limit, default TAIL_LIMIT) at every sample; otherwise
n_max grows by 8 and the run repeats, up to three escalations. Cascade
scenarios whose photon distribution develops a power-law tail set a
documented looser budget in their INI files; the truncated run then
underestimates mean photon number, p_n, and the Mandel parameter, never
the reverse. Export is a CSV trajectory plus a JSON summary, both
embedding the resolved config so any output file can be reproduced from
its own header.

All output is deterministic: fixed-step integration, fixed eigensolver
phase convention, and fixed float formatting (shortest round-trip
repr). Parallelism (sweeps, resonance probes) never changes output
ordering; results are merged in grid order.
"""

from __future__ import annotations

import configparser
import dataclasses
import json
import os
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import (
    ConfigError,
    NoResonanceError,
    TruncationError,
    TruncationWarning,
    ValidationError,
)
from .hilbert import DickeSpace, FockSpace, StateVector
from .models import (
    DickeKerrParams,
    ModCavityParams,
    dicke_kerr_hamiltonian,
    eff_modcav_hamiltonian,
    h0_dicke_kerr,
    h_eff_modcav,
    lab_modcav_hamiltonian,
)
from .dynamics import IntegratorConfig, TrajectoryRecord, evolve_full
from .observables import trajectory_summary
from .perturbation import PerturbativeInputs, alpha_star
from .spectra import (
    DressedSpectrum,
    ResonanceResult,
    dce_reference,
    diagonalize,
    find_resonance,
    gaps,
    photon_ladder,
    rate_ratio,
)

TAIL_LIMIT = 1e-8
ESCALATION_STEP = 8

MODELS = ("dicke_kerr", "ho_limit", "modcav_lab", "modcav_eff")
_DICKE_KEYS = {"nu", "g", "alpha", "k", "eps", "eta", "n_qubits"}
_MODCAV_KEYS = {"omega0", "omega1", "eps_w", "k", "eps", "eta"}

BUILTIN_NAMES = (
    "fig1a",
    "fig1b",
    "fig2",
    "fig3a",
    "fig3b",
    "fig4",
    "fig5a",
    "fig5b",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully parsed scenario; plain values only, safe to pickle to workers."""

    name: str
    model: str
    physics: dict
    n_max: int = 24
    k_max: int | None = None
    dt: float = 1e-3
    t_end: float = 1e5
    n_samples: int = 2000
    sample_stride: int | None = None
    renorm_tolerance: float = 1e-9
    renormalize: bool = False
    max_escalations: int = 3
    tail_limit: float = TAIL_LIMIT
    probe_t: float = 2e4
    probe_dt: float = 8e-3
    probe_n_max: int = 16
    probe_samples: int = 25
    sweep: dict | None = None
    stem: str | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"scenario.model: unknown model {self.model!r}")
        if self.n_max < 4:
            raise ConfigError("numerics.n_max: must be >= 4")
        if self.max_escalations < 0:
            raise ConfigError("numerics.max_escalations: must be >= 0")
        if not self.tail_limit > 0:
            raise ConfigError("numerics.tail_limit: must be positive")
        if self.probe_t <= 0 or self.probe_dt <= 0:
            raise ConfigError("probe.t and probe.dt must be positive")

    @property
    def out_stem(self) -> str:
        return self.stem or self.name


@dataclass
class RunResult:
    record: TrajectoryRecord
    summary: dict
    csv_path: Path | None
    json_path: Path | None


# ---------------------------------------------------------------------------
# config parsing


def _cast(section: str, key: str, raw: str, kind):
    try:
        if kind is bool:
            low = raw.strip().lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError:
        raise ConfigError(
            f"{section}.{key}: cannot read {raw!r} as {kind.__name__}"
        ) from None


def _parse_physics(model: str, items: dict) -> dict:
    if model not in MODELS:
        raise ConfigError(f"scenario.model: unknown model {model!r}")
    allowed = _DICKE_KEYS if model in ("dicke_kerr", "ho_limit") else _MODCAV_KEYS
    out = {}
    for key, raw in items.items():
        if key not in allowed:
            raise ConfigError(f"physics.{key}: unknown key for model {model}")
        if key in ("k", "n_qubits"):
            out[key] = _cast("physics", key, raw, int)
        elif key in ("eta", "alpha") and raw.strip().lower() in ("auto", "auto_figure"):
            out[key] = raw.strip().lower()
        else:
            out[key] = _cast("physics", key, raw, float)
    required = allowed - {"n_qubits", "omega0", "alpha"}
    missing = sorted(required - set(out))
    if missing:
        raise ConfigError(f"physics: missing keys {missing} for model {model}")
    return out


def _config_from_parser(cp: configparser.ConfigParser, fallback_name: str) -> ScenarioConfig:
    if not cp.has_section("scenario"):
        raise ConfigError("scenario: section missing")
    model = cp.get("scenario", "model", fallback=None)
    if model is None:
        raise ConfigError("scenario.model: required")
    name = cp.get("scenario", "name", fallback=fallback_name)

    physics = _parse_physics(model, dict(cp.items("physics")) if cp.has_section("physics") else {})

    kwargs = {}
    if cp.has_section("numerics"):
        spec = {
            "n_max": int,
            "k_max": int,
            "dt": float,
            "t_end": float,
            "n_samples": int,
            "sample_stride": int,
            "renorm_tolerance": float,
            "renormalize": bool,
            "max_escalations": int,
            "tail_limit": float,
        }
        for key, raw in cp.items("numerics"):
            if key not in spec:
                raise ConfigError(f"numerics.{key}: unknown key")
            kwargs[key] = _cast("numerics", key, raw, spec[key])
    if cp.has_section("probe"):
        spec = {"t": float, "dt": float, "n_max": int, "samples": int}
        for key, raw in cp.items("probe"):
            if key not in spec:
                raise ConfigError(f"probe.{key}: unknown key")
            kwargs["probe_" + key] = _cast("probe", key, raw, spec[key])
    sweep = None
    if cp.has_section("sweep"):
        spec = {
            "kind": str,
            "param": str,
            "start": float,
            "stop": float,
            "count": int,
            "values": str,
            "n_gaps": int,
            "n_rates": int,
        }
        sweep = {}
        for key, raw in cp.items("sweep"):
            if key not in spec:
                raise ConfigError(f"sweep.{key}: unknown key")
            sweep[key] = _cast("sweep", key, raw, spec[key])
    if cp.has_section("outputs"):
        for key, raw in cp.items("outputs"):
            if key == "stem":
                kwargs["stem"] = raw
            elif key == "stride":
                kwargs["sample_stride"] = _cast("outputs", key, raw, int)
            else:
                raise ConfigError(f"outputs.{key}: unknown key")

    return ScenarioConfig(name=name, model=model, physics=physics, sweep=sweep, **kwargs)


def load_config(path: str | Path) -> ScenarioConfig:
    """Parse a scenario INI file; raises ConfigError with the offending field."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(path.read_text(), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    return _config_from_parser(cp, path.stem)


def builtin_config(name: str) -> ScenarioConfig:
    """Load one of the shipped scenario files by name (see BUILTIN_NAMES)."""
    if name not in BUILTIN_NAMES:
        raise ConfigError(
            f"unknown builtin {name!r}; available: {', '.join(BUILTIN_NAMES)}"
        )
    text = resources.files("kerrdce").joinpath(f"data/{name}.ini").read_text()
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string(text, source=name)
    return _config_from_parser(cp, name)


def config_to_dict(cfg: ScenarioConfig, resolved: dict | None = None) -> dict:
    out = dataclasses.asdict(cfg)
    if resolved is not None:
        out["physics"] = dict(resolved)
    return out


# ---------------------------------------------------------------------------
# model assembly


def resolve_physics(cfg: ScenarioConfig):
    """Build the model parameter object, resolving auto eta / auto alpha.

    Returns (params, resolved_dict) where the dict holds plain numbers
    for provenance output.
    """
    ph = dict(cfg.physics)
    if cfg.model in ("dicke_kerr", "ho_limit"):
        ph.setdefault("n_qubits", 1)
        ph.setdefault("alpha", 0.0)
        if ph["alpha"] == "auto":
            ph["alpha"] = alpha_star(
                PerturbativeInputs(
                    nu=ph["nu"], g=ph["g"], n_qubits=ph["n_qubits"], k=ph["k"]
                )
            )
        eta = ph["eta"]
        if eta == "auto":
            probe_params = DickeKerrParams(
                nu=ph["nu"],
                g=ph["g"],
                alpha=ph["alpha"],
                k=ph["k"],
                eps=ph["eps"],
                eta=1.0,
                n_qubits=ph["n_qubits"],
                oscillator_limit=(cfg.model == "ho_limit"),
            )
            spec = static_spectrum_for(probe_params, cfg)
            ph["eta"] = float(gaps(spec)[0])
        elif eta == "auto_figure":
            raise ConfigError("physics.eta: auto_figure applies to modcav models only")
        params = DickeKerrParams(
            nu=ph["nu"],
            g=ph["g"],
            alpha=ph["alpha"],
            k=ph["k"],
            eps=ph["eps"],
            eta=ph["eta"],
            n_qubits=ph["n_qubits"],
            oscillator_limit=(cfg.model == "ho_limit"),
        )
    else:
        ph.setdefault("omega0", 1.0)
        eta = ph["eta"]
        if eta in ("auto", "auto_figure"):
            zeta = ph["omega0"] - 0.5 * ph["omega1"]
            chi = ph["eps_w"] * ph["omega1"] / (8.0 * ph["omega0"])
            if zeta == 0:
                raise ConfigError("physics: omega1 = 2*omega0 leaves no detuning")
            x2 = (chi / zeta) ** 2
            if eta == "auto":
                ph["eta"] = 2.0 * abs(zeta) * (1.0 - 2.0 * x2 - 2.0 * x2 * x2)
            else:
                ph["eta"] = 2.0 * abs(zeta) * (1.0 + 4.0 * x2)
        params = ModCavityParams(
            omega1=ph["omega1"],
            eps_w=ph["eps_w"],
            k=ph["k"],
            eps=ph["eps"],
            eta=ph["eta"],
            omega0=ph["omega0"],
        )
    return params, ph


def _spaces(cfg: ScenarioConfig, params, n_max: int):
    fock = FockSpace(n_max=n_max)
    if isinstance(params, DickeKerrParams):
        k_max = cfg.k_max
        if k_max is None:
            k_max = params.n_qubits
        dicke = DickeSpace(
            n_qubits=params.n_qubits,
            k_max=k_max,
            oscillator_limit=params.oscillator_limit,
        )
        return fock, dicke
    return fock, None


def build_hamiltonian(cfg: ScenarioConfig, params=None, n_max: int | None = None):
    """Time-dependent Hamiltonian for the scenario at the given truncation."""
    if params is None:
        params, _ = resolve_physics(cfg)
    fock, dicke = _spaces(cfg, params, n_max if n_max is not None else cfg.n_max)
    if isinstance(params, DickeKerrParams):
        return dicke_kerr_hamiltonian(params, fock, dicke)
    if cfg.model == "modcav_lab":
        return lab_modcav_hamiltonian(params, fock)
    return eff_modcav_hamiltonian(params, fock)


def static_spectrum_for(params, cfg: ScenarioConfig, n_max: int | None = None) -> DressedSpectrum:
    """Dressed spectrum of the undriven Hamiltonian behind a scenario.

    For the modulated-cavity models this is the effective-frame static
    Hamiltonian (the lab Hamiltonian has no time-independent part worth
    diagonalizing).
    """
    fock, dicke = _spaces(cfg, params, n_max if n_max is not None else cfg.n_max)
    if isinstance(params, DickeKerrParams):
        h0 = h0_dicke_kerr(params, fock, dicke)
    else:
        h0 = h_eff_modcav(params, fock)
    return diagonalize(h0, params.k)


def static_spectrum(cfg: ScenarioConfig, n_max: int | None = None) -> DressedSpectrum:
    params, _ = resolve_physics(cfg)
    return static_spectrum_for(params, cfg, n_max)


# ---------------------------------------------------------------------------
# running


def _integrator_config(cfg: ScenarioConfig) -> IntegratorConfig:
    return IntegratorConfig(
        dt=cfg.dt,
        t_end=cfg.t_end,
        n_samples=cfg.n_samples,
        sample_stride=cfg.sample_stride,
        renorm_tolerance=cfg.renorm_tolerance,
        renormalize=cfg.renormalize,
    )


def run(cfg: ScenarioConfig, out_dir: str | Path | None = None, export: bool = True) -> RunResult:
    """Run a scenario from vacuum with truncation escalation and export.

    The tail invariant (top two photon levels below cfg.tail_limit at
    every sample) gates acceptance; failing runs repeat with n_max + 8
    up to max_escalations times before giving up.
    """
    params, resolved = resolve_physics(cfg)
    icfg = _integrator_config(cfg)
    n_max = cfg.n_max
    escalations = 0
    while True:
        h = build_hamiltonian(cfg, params, n_max)
        psi0 = StateVector.vacuum(h.space)
        record = evolve_full(h, psi0, icfg)
        tail = float((record.p_n[:, -1] + record.p_n[:, -2]).max())
        if tail < cfg.tail_limit:
            break
        if escalations >= cfg.max_escalations:
            raise TruncationError(
                f"truncation not converged: tail probability {tail:.3e} at "
                f"n_max = {n_max} after {escalations} escalations"
            )
        escalations += 1
        warnings.warn(
            f"tail probability {tail:.3e} >= {cfg.tail_limit:g}; "
            f"escalating n_max {n_max} -> {n_max + ESCALATION_STEP}",
            TruncationWarning,
            stacklevel=2,
        )
        n_max += ESCALATION_STEP

    summary = build_summary(cfg, resolved, record, n_max, escalations, tail)
    csv_path = json_path = None
    if export:
        out = resolve_out_dir(out_dir)
        cfg_dict = config_to_dict(cfg, resolved)
        cfg_dict["n_max_final"] = n_max
        csv_path = out / f"{cfg.out_stem}.csv"
        write_trajectory_csv(csv_path, cfg_dict, record)
        json_path = out / f"{cfg.out_stem}_summary.json"
        json_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return RunResult(record=record, summary=summary, csv_path=csv_path, json_path=json_path)


def build_summary(cfg, resolved, record, n_max, escalations, tail) -> dict:
    ts = trajectory_summary(record)
    return {
        "name": cfg.name,
        "model": cfg.model,
        "version": __version__,
        "physics": resolved,
        "n_max_requested": cfg.n_max,
        "n_max_final": n_max,
        "escalations": escalations,
        "tail_max": tail,
        "t_star": ts.t_star,
        "max_mean_n": ts.max_mean_n,
        "q_at_peak": ts.q_at_peak,
        "p_e_at_peak": ts.p_e_at_peak,
        "even_at_peak": ts.even_at_peak,
        "odd_at_peak": ts.odd_at_peak,
        "max_odd_photon": ts.max_odd_photon,
        "max_odd_parity": ts.max_odd_parity,
        "p_n_at_peak": [float(x) for x in ts.p_n_at_peak],
        "max_sample_drift": record.max_sample_drift,
        "total_drift": record.total_drift,
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "runtime_s": record.meta.get("runtime_s"),
    }


def probe_response(cfg: ScenarioConfig, eta: float) -> float:
    """Growth response at drive frequency eta: largest mean photon number
    reached within the probe horizon.

    Probes run at coarse step, reduced truncation, and a relaxed norm
    budget; they rank drive frequencies rather than produce publication
    trajectories. Module-level and picklable so worker pools can map it.
    """
    params, _ = resolve_physics(cfg)
    params = dataclasses.replace(params, eta=float(eta))
    h = build_hamiltonian(cfg, params, cfg.probe_n_max)
    psi0 = StateVector.vacuum(h.space)
    icfg = IntegratorConfig(
        dt=cfg.probe_dt,
        t_end=cfg.probe_t,
        n_samples=cfg.probe_samples,
        renorm_tolerance=1e-5,
    )
    record = evolve_full(h, psi0, icfg)
    return float(record.mean_n.max())


def resonance_scan(
    cfg: ScenarioConfig,
    bracket: tuple[float, float] | None = None,
    jobs: int = 1,
    out_dir: str | Path | None = None,
    export: bool = True,
    **search_kwargs,
) -> ResonanceResult:
    """Search for the optimal drive frequency around the static-gap guess.

    Default bracket is the first second-neighbor gap of the static
    spectrum widened by 1% either side.
    """
    params, resolved = resolve_physics(cfg)
    if bracket is None:
        spec = static_spectrum_for(params, cfg, min(cfg.n_max, cfg.probe_n_max))
        eta0 = abs(float(gaps(spec)[0]))
        bracket = (0.99 * eta0, 1.01 * eta0)
    result = find_resonance(cfg, bracket, jobs=jobs, **search_kwargs)
    if export:
        report = {
            "name": cfg.name,
            "version": __version__,
            "physics": resolved,
            "bracket": list(result.bracket),
            "eta_star": result.eta_star,
            "response": result.response,
            "probes": [[float(a), float(b)] for a, b in result.probes],
        }
        path = resolve_out_dir(out_dir) / f"{cfg.out_stem}_resonance.json"
        path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return result


# ---------------------------------------------------------------------------
# sweeps


def sweep_grid(cfg: ScenarioConfig) -> np.ndarray:
    sw = cfg.sweep
    if not sw:
        raise ConfigError("sweep: section missing")
    if "values" in sw:
        try:
            vals = [float(x) for x in str(sw["values"]).split(",") if x.strip()]
        except ValueError:
            raise ConfigError("sweep.values: expected comma-separated floats") from None
        if not vals:
            raise ConfigError("sweep.values: empty grid")
        return np.asarray(vals)
    for key in ("start", "stop", "count"):
        if key not in sw:
            raise ConfigError(f"sweep.{key}: required without explicit values")
    if sw["count"] < 1:
        raise ConfigError("sweep.count: must be >= 1")
    return np.linspace(sw["start"], sw["stop"], int(sw["count"]))


def sweep_point(cfg: ScenarioConfig, value: float) -> dict:
    """One grid point of a sweep; never raises, failures land in 'error'."""
    sw = cfg.sweep or {}
    kind = sw.get("kind", "spectrum")
    param = sw.get("param")
    if param is None:
        return {"value": value, "error": "sweep.param missing"}
    physics = dict(cfg.physics)
    physics[param] = float(value)
    point_cfg = dataclasses.replace(cfg, physics=physics, sweep=None)
    row: dict = {"value": float(value), "error": ""}
    try:
        if kind == "spectrum":
            spec = static_spectrum(point_cfg)
            row["flagged"] = bool(spec.ambiguous.any())
            eta_n = gaps(spec)
            n_gaps = int(sw.get("n_gaps", 7))
            n_rates = int(sw.get("n_rates", 4))
            for i in range(n_gaps):
                row[f"eta_{i}"] = float(eta_n[i]) if i < len(eta_n) else None
            for i in range(1, n_rates + 1):
                try:
                    row[f"r_{i}"] = rate_ratio(spec, i)
                except Exception as exc:  # per-point failure, recorded in the row
                    row[f"r_{i}"] = None
                    row["error"] = str(exc).replace(",", ";")
                row[f"r_{i}_ref"] = dce_reference(i)
        elif kind == "dynamics":
            res = run(point_cfg, export=False)
            row["flagged"] = bool(res.summary["escalations"])
            row["t_star"] = res.summary["t_star"]
            row["max_mean_n"] = res.summary["max_mean_n"]
            row["q_at_peak"] = res.summary["q_at_peak"]
            row["total_drift"] = res.summary["total_drift"]
        else:
            row["error"] = f"unknown sweep kind {kind!r}"
    except Exception as exc:  # sweep continues past failed points
        row["error"] = str(exc).replace(",", ";")
    return row


def _sweep_columns(cfg: ScenarioConfig) -> list[str]:
    sw = cfg.sweep or {}
    kind = sw.get("kind", "spectrum")
    param = sw.get("param", "value")
    if kind == "dynamics":
        return [param, "t_star", "max_mean_n", "q_at_peak", "total_drift", "flagged", "error"]
    n_gaps = int(sw.get("n_gaps", 7))
    n_rates = int(sw.get("n_rates", 4))
    rate_cols = []
    for i in range(1, n_rates + 1):
        rate_cols += [f"r_{i}", f"r_{i}_ref"]
    return (
        [param]
        + [f"eta_{i}" for i in range(n_gaps)]
        + rate_cols
        + ["flagged", "error"]
    )


def sweep(
    cfg: ScenarioConfig,
    jobs: int = 1,
    out_dir: str | Path | None = None,
    export: bool = True,
):
    """Evaluate the sweep grid, in order, optionally on a worker pool."""
    grid = sweep_grid(cfg)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(partial(sweep_point, cfg), grid.tolist()))
    else:
        rows = [sweep_point(cfg, v) for v in grid.tolist()]

    path = None
    if export:
        out = resolve_out_dir(out_dir)
        path = out / f"{cfg.out_stem}_sweep.csv"
        cols = _sweep_columns(cfg)
        lines = [
            "# config: " + json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":")),
            f"# version: kerrdce {__version__}",
            ",".join(cols),
        ]
        param = cols[0]
        for row in rows:
            cells = []
            for col in cols:
                key = "value" if col == param else col
                cells.append(_fmt_cell(row.get(key)))
            lines.append(",".join(cells))
        path.write_text("\n".join(lines) + "\n")
    return rows, path


# ---------------------------------------------------------------------------
# export helpers


def resolve_out_dir(out_dir: str | Path | None) -> Path:
    """Output directory: explicit argument, else $KERRDCE_OUT, else cwd."""
    if out_dir is None:
        out_dir = os.environ.get("KERRDCE_OUT", ".")
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(x) -> str:
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


def _fmt_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    return _fmt(x)


def write_trajectory_csv(path: Path, cfg_dict: dict, record: TrajectoryRecord):
    """Trajectory CSV: provenance comments, header, one row per sample."""
    n_cols = record.p_n.shape[1]
    header = ["t", "mean_n", "mandel_q", "p_e", "p_nonvacuum", "norm"] + [
        f"p_{n}" for n in range(n_cols)
    ]
    lines = [
        "# config: " + json.dumps(cfg_dict, sort_keys=True, separators=(",", ":")),
        f"# version: kerrdce {__version__}",
        ",".join(header),
    ]
    for j in range(len(record.t)):
        cells = [
            _fmt(record.t[j]),
            _fmt(record.mean_n[j]),
            _fmt(record.mandel_q[j]),
            _fmt(record.p_e[j]),
            _fmt(record.p_nonvacuum[j]),
            _fmt(record.norm[j]),
        ]
        cells.extend(_fmt(record.p_n[j, n]) for n in range(n_cols))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_spectrum_csv(path: Path, cfg: ScenarioConfig, spec: DressedSpectrum) -> Path:
    """Ladder CSV: one row per photon index with energy, drive diagonal,
    second-neighbor gap, and rate ratio."""
    ladder = photon_ladder(spec)
    eta_n = gaps(spec)
    lines = [
        "# config: " + json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":")),
        f"# version: kerrdce {__version__}",
        "n,lambda_n,xi_n,eta_n,r_n",
    ]
    for pos, idx in enumerate(ladder):
        cells = [str(pos), _fmt(spec.lambdas[idx]), _fmt(spec.xi[idx])]
        cells.append(_fmt(eta_n[pos]) if pos < len(eta_n) else "")
        if pos + 2 < len(ladder):
            try:
                cells.append(_fmt(rate_ratio(spec, pos)))
            except Exception:  # degenerate reference element, leave blank
                cells.append("")
        else:
            cells.append("")
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    return path
