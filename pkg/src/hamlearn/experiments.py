"""Experiment sweeps: ground-state constraint counts, Gibbs temperature
scans, multi-state stacking, quench and driven dynamics, XY gap scans.

Every sweep is a pure function of its config: per-trial integer seeds are
derived from (global seed, trial index) through SeedSequence, records carry
them for audit, and reruns are bit-identical.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .lattice import Lattice
from .models import (
    HamiltonianSpec,
    ModelFamily,
    attach_generic_drive,
    interior,
    sample_generic_chain,
    sample_xy_chain,
    term_basis_for_model,
)
from .pauli import OperatorBasis, enumerate_basis
from .recovery import (
    build_constraint_matrix,
    build_extended_from_averages,
    error_estimate,
    inject_noise,
    reconstruction_error,
    recover,
    stack,
)
from .version import __version__
from .states import (
    QuantumState,
    averaged_states,
    gibbs_state,
    ground_state,
    steady_state_defect,
)

SWEEP_KINDS = (
    "groundstate-sweep",
    "gibbs-sweep",
    "multistate",
    "quench",
    "driven",
    "xy-gap-scan",
)

# Sweep-coordinate column name per kind.
COORD_NAMES = {
    "groundstate-sweep": "n_rows",
    "gibbs-sweep": "beta",
    "multistate": "n_states",
    "quench": "t",
    "driven": "t",
    "xy-gap-scan": "region_size",
}

EXTRA_COLUMNS = {
    "groundstate-sweep": ("k_group", "lambda0_clean", "lambda1_clean", "energy"),
    "gibbs-sweep": (),
    "multistate": (),
    "quench": ("defect",),
    "driven": ("delta_h0", "delta_v"),
    "xy-gap-scan": ("energy",),
}

_DEFAULTS_BY_KIND = {
    # (n_sites, region_size, trials, epsilon)
    "groundstate-sweep": (12, 8, 20, 1e-12),
    "gibbs-sweep": (10, 8, 20, 1e-12),
    "multistate": (10, 8, 20, 1e-12),
    "quench": (8, 6, 20, 0.0),
    "driven": (8, 6, 10, 0.0),
    "xy-gap-scan": (14, 11, 20, 1e-12),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; physics defaults mirror the headline runs."""

    kind: str
    model: ModelFamily = ModelFamily.GENERIC_2LOCAL_CHAIN
    n_sites: int = 12
    region_size: int = 8
    locality_k: int = 4
    order_seed: Optional[int] = 0
    seed: int = 0
    trials: int = 20
    epsilon: float = 1e-12
    jobs: int = 1
    max_rows: Optional[int] = None
    betas: tuple[float, ...] = tuple(np.logspace(-2, 0, 7))
    max_states: int = 6
    temp_decades: tuple[float, float] = (0.0, 2.0)
    t_max: float = 100.0
    dt: float = 0.05
    checkpoints: Optional[tuple[float, ...]] = None
    amplitude: float = 0.5
    omega: float = 0.05
    fit_window: Optional[tuple[float, float]] = None
    region_sizes: tuple[int, ...] = (5, 7, 9, 11)

    def __post_init__(self) -> None:
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        if self.n_sites < 2:
            raise ValueError("need at least 2 sites")
        if not (1 <= self.region_size <= self.n_sites):
            raise ValueError("region size out of range")
        if self.locality_k < 1:
            raise ValueError("constraint locality must be >= 1")
        if self.epsilon < 0 or not np.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite and >= 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.kind == "gibbs-sweep" and (len(self.betas) == 0 or min(self.betas) < 0):
            raise ValueError("gibbs sweep needs non-negative betas")
        if self.kind == "multistate" and self.max_states < 1:
            raise ValueError("multistate needs max_states >= 1")
        if self.kind in ("quench", "driven"):
            if self.dt <= 0 or self.t_max <= 0:
                raise ValueError("dynamics need positive dt and t_max")
        if self.kind == "driven" and self.amplitude != 0.0 and self.omega == 0.0:
            raise ValueError("driven sweep needs a nonzero frequency")
        if self.kind == "xy-gap-scan":
            if self.model is not ModelFamily.XY_CHAIN:
                object.__setattr__(self, "model", ModelFamily.XY_CHAIN)
            for size in self.region_sizes:
                if not (3 <= size <= self.n_sites):
                    raise ValueError(f"scan region size {size} out of range")

    @classmethod
    def for_kind(cls, kind: str, **overrides) -> "ExperimentConfig":
        """Config with per-kind defaults for size, trials and noise."""
        if kind not in _DEFAULTS_BY_KIND:
            raise ValueError(f"unknown sweep kind {kind!r}")
        n_sites, region_size, trials, epsilon = _DEFAULTS_BY_KIND[kind]
        base = {
            "kind": kind,
            "n_sites": n_sites,
            "region_size": region_size,
            "trials": trials,
            "epsilon": epsilon,
        }
        if kind == "xy-gap-scan":
            base["model"] = ModelFamily.XY_CHAIN
        base.update(overrides)
        return cls(**base)

    def trial_seeds(self, trial: int) -> dict[str, int]:
        """Named integer sub-seeds for one trial, all derived from the
        global seed."""
        children = np.random.SeedSequence([self.seed, trial]).spawn(5)
        names = ("hamiltonian", "secondary", "drive", "noise", "order")
        return {name: int(c.generate_state(1)[0]) for name, c in zip(names, children)}


@dataclass(frozen=True)
class TrialRecord:
    """One recovery outcome at one sweep coordinate."""

    trial: int
    seed: int
    coord: float
    lambda0: float
    lambda1: float
    degenerate: bool
    delta: float
    delta_est: float
    extra: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.lambda0 > self.lambda1 + 1e-30:
            raise ValueError("lambda0 must not exceed lambda1")
        core = (self.coord, self.lambda0, self.lambda1, self.delta)
        if not all(np.isfinite(v) for v in core):
            raise ValueError("record fields must be finite")
        # delta_est legitimately diverges on a degenerate spectrum.
        if not self.degenerate and not np.isfinite(self.delta_est):
            raise ValueError("delta_est must be finite when the gap is open")


def _geometry(cfg: ExperimentConfig, lattice: Lattice, region_size: Optional[int] = None):
    """(region L, interior L0, constraint basis on L0, term basis touching L0)."""
    size = cfg.region_size if region_size is None else region_size
    region = lattice.middle_region(size)
    core = interior(lattice, region, cfg.model)
    constraints = enumerate_basis(lattice, core, cfg.locality_k, cfg.order_seed)
    terms = term_basis_for_model(cfg.model, lattice, core)
    return region, core, constraints, terms


def term_count(cfg: ExperimentConfig, region_size: Optional[int] = None) -> int:
    """M for the configured geometry."""
    lattice = Lattice.chain(cfg.n_sites)
    return len(_geometry(cfg, lattice, region_size)[3])


def constraint_count(cfg: ExperimentConfig, region_size: Optional[int] = None) -> int:
    """N_max for the configured geometry."""
    lattice = Lattice.chain(cfg.n_sites)
    return len(_geometry(cfg, lattice, region_size)[2])


def _normalized_subvector(spec: HamiltonianSpec, terms: OperatorBasis) -> np.ndarray:
    c = spec.coefficients_for(terms)
    nrm = np.linalg.norm(c)
    if nrm == 0:
        raise ValueError("Hamiltonian has no weight on the candidate terms")
    return c / nrm


def _safe_delta(c_true: np.ndarray, c_rec: np.ndarray) -> float:
    if np.linalg.norm(c_rec) == 0:
        return float(np.sqrt(2.0))
    return reconstruction_error(c_true, c_rec)


def run_groundstate_sweep(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Add constraints one at a time to a ground-state K and watch the
    spectrum: per trial and prefix length N, records noisy lambda0/lambda1,
    the reconstruction error, and the spectrum-based error prediction."""
    _require_kind(cfg, "groundstate-sweep")
    return _run_trials(cfg, _groundstate_trial)


def _groundstate_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    seeds = cfg.trial_seeds(trial)
    lattice = Lattice.chain(cfg.n_sites)
    _, _, constraints, terms = _geometry(cfg, lattice)
    constraints = _reshuffled(constraints, cfg, trial)
    spec = _sample(cfg.model, cfg.n_sites, seeds["hamiltonian"])
    state, energy, _ = ground_state(spec)
    c_true = _normalized_subvector(spec, terms)
    k_clean = build_constraint_matrix(state, constraints, terms)
    k_noisy = inject_noise(k_clean, cfg.epsilon, seeds["noise"])
    n_max = k_clean.n_rows if cfg.max_rows is None else min(cfg.max_rows, k_clean.n_rows)
    records = []
    for n_rows in range(1, n_max + 1):
        clean = recover(k_clean.prefix(n_rows))
        noisy = recover(k_noisy.prefix(n_rows))
        est = error_estimate(clean.lambdas, cfg.epsilon)
        delta = _safe_delta(c_true, noisy.coeffs)
        records.append(TrialRecord(
            trial=trial,
            seed=seeds["hamiltonian"],
            coord=float(n_rows),
            lambda0=noisy.lambda0,
            lambda1=noisy.lambda1,
            degenerate=noisy.degenerate_kernel_flag,
            delta=delta,
            delta_est=est.value,
            extra={
                "k_group": float(constraints[n_rows - 1].window_size),
                "lambda0_clean": clean.lambda0,
                "lambda1_clean": clean.lambda1,
                "energy": energy,
            },
        ))
    return records


def _reshuffled(constraints: OperatorBasis, cfg: ExperimentConfig, trial: int) -> OperatorBasis:
    """Fresh within-size shuffle per trial when an ordering seed is set."""
    if cfg.order_seed is None:
        return constraints
    lattice = constraints.region.lattice
    seed_seq = np.random.SeedSequence([cfg.order_seed, trial])
    per_trial = int(seed_seq.generate_state(1)[0])
    return enumerate_basis(lattice, constraints.region, constraints.locality_k, per_trial)


def run_gibbs_sweep(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Recovery from thermal states across a beta list, fixed constraint
    set; the interesting output is how the spectrum gap closes as the state
    approaches maximally mixed."""
    _require_kind(cfg, "gibbs-sweep")
    return _run_trials(cfg, _gibbs_trial)


def _gibbs_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    seeds = cfg.trial_seeds(trial)
    lattice = Lattice.chain(cfg.n_sites)
    _, _, constraints, terms = _geometry(cfg, lattice)
    spec = _sample(cfg.model, cfg.n_sites, seeds["hamiltonian"])
    c_true = _normalized_subvector(spec, terms)
    records = []
    for j, beta in enumerate(cfg.betas):
        state = gibbs_state(spec, beta)
        clean = build_constraint_matrix(state, constraints, terms)
        noisy = inject_noise(clean, cfg.epsilon, _subseed(seeds["noise"], j))
        got = recover(noisy)
        est = error_estimate(recover(clean).lambdas, cfg.epsilon)
        records.append(TrialRecord(
            trial=trial,
            seed=seeds["hamiltonian"],
            coord=float(beta),
            lambda0=got.lambda0,
            lambda1=got.lambda1,
            degenerate=got.degenerate_kernel_flag,
            delta=_safe_delta(c_true, got.coeffs),
            delta_est=est.value,
        ))
    return records


def run_multistate_recovery(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Stack single-site-constraint blocks from Gibbs states at log-spaced
    temperatures and sweep how many states it takes for the kernel to
    become unique."""
    _require_kind(cfg, "multistate")
    return _run_trials(cfg, _multistate_trial)


def _multistate_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    seeds = cfg.trial_seeds(trial)
    lattice = Lattice.chain(cfg.n_sites)
    region = lattice.middle_region(cfg.region_size)
    core = interior(lattice, region, cfg.model)
    constraints = enumerate_basis(lattice, core, 1, cfg.order_seed)
    terms = term_basis_for_model(cfg.model, lattice, core)
    spec = _sample(cfg.model, cfg.n_sites, seeds["hamiltonian"])
    c_true = _normalized_subvector(spec, terms)
    lo, hi = cfg.temp_decades
    state_cache: dict[float, QuantumState] = {}
    records = []
    for count in range(1, cfg.max_states + 1):
        temps = np.logspace(lo, hi, count)
        blocks = []
        for b, temp in enumerate(temps):
            beta = 1.0 / temp
            if beta not in state_cache:
                state_cache[beta] = gibbs_state(spec, beta)
            block = build_constraint_matrix(state_cache[beta], constraints, terms)
            blocks.append(inject_noise(block, cfg.epsilon, _subseed(seeds["noise"], count, b)))
        got = recover(stack(blocks))
        clean = stack([build_constraint_matrix(state_cache[1.0 / t], constraints, terms)
                       for t in temps])
        est = error_estimate(recover(clean).lambdas, cfg.epsilon)
        records.append(TrialRecord(
            trial=trial,
            seed=seeds["hamiltonian"],
            coord=float(count),
            lambda0=got.lambda0,
            lambda1=got.lambda1,
            degenerate=got.degenerate_kernel_flag,
            delta=_safe_delta(c_true, got.coeffs),
            delta_est=est.value,
        ))
    return records


def default_checkpoints(t_max: float, dt: float, points: int = 24) -> tuple[float, ...]:
    """Log-spaced times in [1, t_max], snapped to the dt grid, deduplicated."""
    raw = np.logspace(0.0, np.log10(t_max), points)
    snapped = sorted({round(round(t / dt) * dt, 10) for t in raw})
    return tuple(t for t in snapped if t >= dt)


def _dynamics_setup(cfg: ExperimentConfig, trial: int):
    seeds = cfg.trial_seeds(trial)
    lattice = Lattice.chain(cfg.n_sites)
    _, _, constraints, terms = _geometry(cfg, lattice)
    h0 = _sample(cfg.model, cfg.n_sites, seeds["hamiltonian"])
    h1 = _sample(cfg.model, cfg.n_sites, seeds["secondary"])
    combined = HamiltonianSpec(
        model=h0.model, lattice=lattice, terms=h0.terms,
        coeffs=h0.coeffs + h1.coeffs, seed=None,
    )
    initial, _, _ = ground_state(combined)
    checkpoints = cfg.checkpoints or default_checkpoints(cfg.t_max, cfg.dt)
    return seeds, constraints, terms, h0, initial, checkpoints


def run_quench(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Quench protocol: start in the ground state of H0 + H1, evolve under
    H0 alone, and recover H0 from the running time average of the state."""
    _require_kind(cfg, "quench")
    return _run_trials(cfg, _quench_trial)


def _quench_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    seeds, constraints, terms, h0, initial, checkpoints = _dynamics_setup(cfg, trial)
    c_true = _normalized_subvector(h0, terms)
    records = []
    for j, (t, rho_avg, _) in enumerate(
        averaged_states(initial, h0, checkpoints, cfg.dt)
    ):
        k = build_constraint_matrix(rho_avg, constraints, terms)
        noisy = inject_noise(k, cfg.epsilon, _subseed(seeds["noise"], j))
        got = recover(noisy)
        est = error_estimate(recover(k).lambdas, cfg.epsilon)
        records.append(TrialRecord(
            trial=trial,
            seed=seeds["hamiltonian"],
            coord=float(t),
            lambda0=got.lambda0,
            lambda1=got.lambda1,
            degenerate=got.degenerate_kernel_flag,
            delta=_safe_delta(c_true, got.coeffs),
            delta_est=est.value,
            extra={"defect": steady_state_defect(rho_avg, h0)},
        ))
    return records


def run_driven(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Periodically driven protocol: evolve under H0 + f(t) V and recover
    the pair (H0, V) from the extended constraint matrix; `delta` scores the
    concatenated vector, the extras score each half."""
    _require_kind(cfg, "driven")
    return _run_trials(cfg, _driven_trial)


def _driven_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    seeds, constraints, terms, h0, initial, checkpoints = _dynamics_setup(cfg, trial)
    driven = attach_generic_drive(h0, cfg.amplitude, cfg.omega, seeds["drive"])
    c0 = h0.coefficients_for(terms)
    drive_spec = HamiltonianSpec(
        model=driven.model, lattice=driven.lattice, terms=driven.drive.terms,
        coeffs=np.asarray(driven.drive.coeffs), seed=None,
    )
    cv = drive_spec.coefficients_for(terms)
    # The modulation column uses the unit profile f(t) = cos(omega t), so
    # the kernel pairs H0's coefficients with amplitude * V's.
    c_full = np.concatenate([c0, cfg.amplitude * cv])
    c_full = c_full / np.linalg.norm(c_full)
    m = len(terms)
    records = []
    for j, (t, rho_avg, rho_f) in enumerate(
        averaged_states(initial, driven, checkpoints, cfg.dt)
    ):
        k = build_extended_from_averages(
            rho_avg, rho_f, constraints, terms,
            metadata={"source": "driven", "t": float(t)},
        )
        noisy = inject_noise(k, cfg.epsilon, _subseed(seeds["noise"], j))
        got = recover(noisy)
        est = error_estimate(recover(k).lambdas, cfg.epsilon)
        records.append(TrialRecord(
            trial=trial,
            seed=seeds["hamiltonian"],
            coord=float(t),
            lambda0=got.lambda0,
            lambda1=got.lambda1,
            degenerate=got.degenerate_kernel_flag,
            delta=_safe_delta(c_full, got.coeffs),
            delta_est=est.value,
            extra={
                "delta_h0": _safe_delta(c0 / np.linalg.norm(c0), got.coeffs[:m]),
                "delta_v": _safe_delta(cv / np.linalg.norm(cv), got.coeffs[m:]),
            },
        ))
    return records


def run_xy_gap_scan(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Spectrum gap of XY-chain ground-state recovery as the target region
    grows; the gap staying put is what makes the method size-stable."""
    _require_kind(cfg, "xy-gap-scan")
    return _run_trials(cfg, _xy_trial)


def _xy_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    seeds = cfg.trial_seeds(trial)
    spec = sample_xy_chain(cfg.n_sites, seeds["hamiltonian"])
    state, energy, _ = ground_state(spec)
    lattice = spec.lattice
    records = []
    for j, size in enumerate(cfg.region_sizes):
        _, _, constraints, terms = _geometry(cfg, lattice, region_size=size)
        c_true = _normalized_subvector(spec, terms)
        k = build_constraint_matrix(state, constraints, terms)
        noisy = inject_noise(k, cfg.epsilon, _subseed(seeds["noise"], j))
        got = recover(noisy)
        est = error_estimate(recover(k).lambdas, cfg.epsilon)
        records.append(TrialRecord(
            trial=trial,
            seed=seeds["hamiltonian"],
            coord=float(size),
            lambda0=got.lambda0,
            lambda1=got.lambda1,
            degenerate=got.degenerate_kernel_flag,
            delta=_safe_delta(c_true, got.coeffs),
            delta_est=est.value,
            extra={"energy": energy},
        ))
    return records


RUNNERS = {
    "groundstate-sweep": run_groundstate_sweep,
    "gibbs-sweep": run_gibbs_sweep,
    "multistate": run_multistate_recovery,
    "quench": run_quench,
    "driven": run_driven,
    "xy-gap-scan": run_xy_gap_scan,
}

_TRIAL_FUNCS = {
    "groundstate-sweep": _groundstate_trial,
    "gibbs-sweep": _gibbs_trial,
    "multistate": _multistate_trial,
    "quench": _quench_trial,
    "driven": _driven_trial,
    "xy-gap-scan": _xy_trial,
}


def run_sweep(cfg: ExperimentConfig) -> list[TrialRecord]:
    return RUNNERS[cfg.kind](cfg)


def _trial_job(args: tuple[ExperimentConfig, int]) -> list[TrialRecord]:
    cfg, trial = args
    return _TRIAL_FUNCS[cfg.kind](cfg, trial)


def _run_trials(cfg: ExperimentConfig, trial_func) -> list[TrialRecord]:
    if cfg.jobs == 1:
        batches = [trial_func(cfg, t) for t in range(cfg.trials)]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            batches = list(pool.map(_trial_job, [(cfg, t) for t in range(cfg.trials)]))
    records = [rec for batch in batches for rec in batch]
    records.sort(key=lambda r: (r.trial, r.coord))
    return records


def _require_kind(cfg: ExperimentConfig, kind: str) -> None:
    if cfg.kind != kind:
        raise ValueError(f"config kind {cfg.kind!r} does not match {kind!r}")


def _sample(model: ModelFamily, n_sites: int, seed: int) -> HamiltonianSpec:
    if model is ModelFamily.GENERIC_2LOCAL_CHAIN:
        return sample_generic_chain(n_sites, seed)
    return sample_xy_chain(n_sites, seed)


def _subseed(base: int, *parts: int) -> int:
    return int(np.random.SeedSequence([base, *parts]).generate_state(1)[0])


def fit_power_law(
    times: np.ndarray, values: np.ndarray, window: tuple[float, float]
) -> tuple[float, float]:
    """Least-squares slope of log(value) vs log(time) inside the window,
    with its standard error."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ValueError("times and values must be equal-length vectors")
    lo, hi = window
    mask = (t >= lo) & (t <= hi)
    if mask.sum() < 3:
        raise ValueError(f"need at least 3 points in window {window}, have {mask.sum()}")
    if np.any(v[mask] <= 0) or np.any(t[mask] <= 0):
        raise ValueError("power-law fit needs positive times and values")
    x = np.log(t[mask])
    y = np.log(v[mask])
    xc = x - x.mean()
    sxx = np.dot(xc, xc)
    if sxx == 0:
        raise ValueError("window has no time spread")
    slope = np.dot(xc, y) / sxx
    resid = y - (y.mean() + slope * xc)
    dof = len(x) - 2
    stderr = float(np.sqrt(np.dot(resid, resid) / dof / sxx)) if dof > 0 else 0.0
    return float(slope), stderr


def default_fit_window(times: Sequence[float]) -> tuple[float, float]:
    """Last half-decade of the grid."""
    hi = max(times)
    return (hi / np.sqrt(10.0), hi)


def log10_mean(values: np.ndarray) -> float:
    """Mean of log10 over positive entries; the aggregation used for all
    headline statistics."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v) & (v > 0)]
    if len(v) == 0:
        raise ValueError("no positive values to aggregate")
    return float(np.mean(np.log10(v)))


def aggregate_log10(records: Sequence[TrialRecord], attr: str) -> dict[float, float]:
    """coord -> log10-mean of one record field across trials."""
    by_coord: dict[float, list[float]] = {}
    for rec in records:
        val = getattr(rec, attr) if attr in TrialRecord.__dataclass_fields__ else rec.extra[attr]
        by_coord.setdefault(rec.coord, []).append(val)
    return {c: log10_mean(np.array(vals)) for c, vals in sorted(by_coord.items())}


def sweep_metadata(cfg: ExperimentConfig) -> dict[str, str]:
    """Config echo written at the top of every sweep CSV. No timestamps
    here: identical configs must produce byte-identical files."""
    meta = {
        "schema": "1",
        "kind": "sweep",
        "experiment": cfg.kind,
        "version": __version__,
        "coord": COORD_NAMES[cfg.kind],
        "model": cfg.model.value,
        "n_sites": str(cfg.n_sites),
        "region_size": str(cfg.region_size),
        "locality_k": str(cfg.locality_k),
        "order_seed": str(cfg.order_seed),
        "seed": str(cfg.seed),
        "trials": str(cfg.trials),
        "epsilon": repr(cfg.epsilon),
    }
    if cfg.kind == "groundstate-sweep":
        meta["m_terms"] = str(term_count(cfg))
        meta["n_max"] = str(constraint_count(cfg))
    if cfg.kind == "gibbs-sweep":
        meta["betas"] = " ".join(repr(b) for b in cfg.betas)
    if cfg.kind == "multistate":
        meta["max_states"] = str(cfg.max_states)
        meta["temp_decades"] = f"{cfg.temp_decades[0]} {cfg.temp_decades[1]}"
        meta["m_terms"] = str(term_count(cfg))
    if cfg.kind in ("quench", "driven"):
        meta["t_max"] = repr(cfg.t_max)
        meta["dt"] = repr(cfg.dt)
        meta["m_terms"] = str(term_count(cfg))
    if cfg.kind == "driven":
        meta["amplitude"] = repr(cfg.amplitude)
        meta["omega"] = repr(cfg.omega)
    if cfg.kind == "xy-gap-scan":
        meta["region_sizes"] = " ".join(str(s) for s in cfg.region_sizes)
    return meta


def sweep_csv_text(cfg: ExperimentConfig, records: Sequence[TrialRecord]) -> str:
    """Raw per-trial records with a metadata header; aggregation is the
    consumer's job."""
    meta = sweep_metadata(cfg)
    extras = EXTRA_COLUMNS[cfg.kind]
    buf = io.StringIO()
    for key, val in meta.items():
        buf.write(f"# {key}={val}\n")
    writer = csv.writer(buf, lineterminator="\n")
    coord = COORD_NAMES[cfg.kind]
    writer.writerow(["trial", "seed", coord, "lambda0", "lambda1",
                     "degenerate", "delta", "delta_est", *extras])
    for rec in records:
        row = [str(rec.trial), str(rec.seed), repr(float(rec.coord)),
               repr(rec.lambda0), repr(rec.lambda1), str(int(rec.degenerate)),
               repr(rec.delta), repr(rec.delta_est)]
        row += [repr(float(rec.extra[name])) for name in extras]
        writer.writerow(row)
    return buf.getvalue()
