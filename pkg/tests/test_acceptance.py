"""End-to-end acceptance runs for the whole pipeline at headline sizes.

Each test prints one [PASS]/[FAIL] line with the measured numbers; run with
`pytest tests/test_acceptance.py -v -s` to see them as they complete. The
expensive sweeps are session fixtures shared between criteria.
"""

import itertools
import time

import numpy as np
import pytest

from conftest import dense_pauli, random_density, random_pure
from hamlearn.experiments import (
    ExperimentConfig,
    aggregate_log10,
    fit_power_law,
    log10_mean,
    run_sweep,
    term_count,
)
from hamlearn.lattice import Lattice
from hamlearn.models import (
    HamiltonianSpec,
    ModelFamily,
    interior,
    sample_generic_chain,
    term_basis_for_model,
)
from hamlearn.pauli import PauliString, commutator_observable, enumerate_basis, multiply
from hamlearn.recovery import (
    build_constraint_matrix,
    full_system_correlation_matrix,
    recover,
    reconstruction_error,
)
from hamlearn.states import (
    QuantumState,
    gibbs_state,
    ground_state,
    steady_state_defect,
    time_averaged_state,
)

# Quench power-law run.  At 8 sites the 1/t regime for sqrt(lambda0) locks
# in only after lambda1 has fully saturated; the crossover stretches past
# t~200 (window-fit slopes march -0.60, -0.71, -0.81, -0.89 for windows
# ending at 200, 400, 800, 1600), so the fit lives in (400, 1600) and the
# saturation drift is checked on the exact doublings 400-800-1600.
QUENCH_CHECKPOINTS = (6.25, 12.5, 25.0, 35.5, 50.0, 70.75, 100.0, 141.5,
                      200.0, 283.0, 400.0, 565.75, 800.0, 1131.5, 1600.0)
QUENCH_FIT_WINDOW = (400.0, 1600.0)

# Driven runs share one log checkpoint grid, truncated per combination.
# The exponent-ordering comparison lives in the post-peak decay before the
# finite-size floor flattens the faster-heating drives, so those fits stop
# at 632.  The baseline gap condition (lambda0 outpacing lambda1) is an
# asymptotic statement and needs the late tail, so only the baseline run
# extends to 2000; running means at shared checkpoints are unaffected by
# where the grid ends.
DRIVEN_COMBOS = ((0.5, 0.05), (1.0, 0.05), (0.5, 0.1))
DRIVEN_T_MAX = {(0.5, 0.05): 2000.0, (1.0, 0.05): 632.0, (0.5, 0.1): 632.0}
DRIVEN_ORDER_WINDOW = (30.0, 632.0)
BASELINE_GAP_WINDOW = (200.0, 2000.0)


def _driven_checkpoints(t_max):
    from hamlearn.experiments import default_checkpoints

    master = default_checkpoints(2000.0, 0.25, points=48)
    return tuple(t for t in master if t <= t_max)


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="session")
def flagship():
    """20-trial ground-state constraint sweep at 12 sites, middle-8 region."""
    cfg = ExperimentConfig.for_kind("groundstate-sweep")
    t0 = time.monotonic()
    records = run_sweep(cfg)
    return cfg, records, time.monotonic() - t0


@pytest.fixture(scope="session")
def quench_sweep():
    cfg = ExperimentConfig.for_kind(
        "quench", t_max=1600.0, dt=0.25, checkpoints=QUENCH_CHECKPOINTS)
    return cfg, run_sweep(cfg)


@pytest.fixture(scope="session")
def gibbs_sweep():
    cfg = ExperimentConfig.for_kind("gibbs-sweep", betas=(0.01, 1.0))
    return cfg, run_sweep(cfg)


@pytest.fixture(scope="session")
def multistate_sweep():
    cfg = ExperimentConfig.for_kind("multistate", max_states=5)
    return cfg, run_sweep(cfg)


@pytest.fixture(scope="session")
def xy_sweep():
    cfg = ExperimentConfig.for_kind("xy-gap-scan")
    return cfg, run_sweep(cfg)


@pytest.fixture(scope="session")
def driven_sweeps():
    out = {}
    for amplitude, omega in DRIVEN_COMBOS:
        t_max = DRIVEN_T_MAX[(amplitude, omega)]
        cfg = ExperimentConfig.for_kind(
            "driven", n_sites=10, region_size=8, trials=10,
            t_max=t_max, dt=0.25, checkpoints=_driven_checkpoints(t_max),
            amplitude=amplitude, omega=omega)
        out[(amplitude, omega)] = run_sweep(cfg)
    return out


def _series(records, trial):
    rows = sorted((r for r in records if r.trial == trial), key=lambda r: r.coord)
    t = np.array([r.coord for r in rows])
    l0 = np.array([r.lambda0 for r in rows])
    l1 = np.array([r.lambda1 for r in rows])
    return t, l0, l1


def test_gap_opening_threshold(flagship):
    cfg, records, runtime = flagship
    m = term_count(cfg)
    bad_degenerate = [
        (r.trial, r.coord) for r in records if r.coord < m - 1 and not r.degenerate
    ]
    ratios = []
    for r in records:
        if r.coord >= m:
            ratios.append(r.lambda1 / r.lambda0 if r.lambda0 > 0 else np.inf)
    worst = min(ratios)
    ok = not bad_degenerate and worst > 1e6 and runtime < 15 * 60
    report(
        "gap-opening-threshold", ok,
        f"{len(records)} records, worst post-threshold ratio {worst:.3g}, "
        f"degenerate violations {len(bad_degenerate)}, runtime {runtime:.0f}s",
    )


def test_error_estimate_calibration(flagship):
    cfg, records, _ = flagship
    m = term_count(cfg)
    past = [r for r in records if r.coord >= m]
    coords = sorted({r.coord for r in past})
    worst_factor = 1.0
    for n in coords:
        rows = [r for r in past if r.coord == n]
        gm_delta = log10_mean(np.array([r.delta for r in rows]))
        gm_est = log10_mean(np.array([r.delta_est for r in rows]))
        worst_factor = max(worst_factor, 10.0 ** abs(gm_delta - gm_est))
    log_d = np.log10([r.delta for r in past])
    log_e = np.log10([r.delta_est for r in past])
    pearson = float(np.corrcoef(log_d, log_e)[0, 1])
    ok = worst_factor < 3.0 and pearson > 0.9
    report(
        "error-estimate-calibration", ok,
        f"worst per-N log-mean factor {worst_factor:.2f}, Pearson {pearson:.3f} "
        f"over {len(past)} points",
    )


def test_steady_state_exactness():
    family = ModelFamily.GENERIC_2LOCAL_CHAIN
    lattice = Lattice.chain(12)
    region = lattice.middle_region(8)
    core = interior(lattice, region, family)
    constraints = enumerate_basis(lattice, core, 4, 0)
    terms = term_basis_for_model(family, lattice, core)
    worst = 0.0
    checked = 0
    for trial in range(20):
        spec = sample_generic_chain(12, seed=1000 + trial)
        state, _, _ = ground_state(spec)
        got = recover(build_constraint_matrix(state, constraints, terms))
        if got.degenerate_kernel_flag:
            continue
        c_true = spec.coefficients_for(terms)
        delta = reconstruction_error(c_true / np.linalg.norm(c_true), got.coeffs)
        worst = max(worst, delta)
        checked += 1

    cfg = ExperimentConfig.for_kind("gibbs-sweep", epsilon=0.0, betas=(0.1, 1.0))
    for r in run_sweep(cfg):
        if not r.degenerate:
            worst = max(worst, r.delta)
            checked += 1
    ok = checked >= 30 and worst < 1e-7
    report(
        "steady-state-exactness", ok,
        f"worst noiseless delta {worst:.3g} over {checked} ground+thermal recoveries",
    )


def test_trace_norm_bound():
    lattice = Lattice.chain(6)
    times = np.arange(20, 2001) * 0.05
    worst_excess = -np.inf
    for seed in (3, 17, 42):
        h0 = sample_generic_chain(6, seed=seed)
        h1 = sample_generic_chain(6, seed=seed + 500)
        combined = HamiltonianSpec(
            model=h0.model, lattice=lattice, terms=h0.terms,
            coeffs=h0.coeffs + h1.coeffs, seed=None)
        initial, _, _ = ground_state(combined)
        for t in times:
            rho = time_averaged_state(initial, h0, float(t))
            excess = steady_state_defect(rho, h0) - 2.0 / t
            worst_excess = max(worst_excess, excess)
    ok = worst_excess <= 1e-4
    report(
        "trace-norm-bound", ok,
        f"max(defect - 2/t) = {worst_excess:.3e} over {len(times)} times x 3 systems",
    )


def test_quench_power_law(quench_sweep):
    cfg, records = quench_sweep
    t = np.array(sorted({r.coord for r in records}))
    agg0 = aggregate_log10(records, "lambda0")
    agg1 = aggregate_log10(records, "lambda1")
    curve0 = np.array([10.0 ** agg0[c] for c in t])
    alpha, stderr = fit_power_law(t, np.sqrt(curve0), QUENCH_FIT_WINDOW)
    drifts = []
    for lo_t in (400.0, 800.0):
        drifts.append(abs(10.0 ** (agg1[2 * lo_t] - agg1[lo_t]) - 1.0))
    ok = abs(alpha + 1.0) <= 0.15 and max(drifts) < 0.10
    report(
        "quench-power-law", ok,
        f"alpha {alpha:.3f} (+/-{stderr:.3f}), lambda1 drift per doubling "
        f"{', '.join(f'{d:.1%}' for d in drifts)}",
    )


def test_thermal_trend(gibbs_sweep):
    cfg, records = gibbs_sweep
    hot = {r.trial: r for r in records if r.coord == 0.01}
    cold = {r.trial: r for r in records if r.coord == 1.0}
    gap_ok = all(cold[i].lambda1 >= hot[i].lambda1 for i in cold)
    med_hot = float(np.median([r.delta for r in hot.values()]))
    med_cold = float(np.median([r.delta for r in cold.values()]))
    ok = gap_ok and med_hot >= med_cold
    report(
        "thermal-trend", ok,
        f"lambda1 ordering holds on {sum(cold[i].lambda1 >= hot[i].lambda1 for i in cold)}"
        f"/{len(cold)} trials, median delta hot {med_hot:.3g} vs cold {med_cold:.3g}",
    )


def test_multistate_recovery(multistate_sweep):
    cfg, records = multistate_sweep
    final = [r for r in records if r.coord == cfg.max_states]
    good = [r for r in final if not r.degenerate and r.delta < 1e-5]
    ok = len(good) >= 0.9 * len(final) and len(final) == cfg.trials
    worst = max(r.delta for r in final)
    report(
        "multistate-recovery", ok,
        f"{len(good)}/{len(final)} trials recover from {cfg.max_states} thermal "
        f"states (worst delta {worst:.3g})",
    )


def test_driven_ordering(driven_sweeps):
    base, j_combo, w_combo = DRIVEN_COMBOS
    slopes = {}
    for combo, records in driven_sweeps.items():
        trials = sorted({r.trial for r in records})
        a1 = []
        for trial in trials:
            t, _, l1 = _series(records, trial)
            a1.append(fit_power_law(t, np.sqrt(l1), DRIVEN_ORDER_WINDOW)[0])
        slopes[combo] = np.array(a1)
    j_wins = int(np.sum(slopes[j_combo] < slopes[base]))
    w_wins = int(np.sum(slopes[w_combo] < slopes[base]))

    base_records = driven_sweeps[base]
    t = np.array(sorted({r.coord for r in base_records}))
    agg0 = aggregate_log10(base_records, "lambda0")
    agg1 = aggregate_log10(base_records, "lambda1")
    curve0 = np.sqrt([10.0 ** agg0[c] for c in t])
    curve1 = np.sqrt([10.0 ** agg1[c] for c in t])
    a0_base = fit_power_law(t, curve0, BASELINE_GAP_WINDOW)[0]
    a1_base = fit_power_law(t, curve1, BASELINE_GAP_WINDOW)[0]

    n = len(slopes[base])
    ok = j_wins > n / 2 and w_wins > n / 2 and a0_base < a1_base
    report(
        "driven-ordering", ok,
        f"stronger amplitude steeper on {j_wins}/{n}, faster drive steeper on "
        f"{w_wins}/{n}; baseline tail exponents lambda0 {a0_base:.3f} vs "
        f"lambda1 {a1_base:.3f}",
    )


def test_parseval_identity(rng):
    lattice = Lattice.chain(3)
    basis = enumerate_basis(lattice, lattice.full_region(), 3)
    states = [QuantumState.pure(random_pure(3, rng)) for _ in range(3)]
    states += [QuantumState.mixed(random_density(3, rng)) for _ in range(2)]
    for beta in (0.2, 1.0, 5.0):
        spec = sample_generic_chain(3, seed=int(10 * beta) + 7)
        states.append(gibbs_state(spec, beta))
    worst = 0.0
    for state in states:
        k = build_constraint_matrix(state, basis, basis)
        gram = k.entries.T @ k.entries
        direct = full_system_correlation_matrix(state, basis)
        worst = max(worst, float(np.max(np.abs(gram - direct))))
    ok = worst < 1e-8
    report(
        "parseval-identity", ok,
        f"max |K^T K - direct| = {worst:.3g} over {len(states)} states, "
        f"{len(basis)}^2 entries each",
    )


def test_pauli_algebra_oracle():
    checked = 0
    for n in (1, 2, 3):
        labels = ["".join(t) for t in itertools.product("IXYZ", repeat=n)]
        dense = {lab: dense_pauli(lab) for lab in labels}
        for la, lb in itertools.product(labels, repeat=2):
            a, b = PauliString.from_label(la), PauliString.from_label(lb)
            phase, prod = multiply(a, b)
            assert np.array_equal(phase * prod.sign * dense[prod.label],
                                  dense[la] @ dense[lb])
            target = 1j * (dense[la] @ dense[lb] - dense[lb] @ dense[la])
            got = commutator_observable(a, b)
            if got is None:
                assert not np.any(target)
            else:
                coeff, p = got
                assert np.array_equal(coeff * p.sign * dense[p.label], target)
            checked += 1
    report("pauli-algebra-oracle", True,
           f"{checked} ordered pairs match dense products and commutators exactly")


def test_xy_gap_flatness(xy_sweep):
    # The smallest region leaves a 3-site interior, where the XY family's
    # constraint matrix carries a 5-dimensional exact kernel (quadratic
    # fermion operators the short constraint window cannot separate from
    # conserved directions), so lambda1 sits at the noise floor there while
    # the larger regions keep a 1-dimensional kernel.  The sub-span over the
    # larger regions is printed alongside for context.
    cfg, records = xy_sweep
    agg = aggregate_log10(records, "lambda1")
    span = max(agg.values()) - min(agg.values())
    upper = {size: v for size, v in agg.items() if size > min(agg)}
    sub_span = max(upper.values()) - min(upper.values())
    ok = span < 1.0
    report(
        "xy-gap-flatness", ok,
        f"log-mean lambda1 spans {span:.2f} decades across region sizes "
        f"{sorted(agg)} at {cfg.n_sites} sites "
        f"(sub-span over {sorted(upper)}: {sub_span:.2f} decades)",
    )
