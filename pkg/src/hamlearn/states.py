"""Exact simulation backend: states, thermal ensembles, time evolution.

Everything here works on dense vectors/matrices of dimension 2**n or on
sparse Hamiltonians, with hard caps on n so a typo cannot eat the machine.
Pauli expectation values are computed by index gathers, never by building
the observable as a matrix.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NumericalError, ResourceLimitError
from .models import HamiltonianSpec
from .pauli import PauliString

# Hard size caps. Sparse eigensolves and matrix-free propagation are fine up
# to 14 sites on one core; anything needing a full dense spectrum stops at 12.
MAX_SITES_SPARSE = 14
MAX_SITES_DENSE = 12

# Vectors buffered per matrix-product flush when averaging pure states.
_AVG_BLOCK = 64

# Fixed ARPACK start vector seed; a generic dense vector overlaps every
# symmetry sector, and fixing it makes reruns bit-identical.
_ARPACK_SEED = 0x5EED

_PURE_NORM_TOL = 1e-9
_HERM_TOL = 1e-10
_TRACE_TOL = 1e-9
_EIG_FLOOR = -1e-10
_GAP_FLOOR = 1e-8


def _check_cap(n_sites: int, cap: int, what: str) -> None:
    if n_sites > cap:
        raise ResourceLimitError(f"{what} capped at {cap} sites, requested {n_sites}")


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A pure state (unit vector) or mixed state (density matrix) on n sites."""

    n_sites: int
    kind: str
    data: np.ndarray = field(repr=False)

    @classmethod
    def pure(cls, vector: np.ndarray, *, validate: bool = True) -> "QuantumState":
        vec = np.ascontiguousarray(vector, dtype=complex)
        if vec.ndim != 1 or vec.size & (vec.size - 1) or vec.size < 2:
            raise ValueError("pure state must be a vector of length 2**n")
        n = int(vec.size).bit_length() - 1
        if validate:
            nrm = np.linalg.norm(vec)
            if abs(nrm - 1.0) > _PURE_NORM_TOL:
                raise ValueError(f"state norm {nrm!r} is not 1 within {_PURE_NORM_TOL}")
        return cls(n_sites=n, kind="pure", data=vec)

    @classmethod
    def mixed(cls, matrix: np.ndarray, *, validate: bool = True) -> "QuantumState":
        mat = np.ascontiguousarray(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("mixed state must be a square matrix")
        dim = mat.shape[0]
        if dim & (dim - 1) or dim < 2:
            raise ValueError("mixed state dimension must be 2**n")
        n = int(dim).bit_length() - 1
        if validate:
            if np.abs(mat - mat.conj().T).max() > _HERM_TOL:
                raise ValueError("density matrix is not Hermitian")
            tr = np.trace(mat).real
            if abs(tr - 1.0) > _TRACE_TOL:
                raise ValueError(f"density matrix trace {tr!r} is not 1")
            evals = np.linalg.eigvalsh(mat)
            if evals.min() < _EIG_FLOOR:
                raise ValueError(f"density matrix has eigenvalue {evals.min()!r} below {_EIG_FLOOR}")
        return cls(n_sites=n, kind="mixed", data=mat)

    @classmethod
    def maximally_mixed(cls, n_sites: int) -> "QuantumState":
        dim = 1 << n_sites
        return cls(n_sites=n_sites, kind="mixed", data=np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def density_matrix(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return self.data


def expectation(state: QuantumState, p: PauliString) -> float:
    """<P> by index gather: O(2**n) time, no observable matrix."""
    if p.n_sites != state.n_sites:
        raise ValueError("observable and state live on different lattices")
    xm, zm = p.index_masks()
    n_y = bin(p.x & p.z).count("1")
    idx = np.arange(state.dim)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & zm) & 1)
    # P|b> = i**nY * (-1)**par(b & zm) |b ^ xm>, so the trace needs only a
    # single shifted diagonal of rho.
    if state.kind == "pure":
        val = np.sum(signs * state.data[idx ^ xm].conj() * state.data)
    else:
        val = np.sum(signs * state.data[idx, idx ^ xm])
    val = val * (1j) ** (n_y % 4) * p.sign
    return float(val.real)


def matrix_expectation(mat: np.ndarray, p: PauliString) -> float:
    """Re Tr(mat P) for any Hermitian matrix, trace-1 or not; used for
    drive-weighted density-matrix accumulators."""
    dim = mat.shape[0]
    if mat.shape != (dim, dim) or dim != 1 << p.n_sites:
        raise ValueError("matrix dimension does not match the observable")
    xm, zm = p.index_masks()
    n_y = bin(p.x & p.z).count("1")
    idx = np.arange(dim)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & zm) & 1)
    val = np.sum(signs * mat[idx, idx ^ xm]) * (1j) ** (n_y % 4) * p.sign
    return float(val.real)


class ExpectationCache:
    """Memoizes unsigned-string expectations for one state."""

    def __init__(self, state: QuantumState):
        self.state = state
        self._table: dict[tuple[int, int], float] = {}

    def __call__(self, p: PauliString) -> float:
        got = self._table.get(p.key)
        if got is None:
            unsigned = PauliString(n_sites=p.n_sites, x=p.x, z=p.z, sign=1)
            got = expectation(self.state, unsigned)
            self._table[p.key] = got
        return got * p.sign


def pauli_sparse(p: PauliString) -> sp.csr_matrix:
    """Sparse matrix of a Pauli string: one nonzero per column."""
    dim = 1 << p.n_sites
    xm, zm = p.index_masks()
    n_y = bin(p.x & p.z).count("1")
    cols = np.arange(dim)
    rows = cols ^ xm
    data = (1.0 - 2.0 * (np.bitwise_count(cols & zm) & 1)).astype(complex)
    data *= (1j) ** (n_y % 4) * p.sign
    return sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))


def _pauli_sum(
    n_sites: int, coeffs: Sequence[float], terms: Sequence[PauliString]
) -> sp.csr_matrix:
    """Sparse sum(c_j P_j), built in one COO pass (each P_j contributes one
    nonzero per column)."""
    dim = 1 << n_sites
    cols = np.arange(dim)
    rows = np.empty(len(terms) * dim, dtype=np.int64)
    data = np.empty(len(terms) * dim, dtype=complex)
    for j, (c, p) in enumerate(zip(coeffs, terms)):
        xm, zm = p.index_masks()
        n_y = bin(p.x & p.z).count("1")
        block = slice(j * dim, (j + 1) * dim)
        rows[block] = cols ^ xm
        sgn = 1.0 - 2.0 * (np.bitwise_count(cols & zm) & 1)
        data[block] = (c * p.sign * (1j) ** (n_y % 4)) * sgn
    out = sp.coo_matrix((data, (rows, np.tile(cols, len(terms)))), shape=(dim, dim))
    return out.tocsr()


def static_hamiltonian(spec: HamiltonianSpec) -> sp.csr_matrix:
    """Sparse matrix of the static part (drive excluded)."""
    _check_cap(spec.n_sites, MAX_SITES_SPARSE, "sparse Hamiltonian")
    return _pauli_sum(spec.n_sites, spec.coeffs, spec.terms)


def drive_operator(spec: HamiltonianSpec) -> sp.csr_matrix:
    """Sparse matrix of the drive's spatial part V (no f(t) factor)."""
    if spec.drive is None:
        raise ValueError("spec has no drive")
    _check_cap(spec.n_sites, MAX_SITES_SPARSE, "sparse Hamiltonian")
    return _pauli_sum(spec.n_sites, spec.drive.coeffs, spec.drive.terms)


def hamiltonian_matrix(spec: HamiltonianSpec, t: Optional[float] = None) -> np.ndarray:
    """Dense H, or H(t) = H_static + f(t) V when the spec is driven and a
    time is given."""
    _check_cap(spec.n_sites, MAX_SITES_DENSE, "dense Hamiltonian")
    out = static_hamiltonian(spec).toarray()
    if spec.drive is not None and t is not None:
        out = out + spec.drive.value(t) * drive_operator(spec).toarray()
    return out


def ground_state(spec: HamiltonianSpec) -> tuple[QuantumState, float, bool]:
    """Lowest eigenvector of the static Hamiltonian.

    Returns (state, energy, degenerate_flag); the flag is set when the gap
    to the second eigenvalue is below 1e-8, in which case the returned
    vector is an arbitrary member of the ground space.
    """
    _check_cap(spec.n_sites, MAX_SITES_SPARSE, "ground state")
    h = static_hamiltonian(spec)
    dim = h.shape[0]
    if dim <= 1024:
        evals, evecs = np.linalg.eigh(h.toarray())
        e0, e1 = float(evals[0]), float(evals[1])
        vec = evecs[:, 0]
    else:
        v0 = np.random.default_rng(_ARPACK_SEED).standard_normal(dim)
        try:
            evals, evecs = spla.eigsh(h, k=2, which="SA", v0=v0)
        except spla.ArpackNoConvergence as exc:
            raise NumericalError(f"ground-state iteration did not converge: {exc}") from exc
        order = np.argsort(evals)
        e0, e1 = float(evals[order[0]]), float(evals[order[1]])
        vec = evecs[:, order[0]]
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    resid = np.linalg.norm(h @ vec - e0 * vec)
    if resid > 1e-8 * max(1.0, abs(e0)):
        raise NumericalError(f"ground-state residual {resid!r} too large")
    return QuantumState.pure(vec, validate=False), e0, (e1 - e0) < _GAP_FLOOR


def gibbs_state(spec: HamiltonianSpec, beta: float) -> QuantumState:
    """exp(-beta H) / Z for the static Hamiltonian, via a full dense
    spectrum. beta = 0 gives the maximally mixed state."""
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and >= 0, got {beta}")
    _check_cap(spec.n_sites, MAX_SITES_DENSE, "Gibbs state")
    evals, evecs = np.linalg.eigh(static_hamiltonian(spec).toarray())
    weights = np.exp(-beta * (evals - evals[0]))
    weights /= weights.sum()
    rho = (evecs * weights) @ evecs.conj().T
    rho = (rho + rho.conj().T) / 2.0
    return QuantumState.mixed(rho, validate=False)


class _EigenPropagator:
    """Exact static propagation through one dense eigendecomposition."""

    def __init__(self, spec: HamiltonianSpec):
        _check_cap(spec.n_sites, MAX_SITES_DENSE, "dense propagation")
        h = static_hamiltonian(spec).toarray()
        self.evals, self.evecs = np.linalg.eigh(h)

    def vector_at(self, vec0: np.ndarray, t: float) -> np.ndarray:
        amps = self.evecs.conj().T @ vec0
        return self.evecs @ (np.exp(-1j * self.evals * t) * amps)

    def matrix_to_eigenbasis(self, rho0: np.ndarray) -> np.ndarray:
        return self.evecs.conj().T @ rho0 @ self.evecs

    def matrix_at(self, r0_eig: np.ndarray, t: float) -> np.ndarray:
        phases = np.exp(-1j * self.evals * t)
        return self.evecs @ (np.outer(phases, phases.conj()) * r0_eig) @ self.evecs.conj().T

    def averaged_matrix(self, r0_eig: np.ndarray, t: float) -> np.ndarray:
        """Continuous average (1/t) int_0^t rho(t') dt' in closed form."""
        omega = self.evals[:, None] - self.evals[None, :]
        phase = omega * t
        small = np.abs(phase) < 1e-12
        safe = np.where(small, 1.0, phase)
        fac = np.where(small, 1.0, (1.0 - np.exp(-1j * safe)) / (1j * safe))
        return self.evecs @ (fac * r0_eig) @ self.evecs.conj().T


def _unitary_step(h: sp.csr_matrix, dt: float, vec: np.ndarray) -> np.ndarray:
    return spla.expm_multiply(-1j * dt * h, vec)


def evolve(
    state: QuantumState,
    spec: HamiltonianSpec,
    t: float,
    dt: Optional[float] = None,
) -> QuantumState:
    """Evolve to time t.

    Static specs use machine-exact propagation (eigendecomposition, or a
    Krylov exponential above the dense cap) and ignore dt. Driven specs
    step with the midpoint-exponential rule e^{-i dt H(t + dt/2)}, which
    is unitary at every step, so dt is required.
    """
    if t < 0 or not np.isfinite(t):
        raise ValueError(f"time must be finite and >= 0, got {t}")
    if t == 0:
        return state
    if spec.n_sites != state.n_sites:
        raise ValueError("state and Hamiltonian live on different lattices")
    if spec.drive is None:
        if state.kind == "pure":
            if spec.n_sites <= MAX_SITES_DENSE - 2:
                prop = _EigenPropagator(spec)
                vec = prop.vector_at(state.data, t)
            else:
                _check_cap(spec.n_sites, MAX_SITES_SPARSE, "propagation")
                vec = spla.expm_multiply(-1j * t * static_hamiltonian(spec), state.data)
            _require_unit_norm(vec)
            return QuantumState.pure(vec, validate=False)
        prop = _EigenPropagator(spec)
        r0 = prop.matrix_to_eigenbasis(state.data)
        return QuantumState.mixed(prop.matrix_at(r0, t), validate=False)
    if dt is None or dt <= 0:
        raise ValueError("driven evolution needs a positive step dt")
    h_static = static_hamiltonian(spec)
    h_drive = drive_operator(spec)
    if state.kind == "pure":
        _check_cap(spec.n_sites, MAX_SITES_SPARSE, "driven propagation")
        vec = state.data.copy()
        for t0, step in _step_schedule(t, dt):
            h_mid = h_static + spec.drive.value(t0 + step / 2.0) * h_drive
            vec = _unitary_step(h_mid, step, vec)
        _require_unit_norm(vec)
        return QuantumState.pure(vec, validate=False)
    _check_cap(spec.n_sites, MAX_SITES_DENSE, "driven propagation")
    rho = state.data.copy()
    for t0, step in _step_schedule(t, dt):
        h_mid = h_static + spec.drive.value(t0 + step / 2.0) * h_drive
        left = _unitary_step(h_mid, step, rho)
        rho = _unitary_step(h_mid, step, left.conj().T).conj().T
    return QuantumState.mixed(rho, validate=False)


def _require_unit_norm(vec: np.ndarray) -> None:
    nrm = np.linalg.norm(vec)
    if abs(nrm - 1.0) > _PURE_NORM_TOL:
        raise NumericalError(f"propagation drifted off the unit sphere: norm {nrm!r}")


def _step_schedule(t: float, dt: float) -> Iterator[tuple[float, float]]:
    """(start, length) pairs of midpoint steps covering [0, t]."""
    n_full = int(np.floor(t / dt + 1e-9))
    for j in range(n_full):
        yield j * dt, dt
    rem = t - n_full * dt
    if rem > 1e-12 * max(1.0, t):
        yield n_full * dt, rem


@dataclass(frozen=True, eq=False)
class TimeSeriesRecord:
    """Sampled expectation values along one trajectory, plus drive samples
    when the underlying spec is driven."""

    n_sites: int
    times: np.ndarray
    labels: tuple[str, ...]
    values: np.ndarray
    drive_samples: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.labels), len(self.times)):
            raise ValueError("values must be shaped (n_observables, n_times)")
        if self.times.ndim != 1 or len(self.times) == 0:
            raise ValueError("times must be a non-empty vector")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.drive_samples is not None and self.drive_samples.shape != self.times.shape:
            raise ValueError("drive samples must align with times")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    def row(self, label: str) -> np.ndarray:
        try:
            i = self.labels.index(label)
        except ValueError:
            raise KeyError(f"observable {label} not recorded") from None
        return self.values[i]

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("# schema=1\n")
        buf.write("# kind=time-series\n")
        buf.write(f"# n_sites={self.n_sites}\n")
        buf.write(f"# driven={int(self.drive_samples is not None)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["time", "f_t", *self.labels])
        f_col = self.drive_samples if self.drive_samples is not None else np.zeros_like(self.times)
        for j, t in enumerate(self.times):
            writer.writerow([repr(float(t)), repr(float(f_col[j])),
                             *(repr(float(v)) for v in self.values[:, j])])
        return buf.getvalue()

    @classmethod
    def from_csv_text(cls, text: str) -> "TimeSeriesRecord":
        meta, header, rows = _parse_csv_block(text)
        if meta.get("schema") != "1":
            raise ValueError(f"unsupported schema {meta.get('schema')!r}")
        if meta.get("kind") != "time-series":
            raise ValueError("not a time-series file")
        if header[:2] != ["time", "f_t"]:
            raise ValueError("time-series header must start with time,f_t")
        labels = tuple(header[2:])
        arr = np.array(rows, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != len(header):
            raise ValueError("malformed time-series rows")
        driven = meta.get("driven") == "1"
        return cls(
            n_sites=int(meta["n_sites"]),
            times=arr[:, 0],
            labels=labels,
            values=arr[:, 2:].T.copy(),
            drive_samples=arr[:, 1].copy() if driven else None,
        )


def _parse_csv_block(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Split '# key=value' metadata lines from a CSV body."""
    meta: dict[str, str] = {}
    body_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            stripped = line.lstrip("#").strip()
            if "=" in stripped:
                key, _, val = stripped.partition("=")
                meta[key.strip()] = val.strip()
        elif line.strip():
            body_lines.append(line)
    if not body_lines:
        raise ValueError("no CSV body found")
    reader = csv.reader(body_lines)
    header = next(reader)
    return meta, header, [row for row in reader]


def _sample_grid(t_max: float, dt: float) -> np.ndarray:
    if dt <= 0 or t_max <= 0:
        raise ValueError("t_max and dt must be positive")
    n_steps = round(t_max / dt)
    if abs(n_steps * dt - t_max) > 1e-6 * dt or n_steps < 1:
        raise ValueError(f"t_max {t_max} is not a multiple of dt {dt}")
    return np.arange(n_steps + 1) * dt


def record_time_series(
    initial: QuantumState,
    spec: HamiltonianSpec,
    observables: Sequence[PauliString],
    t_max: float,
    dt: float,
) -> TimeSeriesRecord:
    """Sample <P>(t) for each observable on the uniform grid 0, dt, ...,
    t_max (both endpoints included)."""
    times = _sample_grid(t_max, dt)
    labels = tuple(p.label for p in observables)
    values = np.empty((len(observables), len(times)))
    drive_vals = None
    if spec.drive is not None:
        drive_vals = np.array([spec.drive.profile(t) for t in times])
    for j, state in enumerate(_states_on_grid(initial, spec, times, dt)):
        for i, p in enumerate(observables):
            values[i, j] = expectation(state, p)
    return TimeSeriesRecord(
        n_sites=spec.n_sites,
        times=times,
        labels=labels,
        values=values,
        drive_samples=drive_vals,
    )


def _states_on_grid(
    initial: QuantumState,
    spec: HamiltonianSpec,
    times: np.ndarray,
    dt: float,
) -> Iterator[QuantumState]:
    """States at the given grid times. Static evolution is computed from
    t=0 each time (no error accumulation); driven evolution steps forward."""
    if spec.drive is None and spec.n_sites <= MAX_SITES_DENSE - 2 and initial.kind == "pure":
        prop = _EigenPropagator(spec)
        for t in times:
            yield QuantumState.pure(prop.vector_at(initial.data, t), validate=False)
        return
    if spec.drive is None:
        for t in times:
            yield evolve(initial, spec, t, dt)
        return
    _check_cap(spec.n_sites, MAX_SITES_SPARSE, "driven propagation")
    if initial.kind != "pure":
        raise ValueError("driven sampling starts from a pure state")
    h_static = static_hamiltonian(spec)
    h_drive = drive_operator(spec)
    vec = initial.data.copy()
    prev = 0.0
    for t in times:
        for t0, step in _step_schedule(t - prev, dt):
            h_mid = h_static + spec.drive.value(prev + t0 + step / 2.0) * h_drive
            vec = _unitary_step(h_mid, step, vec)
        prev = t
        yield QuantumState.pure(vec / np.linalg.norm(vec), validate=False)


def averaged_states(
    initial: QuantumState,
    spec: HamiltonianSpec,
    checkpoints: Sequence[float],
    dt: float,
) -> Iterator[tuple[float, QuantumState, Optional[np.ndarray]]]:
    """Running grid means up to each checkpoint.

    Yields (t, rho_avg, rho_drive_avg) where rho_avg is the plain mean of
    the density matrix over the uniform grid 0, dt, ..., t (endpoints
    included) and rho_drive_avg the mean weighted by f(t') (None for
    static specs). Checkpoints must be increasing multiples of dt.
    """
    _check_cap(initial.n_sites, MAX_SITES_DENSE, "density-matrix averaging")
    checks = list(checkpoints)
    if not checks or any(c <= 0 for c in checks) or any(np.diff(checks) <= 0):
        raise ValueError("checkpoints must be positive and increasing")
    steps = [round(c / dt) for c in checks]
    for c, s in zip(checks, steps):
        if abs(s * dt - c) > 1e-6 * dt:
            raise ValueError(f"checkpoint {c} is not a multiple of dt {dt}")
    driven = spec.drive is not None
    grid = np.arange(steps[-1] + 1) * dt
    acc = np.zeros((initial.dim, initial.dim), dtype=complex)
    acc_f = np.zeros_like(acc) if driven else None
    targets = {s: c for s, c in zip(steps, checks)}
    profile = None
    if driven:
        profile = np.array([spec.drive.profile(t) for t in grid])

    def emit(j):
        mean = acc / (j + 1)
        mean = (mean + mean.conj().T) / 2.0
        mean_f = None
        if driven:
            mean_f = acc_f / (j + 1)
            mean_f = (mean_f + mean_f.conj().T) / 2.0
        return targets[j], QuantumState.mixed(mean, validate=False), mean_f

    if initial.kind == "pure":
        # Unitary evolution keeps the state pure, so the running sums of
        # outer products can be flushed block-wise through matrix products
        # instead of one rank-1 update per step.
        width = min(_AVG_BLOCK, len(grid))
        buf = np.empty((width, initial.dim), dtype=complex)
        start = 0
        fill = 0
        for j, state in enumerate(_states_on_grid(initial, spec, grid, dt)):
            buf[fill] = state.data
            fill += 1
            if fill == width or j in targets:
                chunk = buf[:fill]
                acc += chunk.T @ chunk.conj()
                if driven:
                    acc_f += (profile[start:start + fill, None] * chunk).T @ chunk.conj()
                start += fill
                fill = 0
            if j in targets:
                yield emit(j)
        return

    for j, state in enumerate(_states_on_grid(initial, spec, grid, dt)):
        rho = state.density_matrix()
        acc += rho
        if driven:
            acc_f += profile[j] * rho
        if j in targets:
            yield emit(j)


def time_averaged_state(
    initial: QuantumState,
    spec: HamiltonianSpec,
    t: float,
    dt: Optional[float] = None,
) -> QuantumState:
    """Time average of the trajectory up to t for a static spec.

    With dt=None the continuous average (1/t) int_0^t rho(t') dt' is
    evaluated in closed form in the eigenbasis; with a positive dt the
    plain mean over the uniform grid (endpoints included) is returned.
    """
    if spec.drive is not None:
        raise ValueError("time_averaged_state handles static specs only")
    if t <= 0 or not np.isfinite(t):
        raise ValueError(f"averaging time must be positive, got {t}")
    if dt is not None:
        for _, rho_avg, _ in averaged_states(initial, spec, [t], dt):
            return rho_avg
    prop = _EigenPropagator(spec)
    r0 = prop.matrix_to_eigenbasis(initial.density_matrix())
    avg = prop.averaged_matrix(r0, t)
    avg = (avg + avg.conj().T) / 2.0
    return QuantumState.mixed(avg, validate=False)


def steady_state_defect(state: QuantumState, spec: HamiltonianSpec) -> float:
    """Trace norm of [rho, H] for the static Hamiltonian; zero exactly when
    rho is stationary."""
    _check_cap(state.n_sites, MAX_SITES_DENSE, "steady-state defect")
    h = static_hamiltonian(spec).toarray()
    rho = state.density_matrix()
    comm = rho @ h - h @ rho
    return float(np.linalg.svd(comm, compute_uv=False).sum())
