"""Constraint-matrix construction and null-space recovery.

The central object is the N x M matrix K with entries <i[A_n, S_m]>: each
row is the stationarity constraint of one observable A_n, each column one
candidate Hamiltonian term S_m. On an exact steady state K annihilates the
true coefficient vector, so the lowest right-singular vector recovers it.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import ResourceLimitError
from .pauli import OperatorBasis, PauliString, commutator_observable
from .states import (
    ExpectationCache,
    QuantumState,
    TimeSeriesRecord,
    _parse_csv_block,
    matrix_expectation,
)

# lambda levels closer than this (relative to the top) count as one
# degenerate level; also the floor under 1/lambda in the error estimate.
_DEGENERACY_FACTOR = 1e3 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class ConstraintMatrix:
    """K with row/column labels and provenance metadata."""

    entries: np.ndarray
    constraint_labels: tuple[str, ...]
    term_labels: tuple[str, ...]
    extended: bool = False
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        n, m = self.entries.shape
        if n < 1:
            raise ValueError("constraint matrix needs at least one row")
        width = 2 * len(self.term_labels) if self.extended else len(self.term_labels)
        if m != width or m < 2:
            raise ValueError(f"entry width {m} does not match {len(self.term_labels)} terms"
                             f" (extended={self.extended})")
        if len(self.constraint_labels) != n:
            raise ValueError("row label count does not match rows")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("constraint matrix entries must be finite")

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    def prefix(self, n_rows: int) -> "ConstraintMatrix":
        """First n_rows constraints, labels preserved."""
        if not (1 <= n_rows <= self.n_rows):
            raise ValueError(f"prefix length {n_rows} out of range")
        return ConstraintMatrix(
            entries=self.entries[:n_rows],
            constraint_labels=self.constraint_labels[:n_rows],
            term_labels=self.term_labels,
            extended=self.extended,
            metadata=dict(self.metadata),
        )

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("# schema=1\n")
        buf.write("# kind=constraint-matrix\n")
        buf.write(f"# extended={int(self.extended)}\n")
        for key in sorted(self.metadata):
            buf.write(f"# {key}={self.metadata[key]}\n")
        writer = csv.writer(buf, lineterminator="\n")
        header = list(self.term_labels)
        if self.extended:
            header += [lab + ":drive" for lab in self.term_labels]
        writer.writerow(header)
        for row in self.entries:
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv_text(cls, text: str) -> "ConstraintMatrix":
        meta, header, rows = _parse_csv_block(text)
        if meta and meta.get("schema") not in (None, "1"):
            raise ValueError(f"unsupported schema {meta.get('schema')!r}")
        extended = meta.get("extended") == "1"
        if extended:
            half = len(header) // 2
            if len(header) % 2 or [h + ":drive" for h in header[:half]] != header[half:]:
                raise ValueError("extended header must repeat terms with a :drive suffix")
            term_labels = tuple(header[:half])
        else:
            term_labels = tuple(header)
        _require_pauli_labels(term_labels)
        try:
            entries = np.array(rows, dtype=float)
        except ValueError as exc:
            raise ValueError(f"non-numeric constraint entry: {exc}") from exc
        if entries.ndim != 2 or entries.shape[1] != len(header):
            raise ValueError("constraint rows do not match the header width")
        labels = tuple(f"row{i}" for i in range(entries.shape[0]))
        keep = {k: v for k, v in meta.items() if k not in ("schema", "kind", "extended")}
        return cls(entries=entries, constraint_labels=labels, term_labels=term_labels,
                   extended=extended, metadata=keep)


def _require_pauli_labels(labels: Sequence[str]) -> None:
    if not labels:
        raise ValueError("no term labels")
    length = len(labels[0])
    for lab in labels:
        if len(lab) != length or any(ch not in "IXYZ" for ch in lab):
            raise ValueError(f"term label {lab!r} is not a Pauli letter-string")


def commutator_table(
    constraints: OperatorBasis, terms: OperatorBasis
) -> tuple[tuple[PauliString, ...], dict[tuple[int, int], tuple[float, int]]]:
    """Distinct unsigned commutator strings and the map
    (row, col) -> (coefficient, string index); commuting pairs are absent."""
    strings: list[PauliString] = []
    index: dict[tuple[int, int], int] = {}
    table: dict[tuple[int, int], tuple[float, int]] = {}
    for n, a in enumerate(constraints):
        for m, s in enumerate(terms):
            got = commutator_observable(a, s)
            if got is None:
                continue
            coeff, p = got
            at = index.get(p.key)
            if at is None:
                at = len(strings)
                index[p.key] = at
                strings.append(p)
            table[(n, m)] = (coeff, at)
    return tuple(strings), table


def _block_from_values(
    constraints: OperatorBasis,
    terms: OperatorBasis,
    values: np.ndarray,
    table: dict[tuple[int, int], tuple[float, int]],
) -> np.ndarray:
    out = np.zeros((len(constraints), len(terms)))
    for (n, m), (coeff, at) in table.items():
        out[n, m] = coeff * values[at]
    return out


def _check_alignment(constraints: OperatorBasis, terms: OperatorBasis, n_sites: int) -> None:
    if constraints.region.lattice.n_sites != n_sites or terms.region.lattice.n_sites != n_sites:
        raise ValueError("bases and source live on different lattices")


def build_constraint_matrix(
    state: QuantumState, constraints: OperatorBasis, terms: OperatorBasis
) -> ConstraintMatrix:
    """K_{n,m} = <i[A_n, S_m]> on one state; commuting pairs are exact zeros
    and never touch the state."""
    _check_alignment(constraints, terms, state.n_sites)
    cache = ExpectationCache(state)
    strings, table = commutator_table(constraints, terms)
    values = np.array([cache(p) for p in strings]) if strings else np.empty(0)
    entries = _block_from_values(constraints, terms, values, table)
    return ConstraintMatrix(
        entries=entries,
        constraint_labels=constraints.labels(),
        term_labels=terms.labels(),
        extended=False,
        metadata={"source": f"{state.kind}-state", "n_sites": state.n_sites},
    )


def build_extended_constraint_matrix(
    record: TimeSeriesRecord, constraints: OperatorBasis, terms: OperatorBasis
) -> ConstraintMatrix:
    """N x 2M matrix from a sampled trajectory: the left block holds plain
    time averages of <i[A_n, S_m]>, the right block averages weighted by the
    drive samples f(t'). A record without drive samples gets a zero right
    block."""
    _check_alignment(constraints, terms, record.n_sites)
    strings, table = commutator_table(constraints, terms)
    rows = {}
    for p in strings:
        rows[p.key] = record.row(p.label)
    n_t = len(record.times)
    plain = np.array([rows[p.key].mean() for p in strings]) if strings else np.empty(0)
    if record.drive_samples is not None:
        f = record.drive_samples
        weighted = np.array([(rows[p.key] * f).mean() for p in strings]) if strings else np.empty(0)
    else:
        weighted = np.zeros(len(strings))
    left = _block_from_values(constraints, terms, plain, table)
    right = _block_from_values(constraints, terms, weighted, table)
    return ConstraintMatrix(
        entries=np.hstack([left, right]),
        constraint_labels=constraints.labels(),
        term_labels=terms.labels(),
        extended=True,
        metadata={"source": "time-series", "n_sites": record.n_sites,
                  "t_max": float(record.times[-1]), "n_samples": n_t},
    )


def build_extended_from_averages(
    rho_avg: QuantumState,
    rho_drive_avg: Optional[np.ndarray],
    constraints: OperatorBasis,
    terms: OperatorBasis,
    metadata: Optional[dict] = None,
) -> ConstraintMatrix:
    """Extended matrix from accumulated density-matrix averages; by
    linearity this equals the record-based construction on the same grid."""
    _check_alignment(constraints, terms, rho_avg.n_sites)
    strings, table = commutator_table(constraints, terms)
    cache = ExpectationCache(rho_avg)
    plain = np.array([cache(p) for p in strings]) if strings else np.empty(0)
    if rho_drive_avg is not None:
        weighted = np.array([matrix_expectation(rho_drive_avg, p) for p in strings]) \
            if strings else np.empty(0)
    else:
        weighted = np.zeros(len(strings))
    left = _block_from_values(constraints, terms, plain, table)
    right = _block_from_values(constraints, terms, weighted, table)
    return ConstraintMatrix(
        entries=np.hstack([left, right]),
        constraint_labels=constraints.labels(),
        term_labels=terms.labels(),
        extended=True,
        metadata=dict(metadata or {}),
    )


def stack(parts: Sequence[ConstraintMatrix]) -> ConstraintMatrix:
    """Vertical concatenation of constraint blocks over the same terms."""
    if not parts:
        raise ValueError("nothing to stack")
    first = parts[0]
    for p in parts[1:]:
        if p.term_labels != first.term_labels or p.extended != first.extended:
            raise ValueError("stacked parts must share terms and extended flag")
    return ConstraintMatrix(
        entries=np.vstack([p.entries for p in parts]),
        constraint_labels=tuple(lab for p in parts for lab in p.constraint_labels),
        term_labels=first.term_labels,
        extended=first.extended,
        metadata={"stacked": [dict(p.metadata) for p in parts]},
    )


def inject_noise(k: ConstraintMatrix, epsilon: float, seed: int) -> ConstraintMatrix:
    """Add i.i.d. Normal(0, epsilon^2) to every entry, structural zeros
    included; an experimenter measuring a vanishing commutator still pays
    shot noise."""
    if epsilon < 0 or not np.isfinite(epsilon):
        raise ValueError(f"epsilon must be finite and >= 0, got {epsilon}")
    meta = dict(k.metadata)
    meta.update({"noise_epsilon": epsilon, "noise_seed": seed})
    if epsilon == 0.0:
        return replace(k, metadata=meta)
    noise = np.random.default_rng(seed).standard_normal(k.entries.shape)
    return replace(k, entries=k.entries + epsilon * noise, metadata=meta)


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    """Output of the null-space step: the recovered unit coefficient vector,
    the full squared-singular-value spectrum (ascending, zero-padded when
    N < M), and the kernel-degeneracy diagnosis."""

    coeffs: np.ndarray
    lambdas: np.ndarray
    degenerate_kernel_flag: bool
    kernel_basis: Optional[np.ndarray] = field(repr=False, default=None)

    @property
    def lambda0(self) -> float:
        return float(self.lambdas[0])

    @property
    def lambda1(self) -> float:
        return float(self.lambdas[1]) if len(self.lambdas) > 1 else float("nan")

    @property
    def gap(self) -> float:
        return self.lambda1 - self.lambda0


def recover(k: ConstraintMatrix) -> RecoveryResult:
    """Lowest right-singular vector of K plus the lambda spectrum.

    The sign is canonicalized so the largest-magnitude entry is positive.
    When several singular values sit at the bottom level (within
    1e3 * machine epsilon of each other relative to lambda_max) the
    degenerate flag is set and `kernel_basis` holds all vectors at that
    level; the returned coefficient vector is then an arbitrary member.
    """
    entries = k.entries
    n, m = entries.shape
    _, svals, vt = np.linalg.svd(entries, full_matrices=True)
    lambdas = np.zeros(m)
    lambdas[m - len(svals):] = svals[::-1] ** 2
    lam_max = lambdas[-1]
    floor = _DEGENERACY_FACTOR * lam_max
    degenerate = bool(lambdas[1] - lambdas[0] <= floor)
    coeffs = vt[m - 1].copy()
    peak = int(np.argmax(np.abs(coeffs)))
    if coeffs[peak] < 0:
        coeffs = -coeffs
    n_kernel = int(np.sum(lambdas - lambdas[0] <= floor))
    kernel = vt[m - n_kernel:][::-1].copy()
    return RecoveryResult(
        coeffs=coeffs,
        lambdas=lambdas,
        degenerate_kernel_flag=degenerate,
        kernel_basis=kernel,
    )


def reconstruction_error(c_true: np.ndarray, c_rec: np.ndarray) -> float:
    """Sign-blind distance between unit-normalized coefficient vectors,
    equal to 2|sin(theta/2)| for the angle theta between the lines."""
    a = np.asarray(c_true, dtype=float)
    b = np.asarray(c_rec, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("coefficient vectors must be 1-D and equal length")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("coefficient vectors must be nonzero")
    a = a / na
    b = b / nb
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


@dataclass(frozen=True)
class ErrorEstimate:
    value: float
    degenerate: bool


def error_estimate(lambdas: np.ndarray, epsilon: float) -> ErrorEstimate:
    """First-order prediction of the reconstruction error under i.i.d.
    Gaussian entry noise of scale epsilon: eps * sqrt(sum_{i>=1} 1/lambda_i).

    Indices beyond 0 whose lambda sits below the degeneracy floor make the
    estimate blow up; that condition is reported in the flag (and the value
    may be inf)."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or len(lam) < 2:
        raise ValueError("need at least two eigenvalues")
    if np.any(np.diff(lam) < 0):
        raise ValueError("lambdas must be sorted ascending")
    if epsilon < 0 or not np.isfinite(epsilon):
        raise ValueError(f"epsilon must be finite and >= 0, got {epsilon}")
    tail = lam[1:]
    floor = _DEGENERACY_FACTOR * lam[-1]
    degenerate = bool(np.any(tail <= floor))
    if epsilon == 0.0:
        return ErrorEstimate(value=0.0, degenerate=degenerate)
    with np.errstate(divide="ignore"):
        inv = np.where(tail > 0, 1.0 / np.where(tail > 0, tail, 1.0), np.inf)
    return ErrorEstimate(value=float(epsilon * np.sqrt(inv.sum())), degenerate=degenerate)


def full_system_correlation_matrix(state: QuantumState, terms: OperatorBasis) -> np.ndarray:
    """M_ij = 2^n Tr([S_i, rho]^dag [S_j, rho]) from dense matrices.

    Over a complete operator-norm-1 constraint basis this equals K^T K,
    which is what makes it a useful independent oracle; the dense route is
    capped at 6 sites."""
    if state.n_sites > 6:
        raise ResourceLimitError("dense correlation matrix capped at 6 sites")
    _check_alignment(terms, terms, state.n_sites)
    rho = state.density_matrix()
    comms = []
    for s in terms:
        mat = s.to_matrix()
        comms.append(mat @ rho - rho @ mat)
    dim = 2 ** state.n_sites
    out = np.empty((len(comms), len(comms)))
    for i, ci in enumerate(comms):
        for j, cj in enumerate(comms):
            out[i, j] = (dim * np.sum(ci.conj() * cj)).real
    out = (out + out.T) / 2.0
    return out
