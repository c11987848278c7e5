"""Model families of local spin-chain Hamiltonians and their term bases."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .lattice import Lattice, Region
from .pauli import OperatorBasis, PauliString


class ModelFamily(enum.Enum):
    GENERIC_2LOCAL_CHAIN = "generic-2-local-chain"
    XY_CHAIN = "xy-chain"

    @classmethod
    def from_name(cls, name: str) -> "ModelFamily":
        for fam in cls:
            if fam.value == name:
                return fam
        raise ValueError(f"unknown model family {name!r}; choose from "
                         + ", ".join(f.value for f in cls))


def _generic_terms(lattice: Lattice) -> list[PauliString]:
    """Every 1- and 2-site term of a generic nearest-neighbor chain:
    X, Y, Z on each site, then all nine letter pairs on each bond."""
    n = lattice.n_sites
    out = []
    for i in range(n):
        for ch in "XYZ":
            out.append(PauliString.from_letters(n, {i: ch}))
    for (i, j) in lattice.bonds:
        for a in "XYZ":
            for b in "XYZ":
                out.append(PauliString.from_letters(n, {i: a, j: b}))
    return out


def _xy_terms(lattice: Lattice) -> list[PauliString]:
    """Terms of the transverse-field XY chain: Z on each site, XX and YY
    on each bond."""
    n = lattice.n_sites
    out = []
    for i in range(n):
        out.append(PauliString.from_letters(n, {i: "Z"}))
    for (i, j) in lattice.bonds:
        out.append(PauliString.from_letters(n, {i: "X", j: "X"}))
        out.append(PauliString.from_letters(n, {i: "Y", j: "Y"}))
    return out


_TERM_BUILDERS = {
    ModelFamily.GENERIC_2LOCAL_CHAIN: _generic_terms,
    ModelFamily.XY_CHAIN: _xy_terms,
}


def model_terms(model: ModelFamily, lattice: Lattice) -> OperatorBasis:
    """Full ordered term list of the model over the whole lattice.
    Coefficient vectors are always aligned with this order."""
    elements = tuple(_TERM_BUILDERS[model](lattice))
    return OperatorBasis(
        elements=elements,
        region=lattice.full_region(),
        locality_k=2,
        ordering_tag="support-size-ascending",
    )


def term_basis_for_model(model: ModelFamily, lattice: Lattice, region: Region) -> OperatorBasis:
    """Model terms whose support intersects `region`, in model order.

    This is the candidate-term list for recovery over a window: it keeps
    boundary terms that stick out of the region by one site.
    """
    picked = [p for p in _TERM_BUILDERS[model](lattice) if set(p.support) & region.site_set]
    if not picked:
        raise ValueError("no model terms touch the region")
    envelope = lattice.region(sorted(set().union(*(p.support for p in picked))))
    return OperatorBasis(
        elements=tuple(picked),
        region=envelope,
        locality_k=2,
        ordering_tag="support-size-ascending",
    )


def interior(lattice: Lattice, region: Region, model: ModelFamily) -> Region:
    """Sites of `region` seen only by model terms fully inside `region`.

    A constraint supported here commutes with every Hamiltonian term that
    reaches outside the region, which is what makes local recovery exact.
    """
    inside = region.site_set
    good = set(region.sites)
    for p in _TERM_BUILDERS[model](lattice):
        supp = set(p.support)
        if not supp <= inside:
            good -= supp
    if not good:
        raise ValueError("region has empty interior for this model")
    return lattice.region(sorted(good))


def boundary_sites(lattice: Lattice, region: Region, model: ModelFamily) -> tuple[int, ...]:
    """Complement of the interior within the region."""
    inner = interior(lattice, region, model).site_set
    return tuple(s for s in region.sites if s not in inner)


@dataclass(frozen=True, eq=False)
class Drive:
    """Periodic drive f(t) * V with f(t) = amplitude * cos(omega * t) and
    V expanded over a model term basis."""

    amplitude: float
    omega: float
    terms: OperatorBasis = field(repr=False)
    coeffs: np.ndarray = field(repr=False)
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.terms):
            raise ValueError("drive coefficient count does not match term count")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("drive coefficients must be finite")
        if self.omega == 0.0:
            raise ValueError("drive frequency must be nonzero")

    def profile(self, t: float) -> float:
        """The known modulation f(t), normalized to f(0) = 1. The amplitude
        multiplies the operator, not f, so recovery targets amplitude * V."""
        return float(np.cos(self.omega * t))

    def value(self, t: float) -> float:
        """Physical drive strength amplitude * f(t) entering H(t)."""
        return self.amplitude * self.profile(t)


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """A concrete Hamiltonian: model family, term basis and coefficients,
    plus an optional periodic drive."""

    model: ModelFamily
    lattice: Lattice
    terms: OperatorBasis = field(repr=False)
    coeffs: np.ndarray = field(repr=False)
    seed: Optional[int] = None
    drive: Optional[Drive] = None

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.terms):
            raise ValueError("coefficient count does not match term count")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("coefficients must be finite")

    @property
    def n_sites(self) -> int:
        return self.lattice.n_sites

    def coefficients_for(self, basis: OperatorBasis) -> np.ndarray:
        """Coefficient vector aligned with `basis`, zero for any basis
            element that is not a term of this Hamiltonian."""
        lookup = {p.key: self.coeffs[i] for i, p in enumerate(self.terms)}
        return np.array([lookup.get(p.key, 0.0) for p in basis], dtype=float)


def sample_generic_chain(n_sites: int, seed: int) -> HamiltonianSpec:
    """Random instance of the generic 2-local chain: every coefficient is
    an independent standard normal draw, in term order."""
    lattice = Lattice.chain(n_sites)
    terms = model_terms(ModelFamily.GENERIC_2LOCAL_CHAIN, lattice)
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(len(terms))
    return HamiltonianSpec(
        model=ModelFamily.GENERIC_2LOCAL_CHAIN,
        lattice=lattice,
        terms=terms,
        coeffs=coeffs,
        seed=seed,
    )


def sample_xy_chain(n_sites: int, seed: int) -> HamiltonianSpec:
    """Random transverse-field XY chain

        H = 1/2 sum_l [2 g_l Z_l + (1 + gamma_l) X_l X_{l+1}
                       + (1 - gamma_l) Y_l Y_{l+1}]

    with g and gamma independent standard normals (g drawn first)."""
    lattice = Lattice.chain(n_sites)
    terms = model_terms(ModelFamily.XY_CHAIN, lattice)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(n_sites)
    gamma = rng.standard_normal(max(n_sites - 1, 0))
    coeffs = np.empty(len(terms))
    coeffs[:n_sites] = g
    coeffs[n_sites::2] = (1.0 + gamma) / 2.0
    coeffs[n_sites + 1 :: 2] = (1.0 - gamma) / 2.0
    return HamiltonianSpec(
        model=ModelFamily.XY_CHAIN,
        lattice=lattice,
        terms=terms,
        coeffs=coeffs,
        seed=seed,
    )


def attach_generic_drive(
    spec: HamiltonianSpec, amplitude: float, omega: float, seed: int
) -> HamiltonianSpec:
    """Return a copy of `spec` driven by f(t) * V, where V is a fresh
    generic-chain sample on the same lattice."""
    sample = sample_generic_chain(spec.n_sites, seed)
    drive = Drive(
        amplitude=amplitude,
        omega=omega,
        terms=sample.terms,
        coeffs=sample.coeffs,
        seed=seed,
    )
    return HamiltonianSpec(
        model=spec.model,
        lattice=spec.lattice,
        terms=spec.terms,
        coeffs=spec.coeffs,
        seed=spec.seed,
        drive=drive,
    )


def spec_to_dict(spec: HamiltonianSpec) -> dict:
    """JSON-ready dictionary; floats survive a round trip bit-exactly."""
    out = {
        "model": spec.model.value,
        "n_sites": spec.n_sites,
        "term_labels": list(spec.terms.labels()),
        "coeffs": [float(c) for c in spec.coeffs],
        "seed": spec.seed,
    }
    if spec.drive is not None:
        out["drive"] = {
            "amplitude": float(spec.drive.amplitude),
            "omega": float(spec.drive.omega),
            "term_labels": list(spec.drive.terms.labels()),
            "coeffs": [float(c) for c in spec.drive.coeffs],
            "seed": spec.drive.seed,
        }
    return out


def spec_from_dict(data: dict) -> HamiltonianSpec:
    model = ModelFamily.from_name(data["model"])
    lattice = Lattice.chain(int(data["n_sites"]))
    terms = model_terms(model, lattice)
    if list(terms.labels()) != list(data["term_labels"]):
        raise ValueError("term labels do not match the model's term order")
    drive = None
    if data.get("drive") is not None:
        d = data["drive"]
        drive_terms = model_terms(ModelFamily.GENERIC_2LOCAL_CHAIN, lattice)
        if list(drive_terms.labels()) != list(d["term_labels"]):
            raise ValueError("drive term labels do not match the generic term order")
        drive = Drive(
            amplitude=float(d["amplitude"]),
            omega=float(d["omega"]),
            terms=drive_terms,
            coeffs=np.array(d["coeffs"], dtype=float),
            seed=d.get("seed"),
        )
    return HamiltonianSpec(
        model=model,
        lattice=lattice,
        terms=terms,
        coeffs=np.array(data["coeffs"], dtype=float),
        seed=data.get("seed"),
        drive=drive,
    )


def spec_to_json(spec: HamiltonianSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2)


def spec_from_json(text: str) -> HamiltonianSpec:
    return spec_from_dict(json.loads(text))
