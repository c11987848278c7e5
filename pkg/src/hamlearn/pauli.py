"""Signed multi-qubit Pauli strings with symplectic (bitmask) arithmetic.

A string is stored as two site-indexed bitmasks plus a sign in {+1, -1}:
bit j of `x` set means site j carries an X component, bit j of `z` a Z
component, both set means Y. Products, commutation checks and commutators
are O(1) integer operations, no matrices involved.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional

import numpy as np

from .lattice import Lattice, Region

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)

_SINGLE_SITE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def _bit_count(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """An n-site Pauli string with an overall real sign."""

    n_sites: int
    x: int
    z: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        full = (1 << self.n_sites) - 1
        if not (0 <= self.x <= full and 0 <= self.z <= full):
            raise ValueError("x/z masks have bits outside the lattice")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @classmethod
    def identity(cls, n_sites: int) -> "PauliString":
        return cls(n_sites=n_sites, x=0, z=0, sign=1)

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliString":
        """Build from a letter string like "XIZY", site 0 leftmost."""
        x = z = 0
        for j, ch in enumerate(label):
            if ch not in _LETTER_BITS:
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}")
            xb, zb = _LETTER_BITS[ch]
            x |= xb << j
            z |= zb << j
        return cls(n_sites=len(label), x=x, z=z, sign=sign)

    @classmethod
    def from_letters(cls, n_sites: int, letters: Mapping[int, str], sign: int = 1) -> "PauliString":
        """Build from a {site: letter} map, identity elsewhere."""
        x = z = 0
        for j, ch in letters.items():
            if not (0 <= j < n_sites):
                raise ValueError(f"site {j} outside lattice of {n_sites} sites")
            xb, zb = _LETTER_BITS[ch]
            if xb == 0 and zb == 0:
                continue
            x |= xb << j
            z |= zb << j
        return cls(n_sites=n_sites, x=x, z=z, sign=sign)

    @property
    def label(self) -> str:
        """Letter string, site 0 leftmost, sign not included."""
        out = []
        for j in range(self.n_sites):
            out.append(_BITS_LETTER[((self.x >> j) & 1, (self.z >> j) & 1)])
        return "".join(out)

    @property
    def key(self) -> tuple[int, int]:
        """Hashable identity of the unsigned string."""
        return (self.x, self.z)

    @property
    def support(self) -> tuple[int, ...]:
        """Sites carrying a non-identity letter, ascending."""
        m = self.x | self.z
        return tuple(j for j in range(self.n_sites) if (m >> j) & 1)

    @property
    def window_size(self) -> int:
        """Length of the minimal contiguous window covering the support
        (0 for the identity)."""
        m = self.x | self.z
        if m == 0:
            return 0
        return m.bit_length() - (m & -m).bit_length() + 1

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def weight(self) -> int:
        return _bit_count(self.x | self.z)

    def commutes_with(self, other: "PauliString") -> bool:
        """Strings commute iff their symplectic form vanishes mod 2."""
        if self.n_sites != other.n_sites:
            raise ValueError("operands live on different lattices")
        return (_bit_count(self.x & other.z) + _bit_count(self.z & other.x)) % 2 == 0

    def index_masks(self) -> tuple[int, int]:
        """Masks with bit (n-1-j) for site j, matching the tensor-product
        basis index convention of `to_matrix`."""
        xm = zm = 0
        n = self.n_sites
        for j in range(n):
            xm |= ((self.x >> j) & 1) << (n - 1 - j)
            zm |= ((self.z >> j) & 1) << (n - 1 - j)
        return xm, zm

    def to_matrix(self) -> np.ndarray:
        """Dense matrix, tensor factors ordered site 0 first. Exponential in
        n_sites; intended for tests and small-system checks."""
        out = np.array([[complex(self.sign)]])
        for ch in self.label:
            out = np.kron(out, _SINGLE_SITE[ch])
        return out

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.label


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Product a * b = phase * result, with phase in {1, i, -1, -i} and the
    result carrying sign(a) * sign(b)."""
    if a.n_sites != b.n_sites:
        raise ValueError("operands live on different lattices")
    x = a.x ^ b.x
    z = a.z ^ b.z
    # Exponent of i accumulated from the per-site Y conventions plus the
    # anticommutation swaps needed to sort Z's past X's.
    g = (
        _bit_count(a.x & a.z)
        + _bit_count(b.x & b.z)
        - _bit_count(x & z)
        + 2 * _bit_count(a.z & b.x)
    ) % 4
    return _I_POWERS[g], PauliString(n_sites=a.n_sites, x=x, z=z, sign=a.sign * b.sign)


def commutator_observable(a: PauliString, s: PauliString) -> Optional[tuple[float, PauliString]]:
    """Rewrite i[a, s] as coeff * P for a single positive-sign Pauli P.

    Returns None when the strings commute; otherwise coeff is +-2 times the
    product of the operand signs.
    """
    if a.commutes_with(s):
        return None
    phase, prod = multiply(a, s)
    # Anticommuting strings: i[a, s] = 2i * (a s), and the product phase is
    # pure imaginary, so the result is a real multiple of an unsigned string.
    coeff = (2j * phase).real * prod.sign
    return coeff, replace(prod, sign=1)


@dataclass(frozen=True)
class OperatorBasis:
    """An ordered, duplicate-free collection of non-identity Pauli strings
    restricted to a region."""

    elements: tuple[PauliString, ...]
    region: Region
    locality_k: int
    ordering_tag: str

    def __post_init__(self) -> None:
        if self.locality_k < 1:
            raise ValueError(f"locality_k must be >= 1, got {self.locality_k}")
        allowed = self.region.site_set
        seen = set()
        for p in self.elements:
            if p.is_identity():
                raise ValueError("identity is not a basis element")
            if p.n_sites != self.region.lattice.n_sites:
                raise ValueError("element lives on the wrong lattice")
            if not set(p.support) <= allowed:
                raise ValueError(f"element {p.label} leaves the region")
            if p.window_size > self.locality_k:
                raise ValueError(f"element {p.label} exceeds window size {self.locality_k}")
            if p.key in seen:
                raise ValueError(f"duplicate element {p.label}")
            seen.add(p.key)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> PauliString:
        return self.elements[i]

    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.elements)

    def index_of(self, p: PauliString) -> int:
        for i, q in enumerate(self.elements):
            if q.key == p.key:
                return i
        raise KeyError(f"{p.label} not in basis")


def _window_strings(n_sites: int, start: int, width: int, allowed: frozenset[int]) -> list[PauliString]:
    """All strings whose support spans exactly [start, start+width-1] and
    stays inside `allowed`, in lexicographic letter order."""
    end = start + width - 1
    if start not in allowed or end not in allowed:
        return []
    if width == 1:
        return [PauliString.from_letters(n_sites, {start: ch}) for ch in "XYZ"]
    interior_choices = []
    for j in range(start + 1, end):
        interior_choices.append("IXYZ" if j in allowed else "I")
    out = []
    for left in "XYZ":
        for mid in _letter_products(interior_choices):
            for right in "XYZ":
                letters = {start: left, end: right}
                for off, ch in enumerate(mid):
                    if ch != "I":
                        letters[start + 1 + off] = ch
                out.append(PauliString.from_letters(n_sites, letters))
    return out


def _letter_products(choices: list[str]) -> Iterable[tuple[str, ...]]:
    if not choices:
        yield ()
        return
    for head in choices[0]:
        for rest in _letter_products(choices[1:]):
            yield (head,) + rest


def enumerate_basis(
    lattice: Lattice,
    region: Region,
    locality_k: int,
    ordering_seed: Optional[int] = None,
) -> OperatorBasis:
    """All non-identity strings supported inside `region` whose minimal
    contiguous window is at most `locality_k` sites wide.

    Elements are grouped by window size ascending. Within each group the
    order is canonical (window start, then letter string); when
    `ordering_seed` is given each group is shuffled with that seed instead,
    so truncating to the first N rows samples each size class fairly.
    """
    if lattice.dimension != 1:
        raise ValueError("only 1-D chains are enumerated")
    if locality_k < 1:
        raise ValueError(f"locality_k must be >= 1, got {locality_k}")
    allowed = region.site_set
    rng = np.random.default_rng(ordering_seed) if ordering_seed is not None else None
    elements: list[PauliString] = []
    for width in range(1, locality_k + 1):
        group: list[PauliString] = []
        for start in range(0, lattice.n_sites - width + 1):
            group.extend(_window_strings(lattice.n_sites, start, width, allowed))
        if rng is not None:
            perm = rng.permutation(len(group))
            group = [group[i] for i in perm]
        elements.extend(group)
    tag = "support-size-ascending" if rng is None else "fixed-seed-shuffled-within-k"
    return OperatorBasis(
        elements=tuple(elements),
        region=region,
        locality_k=locality_k,
        ordering_tag=tag,
    )
