"""Lattice geometry: site graphs and contiguous regions on open chains."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Lattice:
    """A finite site graph. Only 1-D open chains are constructed today, but
    adjacency is stored explicitly so higher-dimensional graphs can slot in."""

    n_sites: int
    dimension: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if len(self.adjacency) != self.n_sites:
            raise ValueError("adjacency must have one entry per site")
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if not (0 <= j < self.n_sites) or j == i:
                    raise ValueError(f"bad neighbor {j} of site {i}")
                if i not in self.adjacency[j]:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def chain(cls, n_sites: int) -> "Lattice":
        """Open chain: sites 0..n-1, edges between consecutive sites."""
        nbrs = []
        for i in range(n_sites):
            cur = []
            if i > 0:
                cur.append(i - 1)
            if i < n_sites - 1:
                cur.append(i + 1)
            nbrs.append(tuple(cur))
        return cls(n_sites=n_sites, dimension=1, adjacency=tuple(nbrs))

    @property
    def bonds(self) -> tuple[tuple[int, int], ...]:
        """Edges as ordered pairs (i, j) with i < j."""
        out = []
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    out.append((i, j))
        return tuple(out)

    def region(self, sites) -> "Region":
        return Region(lattice=self, sites=tuple(sorted(set(sites))))

    def full_region(self) -> "Region":
        return Region(lattice=self, sites=tuple(range(self.n_sites)))

    def middle_region(self, size: int) -> "Region":
        """Contiguous block of `size` sites centered on the chain
        (rounded toward the left end when off-center)."""
        if not (1 <= size <= self.n_sites):
            raise ValueError(f"region size {size} out of range for {self.n_sites} sites")
        start = (self.n_sites - size) // 2
        return self.region(range(start, start + size))


@dataclass(frozen=True)
class Region:
    """A subset of lattice sites, kept sorted and deduplicated."""

    lattice: Lattice = field(repr=False)
    sites: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.sites) == 0:
            raise ValueError("region must be non-empty")
        if list(self.sites) != sorted(set(self.sites)):
            raise ValueError("region sites must be sorted and distinct")
        if self.sites[0] < 0 or self.sites[-1] >= self.lattice.n_sites:
            raise ValueError("region sites outside the lattice")

    def __len__(self) -> int:
        return len(self.sites)

    def __contains__(self, site: int) -> bool:
        return site in set(self.sites)

    @property
    def site_set(self) -> frozenset[int]:
        return frozenset(self.sites)

    def is_contiguous(self) -> bool:
        return self.sites[-1] - self.sites[0] + 1 == len(self.sites)
