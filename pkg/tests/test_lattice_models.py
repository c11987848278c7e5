"""Chain geometry, model term bases, region interiors, spec serialization."""

import numpy as np
import pytest

from hamlearn.lattice import Lattice, Region
from hamlearn.models import (
    Drive,
    HamiltonianSpec,
    ModelFamily,
    attach_generic_drive,
    boundary_sites,
    interior,
    model_terms,
    sample_generic_chain,
    sample_xy_chain,
    spec_from_json,
    spec_to_json,
    term_basis_for_model,
)


class TestLattice:
    def test_chain_bonds(self):
        lat = Lattice.chain(5)
        assert lat.bonds == ((0, 1), (1, 2), (2, 3), (3, 4))
        assert Lattice.chain(1).bonds == ()

    def test_adjacency_symmetric_validation(self):
        with pytest.raises(ValueError):
            Lattice(n_sites=2, dimension=1, adjacency=((1,), ()))
        with pytest.raises(ValueError):
            Lattice(n_sites=2, dimension=1, adjacency=((0,), (0,)))

    def test_middle_region_examples(self):
        assert Lattice.chain(8).middle_region(6).sites == (1, 2, 3, 4, 5, 6)
        assert Lattice.chain(10).middle_region(8).sites == tuple(range(1, 9))
        assert Lattice.chain(12).middle_region(8).sites == tuple(range(2, 10))
        assert Lattice.chain(7).middle_region(2).sites == (2, 3)

    def test_region_validation(self):
        lat = Lattice.chain(6)
        assert lat.region([4, 2, 2]).sites == (2, 4)
        with pytest.raises(ValueError):
            Region(lattice=lat, sites=(3, 2))
        with pytest.raises(ValueError):
            lat.region([6])
        with pytest.raises(ValueError):
            lat.region([])
        assert lat.region([2, 3, 4]).is_contiguous()
        assert not lat.region([2, 4]).is_contiguous()
        assert 3 in lat.region([2, 3])
        assert len(lat.full_region()) == 6


class TestModelTerms:
    def test_generic_term_count(self):
        # 3 single-site terms per site plus 9 per bond.
        for n in (2, 6, 12):
            terms = model_terms(ModelFamily.GENERIC_2LOCAL_CHAIN, Lattice.chain(n))
            assert len(terms) == 3 * n + 9 * (n - 1)

    def test_generic_term_order(self):
        terms = model_terms(ModelFamily.GENERIC_2LOCAL_CHAIN, Lattice.chain(2))
        assert terms.labels()[:6] == ("XI", "YI", "ZI", "IX", "IY", "IZ")
        assert len(terms) == 15
        assert terms.labels()[6] == "XX"

    def test_xy_term_layout(self):
        terms = model_terms(ModelFamily.XY_CHAIN, Lattice.chain(4))
        assert terms.labels() == (
            "ZIII", "IZII", "IIZI", "IIIZ",
            "XXII", "YYII", "IXXI", "IYYI", "IIXX", "IIYY",
        )

    def test_model_family_from_name(self):
        assert ModelFamily.from_name("xy-chain") is ModelFamily.XY_CHAIN
        assert ModelFamily.from_name("generic-2-local-chain") is ModelFamily.GENERIC_2LOCAL_CHAIN
        with pytest.raises(ValueError):
            ModelFamily.from_name("heisenberg")

    def test_term_basis_restriction_counts(self):
        # Terms touching the middle 6 sites of a 12-chain: 3 * 6 singles plus
        # 9 * 7 bond terms (bonds (2,3) through (8,9) after centering on 3..8).
        lat = Lattice.chain(12)
        region = lat.region(range(3, 9))
        basis = term_basis_for_model(ModelFamily.GENERIC_2LOCAL_CHAIN, lat, region)
        assert len(basis) == 3 * 6 + 9 * 7 == 81
        for p in basis:
            assert set(p.support) & region.site_set

    def test_term_basis_keeps_model_order(self):
        lat = Lattice.chain(6)
        region = lat.region([2, 3])
        basis = term_basis_for_model(ModelFamily.GENERIC_2LOCAL_CHAIN, lat, region)
        full = model_terms(ModelFamily.GENERIC_2LOCAL_CHAIN, lat)
        picked = [p.label for p in full if set(p.support) & {2, 3}]
        assert list(basis.labels()) == picked


class TestInterior:
    def test_middle_region_interior(self):
        # Bonds (0,1) and (6,7) poke out of the region 1..6, removing sites
        # 1 and 6; the interior is 2..5.
        lat = Lattice.chain(8)
        region = lat.middle_region(6)
        core = interior(lat, region, ModelFamily.GENERIC_2LOCAL_CHAIN)
        assert core.sites == (2, 3, 4, 5)
        assert boundary_sites(lat, region, ModelFamily.GENERIC_2LOCAL_CHAIN) == (1, 6)

    def test_full_lattice_is_its_own_interior(self):
        lat = Lattice.chain(6)
        core = interior(lat, lat.full_region(), ModelFamily.GENERIC_2LOCAL_CHAIN)
        assert core.sites == tuple(range(6))

    def test_too_small_region_raises(self):
        lat = Lattice.chain(8)
        with pytest.raises(ValueError):
            interior(lat, lat.region([3, 4]), ModelFamily.GENERIC_2LOCAL_CHAIN)


class TestSampling:
    def test_generic_sampling_is_seeded(self):
        a = sample_generic_chain(6, seed=5)
        b = sample_generic_chain(6, seed=5)
        c = sample_generic_chain(6, seed=6)
        np.testing.assert_array_equal(a.coeffs, b.coeffs)
        assert not np.array_equal(a.coeffs, c.coeffs)
        assert len(a.coeffs) == 63

    def test_generic_coeffs_match_single_draw(self):
        spec = sample_generic_chain(4, seed=11)
        expected = np.random.default_rng(11).standard_normal(len(spec.terms))
        np.testing.assert_array_equal(spec.coeffs, expected)

    def test_xy_coeff_layout(self):
        spec = sample_xy_chain(5, seed=3)
        rng = np.random.default_rng(3)
        g = rng.standard_normal(5)
        gamma = rng.standard_normal(4)
        np.testing.assert_array_equal(spec.coeffs[:5], g)
        np.testing.assert_array_equal(spec.coeffs[5::2], (1 + gamma) / 2)
        np.testing.assert_array_equal(spec.coeffs[6::2], (1 - gamma) / 2)

    def test_coefficients_for_alignment(self):
        spec = sample_generic_chain(6, seed=0)
        sub = term_basis_for_model(
            ModelFamily.GENERIC_2LOCAL_CHAIN, spec.lattice, spec.lattice.region([2, 3])
        )
        c = spec.coefficients_for(sub)
        lookup = dict(zip(spec.terms.labels(), spec.coeffs))
        np.testing.assert_array_equal(c, [lookup[lab] for lab in sub.labels()])

    def test_coefficients_for_fills_zero(self):
        spec = sample_xy_chain(4, seed=1)
        generic = model_terms(ModelFamily.GENERIC_2LOCAL_CHAIN, spec.lattice)
        c = spec.coefficients_for(generic)
        lookup = dict(zip(spec.terms.labels(), spec.coeffs))
        for lab, val in zip(generic.labels(), c):
            assert val == lookup.get(lab, 0.0)

    def test_spec_validation(self):
        lat = Lattice.chain(3)
        terms = model_terms(ModelFamily.XY_CHAIN, lat)
        with pytest.raises(ValueError):
            HamiltonianSpec(
                model=ModelFamily.XY_CHAIN, lattice=lat, terms=terms,
                coeffs=np.ones(2),
            )
        with pytest.raises(ValueError):
            HamiltonianSpec(
                model=ModelFamily.XY_CHAIN, lattice=lat, terms=terms,
                coeffs=np.full(len(terms), np.nan),
            )


class TestDrive:
    def test_drive_value(self):
        spec = attach_generic_drive(sample_generic_chain(4, seed=0), 0.5, 0.05, seed=9)
        assert spec.drive.value(0.0) == 0.5
        t = 3.7
        assert spec.drive.value(t) == 0.5 * np.cos(0.05 * t)

    def test_drive_needs_nonzero_frequency(self):
        base = sample_generic_chain(4, seed=0)
        with pytest.raises(ValueError):
            attach_generic_drive(base, 0.5, 0.0, seed=9)

    def test_drive_is_fresh_sample(self):
        spec = attach_generic_drive(sample_generic_chain(4, seed=0), 1.0, 0.1, seed=9)
        expected = np.random.default_rng(9).standard_normal(len(spec.drive.terms))
        np.testing.assert_array_equal(spec.drive.coeffs, expected)
        np.testing.assert_array_equal(spec.coeffs, sample_generic_chain(4, seed=0).coeffs)

    def test_drive_coeff_count_validation(self):
        terms = model_terms(ModelFamily.GENERIC_2LOCAL_CHAIN, Lattice.chain(3))
        with pytest.raises(ValueError):
            Drive(amplitude=1.0, omega=0.1, terms=terms, coeffs=np.ones(2))


class TestSerialization:
    def test_round_trip_static(self):
        spec = sample_generic_chain(6, seed=42)
        back = spec_from_json(spec_to_json(spec))
        assert back.model is spec.model
        assert back.n_sites == spec.n_sites
        assert back.seed == 42
        np.testing.assert_array_equal(back.coeffs, spec.coeffs)
        assert back.terms.labels() == spec.terms.labels()
        assert back.drive is None

    def test_round_trip_driven(self):
        spec = attach_generic_drive(sample_generic_chain(5, seed=1), 0.5, 0.05, seed=2)
        back = spec_from_json(spec_to_json(spec))
        assert back.drive.amplitude == 0.5
        assert back.drive.omega == 0.05
        assert back.drive.seed == 2
        np.testing.assert_array_equal(back.drive.coeffs, spec.drive.coeffs)

    def test_round_trip_xy(self):
        spec = sample_xy_chain(7, seed=13)
        back = spec_from_json(spec_to_json(spec))
        assert back.model is ModelFamily.XY_CHAIN
        np.testing.assert_array_equal(back.coeffs, spec.coeffs)

    def test_bad_labels_rejected(self):
        import json as _json

        data = _json.loads(spec_to_json(sample_generic_chain(3, seed=0)))
        data["term_labels"][0] = "ZZZ"
        with pytest.raises(ValueError):
            spec_from_json(_json.dumps(data))
