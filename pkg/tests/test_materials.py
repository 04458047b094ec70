from __future__ import annotations

import json
import math

import numpy as np
import pytest

from artifact.materials import (
    DegenerateMaterialError,
    IllPosedCurvatureError,
    IsotropicModuli,
    MaterialScales,
    cosserat_classic,
    gamma_tilde,
    homogenize,
    lakes_omega,
    load_params,
    mindlin_curvature_energy,
    reduced_curvature_energy,
    relaxed_curvature_energy,
    scales_from_mapping,
    scales_to_mapping,
    to_mindlin_reduced,
    to_mindlin_relaxed,
)


def unit_scales(**kw):
    base = dict(e=IsotropicModuli(1.0, 1.0), micro=IsotropicModuli(1.0, 1.0), mu=1.0, Lc=1.0)
    base.update(kw)
    return MaterialScales(**base)


class TestModuli:
    def test_unit_plate_stiffness(self):
        np.testing.assert_allclose(IsotropicModuli(1.0, 1.0).bending_stiffness(1.0), 2.0 / 9.0, rtol=1e-15)

    def test_bulk_round_trip(self):
        m = IsotropicModuli.from_bulk(2.0 / 3.0, 7.0 / 9.0)
        np.testing.assert_allclose(m.kappa, 7.0 / 9.0, rtol=1e-15)
        np.testing.assert_allclose(m.lam, 7.0 / 9.0 - 4.0 / 9.0, rtol=1e-15)

    def test_zero_lambda_gives_zero_poisson(self):
        m = IsotropicModuli(1.0, 0.0)
        assert m.nu == 0.0
        assert m.plate_modulus == 2.0

    def test_validate_rejects_nonpositive(self):
        with pytest.raises(DegenerateMaterialError):
            IsotropicModuli(0.0, 1.0).validate()
        with pytest.raises(DegenerateMaterialError):
            IsotropicModuli(1.0, -1.0).validate()

    def test_negative_curvature_weight_rejected(self):
        with pytest.raises(IllPosedCurvatureError):
            unit_scales(a2=-1.0)


class TestHomogenization:
    def test_equal_scales_halve(self):
        mac = homogenize(unit_scales())
        np.testing.assert_allclose([mac.mu, mac.lam], [0.5, 0.5], rtol=1e-15)

    def test_equal_bulk_moduli(self):
        s = unit_scales(e=IsotropicModuli.from_bulk(1.0, 5.0 / 3.0), micro=IsotropicModuli.from_bulk(1.0, 5.0 / 3.0))
        np.testing.assert_allclose(homogenize(s).kappa, 5.0 / 6.0, rtol=1e-15)

    def test_macro_softer_than_both(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            e = IsotropicModuli(rng.uniform(0.1, 5), rng.uniform(0, 5))
            m = IsotropicModuli(rng.uniform(0.1, 5), rng.uniform(0, 5))
            mac = homogenize(unit_scales(e=e, micro=m))
            assert mac.mu < min(e.mu, m.mu)
            assert mac.kappa < min(e.kappa, m.kappa)

    def test_stiff_micro_recovers_meso(self):
        e = IsotropicModuli(1.3, 0.4)
        mac = homogenize(unit_scales(e=e, micro=IsotropicModuli(1e12, 1e12)))
        np.testing.assert_allclose([mac.mu, mac.kappa], [e.mu, e.kappa], rtol=1e-11)

    def test_without_micro_is_meso(self):
        e = IsotropicModuli(2.0, 3.0)
        assert homogenize(MaterialScales(e=e)) == e


class TestMindlinConversion:
    @pytest.mark.parametrize("seed", range(5))
    def test_reduced_energy_matches(self, seed):
        rng = np.random.default_rng(seed)
        s = unit_scales(mu=rng.uniform(0.5, 2), Lc=rng.uniform(0.1, 2), a1=rng.uniform(0, 2),
                        a2=rng.uniform(0, 2), a3=rng.uniform(0, 2))
        chi = rng.normal(size=(3, 3, 3))
        np.testing.assert_allclose(mindlin_curvature_energy(to_mindlin_reduced(s), chi),
                                   reduced_curvature_energy(s, chi), rtol=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_relaxed_energy_matches(self, seed):
        rng = np.random.default_rng(100 + seed)
        s = unit_scales(mu=rng.uniform(0.5, 2), Lc=rng.uniform(0.1, 2), a1=rng.uniform(0, 2),
                        a2=rng.uniform(0, 2), a3=rng.uniform(0, 2))
        chi = rng.normal(size=(3, 3, 3))
        np.testing.assert_allclose(mindlin_curvature_energy(to_mindlin_relaxed(s), chi),
                                   relaxed_curvature_energy(s, chi), rtol=1e-12)

    def test_elastic_part(self):
        c = to_mindlin_reduced(unit_scales(mu_c=0.25))
        assert (c.mu_hat, c.lambda_hat, c.b1, c.b2, c.b3, c.g1, c.g2) == (1.0, 1.0, 2.0, 2.25, 1.75, -1.0, -2.0)

    def test_unit_weights_reduced_table(self):
        c = to_mindlin_reduced(unit_scales())
        np.testing.assert_allclose([c.a(4), c.a(10), c.a(13)], [-1.0 / 9.0, 1.0, 0.0], atol=1e-15)

    def test_requires_micro(self):
        with pytest.raises(DegenerateMaterialError):
            to_mindlin_reduced(MaterialScales(e=IsotropicModuli(1.0, 1.0)))


class TestCosseratAndLakes:
    def test_worked_example(self):
        s = MaterialScales(e=IsotropicModuli(1.0, 1.0), mu=1.0, Lc=1.0, a1=2.0, a2=1.0)
        assert gamma_tilde(s) == 1.5
        r = lakes_omega(IsotropicModuli(1.0, 1.0), gamma_tilde(s), 1.0)
        np.testing.assert_allclose(r.omega, 7.75, rtol=1e-15)
        np.testing.assert_allclose(r.ell_b, math.sqrt(1.5 / 4.0), rtol=1e-15)

    def test_no_curvature_gives_one(self):
        assert lakes_omega(IsotropicModuli(1.0, 1.0), 0.0, 1.0).omega == 1.0

    def test_thick_plate_tends_to_one(self):
        assert lakes_omega(IsotropicModuli(1.0, 1.0), 1.5, 1e6).omega - 1.0 < 1e-10

    def test_bad_thickness(self):
        with pytest.raises(DegenerateMaterialError):
            lakes_omega(IsotropicModuli(1.0, 1.0), 1.0, 0.0)

    def test_classic_gamma_is_gamma_tilde(self):
        s = unit_scales(a1=2.0, a2=1.0, a3=0.5)
        c = cosserat_classic(s)
        assert c.gamma == gamma_tilde(s)
        np.testing.assert_allclose([c.alpha, c.beta], [0.0, 0.5], atol=1e-15)


class TestParameterFiles:
    def test_round_trip(self, tmp_path):
        s = unit_scales(mu_c=0.3, a1=2.0, a3=0.5)
        path = tmp_path / "p.json"
        path.write_text(json.dumps(scales_to_mapping(s, 2.0)))
        s2, h = load_params(path)
        assert s2 == s and h == 2.0

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown parameter keys: nu"):
            scales_from_mapping({"mu_e": 1.0, "nu": 0.3})

    def test_non_numeric_rejected(self):
        with pytest.raises(ValueError):
            scales_from_mapping({"mu_e": "1"})
        with pytest.raises(ValueError):
            scales_from_mapping({"mu_e": True})

    def test_missing_meso_shear(self):
        with pytest.raises(ValueError, match="mu_e"):
            scales_from_mapping({"lambda_e": 1.0})

    def test_non_object_file(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_params(path)

    def test_nonpositive_thickness(self):
        with pytest.raises(ValueError):
            scales_from_mapping({"mu_e": 1.0, "h": 0.0})
