from __future__ import annotations

import numpy as np
import pytest

from artifact.closed_form import limit_stiffnesses, solve
from artifact.materials import IllPosedCurvatureError, IsotropicModuli, MaterialScales
from artifact.semi_analytic import (
    assemble_micromorphic,
    assemble_microstrain,
    graded_gauss_legendre,
    penalized_second_gradient_limit,
    second_gradient_target,
    solve_problem,
)
from artifact.solution import BendingProblem, UnsupportedVariantError


def problem(model="micromorphic", Lc=1.0, h=1.0, kappa=1.0, **kw):
    base = dict(e=IsotropicModuli(1.0, 0.5), micro=IsotropicModuli(2.0, 1.0), mu=1.0, Lc=Lc, a1=2.0, a2=1.0, a3=0.5)
    base.update(kw)
    return BendingProblem(model, MaterialScales(**base), h, kappa)


class TestQuadrature:
    @pytest.mark.parametrize("width", [0.25, 1e-2, 1e-5])
    def test_polynomials_exact(self, width):
        x, w = graded_gauss_legendre(2.0, width, 16)
        np.testing.assert_allclose(np.sum(w), 2.0, rtol=1e-14)
        np.testing.assert_allclose(np.sum(w * x**2), 2.0 / 3.0, rtol=1e-14)
        np.testing.assert_allclose(np.sum(w * x**7), 0.0, atol=1e-15)

    def test_boundary_layer_resolved(self):
        b = 1e4
        x, w = graded_gauss_legendre(1.0, 1.0 / b)
        # int cosh(b x)/cosh(b/2) over the thickness is 2 tanh(b/2)/b
        got = np.sum(w * np.exp(b * (np.abs(x) - 0.5)))
        np.testing.assert_allclose(got, 2.0 / b, rtol=1e-10)


class TestSystem:
    @pytest.mark.parametrize("model", ["micromorphic", "micro-strain"])
    def test_ode_residual_and_boundary(self, model):
        p = problem(model, Lc=0.3)
        sol = solve_problem(p)
        d = sol.extras["details"]
        x = sol.grid(101)
        scale = np.max(np.abs(d.system.load)) * p.kappa * p.h
        assert np.max(np.abs(d.system.residual(list(d.fields), x))) <= 1e-10 * scale
        for face in (-0.5, 0.5):
            slopes = np.array([f(face, 1) for f in d.fields])
            assert np.max(np.abs(d.system.boundary_rows() @ np.concatenate([np.zeros(3), slopes]))) <= 1e-13

    def test_pencil_spd(self):
        s = assemble_micromorphic(problem())
        assert np.all(np.linalg.eigvalsh(s.K) > 0.0)
        assert np.all(np.linalg.eigvalsh(s.S) > 0.0)

    def test_companion_spectrum(self):
        p = problem(Lc=0.7)
        sol = solve_problem(p)
        om = np.sort(sol.extras["details"].omegas)
        ev = np.sort(np.linalg.eigvals(assemble_micromorphic(p).companion).real)
        np.testing.assert_allclose(ev, np.concatenate([-om[::-1], om]), rtol=1e-10)

    def test_wrong_model(self):
        with pytest.raises(UnsupportedVariantError):
            assemble_microstrain(problem("micromorphic"))

    def test_ill_posed_curvature(self):
        with pytest.raises(IllPosedCurvatureError):
            solve_problem(problem(a3=0.0))


class TestMoments:
    @pytest.mark.parametrize("model", ["micromorphic", "micro-strain"])
    @pytest.mark.parametrize("Lc", [1e-3, 0.1, 1.0, 10.0, 1e3])
    def test_duality(self, model, Lc):
        sol = solve_problem(problem(model, Lc=Lc, h=1.7, kappa=0.4))
        assert abs(sol.Deff - sol.Deff_energy) <= 1e-9 * sol.Deff

    def test_curvature_scaling(self):
        a, b = solve_problem(problem(kappa=1.0)), solve_problem(problem(kappa=3.0))
        np.testing.assert_allclose([b.Mc, b.Mm, b.Wtot], [3 * a.Mc, 3 * a.Mm, 9 * a.Wtot], rtol=1e-12)

    def test_models_differ_by_constant_moment(self):
        p = problem(Lc=0.6)
        a, b = solve_problem(p), solve_problem(p.with_(model="micro-strain"))
        assert a.Mc == pytest.approx(b.Mc, rel=1e-14)
        s = p.scales
        np.testing.assert_allclose(a.Mm - b.Mm, 2.0 * s.mu * s.a2 * s.Lc**2 * p.kappa * p.h, rtol=1e-14)

    @pytest.mark.parametrize("model", ["micromorphic", "micro-strain"])
    def test_small_length_is_macro(self, model):
        p = problem(model, Lc=1e-4)
        lim = limit_stiffnesses(model, p.scales, p.h)
        assert solve_problem(p).Deff == pytest.approx(lim.D_zero, rel=1e-3)
        assert solve_problem(p.with_Lc(0.0)).Deff == pytest.approx(lim.D_zero, rel=1e-14)

    def test_micro_strain_meso_plateau(self):
        p = problem("micro-strain")
        lim = limit_stiffnesses("micro-strain", p.scales, p.h)
        assert lim.bounded
        assert solve_problem(p.with_Lc(1e4)).Deff == pytest.approx(lim.D_inf, rel=1e-6)

    def test_dispatch(self):
        p = problem()
        assert solve(p).Wtot == solve_problem(p).Wtot
        assert solve(p).method == "semi-analytic"


class TestPenalization:
    def test_approaches_second_gradient(self):
        p = problem(e=IsotropicModuli(1.0, 0.0), micro=IsotropicModuli(1.0, 0.0))
        target = solve(second_gradient_target(p)).Deff
        gaps = [abs(penalized_second_gradient_limit(p, t).Deff - target) / target for t in (10.0, 1e3, 1e5)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-2

    def test_rejects_small_factor(self):
        with pytest.raises(ValueError):
            penalized_second_gradient_limit(problem(), 0.5)
