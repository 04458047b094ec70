"""Closed-form cylindrical bending solutions.

Every analytic model reduces, after eliminating the algebraic unknowns, to a
set of independent scalar modes ``y(x2)`` with energy per unit area

    int  1/2 k y^2 + g e y + gamma (y' + sigma kappa)^2  dx2

plus the uncoupled terms ``c0 e^2`` and ``C kappa^2``, where ``e = kappa x2``
is the bending strain and ``gamma = gamma_hat Lc^2``. Each mode is solved
exactly by ``y = -(g/k) e + A sinh(b x2)`` with ``b = sqrt(k / (2 gamma))``
and the natural condition ``y'(+-h/2) = -sigma kappa``. Moments and energy
follow from closed integrals of that profile.

The classical moment ``Mc`` collects the explicit curvature derivative of
the non-curvature energy and ``Mm`` that of the curvature energy, so
``Mc + Mm = dW/dkappa`` holds by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import zeta

from . import tensor as t3
from .materials import (
    DegenerateMaterialError,
    IllPosedCurvatureError,
    IsotropicModuli,
    MaterialScales,
    gamma_tilde,
    homogenize,
    lakes_omega,
)
from .solution import (
    BendingProblem,
    BendingSolution,
    Field,
    UnsupportedVariantError,
    sech,
    tanh_sat,
)

LIMIT_RATIO = 1e-9
SERIES_SWITCH = 0.5
SERIES_TERMS = 20


@lru_cache(maxsize=1)
def _tanh_coefficients() -> np.ndarray:
    """Taylor coefficients ``t_n`` of ``tanh(x) = sum t_n x^(2n-1)`` for ``n = 1..N``."""
    n = np.arange(1, SERIES_TERMS + 4)
    # zeta form of the Bernoulli numbers; scipy's bernoulli loses ~1e-12 already at B4
    sign = np.where(n % 2 == 1, 1.0, -1.0)
    return sign * 2.0 * (4.0**n - 1.0) * zeta(2.0 * n) / np.pi ** (2 * n)


def shape_integrals(phi: float) -> tuple[float, float, float]:
    """Normalized hyperbolic integrals ``(e1, e2, phi^2 e3)``.

    ``e1 = (phi - tanh phi)/phi^3``, ``e2 = (tanh phi - phi sech^2 phi)/phi^3``
    and ``e3 = (2 phi - 3 tanh phi + phi sech^2 phi)/phi^5``. They tend to
    ``1/3, 2/3, 4/15`` as ``phi -> 0`` and are evaluated by series there.
    """
    if math.isinf(phi):
        return 0.0, 0.0, 0.0
    if phi < SERIES_SWITCH:
        t = _tanh_coefficients()
        n = np.arange(1, len(t) + 1)
        p2 = phi * phi
        m = n >= 2
        e1 = -np.sum(t[m] * p2 ** (n[m] - 2))
        e2 = -np.sum(2.0 * (n[m] - 1) * t[m] * p2 ** (n[m] - 2))
        m3 = n >= 3
        e3 = np.sum((2.0 * n[m3] - 4.0) * t[m3] * p2 ** (n[m3] - 3))
        return float(e1), float(e2), float(p2 * e3)
    th = tanh_sat(phi)
    s2 = sech(phi) ** 2
    p3 = phi**3
    e1 = (phi - th) / p3
    e2 = (th - phi * s2) / p3
    e3p2 = (2.0 * phi - 3.0 * th + phi * s2) / p3
    return e1, e2, e3p2


@dataclass(frozen=True)
class Mode:
    """One decoupled through-thickness mode."""

    name: str
    k: float
    g: float
    gamma_hat: float
    sigma: float = 0.0


@dataclass(frozen=True)
class ModeResponse:
    mode: Mode
    b: float
    phi: float
    field: Field
    Mc: float
    Mm: float
    W_local: float
    W_curv: float


def solve_mode(mode: Mode, Lc: float, h: float, kappa: float) -> ModeResponse:
    """Exact solution of one mode and its moment and energy integrals."""
    if not mode.k > 0.0:
        raise DegenerateMaterialError(f"mode {mode.name}: stiffness must be positive, got {mode.k}")
    H3 = h**3
    ybar = mode.g / mode.k
    r = ybar - mode.sigma
    limit = Lc < LIMIT_RATIO * h
    if not limit and not mode.gamma_hat > 0.0:
        raise IllPosedCurvatureError(f"mode {mode.name}: curvature weight must be positive")
    if limit:
        b, phi = math.inf, math.inf
        e1 = e2 = e3p2 = 0.0
        field = Field(h=h, poly=(0.0, -ybar * kappa))
    else:
        b = math.sqrt(mode.k / (2.0 * mode.gamma_hat)) / Lc
        phi = 0.5 * b * h
        e1, e2, e3p2 = shape_integrals(phi)
        field = Field(h=h, poly=(0.0, -ybar * kappa), odd=((r * kappa / b, b),))
    xy = -ybar * kappa * H3 / 12.0 + r * kappa * H3 * e1 / 4.0
    yy = (
        ybar**2 * kappa**2 * H3 / 12.0
        - 2.0 * ybar * r * kappa**2 * H3 * e1 / 4.0
        + r**2 * kappa**2 * H3 * e2 / 8.0
    )
    Mc = mode.g * xy
    Mm = -mode.sigma * r * mode.k * kappa * H3 * e1 / 4.0
    W_local = 0.5 * mode.k * yy + mode.g * kappa * xy
    W_curv = mode.k * r**2 * kappa**2 * H3 * e3p2 / 16.0
    return ModeResponse(mode, b, phi, field, Mc, Mm, W_local, W_curv)


@dataclass(frozen=True)
class ModeSystem:
    """Reduced data of one model: local coefficient, modes and curvature constant."""

    c0: float
    modes: tuple[Mode, ...]
    C_hat: float
    reconstruct: Callable[[dict[str, Field], Field], dict[str, Field]]
    coeffs: dict


def evaluate_system(system: ModeSystem, p: BendingProblem, method: str = "closed-form") -> BendingSolution:
    h, kappa, Lc = p.h, p.kappa, p.scales.Lc
    H3 = h**3
    C = system.C_hat * Lc**2
    Mc = 2.0 * system.c0 * kappa * H3 / 12.0
    Mm = 2.0 * C * kappa * h
    W = system.c0 * kappa**2 * H3 / 12.0 + C * kappa**2 * h
    fields = {}
    responses = {}
    for mode in system.modes:
        res = solve_mode(mode, Lc, h, kappa)
        responses[mode.name] = res
        fields[mode.name] = res.field
        Mc += res.Mc
        Mm += res.Mm
        W += res.W_local + res.W_curv
    e = Field(h=h, poly=(0.0, kappa))
    profiles = system.reconstruct(fields, e)
    coeffs = dict(system.coeffs)
    for name, res in responses.items():
        coeffs[f"b_{name}"] = res.b * Lc if math.isfinite(res.b) else math.inf
    return BendingSolution(
        problem=p,
        profiles=profiles,
        coeffs=coeffs,
        Mc=float(Mc),
        Mm=float(Mm),
        Wtot=float(W),
        method=method,
        extras={"modes": responses},
    )


# Per-model reduction


def _check_positive(m: IsotropicModuli, name: str) -> IsotropicModuli:
    return m.validate(name)


def _local_coefficient(m: IsotropicModuli) -> float:
    """Coefficient of ``e^2`` for a plane-stress layer, ``mu + lambda_hat / 2``."""
    return m.mu + 0.5 * m.lambda_hat


def _cauchy_system(scales: MaterialScales) -> ModeSystem:
    m = _check_positive(scales.macro, "macro")
    ratio = m.lam / (m.lam + 2.0 * m.mu)

    def reconstruct(fields, e):
        vp = e * ratio
        return {"v": vp.antiderivative(), "v'": vp}

    coeffs = {"D_macro": m.plate_modulus / 12.0, "lambda_ratio": ratio}
    return ModeSystem(_local_coefficient(m), (), 0.0, reconstruct, coeffs)


RELAXED_CONSTRAINTS = {
    "zeroPoisson-oneCurv": (True, True),
    "anyPoisson-oneCurv": (False, True),
    "zeroPoisson-fullCurv": (True, False),
    "general": (False, False),
}


def relaxed_effective_scales(scales: MaterialScales, variant: str) -> MaterialScales:
    """Impose the Poisson and curvature restrictions that define a relaxed variant."""
    zero_poisson, one_curv = RELAXED_CONSTRAINTS[variant]
    micro = scales.require_micro()
    out = scales
    if zero_poisson:
        out = out.with_(e=IsotropicModuli(scales.e.mu, 0.0), micro=IsotropicModuli(micro.mu, 0.0))
    if one_curv:
        out = out.with_(a1=1.0, a2=1.0, a3=1.0)
    return out


def relaxed_b_coefficients(scales: MaterialScales, kappa: float = 1.0) -> dict[str, float]:
    e, m = scales.e, scales.require_micro()
    return {
        "b0": 2.0 * (e.lam * m.mu - e.mu * m.lam) / (m.lam + 2.0 * m.mu),
        "b1": e.plate_modulus + m.plate_modulus,
        "b2": e.lambda_hat + m.lambda_hat,
        "b3": kappa * e.plate_modulus,
        "b4": kappa * e.lambda_hat,
    }


def _relaxed_system(scales: MaterialScales, variant: str, kappa: float) -> ModeSystem:
    s = relaxed_effective_scales(scales, variant)
    e = _check_positive(s.e, "meso")
    m = _check_positive(s.require_micro(), "micro")
    if s.Lc > 0.0 and (s.a1 <= 0.0 or s.a2 <= 0.0):
        raise IllPosedCurvatureError("relaxed bending needs a1 > 0 and a2 > 0")
    d_mode = Mode("d", k=e.mu + m.mu, g=e.mu, gamma_hat=s.mu * s.a1 / 4.0, sigma=1.0)
    s_mode = Mode(
        "s",
        k=e.mu + m.mu + e.lambda_hat + m.lambda_hat,
        g=e.mu + e.lambda_hat,
        gamma_hat=s.mu * s.a2 / 4.0,
        sigma=1.0,
    )
    p22 = -m.lam / (m.lam + 2.0 * m.mu)
    ve = e.lam / (e.lam + 2.0 * e.mu)

    def reconstruct(fields, strain):
        d, sm = fields["d"], fields["s"]
        P22 = sm * p22
        vp = P22 + (strain + sm) * ve
        return {
            "P11": (sm + d) * 0.5,
            "P22": P22,
            "P33": (sm - d) * 0.5,
            "v'": vp,
            "v": vp.antiderivative(),
        }

    coeffs = relaxed_b_coefficients(s, kappa)
    coeffs["c0"] = 0.0
    coeffs.update(relaxed_root_names(s, variant))
    coeffs["D_macro"] = homogenize(s).plate_modulus / 12.0
    coeffs["D_micro"] = m.plate_modulus / 12.0
    coeffs["D_e"] = e.plate_modulus / 12.0
    return ModeSystem(_local_coefficient(e), (d_mode, s_mode), 0.0, reconstruct, coeffs)


def relaxed_root_names(s: MaterialScales, variant: str) -> dict[str, float]:
    """Decay constants ``f_i`` (hyperbolic argument ``f_i x2 / Lc``) under each variant's naming."""
    b = relaxed_b_coefficients(s)
    mu = s.mu
    if mu <= 0.0:
        return {}
    diff = (b["b1"] - b["b2"]) / mu
    summ = (b["b1"] + b["b2"]) / mu
    if variant == "zeroPoisson-oneCurv":
        return {"f1": math.sqrt(diff)}
    if variant == "anyPoisson-oneCurv":
        return {"f1": math.sqrt(summ), "f2": math.sqrt(diff)}
    out = {}
    if s.a1 > 0.0:
        out["f1"] = math.sqrt(diff / s.a1)
    if s.a2 > 0.0:
        out["f2"] = math.sqrt(summ / s.a2)
    return out


def _dilatation_system(
    scales: MaterialScales, mu_mac: float, kappa_e: float, kappa_m: float, sigma: float, C_hat: float
) -> tuple[Mode, Callable, float]:
    """Shared reduction of the micro-stretch and micro-void models, unknown ``y = 2 omega``."""
    if not (mu_mac > 0.0 and kappa_e > 0.0 and kappa_m > 0.0):
        raise DegenerateMaterialError("need mu_macro, kappa_e, kappa_micro > 0")
    den = 3.0 * kappa_e + 4.0 * mu_mac
    k = 9.0 * (3.0 * kappa_e * kappa_m + 4.0 * kappa_e * mu_mac + 4.0 * kappa_m * mu_mac) / (4.0 * den)
    g = 9.0 * kappa_e * mu_mac / den
    c0 = 2.0 * mu_mac * (3.0 * kappa_e + mu_mac) / den
    if scales.Lc > 0.0 and scales.a2 <= 0.0:
        raise IllPosedCurvatureError("the dilatation curvature weight a2 must be positive")
    mode = Mode("y", k=k, g=g, gamma_hat=scales.mu * scales.a2 / 4.0, sigma=sigma)

    def reconstruct(fields, strain):
        omega = fields["y"] * 0.5
        vp = (omega * (9.0 * kappa_e) + strain * (3.0 * kappa_e - 2.0 * mu_mac)) * (1.0 / den)
        return {"omega": omega, "v'": vp, "v": vp.antiderivative()}

    return mode, reconstruct, c0


def _micro_stretch_system(scales: MaterialScales) -> ModeSystem:
    e, m = scales.e, scales.require_micro()
    mac = homogenize(scales)
    _check_positive(mac, "macro")
    ke, km = e.kappa, m.kappa
    mode, reconstruct, c0 = _dilatation_system(scales, mac.mu, ke, km, 1.0, scales.mu * scales.a1 / 4.0)
    coeffs = micro_stretch_coefficients(scales)
    coeffs["D_macro"] = _dilatation_plate(mac.mu, mac.kappa) / 12.0
    return ModeSystem(c0, (mode,), scales.mu * scales.a1 / 4.0, reconstruct, coeffs)


def micro_stretch_coefficients(scales: MaterialScales) -> dict[str, float]:
    """``f1`` (decay constant), ``f2`` (dilatation ratio) and ``f3`` of the micro-stretch solution.

    ``f1_meso`` evaluates the same root with the meso shear modulus in the
    coupling term in place of the macro one.
    """
    e, m = scales.e, scales.require_micro()
    mac = homogenize(scales)
    ke, km, mu_mac = e.kappa, m.kappa, mac.mu
    out = {
        "f2": 6.0 * ke * mu_mac / (12.0 * mu_mac * (ke + km) + 9.0 * ke * km),
    }
    out["f3"] = (2.0 / 3.0 + ke / (2.0 * mu_mac)) * out["f2"]
    if scales.mu * scales.a2 > 0.0:
        base = lambda mu_c: math.sqrt(
            4.5 * (km + 4.0 * ke * mu_c / (3.0 * ke + 4.0 * mu_mac)) / (scales.a2 * scales.mu)
        )
        out["f1"] = base(mu_mac)
        out["f1_meso"] = base(e.mu)
    return out


def _dilatation_plate(mu: float, kappa: float) -> float:
    """``4 mu (3 kappa + mu) / (3 kappa + 4 mu)``, the plate modulus in bulk form."""
    return 4.0 * mu * (3.0 * kappa + mu) / (3.0 * kappa + 4.0 * mu)


def _micro_void_system(scales: MaterialScales) -> ModeSystem:
    e, m = scales.e, scales.require_micro()
    _check_positive(e, "meso")
    ke, km = e.kappa, m.kappa
    mode, reconstruct, c0 = _dilatation_system(scales, e.mu, ke, km, 0.0, 0.0)
    kmac = ke * km / (ke + km)
    coeffs = {
        "f2": mode.g / (2.0 * mode.k),
        "D_macro": _dilatation_plate(e.mu, kmac) / 12.0,
        "D_e": _dilatation_plate(e.mu, ke) / 12.0,
    }
    if scales.mu * scales.a2 > 0.0:
        coeffs["f1"] = math.sqrt(mode.k / (2.0 * mode.gamma_hat))
    return ModeSystem(c0, (mode,), 0.0, reconstruct, coeffs)


def _cosserat_system(scales: MaterialScales) -> ModeSystem:
    base = _cauchy_system(scales)
    C_hat = scales.mu * (scales.a1 + scales.a2) / 4.0
    coeffs = dict(base.coeffs)
    coeffs["gamma"] = scales.mu_L2 * (scales.a1 + scales.a2) / 4.0
    coeffs["gamma_tilde"] = gamma_tilde(scales)
    return ModeSystem(base.c0, (), C_hat, base.reconstruct, coeffs)


COUPLE_STRESS_CURVATURE = {
    "indeterminate": None,
    "modified": ("a2", 0.0),
    "pseudo-consistent": ("a1", 0.0),
}


def couple_stress_effective_scales(scales: MaterialScales, variant: str) -> MaterialScales:
    rule = COUPLE_STRESS_CURVATURE[variant]
    if rule is None:
        return scales
    return scales.with_(**{rule[0]: rule[1]})


SECOND_GRADIENT_CONSTRAINTS = {
    "oneCurv-zeroPoisson": (True, True),
    "oneCurv": (False, True),
    "full": (False, False),
}


def second_gradient_effective_scales(scales: MaterialScales, variant: str) -> MaterialScales:
    zero_poisson, one_curv = SECOND_GRADIENT_CONSTRAINTS[variant]
    out = scales
    if zero_poisson:
        mac = homogenize(scales)
        out = out.with_(e=IsotropicModuli(mac.mu, 0.0), micro=None)
    if one_curv:
        out = out.with_(a1=1.0, a2=1.0, a3=1.5)
    return out


def second_gradient_weights(a1: float, a2: float, a3: float) -> tuple[float, float, float]:
    """Weights of ``v''^2``, ``v'' kappa`` and ``kappa^2`` in the curvature sum."""
    c_gg = 2.0 / 9.0 * (3.0 * a1 + a3)
    c_kg = 2.0 / 9.0 * (3.0 * a1 - 2.0 * a3)
    c_kk = 2.0 / 3.0 * a1 + 2.0 * a2 + 2.0 / 9.0 * a3
    return c_gg, c_kg, c_kk


def _second_gradient_system(scales: MaterialScales, variant: str) -> ModeSystem:
    s = second_gradient_effective_scales(scales, variant)
    m = _check_positive(homogenize(s), "macro")
    c_gg, c_kg, c_kk = second_gradient_weights(s.a1, s.a2, s.a3)
    if s.Lc > 0.0 and not c_gg > 0.0:
        raise IllPosedCurvatureError("second gradient bending needs 3 a1 + a3 > 0")
    mode = Mode(
        "v'",
        k=m.lam + 2.0 * m.mu,
        g=-m.lam,
        gamma_hat=s.mu * c_gg / 2.0,
        sigma=c_kg / (2.0 * c_gg) if c_gg > 0.0 else 0.0,
    )
    C_hat = 0.5 * s.mu * (c_kk - (c_kg**2 / (4.0 * c_gg) if c_gg > 0.0 else 0.0))

    def reconstruct(fields, strain):
        vp = fields["v'"]
        return {"v'": vp, "v": vp.antiderivative()}

    coeffs = {"D_macro": m.plate_modulus / 12.0}
    if s.mu * (3.0 * s.a1 + s.a3) > 0.0:
        coeffs["f1"] = math.sqrt((m.lam + 2.0 * m.mu) / (2.0 * s.mu * (3.0 * s.a1 + s.a3)))
    coeffs["c_gg"], coeffs["c_kg"], coeffs["c_kk"] = c_gg, c_kg, c_kk
    # v' stays a mode here, so the e^2 weight is the unreduced mu + lambda/2
    return ModeSystem(m.mu + 0.5 * m.lam, (mode,), C_hat, reconstruct, coeffs)


# Public solvers


def _require(p: BendingProblem, model: str) -> None:
    if p.model != model:
        raise UnsupportedVariantError(f"problem model is {p.model!r}, expected {model!r}")


def solve_cauchy(p: BendingProblem) -> BendingSolution:
    _require(p, "cauchy")
    return evaluate_system(_cauchy_system(p.scales), p)


def solve_relaxed(p: BendingProblem, variant: str | None = None) -> BendingSolution:
    _require(p, "relaxed")
    variant = variant or p.variant
    if variant not in RELAXED_CONSTRAINTS:
        raise UnsupportedVariantError(f"unknown relaxed variant {variant!r}")
    p = p.with_(variant=variant)
    sol = evaluate_system(_relaxed_system(p.scales, variant, p.kappa), p)
    c = sol.coeffs
    # integration constants: coefficient of (Lc/f) sinh(f x2/Lc) in each mode
    amps = {
        name: res.field.odd[0][0] * res.b * sech(res.phi) if res.field.odd else 0.0
        for name, res in sol.extras["modes"].items()
    }
    c.update(
        c1=0.0,
        c3=0.0,
        c2=0.5 * (amps["d"] + amps["s"]),
        c4=0.5 * (amps["s"] - amps["d"]),
    )
    return sol


def solve_micro_stretch(p: BendingProblem) -> BendingSolution:
    _require(p, "micro-stretch")
    return evaluate_system(_micro_stretch_system(p.scales), p)


def solve_cosserat(p: BendingProblem) -> BendingSolution:
    _require(p, "cosserat")
    sol = evaluate_system(_cosserat_system(p.scales), p)
    macro = homogenize(p.scales)
    lk = lakes_omega(macro, gamma_tilde(p.scales), p.h)
    sol.coeffs.update(ell_b=lk.ell_b, Omega=lk.omega)
    return sol


def solve_couple_stress(p: BendingProblem, variant: str | None = None) -> BendingSolution:
    _require(p, "couple-stress")
    variant = variant or p.variant
    if variant not in COUPLE_STRESS_CURVATURE:
        raise UnsupportedVariantError(f"unknown couple stress variant {variant!r}")
    scales = couple_stress_effective_scales(p.scales, variant)
    inner = solve_cosserat(BendingProblem("cosserat", scales, p.h, p.kappa))
    return BendingSolution(
        problem=p.with_(variant=variant),
        profiles=inner.profiles,
        coeffs=inner.coeffs,
        Mc=inner.Mc,
        Mm=inner.Mm,
        Wtot=inner.Wtot,
        method=inner.method,
        extras=inner.extras,
    )


def solve_micro_void(p: BendingProblem) -> BendingSolution:
    _require(p, "micro-void")
    return evaluate_system(_micro_void_system(p.scales), p)


def solve_second_gradient(p: BendingProblem, variant: str | None = None) -> BendingSolution:
    _require(p, "second-gradient")
    variant = variant or p.variant
    if variant not in SECOND_GRADIENT_CONSTRAINTS:
        raise UnsupportedVariantError(f"unknown second gradient variant {variant!r}")
    p = p.with_(variant=variant)
    return evaluate_system(_second_gradient_system(p.scales, variant), p)


CLOSED_FORM_SOLVERS = {
    "cauchy": solve_cauchy,
    "relaxed": solve_relaxed,
    "micro-stretch": solve_micro_stretch,
    "cosserat": solve_cosserat,
    "couple-stress": solve_couple_stress,
    "micro-void": solve_micro_void,
    "second-gradient": solve_second_gradient,
}


def effective_scales(p: BendingProblem) -> MaterialScales:
    """Material scales after the variant restrictions have been imposed."""
    if p.model == "relaxed":
        return relaxed_effective_scales(p.scales, p.variant)
    if p.model == "couple-stress":
        return couple_stress_effective_scales(p.scales, p.variant)
    if p.model == "second-gradient":
        return second_gradient_effective_scales(p.scales, p.variant)
    return p.scales


def solve(p: BendingProblem) -> BendingSolution:
    """Dispatch to the closed-form or semi-analytic solver of ``p.model``."""
    if p.model in CLOSED_FORM_SOLVERS:
        return CLOSED_FORM_SOLVERS[p.model](p)
    from .semi_analytic import solve_problem

    return solve_problem(p)


# Limits


@dataclass(frozen=True)
class LimitStiffnesses:
    """Analytic stiffness plateaus.

    ``D_inf`` is ``math.inf`` when the stiffness grows without bound.
    ``label_inf`` names the large-length plateau (``D_micro``, ``D_e`` or
    ``D_macro`` for size-independent models). ``Mm_rigid_micro`` is the
    higher-order moment per unit curvature in the rigid micro limit.
    """

    model: str
    D_zero: float
    D_inf: float
    label_inf: str
    Mm_rigid_micro: float | None = None

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.D_inf)


def limit_stiffnesses(model: str, scales: MaterialScales, h: float, variant: str | None = None) -> LimitStiffnesses:
    p = BendingProblem(model, scales, h, 1.0, variant)
    s = effective_scales(p)
    H = h**3 / 12.0
    if model == "cauchy":
        D = homogenize(s).plate_modulus * H
        return LimitStiffnesses(model, D, D, "D_macro")
    if model == "relaxed":
        return LimitStiffnesses(
            model,
            homogenize(s).plate_modulus * H,
            s.require_micro().plate_modulus * H,
            "D_micro",
            Mm_rigid_micro=h * s.mu_L2 * (s.a1 + s.a2) / 2.0,
        )
    if model == "micro-stretch":
        mac = homogenize(s)
        return LimitStiffnesses(model, _dilatation_plate(mac.mu, mac.kappa) * H, math.inf, "unbounded")
    if model == "micro-void":
        ke, km = s.e.kappa, s.require_micro().kappa
        return LimitStiffnesses(
            model,
            _dilatation_plate(s.e.mu, ke * km / (ke + km)) * H,
            _dilatation_plate(s.e.mu, ke) * H,
            "D_e",
        )
    if model == "micro-strain":
        return LimitStiffnesses(model, homogenize(s).plate_modulus * H, s.e.plate_modulus * H, "D_e")
    if model in ("cosserat", "couple-stress", "micromorphic", "second-gradient"):
        return LimitStiffnesses(model, homogenize(s).plate_modulus * H, math.inf, "unbounded")
    raise UnsupportedVariantError(f"unknown model {model!r}")


# Lateral tractions under consistent coupling


@dataclass(frozen=True)
class CouplingTractions:
    """Traction ``t1`` and double traction ``eta12`` on the lateral face ``x1 = +b/2``.

    The face ``x1 = -b/2`` carries the negatives. ``coupling_residual`` is the
    largest entry of ``P x e1 - Du x e1`` on both faces.
    """

    t1: Callable
    eta12: Callable
    coupling_residual: float
    width: float


def relaxed_tensors(sol: BendingSolution, x1: float, x2: float) -> dict[str, np.ndarray]:
    """``Du``, ``P`` and the gradient of ``P`` of a relaxed solution at one point."""
    kappa = sol.problem.kappa
    f = sol.profiles
    Du = np.array([[-kappa * x2, -kappa * x1, 0.0], [kappa * x1, f["v'"](x2), 0.0], [0.0, 0.0, 0.0]])
    P = np.array([[f["P11"](x2), -kappa * x1, 0.0], [kappa * x1, f["P22"](x2), 0.0], [0.0, 0.0, f["P33"](x2)]])
    grad = np.zeros((3, 3, 3))
    grad[0, 1, 0], grad[1, 0, 0] = -kappa, kappa
    grad[0, 0, 1] = f["P11"](x2, 1)
    grad[1, 1, 1] = f["P22"](x2, 1)
    grad[2, 2, 1] = f["P33"](x2, 1)
    return {"Du": Du, "P": P, "gradP": grad}


def relaxed_stresses(sol: BendingSolution, x1: float, x2: float) -> dict[str, np.ndarray]:
    """Force stress ``sigma_tilde`` and moment stress ``m`` of a relaxed solution."""
    s = effective_scales(sol.problem)
    T = relaxed_tensors(sol, x1, x2)
    E = T["Du"] - T["P"]
    sig = 2.0 * s.e.mu * t3.sym(E) + s.e.lam * np.trace(E) * t3.IDENTITY + 2.0 * s.mu_c * t3.skew(E)
    C = t3.curl(T["gradP"])
    m = s.mu_L2 * (s.a1 * t3.dev_sym(C) + s.a2 * t3.skew(C) + s.a3 / 3.0 * np.trace(C) * t3.IDENTITY)
    return {"sigma": sig, "m": m, "curlP": C, **T}


def consistent_coupling_tractions(sol: BendingSolution, b: float = 1.0, n: int = 201) -> CouplingTractions:
    p = sol.problem
    if p.model != "relaxed" or p.variant != "zeroPoisson-oneCurv":
        raise UnsupportedVariantError("consistent coupling tractions need the zero-Poisson one-curvature relaxed solution")
    e1 = np.array([1.0, 0.0, 0.0])

    def t1(x2):
        x = np.atleast_1d(np.asarray(x2, dtype=float))
        out = np.array([relaxed_stresses(sol, 0.5 * b, xi)["sigma"][0, 0] for xi in x])
        return out if np.ndim(x2) else float(out[0])

    def eta12(x2):
        x = np.atleast_1d(np.asarray(x2, dtype=float))
        out = np.array([t3.cross_tensor_vector(relaxed_stresses(sol, 0.5 * b, xi)["m"], e1)[0, 1] for xi in x])
        return out if np.ndim(x2) else float(out[0])

    worst = 0.0
    for x1 in (-0.5 * b, 0.5 * b):
        for x2 in sol.grid(n):
            T = relaxed_tensors(sol, x1, x2)
            diff = t3.cross_tensor_vector(T["P"], e1) - t3.cross_tensor_vector(T["Du"], e1)
            worst = max(worst, float(np.max(np.abs(diff))))
    return CouplingTractions(t1=t1, eta12=eta12, coupling_residual=worst, width=b)


# Expanded moment expressions written out term by term. They are kept
# separate from the mode engine so the two can be cross-checked.


def _rho_tanh(f: float, h: float, L: float) -> float:
    return tanh_sat(f * h / (2.0 * L))


def expanded_moments(p: BendingProblem) -> dict[str, float] | None:
    """Moments from the expanded coefficient formulas, when such formulas exist.

    Returns ``None`` for models or variants without an expanded form and for
    ``Lc = 0``.
    """
    s = effective_scales(p)
    L, h, kappa = s.Lc, p.h, p.kappa
    if L <= 0.0:
        return None
    H = h**3 / 12.0
    rho = L / h
    if p.model == "relaxed" and p.variant == "zeroPoisson-oneCurv":
        me, mm, mu = s.e.mu, s.micro.mu, s.mu
        f1 = math.sqrt(2.0 * (me + mm) / mu)
        th = _rho_tanh(f1, h, L)
        Mc = H * 2.0 * me * mm / (me + mm) * (1.0 - 12.0 / f1**2 * rho**2 + 24.0 / f1**3 * rho**3 * th) * kappa
        Mm = H * 2.0 * mm * mu / (me + mm) * (6.0 * rho**2 - 12.0 / f1 * rho**3 * th) * kappa
        W = 0.5 * H * 2.0 * me * mm / (me + mm) * (
            1.0 - (12.0 / f1**2 - 6.0 * mu / me) * rho**2 + 2.0 / f1 * (12.0 / f1**2 - 6.0 * mu / me) * rho**3 * th
        ) * kappa**2
        return {"Mc": Mc, "Mm": Mm, "Wtot": W}
    if p.model == "relaxed" and p.variant == "zeroPoisson-fullCurv":
        me, mm, mu, a1, a2 = s.e.mu, s.micro.mu, s.mu, s.a1, s.a2
        f1 = math.sqrt(2.0 * (me + mm) / (a1 * mu))
        f2 = math.sqrt(2.0 * (me + mm) / (a2 * mu))
        t1, t2 = _rho_tanh(f1, h, L), _rho_tanh(f2, h, L)
        D = 2.0 * me * mm / (me + mm)
        mix = f1**3 * t2 + f2**3 * t1
        Mc = H * D * (
            1.0 - 6.0 * (f1**2 + f2**2) / (f1**2 * f2**2) * rho**2 + 12.0 / (f1**3 * f2**3) * rho**3 * mix
        ) * kappa
        Mm = H * 2.0 * mm * (
            3.0 * (a1 + a2) / (me + mm) * mu * rho**2
            - 6.0 * a1 * a2 / (me + mm) * mu * rho**3 * (t2 / (a1 * f2) + t1 / (a2 * f1))
        ) * kappa
        W = 0.5 * H * D * (
            1.0
            + 6.0 * mm / me * (f1**2 + f2**2) / (f1**2 * f2**2) * rho**2
            - 12.0 * mm / me / (f1**3 * f2**3) * rho**3 * mix
        ) * kappa**2
        return {"Mc": Mc, "Mm": Mm, "Wtot": W}
    if p.model == "relaxed" and p.variant == "general":
        return _general_table_moments(s, h, kappa)
    return None


def general_table(s: MaterialScales, h: float, kappa: float) -> dict[str, float]:
    """Coefficients ``z0, p1..p4, q1..q4, r1..r3`` of the expanded general relaxed moments."""
    b = relaxed_b_coefficients(s, kappa)
    b1, b2, b3, b4 = b["b1"], b["b2"], b["b3"], b["b4"]
    me, le, mu, a1, a2 = s.e.mu, s.e.lam, s.mu, s.a1, s.a2
    f1 = math.sqrt((b1 - b2) / (a1 * mu))
    f2 = math.sqrt((b1 + b2) / (a2 * mu))
    k = kappa
    z0 = h**3 * me / (6.0 * f1**3 * f2**3 * (b1**2 - b2**2) * (le + 2.0 * me))
    p1 = f1**3 * f2**3 * (-2.0 * b1**2 * k + b1 * (2.0 * b3 + b4) + b2 * (2.0 * b2 * k - b3 - 2.0 * b4))
    p2 = 6.0 * f1 * f2 * (
        b1**2 * k * (3.0 * f1**2 + f2**2)
        - 3.0 * b1 * f1**2 * (b3 + b4)
        + b1 * f2**2 * (b4 - b3)
        + b2 * b3 * (3.0 * f1**2 - f2**2)
        + b2 * (3.0 * f1**2 + f2**2) * (b4 - b2 * k)
    )
    p3 = 12.0 * f2**3 * (b1 + b2) * (k * (b1 - b2) - b3 + b4)
    p4 = 36.0 * f1**3 * (b1 - b2) * (k * (b1 + b2) - b3 - b4)
    q1 = f1**3 * f2**3 * (b1**2 * k - b1 * b3 + b2 * (b4 - b2 * k))
    q2 = 6.0 * f1 * f2 * (
        b1**2 * k * (f1**2 + f2**2)
        - b1 * f1**2 * (b3 + b4)
        + b1 * f2**2 * (b4 - b3)
        + b2 * b3 * (f1 - f2) * (f1 + f2)
        + b2 * (f1**2 + f2**2) * (b4 - b2 * k)
    )
    q3 = 12.0 * f2**3 * (b1 + b2) * (k * (b1 - b2) - b3 + b4)
    q4 = 12.0 * f1**3 * (b1 - b2) * (k * (b1 + b2) - b3 - b4)
    r1 = -a1 * (b1 + b2) * (b1 * k - b2 * k - b3 + b4) - a2 * (b1 - b2) * (k * (b1 + b2) - b3 - b4)
    r2 = 2.0 * a1 * (b1 + b2) * (b1 * k - b2 * k - b3 + b4) / f1
    r3 = 2.0 * a2 * (b1 - b2) * (-k * (b1 + b2) + b3 + b4) / f2
    return dict(
        z0=z0, p1=p1, p2=p2, p3=p3, p4=p4, q1=q1, q2=q2, q3=q3, q4=q4, r1=r1, r2=r2, r3=r3, f1=f1, f2=f2, **b
    )


def _general_table_moments(s: MaterialScales, h: float, kappa: float, p4_factor: float = 1.0) -> dict[str, float]:
    t = general_table(s, h, kappa)
    L = s.Lc
    rho = L / h
    me, le, mu = s.e.mu, s.e.lam, s.mu
    t1, t2 = _rho_tanh(t["f1"], h, L), _rho_tanh(t["f2"], h, L)
    P = t["p1"] + t["p2"] * rho**2 - t["p3"] * rho**3 * t1 - p4_factor * t["p4"] * rho**3 * t2
    Q = t["q1"] - t["q2"] * rho**2 + t["q3"] * rho**3 * t1 + t["q4"] * rho**3 * t2
    R = t["r1"] * rho**2 + t["r2"] * rho**3 * t1 - t["r3"] * rho**3 * t2
    den = t["b1"] ** 2 - t["b2"] ** 2
    Mc = -t["z0"] * (le * P - 2.0 * me * Q)
    Mm = -h**3 * mu / (2.0 * den) * R
    W = 0.5 * kappa * Mc - kappa * h**3 * mu / (4.0 * den) * R
    return {"Mc": Mc, "Mm": Mm, "Wtot": W}


def micro_stretch_expanded_moments(p: BendingProblem, use_meso_root: bool = False) -> dict[str, float]:
    """Micro-stretch moments from the expanded ``p_i, q_i`` coefficients."""
    s = p.scales
    e, m = s.e, s.require_micro()
    mac = homogenize(s)
    ke, mu_mac, mu = e.kappa, mac.mu, s.mu
    c = micro_stretch_coefficients(s)
    f1 = c["f1_meso"] if use_meso_root else c["f1"]
    f2 = c["f2"]
    h, L, kappa = p.h, s.Lc, p.kappa
    rho = L / h
    th = _rho_tanh(f1, h, L)
    den = 3.0 * ke + 4.0 * mu_mac
    p1 = (2.0 * (6.0 - 9.0 * f2) * ke + 4.0 * mu_mac) / den
    p2 = 108.0 * (2.0 * f2 - 1.0) * ke / (f1**3 * den)
    q1 = 6.0 * mu * (s.a1 + s.a2 * (1.0 - 2.0 * f2)) / mu_mac
    q2 = 12.0 * s.a2 * mu * (2.0 * f2 - 1.0) / (f1 * mu_mac)
    H = h**3 / 12.0
    Mc = H * mu_mac * (p1 + p2 * f1 * rho**2 - 2.0 * p2 * rho**3 * th) * kappa
    Mm = H * mu_mac * (q1 * rho**2 + q2 * rho**3 * th) * kappa
    return {"Mc": Mc, "Mm": Mm, "p1": p1, "p2": p2, "q1": q1, "q2": q2}
