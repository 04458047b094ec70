"""Material parameter records, homogenization and coefficient conversions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import tensor as t3


class DegenerateMaterialError(ValueError):
    """Raised when moduli are non-positive or a homogenization denominator vanishes."""


class IllPosedCurvatureError(ValueError):
    """Raised when the curvature weights make a bending problem ill-posed."""


@dataclass(frozen=True)
class IsotropicModuli:
    """Shear modulus ``mu`` and first Lame parameter ``lam``."""

    mu: float
    lam: float = 0.0

    @classmethod
    def from_bulk(cls, mu: float, kappa: float) -> "IsotropicModuli":
        return cls(mu=mu, lam=kappa - 2.0 * mu / 3.0)

    @property
    def kappa(self) -> float:
        """3D bulk modulus."""
        return (2.0 * self.mu + 3.0 * self.lam) / 3.0

    @property
    def nu(self) -> float:
        return self.lam / (2.0 * (self.lam + self.mu))

    @property
    def E(self) -> float:
        return self.mu * (3.0 * self.lam + 2.0 * self.mu) / (self.lam + self.mu)

    @property
    def lambda_hat(self) -> float:
        """Plane-stress Lame parameter."""
        return 2.0 * self.lam * self.mu / (self.lam + 2.0 * self.mu)

    @property
    def plate_modulus(self) -> float:
        """``4 mu (lam + mu) / (lam + 2 mu)``, the plane-stress axial modulus."""
        return 4.0 * self.mu * (self.lam + self.mu) / (self.lam + 2.0 * self.mu)

    def bending_stiffness(self, h: float) -> float:
        """Cylindrical bending stiffness ``h^3/12 * 4 mu (lam + mu) / (lam + 2 mu)``."""
        return h**3 / 12.0 * self.plate_modulus

    def validate(self, name: str = "moduli") -> "IsotropicModuli":
        if not (self.mu > 0.0) or not (self.kappa > 0.0):
            raise DegenerateMaterialError(
                f"{name}: need mu > 0 and kappa > 0, got mu={self.mu}, kappa={self.kappa}"
            )
        return self


@dataclass(frozen=True)
class MaterialScales:
    """Meso (``e``) and micro moduli plus the curvature parameters.

    ``micro`` may be ``None`` for models that only use one set of moduli; the
    macro moduli are then taken equal to ``e``.
    """

    e: IsotropicModuli
    micro: IsotropicModuli | None = None
    mu_c: float = 0.0
    mu: float = 1.0
    Lc: float = 0.0
    a1: float = 1.0
    a2: float = 1.0
    a3: float = 1.0

    def __post_init__(self):
        if self.mu_c < 0.0:
            raise DegenerateMaterialError(f"mu_c must be >= 0, got {self.mu_c}")
        if self.Lc < 0.0:
            raise DegenerateMaterialError(f"Lc must be >= 0, got {self.Lc}")
        if self.mu < 0.0:
            raise DegenerateMaterialError(f"mu must be >= 0, got {self.mu}")
        for name in ("a1", "a2", "a3"):
            if getattr(self, name) < 0.0:
                raise IllPosedCurvatureError(f"{name} must be >= 0")

    @property
    def macro(self) -> IsotropicModuli:
        return homogenize(self)

    @property
    def mu_L2(self) -> float:
        return self.mu * self.Lc**2

    def with_(self, **changes) -> "MaterialScales":
        return replace(self, **changes)

    def require_micro(self) -> IsotropicModuli:
        if self.micro is None:
            raise DegenerateMaterialError("this model needs micro moduli")
        return self.micro


def homogenize(scales: MaterialScales) -> IsotropicModuli:
    """Macro moduli from the harmonic means of shear and bulk moduli."""
    if scales.micro is None:
        return scales.e
    e, m = scales.e, scales.micro
    ds, dk = e.mu + m.mu, e.kappa + m.kappa
    if ds == 0.0 or dk == 0.0:
        raise DegenerateMaterialError("homogenization denominator vanishes")
    mu_mac = e.mu * m.mu / ds
    kappa_mac = e.kappa * m.kappa / dk
    return IsotropicModuli.from_bulk(mu_mac, kappa_mac)


MINDLIN_INDICES = (1, 2, 3, 4, 5, 8, 10, 11, 13, 14, 15)


@dataclass(frozen=True)
class MindlinCoefficients:
    """Isotropic 18-parameter micromorphic coefficients.

    ``a_hat[i - 1]`` holds the curvature weight with index ``i``.
    """

    mu_hat: float
    lambda_hat: float
    b1: float
    b2: float
    b3: float
    g1: float
    g2: float
    a_hat: tuple[float, ...] = field(default=(0.0,) * 15)

    def a(self, i: int) -> float:
        return self.a_hat[i - 1]

    def as_dict(self) -> dict[str, float]:
        out = {
            "mu_hat": self.mu_hat,
            "lambda_hat": self.lambda_hat,
            "b1": self.b1,
            "b2": self.b2,
            "b3": self.b3,
            "g1": self.g1,
            "g2": self.g2,
        }
        for i in MINDLIN_INDICES:
            out[f"a_hat{i}"] = self.a(i)
        return out


def _a_hat(values: dict[int, float]) -> tuple[float, ...]:
    out = [0.0] * 15
    for i, v in values.items():
        out[i - 1] = float(v)
    return tuple(out)


def _elastic_part(scales: MaterialScales) -> dict[str, float]:
    e, m = scales.e, scales.require_micro()
    return dict(
        mu_hat=m.mu,
        lambda_hat=m.lam,
        b1=e.lam + m.lam,
        b2=e.mu + m.mu + scales.mu_c,
        b3=e.mu + m.mu - scales.mu_c,
        g1=-m.lam,
        g2=-2.0 * m.mu,
    )


def to_mindlin_reduced(scales: MaterialScales) -> MindlinCoefficients:
    """Mindlin form of the reduced micromorphic energy with gradient curvature."""
    c = scales.mu_L2
    a1, a2, a3 = scales.a1, scales.a2, scales.a3
    a_hat = _a_hat(
        {
            4: c * (2.0 * a3 - 3.0 * a1) / 9.0,
            10: c * (a1 + a2) / 2.0,
            13: c * (a1 - a2) / 2.0,
        }
    )
    return MindlinCoefficients(**_elastic_part(scales), a_hat=a_hat)


def to_mindlin_relaxed(scales: MaterialScales) -> MindlinCoefficients:
    """Mindlin form of the relaxed micromorphic (Curl-based) curvature."""
    c = scales.mu_L2
    a1, a2, a3 = scales.a1, scales.a2, scales.a3
    a10 = c * (2.0 * a1 + a3) / 3.0
    a13 = c * (a1 - a3) / 3.0
    a_hat = _a_hat(
        {
            1: c * (a1 - a2) / 2.0,
            3: c * (a2 - a1) / 2.0,
            4: c * (a2 - a1) / 2.0,
            10: a10,
            11: c * (a3 - a1) / 3.0,
            13: a13,
            14: a13,
            15: -a10,
        }
    )
    return MindlinCoefficients(**_elastic_part(scales), a_hat=a_hat)


@dataclass(frozen=True)
class SecondGradientCoefficients:
    """Five isotropic second gradient weights ``a_hat1..a_hat5``."""

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float

    def as_dict(self) -> dict[str, float]:
        return {f"a_hat{i}": getattr(self, f"a{i}") for i in range(1, 6)}


def to_mindlin_second_gradient(
    mu: float, Lc: float, a1: float, a2: float, a3: float
) -> SecondGradientCoefficients:
    c = mu * Lc**2
    return SecondGradientCoefficients(
        a1=0.0,
        a2=c * (2.0 * a3 - 3.0 * a1) / 18.0,
        a3=0.0,
        a4=c * (a1 + a2) / 4.0,
        a5=c * (a1 - a2) / 4.0,
    )


# Curvature energy evaluators. ``chi`` is a constant third-order gradient.


def mindlin_curvature_energy(coeffs: MindlinCoefficients, chi) -> float:
    """Curvature part of the 18-parameter energy, ``chi[i, j, k] = d_i P_jk``."""
    x = np.asarray(chi, dtype=float)
    a = coeffs.a
    terms = (
        a(1) * np.einsum("iik,kjj", x, x),
        a(2) * np.einsum("iik,jkj", x, x),
        0.5 * a(3) * np.einsum("iik,jjk", x, x),
        0.5 * a(4) * np.einsum("ijj,ikk", x, x),
        a(5) * np.einsum("ijj,kik", x, x),
        0.5 * a(8) * np.einsum("iji,kjk", x, x),
        0.5 * a(10) * np.einsum("ijk,ijk", x, x),
        a(11) * np.einsum("ijk,jki", x, x),
        0.5 * a(13) * np.einsum("ijk,ikj", x, x),
        0.5 * a(14) * np.einsum("ijk,jik", x, x),
        0.5 * a(15) * np.einsum("ijk,kji", x, x),
    )
    return float(sum(terms))


def reduced_curvature_energy(scales: MaterialScales, chi) -> float:
    """``mu Lc^2 / 2 * sum_i (a1 |dev sym d_i P|^2 + a2 |skew d_i P|^2 + 2/9 a3 tr^2 d_i P)``."""
    x = np.asarray(chi, dtype=float)
    total = 0.0
    for i in range(3):
        G = x[i]
        total += (
            scales.a1 * t3.norm2(t3.dev_sym(G))
            + scales.a2 * t3.norm2(t3.skew(G))
            + 2.0 / 9.0 * scales.a3 * t3.tr(G) ** 2
        )
    return 0.5 * scales.mu_L2 * total


def relaxed_curvature_energy(scales: MaterialScales, chi) -> float:
    """``mu Lc^2 / 2 (a1 |dev sym Curl P|^2 + a2 |skew Curl P|^2 + a3/3 tr^2 Curl P)``."""
    x = np.asarray(chi, dtype=float)
    C = t3.curl(x.transpose(1, 2, 0))
    return 0.5 * scales.mu_L2 * (
        scales.a1 * t3.norm2(t3.dev_sym(C))
        + scales.a2 * t3.norm2(t3.skew(C))
        + scales.a3 / 3.0 * t3.tr(C) ** 2
    )


def second_gradient_curvature_energy(scales: MaterialScales, chi) -> float:
    """Three-parameter second gradient curvature, ``chi[i, j, k] = u_k,ij``."""
    x = np.asarray(chi, dtype=float)
    total = 0.0
    for i in range(3):
        # (d_i Du)_ab = u_a,bi = chi[b, i, a]
        M = x[:, i, :].T
        total += (
            scales.a1 * t3.norm2(t3.dev_sym(M))
            + scales.a2 * t3.norm2(t3.skew(M))
            + 2.0 / 9.0 * scales.a3 * t3.tr(M) ** 2
        )
    return 0.5 * scales.mu_L2 * total


def second_gradient_mindlin_energy(c: SecondGradientCoefficients, chi) -> float:
    x = np.asarray(chi, dtype=float)
    return float(
        c.a1 * np.einsum("iik,kjj", x, x)
        + c.a2 * np.einsum("ijj,ikk", x, x)
        + c.a3 * np.einsum("iik,jjk", x, x)
        + c.a4 * np.einsum("ijk,ijk", x, x)
        + c.a5 * np.einsum("ijk,kji", x, x)
    )


@dataclass(frozen=True)
class CosseratClassicCoefficients:
    """Rotation-gradient weights, already scaled by ``mu Lc^2``."""

    alpha: float
    beta: float
    gamma: float


def cosserat_classic(scales: MaterialScales) -> CosseratClassicCoefficients:
    c = scales.mu_L2
    a1, a2, a3 = scales.a1, scales.a2, scales.a3
    return CosseratClassicCoefficients(
        alpha=c * (4.0 * a3 - a1) / 3.0,
        beta=c * (a1 - a2) / 2.0,
        gamma=c * (a1 + a2) / 2.0,
    )


@dataclass(frozen=True)
class LakesResult:
    omega: float
    ell_b: float


def lakes_omega(macro: IsotropicModuli, gamma_tilde: float, h: float) -> LakesResult:
    """Rigidity ratio ``Omega = 1 + 24 (ell_b / h)^2 (1 - nu)`` and bending length ``ell_b``."""
    if not h > 0.0:
        raise DegenerateMaterialError(f"h must be positive, got {h}")
    macro.validate("macro")
    ell_b2 = gamma_tilde / (4.0 * macro.mu)
    # square ratio taken before the root so exact inputs stay exact
    omega = 1.0 + 24.0 * ell_b2 / h**2 * (1.0 - macro.nu)
    ell_b = math.sqrt(ell_b2)
    return LakesResult(omega=omega, ell_b=ell_b)


def gamma_tilde(scales: MaterialScales) -> float:
    """Cosserat bending weight ``mu Lc^2 (a1 + a2) / 2``."""
    return scales.mu_L2 * (scales.a1 + scales.a2) / 2.0


PARAM_KEYS = (
    "mu_e",
    "lambda_e",
    "mu_micro",
    "lambda_micro",
    "mu_c",
    "mu",
    "Lc",
    "a1",
    "a2",
    "a3",
    "h",
)


def scales_from_mapping(data: dict) -> tuple[MaterialScales, float]:
    """Build ``(MaterialScales, h)`` from a flat mapping, rejecting unknown keys."""
    unknown = sorted(set(data) - set(PARAM_KEYS))
    if unknown:
        raise ValueError(f"unknown parameter keys: {', '.join(unknown)}")
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"parameter {key} must be a number")
    if "mu_e" not in data:
        raise ValueError("parameter mu_e is required")
    e = IsotropicModuli(float(data["mu_e"]), float(data.get("lambda_e", 0.0)))
    micro = None
    if "mu_micro" in data:
        micro = IsotropicModuli(float(data["mu_micro"]), float(data.get("lambda_micro", 0.0)))
    elif "lambda_micro" in data:
        raise ValueError("lambda_micro given without mu_micro")
    scales = MaterialScales(
        e=e,
        micro=micro,
        mu_c=float(data.get("mu_c", 0.0)),
        mu=float(data.get("mu", 1.0)),
        Lc=float(data.get("Lc", 0.0)),
        a1=float(data.get("a1", 1.0)),
        a2=float(data.get("a2", 1.0)),
        a3=float(data.get("a3", 1.0)),
    )
    h = float(data.get("h", 1.0))
    if not h > 0.0:
        raise ValueError(f"h must be positive, got {h}")
    return scales, h


def load_params(path: str | Path) -> tuple[MaterialScales, float]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("parameter file must hold a JSON object")
    return scales_from_mapping(data)


def scales_to_mapping(scales: MaterialScales, h: float) -> dict[str, float]:
    out = {"mu_e": scales.e.mu, "lambda_e": scales.e.lam}
    if scales.micro is not None:
        out["mu_micro"] = scales.micro.mu
        out["lambda_micro"] = scales.micro.lam
    out.update(mu_c=scales.mu_c, mu=scales.mu, Lc=scales.Lc, a1=scales.a1, a2=scales.a2, a3=scales.a3, h=h)
    return out
