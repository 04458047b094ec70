"""Problem and solution records shared by the solver modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .materials import MaterialScales

PROFILE_SAMPLES = 201
TANH_SATURATION = 40.0

MODELS = (
    "cauchy",
    "relaxed",
    "micro-stretch",
    "cosserat",
    "couple-stress",
    "micro-void",
    "micromorphic",
    "micro-strain",
    "second-gradient",
)

VARIANTS: dict[str, tuple[str, ...]] = {
    "relaxed": ("zeroPoisson-oneCurv", "anyPoisson-oneCurv", "zeroPoisson-fullCurv", "general"),
    "couple-stress": ("indeterminate", "modified", "pseudo-consistent"),
    "second-gradient": ("oneCurv-zeroPoisson", "oneCurv", "full"),
}

DEFAULT_VARIANT = {
    "relaxed": "general",
    "couple-stress": "indeterminate",
    "second-gradient": "full",
}

BOUNDED_MODELS = ("cauchy", "relaxed", "micro-void", "micro-strain")
UNBOUNDED_MODELS = ("micro-stretch", "cosserat", "couple-stress", "micromorphic", "second-gradient")
SEMI_ANALYTIC_MODELS = ("micromorphic", "micro-strain")


class UnsupportedVariantError(ValueError):
    """Raised for an unknown model or a variant that does not apply."""


def check_model(model: str, variant: str | None) -> str | None:
    """Validate a model/variant pair and return the resolved variant."""
    if model not in MODELS:
        raise UnsupportedVariantError(f"unknown model {model!r}")
    choices = VARIANTS.get(model)
    if choices is None:
        if variant not in (None, ""):
            raise UnsupportedVariantError(f"model {model!r} has no variants")
        return None
    if variant in (None, ""):
        return DEFAULT_VARIANT[model]
    if variant not in choices:
        raise UnsupportedVariantError(
            f"variant {variant!r} not valid for {model!r}; choose from {', '.join(choices)}"
        )
    return variant


def model_variants(model: str) -> tuple[str | None, ...]:
    return VARIANTS.get(model, (None,))


@dataclass(frozen=True)
class BendingProblem:
    """Cylindrical bending of a plate of thickness ``h`` under curvature ``kappa``."""

    model: str
    scales: MaterialScales
    h: float = 1.0
    kappa: float = 1.0
    variant: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", check_model(self.model, self.variant))
        if not self.h > 0.0:
            raise ValueError(f"thickness must be positive, got {self.h}")
        if not math.isfinite(self.kappa):
            raise ValueError("curvature must be finite")

    @property
    def Lc_over_h(self) -> float:
        return self.scales.Lc / self.h

    @property
    def norm_moment(self) -> float:
        """``h^3/12 * kappa``, the moment normalization."""
        return self.h**3 / 12.0 * self.kappa

    def with_Lc(self, Lc: float) -> "BendingProblem":
        return replace(self, scales=self.scales.with_(Lc=Lc))

    def with_(self, **changes) -> "BendingProblem":
        return replace(self, **changes)


def sech(phi: float) -> float:
    """Overflow-free ``1 / cosh(phi)``."""
    a = abs(phi)
    return 2.0 * math.exp(-a) / (1.0 + math.exp(-2.0 * a))


def tanh_sat(phi: float) -> float:
    if phi > TANH_SATURATION:
        return 1.0
    if phi < -TANH_SATURATION:
        return -1.0
    return math.tanh(phi)


def hyp_ratio(b: float, x, h: float, odd: bool) -> np.ndarray:
    """``sinh(b x) / cosh(b h / 2)`` (``odd``) or ``cosh(b x) / cosh(b h / 2)`` for ``|x| <= h/2``."""
    x = np.asarray(x, dtype=float)
    phi = 0.5 * b * h
    den = 1.0 + math.exp(-2.0 * phi)
    plus = np.exp(b * x - phi)
    minus = np.exp(-b * x - phi)
    return (plus - minus) / den if odd else (plus + minus) / den


@dataclass(frozen=True)
class Field:
    """Through-thickness field ``poly(x) + sum amp * sinh(b x)/cosh(b h/2) + sum amp * cosh(b x)/cosh(b h/2)``.

    ``poly`` lists coefficients in increasing powers of ``x``. Calling the
    field with ``d > 0`` returns the ``d``-th derivative, computed exactly.
    """

    h: float
    poly: tuple[float, ...] = (0.0,)
    odd: tuple[tuple[float, float], ...] = ()
    even: tuple[tuple[float, float], ...] = ()

    def __call__(self, x, d: int = 0):
        if d < 0:
            raise ValueError("derivative order must be >= 0")
        f = self
        for _ in range(d):
            f = f.derivative()
        return f._eval(x)

    def _eval(self, x):
        xa = np.asarray(x, dtype=float)
        out = np.polynomial.polynomial.polyval(xa, np.asarray(self.poly, dtype=float))
        out = out + np.zeros_like(xa)
        for amp, b in self.odd:
            out = out + amp * hyp_ratio(b, xa, self.h, True)
        for amp, b in self.even:
            out = out + amp * hyp_ratio(b, xa, self.h, False)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def derivative(self) -> "Field":
        p = np.polynomial.polynomial.polyder(np.asarray(self.poly, dtype=float))
        if len(p) == 0:
            p = np.zeros(1)
        return Field(
            h=self.h,
            poly=tuple(float(c) for c in p),
            odd=tuple((amp * b, b) for amp, b in self.even),
            even=tuple((amp * b, b) for amp, b in self.odd),
        )

    def antiderivative(self) -> "Field":
        """Antiderivative that vanishes at ``x = 0``."""
        p = list(np.polynomial.polynomial.polyint(np.asarray(self.poly, dtype=float)))
        const = 0.0
        for amp, b in self.odd:
            const -= amp / b * sech(0.5 * b * self.h)
        p[0] += const
        return Field(
            h=self.h,
            poly=tuple(float(c) for c in p),
            odd=tuple((amp / b, b) for amp, b in self.even),
            even=tuple((amp / b, b) for amp, b in self.odd),
        )

    def scaled(self, c: float) -> "Field":
        return Field(
            h=self.h,
            poly=tuple(c * v for v in self.poly),
            odd=tuple((c * a, b) for a, b in self.odd),
            even=tuple((c * a, b) for a, b in self.even),
        )

    def __add__(self, other: "Field") -> "Field":
        n = max(len(self.poly), len(other.poly))
        p = [0.0] * n
        for i, v in enumerate(self.poly):
            p[i] += v
        for i, v in enumerate(other.poly):
            p[i] += v
        return Field(h=self.h, poly=tuple(p), odd=self.odd + other.odd, even=self.even + other.even)

    def __sub__(self, other: "Field") -> "Field":
        return self + other.scaled(-1.0)

    def __mul__(self, c: float) -> "Field":
        return self.scaled(float(c))

    __rmul__ = __mul__

    def perturbed(self, rel: float) -> "Field":
        """Copy with every hyperbolic amplitude scaled by ``1 + rel``."""
        f = 1.0 + rel
        return replace(
            self,
            odd=tuple((a * f, b) for a, b in self.odd),
            even=tuple((a * f, b) for a, b in self.even),
        )


def linear_field(h: float, slope: float, offset: float = 0.0) -> Field:
    return Field(h=h, poly=(offset, slope))


@dataclass(frozen=True)
class BendingSolution:
    """Profiles, coefficient table, moments and energy for one bending problem.

    ``profiles`` maps field names to callables ``f(x2, d=0)``; ``Mc`` and ``Mm``
    are moments per unit width and ``Wtot`` the energy per unit area.
    """

    problem: BendingProblem
    profiles: dict[str, Callable]
    coeffs: dict[str, float]
    Mc: float
    Mm: float
    Wtot: float
    method: str = "closed-form"
    extras: dict = field(default_factory=dict)

    @property
    def Deff(self) -> float:
        return (self.Mc + self.Mm) / self.problem.kappa

    @property
    def Deff_energy(self) -> float:
        return 2.0 * self.Wtot / self.problem.kappa**2

    @property
    def Mc_norm(self) -> float:
        return self.Mc / self.problem.norm_moment

    @property
    def Mm_norm(self) -> float:
        return self.Mm / self.problem.norm_moment

    @property
    def Wtot_norm(self) -> float:
        p = self.problem
        return self.Wtot / (0.5 * p.h**3 / 12.0 * p.kappa**2)

    def grid(self, n: int = PROFILE_SAMPLES) -> np.ndarray:
        h = self.problem.h
        return np.linspace(-0.5 * h, 0.5 * h, n)

    def samples(self, n: int = PROFILE_SAMPLES, fields=None) -> dict[str, np.ndarray]:
        """Uniform samples of the profiles over ``[-h/2, h/2]``."""
        x = self.grid(n)
        names = list(self.profiles) if fields is None else list(fields)
        out = {"x2": x}
        for name in names:
            if name not in self.profiles:
                raise KeyError(f"field {name!r} not defined for model {self.problem.model!r}")
            out[name] = np.asarray(self.profiles[name](x), dtype=float)
        return out
