"""Semi-analytic bending solutions for the micromorphic and micro-strain models.

After the lateral displacement ``v'`` is eliminated, the diagonal
microdistortion ``z = (P11, P22, P33)`` minimizes

    int  1/2 z.S z + e g.z + c0 e^2 + 1/2 z'.K z'  dx2

which gives ``K z'' = S z + g e`` with ``z' = 0`` on both faces. The pencil
``(S, K)`` is symmetric positive definite, so the homogeneous solutions are
``sinh(w_j x2)`` along the generalized eigenvectors and never degenerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .materials import DegenerateMaterialError, IllPosedCurvatureError, MaterialScales, homogenize
from .solution import BendingProblem, BendingSolution, Field, UnsupportedVariantError

GAUSS_NODES = 64
COND_LIMIT = 1e12
LIMIT_RATIO = 1e-9

_J = np.ones((3, 3))
_PLANE = np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 1.0]])

FIELD_NAMES = {
    "micromorphic": ("P11", "P22", "P33"),
    "micro-strain": ("S11", "S22", "S33"),
}


@dataclass(frozen=True)
class LinearOdeSystem:
    """``K z'' = S z + load * kappa * x2`` with Neumann rows ``K z'(+-h/2) = 0``.

    ``C_hat`` is the constant curvature energy density per ``Lc^2 kappa^2``
    and ``c0`` the coefficient of ``e^2`` in the local energy.
    """

    model: str
    K: np.ndarray
    S: np.ndarray
    load: np.ndarray
    c0: float
    C_hat: float
    names: tuple[str, ...]
    lam_e: float
    mu_e: float
    Lc: float
    kappa: float = 1.0

    @property
    def dim(self) -> int:
        return self.S.shape[0]

    @property
    def companion(self) -> np.ndarray:
        """First-order form ``(z, z')' = A (z, z')`` of the homogeneous system."""
        n = self.dim
        A = np.zeros((2 * n, 2 * n))
        A[:n, n:] = np.eye(n)
        A[n:, :n] = np.linalg.solve(self.K, self.S)
        return A

    def boundary_rows(self) -> np.ndarray:
        """Rows acting on ``(z, z')`` at a face; the conditions are ``rows @ state = 0``."""
        n = self.dim
        return np.hstack([np.zeros((n, n)), self.K])

    def residual(self, z: list[Field], x) -> np.ndarray:
        """Pointwise ``K z'' - S z - load e`` for fields ``z``."""
        x = np.asarray(x, dtype=float)
        Z = np.array([f(x) for f in z])
        Z2 = np.array([f(x, 2) for f in z])
        return self.K @ Z2 - self.S @ Z - np.outer(self.load, self.kappa * x)


def _check_curvature(scales: MaterialScales) -> None:
    if scales.Lc > 0.0 and not (scales.a1 > 0.0 and scales.a3 > 0.0 and scales.mu > 0.0):
        raise IllPosedCurvatureError("need mu > 0, a1 > 0 and a3 > 0 for a regular curvature operator")


def _assemble(model: str, p: BendingProblem) -> LinearOdeSystem:
    s = p.scales
    e = s.e.validate("meso")
    m = s.require_micro().validate("micro")
    _check_curvature(s)
    lam_hat_e = e.lambda_hat
    S = 2.0 * e.mu * np.diag([1.0, 0.0, 1.0]) + lam_hat_e * _PLANE + 2.0 * m.mu * np.eye(3) + m.lam * _J
    load = np.array([2.0 * e.mu + lam_hat_e, 0.0, lam_hat_e])
    K = s.mu_L2 * (s.a1 * (np.eye(3) - _J / 3.0) + 2.0 / 9.0 * s.a3 * _J)
    C_hat = s.mu * s.a2 if model == "micromorphic" else 0.0
    return LinearOdeSystem(
        model=model,
        K=K,
        S=S,
        load=load,
        c0=e.mu + 0.5 * lam_hat_e,
        C_hat=C_hat,
        names=FIELD_NAMES[model],
        lam_e=e.lam,
        mu_e=e.mu,
        Lc=s.Lc,
        kappa=p.kappa,
    )


def assemble_micromorphic(p: BendingProblem) -> LinearOdeSystem:
    if p.model != "micromorphic":
        raise UnsupportedVariantError("assemble_micromorphic needs a micromorphic problem")
    return _assemble("micromorphic", p)


def assemble_microstrain(p: BendingProblem) -> LinearOdeSystem:
    if p.model != "micro-strain":
        raise UnsupportedVariantError("assemble_microstrain needs a micro-strain problem")
    return _assemble("micro-strain", p)


def graded_gauss_legendre(h: float, width: float, n: int = GAUSS_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on ``[-h/2, h/2]`` with panels doubling away from each face.

    The first panel has length ``width``, so boundary layers of that thickness
    are resolved. One panel is used when ``width >= h/4``.
    """
    half = 0.5 * h
    upper = [0.0, half]
    d = width
    while d < 0.5 * half:
        upper.append(half - d)
        d *= 2.0
    upper = np.array(upper)
    cuts = np.unique(np.concatenate([upper, -upper]))
    t, w = np.polynomial.legendre.leggauss(n)
    xs, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        xs.append(0.5 * (b - a) * t + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass(frozen=True)
class SemiAnalyticDetails:
    omegas: np.ndarray
    modes: np.ndarray
    constants: np.ndarray
    condition: float
    system: LinearOdeSystem = field(repr=False)
    fields: tuple[Field, ...] = field(repr=False)


def solve_semi_analytic(sys: LinearOdeSystem, p: BendingProblem) -> BendingSolution:
    h, kappa, Lc = p.h, p.kappa, sys.Lc
    H3 = h**3
    zp = -np.linalg.solve(sys.S, sys.load) * kappa
    if Lc < LIMIT_RATIO * h:
        fields = tuple(Field(h=h, poly=(0.0, float(c))) for c in zp)
        omegas = np.full(sys.dim, np.inf)
        Phi = np.eye(sys.dim)
        consts = np.zeros(sys.dim)
        cond = 1.0
    else:
        w2, Phi = eigh(sys.S, sys.K)
        if np.any(w2 <= 0.0):
            raise DegenerateMaterialError(f"pencil is not positive definite, eigenvalues {w2}")
        omegas = np.sqrt(w2)
        cond = float(np.linalg.cond(Phi))
        if not cond < COND_LIMIT:
            raise DegenerateMaterialError(f"boundary system is rank deficient, condition number {cond:.3e}")
        # z'(h/2) = zp + Phi c = 0 with unit basis slopes at the face
        consts = np.linalg.solve(Phi, -zp)
        fields = tuple(
            Field(
                h=h,
                poly=(0.0, float(zp[i])),
                odd=tuple((float(Phi[i, j] * consts[j] / omegas[j]), float(omegas[j])) for j in range(sys.dim)),
            )
            for i in range(sys.dim)
        )
    width = h / 4.0 if not np.all(np.isfinite(omegas)) else min(h / 4.0, 1.0 / float(np.max(omegas)))
    x, w = graded_gauss_legendre(h, width)
    Z = np.array([f(x) for f in fields])
    Zp = np.array([f(x, 1) for f in fields])
    e = kappa * x
    gz = sys.load @ Z
    Mc = float(np.sum(w * x * gz)) + 2.0 * sys.c0 * kappa * H3 / 12.0
    C = sys.C_hat * Lc**2
    Mm = 2.0 * C * kappa * h
    dens = 0.5 * np.einsum("in,ij,jn->n", Z, sys.S, Z) + e * gz + sys.c0 * e**2
    dens = dens + 0.5 * np.einsum("in,ij,jn->n", Zp, sys.K, Zp)
    W = float(np.sum(w * dens)) + C * kappa**2 * h

    names = sys.names
    p11, p22, p33 = fields
    strain = Field(h=h, poly=(0.0, kappa))
    ve = sys.lam_e / (sys.lam_e + 2.0 * sys.mu_e)
    vp = p22 + (strain + p11 + p33) * ve
    profiles = {names[0]: p11, names[1]: p22, names[2]: p33, "v'": vp, "v": vp.antiderivative()}

    mac = homogenize(p.scales)
    coeffs = {
        "D_macro": mac.plate_modulus / 12.0,
        "D_e": p.scales.e.plate_modulus / 12.0,
        "condition": cond,
    }
    for j, om in enumerate(omegas):
        coeffs[f"f{j + 1}"] = float(om * Lc) if math.isfinite(om) else math.inf
    details = SemiAnalyticDetails(omegas, Phi, consts, cond, sys, fields)
    return BendingSolution(
        problem=p,
        profiles=profiles,
        coeffs=coeffs,
        Mc=Mc,
        Mm=Mm,
        Wtot=W,
        method="semi-analytic",
        extras={"details": details},
    )


def solve_problem(p: BendingProblem) -> BendingSolution:
    if p.model == "micromorphic":
        return solve_semi_analytic(assemble_micromorphic(p), p)
    if p.model == "micro-strain":
        return solve_semi_analytic(assemble_microstrain(p), p)
    raise UnsupportedVariantError(f"no semi-analytic solver for {p.model!r}")


def penalized_scales(scales: MaterialScales, t: float) -> MaterialScales:
    """Scale the meso moduli and the couple modulus by ``t``."""
    e = scales.e
    return scales.with_(e=type(e)(e.mu * t, e.lam * t), mu_c=scales.mu_c * t)


def penalized_second_gradient_limit(p: BendingProblem, t: float) -> BendingSolution:
    """Micromorphic solution with meso moduli and couple modulus scaled by ``t``."""
    if not t >= 1.0:
        raise ValueError(f"penalty factor must be >= 1, got {t}")
    if p.model != "micromorphic":
        raise UnsupportedVariantError("penalization applies to the micromorphic model")
    q = p.with_(scales=penalized_scales(p.scales, t))
    sol = solve_problem(q)
    sol.coeffs["penalty"] = float(t)
    return sol


def second_gradient_target(p: BendingProblem) -> BendingProblem:
    """Second gradient problem with the micro moduli and curvature weights of ``p``."""
    s = p.scales
    return BendingProblem(
        "second-gradient",
        s.with_(e=s.require_micro(), micro=None),
        p.h,
        p.kappa,
        "full",
    )
