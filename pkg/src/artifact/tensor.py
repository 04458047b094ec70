"""Small 3x3 tensor algebra and the matrix Curl operator.

Tensors are plain ``(3, 3)`` numpy arrays and vectors are ``(3,)`` arrays.
Every function returns a new array and never mutates its inputs.

Conventions
-----------
* ``(Curl P)_ij = eps_jkl d_k P_il``: row ``i`` of ``Curl P`` is the vector
  curl of row ``i`` of ``P``.
* ``(m x b)_ij = m_ik eps_kjh b_h``: row ``i`` of ``m x b`` is
  ``b x m_i``.
* ``anti(a) b = a x b`` and ``axl`` is its inverse on skew tensors.
* A gradient array ``grad`` stores ``grad[i, j, k] = d_k P_ij``.
"""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

IDENTITY = np.eye(3)

EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_i, _j, _k] = 1.0
    EPSILON[_i, _k, _j] = -1.0

AXL_RTOL = 1e-12


def as_tensor(T) -> np.ndarray:
    arr = np.asarray(T, dtype=float)
    if arr.shape != (3, 3):
        raise ValueError(f"expected a 3x3 tensor, got shape {arr.shape}")
    return arr


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    return arr


def tr(T) -> float:
    return float(np.trace(as_tensor(T)))


def sym(T) -> np.ndarray:
    T = as_tensor(T)
    return 0.5 * (T + T.T)


def skew(T) -> np.ndarray:
    T = as_tensor(T)
    return 0.5 * (T - T.T)


def dev(T) -> np.ndarray:
    T = as_tensor(T)
    return T - np.trace(T) / 3.0 * IDENTITY


def dev_sym(T) -> np.ndarray:
    return dev(sym(T))


def sphere(T) -> np.ndarray:
    return np.trace(as_tensor(T)) / 3.0 * IDENTITY


def inner(A, B) -> float:
    """Frobenius inner product."""
    return float(np.sum(as_tensor(A) * as_tensor(B)))


def norm2(T) -> float:
    """Squared Frobenius norm."""
    T = as_tensor(T)
    return float(np.sum(T * T))


def decompose(T) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthogonal split ``T = dev sym T + skew T + (tr T / 3) 1``."""
    T = as_tensor(T)
    return dev_sym(T), skew(T), sphere(T)


def anti(v) -> np.ndarray:
    """Skew tensor with ``anti(v) @ b == cross(v, b)``."""
    a1, a2, a3 = as_vector(v)
    return np.array([[0.0, -a3, a2], [a3, 0.0, -a1], [-a2, a1, 0.0]])


def axl(A, rtol: float = AXL_RTOL) -> np.ndarray:
    """Axial vector of a skew tensor.

    Raises ``ValueError`` if ``||sym A|| > rtol * ||A||``.
    """
    A = as_tensor(A)
    size = np.linalg.norm(A)
    if np.linalg.norm(sym(A)) > rtol * size:
        raise ValueError("axl requires a skew-symmetric tensor")
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


def cross_tensor_vector(m, b) -> np.ndarray:
    """Row-wise cross product ``(m x b)_ij = m_ik eps_kjh b_h``."""
    return as_tensor(m) @ anti(as_vector(b)).T


def curl(grad) -> np.ndarray:
    """Matrix Curl from an analytic gradient ``grad[i, j, k] = d_k P_ij``."""
    grad = np.asarray(grad, dtype=float)
    if grad.shape != (3, 3, 3):
        raise ValueError(f"expected a 3x3x3 gradient, got shape {grad.shape}")
    return np.einsum("jkl,ilk->ij", EPSILON, grad)


def anti_gradient(vec_grad) -> np.ndarray:
    """Gradient of ``anti(a(x))`` given ``vec_grad[i, k] = d_k a_i``."""
    vec_grad = np.asarray(vec_grad, dtype=float)
    out = np.empty((3, 3, 3))
    for k in range(3):
        out[:, :, k] = anti(vec_grad[:, k])
    return out


def nye_residual(vec_grad) -> float:
    """Pointwise Nye mismatch ``||-Curl A - ((D a)^T - tr(D a) 1)||`` for ``A = anti(a)``."""
    G = np.asarray(vec_grad, dtype=float)
    curl_A = curl(anti_gradient(G))
    rhs = G.T - np.trace(G) * IDENTITY
    return float(np.linalg.norm(-curl_A - rhs))


def nye_check(
    avec_field: Callable[[np.ndarray], np.ndarray],
    avec_gradient: Callable[[np.ndarray], np.ndarray],
    points: Iterable | None = None,
) -> float:
    """Maximum Nye residual over sample points.

    ``avec_field`` returns the axial vector at ``x`` and ``avec_gradient`` its
    analytic gradient ``G[i, k] = d_k a_i``. The field value itself does not
    enter the identity; it is evaluated so that inconsistent callers fail loudly.
    """
    if points is None:
        rng = np.random.default_rng(0)
        points = rng.uniform(-1.0, 1.0, size=(16, 3))
    worst = 0.0
    for x in points:
        x = as_vector(x)
        as_vector(avec_field(x))
        worst = max(worst, nye_residual(avec_gradient(x)))
    return worst
