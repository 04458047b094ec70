from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from artifact import tensor as T

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
mats = arrays(np.float64, (3, 3), elements=finite)
vecs = arrays(np.float64, (3,), elements=finite)


def scale(A):
    return 1.0 + np.abs(A).max()


class TestDecomposition:
    @given(mats)
    def test_parts_sum_back(self, A):
        d, s, p = T.decompose(A)
        np.testing.assert_allclose(d + s + p, A, atol=1e-12 * scale(A))

    @given(mats)
    def test_parts_are_orthogonal(self, A):
        d, s, p = T.decompose(A)
        tol = 1e-12 * scale(A) ** 2
        assert abs(T.inner(d, s)) <= tol
        assert abs(T.inner(d, p)) <= tol
        assert abs(T.inner(s, p)) <= tol

    @given(mats)
    def test_norm_is_pythagorean(self, A):
        d, s, p = T.decompose(A)
        np.testing.assert_allclose(T.norm2(A), T.norm2(d) + T.norm2(s) + T.norm2(p),
                                   rtol=1e-12, atol=1e-12 * scale(A) ** 2)

    @given(mats)
    def test_dev_is_traceless(self, A):
        assert abs(T.tr(T.dev(A))) <= 1e-12 * scale(A)
        assert abs(T.tr(T.dev_sym(A))) <= 1e-12 * scale(A)

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            T.sym(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            T.anti(np.zeros(4))


class TestAxial:
    @given(vecs)
    def test_axl_inverts_anti(self, v):
        np.testing.assert_allclose(T.axl(T.anti(v)), v, atol=1e-12 * scale(v))

    @given(vecs, vecs)
    def test_anti_is_cross_product(self, a, b):
        np.testing.assert_allclose(T.anti(a) @ b, np.cross(a, b), atol=1e-9 * scale(a) * scale(b))

    def test_axl_rejects_symmetric_input(self):
        with pytest.raises(ValueError):
            T.axl(np.eye(3))

    def test_anti_of_e3(self):
        np.testing.assert_allclose(T.anti([0.0, 0.0, 1.0]), [[0, -1, 0], [1, 0, 0], [0, 0, 0]])

    @given(mats, vecs)
    def test_row_cross(self, m, b):
        out = T.cross_tensor_vector(m, b)
        expect = np.array([np.cross(b, row) for row in m])  # m_ik eps_kjh b_h = (b x m_i)_j
        np.testing.assert_allclose(out, expect, atol=1e-9 * scale(m) * scale(b))


class TestCurl:
    def test_curl_of_gradient_field_vanishes(self):
        # P = D u for u quadratic: rows are gradients so Curl P = 0
        rng = np.random.default_rng(3)
        Q = rng.normal(size=(3, 3, 3))
        Q = 0.5 * (Q + Q.transpose(0, 2, 1))
        grad = 2.0 * Q  # d_k (Q_ijl x_j x_l)_i gradient: P_ij = 2 Q_ijl x_l, d_k P_ij = 2 Q_ijk
        np.testing.assert_allclose(T.curl(grad), 0.0, atol=1e-12)

    @settings(max_examples=50)
    @given(arrays(np.float64, (3, 3), elements=st.floats(-10, 10)))
    def test_nye_identity_for_linear_fields(self, G):
        assert T.nye_residual(G) <= 1e-12 * scale(G)

    def test_nye_check_over_points(self):
        G = np.arange(9.0).reshape(3, 3)
        assert T.nye_check(lambda x: G @ x, lambda x: G) <= 1e-12

    def test_curl_shape_checked(self):
        with pytest.raises(ValueError):
            T.curl(np.zeros((3, 3)))
