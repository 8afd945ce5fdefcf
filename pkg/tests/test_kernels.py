import numpy as np
import pytest

from diophant import kernels
from diophant.kernels import get_backend

cy = pytest.importorskip("diophant._ckernels")
py = get_backend("python")


@pytest.fixture
def data():
    rng = np.random.default_rng(11)
    exps = rng.multinomial(5, [0.25] * 4, size=30).astype(np.int64)
    coeffs = rng.normal(size=30) + 1j * rng.normal(size=30)
    pts = rng.normal(size=(500, 4)) + 1j * rng.normal(size=(500, 4))
    return exps, coeffs.astype(complex), pts.astype(complex)


def test_active_backend_is_known():
    assert kernels.BACKEND in ("cython", "python")


def test_poly_eval_agrees(data):
    np.testing.assert_allclose(cy.poly_eval(*data), py.poly_eval(*data), rtol=1e-12)


def test_grad_agrees(data):
    v1, g1 = cy.poly_eval_grad(*data)
    v2, g2 = py.poly_eval_grad(*data)
    np.testing.assert_allclose(v1, v2, rtol=1e-12)
    np.testing.assert_allclose(g1, g2, rtol=1e-11, atol=1e-12)


def test_log_abs_sums_agree(data):
    a, b = cy.log_abs_sums(*data), py.log_abs_sums(*data)
    assert a[2] == b[2]
    assert a[0] == pytest.approx(b[0], rel=1e-12)
    assert a[1] == pytest.approx(b[1], rel=1e-12)


def test_min_subspace_distance_agrees(data):
    rng = np.random.default_rng(3)
    bases = np.stack([np.linalg.qr(rng.normal(size=(4, 2)))[0].T for _ in range(12)]).astype(complex)
    pts = data[2] / np.linalg.norm(data[2], axis=1, keepdims=True)
    # without early exit both scan every sample
    np.testing.assert_allclose(cy.min_subspace_distance(bases, pts, 0.0),
                               py.min_subspace_distance(bases, pts, 0.0), rtol=1e-10)
    # with a threshold only the accept/reject decision is shared
    thr = 0.3
    a = cy.min_subspace_distance(bases, pts, thr) >= thr
    b = py.min_subspace_distance(bases, pts, thr) >= thr
    assert (a == b).all()
