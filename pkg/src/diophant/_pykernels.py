"""NumPy fallback for the compiled kernels in ``_ckernels.pyx``.

Every function has the same signature and return convention as its compiled
twin, so :mod:`diophant.kernels` can swap them freely.
"""
import numpy as np

_BLOCK = 4096


def _monomials(exps, pts):
    # (N, T) table of x^alpha
    return np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)


def poly_eval(exps, coeffs, pts):
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    pts = np.asarray(pts, dtype=np.complex128)
    out = np.empty(pts.shape[0], dtype=np.complex128)
    for lo in range(0, pts.shape[0], _BLOCK):
        blk = pts[lo:lo + _BLOCK]
        out[lo:lo + _BLOCK] = _monomials(exps, blk) @ coeffs
    return out


def poly_eval_grad(exps, coeffs, pts):
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    pts = np.asarray(pts, dtype=np.complex128)
    nv = exps.shape[1]
    vals = poly_eval(exps, coeffs, pts)
    grads = np.zeros((pts.shape[0], nv), dtype=np.complex128)
    for j in range(nv):
        mask = exps[:, j] > 0
        if not mask.any():
            continue
        dexps = exps[mask].copy()
        dexps[:, j] -= 1
        grads[:, j] = poly_eval(dexps, coeffs[mask] * exps[mask, j], pts)
    return vals, grads


def log_abs_sums(exps, coeffs, pts):
    vals = np.abs(poly_eval(exps, coeffs, pts))
    nz = vals > 0.0
    logs = np.log(vals[nz])
    return float(logs.sum()), float((logs * logs).sum()), int((~nz).sum())


def min_subspace_distance(bases, samples, threshold):
    bases = np.asarray(bases, dtype=np.complex128)
    samples = np.asarray(samples, dtype=np.complex128)
    norm2 = np.einsum("si,si->s", samples.conj(), samples).real
    out = np.empty(bases.shape[0], dtype=np.float64)
    for c in range(bases.shape[0]):
        coef = bases[c].conj() @ samples.T  # (k, N)
        proj2 = np.einsum("ks,ks->s", coef.conj(), coef).real
        d2 = np.clip(1.0 - proj2 / norm2, 0.0, None)
        out[c] = min(2.0, float(np.sqrt(d2.min()))) if len(d2) else 2.0
    return out
