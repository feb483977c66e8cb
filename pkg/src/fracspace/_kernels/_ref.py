"""Reference kernel backend (pure NumPy).

Same contract as the compiled backend in _fast.pyx; used when the
extension is unavailable or FRACSPACE_PURE is set.
"""
import numpy as np

# cap the broadcast buffer at ~8M doubles so huge (t, mode) products
# do not balloon memory
_CHUNK = 8 * 1024 * 1024


def k2_batch(lam, c2, ts):
    """K(u,t)^2 for a spectral pair at many t.

    lam: eigenvalues (m,), c2: squared coefficients (m,), ts: (p,).
    Returns out (p,) with out[i] = sum_j ts[i]^2 lam[j]^2 c2[j] / (1 + ts[i]^2 lam[j]^2).
    """
    lam = np.asarray(lam, dtype=np.float64)
    c2 = np.asarray(c2, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    m = lam.shape[0]
    out = np.empty(ts.shape[0], dtype=np.float64)
    step = max(1, _CHUNK // max(m, 1))
    lam2 = lam * lam
    for lo in range(0, ts.shape[0], step):
        t2 = ts[lo : lo + step, None] ** 2
        w = t2 * lam2[None, :]
        out[lo : lo + step] = ((w / (1.0 + w)) * c2[None, :]).sum(axis=1)
    return out
