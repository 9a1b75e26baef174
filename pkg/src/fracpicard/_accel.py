"""Inner loops for series arithmetic.

Every kernel exists twice: a numba ``@njit`` version and a plain numpy
version with identical semantics. The numba path is used when numba imports
and ``FRACPICARD_DISABLE_NUMBA`` is unset (or ``0``). Both variants stay
importable as ``<name>_numba`` / ``<name>_numpy`` so tests and the benchmark
can compare them directly.
"""
import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("FRACPICARD_DISABLE_NUMBA", "0").lower() in ("", "0", "false", "no")


def _njit(fn):
    if not HAS_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# -- truncated product ------------------------------------------------------


def _trunc_mul_loop(a, b, n):
    out = np.zeros(n + 1, dtype=np.complex128)
    na = min(a.shape[0], n + 1)
    nb = b.shape[0]
    for i in range(na):
        ai = a[i]
        if ai == 0:
            continue
        top = min(nb, n + 1 - i)
        for j in range(top):
            out[i + j] += ai * b[j]
    return out


def trunc_mul_numpy(a, b, n):
    a = np.asarray(a, dtype=np.complex128)[: n + 1]
    b = np.asarray(b, dtype=np.complex128)[: n + 1]
    out = np.zeros(n + 1, dtype=np.complex128)
    if a.size == 0 or b.size == 0:
        return out
    full = np.convolve(a, b)[: n + 1]
    out[: full.size] = full
    return out


trunc_mul_numba = _njit(_trunc_mul_loop)


# -- F(z, u(z)) by Horner in t -----------------------------------------------


def _compose_loop(c, u, n):
    # c[j, k]: coefficient of z^j t^k
    nj = c.shape[0]
    nk = c.shape[1]
    phi = np.zeros(n + 1, dtype=np.complex128)
    for k in range(nk - 1, -1, -1):
        if k < nk - 1:
            phi = _trunc_mul_loop(phi, u, n)
        for j in range(min(nj, n + 1)):
            phi[j] += c[j, k]
    return phi


if HAS_NUMBA:
    # the jitted compose must call the jitted product
    _trunc_mul_jit = trunc_mul_numba

    @numba.njit(cache=True, nogil=True)
    def compose_numba(c, u, n):
        nj = c.shape[0]
        nk = c.shape[1]
        phi = np.zeros(n + 1, dtype=np.complex128)
        for k in range(nk - 1, -1, -1):
            if k < nk - 1:
                phi = _trunc_mul_jit(phi, u, n)
            for j in range(min(nj, n + 1)):
                phi[j] += c[j, k]
        return phi

else:  # pragma: no cover
    compose_numba = _compose_loop


def compose_numpy(c, u, n):
    c = np.asarray(c, dtype=np.complex128)
    phi = np.zeros(n + 1, dtype=np.complex128)
    nj = min(c.shape[0], n + 1)
    for k in range(c.shape[1] - 1, -1, -1):
        if k < c.shape[1] - 1:
            phi = trunc_mul_numpy(phi, u, n)
        phi[:nj] += c[:nj, k]
    return phi


# -- Horner evaluation at many points ----------------------------------------


def _horner_loop(coeffs, zs):
    # points innermost so the loop vectorizes
    npts = zs.shape[0]
    out = np.zeros(npts, dtype=np.complex128)
    for k in range(coeffs.shape[0] - 1, -1, -1):
        ck = coeffs[k]
        for p in range(npts):
            out[p] = out[p] * zs[p] + ck
    return out


def horner_numpy(coeffs, zs):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    zs = np.asarray(zs, dtype=np.complex128)
    acc = np.zeros(zs.shape, dtype=np.complex128)
    for ck in coeffs[::-1]:
        acc = acc * zs + ck
    return acc


horner_numba = _njit(_horner_loop)


# -- pointwise bivariate evaluation ------------------------------------------


def _bivariate_loop(c, zs, ts):
    out = np.empty(zs.shape[0], dtype=np.complex128)
    nj = c.shape[0]
    nk = c.shape[1]
    for p in range(zs.shape[0]):
        z = zs[p]
        t = ts[p]
        acc = 0j
        for k in range(nk - 1, -1, -1):
            row = 0j
            for j in range(nj - 1, -1, -1):
                row = row * z + c[j, k]
            acc = acc * t + row
        out[p] = acc
    return out


def bivariate_numpy(c, zs, ts):
    c = np.asarray(c, dtype=np.complex128)
    zs = np.asarray(zs, dtype=np.complex128)
    ts = np.asarray(ts, dtype=np.complex128)
    acc = np.zeros(np.broadcast(zs, ts).shape, dtype=np.complex128)
    for k in range(c.shape[1] - 1, -1, -1):
        acc = acc * ts + horner_numpy(c[:, k], zs)
    return acc


bivariate_numba = _njit(_bivariate_loop)


# -- dispatch ------------------------------------------------------------------


def trunc_mul(a, b, n):
    """Coefficients 0..n of the product of two coefficient arrays."""
    if USE_NUMBA:
        return trunc_mul_numba(np.ascontiguousarray(a, dtype=np.complex128), np.ascontiguousarray(b, dtype=np.complex128), int(n))
    return trunc_mul_numpy(a, b, n)


def compose(c, u, n):
    """Coefficients 0..n of sum_jk c[j,k] z^j u(z)^k."""
    if USE_NUMBA:
        return compose_numba(np.ascontiguousarray(c, dtype=np.complex128), np.ascontiguousarray(u, dtype=np.complex128), int(n))
    return compose_numpy(c, u, n)


def horner(coeffs, zs):
    zs = np.asarray(zs, dtype=np.complex128)
    if USE_NUMBA:
        flat = np.ascontiguousarray(zs.ravel())
        return horner_numba(np.ascontiguousarray(coeffs, dtype=np.complex128), flat).reshape(zs.shape)
    return horner_numpy(coeffs, zs)


def bivariate(c, zs, ts):
    zs, ts = np.broadcast_arrays(np.asarray(zs, dtype=np.complex128), np.asarray(ts, dtype=np.complex128))
    if USE_NUMBA:
        shape = zs.shape
        out = bivariate_numba(
            np.ascontiguousarray(c, dtype=np.complex128),
            np.ascontiguousarray(zs.ravel()),
            np.ascontiguousarray(ts.ravel()),
        )
        return out.reshape(shape)
    return bivariate_numpy(c, zs, ts)
