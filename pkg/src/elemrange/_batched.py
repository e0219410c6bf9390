"""Batched linear-algebra kernels for stacks of small matrices.

The unitary ascent engine evaluates objectives on stacks of shape
(B, n, n).  For n = 2 the eigen/singular problems have closed forms that
are an order of magnitude faster than per-matrix LAPACK calls; larger n
falls back to numpy.linalg.  All kernels are pure and deterministic.
"""

from __future__ import annotations

import numpy as np


def _eig2_parts(h):
    h00 = h[..., 0, 0].real
    h11 = h[..., 1, 1].real
    h01 = h[..., 0, 1]
    mid = 0.5 * (h00 + h11)
    half = 0.5 * (h00 - h11)
    disc = np.sqrt(half * half + h01.real**2 + h01.imag**2)
    return mid, half, disc, h01


def _top_vec2(half, disc, h01):
    # Branch on sign(half) so the chosen eigenvector component disc +/- half
    # never cancels; the remaining degenerate case is a scalar matrix, where
    # any unit vector is valid.
    big = half >= 0
    v0 = np.where(big, (disc + half).astype(complex), h01)
    v1 = np.where(big, np.conj(h01), (disc - half).astype(complex))
    nrm = np.sqrt(v0.real**2 + v0.imag**2 + v1.real**2 + v1.imag**2)
    zero = nrm == 0.0
    safe = np.where(zero, 1.0, nrm)
    v = np.empty(half.shape + (2,), dtype=complex)
    v[..., 0] = np.where(zero, 1.0 + 0j, v0 / safe)
    v[..., 1] = np.where(zero, 0.0 + 0j, v1 / safe)
    return v


def eigvals_max(h) -> np.ndarray:
    """Largest eigenvalue of each Hermitian matrix in the stack."""
    if h.shape[-1] == 2:
        mid, _, disc, _ = _eig2_parts(h)
        return mid + disc
    return np.linalg.eigvalsh(h)[..., -1]


def top_eigh(h):
    """(lam_max, unit eigenvector) for each Hermitian matrix in the stack."""
    if h.shape[-1] == 2:
        mid, half, disc, h01 = _eig2_parts(h)
        return mid + disc, _top_vec2(half, disc, h01)
    w, v = np.linalg.eigh(h)
    return w[..., -1], v[..., :, -1]


def eigh_full(h):
    """Full eigendecomposition (ascending) of each Hermitian matrix."""
    if h.shape[-1] == 2:
        mid, half, disc, h01 = _eig2_parts(h)
        vtop = _top_vec2(half, disc, h01)
        lam = np.empty(mid.shape + (2,))
        lam[..., 0] = mid - disc
        lam[..., 1] = mid + disc
        # The orthogonal complement of the top eigenvector is the bottom one.
        vecs = np.empty(mid.shape + (2, 2), dtype=complex)
        vecs[..., 0, 0] = -np.conj(vtop[..., 1])
        vecs[..., 1, 0] = np.conj(vtop[..., 0])
        vecs[..., :, 1] = vtop
        return lam, vecs
    return np.linalg.eigh(h)


def sigma_max(g) -> np.ndarray:
    """Largest singular value of each matrix in the stack."""
    if g.shape[-1] == 2:
        return np.sqrt(np.maximum(eigvals_max(_gram2(g)), 0.0))
    return np.linalg.svd(g, compute_uv=False)[..., 0]


def _gram2(g):
    g00, g01 = g[..., 0, 0], g[..., 0, 1]
    g10, g11 = g[..., 1, 0], g[..., 1, 1]
    m = np.empty(g.shape, dtype=complex)
    m[..., 0, 0] = g00.real**2 + g00.imag**2 + g10.real**2 + g10.imag**2
    m[..., 1, 1] = g01.real**2 + g01.imag**2 + g11.real**2 + g11.imag**2
    m[..., 0, 1] = np.conj(g00) * g01 + np.conj(g10) * g11
    m[..., 1, 0] = np.conj(m[..., 0, 1])
    return m


def top_svd(g):
    """(sigma_max, left vector w, right vector v) with G v = sigma w."""
    if g.shape[-1] == 2:
        lam, v = top_eigh(_gram2(g))
        sigma = np.sqrt(np.maximum(lam, 0.0))
        w = np.einsum("...ij,...j->...i", g, v)
        wn = np.sqrt(np.sum(w.real**2 + w.imag**2, axis=-1))
        zero = wn == 0.0
        safe = np.where(zero, 1.0, wn)
        w = w / safe[..., None]
        if np.any(zero):
            e0 = np.zeros_like(w)
            e0[..., 0] = 1.0
            w = np.where(zero[..., None], e0, w)
        return sigma, w, v
    u, s, vh = np.linalg.svd(g)
    return s[..., 0], u[..., :, 0], np.conj(vh[..., 0, :])


def skew_exp_factors(k):
    """Eigendecomposition of iK (Hermitian) for a stack of skew-Hermitian K.

    Returns (lam, V) with exp(t*K) = V diag(exp(-i*t*lam)) V*.
    """
    return eigh_full(1j * k)


def apply_skew_exp(u, lam, v, t):
    """u @ exp(t*K) from the factors of ``skew_exp_factors``; t has shape (B,)."""
    phases = np.exp(-1j * t[:, None] * lam)
    return u @ ((v * phases[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2)))
