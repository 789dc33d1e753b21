"""Modular convolution kernels on integer arrays.

Arrays carry a trailing axis of length k holding power-basis coordinates
over F_p.  Every other axis is a polynomial variable.  Products are
formed by one floating-point FFT over all axes (the coordinate axis
grows to 2k-1 and is folded back with the field's reduction matrix),
rounded, and reduced mod p.
"""

from __future__ import annotations

import numpy as np

_DIRECT_LIMIT = 64  # below this many output terms per axis, multiply directly
_FFT_SAFE = float(2 ** 50)


def _fft_shape(n: int) -> int:
    # next 5-smooth size keeps numpy's pocketfft fast
    m = max(n, 1)
    while True:
        r = m
        for f in (2, 3, 5):
            while r % f == 0:
                r //= f
        if r == 1:
            return m
        m += 1


def _direct(a: np.ndarray, b: np.ndarray, out_shape) -> np.ndarray:
    """Exact schoolbook product on the leading axes, truncated to out_shape."""
    out = np.zeros(tuple(out_shape), dtype=np.int64)
    nd = a.ndim
    it = np.ndindex(*a.shape[:-1])
    for idx in it:
        av = a[idx]
        if not av.any():
            continue
        # slice of b that lands inside out_shape
        sl_b = tuple(slice(0, max(0, out_shape[d] - idx[d])) for d in range(nd - 1))
        bb = b[sl_b]
        if bb.size == 0:
            continue
        sl_o = tuple(slice(idx[d], idx[d] + bb.shape[d]) for d in range(nd - 1))
        # outer product along the coordinate axis
        contrib = bb[..., None, :] * av[:, None]  # (..., ka, kb)
        ka, kb = av.shape[0], bb.shape[-1]
        tgt = out[sl_o]
        for i in range(ka):
            tgt[..., i : i + kb] += contrib[..., i, :]
    return out


def mulmod(a: np.ndarray, b: np.ndarray, p: int, red: np.ndarray, out_shape=None) -> np.ndarray:
    """Product of two coordinate arrays, truncated on the leading axes.

    ``red`` is the (2k-1, k) reduction matrix of the coefficient field.
    ``out_shape`` gives the leading-axis lengths of the result; the default
    is the full product.
    """
    k = a.shape[-1]
    full = tuple(x + y - 1 for x, y in zip(a.shape[:-1], b.shape[:-1]))
    if out_shape is None:
        out_shape = full
    out_shape = tuple(min(o, f) for o, f in zip(out_shape, full))
    if any(s <= 0 for s in out_shape) or a.size == 0 or b.size == 0:
        return np.zeros(tuple(max(s, 0) for s in out_shape) + (k,), dtype=np.int64)
    # trim inputs that cannot reach the output window
    a = a[tuple(slice(0, s) for s in out_shape)]
    b = b[tuple(slice(0, s) for s in out_shape)]
    terms = 1
    for x, y in zip(a.shape[:-1], b.shape[:-1]):
        terms *= min(x, y)
    terms *= k
    small = int(np.prod(out_shape)) <= _DIRECT_LIMIT
    if a.ndim == 2 and k == 1 and min(a.shape[0], b.shape[0]) <= 1500:
        raw = np.convolve(a[:, 0], b[:, 0])[: out_shape[0], None]
        return raw % p
    if small or float(p - 1) ** 2 * terms > _FFT_SAFE:
        raw = _direct(a, b, out_shape + (2 * k - 1,))
    else:
        shape = [_fft_shape(x + y - 1) for x, y in zip(a.shape[:-1], b.shape[:-1])]
        shape.append(_fft_shape(2 * k - 1))
        axes = list(range(len(shape)))
        fa = np.fft.rfftn(a.astype(np.float64), shape, axes=axes)
        fb = np.fft.rfftn(b.astype(np.float64), shape, axes=axes)
        prod = np.fft.irfftn(fa * fb, shape, axes=axes)
        prod = prod[tuple(slice(0, s) for s in out_shape) + (slice(0, 2 * k - 1),)]
        raw = np.rint(prod)
        if np.abs(prod - raw).max(initial=0.0) > 0.2:  # pragma: no cover - guarded by _FFT_SAFE
            raw = _direct(a, b, out_shape + (2 * k - 1,))
        raw = raw.astype(np.int64)
    raw %= p
    if k == 1:
        return raw
    return (raw @ red) % p


def scalar_mul(c: np.ndarray, a: np.ndarray, p: int, red: np.ndarray) -> np.ndarray:
    """Multiply every coordinate vector in ``a`` by the field element ``c``."""
    k = a.shape[-1]
    if k == 1:
        return (a * int(c[0])) % p
    raw = np.zeros(a.shape[:-1] + (2 * k - 1,), dtype=np.int64)
    for i in range(k):
        if c[i]:
            raw[..., i : i + k] += int(c[i]) * a
    return (raw % p @ red) % p


def matmul_field(A: np.ndarray, B: np.ndarray, p: int, red: np.ndarray) -> np.ndarray:
    """Matrix product over F_{p^k}: A is (r, s, k), B is (s, c, k)."""
    k = A.shape[-1]
    if k == 1:
        return (A[:, :, 0] @ B[:, :, 0] % p)[:, :, None]
    out = np.zeros((A.shape[0], B.shape[1], 2 * k - 1), dtype=np.int64)
    for i in range(k):
        Ai = A[:, :, i]
        if not Ai.any():
            continue
        for j in range(k):
            out[:, :, i + j] += Ai @ B[:, :, j] % p
    return (out % p @ red) % p
