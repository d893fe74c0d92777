"""Pure-numpy statevector kernels.

Amplitude index bit ``b`` is qubit position ``b`` counted from the fastest
varying end. Every kernel has the same signature as its compiled twin in
``_kernels.pyx``; in-place kernels return ``None``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def _split(psi: np.ndarray, b: int) -> np.ndarray:
    return psi.reshape(-1, 2, 1 << b)


def apply_1q(psi, b, m00, m01, m10, m11):
    v = _split(psi, b)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m00 * a0 + m01 * a1
    v[:, 1, :] = m10 * a0 + m11 * a1


def _tensor(psi: np.ndarray) -> np.ndarray:
    n = psi.shape[0].bit_length() - 1
    return psi.reshape((2,) * n) if n else psi.reshape(())


def apply_diag_mask(psi, mask, phase):
    """Multiply every amplitude whose index has all ``mask`` bits set by ``phase``."""
    t = _tensor(psi)
    n = t.ndim
    idx = tuple(1 if (mask >> (n - 1 - ax)) & 1 else slice(None) for ax in range(n))
    t[idx] *= phase


def apply_cnot(psi, cb, tb):
    t = _tensor(psi)
    n = t.ndim
    ca, ta = n - 1 - cb, n - 1 - tb
    idx0 = [slice(None)] * n
    idx1 = [slice(None)] * n
    idx0[ca] = idx1[ca] = 1
    idx0[ta] = 0
    idx1[ta] = 1
    idx0, idx1 = tuple(idx0), tuple(idx1)
    tmp = t[idx0].copy()
    t[idx0] = t[idx1]
    t[idx1] = tmp


def apply_pauli(psi, xmask, zmask):
    """Return ``X^x Z^z psi`` (new array), ignoring global phase conventions."""
    idx = np.arange(psi.shape[0], dtype=np.int64)
    src = idx ^ xmask
    sign = _parity(src & zmask)
    out = psi[src]
    out[sign == 1] *= -1
    return out


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    p = np.zeros_like(v)
    while v.any():
        p ^= v & 1
        v >>= 1
    return p


def prob_one(psi, b):
    v = _split(psi, b)[:, 1, :]
    return float(np.vdot(v, v).real)


def collapse(psi, b, bit, scale):
    """Keep the ``bit`` half along position ``b``, drop that position, scale."""
    v = _split(psi, b)[:, bit, :]
    return np.ascontiguousarray(v).reshape(-1) * scale


def append_qubit(psi, a0, a1):
    """Tensor a new fastest-varying qubit ``a0|0> + a1|1>`` onto ``psi``."""
    out = np.empty(psi.shape[0] * 2, dtype=np.complex128)
    out[0::2] = psi * a0
    out[1::2] = psi * a1
    return out


def norm_sq(psi):
    return float(np.vdot(psi, psi).real)
