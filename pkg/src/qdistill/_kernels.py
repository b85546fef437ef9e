"""Hot decoder loops, JIT-compiled when numba is available.

Setting QDISTILL_PURE_NUMPY=1 (or running without numba installed) keeps the
plain-Python versions; both paths execute the identical function bodies, so
results are bit-for-bit the same.  All state lives in caller-owned flat
arrays: CSR check adjacency (check_ptr, var_idx), per-edge messages, per-
variable totals, and the current hard decision.
"""

from __future__ import annotations

import os

CLIP = 64.0
_HUGE = 1.0e300  # min-tracking sentinel, above any reachable extrinsic


def _identity(fn):
    return fn


if os.environ.get("QDISTILL_PURE_NUMPY") == "1":
    _jit = _identity
    USING_NUMBA = False
else:
    try:
        from numba import njit

        def _jit(fn):
            return njit(cache=True, nogil=True)(fn)

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _jit = _identity
        USING_NUMBA = False


@_jit
def syndrome_matches(check_ptr, var_idx, est, synd):
    for c in range(check_ptr.shape[0] - 1):
        par = 0
        for e in range(check_ptr[c], check_ptr[c + 1]):
            par ^= est[var_idx[e]]
        if par != synd[c]:
            return False
    return True


@_jit
def serial_sweep(check_ptr, var_idx, synd, norm, gamma, msg):
    """One check-serial sweep: each check immediately writes back into the
    variable totals before the next check reads them."""
    for c in range(check_ptr.shape[0] - 1):
        start = check_ptr[c]
        stop = check_ptr[c + 1]
        sign = -1.0 if synd[c] else 1.0
        min1 = _HUGE
        min2 = _HUGE
        arg = -1
        for e in range(start, stop):
            t = gamma[var_idx[e]] - msg[e]
            if t < 0.0:
                sign = -sign
                t = -t
            if t < min1:
                min2 = min1
                min1 = t
                arg = e
            elif t < min2:
                min2 = t
        for e in range(start, stop):
            v = var_idx[e]
            t = gamma[v] - msg[e]
            s = sign if t >= 0.0 else -sign
            mag = min2 if e == arg else min1
            new = norm * s * mag
            if new > CLIP:
                new = CLIP
            elif new < -CLIP:
                new = -CLIP
            # the posterior is NOT clipped: it must stay the exact sum of the
            # channel value and all incoming messages, or the extrinsic
            # subtraction above goes wrong; boundedness comes from the
            # messages alone (|msg| <= CLIP, finite degree).
            gamma[v] = t + new
            msg[e] = new


@_jit
def flooding_sweep(check_ptr, var_idx, synd, norm, gamma0, gamma, msg, scratch):
    """One flooding sweep: all extrinsic inputs are snapshotted before any
    message is replaced, then totals are rebuilt from the channel values."""
    n_edges = var_idx.shape[0]
    for e in range(n_edges):
        scratch[e] = gamma[var_idx[e]] - msg[e]
    for c in range(check_ptr.shape[0] - 1):
        start = check_ptr[c]
        stop = check_ptr[c + 1]
        sign = -1.0 if synd[c] else 1.0
        min1 = _HUGE
        min2 = _HUGE
        arg = -1
        for e in range(start, stop):
            t = scratch[e]
            if t < 0.0:
                sign = -sign
                t = -t
            if t < min1:
                min2 = min1
                min1 = t
                arg = e
            elif t < min2:
                min2 = t
        for e in range(start, stop):
            t = scratch[e]
            s = sign if t >= 0.0 else -sign
            mag = min2 if e == arg else min1
            new = norm * s * mag
            if new > CLIP:
                new = CLIP
            elif new < -CLIP:
                new = -CLIP
            msg[e] = new
    for v in range(gamma.shape[0]):
        gamma[v] = gamma0[v]
    for e in range(n_edges):
        # unclipped for the same reason as the serial sweep: the posterior
        # must remain channel + sum of (already clipped) messages.
        gamma[var_idx[e]] += msg[e]


@_jit
def decode_loop(check_ptr, var_idx, synd, norm, max_iters, serial,
                gamma0, gamma, msg, scratch, est):
    """Full decode: sweeps until the hard decision satisfies the syndrome or
    max_iters sweeps are spent.  Returns (converged, iterations)."""
    for v in range(gamma.shape[0]):
        gamma[v] = gamma0[v]
        est[v] = 1 if gamma0[v] < 0.0 else 0
    for e in range(msg.shape[0]):
        msg[e] = 0.0
    for it in range(max_iters + 1):
        if syndrome_matches(check_ptr, var_idx, est, synd):
            return True, it
        if it == max_iters:
            break
        if serial:
            serial_sweep(check_ptr, var_idx, synd, norm, gamma, msg)
        else:
            flooding_sweep(check_ptr, var_idx, synd, norm, gamma0, gamma, msg, scratch)
        for v in range(gamma.shape[0]):
            est[v] = 1 if gamma[v] < 0.0 else 0
    return False, max_iters
