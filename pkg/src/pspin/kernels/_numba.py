"""Numba-compiled hot kernels: popcount overlaps, flip deltas, landscape scans.

All loops are nopython with the GIL released so many descents/scans can run
on worker threads against a shared immutable pattern matrix.
"""

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M3 = np.uint64(0x0F0F0F0F0F0F0F0F)
_M4 = np.uint64(0x0101010101010101)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S56 = np.uint64(56)

_JIT = dict(cache=True, nogil=True)


@njit(inline="always")
def _pc64(v):
    v = v - ((v >> _S1) & _M1)
    v = (v & _M2) + ((v >> _S2) & _M2)
    v = (v + (v >> _S4)) & _M3
    return (v * _M4) >> _S56


@njit(**_JIT)
def popcount_words(words):
    c = 0
    for i in range(words.shape[0]):
        c += int(_pc64(words[i]))
    return c


@njit(**_JIT)
def hamming_words(a, b):
    c = 0
    for i in range(a.shape[0]):
        c += int(_pc64(a[i] ^ b[i]))
    return c


@njit(**_JIT)
def overlaps(xi_words, sig_words, n1):
    n2, nw = xi_words.shape
    m = np.empty(n2, np.int64)
    for mu in range(n2):
        d = 0
        for w in range(nw):
            d += int(_pc64(xi_words[mu, w] ^ sig_words[w]))
        m[mu] = n1 - 2 * d
    return m


@njit(inline="always")
def _abs_pow_sum(m, p):
    n2 = m.shape[0]
    if p == 2.0:
        acc = np.int64(0)
        for mu in range(n2):
            acc += m[mu] * m[mu]
        return float(acc)
    elif p == 3.0:
        acc = np.int64(0)
        for mu in range(n2):
            a = m[mu] if m[mu] >= 0 else -m[mu]
            acc += a * a * a
        return float(acc)
    else:
        s = 0.0
        for mu in range(n2):
            a = float(m[mu] if m[mu] >= 0 else -m[mu])
            s += a ** p
        return s


@njit(**_JIT)
def abs_pow_sum(m, p):
    return _abs_pow_sum(m, p)


@njit(inline="always")
def _delta_raw(m, col, s, p):
    n2 = m.shape[0]
    if p == 2.0:
        acc = np.int64(0)
        for mu in range(n2):
            acc += 1 - s * col[mu] * m[mu]
        return 4.0 * acc
    elif p == 3.0:
        acc = np.int64(0)
        for mu in range(n2):
            v = m[mu]
            w = v - 2 * s * col[mu]
            a1 = v if v >= 0 else -v
            a2 = w if w >= 0 else -w
            acc += a2 * a2 * a2 - a1 * a1 * a1
        return float(acc)
    else:
        acc = 0.0
        for mu in range(n2):
            v = m[mu]
            w = v - 2 * s * col[mu]
            a1 = float(v if v >= 0 else -v)
            a2 = float(w if w >= 0 else -w)
            acc += a2 ** p - a1 ** p
        return acc


@njit(**_JIT)
def delta_raw(m, col, s, p):
    return _delta_raw(m, col, np.int64(s), p)


@njit(**_JIT)
def delta_raw_all(m, cols, sigma, p):
    n1 = cols.shape[0]
    out = np.empty(n1, np.float64)
    for k in range(n1):
        out[k] = _delta_raw(m, cols[k], np.int64(sigma[k]), p)
    return out


@njit(**_JIT)
def sweep_flips(m, cols, sigma, order, p, tie_raw):
    n1 = order.shape[0]
    n2 = m.shape[0]
    sites = np.empty(n1, np.int64)
    raws = np.empty(n1, np.float64)
    nf = 0
    for idx in range(n1):
        k = order[idx]
        raw = _delta_raw(m, cols[k], np.int64(sigma[k]), p)
        if raw > tie_raw:
            s = np.int64(sigma[k])
            sigma[k] = -sigma[k]
            for mu in range(n2):
                m[mu] -= 2 * s * cols[k, mu]
            sites[nf] = k
            raws[nf] = raw
            nf += 1
    return nf, sites, raws


@njit(**_JIT)
def best_flip(m, cols, sigma, p):
    n1 = cols.shape[0]
    best = -1
    best_raw = -np.inf
    for k in range(n1):
        raw = _delta_raw(m, cols[k], np.int64(sigma[k]), p)
        if raw > best_raw:
            best_raw = raw
            best = k
    return best, best_raw


@njit(inline="always")
def _is_lm(m, cols, sigma, p, tie_raw, weak):
    n1 = cols.shape[0]
    for k in range(n1):
        raw = _delta_raw(m, cols[k], np.int64(sigma[k]), p)
        if weak:
            if raw > tie_raw:
                return False
        else:
            if raw >= -tie_raw:
                return False
    return True


@njit(**_JIT)
def all_states_lm_mask(cols, p, tie_raw, weak):
    n1, n2 = cols.shape
    size = np.int64(1) << np.int64(n1)
    out = np.zeros(size, np.uint8)
    sigma = np.full(n1, -1, np.int8)
    m = np.zeros(n2, np.int64)
    for k in range(n1):
        for mu in range(n2):
            m[mu] -= cols[k, mu]
    state = np.int64(0)
    if _is_lm(m, cols, sigma, p, tie_raw, weak):
        out[0] = 1
    for step in range(1, size):
        t = step
        k = 0
        while t & 1 == 0:
            t >>= 1
            k += 1
        s = np.int64(sigma[k])
        sigma[k] = -sigma[k]
        for mu in range(n2):
            m[mu] -= 2 * s * cols[k, mu]
        state ^= np.int64(1) << np.int64(k)
        if _is_lm(m, cols, sigma, p, tie_raw, weak):
            out[state] = 1
    return out


@njit(**_JIT)
def all_states_ground(cols, p):
    n1, n2 = cols.shape
    size = np.int64(1) << np.int64(n1)
    sigma = np.full(n1, -1, np.int8)
    m = np.zeros(n2, np.int64)
    for k in range(n1):
        for mu in range(n2):
            m[mu] -= cols[k, mu]
    state = np.int64(0)
    best_s = _abs_pow_sum(m, p)
    best_state = np.int64(0)
    for step in range(1, size):
        t = step
        k = 0
        while t & 1 == 0:
            t >>= 1
            k += 1
        s = np.int64(sigma[k])
        sigma[k] = -sigma[k]
        for mu in range(n2):
            m[mu] -= 2 * s * cols[k, mu]
        state ^= np.int64(1) << np.int64(k)
        sval = _abs_pow_sum(m, p)
        if sval > best_s or (sval == best_s and state < best_state):
            best_s = sval
            best_state = state
    return best_s, best_state


@njit(**_JIT)
def scan_swaps_max(m, sigma, cols, outs, ins, p):
    n2 = m.shape[0]
    best = -np.inf
    for i in range(outs.shape[0]):
        k = outs[i]
        s = np.int64(sigma[k])
        sigma[k] = -sigma[k]
        for mu in range(n2):
            m[mu] -= 2 * s * cols[k, mu]
        k = ins[i]
        s = np.int64(sigma[k])
        sigma[k] = -sigma[k]
        for mu in range(n2):
            m[mu] -= 2 * s * cols[k, mu]
        sval = _abs_pow_sum(m, p)
        if sval > best:
            best = sval
    return best


@njit(**_JIT)
def scan_swaps_lm(m, sigma, cols, outs, ins, p, tie_raw, weak):
    n2 = m.shape[0]
    c = outs.shape[0]
    flags = np.zeros(c, np.uint8)
    for i in range(c):
        k = outs[i]
        s = np.int64(sigma[k])
        sigma[k] = -sigma[k]
        for mu in range(n2):
            m[mu] -= 2 * s * cols[k, mu]
        k = ins[i]
        s = np.int64(sigma[k])
        sigma[k] = -sigma[k]
        for mu in range(n2):
            m[mu] -= 2 * s * cols[k, mu]
        if _is_lm(m, cols, sigma, p, tie_raw, weak):
            flags[i] = 1
    return flags


@njit(**_JIT)
def batch_abs_pow_sums(xi_words, sig_words, n1, p):
    nbatch = sig_words.shape[0]
    n2, nw = xi_words.shape
    out = np.empty(nbatch, np.float64)
    for i in range(nbatch):
        acc = 0.0
        if p == 2.0:
            iacc = np.int64(0)
            for mu in range(n2):
                d = 0
                for w in range(nw):
                    d += int(_pc64(xi_words[mu, w] ^ sig_words[i, w]))
                v = np.int64(n1 - 2 * d)
                iacc += v * v
            acc = float(iacc)
        elif p == 3.0:
            iacc = np.int64(0)
            for mu in range(n2):
                d = 0
                for w in range(nw):
                    d += int(_pc64(xi_words[mu, w] ^ sig_words[i, w]))
                v = np.int64(n1 - 2 * d)
                a = v if v >= 0 else -v
                iacc += a * a * a
            acc = float(iacc)
        else:
            for mu in range(n2):
                d = 0
                for w in range(nw):
                    d += int(_pc64(xi_words[mu, w] ^ sig_words[i, w]))
                v = n1 - 2 * d
                a = float(v if v >= 0 else -v)
                acc += a ** p
        out[i] = acc
    return out
