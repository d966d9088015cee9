"""Pure-numpy reference implementations of the hot kernels.

Slow path: selected when numba is unavailable or PSPIN_NO_NUMBA is set.
Semantics match ``_numba`` exactly for the integer-exact cases (p = 2, 3);
float accumulation order may differ at the last ulp for other p.
"""

import numpy as np


def popcount_words(words):
    """Total number of set bits in a uint64 array."""
    return int(np.bitwise_count(words).sum())


def hamming_words(a, b):
    return int(np.bitwise_count(a ^ b).sum())


def overlaps(xi_words, sig_words, n1):
    """Integer overlaps m_mu = (xi^mu, sigma) for every packed pattern row."""
    d = np.bitwise_count(xi_words ^ sig_words[None, :]).sum(axis=1, dtype=np.int64)
    return n1 - 2 * d


def abs_pow_sum(m, p):
    """sum_mu |m_mu|^p as a float; exact integer arithmetic for p in {2, 3}."""
    if p == 2.0:
        return float((m * m).sum())
    if p == 3.0:
        a = np.abs(m)
        return float((a * a * a).sum())
    a = np.abs(m).astype(np.float64)
    return float((a ** p).sum())


def delta_raw(m, col, s, p):
    """sum_mu (|m_mu - 2 s col_mu|^p - |m_mu|^p) for one candidate flip."""
    m2 = m - 2 * s * col.astype(np.int64)
    if p == 2.0:
        return float((m2 * m2 - m * m).sum())
    if p == 3.0:
        a2 = np.abs(m2)
        a1 = np.abs(m)
        return float((a2 * a2 * a2 - a1 * a1 * a1).sum())
    a2 = np.abs(m2).astype(np.float64)
    a1 = np.abs(m).astype(np.float64)
    return float((a2 ** p - a1 ** p).sum())


def delta_raw_all(m, cols, sigma, p):
    """Raw flip sums for every site against a frozen overlap vector."""
    n1 = cols.shape[0]
    out = np.empty(n1, np.float64)
    for k in range(n1):
        out[k] = delta_raw(m, cols[k], int(sigma[k]), p)
    return out


def sweep_flips(m, cols, sigma, order, p, tie_raw):
    """First-improvement pass over ``order``; flips applied in place.

    Returns (nflips, sites, raws) where only the first nflips entries of
    sites/raws are meaningful.  A flip is taken iff raw > tie_raw.
    """
    n1 = order.shape[0]
    sites = np.empty(n1, np.int64)
    raws = np.empty(n1, np.float64)
    nf = 0
    for idx in range(n1):
        k = int(order[idx])
        raw = delta_raw(m, cols[k], int(sigma[k]), p)
        if raw > tie_raw:
            s = int(sigma[k])
            sigma[k] = -s
            m -= (2 * s) * cols[k].astype(np.int64)
            sites[nf] = k
            raws[nf] = raw
            nf += 1
    return nf, sites, raws


def best_flip(m, cols, sigma, p):
    """Most-improving candidate site and its raw sum (ties -> lowest site)."""
    raws = delta_raw_all(m, cols, sigma, p)
    k = int(np.argmax(raws))
    return k, float(raws[k])


def _state_block(start, count, n1):
    idx = np.arange(start, start + count, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n1, dtype=np.int64)[None, :]) & 1
    return (2 * bits - 1).astype(np.int64)


_CHUNK = 1 << 12


def all_states_lm_mask(cols, p, tie_raw, weak):
    """Local-minimum flag for every state int (bit i set <=> sigma_i = +1)."""
    n1, n2 = cols.shape
    size = 1 << n1
    out = np.zeros(size, np.uint8)
    c64 = cols.astype(np.int64)
    for start in range(0, size, _CHUNK):
        count = min(_CHUNK, size - start)
        spm = _state_block(start, count, n1)
        m = spm @ c64
        if p == 2.0:
            base = (m * m).sum(axis=1)
        elif p == 3.0:
            a = np.abs(m)
            base = (a * a * a).sum(axis=1)
        else:
            base = (np.abs(m).astype(np.float64) ** p).sum(axis=1)
        ok = np.ones(count, bool)
        for k in range(n1):
            m2 = m - 2 * spm[:, k: k + 1] * c64[None, k, :][0]
            if p == 2.0:
                raw = (m2 * m2).sum(axis=1) - base
            elif p == 3.0:
                a2 = np.abs(m2)
                raw = (a2 * a2 * a2).sum(axis=1) - base
            else:
                raw = (np.abs(m2).astype(np.float64) ** p).sum(axis=1) - base
            if weak:
                ok &= raw <= tie_raw
            else:
                ok &= raw < -tie_raw
        out[start: start + count] = ok
    return out


def all_states_ground(cols, p):
    """(max_S, state int) over all states; ties -> smallest state int."""
    n1, n2 = cols.shape
    size = 1 << n1
    c64 = cols.astype(np.int64)
    best_s = -np.inf
    best_state = -1
    for start in range(0, size, _CHUNK):
        count = min(_CHUNK, size - start)
        spm = _state_block(start, count, n1)
        m = spm @ c64
        if p == 2.0:
            svals = (m * m).sum(axis=1).astype(np.float64)
        elif p == 3.0:
            a = np.abs(m)
            svals = (a * a * a).sum(axis=1).astype(np.float64)
        else:
            svals = (np.abs(m).astype(np.float64) ** p).sum(axis=1)
        k = int(np.argmax(svals))
        if svals[k] > best_s:
            best_s = float(svals[k])
            best_state = start + k
    return best_s, best_state


def scan_swaps_max(m, sigma, cols, outs, ins, p):
    """Walk a swap stream in place; return max sum |m|^p over visited points."""
    best = -np.inf
    c64 = cols.astype(np.int64)
    for i in range(outs.shape[0]):
        for k in (int(outs[i]), int(ins[i])):
            s = int(sigma[k])
            sigma[k] = -s
            m -= (2 * s) * c64[k]
        sval = abs_pow_sum(m, p)
        if sval > best:
            best = sval
    return best


def scan_swaps_lm(m, sigma, cols, outs, ins, p, tie_raw, weak):
    """Walk a swap stream; local-minimum flag per visited point."""
    c = outs.shape[0]
    flags = np.zeros(c, np.uint8)
    c64 = cols.astype(np.int64)
    for i in range(c):
        for k in (int(outs[i]), int(ins[i])):
            s = int(sigma[k])
            sigma[k] = -s
            m -= (2 * s) * c64[k]
        raws = delta_raw_all(m, cols, sigma, p)
        if weak:
            flags[i] = bool((raws <= tie_raw).all())
        else:
            flags[i] = bool((raws < -tie_raw).all())
    return flags


def batch_abs_pow_sums(xi_words, sig_words, n1, p):
    """sum_mu |(xi^mu, sigma_i)|^p for a batch of packed states."""
    k = sig_words.shape[0]
    out = np.empty(k, np.float64)
    step = max(1, (1 << 22) // max(1, xi_words.size))
    for start in range(0, k, step):
        block = sig_words[start: start + step]
        d = np.bitwise_count(block[:, None, :] ^ xi_words[None, :, :]).sum(
            axis=2, dtype=np.int64
        )
        m = n1 - 2 * d
        if p == 2.0:
            out[start: start + block.shape[0]] = (m * m).sum(axis=1)
        elif p == 3.0:
            a = np.abs(m)
            out[start: start + block.shape[0]] = (a * a * a).sum(axis=1)
        else:
            out[start: start + block.shape[0]] = (
                np.abs(m).astype(np.float64) ** p
            ).sum(axis=1)
    return out
