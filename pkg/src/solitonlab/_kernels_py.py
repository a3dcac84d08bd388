"""Pure numpy versions of the compiled kernels (same signatures, same bits)."""

import numpy as np

BACKEND = "python"

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_TWO_PI = 6.283185307179586
_INV_2_53 = 1.0 / 9007199254740992.0
_CHUNK = 1 << 20


def _philox_words(c0, c1, c2, c3, k0, k1):
    # words are held in uint64 so the 32x32 -> 64 products do not overflow
    for r in range(10):
        if r:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> _SHIFT32) ^ c1 ^ np.uint64(k0),
            p1 & _MASK32,
            (p0 >> _SHIFT32) ^ c3 ^ np.uint64(k1),
            p0 & _MASK32,
        )
    return c0, c1, c2, c3


def philox4x32(counters, k0, k1):
    c = np.ascontiguousarray(counters, dtype=np.uint32).astype(np.uint64)
    words = _philox_words(c[:, 0], c[:, 1], c[:, 2], c[:, 3], int(k0), int(k1))
    return np.stack(words, axis=1).astype(np.uint32)


def _uniform_chunk(k0, k1, stream, start, n):
    index = np.arange(n, dtype=np.uint64) + np.uint64(start)
    block = index >> np.uint64(1)
    lane = (index & np.uint64(1)).astype(bool)
    c0 = block & _MASK32
    c1 = block >> _SHIFT32
    c2 = np.full(n, stream & 0xFFFFFFFF, dtype=np.uint64)
    c3 = np.full(n, stream >> 32, dtype=np.uint64)
    w0, w1, w2, w3 = _philox_words(c0, c1, c2, c3, int(k0), int(k1))
    hi = np.where(lane, w2, w0) >> np.uint64(5)
    lo = np.where(lane, w3, w1) >> np.uint64(6)
    return (hi.astype(np.float64) * 67108864.0 + lo.astype(np.float64)) * _INV_2_53


def uniforms(k0, k1, stream, start, n):
    out = np.empty(n, dtype=np.float64)
    for s in range(0, n, _CHUNK):
        m = min(_CHUNK, n - s)
        out[s:s + m] = _uniform_chunk(k0, k1, int(stream), int(start) + s, m)
    return out


def count_phase_window(k0, k1, stream, start, n, threshold):
    count = 0
    for s in range(0, n, _CHUNK):
        m = min(_CHUNK, n - s)
        theta = _uniform_chunk(k0, k1, int(stream), int(start) + s, m) * _TWO_PI
        count += int(np.count_nonzero(theta / _TWO_PI < threshold))
    return count


def leapfrog(u, u_prev, a, b, steps):
    cur = np.array(u, dtype=np.float64)
    prev = np.array(u_prev, dtype=np.float64)
    for _ in range(steps):
        lap = (np.roll(cur, -1) - 2.0 * cur) + np.roll(cur, 1)
        nxt = (2.0 * cur - prev) + (a * lap - b * cur)
        prev, cur = cur, nxt
    return cur, prev


def leapfrog_probe(u, u_prev, a, b, steps, probe):
    cur = np.array(u, dtype=np.float64)
    prev = np.array(u_prev, dtype=np.float64)
    series = np.empty(steps, dtype=np.float64)
    for s in range(steps):
        lap = (np.roll(cur, -1) - 2.0 * cur) + np.roll(cur, 1)
        nxt = (2.0 * cur - prev) + (a * lap - b * cur)
        series[s] = nxt[probe]
        prev, cur = cur, nxt
    return cur, prev, series


def phase_rotate(u, offset, coef):
    u *= np.exp(1j * (offset + coef * (u.real * u.real + u.imag * u.imag)))
