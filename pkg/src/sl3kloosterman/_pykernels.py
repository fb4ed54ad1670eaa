"""Pure-Python kernels, used when the compiled extension is unavailable."""
from math import gcd

import numpy as np


def kloosterman_histogram(m, n, c):
    counts = [0] * c
    if c == 1:
        counts[0] = 1
    else:
        for a in range(1, c):
            if gcd(a, c) == 1:
                counts[(m * a + n * pow(a, -1, c)) % c] += 1
    return np.array(counts, dtype=np.int64)


def phase_histogram(coords, w0, w1, w2, w3, L):
    counts = [0] * L
    for a, b, c, d in coords.tolist():
        counts[(w0 * a + w1 * b + w2 * c + w3 * d) % L] += 1
    return np.array(counts, dtype=np.int64)


def accumulate_product(h1, h2, s1, s2, weight, out):
    L = len(out)
    left = [(i * s1 % L, weight * int(v)) for i, v in enumerate(h1) if v]
    right = [(j * s2 % L, int(v)) for j, v in enumerate(h2) if v]
    for base, a in left:
        for step, b in right:
            out[(base + step) % L] += a * b
