"""Reference implementations the tests trust instead of the package.

Everything here evaluates the defining sums directly: complex ratios by
actual division, tones by cmath.exp, accumulation by plain Python loops.
No weight tables, no vectorization, no shared helpers with the package.
Slow on purpose; keep inputs small.
"""

import cmath
import math


def literal_weights(values, k):
    """Noise-sample weights c_m = sum_r Re[(a_r / a_k) * e^{2j pi (r-k) m / N}]."""
    n = len(values)
    out = []
    for m in range(n):
        total = 0.0
        for r in range(n):
            ratio = values[r] / values[k]
            tone = cmath.exp(2j * cmath.pi * (r - k) * m / n)
            total += (ratio * tone).real
        out.append(total)
    return out


def literal_variance(values, k, rho):
    """Normalized variance of channel k as the literal quadruple sum.

    (1/N^2) * sum_p sum_q rho[p][q] * (sum_r Re[...p]) * (sum_s Re[...q]),
    with the inner channel sums recomputed in place for each (p, q).
    """
    n = len(values)

    def inner(sample):
        total = 0.0
        for r in range(n):
            ratio = values[r] / values[k]
            tone = cmath.exp(2j * cmath.pi * (r - k) * sample / n)
            total += (ratio * tone).real
        return total

    acc = 0.0
    for p in range(n):
        for q in range(n):
            acc += rho[p][q] * inner(p) * inner(q)
    return acc / (n * n)


def rho_full(n):
    return [[1.0] * n for _ in range(n)]


def rho_none(n):
    return [[1.0 if p == q else 0.0 for q in range(n)] for p in range(n)]


def rho_partial(n):
    return [[math.sqrt(1.0 - abs(p - q) / n) for q in range(n)] for p in range(n)]


def rho_overlap(n):
    return [[1.0 - abs(p - q) / n for q in range(n)] for p in range(n)]


def qpsk_point(digit):
    return cmath.exp(1j * digit * cmath.pi / 2)


def frame_values(digits):
    """Constellation points from base-4 digits, channel r = digits[r]."""
    return [qpsk_point(d) for d in digits]


def all_frames(n):
    """Digit tuples of every frame of n channels, ascending frame integer."""
    for value in range(4 ** n):
        yield tuple((value >> (2 * r)) & 3 for r in range(n))
