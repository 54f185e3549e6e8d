"""Reference computations written without the package.

Everything here is deliberately naive: loops, ``cmath`` and ``Fraction``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction


def structure_by_recurrence(kappa: Fraction, n_max: int) -> list[Fraction]:
    """Iterate ``F(0) = 0``, ``F(n+1) = F(n) + 1 + 2 kappa n``."""
    out = [Fraction(0)]
    for n in range(n_max):
        out.append(out[-1] + 1 + 2 * kappa * n)
    return out


def dim_formula(kappa: Fraction):
    return math.inf if kappa >= 0 else 1 - 1 / kappa


def ladder_lists(F, phi):
    """``a-`` as nested lists, entry ``(n-1, n)``."""
    size = len(F)
    a = [[0j] * size for _ in range(size)]
    for n in range(1, size):
        a[n - 1][n] = math.sqrt(F[n]) * cmath.exp(1j * float(F[n] - F[n - 1]) * phi)
    return a


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def dagger(A):
    return [[A[j][i].conjugate() for j in range(len(A))] for i in range(len(A[0]))]


def max_abs_diff(A, B):
    return max(abs(complex(A[i][j]) - complex(B[i][j])) for i in range(len(A)) for j in range(len(A[0])))


def root(x, dim):
    return cmath.exp(2j * math.pi * x / dim)


def fourier_vector(F, phi, m):
    d = len(F)
    return [cmath.exp(-1j * float(F[n]) * phi) * root(m * n, d) / math.sqrt(d) for n in range(d)]


def inner(a, b):
    return sum(x.conjugate() * y for x, y in zip(a, b))


def gauss_brute(u, v, w):
    return sum(cmath.exp(1j * math.pi * (u * k * k + v * k) / w) for k in range(abs(w)))


def factorial_products(levels):
    out = [Fraction(1)]
    for e in levels[1:]:
        out.append(out[-1] * e)
    return out


def gamma_ratio_ho(n):
    return math.gamma(n + 1)


def gamma_ratio_pt(u, v, n):
    return math.gamma(n + 1) * math.gamma(n + u + v + 1) / (2**n * math.gamma(u + v + 1))


def gamma_ratio_morse(l, n):  # noqa: E741
    return math.gamma(n + 1) * math.gamma(2 * l) / (2**n * math.gamma(2 * l - n))


QUBIT_MUBS = [
    [[1, 0], [0, 1]],
    [[1 / math.sqrt(2), 1 / math.sqrt(2)], [1 / math.sqrt(2), -1 / math.sqrt(2)]],
    [[1 / math.sqrt(2), 1j / math.sqrt(2)], [1 / math.sqrt(2), -1j / math.sqrt(2)]],
]
