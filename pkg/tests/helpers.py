"""Random elements shared across test modules."""

import numpy as np

from hforge.clifford import Mat2


def random_sl2(F, rng) -> Mat2:
    while True:
        a, b, c = (int(x) for x in rng.integers(0, F.q, 3))
        if a:
            return Mat2(F, a, b, c, F.div(F.add(1, F.mul(b, c)), a))
        if b:
            # a = 0 forces c = -1/b
            return Mat2(F, 0, b, F.neg(F.inv(b)), int(rng.integers(0, F.q)))


def random_glp(F, rng) -> Mat2:
    """Random G with det G a nonzero prime-field element."""
    while True:
        a, b, c, d = (int(x) for x in rng.integers(0, F.q, 4))
        G = Mat2(F, a, b, c, d)
        det = G.det()
        if det and F.is_prime_subfield(det):
            return G


def random_sl2_int(m: int, rng) -> Mat2:
    while True:
        a, b, c, d = (int(x) for x in rng.integers(0, m, 4))
        if (a * d - b * c) % m == 1:
            return Mat2(m, a, b, c, d)


def proportional(A: np.ndarray, B: np.ndarray, tol: float = 1e-9) -> bool:
    k = np.unravel_index(np.argmax(np.abs(B)), B.shape)
    if abs(B[k]) < tol:
        return np.abs(A).max() < tol
    c = A[k] / B[k]
    return abs(abs(c) - 1) < tol and np.abs(A - c * B).max() < tol
