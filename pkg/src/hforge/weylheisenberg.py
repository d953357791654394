"""Weyl-Heisenberg displacement and phase-point operators.

Two flavors:

* ordinary, for any d: D_u = tau^{u1 u2} X^{u1} Z^{u2} with tau = -exp(i pi/d)
  and indices taken mod dbar (d for odd d, 2d for even d);
* Galoisian, for F_{p^n} with p odd: D_u = omega^{tr(u1 u2/2)} X_{u1} Z_{u2}
  with X_u|x> = |x+u>, Z_u|x> = omega^{tr(xu)}|x>.

Galoisian operators are available exactly (conductor 4p, omega = zeta^4)
and as floats. Field points are integer element indices of the FField.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exactmath import CycloNum
from .finitefield import FField
from .linalg import ExactMat

__all__ = [
    "dbar",
    "symplectic_form",
    "shift_clock",
    "displacement",
    "displacement_exact",
    "phase_point_op",
    "phase_point_exact",
    "galois_conductor",
    "tau_power",
]


def dbar(d: int) -> int:
    return d if d % 2 else 2 * d


def symplectic_form(u, v, mod: int | None = None) -> int:
    """Omega(u, v) = u2 v1 - u1 v2 (integers)."""
    w = u[1] * v[0] - u[0] * v[1]
    return w % mod if mod else w


def shift_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    X = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return X, Z


def _ordinary(d: int, u) -> np.ndarray:
    db = dbar(d)
    u1, u2 = int(u[0]) % db, int(u[1]) % db
    x = np.arange(d)
    # D_u |x> = tau^{u1 u2 + 2 u2 x} |x + u1>, since tau^2 = omega
    e = (u1 * u2 + 2 * u2 * x) % db
    vals = tau_power(d, e)
    M = np.zeros((d, d), dtype=complex)
    M[(x + u1) % d, x] = vals
    return M


def tau_power(d: int, e) -> np.ndarray:
    """tau^e for tau = -exp(i pi/d)."""
    e = np.asarray(e) % dbar(d)
    return np.where(e % 2, -1.0, 1.0) * np.exp(1j * np.pi * e / d)


def galois_conductor(F: FField) -> int:
    return 4 * F.p


def _half(F: FField) -> int:
    return F.inv(F.from_int(2))


def _gal_exponents(F: FField, u) -> tuple[np.ndarray, np.ndarray]:
    """Rows and omega-exponents for the columns of the Galoisian D_u."""
    u1, u2 = int(u[0]), int(u[1])
    base = F.trace_idx(F.mul(F.mul(u1, u2), _half(F)))
    rows = F.add_table[np.arange(F.q), u1]
    tr = np.array([F.trace_idx(int(F.mul_table[u2, x])) for x in range(F.q)])
    return rows, (base + tr) % F.p


def displacement(space, u, flavor: str = "ordinary") -> np.ndarray:
    """Float displacement operator; space is d (ordinary) or an FField (galois)."""
    if flavor == "ordinary":
        return _ordinary(int(space), u)
    if flavor == "galois":
        F = space
        if F.p == 2:
            raise ValueError("Galoisian flavor needs odd p")
        rows, ex = _gal_exponents(F, u)
        M = np.zeros((F.q, F.q), dtype=complex)
        M[rows, np.arange(F.q)] = np.exp(2j * np.pi * ex / F.p)
        return M
    raise ValueError(f"unknown flavor {flavor!r}")


def _monomial_exact(N: int, q: int, rows, vals) -> ExactMat:
    zero = CycloNum.zero(N)
    out = [[zero] * q for _ in range(q)]
    for j in range(q):
        out[int(rows[j])][j] = vals[j]
    return ExactMat(out, N)


@lru_cache(maxsize=4096)
def displacement_exact(F: FField, u) -> ExactMat:
    """Exact Galoisian displacement operator."""
    if F.p == 2:
        raise ValueError("Galoisian flavor needs odd p")
    N = galois_conductor(F)
    rows, ex = _gal_exponents(F, tuple(u))
    return _monomial_exact(N, F.q, rows, [CycloNum.zeta(N, 4 * int(e)) for e in ex])


def _pp_parts(F: FField, u):
    u1, u2 = int(u[0]), int(u[1])
    two_u1 = F.add(u1, u1)
    rows, ex = [], []
    for x in range(F.q):
        rows.append(F.sub(two_u1, x))
        ex.append(F.trace_idx(F.mul(F.add(u2, u2), F.sub(u1, x))))
    return rows, ex


def phase_point_op(F: FField, u) -> np.ndarray:
    """A_u = D_u A_0 D_u^dag with A_0|x> = |-x>; acts as |x> -> omega^{tr(2u2(u1-x))}|2u1-x>."""
    if F.p == 2:
        raise ValueError("phase-point operators need odd p")
    rows, ex = _pp_parts(F, u)
    M = np.zeros((F.q, F.q), dtype=complex)
    M[rows, np.arange(F.q)] = np.exp(2j * np.pi * np.array(ex) / F.p)
    return M


def phase_point_exact(F: FField, u) -> ExactMat:
    if F.p == 2:
        raise ValueError("phase-point operators need odd p")
    N = galois_conductor(F)
    rows, ex = _pp_parts(F, u)
    return _monomial_exact(N, F.q, rows, [CycloNum.zeta(N, 4 * e) for e in ex])
