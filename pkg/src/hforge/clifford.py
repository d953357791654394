"""Symplectic unitaries, the Zauner unitary, the standard MUBs and the Moebius action.

The ordinary flavor works over Z_dbar with float matrices and is defined up to
a global phase. The Galoisian flavor works over F_{p^n}, is exact (conductor
4p) and faithful on SL(2, F_d).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactmath import CycloNum, sqrt_prime
from .finitefield import FField
from .linalg import ExactMat, ExactVec, eig_unitary
from .weylheisenberg import dbar, galois_conductor, tau_power

__all__ = [
    "Mat2",
    "SympMat",
    "symp_unitary",
    "symp_unitary_exact",
    "symp_phase_constant",
    "zauner",
    "zauner_matrix",
    "ZaunerSplit",
    "MUBSet",
    "mub_standard",
    "mobius_action",
    "mobius_consistent",
    "mobius_vector_label",
    "mub_matrix",
    "basis_labels",
    "h_factor",
    "INF",
]

INF = "inf"


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix [[a, b], [c, d]] over Z_m (ring = int m) or a finite field (ring = FField).

    Field entries are element indices of the FField.
    """

    ring: object
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if isinstance(self.ring, int):
            m = self.ring
            for k in "abcd":
                object.__setattr__(self, k, int(getattr(self, k)) % m)

    # ring helpers
    def _add(self, x, y):
        return (x + y) % self.ring if isinstance(self.ring, int) else self.ring.add(x, y)

    def _mul(self, x, y):
        return (x * y) % self.ring if isinstance(self.ring, int) else self.ring.mul(x, y)

    def _neg(self, x):
        return (-x) % self.ring if isinstance(self.ring, int) else self.ring.neg(x)

    def _inv(self, x):
        return pow(x, -1, self.ring) if isinstance(self.ring, int) else self.ring.inv(x)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return self._add(self._mul(self.a, self.d), self._neg(self._mul(self.b, self.c)))

    def trace(self) -> int:
        return self._add(self.a, self.d)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        m, a = self._mul, self._add
        return Mat2(
            self.ring,
            a(m(self.a, o.a), m(self.b, o.c)),
            a(m(self.a, o.b), m(self.b, o.d)),
            a(m(self.c, o.a), m(self.d, o.c)),
            a(m(self.c, o.b), m(self.d, o.d)),
        )

    def inverse(self) -> "Mat2":
        di = self._inv(self.det())
        m = self._mul
        return Mat2(self.ring, m(di, self.d), m(di, self._neg(self.b)), m(di, self._neg(self.c)), m(di, self.a))

    def scale(self, s: int) -> "Mat2":
        m = self._mul
        return Mat2(self.ring, m(s, self.a), m(s, self.b), m(s, self.c), m(s, self.d))

    def __pow__(self, e: int) -> "Mat2":
        if e < 0:
            return self.inverse() ** (-e)
        r = Mat2.identity(self.ring)
        b = self
        while e:
            if e & 1:
                r = r @ b
            b = b @ b
            e >>= 1
        return r

    def apply(self, u) -> tuple[int, int]:
        m, a = self._mul, self._add
        return (a(m(self.a, u[0]), m(self.b, u[1])), a(m(self.c, u[0]), m(self.d, u[1])))

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    @classmethod
    def identity(cls, ring) -> "Mat2":
        return cls(ring, 1, 0, 0, 1)

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


SympMat = Mat2


def _is_unit(x: int, m: int) -> bool:
    import math

    return math.gcd(x, m) == 1


# ---------------------------------------------------------------- ordinary flavor


def _ordinary_direct(d: int, S: Mat2, phase: complex = 1.0) -> np.ndarray:
    db = dbar(d)
    a, b, _, dd = S.entries
    binv = pow(b, -1, db)
    x = np.arange(d)[:, None]
    y = np.arange(d)[None, :]
    e = (binv * (a * y * y - 2 * x * y + dd * x * x)) % db
    return phase / np.sqrt(d) * tau_power(d, e)


def symp_unitary(S: Mat2, d: int | None = None, flavor: str = "ordinary") -> np.ndarray:
    """Float symplectic unitary.

    Ordinary flavor: S over Z_dbar; returns U_S with U_S D_u U_S^dag = D_{Su},
    defined up to a global phase. Galoisian flavor: float image of the exact matrix.
    """
    if flavor == "galois":
        return symp_unitary_exact(S).to_complex()
    if d is None:
        raise ValueError("ordinary flavor needs d")
    db = dbar(d)
    if not isinstance(S.ring, int) or S.ring != db:
        S = Mat2(db, *S.entries)
    if S.det() != 1 % db:
        raise ValueError("symplectic matrix must have determinant 1 mod dbar")
    if _is_unit(S.b, db):
        return _ordinary_direct(d, S)
    S1 = Mat2(db, 0, -1, 1, 0)
    for shift in range(db):
        T = Mat2(db, 1, shift, 0, 1)
        Sp = T @ S
        pre = _ordinary_direct(d, T.inverse()) if shift else np.eye(d, dtype=complex)
        if _is_unit(Sp.b, db):
            return pre @ _ordinary_direct(d, Sp)
        S2 = S1.inverse() @ Sp
        if _is_unit(S2.b, db):
            return pre @ _ordinary_direct(d, S1) @ _ordinary_direct(d, S2)
    raise ValueError("no decomposition found")


def zauner_matrix(d: int) -> Mat2:
    return Mat2(dbar(d), 0, -1, 1, -1)


@dataclass
class ZaunerSplit:
    d: int
    unitary: np.ndarray
    eigenspaces: dict[str, np.ndarray]

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(self.eigenspaces[k].shape[1] for k in ("H1", "Heta", "Heta2"))


def zauner(d: int) -> ZaunerSplit:
    """Order-3 Zauner unitary with phase exp(i pi (d-1)/12) and its eigenspaces."""
    U = _ordinary_direct(d, zauner_matrix(d), np.exp(1j * np.pi * (d - 1) / 12))
    eta = np.exp(2j * np.pi / 3)
    spaces = {"H1": np.zeros((d, 0), complex), "Heta": np.zeros((d, 0), complex), "Heta2": np.zeros((d, 0), complex)}
    for lam, basis in eig_unitary(U):
        k = int(np.argmin([abs(lam - eta**j) for j in range(3)]))
        if abs(lam - eta**k) > 1e-8:
            raise AssertionError("Zauner eigenvalue is not a cube root of unity")
        spaces[("H1", "Heta", "Heta2")[k]] = basis
    return ZaunerSplit(d, U, spaces)


# ---------------------------------------------------------------- Galoisian flavor


PHASE_CONVENTIONS = ("standard", "faithful")


def symp_phase_constant(F: FField, convention: str = "standard") -> CycloNum:
    """Constant c with exp(i phi) = c * l(-beta).

    "standard": (-i)^{(p-1)/2} for n = 1 (the prime-dimension formula) and
    (-i)^{-n(p+3)/2} for n > 1. For even n the latter is the negative of the
    faithful constant, so products of symplectic unitaries agree up to sign.
    "faithful": (-1)^{n-1} (-i)^{n(p-1)/2}, strictly faithful for every n.
    """
    N = galois_conductor(F)
    p, n = F.p, F.n

    def minus_i(e: int) -> CycloNum:
        return CycloNum.zeta(N, 3 * p * (e % 4))

    if convention == "faithful" or n == 1:
        c = minus_i(n * (p - 1) // 2)
        return -c if n % 2 == 0 else c
    if convention == "standard":
        return minus_i(-n * (p + 3) // 2)
    raise ValueError(f"unknown phase convention {convention!r}")


@lru_cache(maxsize=None)
def _inv_sqrt_d(F: FField) -> CycloNum:
    N = galois_conductor(F)
    if F.n % 2 == 0:
        return CycloNum.rational(N, Fraction(1, F.p ** (F.n // 2)))
    return sqrt_prime(F.p).lift(N) * Fraction(1, F.p ** ((F.n + 1) // 2))


def h_factor(F: FField, beta: int, convention: str = "standard") -> CycloNum:
    """h(beta) = exp(i phi)/sqrt(d) for the beta != 0 branch."""
    return symp_phase_constant(F, convention) * _inv_sqrt_d(F) * int(F.legendre_table[F.neg(beta)])


@lru_cache(maxsize=8192)
def symp_unitary_exact(S: Mat2, convention: str = "standard") -> ExactMat:
    """Exact Galoisian U_S for S in SL(2, F_d)."""
    F = S.ring
    if not isinstance(F, FField) or F.p == 2:
        raise ValueError("Galoisian flavor needs an odd-characteristic FField")
    if S.det() != 1:
        raise ValueError("symplectic matrix must have determinant 1")
    N = galois_conductor(F)
    q = F.q
    al, be, ga, de = S.entries
    mul, add, neg, tr = F.mul_table, F.add_table, F.neg_table, F.trace_table
    half = F.inv(2 % F.p)
    zero = CycloNum.zero(N)
    xs = np.arange(q)
    sq = mul[xs, xs]
    if be == 0:
        la = int(F.legendre_table[al])
        ex = tr[mul[mul[mul[al, ga], half], sq]]
        out = [[zero] * q for _ in range(q)]
        rows = mul[al, xs]
        for x in range(q):
            out[int(rows[x])][x] = CycloNum.zeta(N, 4 * int(ex[x])) * la
        return ExactMat(out, N)
    h = h_factor(F, be, convention)
    inv2b = F.inv(F.add(be, be))
    dx2 = mul[de, sq]
    ay2 = mul[al, sq]
    twoxy = mul[2 % F.p, mul[xs[:, None], xs[None, :]]]
    num = add[add[dx2[:, None], neg[twoxy]], ay2[None, :]]
    ex = tr[mul[num, inv2b]]
    vals = [h * CycloNum.zeta(N, 4 * k) for k in range(F.p)]
    return ExactMat([[vals[int(e)] for e in row] for row in ex], N)


# ---------------------------------------------------------------- MUBs and Moebius


def basis_labels(F: FField) -> list:
    return list(range(F.q)) + [INF]


def mub_matrix(F: FField, b) -> Mat2:
    """S_b = [[1, b], [0, 1]] and S_inf = [[0, 1], [-1, 0]]."""
    if b == INF:
        return Mat2(F, 0, 1, F.neg(1), 0)
    return Mat2(F, 1, int(b), 0, 1)


@dataclass
class MUBSet:
    """Standard MUBs: column v of bases_exact[b] is |b, v> = U_{S_b}|v>."""

    field: FField
    bases_exact: dict
    labels: list

    @property
    def d(self) -> int:
        return self.field.q

    def basis(self, b) -> np.ndarray:
        return self.bases_exact[b].to_complex()

    def vector(self, b, v) -> ExactVec:
        return self.bases_exact[b].column(v)

    def exact_unbiasedness_residuals(self) -> list[CycloNum]:
        """|<b,v|b',v'>|^2 - 1/d for every cross pair, and <b,v|b,v'> - delta within bases."""
        from fractions import Fraction

        d = self.d
        res = []
        cols = {b: [self.vector(b, v) for v in range(d)] for b in self.labels}
        conj = {b: [c.conj() for c in cols[b]] for b in self.labels}
        for i, b in enumerate(self.labels):
            for b2 in self.labels[i:]:
                for v in range(d):
                    for v2 in range(d):
                        ip = _dot(conj[b][v], cols[b2][v2])
                        if b == b2:
                            res.append(ip - (1 if v == v2 else 0))
                        else:
                            res.append(ip * ip.conj() - Fraction(1, d))
        return res


def _dot(a: ExactVec, b: ExactVec) -> CycloNum:
    acc = CycloNum.zero(a.N)
    for x, y in zip(a.entries, b.entries):
        if not x.is_zero() and not y.is_zero():
            acc = acc + x * y
    return acc


def mub_standard(F: FField) -> MUBSet:
    if F.p == 2:
        raise ValueError("standard MUB construction here needs odd characteristic")
    labels = basis_labels(F)
    return MUBSet(F, {b: symp_unitary_exact(mub_matrix(F, b)) for b in labels}, labels)


def mobius_action(G: Mat2, b):
    """Basis label (alpha b + beta)/(gamma b + delta) with the usual infinity rules."""
    F = G.ring
    al, be, ga, de = G.entries
    if G.det() == 0:
        raise ValueError("singular matrix")
    if b == INF:
        return INF if ga == 0 else F.div(al, ga)
    den = F.add(F.mul(ga, b), de)
    if den == 0:
        return INF
    return F.div(F.add(F.mul(al, b), be), den)


def mobius_vector_label(S: Mat2, b, v: int):
    """(b', v') with U_S|b, v> equal to |b', v'> up to a phase."""
    F = S.ring
    al, be, ga, de = S.entries
    if b == INF:
        if ga == 0:
            return INF, F.mul(de, v)
        return F.div(al, ga), F.div(v, ga)
    den = F.add(F.mul(ga, b), de)
    if den == 0:
        return INF, F.neg(F.mul(ga, v))
    return F.div(F.add(F.mul(al, b), be), den), F.div(v, den)


def mobius_consistent(mubs: MUBSet, S: Mat2) -> bool:
    """Check exactly that U_S maps every |b, v> onto |mobius(S, b), v'> up to a phase."""
    U = symp_unitary_exact(S)
    d = mubs.d
    for b in mubs.labels:
        target = mobius_action(S, b)
        image = U @ mubs.bases_exact[b]
        tgt = mubs.bases_exact[target]
        for v in range(d):
            _, v2 = mobius_vector_label(S, b, v)
            ip = _dot(tgt.column(v2).conj(), image.column(v))
            if ip * ip.conj() != 1:
                return False
    return True
