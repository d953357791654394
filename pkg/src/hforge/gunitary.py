"""Galois-unitaries U_G = U_S g_Delta for G in GL_p(2, F_d).

G = S K_Delta with K_Delta = diag(1, Delta) and Delta = det G in the prime
field. On conductor 4p the automorphism g_Delta fixes i and sends
omega_p -> omega_p^Delta, i.e. zeta_{4p} -> zeta_{4p}^k with k = 1 mod 4 and
k = Delta mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .clifford import Mat2, symp_unitary_exact
from .exactmath import CycloNum, GaloisAut
from .finitefield import FField
from .linalg import ExactMat, ExactVec
from .weylheisenberg import displacement_exact, phase_point_exact

__all__ = [
    "GLpMat",
    "GUnitary",
    "galois_for_det",
    "gu_new",
    "gu_apply",
    "gu_compose",
    "gu_inverse",
    "gu_adjoint",
    "gu_power",
    "gu_sign",
    "gu_conjugate",
    "gu_conjugate_operator",
    "gu_embed",
    "gu_unembed",
    "gu_embed_roundtrip",
    "sigma_permutation",
]

GLpMat = Mat2


def galois_for_det(F: FField, delta: int) -> GaloisAut:
    """g_Delta on Q(zeta_{4p}): fixes i, omega -> omega^Delta."""
    p = F.p
    N = 4 * p
    if not (0 < delta < p):
        raise ValueError("determinant must be a nonzero prime-field element")
    k = next(k for k in range(1, N, 4) if k % p == delta)
    return GaloisAut(N, k)


def k_matrix(F: FField, delta: int) -> Mat2:
    return Mat2(F, 1, 0, 0, delta)


@dataclass(frozen=True)
class GUnitary:
    G: Mat2
    S: Mat2
    Usym: ExactMat
    gal: GaloisAut

    @property
    def field(self) -> FField:
        return self.G.ring

    @property
    def delta(self) -> int:
        return self.G.det()

    def is_antiunitary(self) -> bool:
        return self.gal.k % self.field.p == self.field.p - 1

    def __eq__(self, other):
        return isinstance(other, GUnitary) and self.gal == other.gal and self.Usym == other.Usym

    def __hash__(self):
        return hash((self.gal, self.Usym))


def gu_new(G: Mat2) -> GUnitary:
    F = G.ring
    if not isinstance(F, FField) or F.p == 2:
        raise ValueError("g-unitaries need an odd-characteristic FField")
    delta = G.det()
    if delta == 0:
        raise ValueError("singular matrix")
    if not F.is_prime_subfield(delta):
        raise ValueError("determinant is not in the prime field")
    S = G @ k_matrix(F, F.inv(delta))
    return GUnitary(G, S, symp_unitary_exact(S), galois_for_det(F, delta))


def gu_apply(U: GUnitary, v: ExactVec) -> ExactVec:
    """U_S g_Delta(v) for an exact cyclotomic vector."""
    if not isinstance(v, ExactVec):
        raise TypeError("g-unitaries act only on exact cyclotomic vectors, not floats")
    if v.N != U.Usym.N:
        raise ValueError("conductor mismatch")
    return U.Usym @ v.galois(U.gal.k)


def gu_compose(U1: GUnitary, U2: GUnitary) -> GUnitary:
    """U1 U2 = U_{S1} g1(U_{S2}) g1 g2."""
    if U1.field != U2.field:
        raise ValueError("field mismatch")
    G = U1.G @ U2.G
    F = U1.field
    S = G @ k_matrix(F, F.inv(G.det()))
    return GUnitary(G, S, U1.Usym @ U2.Usym.galois(U1.gal.k), U1.gal @ U2.gal)


def gu_inverse(U: GUnitary) -> GUnitary:
    """U^{-1} = g^{-1}(U_S^dag) g^{-1}."""
    ginv = U.gal.inverse()
    G = U.G.inverse()
    F = U.field
    S = G @ k_matrix(F, F.inv(G.det()))
    return GUnitary(G, S, U.Usym.dagger().galois(ginv.k), ginv)


gu_adjoint = gu_inverse


def gu_power(U: GUnitary, k: int) -> GUnitary:
    if k < 0:
        return gu_power(gu_inverse(U), -k)
    F = U.field
    result = gu_new(Mat2.identity(F))
    base = U
    while k:
        if k & 1:
            result = gu_compose(result, base)
        base = gu_compose(base, base)
        k >>= 1
    return result


def gu_sign(U: GUnitary) -> int:
    """+1 or -1 with U = sign * gu_new(U.G) (as operators)."""
    ref = gu_new(U.G)
    if ref.gal != U.gal:
        raise AssertionError("Galois parts differ")
    if U.Usym == ref.Usym:
        return 1
    if U.Usym == ref.Usym.scale(-1):
        return -1
    raise AssertionError("not equal up to sign")


def gu_conjugate(U: GUnitary, u) -> tuple[int, int]:
    """Phase-space image G u; U D_u U^{-1} = D_{Gu} and U A_u U^{-1} = A_{Gu}."""
    return U.G.apply(u)


def gu_conjugate_operator(U: GUnitary, M: ExactMat) -> ExactMat:
    """U M U^{-1} = U_S g(M) U_S^dag."""
    return U.Usym @ M.galois(U.gal.k) @ U.Usym.dagger()


def conjugation_check(U: GUnitary, u, kind: str = "D") -> bool:
    F = U.field
    build = displacement_exact if kind == "D" else phase_point_exact
    return gu_conjugate_operator(U, build(F, tuple(u))) == build(F, gu_conjugate(U, u))


# ---------------------------------------------------------------- embedding simulation


def _zeta_split(p: int) -> tuple[int, int]:
    """(a, b) with zeta_{4p} = i^a omega^b."""
    N = 4 * p
    for a in range(4):
        for b in range(p):
            if (a * p + 4 * b) % N == 1:
                return a, b
    raise AssertionError


def _omega_blocks(x: CycloNum, p: int) -> list[CycloNum]:
    """Coefficients c_0..c_{p-1} in Q(i) with x = sum_k c_k omega^k and c_{p-1} = 0."""
    N = 4 * p
    a, b = _zeta_split(p)
    blocks = [[0] * 4 for _ in range(p)]  # per omega power: coefficients of i^0..i^3 (numerators)
    for j, c in enumerate(x.num):
        if c:
            blocks[(b * j) % p][(a * j) % 4] += c
    # omega^{p-1} = -(1 + omega + ... + omega^{p-2})
    top = blocks[p - 1]
    for k in range(p - 1):
        blocks[k] = [u - t for u, t in zip(blocks[k], top)]
    blocks[p - 1] = [0] * 4
    ivals = [CycloNum.zeta(N, (p * e) % N) for e in range(4)]
    out = []
    for blk in blocks:
        acc = CycloNum.zero(N)
        for e, c in enumerate(blk):
            if c:
                acc = acc + ivals[e] * c
        out.append(acc * Fraction(1, x.den))
    return out


def sigma_permutation(p: int, delta: int) -> list[int]:
    """sigma_Delta as an index map k -> Delta k mod p."""
    return [(delta * k) % p for k in range(p)]


def gu_embed(v: ExactVec, p: int) -> list[CycloNum]:
    """T(v): length p*d, block k holds the omega^k coefficients (in Q(i)) of all components."""
    per = [_omega_blocks(x, p) for x in v.entries]
    return [per[j][k] for k in range(p) for j in range(len(v))]


def gu_unembed(w: list[CycloNum], p: int, d: int) -> ExactVec:
    N = 4 * p
    out = []
    for j in range(d):
        acc = CycloNum.zero(N)
        for k in range(p):
            c = w[k * d + j]
            if not c.is_zero():
                acc = acc + c * CycloNum.zeta(N, 4 * k)
        out.append(acc)
    return ExactVec(out, N)


def gu_embed_roundtrip(U: GUnitary, v: ExactVec) -> ExactVec:
    """T^{-1}((sigma_Delta (x) U_S) T(v))."""
    F = U.field
    p, d = F.p, F.q
    w = gu_embed(v, p)
    sig = sigma_permutation(p, U.delta)
    out = [CycloNum.zero(4 * p)] * (p * d)
    for k in range(p):
        block = ExactVec(w[k * d : (k + 1) * d], 4 * p)
        img = U.Usym @ block
        k2 = sig[k]
        out[k2 * d : (k2 + 1) * d] = list(img.entries)
    return gu_unembed(out, p, d)


def random_cyclo_vector(d: int, p: int, rng: np.random.Generator, span: int = 3) -> ExactVec:
    """Random vector with small integer omega-coefficients (q_{p-1} = 0)."""
    N = 4 * p
    out = []
    for _ in range(d):
        acc = CycloNum.zero(N)
        for k in range(p - 1):
            c = int(rng.integers(-span, span + 1))
            if c:
                acc = acc + CycloNum.zeta(N, 4 * k) * c
        out.append(acc)
    return ExactVec(out, N)
