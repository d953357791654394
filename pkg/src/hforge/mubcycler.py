"""MUB-cyclers: suborders, GL type classification, cycler eigenvectors and balanced states.

A matrix G in GL_p(2, F_d) (determinant in the prime field) is a cycler when
its Moebius action permutes all d+1 standard MUBs in a single cycle. Its
g-unitary U_G then has an exact eigenvector with unit eigenvalue, and for
d = 3 mod 4 that vector is MUB-balanced.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .clifford import INF, Mat2, mobius_action, mub_matrix, mub_standard
from .exactmath import CycloNum, hilbert90_split, to_complex
from .finitefield import FField, quad_ext
from .guards import GuardExceeded
from .gunitary import gu_apply, gu_conjugate_operator, gu_new
from .linalg import ExactMat, ExactVec, exact_nullspace, exact_rank
from .weylheisenberg import displacement_exact, galois_conductor, phase_point_exact

__all__ = [
    "SmSequence",
    "CyclerReport",
    "CyclerScan",
    "BalancedState",
    "BalanceReport",
    "WignerState",
    "suborder_classify",
    "cycler_canonical",
    "enumerate_cyclers",
    "cycler_eigenvector",
    "verify_balanced",
    "balanced_wigner",
    "state_wigner",
    "balanced_orbit_count",
    "conjectured_balanced_count",
    "parity_apply",
    "same_ray",
    "mobius_orbit",
]

SCAN_LIMIT = 2_000_000
ORBIT_LIMIT = 200_000


# ---------------------------------------------------------------- s_m recurrence


@dataclass(frozen=True)
class SmSequence:
    """s_0 = 0, s_1 = 1, s_{m+1} = t s_m - Delta s_{m-1} over F_d (element indices)."""

    field: FField
    t: int
    delta: int

    def values(self, m_max: int) -> list[int]:
        F = self.field
        out = [0, 1]
        while len(out) <= m_max:
            out.append(F.sub(F.mul(self.t, out[-1]), F.mul(self.delta, out[-2])))
        return out[: m_max + 1]

    def closed_form(self, m_max: int) -> list[int]:
        """s_m from the eigenvalues of x^2 - t x + Delta, computed in F_{d^2}."""
        F = self.field
        qe = quad_ext(F)
        E = qe.ext
        lp, lm = _eigenvalues(qe, self.t, self.delta)
        out = []
        for m in range(m_max + 1):
            if lp != lm:
                num = E.sub(E.pow(lp, m), E.pow(lm, m))
                val = E.div(num, E.sub(lp, lm))
            else:
                val = E.mul(E.from_int(m), E.pow(lp, m - 1)) if m else 0
            base = qe.in_base(val)
            if base is None:
                raise AssertionError("s_m left the base field")
            out.append(base)
        return out


def _eigenvalues(qe, t: int, delta: int) -> tuple[int, int]:
    """Roots of x^2 - t x + Delta in the extension, as ext indices (lambda_+, lambda_-)."""
    E = qe.ext
    te, de = qe.embed(t), qe.embed(delta)
    disc = E.sub(E.mul(te, te), E.mul(E.from_int(4), de))
    root = E.sqrt_idx(disc)
    if root is None:
        raise AssertionError("discriminant has no root in F_{d^2}")
    half = E.inv(E.from_int(2))
    return E.mul(E.add(te, root), half), E.mul(E.sub(te, root), half)


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class CyclerReport:
    G: Mat2
    type: int
    suborder: int
    r: int | None
    is_cycler: bool
    m0: int | None


def _check_glp(G: Mat2) -> FField:
    F = G.ring
    if not isinstance(F, FField) or F.p == 2:
        raise ValueError("cycler analysis needs a matrix over an odd-characteristic FField")
    delta = G.det()
    if delta == 0:
        raise ValueError("singular matrix")
    if not F.is_prime_subfield(delta):
        raise ValueError("determinant is not in the prime field")
    return F


def _classify_td(F: FField, t: int, delta: int) -> tuple[int, int, int | None, int | None]:
    """(type, suborder of a non-scalar matrix with this trace/det, r, m0)."""
    disc = F.sub(F.mul(t, t), F.mul(F.from_int(4), delta))
    if disc == 0:
        gtype = 3
    elif F.legendre_idx(disc) == 1:
        gtype = 1
    else:
        gtype = 2
    s_prev, s_cur, m = 0, 1, 1
    while s_cur != 0:
        s_prev, s_cur = s_cur, F.sub(F.mul(t, s_cur), F.mul(delta, s_prev))
        m += 1
        if m > F.q + 1:
            raise AssertionError("suborder exceeds d+1")
    r = None
    if gtype == 2:
        qe = quad_ext(F)
        E = qe.ext
        lp, lm = _eigenvalues(qe, t, delta)
        step = (F.q - 1) // (F.p - 1)
        order = (F.p - 1) * (F.q + 1)
        rs = []
        for lam in (lp, lm):
            k = int(E.log_table[lam])
            if k % step:
                raise AssertionError("eigenvalue is not a power of eta")
            rs.append((k // step) % order)
        r = min(rs)
    ordd = F.order_idx(delta)
    m0 = ordd // 2 if ordd % 2 == 0 else None
    return gtype, m, r, m0


def suborder_classify(G: Mat2) -> CyclerReport:
    """Suborder (least m with G^m scalar), GL type from t^2 - 4 Delta, eta-exponent r and m0."""
    F = _check_glp(G)
    t, delta = G.trace(), G.det()
    gtype, sub, r, m0 = _classify_td(F, t, delta)
    if G.is_scalar():
        sub = 1
    is_cycler = gtype == 2 and F.n % 2 == 1 and math.gcd(r, F.q + 1) == 1
    return CyclerReport(G, gtype, sub, r, is_cycler, m0)


def cycler_canonical(F: FField) -> tuple[Mat2, bool]:
    """G_0 = [[0, -eta^{d+1}], [1, eta + eta^d]]; cyclers exist iff the exponent n is odd."""
    if F.p == 2:
        raise ValueError("needs odd characteristic")
    qe = quad_ext(F)
    E, d = qe.ext, F.q
    eta = qe.eta
    det = qe.in_base(E.pow(eta, d + 1))
    tr = qe.in_base(E.add(eta, E.pow(eta, d)))
    if det is None or tr is None:
        raise AssertionError("G_0 entries are not in the base field")
    G0 = Mat2(F, 0, F.neg(det), 1, tr)
    return G0, F.n % 2 == 1


def mobius_orbit(G: Mat2, b=0) -> list:
    """Basis labels visited by repeated Moebius action of G starting from b."""
    out = [b]
    cur = mobius_action(G, b)
    while cur != b:
        out.append(cur)
        cur = mobius_action(G, cur)
    return out


def matrix_order(G: Mat2, limit: int | None = None) -> int:
    I = Mat2.identity(G.ring)
    M, k = G, 1
    limit = limit or G.ring.q**4
    while M != I:
        M = M @ G
        k += 1
        if k > limit:
            raise AssertionError("order limit exceeded")
    return k


# ---------------------------------------------------------------- enumeration


@dataclass
class CyclerScan:
    field: FField
    count: int
    scanned: int
    samples: list = field(default_factory=list)
    antisymplectic: int = 0


def enumerate_cyclers(F: FField, samples: int = 5, workers: int = 1) -> CyclerScan:
    """Exhaustive scan of GL_p(2, F_d); partitions by the first row."""
    q = F.q
    if q**4 > SCAN_LIMIT:
        raise GuardExceeded(f"scan of {q**4} matrices exceeds the limit {SCAN_LIMIT}")
    table: dict[tuple[int, int], bool] = {}
    for t in range(q):
        for delta in range(1, q):
            if F.is_prime_subfield(delta):
                gtype, _, r, _ = _classify_td(F, t, delta)
                table[(t, delta)] = gtype == 2 and F.n % 2 == 1 and math.gcd(r, q + 1) == 1
    add, mul, neg = F.add_table, F.mul_table, F.neg_table
    prime = np.array([F.is_prime_subfield(x) and x != 0 for x in range(q)])
    cyc = np.zeros((q, q), dtype=bool)
    for (t, delta), v in table.items():
        cyc[t, delta] = v
    cc, dd = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    minus_one = F.neg(1)

    def row(a: int) -> tuple[int, int, list, int]:
        count = scanned = anti = 0
        found = []
        for b in range(q):
            det = add[mul[a, dd], neg[mul[b, cc]]]
            tr = add[a, dd]
            ok = prime[det]
            hit = ok & cyc[tr, det]
            scanned += int(ok.sum())
            count += int(hit.sum())
            anti += int((hit & (det == minus_one)).sum())
            if len(found) < samples:
                for c, d in zip(cc[hit], dd[hit]):
                    if len(found) < samples:
                        found.append(Mat2(F, a, b, int(c), int(d)))
        return count, scanned, found, anti

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(row, range(q)))
    else:
        parts = [row(a) for a in range(q)]
    out = CyclerScan(F, 0, 0)
    for count, scanned, found, anti in parts:
        out.count += count
        out.scanned += scanned
        out.antisymplectic += anti
        out.samples.extend(found)
    out.samples = out.samples[:samples]
    return out


# ---------------------------------------------------------------- eigenvectors


@dataclass
class BalancedState:
    G: Mat2
    psi: ExactVec
    eigenvalue: CycloNum
    mu: CycloNum
    parity: int
    nullity: int
    probs: dict | None = None
    balanced: bool | None = None
    wigner: np.ndarray | None = None

    def normalized(self) -> np.ndarray:
        v = self.psi.to_complex()
        return v / np.linalg.norm(v)


def parity_apply(psi: ExactVec, F: FField) -> ExactVec:
    """A|x> = |-x>."""
    return ExactVec([psi[int(F.neg_table[x])] for x in range(F.q)], psi.N)


def same_ray(u: ExactVec, v: ExactVec) -> bool:
    """Exact test that u is a nonzero cyclotomic multiple of v."""
    return not u.is_zero() and _scalar_ratio(u, v) is not None


def _scalar_ratio(w: ExactVec, v: ExactVec) -> CycloNum | None:
    j = next((i for i, x in enumerate(v) if not x.is_zero()), None)
    if j is None:
        return None
    lam = w[j] / v[j]
    return lam if w == v.scale(lam) else None


def cycler_eigenvector(G: Mat2, analyze: bool = False) -> BalancedState:
    """Exact psi with U_G psi = psi, from the unit eigenspace of U_{G^{2 m0}}.

    With analyze=True the MUB probabilities, the balancedness flag and the
    float Wigner grid are filled in as well.
    """
    rep = suborder_classify(G)
    if not rep.is_cycler:
        raise ValueError("matrix is not a MUB-cycler")
    F = G.ring
    H = G ** (2 * rep.m0)
    UH = gu_new(H).Usym
    N = UH.N
    null = exact_nullspace(UH - ExactMat.identity(N, F.q))
    if len(null) != 1:
        raise AssertionError(f"unit eigenspace of U_G^(2 m0) has dimension {len(null)}, expected 1")
    phi = null[0]
    UG = gu_new(G)
    lam = _scalar_ratio(gu_apply(UG, phi), phi)
    if lam is None:
        raise AssertionError("U_G does not preserve the unit eigenspace")
    mu = hilbert90_split(lam, UG.gal, UG.gal.order())
    psi = phi.scale(mu)
    if gu_apply(UG, psi) != psi:
        raise AssertionError("rescaled vector is not fixed by U_G")
    sign = -1 if (F.p - 1) // 2 % 2 else 1
    Apsi = parity_apply(psi, F)
    if Apsi == psi.scale(sign):
        parity = sign
    elif Apsi == psi.scale(-sign):
        parity = -sign
    else:
        raise AssertionError("eigenvector is not a parity eigenvector")
    state = BalancedState(G, psi, lam, mu, parity, len(null))
    if analyze:
        rep = verify_balanced(psi, F)
        state.probs, state.balanced = rep.multisets, rep.balanced
        W = state_wigner(psi, F)
        state.wigner = np.array([[to_complex(W[(a, b)]).real for b in range(F.q)] for a in range(F.q)])
    return state


# ---------------------------------------------------------------- balancedness


@dataclass
class BalanceReport:
    balanced: bool
    mus: bool
    probs: dict
    multisets: dict
    collision: dict


def _sort_key(x: CycloNum) -> float:
    return to_complex(x).real


def verify_balanced(psi: ExactVec, F: FField) -> BalanceReport:
    """Exact p_{b,v} = |<b,v|psi>|^2 / <psi|psi> over all standard MUBs."""
    if psi.is_zero():
        raise ValueError("zero vector")
    mubs = mub_standard(F)
    if psi.N != mubs.bases_exact[0].N:
        psi = ExactVec([x.lift(mubs.bases_exact[0].N) for x in psi], mubs.bases_exact[0].N)
    inv_norm = psi.norm2().inverse()
    probs, multisets, collision = {}, {}, {}
    for b in mubs.labels:
        B = mubs.bases_exact[b]
        row = []
        for v in range(F.q):
            ip = B.column(v).inner(psi)
            row.append(ip * ip.conj() * inv_norm)
        probs[b] = row
        multisets[b] = Counter(row)
        acc = CycloNum.zero(psi.N)
        for x in row:
            acc = acc + x * x
        collision[b] = acc
    ref = multisets[0]
    balanced = all(multisets[b] == ref for b in mubs.labels)
    target = Fraction(2, F.q + 1)
    mus = all(c == target for c in collision.values())
    sorted_sets = {b: sorted(probs[b], key=_sort_key) for b in mubs.labels}
    return BalanceReport(balanced, mus, probs, sorted_sets, collision)


# ---------------------------------------------------------------- Wigner functions


@dataclass
class WignerState:
    field: FField
    G: Mat2
    W: dict
    grid: np.ndarray
    rho: ExactMat
    psi: ExactVec
    rank: int
    invariant: bool
    covariant: bool


def _rotation_matrix(F: FField) -> Mat2:
    """[[alpha, beta], [-beta, alpha]] with alpha = (eta + eta^d)/2, beta = i_M (eta - eta^d)/2."""
    qe = quad_ext(F)
    E, d = qe.ext, F.q
    eta, etad = qe.eta, E.pow(qe.eta, d)
    half = E.inv(E.from_int(2))
    alpha = qe.in_base(E.mul(E.add(eta, etad), half))
    beta = qe.in_base(E.mul(E.mul(qe.i_M, E.sub(eta, etad)), half))
    if alpha is None or beta is None:
        raise AssertionError("rotation entries are not in the base field")
    return Mat2(F, alpha, beta, F.neg(beta), alpha)


def balanced_wigner(F: FField) -> WignerState:
    """The rotation-invariant Wigner function, its density matrix and its U_G invariance."""
    d = F.q
    if d % 4 != 3:
        raise ValueError("the balanced Wigner function needs d = 3 mod 4")
    N = galois_conductor(F)
    omega = [CycloNum.zeta(N, 4 * k) for k in range(F.p)]
    scale = Fraction(1, d * (d + 1))
    by_s = {}
    for s in range(d):
        acc = CycloNum.one(N)
        for x in range(1, d):
            leg = F.legendre_idx(F.add(F.mul(x, x), 1))
            if leg:
                acc = acc + omega[F.trace_idx(F.mul(x, s))] * leg
        by_s[s] = acc
    W = {}
    for p1 in range(d):
        for p2 in range(d):
            s = F.add(F.mul(p1, p1), F.mul(p2, p2))
            val = by_s[s] - (d if (p1, p2) == (0, 0) else 0)
            W[(p1, p2)] = val * scale
    rho = _rho_from_wigner(F, W)
    rank = exact_rank(rho)
    j = next(i for i in range(d) if not rho[i, i].is_zero())
    psi = rho.column(j)
    G = _rotation_matrix(F)
    U = gu_new(G)
    invariant = gu_conjugate_operator(U, rho) == rho
    covariant = all(W[G.apply(u)] == W[u].galois(U.gal.k) for u in W)
    grid = np.array([[to_complex(W[(a, b)]).real for b in range(d)] for a in range(d)])
    return WignerState(F, G, W, grid, rho, psi, rank, invariant, covariant)


def _rho_from_wigner(F: FField, W: dict) -> ExactMat:
    d = F.q
    N = galois_conductor(F)
    zero = CycloNum.zero(N)
    acc = [[zero] * d for _ in range(d)]
    for u, w in W.items():
        if w.is_zero():
            continue
        A = phase_point_exact(F, u)
        for i in range(d):
            for k in range(d):
                a = A.rows[i][k]
                if not a.is_zero():
                    acc[i][k] = acc[i][k] + w * a
    return ExactMat(acc, N)


def state_wigner(psi: ExactVec, F: FField) -> dict:
    """W_u = <psi|A_u|psi> / (d <psi|psi>), exact."""
    inv = (psi.norm2() * F.q).inverse()
    return {(a, b): psi.inner(phase_point_exact(F, (a, b)) @ psi) * inv for a in range(F.q) for b in range(F.q)}


# ---------------------------------------------------------------- orbit counting


def conjectured_balanced_count(d: int) -> int:
    return d**3 * (d - 1) // 2


def _ray_key(v: ExactVec) -> tuple:
    """Row j of |v><v| for the first nonzero index j; a phase-invariant key for unit-norm-preserving orbits."""
    j = next(i for i, x in enumerate(v) if not x.is_zero())
    cj = v[j].conj()
    return (j,) + tuple(x * cj for x in v)


def _clifford_generators(F: FField) -> list:
    """Displacements along an additive basis, unipotent symplectics, S_inf and complex conjugation."""
    gens = []
    basis = [F.p**i for i in range(F.n)]
    for e in basis:
        gens.append(("U", displacement_exact(F, (e, 0))))
        gens.append(("U", displacement_exact(F, (0, e))))
        gens.append(("G", gu_new(mub_matrix(F, e))))
    gens.append(("G", gu_new(mub_matrix(F, INF))))
    gens.append(("G", gu_new(Mat2(F, 1, 0, 0, F.neg(1)))))
    return gens


def _apply_gen(gen, v: ExactVec) -> ExactVec:
    kind, op = gen
    if kind == "U":
        return op @ v
    return gu_apply(op, v)


def balanced_orbit_count(F: FField, method: str = "bfs", psi: ExactVec | None = None, limit: int = ORBIT_LIMIT) -> int:
    """Size of the extended-Clifford orbit of the cycler eigenstate.

    method "bfs" walks exact state vectors; method "wigner" enumerates the group
    action on the exact Wigner function (affine maps and complex conjugation).
    """
    if psi is None:
        G0, exists = cycler_canonical(F)
        if not exists:
            raise ValueError("no MUB-cyclers for even exponent")
        psi = cycler_eigenvector(G0).psi
    if method == "bfs":
        return _orbit_bfs(F, psi, limit)
    if method == "wigner":
        return _orbit_wigner(F, psi)
    raise ValueError(f"unknown method {method!r}")


def _orbit_bfs(F: FField, psi: ExactVec, limit: int) -> int:
    gens = _clifford_generators(F)
    seen = {_ray_key(psi)}
    frontier = [psi]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = _apply_gen(g, v)
                k = _ray_key(w)
                if k not in seen:
                    seen.add(k)
                    nxt.append(w)
                    if len(seen) > limit:
                        raise GuardExceeded(f"orbit exceeds {limit} states")
        frontier = nxt
    return len(seen)


def _orbit_wigner(F: FField, psi: ExactVec) -> int:
    """Distinct functions g(W) o (S^-1 (p - u)) over det(S) = +-1, all shifts u."""
    d = F.q
    W = state_wigner(psi, F)
    ids: dict[CycloNum, int] = {}
    vals = np.zeros((d, d), dtype=np.int64)
    for (a, b), w in W.items():
        vals[a, b] = ids.setdefault(w, len(ids))
    conj_map = np.array([ids.setdefault(w.conj(), len(ids)) for w in list(ids)], dtype=np.int64)
    if len(ids) != len(conj_map):
        raise AssertionError("conjugate Wigner values not closed")
    mul, add, neg = F.mul_table, F.add_table, F.neg_table
    pts = np.arange(d)
    P1, P2 = np.meshgrid(pts, pts, indexing="ij")
    seen = set()
    minus_one = F.neg(1)
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for dd in range(d):
                    det = add[mul[a, dd], neg[mul[b, c]]]
                    if det not in (1, minus_one):
                        continue
                    # new(p) = old(S^-1 p) composed with conjugation when det = -1
                    src1 = add[mul[a, P1], mul[b, P2]]
                    src2 = add[mul[c, P1], mul[dd, P2]]
                    base = vals[src1, src2]
                    if det == minus_one:
                        base = conj_map[base]
                    for u1 in range(d):
                        sh = np.roll(base, u1, axis=0) if F.n == 1 else None
                        for u2 in range(d):
                            if F.n == 1:
                                img = np.roll(sh, u2, axis=1)
                            else:
                                img = base[neg_add(F, P1, u1), neg_add(F, P2, u2)]
                            seen.add(img.tobytes())
    return len(seen)


def neg_add(F: FField, P: np.ndarray, u: int) -> np.ndarray:
    return F.add_table[P, F.neg_table[u]]
