"""Linear dependencies among d-subsets of Weyl-Heisenberg orbits of Zauner eigenvectors.

Orbit points u = (u1, u2) in Z_d^2 are indexed by i = u1 d + u2 and the orbit
vector of point i is D_u psi (ordinary displacement operators).
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numba as nb
import numpy as np

from .clifford import zauner
from .guards import GuardExceeded
from .weylheisenberg import displacement

__all__ = [
    "OrbitContext",
    "DepSet",
    "OrbitSummary",
    "NormalReport",
    "SmallSicReport",
    "EIGENSPACES",
    "make_context",
    "context_from_vector",
    "zauner_point",
    "m_matrix",
    "zauner_orbits",
    "predicted_sets",
    "exhaustive_search",
    "invariant_search",
    "orbit_grouping",
    "incidence",
    "hesse_check",
    "normals_and_orthogonality",
    "small_sic_d6",
    "rst_operators",
    "subgroup_span_dim",
]

EIGENSPACES = ("H1", "Heta", "Heta2")
DEP_TOL = 1e-10
PRE_TOL = 1e-6
EXHAUSTIVE_LIMIT = 100_000_000


# ---------------------------------------------------------------- contexts


@dataclass
class OrbitContext:
    d: int
    psi: np.ndarray
    label: str | None
    vectors: np.ndarray
    seed: int | None = None

    def point(self, i: int) -> tuple[int, int]:
        return divmod(i, self.d)

    def index(self, u) -> int:
        return (u[0] % self.d) * self.d + (u[1] % self.d)


def _orbit_vectors(psi: np.ndarray) -> np.ndarray:
    d = psi.size
    return np.array([displacement(d, (u1, u2)) @ psi for u1 in range(d) for u2 in range(d)])


def make_context(d: int, label: str = "H1", seed: int = 0) -> OrbitContext:
    """Seeded complex Gaussian projected onto a Zauner eigenspace and normalized."""
    if label not in EIGENSPACES:
        raise ValueError(f"label must be one of {EIGENSPACES}")
    B = zauner(d).eigenspaces[label]
    if B.shape[1] == 0:
        raise ValueError(f"{label} is empty in dimension {d}")
    rng = np.random.default_rng(seed)
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi = B @ (B.conj().T @ z)
    psi = psi / np.linalg.norm(psi)
    return OrbitContext(d, psi, label, _orbit_vectors(psi), seed)


def context_from_vector(psi: np.ndarray, tol: float = 1e-8) -> OrbitContext:
    """Context for a given vector; the label is its Zauner eigenspace, or None if it is not an eigenvector."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    d = psi.size
    U = zauner(d).unitary
    eta = np.exp(2j * np.pi / 3)
    img = U @ psi
    label = None
    for j, name in enumerate(EIGENSPACES):
        if np.linalg.norm(img - eta**j * psi) < tol:
            label = name
    return OrbitContext(d, psi, label, _orbit_vectors(psi))


# ---------------------------------------------------------------- phase-space maps


def zauner_point(d: int, u) -> tuple[int, int]:
    """Z = [[0, -1], [1, -1]] acting on a point mod d."""
    return ((-u[1]) % d, (u[0] - u[1]) % d)


def m_matrix(d: int) -> tuple[int, int, int, int]:
    """Order-6 symplectic [[k+1, k], [2k, 2k+1]] for d = 3k, read mod d on points."""
    if d % 3:
        raise ValueError("M is defined for d divisible by 3")
    k = d // 3
    return (k + 1, k, 2 * k, 2 * k + 1)


def _apply(A, d: int, u) -> tuple[int, int]:
    a, b, c, e = A
    return ((a * u[0] + b * u[1]) % d, (c * u[0] + e * u[1]) % d)


def zauner_orbits(d: int) -> tuple[list[tuple], list[tuple]]:
    """Triplets {p, Zp, Z^2 p} and singlets (fixed points) of Z on Z_d^2."""
    seen, trip, sing = set(), [], []
    for p in itertools.product(range(d), repeat=2):
        if p in seen:
            continue
        o = [p, zauner_point(d, p), zauner_point(d, zauner_point(d, p))]
        seen.update(o)
        if o[1] == p:
            sing.append(p)
        else:
            trip.append(tuple(o))
    return trip, sing


def _eigen_dims(d: int) -> tuple[int, int, int]:
    k, r = divmod(d, 3)
    return {0: (k + 1, k, k - 1), 1: (k + 1, k, k), 2: (k + 1, k + 1, k)}[r]


# ---------------------------------------------------------------- dependent sets


@dataclass
class DepSet:
    indices: tuple[int, ...]
    d: int
    rank: int
    tags: dict = field(default_factory=dict)
    normal: np.ndarray | None = None

    @property
    def points(self) -> tuple[tuple[int, int], ...]:
        return tuple(divmod(i, self.d) for i in self.indices)

    def to_json(self) -> dict:
        out = {"points": [list(p) for p in self.points], "rank": self.rank}
        if self.tags:
            out["tags"] = dict(self.tags)
        return out


def _rank(V: np.ndarray, tol: float = DEP_TOL) -> int:
    s = np.linalg.svd(V, compute_uv=False)
    return int(np.sum(s > tol * s[0])) if s[0] > 0 else 0


def _violations(d: int, label: str) -> list[tuple[int, int]]:
    """Minimal (triplets, singlets) counts that force a dependency for an eigenvector in `label`."""
    lab = EIGENSPACES.index(label)
    dims = _eigen_dims(d)
    nsing = 3 if d % 3 == 0 else 1

    def viol(a, s):
        return any(a + (s if j == lab else 0) > dims[j] for j in range(3))

    out = []
    for a in range(d // 3 + 1):
        for s in range(nsing + 1):
            if 3 * a + s <= d and viol(a, s) and not (a and viol(a - 1, s)) and not (s and viol(a, s - 1)):
                out.append((a, s))
    return out


def predicted_sets(ctx: OrbitContext, verify: bool = True) -> list[DepSet]:
    """All d-subsets containing a WH translate of a Z-invariant configuration whose
    triplet/singlet counts overfill one eigenspace of U_Z.

    A triplet contributes one vector to each eigenspace, a singlet one vector to
    the eigenspace of psi; more vectors than the eigenspace dimension forces a
    dependency.
    """
    if ctx.label is None:
        raise ValueError("predicted sets need a Zauner eigenvector")
    d = ctx.d
    trip, sing = zauner_orbits(d)
    pts = list(itertools.product(range(d), repeat=2))
    base = set()
    for a, s in _violations(d, ctx.label):
        for T in itertools.combinations(trip, a):
            for S in itertools.combinations(sing, s):
                W = {q for t in T for q in t} | set(S)
                rest = [p for p in pts if p not in W]
                for C in itertools.combinations(rest, d - len(W)):
                    base.add(frozenset(W.union(C)))
    found = set()
    for B in base:
        for u in pts:
            found.add(tuple(sorted(ctx.index((p[0] + u[0], p[1] + u[1])) for p in B)))
    out = []
    for idx in sorted(found):
        r = _rank(ctx.vectors[list(idx)])
        if verify and r >= d:
            raise AssertionError(f"predicted set {idx} is independent")
        out.append(DepSet(idx, d, r, {"predicted": True}))
    return out


# ---------------------------------------------------------------- exhaustive kernel


@nb.njit(cache=True, nogil=True)
def _svd_dependent(V, rows, k, tol):
    A = np.empty((k, V.shape[1]), dtype=np.complex128)
    for i in range(k):
        A[i] = V[rows[i]]
    s = np.linalg.svd(A)[1]
    r = 0
    for x in s:
        if x > tol * s[0]:
            r += 1
    return r < k, r


@nb.njit(cache=True, nogil=True)
def _emit(out, ranks, count, idx, d, r):
    if count < out.shape[0]:
        for i in range(d):
            out[count, i] = idx[d - 1 - i]
        ranks[count] = r
    return count + 1


@nb.njit(cache=True, nogil=True)
def _shard(V, m, d, pre_tol, tol, out, ranks):
    """All dependent d-subsets whose largest index is m; indices are chosen in decreasing order."""
    dim = V.shape[1]
    Q = np.zeros((d, dim), dtype=np.complex128)
    idx = np.empty(d, dtype=np.int64)
    cand = np.empty(d + 1, dtype=np.int64)
    comp = np.empty(d, dtype=np.int64)
    nrm = np.empty(dim, dtype=np.complex128)
    r = np.empty(dim, dtype=np.complex128)
    count = 0
    idx[0] = m
    v0 = V[m]
    Q[0] = v0 / np.sqrt(np.sum(np.abs(v0) ** 2))
    if d == 1:
        return count
    level = 1
    cand[1] = m - 1
    while level >= 1:
        if level == d - 1:
            # normal to the span of the d-1 chosen vectors
            # project the standard basis vector least covered by the span
            kbest, wbest = 0, 2.0
            for k in range(dim):
                w = 0.0
                for i in range(d - 1):
                    w += Q[i, k].real ** 2 + Q[i, k].imag ** 2
                if w < wbest:
                    kbest, wbest = k, w
            for k in range(dim):
                nrm[k] = 0.0
            nrm[kbest] = 1.0
            for i in range(d - 1):
                a = np.conj(Q[i, kbest])
                for k in range(dim):
                    nrm[k] -= a * Q[i, k]
            nn = 0.0
            for k in range(dim):
                nn += nrm[k].real ** 2 + nrm[k].imag ** 2
            nn = np.sqrt(nn)
            for k in range(dim):
                nrm[k] /= nn
            for j in range(idx[d - 2] - 1, -1, -1):
                c = 0j  # <n, v_j>
                for k in range(dim):
                    c += np.conj(nrm[k]) * V[j, k]
                if abs(c) < pre_tol:
                    idx[d - 1] = j
                    dep, rk = _svd_dependent(V, idx, d, tol)
                    if dep:
                        count = _emit(out, ranks, count, idx, d, rk)
            level -= 1
            continue
        c = cand[level]
        if c < d - 1 - level:
            level -= 1
            continue
        cand[level] = c - 1
        idx[level] = c
        for k in range(dim):
            r[k] = V[c, k]
        for _ in range(2):
            for i in range(level):
                a = 0j
                for k in range(dim):
                    a += np.conj(Q[i, k]) * r[k]
                for k in range(dim):
                    r[k] -= a * Q[i, k]
        nr = 0.0
        for k in range(dim):
            nr += r[k].real ** 2 + r[k].imag ** 2
        nr = np.sqrt(nr)
        if nr < pre_tol:
            dep, _ = _svd_dependent(V, idx, level + 1, tol)
            if dep:
                # every completion from indices below c is dependent
                need = d - 1 - level
                for i in range(need):
                    comp[i] = need - 1 - i
                while True:
                    for i in range(need):
                        idx[level + 1 + i] = comp[i]
                    _, rr = _svd_dependent(V, idx, d, tol)
                    count = _emit(out, ranks, count, idx, d, rr)
                    # next decreasing combination of `need` indices below c
                    pos = need - 1
                    while pos >= 0:
                        lim = c - 1 if pos == 0 else comp[pos - 1] - 1
                        if comp[pos] < lim:
                            break
                        pos -= 1
                    if pos < 0:
                        break
                    comp[pos] += 1
                    for i in range(pos + 1, need):
                        comp[i] = need - 1 - i
                continue
            if nr == 0.0:
                continue
        for k in range(dim):
            Q[level, k] = r[k] / nr
        level += 1
        cand[level] = c - 1
    return count


def _run_shard(V: np.ndarray, m: int, d: int, pre_tol: float, tol: float) -> tuple[np.ndarray, np.ndarray]:
    cap = 1024
    while True:
        out = np.empty((cap, d), dtype=np.int64)
        ranks = np.empty(cap, dtype=np.int64)
        n = _shard(V, m, d, pre_tol, tol, out, ranks)
        if n <= cap:
            return out[:n], ranks[:n]
        cap = n


def _threads() -> int:
    return int(os.environ.get("HFORGE_THREADS", os.cpu_count() or 1))


def exhaustive_search(
    ctx: OrbitContext,
    tol: float = DEP_TOL,
    workers: int | None = None,
    long_run: bool = False,
) -> list[DepSet]:
    """Every d-subset of the orbit whose smallest singular value is below tol times the largest.

    Shards are the colex blocks with a fixed largest index; the merged result is
    sorted and independent of the worker count.
    """
    d = ctx.d
    n = d * d
    total = comb(n, d)
    if total > EXHAUSTIVE_LIMIT and not long_run:
        raise GuardExceeded(f"{total} subsets exceed the limit {EXHAUSTIVE_LIMIT}; pass long_run=True (--long-run)")
    V = np.ascontiguousarray(ctx.vectors / np.linalg.norm(ctx.vectors, axis=1, keepdims=True))
    shards = list(range(n - 1, d - 2, -1))
    workers = workers or _threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda m: _run_shard(V, m, d, PRE_TOL, tol), shards))
    else:
        parts = [_run_shard(V, m, d, PRE_TOL, tol) for m in shards]
    rows = [tuple(int(x) for x in r) + (int(k),) for out, rk in parts for r, k in zip(out, rk)]
    rows.sort()
    return [DepSet(r[:d], d, r[d]) for r in rows]


@nb.njit(cache=True, nogil=True)
def _block_search(V, blocks, sizes, d, pre_tol, tol, out, ranks):
    """Dependent unions of blocks with total size d; blocks are chosen in decreasing order.

    Below a dependent prefix every completion is dependent, so Gram-Schmidt is skipped there.
    """
    nb_ = blocks.shape[0]
    dim = V.shape[1]
    Q = np.zeros((d, dim), dtype=np.complex128)
    idx = np.empty(d, dtype=np.int64)
    chosen = np.empty(d + 1, dtype=np.int64)
    fill = np.zeros(d + 2, dtype=np.int64)  # points used before level
    r = np.empty(dim, dtype=np.complex128)
    count = 0
    dep_level = -1
    level = 0
    chosen[0] = nb_
    while level >= 0:
        b = chosen[level] - 1
        # next block that fits
        while b >= 0 and fill[level] + sizes[b] > d:
            b -= 1
        if b < 0:
            level -= 1
            if level < dep_level:
                dep_level = -1
            continue
        chosen[level] = b
        f = fill[level]
        for t in range(sizes[b]):
            idx[f + t] = blocks[b, t]
        nf = f + sizes[b]
        if dep_level < 0:
            small = False
            for t in range(f, nf):
                for k in range(dim):
                    r[k] = V[idx[t], k]
                for _ in range(2):
                    for i in range(t):
                        a = 0j
                        for k in range(dim):
                            a += np.conj(Q[i, k]) * r[k]
                        for k in range(dim):
                            r[k] -= a * Q[i, k]
                nr = 0.0
                for k in range(dim):
                    nr += r[k].real ** 2 + r[k].imag ** 2
                nr = np.sqrt(nr)
                if nr < pre_tol:
                    small = True
                    nr = max(nr, 1e-300)
                for k in range(dim):
                    Q[t, k] = r[k] / nr
            if small:
                dep, _ = _svd_dependent(V, idx, nf, tol)
                if dep:
                    dep_level = level
        if nf == d:
            if dep_level >= 0:
                _, rk = _svd_dependent(V, idx, d, tol)
                count = _emit(out, ranks, count, idx, d, rk)
            if level == dep_level:
                dep_level = -1
            continue
        fill[level + 1] = nf
        level += 1
        chosen[level] = b
    return count


def _point_orbits(A, d: int) -> list[list[tuple[int, int]]]:
    seen, orbits = set(), []
    for p in itertools.product(range(d), repeat=2):
        if p in seen:
            continue
        o, q = [], p
        while q not in o:
            o.append(q)
            q = _apply(A, d, q)
        seen.update(o)
        orbits.append(o)
    return orbits


def invariant_search(ctx: OrbitContext, A, tol: float = DEP_TOL) -> list[DepSet]:
    """Dependent d-subsets invariant under p -> c + A(p - c) for some center c (targeted, not exhaustive).

    Translation maps orbit vectors to orbit vectors up to phases, so only sets
    invariant about the origin are rank-tested; dependent ones are then translated.
    """
    d = ctx.d
    orbits = _point_orbits(A, d)
    w = max(len(o) for o in orbits)
    blocks = np.full((len(orbits), w), -1, dtype=np.int64)
    for k, o in enumerate(orbits):
        blocks[k, : len(o)] = [ctx.index(q) for q in o]
    sizes = np.array([len(o) for o in orbits], dtype=np.int64)
    V = np.ascontiguousarray(ctx.vectors / np.linalg.norm(ctx.vectors, axis=1, keepdims=True))
    cap = 1024
    while True:
        out = np.empty((cap, d), dtype=np.int64)
        ranks = np.empty(cap, dtype=np.int64)
        n = _block_search(V, blocks, sizes, d, PRE_TOL, tol, out, ranks)
        if n <= cap:
            break
        cap = n
    found = {}
    for row, rk in zip(out[:n], ranks[:n]):
        for u in itertools.product(range(d), repeat=2):
            key = _translate(tuple(int(i) for i in row), u, d)
            found[key] = int(rk)
    return [DepSet(k, d, found[k], {"partial": True}) for k in sorted(found)]


# ---------------------------------------------------------------- orbit structure


@dataclass
class OrbitSummary:
    d: int
    orbits: list[list[tuple[int, ...]]]
    lengths: Counter
    z_invariant: list[bool]
    m_invariant: list[bool]
    short_stabilizers: dict

    @property
    def count(self) -> int:
        return len(self.orbits)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "orbits": self.count,
            "lengths": {str(k): v for k, v in sorted(self.lengths.items())},
            "z_invariant": sum(self.z_invariant),
            "m_invariant": sum(self.m_invariant),
            "both": sum(a and b for a, b in zip(self.z_invariant, self.m_invariant)),
            "m_only": self.m_only,
            "neither": sum(not a and not b for a, b in zip(self.z_invariant, self.m_invariant)),
        }

    @property
    def m_only(self) -> int:
        return sum(b and not a for a, b in zip(self.z_invariant, self.m_invariant))


def _translate(idx, u, d):
    return tuple(sorted(((i // d + u[0]) % d) * d + (i % d + u[1]) % d for i in idx))


def _map_set(idx, A, d):
    return tuple(sorted((lambda q: q[0] * d + q[1])(_apply(A, d, divmod(i, d))) for i in idx))


def orbit_grouping(sets: list[DepSet], d: int) -> OrbitSummary:
    """Partition dependent sets into WH (translation) orbits and tag Z / M invariance.

    An orbit is Z- (M-) invariant when one of its members is fixed by Z (M) about
    the origin, i.e. the orbit is invariant about some center. Each DepSet gets
    its orbit's tags.
    """
    remaining = {s.indices for s in sets}
    Z = (0, -1, 1, -1)
    M = m_matrix(d) if d % 3 == 0 else None
    orbits, zi, mi, stab = [], [], [], {}
    for idx in sorted(remaining):
        if idx not in remaining:
            continue
        orb = sorted({_translate(idx, u, d) for u in itertools.product(range(d), repeat=2)})
        for o in orb:
            remaining.discard(o)
        orbits.append(orb)
        zi.append(any(_map_set(o, Z, d) == o for o in orb))
        mi.append(M is not None and any(_map_set(o, M, d) == o for o in orb))
        if len(orb) < d * d:
            stab[len(orbits) - 1] = [u for u in itertools.product(range(d), repeat=2) if _translate(orb[0], u, d) == orb[0]]
    where = {o: k for k, orb in enumerate(orbits) for o in orb}
    for s in sets:
        k = where[s.indices]
        s.tags.update(orbit=k, z_invariant=zi[k], m_invariant=mi[k], d_subgroup_invariant=k in stab)
    return OrbitSummary(d, orbits, Counter(len(o) for o in orbits), zi, mi, stab)


def incidence(sets: list[DepSet], d: int) -> tuple[Counter, Counter]:
    """(sets per point, points per set) as multiplicity counters."""
    per_point = Counter(i for s in sets for i in s.indices)
    return Counter(per_point[i] for i in range(d * d)), Counter(len(s.indices) for s in sets)


def hesse_check(sets: list[DepSet]) -> bool:
    """9 points and 12 lines, 3 points per line and 4 lines per point."""
    if len(sets) != 12:
        return False
    per_point, per_line = incidence(sets, 3)
    return per_point == Counter({4: 9}) and per_line == Counter({3: 12})


# ---------------------------------------------------------------- normals


@dataclass
class NormalReport:
    normals: np.ndarray
    set_index: list[int]
    skipped: list[int]
    orthogonal_pairs: int
    triples: list[tuple[int, int, int]]
    quadruples: list[tuple[int, int, int, int]]
    mub: bool | None = None

    @property
    def free_triples(self) -> int:
        """Orthogonal triples not contained in an orthogonal quadruple."""
        inside = {t for q in self.quadruples for t in itertools.combinations(q, 3)}
        return sum(t not in inside for t in self.triples)


def _normal(V: np.ndarray) -> np.ndarray:
    """Unit n with <n, v> = 0 for all rows v; phase-fixed so the first nonzero entry is real positive."""
    _, _, Vh = np.linalg.svd(V)
    # V @ conj(Vh[-1]) = 0, so n = Vh[-1] satisfies <n, v> = 0
    n = Vh[-1].copy()
    k = int(np.argmax(np.abs(n) > 1e-8))
    n = n * (abs(n[k]) / n[k])
    return n / np.linalg.norm(n)


def normals_and_orthogonality(sets: list[DepSet], ctx: OrbitContext, tol: float = 1e-9, max_size: int = 4) -> NormalReport:
    """Normals of rank d-1 sets and their mutually orthogonal triples and quadruples."""
    d = ctx.d
    normals, owner, skipped = [], [], []
    for k, s in enumerate(sets):
        if s.rank != d - 1:
            skipped.append(k)
            s.tags["normal"] = "skipped"
            continue
        n = _normal(ctx.vectors[list(s.indices)])
        s.normal = n
        normals.append(n)
        owner.append(k)
    N = np.array(normals) if normals else np.zeros((0, d), complex)
    G = np.abs(N.conj() @ N.T)
    adj = G < tol
    np.fill_diagonal(adj, False)
    nbrs = [set(np.nonzero(adj[i])[0].tolist()) for i in range(len(N))]
    triples, quads = [], []
    for i in range(len(N)):
        hi = sorted(j for j in nbrs[i] if j > i)
        for a, j in enumerate(hi):
            common = [k for k in hi[a + 1 :] if k in nbrs[j]]
            for b, k in enumerate(common):
                triples.append((i, j, k))
                if max_size >= 4:
                    for l in common[b + 1 :]:
                        if l in nbrs[k]:
                            quads.append((i, j, k, l))
    report = NormalReport(N, owner, skipped, int(adj.sum() // 2), triples, quads)
    if d == 3 and len(N) == 12:
        report.mub = _is_complete_mub(N)
    return report


def _is_complete_mub(N: np.ndarray, tol: float = 1e-9) -> bool:
    """Do the d(d+1) unit vectors split into d+1 orthonormal bases that are mutually unbiased?"""
    d = N.shape[1]
    G = np.abs(N.conj() @ N.T) ** 2
    left = set(range(len(N)))
    bases = []
    while left:
        i = min(left)
        basis = [i] + [j for j in sorted(left) if j != i and G[i, j] < tol]
        if len(basis) != d or any(G[a, b] > tol for a, b in itertools.combinations(basis, 2)):
            return False
        bases.append(basis)
        left -= set(basis)
    for B1, B2 in itertools.combinations(bases, 2):
        if np.abs(G[np.ix_(B1, B2)] - 1 / d).max() > tol:
            return False
    return len(bases) == d + 1


# ---------------------------------------------------------------- small SICs


@dataclass
class SmallSicReport:
    vectors: np.ndarray
    label: str | None
    span_dim: int
    overlaps: np.ndarray
    equiangular: bool
    is_sic: bool
    r_eigenvalue: int | None
    annihilated_by: str | None
    rst_identities: dict


def rst_operators(d: int = 6) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """R, S, T built from D_{03}, D_{30}, D_{33} with omega = exp(2 pi i/6)."""
    if d != 6:
        raise ValueError("R, S, T are defined for d = 6")
    w = np.exp(2j * np.pi / 6)
    A, B, C = (displacement(6, u) for u in ((0, 3), (3, 0), (3, 3)))
    s3 = np.sqrt(3)
    return (A + B + C) / s3, (A + w**2 * B + w**4 * C) / s3, (A + w**4 * B + w**2 * C) / s3


def _rst_identities(tol: float = 1e-10) -> dict:
    R, S, T = rst_operators()
    I = np.eye(6)
    checks = {
        "S=T^dag": S - T.conj().T,
        "S^2=0": S @ S,
        "T^2=0": T @ T,
        "R^2=I": R @ R - I,
        "ST=I+R": S @ T - I - R,
        "TS=I-R": T @ S - I + R,
    }
    return {k: bool(np.abs(v).max() < tol) for k, v in checks.items()}


def small_sic_d6(psi: np.ndarray, tol: float = 1e-10) -> SmallSicReport:
    """{psi, D03 psi, D30 psi, D33 psi} for a Zauner eigenvector in d = 6."""
    ctx = context_from_vector(psi, tol=1e-8)
    if ctx.d != 6:
        raise ValueError("small SIC construction needs d = 6")
    if ctx.label is None:
        raise ValueError("vector is not a Zauner eigenvector")
    v = ctx.psi
    vecs = np.array([v] + [displacement(6, u) @ v for u in ((0, 3), (3, 0), (3, 3))])
    O = np.abs(vecs.conj() @ vecs.T)
    off = O[~np.eye(4, dtype=bool)]
    equi = bool(np.abs(off - 1 / np.sqrt(3)).max() < tol)
    span = _rank(vecs, tol)
    R, S, T = rst_operators()
    r_eig = None
    for s in (1, -1):
        if np.linalg.norm(R @ v - s * v) < 1e-8:
            r_eig = s
    ann = None
    if np.linalg.norm(S @ v) < 1e-8:
        ann = "S"
    elif np.linalg.norm(T @ v) < 1e-8:
        ann = "T"
    return SmallSicReport(vecs, ctx.label, span, O, equi, equi and span == 2, r_eig, ann, _rst_identities())


def subgroup_span_dim(psi: np.ndarray) -> int:
    """Dimension of the span of the orbit of psi under the group generated by D_{03} and D_{30}."""
    psi = np.asarray(psi, dtype=complex)
    d = psi.size
    if d % 3:
        raise ValueError("needs d divisible by 3")
    m = d // 3
    vecs = [displacement(d, (3 * a, 3 * b)) @ psi for a in range(m) for b in range(m)]
    return _rank(np.array(vecs), 1e-9)
