"""Dense linear algebra over complex floats and over exact cyclotomic numbers.

Float matrices are plain numpy complex128 arrays. Exact matrices are
ExactMat/ExactVec holding CycloNum entries of a single conductor.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .exactmath import CycloNum, to_complex

__all__ = [
    "ExactMat",
    "ExactVec",
    "eig_unitary",
    "rank_nullspace",
    "exact_nullspace",
    "exact_rank",
]

DEFAULT_TOL = 1e-10


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    order = np.argsort(values, kind="stable")
    groups, cur = [], [order[0]]
    for a, b in zip(order[:-1], order[1:]):
        if values[b] - values[a] > tol:
            groups.append(np.array(cur))
            cur = []
        cur.append(b)
    groups.append(np.array(cur))
    return groups


def eig_unitary(M: np.ndarray, tol: float = 1e-8) -> list[tuple[complex, np.ndarray]]:
    """Eigenvalues and orthonormal eigenspace bases of a unitary matrix.

    The commuting Hermitian parts (M+M^dag)/2 and (M-M^dag)/2i are diagonalized
    jointly: first the real part, then the imaginary part inside each cluster.
    Results are sorted by eigenvalue phase in [0, 2*pi).
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if np.abs(M.conj().T @ M - np.eye(n)).max() > max(tol, 1e-10) * 10:
        raise ValueError("matrix is not unitary")
    H1 = (M + M.conj().T) / 2
    H2 = (M - M.conj().T) / 2j
    w1, V1 = np.linalg.eigh(H1)
    out: list[tuple[complex, np.ndarray]] = []
    for g in _cluster(w1, tol):
        B = V1[:, g]
        w2, V2 = np.linalg.eigh(B.conj().T @ H2 @ B)
        for h in _cluster(w2, tol):
            basis = B @ V2[:, h]
            lam = complex(np.mean(np.diag(basis.conj().T @ M @ basis)))
            lam /= abs(lam)
            out.append((lam, basis))
    out.sort(key=lambda t: _phase(t[0], tol))
    return out


def _phase(z: complex, tol: float) -> float:
    a = float(np.angle(z)) % (2 * np.pi)
    return 0.0 if 2 * np.pi - a < tol else a


def rank_nullspace(M: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Numerical rank (relative to the largest singular value) and nullspace basis."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        return 0, np.eye(M.shape[1], dtype=complex)
    _, s, Vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return rank, Vh[rank:].conj().T


class ExactVec:
    """Immutable vector of CycloNums."""

    __slots__ = ("N", "entries")

    def __init__(self, entries: Iterable[CycloNum], N: int | None = None):
        self.entries = tuple(entries)
        if N is None:
            if not self.entries:
                raise ValueError("empty vector needs a conductor")
            N = self.entries[0].N
        if any(e.N != N for e in self.entries):
            raise ValueError("mixed conductors")
        self.N = N

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "ExactVec"):
        return ExactVec([a + b for a, b in zip(self.entries, other.entries)], self.N)

    def __sub__(self, other: "ExactVec"):
        return ExactVec([a - b for a, b in zip(self.entries, other.entries)], self.N)

    def scale(self, c) -> "ExactVec":
        return ExactVec([c * a for a in self.entries], self.N)

    def galois(self, k: int) -> "ExactVec":
        return ExactVec([a.galois(k) for a in self.entries], self.N)

    def conj(self) -> "ExactVec":
        return self.galois(-1)

    def inner(self, other: "ExactVec") -> CycloNum:
        """<self|other>, antilinear in self."""
        acc = CycloNum.zero(self.N)
        for a, b in zip(self.entries, other.entries):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a.conj() * b
        return acc

    def norm2(self) -> CycloNum:
        return self.inner(self)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries)

    def to_complex(self) -> np.ndarray:
        return np.array([to_complex(a) for a in self.entries], dtype=complex)

    def __eq__(self, other):
        return isinstance(other, ExactVec) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ExactVec(N={self.N}, len={len(self)})"


class ExactMat:
    """Immutable dense matrix of CycloNums."""

    __slots__ = ("N", "rows", "shape")

    def __init__(self, rows: Sequence[Sequence[CycloNum]], N: int | None = None):
        self.rows = tuple(tuple(r) for r in rows)
        if N is None:
            N = self.rows[0][0].N
        self.N = N
        self.shape = (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def identity(cls, N: int, n: int) -> "ExactMat":
        z, o = CycloNum.zero(N), CycloNum.one(N)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], N)

    @classmethod
    def zeros(cls, N: int, n: int, m: int | None = None) -> "ExactMat":
        z = CycloNum.zero(N)
        return cls([[z] * (n if m is None else m) for _ in range(n)], N)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> ExactVec:
        return ExactVec([r[j] for r in self.rows], self.N)

    def __matmul__(self, other):
        if isinstance(other, ExactVec):
            out = []
            for r in self.rows:
                acc = CycloNum.zero(self.N)
                for a, b in zip(r, other.entries):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out.append(acc)
            return ExactVec(out, self.N)
        if isinstance(other, ExactMat):
            if other.N != self.N:
                raise ValueError("conductor mismatch")
            n, k = self.shape
            m = other.shape[1]
            orows = other.rows
            nz = [[(j, orows[l][j]) for j in range(m) if not orows[l][j].is_zero()] for l in range(k)]
            out = []
            zero = CycloNum.zero(self.N)
            for r in self.rows:
                acc = [zero] * m
                for l, a in enumerate(r):
                    if a.is_zero():
                        continue
                    for j, b in nz[l]:
                        acc[j] = acc[j] + a * b
                out.append(acc)
            return ExactMat(out, self.N)
        return NotImplemented

    def __add__(self, other: "ExactMat"):
        return ExactMat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.N)

    def __sub__(self, other: "ExactMat"):
        return ExactMat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.N)

    def __neg__(self):
        return ExactMat([[-a for a in r] for r in self.rows], self.N)

    def scale(self, c) -> "ExactMat":
        return ExactMat([[c * a for a in r] for r in self.rows], self.N)

    def galois(self, k: int) -> "ExactMat":
        return ExactMat([[a.galois(k) for a in r] for r in self.rows], self.N)

    def transpose(self) -> "ExactMat":
        return ExactMat(list(zip(*self.rows)), self.N)

    def dagger(self) -> "ExactMat":
        return self.transpose().galois(-1)

    def trace(self) -> CycloNum:
        acc = CycloNum.zero(self.N)
        for i in range(min(self.shape)):
            acc = acc + self.rows[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def is_identity(self) -> bool:
        return self == ExactMat.identity(self.N, self.shape[0])

    def to_complex(self) -> np.ndarray:
        return np.array([[to_complex(a) for a in r] for r in self.rows], dtype=complex)

    def __eq__(self, other):
        return isinstance(other, ExactMat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"ExactMat(N={self.N}, shape={self.shape})"


def _rref(M: ExactMat) -> tuple[list[list[CycloNum]], list[int]]:
    rows = [list(r) for r in M.rows]
    n, m = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * a if not a.is_zero() else a for a in rows[r]]
        for i in range(n):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b if not b.is_zero() else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows, pivots


def exact_rank(M: ExactMat) -> int:
    return len(_rref(M)[1])


def exact_nullspace(M: ExactMat) -> list[ExactVec]:
    """Exact nullspace basis from reduced row echelon form, one vector per free column."""
    rows, pivots = _rref(M)
    m = M.shape[1]
    free = [c for c in range(m) if c not in pivots]
    zero, one = CycloNum.zero(M.N), CycloNum.one(M.N)
    basis = []
    for f in free:
        v = [zero] * m
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        basis.append(ExactVec(v, M.N))
    return basis
