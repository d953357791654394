"""SIC verification, the d=3 one-parameter family, K_t orthogonality measures and fiducial search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from .clifford import zauner
from .weylheisenberg import displacement

__all__ = [
    "SicCandidate",
    "KtReport",
    "SearchResult",
    "sic3_family",
    "wh_orbit",
    "is_sic",
    "dependent_triples",
    "kt_measure",
    "kt_bound",
    "sic_objective",
    "sic_search",
    "projectors",
]

VERIFY_TOL = 1e-9


@dataclass
class SicCandidate:
    """d^2 vectors as rows of `vectors`; `fiducial` is set when the set is a WH orbit."""

    d: int
    vectors: np.ndarray
    fiducial: np.ndarray | None = None

    @property
    def overlaps(self) -> np.ndarray:
        V = self.vectors / np.linalg.norm(self.vectors, axis=1, keepdims=True)
        return np.abs(V.conj() @ V.T) ** 2


def sic3_family(theta: float) -> SicCandidate:
    """Nine vectors (0,1,-e^{i theta} eta^k), (-e^{i theta} eta^k,0,1), (1,-e^{i theta} eta^k,0), normalized.

    Row 3j + k holds line j, power k.
    """
    eta = np.exp(2j * np.pi / 3)
    a = np.exp(1j * theta)
    rows = []
    for j in range(3):
        for k in range(3):
            z = -a * eta**k
            v = ((0, 1, z), (z, 0, 1), (1, z, 0))[j]
            rows.append(np.array(v, dtype=complex) / np.sqrt(2))
    return SicCandidate(3, np.array(rows))


def wh_orbit(psi: np.ndarray) -> np.ndarray:
    """Rows D_u psi for u = (u1, u2) in row-major order."""
    psi = np.asarray(psi, dtype=complex)
    d = psi.size
    return np.array([displacement(d, (u1, u2)) @ psi for u1 in range(d) for u2 in range(d)])


def is_sic(c: SicCandidate | np.ndarray, tol: float = VERIFY_TOL) -> bool:
    """All off-diagonal |<i|j>|^2 within tol of 1/(d+1); a bare array is read as a WH fiducial."""
    if not isinstance(c, SicCandidate):
        psi = np.asarray(c, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        c = SicCandidate(psi.size, wh_orbit(psi), psi)
    d = c.d
    if c.vectors.shape != (d * d, d):
        raise ValueError(f"expected {d * d} vectors of length {d}")
    if np.abs(np.linalg.norm(c.vectors, axis=1) - 1).max() > tol:
        raise ValueError("vectors are not normalized")
    if c.fiducial is not None:
        psi = c.fiducial
        vals = [abs(np.vdot(psi, displacement(d, u) @ psi)) ** 2 for u in itertools.product(range(d), repeat=2) if u != (0, 0)]
        return bool(np.abs(np.array(vals) - 1 / (d + 1)).max() <= tol)
    O = c.overlaps
    off = O[~np.eye(d * d, dtype=bool)]
    return bool(np.abs(off - 1 / (d + 1)).max() <= tol)


def dependent_triples(vectors: np.ndarray, tol: float = 1e-10) -> list[tuple[int, int, int]]:
    """Index triples whose three vectors are linearly dependent (relative singular value test)."""
    out = []
    for T in itertools.combinations(range(len(vectors)), 3):
        s = np.linalg.svd(vectors[list(T)], compute_uv=False)
        if s[-1] <= tol * s[0]:
            out.append(T)
    return out


def projectors(vectors: np.ndarray) -> list[np.ndarray]:
    V = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    return [np.outer(v, v.conj()) for v in V]


# ---------------------------------------------------------------- K_t


@dataclass
class KtReport:
    t: float
    value: float
    bound: float
    saturated: bool
    rank_one: bool
    resolution: bool


def kt_bound(d: int, t: float) -> float:
    return d * d * (d - 1) / (d + 1) ** (t - 1)


def kt_measure(ops, t: float, tol: float = VERIFY_TOL) -> KtReport:
    """K_t = sum_{i != j} Tr(A_i A_j)^t for d^2 positive operators with Tr(A_i^2) = 1."""
    if t < 1:
        raise ValueError("t must be >= 1")
    A = np.array(ops, dtype=complex)
    n, d, _ = A.shape
    if n != d * d:
        raise ValueError(f"expected {d * d} operators, got {n}")
    if np.abs(A - A.conj().transpose(0, 2, 1)).max() > tol:
        raise ValueError("operators must be Hermitian")
    eig = np.linalg.eigvalsh(A)
    if eig.min() < -tol:
        raise ValueError("operators must be positive semidefinite")
    V = A.reshape(n, d * d)
    gram = (V @ V.conj().T).real  # Tr(A_i A_j) for Hermitian A
    if np.abs(np.diag(gram) - 1).max() > tol:
        raise ValueError("operators must satisfy Tr(A^2) = 1")
    off = np.clip(gram[~np.eye(n, dtype=bool)], 0, None)
    value = float(np.sum(off**t))
    bound = kt_bound(d, t)
    rank_one = bool(np.all(np.sum(eig > tol, axis=1) == 1))
    resolution = bool(np.abs(A.sum(axis=0) - d * np.eye(d)).max() <= tol * d)
    if value < bound - tol * max(1.0, bound):
        raise AssertionError(f"K_t = {value} below the bound {bound}")
    return KtReport(t, value, bound, abs(value - bound) <= tol * max(1.0, bound), rank_one, resolution)


# ---------------------------------------------------------------- fiducial search


@dataclass
class SearchResult:
    d: int
    fiducial: np.ndarray | None
    objective: float
    target: float
    restarts: int
    winner: int
    success: bool


def _displacement_stack(d: int) -> np.ndarray:
    return np.array([displacement(d, (u1, u2)) for u1 in range(d) for u2 in range(d)])


def sic_objective(psi: np.ndarray, stack: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """g = sum_{u != 0} |<psi|D_u psi>|^4 / |psi|^8 and its Wirtinger gradient d g / d conj(psi)."""
    psi = np.asarray(psi, dtype=complex)
    d = psi.size
    if stack is None:
        stack = _displacement_stack(d)
    Dpsi = stack @ psi
    c = Dpsi @ psi.conj()
    n = float(np.vdot(psi, psi).real)
    a2 = np.abs(c) ** 2
    f_all = float(np.sum(a2**2))
    Ddag_psi = stack.conj().transpose(0, 2, 1) @ psi
    grad_all = 2 * (a2 * c.conj()) @ Dpsi + 2 * (a2 * c) @ Ddag_psi
    g = f_all / n**4 - 1.0
    grad = grad_all / n**4 - 4 * f_all / n**5 * psi
    return g, grad


def _real_fun(stack: np.ndarray, basis: np.ndarray | None):
    def fun(x):
        z = x[: x.size // 2] + 1j * x[x.size // 2 :]
        psi = z if basis is None else basis @ z
        g, gz = sic_objective(psi, stack)
        if basis is not None:
            gz = basis.conj().T @ gz
        return g, np.concatenate([2 * gz.real, 2 * gz.imag])

    return fun


def _polish(psi: np.ndarray, stack: np.ndarray, basis: np.ndarray | None) -> np.ndarray:
    """Trust-region least squares on |<psi|D_u psi>|^2 = 1/(d+1), u != 0, to reach full precision."""
    d = psi.size
    z0 = psi if basis is None else basis.conj().T @ psi
    k = z0.size

    def res(x):
        z = x[:k] + 1j * x[k:]
        v = z if basis is None else basis @ z
        v = v / np.linalg.norm(v)
        c = (stack[1:] @ v) @ v.conj()
        return np.abs(c) ** 2 - 1 / (d + 1)

    x = least_squares(res, np.concatenate([z0.real, z0.imag]), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15).x
    z = x[:k] + 1j * x[k:]
    v = z if basis is None else basis @ z
    return v / np.linalg.norm(v)


def sic_search(
    d: int,
    seed: int = 0,
    restarts: int = 50,
    zauner_subspace: bool = False,
    tol: float = 1e-9,
    stop_early: bool = False,
) -> SearchResult:
    """Minimize the WH frame-potential objective from random starts; winner by (objective, restart index).

    A winner within tol of the target is polished on the overlap equations.
    """
    if d < 2:
        raise ValueError("SIC search needs d >= 2")
    if d > 8:
        raise ValueError("SIC search is limited to d <= 8")
    stack = _displacement_stack(d)
    basis = zauner(d).eigenspaces["H1"] if zauner_subspace else None
    k = d if basis is None else basis.shape[1]
    fun = _real_fun(stack, basis)
    target = (d - 1) / (d + 1)
    best = (np.inf, -1, None)
    for i in range(restarts):
        rng = np.random.default_rng([seed, i])
        x0 = rng.normal(size=2 * k)
        res = minimize(fun, x0, jac=True, method="L-BFGS-B", options={"maxiter": 5000, "gtol": 1e-14, "ftol": 1e-16})
        val = float(res.fun)
        if (val, i) < best[:2]:
            z = res.x[:k] + 1j * res.x[k:]
            psi = z if basis is None else basis @ z
            best = (val, i, psi / np.linalg.norm(psi))
        if stop_early and best[0] - target <= tol:
            break
    val, idx, psi = best
    if psi is not None and abs(val - target) <= tol:
        psi = _polish(psi, stack, basis)
        val = float(sic_objective(psi, stack)[0])
    success = bool(abs(val - target) <= tol and is_sic(psi, tol=1e-8))
    return SearchResult(d, psi if success else None, val, target, restarts, idx, success)
