import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hforge.clifford import zauner
from hforge.exactmath import CycloNum
from hforge.linalg import ExactMat, ExactVec, eig_unitary, exact_nullspace, exact_rank, rank_nullspace
from hforge.sictools import sic3_family
from hforge.weylheisenberg import shift_clock


def random_unitary(n, seed):
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return Q * (np.diag(R) / abs(np.diag(R)))


def test_identity_spectrum():
    out = eig_unitary(np.eye(5))
    assert len(out) == 1
    lam, B = out[0]
    assert abs(lam - 1) < 1e-12 and B.shape == (5, 5)


def test_clock_spectrum():
    _, Z = shift_clock(3)
    out = eig_unitary(Z)
    assert [B.shape[1] for _, B in out] == [1, 1, 1]
    w = np.exp(2j * np.pi / 3)
    assert np.allclose([lam for lam, _ in out], [1, w, w * w])


def test_zauner_multiplicities():
    eta = np.exp(2j * np.pi / 3)
    out = eig_unitary(zauner(6).unitary)
    mult = {k: sum(B.shape[1] for lam, B in out if abs(lam - eta**k) < 1e-8) for k in range(3)}
    assert mult == {0: 3, 1: 2, 2: 1}


def test_non_unitary_rejected():
    with pytest.raises(ValueError):
        eig_unitary(np.diag([1.0, 2.0]))


@given(st.integers(2, 8), st.integers(0, 10**6))
def test_eig_reconstruction(n, seed):
    U = random_unitary(n, seed)
    out = eig_unitary(U)
    M = sum(lam * B @ B.conj().T for lam, B in out)
    assert np.abs(M - U).max() < 1e-7
    for lam, B in out:
        assert abs(abs(lam) - 1) < 1e-8
        assert np.allclose(B.conj().T @ B, np.eye(B.shape[1]), atol=1e-8)
        assert np.allclose(U @ B, lam * B, atol=1e-7)


def test_rank_nullspace_examples():
    r, N = rank_nullspace(np.zeros((3, 3)))
    assert r == 0 and N.shape == (3, 3)
    r, N = rank_nullspace(np.eye(4))
    assert r == 4 and N.shape == (4, 0)


def test_sic3_dependent_triple_rank():
    V = sic3_family(0.0).vectors
    L = V[[0, 1, 2]]
    r, N = rank_nullspace(L)
    assert r == 2 and N.shape[1] == 1
    assert np.abs(L @ N).max() < 1e-12


def test_exact_nullspace_examples():
    Z = ExactMat.zeros(5, 2)
    assert len(exact_nullspace(Z)) == 2
    I = ExactMat.identity(5, 3)
    assert len(exact_nullspace(I - I)) == 3
    assert exact_nullspace(I) == []


@st.composite
def exact_matrix(draw):
    N = draw(st.sampled_from([3, 4, 5, 12]))
    r = draw(st.integers(1, 4))
    c = draw(st.integers(1, 4))
    k = draw(st.integers(1, min(r, c)))
    ints = st.integers(-3, 3)

    def num():
        return CycloNum(N, [draw(ints) for _ in range(N)])

    A = ExactMat([[num() for _ in range(k)] for _ in range(r)], N)
    B = ExactMat([[num() for _ in range(c)] for _ in range(k)], N)
    return A @ B


@given(exact_matrix())
def test_exact_rank_nullity(M):
    null = exact_nullspace(M)
    cols = M.to_complex().shape[1]
    assert exact_rank(M) + len(null) == cols
    for v in null:
        assert (M @ v).is_zero()


@given(exact_matrix())
def test_float_and_exact_rank_agree(M):
    r, _ = rank_nullspace(M.to_complex(), 1e-10)
    assert r == exact_rank(M)


def test_exact_vector_ops():
    N = 12
    v = ExactVec([CycloNum.zeta(N, 1), CycloNum.one(N)])
    assert v.norm2() == 2
    assert (v - v).is_zero()
