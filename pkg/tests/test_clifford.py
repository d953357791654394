import itertools

import numpy as np
import pytest

from hforge.clifford import (
    INF,
    Mat2,
    mobius_action,
    mobius_consistent,
    mub_matrix,
    mub_standard,
    symp_unitary,
    symp_unitary_exact,
    zauner,
)
from hforge.finitefield import field_create
from hforge.weylheisenberg import dbar, displacement, displacement_exact
from helpers import proportional, random_sl2, random_sl2_int

ZAUNER_DIMS = {
    2: (1, 1, 0),
    3: (2, 1, 0),
    4: (2, 1, 1),
    5: (2, 2, 1),
    6: (3, 2, 1),
    7: (3, 2, 2),
    8: (3, 3, 2),
    9: (4, 3, 2),
    10: (4, 3, 3),
    11: (4, 4, 3),
    12: (5, 4, 3),
}


@pytest.mark.parametrize("d", sorted(ZAUNER_DIMS))
def test_zauner_dims(d):
    Z = zauner(d)
    assert Z.dims == ZAUNER_DIMS[d]
    assert np.allclose(np.linalg.matrix_power(Z.unitary, 3), np.eye(d), atol=1e-12)
    eta = np.exp(2j * np.pi / 3)
    h1, he, he2 = Z.dims
    assert abs(np.trace(Z.unitary) - (h1 + eta * he + eta**2 * he2)) < 1e-10


def test_zauner_eigenvectors():
    Z = zauner(7)
    eta = np.exp(2j * np.pi / 3)
    for k, lab in enumerate(("H1", "Heta", "Heta2")):
        B = Z.eigenspaces[lab]
        assert np.allclose(Z.unitary @ B, eta**k * B, atol=1e-10)


def test_galois_identity():
    for pn in [(3, 1), (3, 2), (5, 1)]:
        F = field_create(*pn)
        assert symp_unitary_exact(Mat2.identity(F)).is_identity()


@pytest.mark.parametrize("pn", [(3, 1), (5, 1), (7, 1)])
def test_galois_faithful(pn):
    F = field_create(*pn)
    rng = np.random.default_rng(pn[0])
    for _ in range(30):
        S1, S2 = random_sl2(F, rng), random_sl2(F, rng)
        assert symp_unitary_exact(S1) @ symp_unitary_exact(S2) == symp_unitary_exact(S1 @ S2)


def test_galois_faithful_faithful_convention_d9():
    F = field_create(3, 2)
    rng = np.random.default_rng(9)
    for _ in range(20):
        S1, S2 = random_sl2(F, rng), random_sl2(F, rng)
        lhs = symp_unitary_exact(S1, "faithful") @ symp_unitary_exact(S2, "faithful")
        assert lhs == symp_unitary_exact(S1 @ S2, "faithful")


@pytest.mark.parametrize("pn", [(5, 1), (3, 2)])
def test_galois_covariance(pn):
    F = field_create(*pn)
    rng = np.random.default_rng(1)
    for _ in range(3):
        S = random_sl2(F, rng)
        U = symp_unitary_exact(S)
        Ud = U.dagger()
        for u in itertools.product(range(F.q), repeat=2):
            assert U @ displacement_exact(F, u) @ Ud == displacement_exact(F, S.apply(u))


def test_det_must_be_one():
    F = field_create(5)
    with pytest.raises(ValueError):
        symp_unitary_exact(Mat2(F, 2, 0, 0, 2))
    with pytest.raises(ValueError):
        symp_unitary(Mat2(5, 2, 0, 0, 2), 5)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_ordinary_covariance(d):
    rng = np.random.default_rng(d)
    db = dbar(d)
    for _ in range(10):
        S = random_sl2_int(db, rng)
        U = symp_unitary(S, d)
        assert np.allclose(U @ U.conj().T, np.eye(d), atol=1e-10)
        for u in itertools.product(range(d), repeat=2):
            Su = S.apply(u)
            assert np.allclose(U @ displacement(d, u) @ U.conj().T, displacement(d, Su), atol=1e-10)


@pytest.mark.parametrize("d", [4, 5, 6])
def test_ordinary_projective(d):
    rng = np.random.default_rng(10 + d)
    db = dbar(d)
    for _ in range(30):
        S1, S2 = random_sl2_int(db, rng), random_sl2_int(db, rng)
        assert proportional(symp_unitary(S1, d) @ symp_unitary(S2, d), symp_unitary(S1 @ S2, d))


@pytest.mark.parametrize("pn", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_mub_exact(pn):
    F = field_create(*pn)
    mubs = mub_standard(F)
    assert len(mubs.labels) == F.q + 1
    assert all(r.is_zero() for r in mubs.exact_unbiasedness_residuals())


def test_mub_float_overlaps_d3():
    mubs = mub_standard(field_create(3))
    for b1, b2 in itertools.combinations(mubs.labels, 2):
        assert np.allclose(np.abs(mubs.basis(b1).conj().T @ mubs.basis(b2)), 1 / np.sqrt(3))


def test_mub_rejects_even():
    with pytest.raises(ValueError):
        mub_standard(field_create(2, 2))


def test_mobius_examples():
    F = field_create(5)
    T = Mat2(F, 1, 1, 0, 1)
    assert mobius_action(T, 0) == 1
    assert mobius_action(T, INF) == INF
    assert mobius_action(mub_matrix(F, INF), 0) == INF


@pytest.mark.parametrize("pn", [(5, 1), (3, 2)])
def test_mobius_consistency(pn):
    F = field_create(*pn)
    mubs = mub_standard(F)
    for b in mubs.labels:
        assert mobius_consistent(mubs, mub_matrix(F, b))


def test_mobius_is_permutation():
    F = field_create(7)
    rng = np.random.default_rng(3)
    labels = list(range(7)) + [INF]
    for _ in range(20):
        S = random_sl2(F, rng)
        assert sorted(map(str, (mobius_action(S, b) for b in labels))) == sorted(map(str, labels))
