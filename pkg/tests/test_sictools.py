import numpy as np
import pytest

from hforge.sictools import (
    SicCandidate,
    dependent_triples,
    is_sic,
    kt_bound,
    kt_measure,
    projectors,
    sic3_family,
    sic_objective,
    sic_search,
    wh_orbit,
)


@pytest.mark.parametrize("theta", [0.0, 0.1, 0.5, np.pi / 3, 2 * np.pi / 9])
def test_sic3_family_is_sic(theta):
    c = sic3_family(theta)
    assert is_sic(c)
    assert np.allclose(sum(projectors(c.vectors)), 3 * np.eye(3), atol=1e-9)


def test_sic3_theta0_fiducial():
    v = sic3_family(0.0).vectors[0]
    assert np.allclose(v, np.array([0, 1, -1]) / np.sqrt(2))
    assert is_sic(v)


@pytest.mark.parametrize("theta,count", [(0.0, 12), (0.1, 3), (2 * np.pi / 9, 12), (0.7, 3)])
def test_sic3_dependencies(theta, count):
    assert len(dependent_triples(sic3_family(theta).vectors)) == count


def test_not_sic():
    v = np.ones(3, dtype=complex) / np.sqrt(3)
    assert not is_sic(SicCandidate(3, np.tile(v, (9, 1))))
    rng = np.random.default_rng(4)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert not is_sic(psi / np.linalg.norm(psi))


def test_wrong_count():
    with pytest.raises(ValueError):
        is_sic(SicCandidate(3, sic3_family(0).vectors[:8]))


def test_unnormalized_rejected():
    c = sic3_family(0)
    with pytest.raises(ValueError):
        is_sic(SicCandidate(3, 2 * c.vectors))


def test_k1_d3():
    rep = kt_measure(projectors(sic3_family(0).vectors), 1)
    assert abs(rep.value - 18) < 1e-9
    assert rep.bound == 18
    assert rep.saturated and rep.rank_one and rep.resolution


def test_k2_d3():
    rep = kt_measure(projectors(sic3_family(0).vectors), 2)
    assert abs(rep.value - 4.5) < 1e-9
    assert kt_bound(3, 2) == 4.5
    assert rep.saturated


def test_kt_basis_repeats():
    P = [np.diag(np.eye(3)[k]).astype(complex) for k in range(3)] * 3
    rep = kt_measure(P, 2)
    assert rep.value == 18
    assert rep.value > rep.bound and not rep.saturated


def test_kt_preconditions():
    P = projectors(sic3_family(0).vectors)
    with pytest.raises(ValueError):
        kt_measure([2 * A for A in P], 2)
    with pytest.raises(ValueError):
        kt_measure(P[:8], 2)
    with pytest.raises(ValueError):
        kt_measure(P, 0.5)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_search_and_saturation(d):
    res = sic_search(d, seed=1, restarts=10)
    assert res.success
    assert abs(res.objective - (d - 1) / (d + 1)) < 1e-9
    assert is_sic(res.fiducial)
    V = wh_orbit(res.fiducial)
    P = projectors(V)
    assert np.allclose(sum(P), d * np.eye(d), atol=1e-9)
    hs = np.array([[np.trace(A @ B) for B in P] for A in P])
    assert np.linalg.matrix_rank(hs, tol=1e-8) == d * d
    for t in (1, 1.5, 2, 3):
        rep = kt_measure(P, t)
        assert abs(rep.value - rep.bound) < 1e-9
        assert rep.saturated


def test_search_deterministic():
    a, b = sic_search(3, seed=5, restarts=4), sic_search(3, seed=5, restarts=4)
    assert a.winner == b.winner
    assert np.array_equal(a.fiducial, b.fiducial)


def test_target_d3_attained():
    g, _ = sic_objective(sic3_family(0).vectors[0])
    assert abs(g - 0.5) < 1e-12


def test_search_d1():
    with pytest.raises(ValueError):
        sic_search(1)


def test_search_zauner_subspace():
    res = sic_search(5, seed=0, restarts=20, zauner_subspace=True, stop_early=True)
    assert res.success


def test_gradient_finite_differences():
    rng = np.random.default_rng(12)
    for _ in range(10):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        h = rng.normal(size=4) + 1j * rng.normal(size=4)
        _, grad = sic_objective(psi)
        eps = 1e-6
        fd = (sic_objective(psi + eps * h)[0] - sic_objective(psi - eps * h)[0]) / (2 * eps)
        assert abs(fd - 2 * np.vdot(grad, h).real) < 1e-6
