import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from hforge.clifford import INF, Mat2, basis_labels, zauner_matrix
from hforge.exactmath import CycloNum
from hforge.finitefield import field_create, quad_ext
from hforge.guards import GuardExceeded
from hforge.gunitary import gu_apply, gu_new
from hforge.linalg import ExactMat, ExactVec, exact_nullspace
from hforge.mubcycler import (
    SmSequence,
    balanced_orbit_count,
    balanced_wigner,
    conjectured_balanced_count,
    cycler_canonical,
    cycler_eigenvector,
    enumerate_cyclers,
    matrix_order,
    mobius_orbit,
    same_ray,
    state_wigner,
    suborder_classify,
    verify_balanced,
)


def brute_suborder(G):
    M, m = G, 1
    while not M.is_scalar():
        M = M @ G
        m += 1
    return m


def all_glp(F):
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        G = Mat2(F, a, b, c, d)
        det = G.det()
        if det and F.is_prime_subfield(det):
            yield G


def test_sm_closed_form_f7():
    F = field_create(7)
    for t in range(7):
        for delta in range(1, 7):
            s = SmSequence(F, t, delta)
            assert s.values(50) == s.closed_form(50)


def test_zauner_f7():
    F = field_create(7)
    Z = zauner_matrix(7)
    Z = Mat2(F, *Z.entries)
    assert (Z @ Z @ Z) == Mat2.identity(F)
    rep = suborder_classify(Z)
    assert rep.suborder == 3
    assert rep.type == 1
    # t^2 - 4 Delta = -3 = 4 = 2^2
    assert F.sub(F.mul(Z.trace(), Z.trace()), F.mul(4, Z.det())) == 4


def test_identity_suborder():
    rep = suborder_classify(Mat2.identity(field_create(5)))
    assert rep.suborder == 1
    assert not rep.is_cycler


def test_invalid_det():
    F = field_create(3, 2)
    with pytest.raises(ValueError):
        suborder_classify(Mat2(F, 3, 0, 0, 1))
    with pytest.raises(ValueError):
        suborder_classify(Mat2(F, 1, 1, 1, 1))


@pytest.mark.parametrize("pn", [(3, 1), (5, 1), (3, 2)])
def test_suborder_against_brute_force(pn):
    F = field_create(*pn)
    d = F.q
    for G in all_glp(F):
        rep = suborder_classify(G)
        assert rep.suborder == brute_suborder(G)
        bound = {1: d - 1, 2: d + 1, 3: d}[rep.type]
        assert rep.suborder <= bound


@pytest.mark.parametrize("p", [3, 7, 11])
def test_type2_power(p):
    F = field_create(p)
    rng = np.random.default_rng(p)
    found = 0
    while found < 200:
        a, b, c, d = (int(x) for x in rng.integers(0, p, 4))
        G = Mat2(F, a, b, c, d)
        if G.det() == 0 or suborder_classify(G).type != 2:
            continue
        found += 1
        delta = G.det()
        assert G ** (p + 1) == Mat2(F, delta, 0, 0, delta)


def test_canonical_d7():
    F = field_create(7)
    G0, exists = cycler_canonical(F)
    assert exists
    rep = suborder_classify(G0)
    assert rep.suborder == 8 and rep.is_cycler and rep.r == 1
    assert matrix_order(G0) == 6 * 8


def test_canonical_d3_entries_in_base():
    F = field_create(3)
    G0, exists = cycler_canonical(F)
    assert exists
    qe = quad_ext(F)
    E = qe.ext
    for x in G0.entries:
        y = qe.embed(x)
        assert E.pow(y, 3) == y
    assert matrix_order(G0) == 2 * 4


def test_canonical_d9_absent():
    _, exists = cycler_canonical(field_create(3, 2))
    assert not exists
    assert enumerate_cyclers(field_create(3, 2)).count == 0


def test_canonical_order_d27():
    F = field_create(3, 3)
    G0, exists = cycler_canonical(F)
    assert exists
    assert matrix_order(G0) == 2 * 28


def test_enumerate_d3_brute():
    F = field_create(3)
    brute = sum(1 for G in all_glp(F) if brute_suborder(G) == F.q + 1)
    scan = enumerate_cyclers(F, samples=100)
    assert scan.scanned == 48
    assert scan.count == brute == 12
    assert all(suborder_classify(G).is_cycler for G in scan.samples)


@pytest.mark.parametrize("p,count", [(7, 504), (11, 2200)])
def test_enumerate_table(p, count):
    assert enumerate_cyclers(field_create(p)).count == count


def test_enumerate_threads_deterministic():
    F = field_create(11)
    a = enumerate_cyclers(F, samples=7, workers=1)
    b = enumerate_cyclers(F, samples=7, workers=3)
    assert (a.count, a.scanned, a.antisymplectic) == (b.count, b.scanned, b.antisymplectic)
    assert a.samples == b.samples


def test_enumerate_guard():
    with pytest.raises(GuardExceeded):
        enumerate_cyclers(field_create(41))


def test_antisymplectic():
    assert enumerate_cyclers(field_create(7)).antisymplectic > 0
    assert enumerate_cyclers(field_create(5)).antisymplectic == 0
    assert enumerate_cyclers(field_create(11)).antisymplectic > 0


def test_cycling_visits_all_labels():
    F = field_create(7)
    G = enumerate_cyclers(F, samples=1).samples[0]
    orbit = mobius_orbit(G, 0)
    assert len(orbit) == 8
    assert sorted(map(str, orbit)) == sorted(map(str, basis_labels(F)))


def test_eigenvector_d7():
    F = field_create(7)
    G0, _ = cycler_canonical(F)
    st = cycler_eigenvector(G0)
    assert st.nullity == 1
    assert st.parity == -1
    assert gu_apply(gu_new(G0), st.psi) == st.psi


def test_eigenvector_unique_ray():
    F = field_create(7)
    G0, _ = cycler_canonical(F)
    rep = suborder_classify(G0)
    M = gu_new(G0 ** (2 * rep.m0)).Usym - ExactMat.identity(28, 7)
    perm = [6, 3, 0, 5, 1, 4, 2]
    Mp = ExactMat([[M[perm[i], perm[j]] for j in range(7)] for i in range(7)], 28)
    (w,) = exact_nullspace(Mp)
    back = [None] * 7
    for i, j in enumerate(perm):
        back[j] = w[i]
    assert same_ray(ExactVec(back, 28), cycler_eigenvector(G0).psi)


def test_eigenspace_dim_all_d3():
    F = field_create(3)
    for G in enumerate_cyclers(F, samples=100).samples:
        st = cycler_eigenvector(G)
        assert st.nullity == 1
        assert st.parity == -1


def test_eigenspace_dim_random_d7():
    F = field_create(7)
    samples = enumerate_cyclers(F, samples=504).samples
    rng = np.random.default_rng(0)
    for i in rng.choice(len(samples), 20, replace=False):
        assert cycler_eigenvector(samples[int(i)]).nullity == 1


def test_not_a_cycler():
    with pytest.raises(ValueError):
        cycler_eigenvector(Mat2.identity(field_create(7)))


@pytest.mark.parametrize("p", [3, 7, 11])
def test_balanced_d3mod4(p):
    F = field_create(p)
    G0, _ = cycler_canonical(F)
    rep = verify_balanced(cycler_eigenvector(G0).psi, F)
    assert rep.balanced
    assert rep.mus
    for c in rep.collision.values():
        assert c.as_rational() == Fraction(2, p + 1)


def test_balanced_d5_false():
    F = field_create(5)
    G0, _ = cycler_canonical(F)
    assert not verify_balanced(cycler_eigenvector(G0).psi, F).balanced


def test_standard_basis_not_balanced():
    F = field_create(3)
    N = 12
    e0 = ExactVec([CycloNum.one(N), CycloNum.zero(N), CycloNum.zero(N)], N)
    rep = verify_balanced(e0, F)
    assert not rep.balanced
    assert sorted(float(x.as_rational()) for x in rep.probs[INF]) in ([0, 0, 1], [1 / 3] * 3)
    ones = [b for b in rep.probs if sorted(x.as_rational() for x in rep.probs[b]) == [0, 0, 1]]
    assert len(ones) == 1


def test_zero_vector():
    with pytest.raises(ValueError):
        verify_balanced(ExactVec([CycloNum.zero(12)] * 3, 12), field_create(3))


@pytest.mark.parametrize("p", [7, 11])
def test_balanced_wigner(p):
    F = field_create(p)
    ws = balanced_wigner(F)
    total = CycloNum.zero(ws.rho.N)
    for w in ws.W.values():
        total = total + w
    assert total == CycloNum.one(ws.rho.N)
    assert abs(ws.grid.sum() - 1) < 1e-12
    assert ws.rank == 1
    assert ws.invariant and ws.covariant
    assert suborder_classify(ws.G).is_cycler
    psi = cycler_eigenvector(ws.G).psi
    assert same_ray(ws.psi, psi)


def test_wigner_radial_d7():
    # W depends on p only through p1^2 + p2^2 away from the origin
    ws = balanced_wigner(field_create(7))
    F = ws.field
    by_r = {}
    for (a, b), w in ws.W.items():
        if (a, b) != (0, 0):
            by_r.setdefault(F.add(F.mul(a, a), F.mul(b, b)), set()).add(w)
    assert all(len(v) == 1 for v in by_r.values())


def test_wigner_d5_rejected():
    with pytest.raises(ValueError):
        balanced_wigner(field_create(5))


def test_state_wigner_matches():
    F = field_create(7)
    ws = balanced_wigner(F)
    assert state_wigner(ws.psi, F) == ws.W


def test_conjectured_formula():
    assert conjectured_balanced_count(7) == 1029
    assert conjectured_balanced_count(11) == 6655
    assert conjectured_balanced_count(19) == 61731


def test_orbit_d7():
    F = field_create(7)
    assert balanced_orbit_count(F, "bfs") == 1029
    assert balanced_orbit_count(F, "wigner") == 1029


def test_orbit_d3():
    F = field_create(3)
    assert balanced_orbit_count(F, "bfs") == balanced_orbit_count(F, "wigner")


def test_orbit_guard():
    with pytest.raises(GuardExceeded):
        balanced_orbit_count(field_create(7), limit=100)


def test_orbit_bad_method():
    with pytest.raises(ValueError):
        balanced_orbit_count(field_create(7), method="nope")


def test_m0():
    for p in (3, 7, 11):
        F = field_create(p)
        G0, _ = cycler_canonical(F)
        rep = suborder_classify(G0)
        assert 2 * rep.m0 == F.order_idx(G0.det())
        assert math.gcd(rep.r, p + 1) == 1
