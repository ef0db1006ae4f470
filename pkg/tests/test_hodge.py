import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmhs import examples
from lmhs.hodge import (
    HodgeFiltration,
    MixedHodgeStructure,
    NotMixedHodgeError,
    WeightFiltration,
    deligne_bigrading,
    is_polarized_pure,
    is_r_split,
    lie_algebra_mhs,
    r_split,
)
from lmhs.qlinalg import GaussianRational, Matrix, Subspace
from generators import RandomMHS
from oracles import conj_vectors, contained, same_span, weil_form_positive


def assert_bigrading_axioms(mhs, bigrading):
    """Check the splitting against W and F with sympy ranks only."""
    n = mhs.ambient_dim
    pieces = {pq: s.vectors() for pq, s in bigrading.pieces.items()}
    everything = [v for vs in pieces.values() for v in vs]
    assert len(everything) == n and same_span(everything, Subspace.full(n).vectors(), n)
    lo, hi = mhs.F.bounds()
    for p in range(lo, hi + 2):
        want = [v for (a, _), vs in pieces.items() if a >= p for v in vs]
        assert same_span(want, mhs.F[p].vectors(), n), f"F^{p}"
    klo, khi = mhs.W.bounds()
    for k in range(klo - 1, khi + 1):
        want = [v for (a, b), vs in pieces.items() if a + b <= k for v in vs]
        assert same_span(want, mhs.W[k].vectors(), n), f"W_{k}"
    for (p, q), vs in pieces.items():
        lower = mhs.W[p + q - 2].vectors()
        assert contained(conj_vectors(vs), pieces.get((q, p), []) + lower, n), f"conj I^{p},{q}"


def test_genus3_bigrading_axioms():
    mhs = examples.genus3_orbit().mhs()
    b = deligne_bigrading(mhs)
    assert_bigrading_axioms(mhs, b)
    assert {pq: d for pq, d in b.dims().items() if d} == {(0, 0): 2, (1, 0): 1, (0, 1): 1, (1, 1): 2}
    assert b.check(mhs) == []


@given(st.integers(0, 2**32))
def test_random_bigrading_axioms(seed):
    R = RandomMHS(random.Random(seed))
    b = deligne_bigrading(R.mhs)
    assert_bigrading_axioms(R.mhs, b)
    assert {pq: d for pq, d in b.dims().items() if d} == R.hodge_numbers


@given(st.integers(0, 2**32))
def test_r_split_is_idempotent(seed):
    mhs = RandomMHS(random.Random(seed)).mhs
    once = r_split(mhs)
    assert is_r_split(once)
    assert r_split(once).F == once.F
    assert once.W == mhs.W
    if is_r_split(mhs):
        assert once.F == mhs.F


def test_untwisted_random_structure_is_r_split():
    for seed in range(10):
        assert is_r_split(RandomMHS(random.Random(seed), twist=False).mhs)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 5))
def test_elliptic_polarization_matches_weil_gram(re, im, den):
    tau = GaussianRational(re, 0) + GaussianRational(0, im) / den
    F, Q = examples.elliptic_pure(tau)
    rows = [list(r) for r in Q.matrix.rows()]
    assert is_polarized_pure(2, Q, F, 1) == weil_form_positive(rows, {1: F[1].vectors()}, 1, 2)


@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_genus2_polarization_matches_weil_gram(entries):
    a, b, c, x, y, w = entries
    A = Matrix([[GaussianRational(a, x), GaussianRational(b, y)], [GaussianRational(b, y), GaussianRational(c, w)]])
    F = examples.period_filtration(A)
    Q = examples.symplectic_form(2)
    rows = [list(r) for r in Q.matrix.rows()]
    assert is_polarized_pure(4, Q, F, 1) == weil_form_positive(rows, {1: F[1].vectors()}, 1, 4)


@pytest.mark.parametrize("build", [lambda: examples.genus3_orbit(), lambda: examples.genus2_orbit("ii")[0]])
def test_bracket_respects_bigrading(build):
    orbit = build()
    lie = lie_algebra_mhs(orbit.mhs(), orbit.Q)
    b = deligne_bigrading(lie)
    pieces = {pq: [lie.from_coords(v) for v in s.vectors()] for pq, s in b.pieces.items() if s.dim}
    for (p1, q1), xs in pieces.items():
        for (p2, q2), ys in pieces.items():
            target = b[(p1 + p2, q1 + q2)]
            for X in xs[:2]:
                for Y in ys[:2]:
                    assert target.contains(lie.to_coords(X @ Y - Y @ X))


def test_zero_endomorphism_in_nonpositive_filtration_steps():
    orbit = examples.genus3_orbit()
    lie = lie_algebra_mhs(orbit.mhs(), orbit.Q)
    zero = lie.to_coords(Matrix.zeros(6, 6))
    for p in range(-3, 1):
        assert lie.F[p].contains(zero)


def test_not_mixed_reports_witness():
    n = 2
    W = WeightFiltration(0, {0: Subspace.full(n)})
    F = HodgeFiltration({1: Subspace.span(n, [[1, 0]])})
    with pytest.raises(NotMixedHodgeError) as info:
        deligne_bigrading(MixedHodgeStructure(W, F))
    assert info.value.k == 0


def test_filtration_conventions():
    F = HodgeFiltration({1: Subspace.span(3, [[1, 0, 0], [0, 1, 0]]), 2: Subspace.span(3, [[1, 0, 0]])})
    assert F[0].is_full() and F[3].is_zero() and F[2].dim == 1
    assert F.bounds() == (0, 2)
    with pytest.raises(ValueError):
        HodgeFiltration({1: Subspace.span(2, [[1, 0]]), 2: Subspace.span(2, [[0, 1]])})
    with pytest.raises(ValueError):
        WeightFiltration(0, {0: Subspace.span(2, [[1, 0]])})
