import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flagrock.diffops import DiffOp
from flagrock.errors import HypothesisFailedError, InvalidFormError, UnsupportedFormError
from flagrock.field import I, SQRT2, Q2i
from flagrock.nilpotent import nilpotentize, strongly_orthogonal_sequence
from flagrock.orbit import (
    LinearForm,
    bl_and_A,
    canonical_form,
    check_hypothesis_H,
    check_induction_hypotheses,
    check_rep_homomorphism,
    choose_polarization,
    default_weights,
    realize_rep,
)
from flagrock.realframe import FrameVector
from flagrock.rootsys import Root, build_parabolic
from conftest import NONDEGENERATE
import oracles

R = Root
X = lambda r: FrameVector("X", r)  # noqa: E731
Y = lambda r: FrameVector("Y", r)  # noqa: E731


def _setup(key, weights=None):
    pd = build_parabolic(*key)
    n = nilpotentize(pd)
    gamma = strongly_orthogonal_sequence(pd)
    l = canonical_form(gamma, weights or default_weights(gamma))
    return pd, n, l


def test_canonical_form_errors():
    gamma = strongly_orthogonal_sequence(build_parabolic(3, 2, 1))
    with pytest.raises(InvalidFormError):
        canonical_form(gamma, [1])
    with pytest.raises(InvalidFormError):
        canonical_form(gamma, [1, 0])
    with pytest.raises(InvalidFormError):
        canonical_form(gamma, [1, -2])
    with pytest.raises(InvalidFormError):
        canonical_form([], [])


def test_canonical_form_coordinates():
    pd, n, l = _setup((2, 2, 1))
    assert l.coords == {X(R(2, 3)): SQRT2}
    assert l.satisfies_orbite(pd)


def test_zero_form_fails_H():
    pd = build_parabolic(2, 2, 1)
    sf = bl_and_A(LinearForm(), nilpotentize(pd))
    assert sf.rank == 0 and not check_hypothesis_H(sf)
    with pytest.raises(HypothesisFailedError):
        choose_polarization(sf, pd)


@pytest.mark.parametrize("key,case,codim", [((2, 2, 1), "first", 2), ((3, 1, 1), "second", 2),
                                            ((3, 2, 1), "first", 4)])
def test_polarization(key, case, codim):
    pd, n, l = _setup(key)
    sf = bl_and_A(l, n)
    assert sf.is_skew()
    assert check_hypothesis_H(sf)
    assert sf.rank_A == min(len(sf.row_vectors), len(sf.col_vectors))
    pol = choose_polarization(sf, pd)
    assert (pol.case, pol.codim) == (case, codim)
    assert 2 * pol.codim == sf.rank


@pytest.mark.parametrize("key", [(2, 2, 1), (3, 2, 1), (3, 2, 2), (4, 1, 2)])
def test_skew_form_rank_matches_oracle(key):
    pd, n, l = _setup(key)
    sf = bl_and_A(l, n)
    dense_l = {(v.kind, (v.root.i, v.root.j)): float(complex(c).real) for v, c in l.coords.items()}
    basis, B = oracles.skew_form(*key, dense_l)
    assert np.allclose(B, -B.T)
    assert sf.rank == np.linalg.matrix_rank(B)


def test_representation_u22():
    pd, n, l = _setup((2, 2, 1))
    rep = realize_rep(l, choose_polarization(bl_and_A(l, n), pd), n)
    assert rep.variables == [X(R(1, 2)), Y(R(1, 2))]
    assert rep.ops[X(R(1, 2))].equals(DiffOp.partial(2, 0))
    assert rep.ops[X(R(2, 3))].equals(DiffOp.const(2, I * SQRT2))
    assert rep.ops[Y(R(2, 3))].equals(DiffOp(2))
    # pi(X_(1,3)) is i times +-x_(1,2)
    op = rep.ops[X(R(1, 3))]
    assert op.order() == 0
    coeff = op.coefficient((0, 0))
    assert set(coeff.terms) == {(1, 0)}
    c = coeff.terms[(1, 0)]
    assert c in (I, -I)


@pytest.mark.parametrize("key", [k for k in NONDEGENERATE if sum(k[:2]) <= 5])
def test_rep_is_homomorphism(key):
    pd, n, l = _setup(key)
    sf = bl_and_A(l, n)
    if not check_hypothesis_H(sf):
        pytest.skip("hypothesis (H) fails")
    rep = realize_rep(l, choose_polarization(sf, pd), n)
    assert check_rep_homomorphism(rep)
    assert check_induction_hypotheses(rep)


def test_corrupted_rep_is_not_homomorphism():
    pd, n, l = _setup((2, 2, 1))
    rep = realize_rep(l, choose_polarization(bl_and_A(l, n), pd), n)
    v = X(R(1, 3))
    rep.ops[v] = rep.ops[v].scale(-1)
    assert not check_rep_homomorphism(rep)


def test_horizontal_form_is_unsupported():
    pd, n, l = _setup((2, 2, 1))
    pol = choose_polarization(bl_and_A(l, n), pd)
    bad = LinearForm({**l.coords, X(R(1, 2)): Q2i(1)})
    assert not bad.satisfies_orbite(pd)
    with pytest.raises(UnsupportedFormError):
        realize_rep(bad, pol, n)


_N221 = nilpotentize(build_parabolic(2, 2, 1))
_coef = st.integers(-3, 3)


@settings(max_examples=100, deadline=None)
@given(st.lists(_coef, min_size=4, max_size=4), st.integers(0, 9), st.integers(0, 9))
def test_skew_form_is_skew_for_any_fiber_form(vals, a, b):
    fib = _N221.layer2
    l = LinearForm(dict(zip(fib, vals)))
    sf = bl_and_A(l, _N221)
    assert sf.matrix[a][b] == -sf.matrix[b][a]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4))
def test_rep_homomorphism_for_scaled_weights(num, den):
    pd = build_parabolic(2, 2, 1)
    gamma = strongly_orthogonal_sequence(pd)
    l = canonical_form(gamma, [Q2i(num) / den])
    rep = realize_rep(l, choose_polarization(bl_and_A(l, _N221), pd), _N221)
    assert check_rep_homomorphism(rep)


