import itertools

import numpy as np
import pytest

from flagrock.errors import NoFiberRootsError
from flagrock.field import INV_SQRT2
from flagrock.nilpotent import (
    check_hormander,
    nilpotentize,
    oracle_nilpotent_violations,
    strongly_orthogonal,
    strongly_orthogonal_sequence,
    uniqueness_report,
)
from flagrock.realframe import FrameVector
from flagrock.rootsys import Root, build_parabolic, structure_constants
from conftest import ALL_KEYS, NONDEGENERATE
import oracles

R = Root
X = lambda r: FrameVector("X", r)  # noqa: E731
Y = lambda r: FrameVector("Y", r)  # noqa: E731


def test_u22_layers_and_bracket():
    pd = build_parabolic(2, 2, 1)
    n = nilpotentize(pd)
    assert (len(n.layer1), len(n.layer2)) == (6, 4)
    n_prime = structure_constants(pd).N(R(1, 2), -R(1, 3))
    assert n_prime in (1, -1)
    assert n.bracket_vectors(X(R(1, 2)), X(R(1, 3))) == {X(R(2, 3)): INV_SQRT2 * n_prime}
    assert n.bracket_vectors(X(R(1, 3)), Y(R(1, 4))) == {}


def test_u11_is_abelian():
    n = nilpotentize(build_parabolic(1, 1, 1))
    assert n.layer2 == [] and n.nonzero_pairs == []


@pytest.mark.parametrize("key", ALL_KEYS)
def test_nilpotent_table_matches_oracle(key):
    n = nilpotentize(build_parabolic(*key))
    assert n.violations() == []
    assert oracle_nilpotent_violations(n) == []


@pytest.mark.parametrize("key", [(2, 2, 1), (3, 2, 1), (4, 1, 2)])
def test_nilpotent_table_matches_dense_projection(key):
    pd = build_parabolic(*key)
    n = nilpotentize(pd)
    h, _ = oracles.layers(*key)
    for u, v in itertools.product(h, repeat=2):
        dense = oracles.nil_bracket(*key, u, v)
        mine = n.bracket_vectors(X(R(*u[1])) if u[0] == "X" else Y(R(*u[1])),
                                 X(R(*v[1])) if v[0] == "X" else Y(R(*v[1])))
        for w, c in dense.items():
            got = mine.get(FrameVector(w[0], R(*w[1])), 0)
            assert abs(complex(got) - c) < 1e-12


@pytest.mark.parametrize("key", ALL_KEYS)
def test_hormander_everywhere(key):
    pd = build_parabolic(*key)
    assert check_hormander(pd)
    rank, dim_f = oracles.hormander_rank(*key)
    assert rank == dim_f


@pytest.mark.parametrize("key,gamma", [
    ((2, 2, 1), [(2, 3)]),
    ((3, 1, 1), [(2, 4)]),
    ((3, 2, 1), [(2, 5), (3, 4)]),
    ((3, 2, 2), [(3, 4)]),
    ((4, 2, 2), [(3, 6), (4, 5)]),
])
def test_strongly_orthogonal_sequence(key, gamma):
    g = strongly_orthogonal_sequence(build_parabolic(*key))
    assert [(r.i, r.j) for r in g] == gamma
    assert g.r == min(key[0] - key[2], key[1])


def test_u32_p1_2_has_length_one():
    # l∩p = {(3,4), (3,5)} shares the index 3, so no two of its roots are
    # strongly orthogonal and the maximal length is 1
    pd = build_parabolic(3, 2, 2)
    assert not strongly_orthogonal([R(3, 4), R(3, 5)])
    assert strongly_orthogonal_sequence(pd).r == 1


@pytest.mark.parametrize("key", NONDEGENERATE)
def test_sequence_is_maximal_and_unique(key):
    pd = build_parabolic(*key)
    g = strongly_orthogonal_sequence(pd)
    assert strongly_orthogonal(g.roots)
    best = max(k for k in range(1, len(pd.l_p) + 1)
               for c in itertools.combinations(pd.l_p, k) if strongly_orthogonal(c))
    assert g.r == best
    rep = uniqueness_report(pd, g)
    assert rep.dichotomy
    assert all(len(m) <= 1 for m in rep.matches.values())


def test_uniqueness_examples():
    pd = build_parabolic(2, 2, 1)
    rep = uniqueness_report(pd, strongly_orthogonal_sequence(pd))
    assert rep.all_compact_match
    assert rep.partner(R(1, 2)) == R(1, 3)
    pd = build_parabolic(3, 1, 1)
    rep = uniqueness_report(pd, strongly_orthogonal_sequence(pd))
    assert rep.all_noncompact_match


def test_no_fiber_roots():
    with pytest.raises(NoFiberRootsError):
        strongly_orthogonal_sequence(build_parabolic(1, 1, 1))


def test_oracle_projection_is_exactly_two_step():
    h, f = oracles.layers(3, 2, 1)
    n = 5
    for u, v in itertools.product(h, f):
        a = oracles.frame_matrix(n, 3, *u)
        b = oracles.frame_matrix(n, 3, *v)
        c = a @ b - b @ a
        # no fiber component in [layer1, layer2]
        for w in f:
            assert abs(np.trace(c @ oracles.frame_matrix(n, 3, *w).conj().T)) < 1e-12
