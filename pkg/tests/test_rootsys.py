import itertools
import random

import pytest

from flagrock.errors import InvalidParabolicError
from flagrock.field import Q2i
from flagrock.linalg import sp_commutator, sp_equal, sp_scale
from flagrock.rootsys import (
    Root,
    all_roots,
    build_parabolic,
    matrix_oracle,
    oracle_violations,
    root_sum,
    structure_constants,
    valid_parameters,
)
from conftest import ALL_KEYS

R = Root


def test_u22_p1_1_root_sets():
    pd = build_parabolic(2, 2, 1)
    assert list(pd.u) == [R(1, 2), R(1, 3), R(1, 4)]
    assert list(pd.u_k) == [R(1, 2)]
    assert list(pd.u_p) == [R(1, 3), R(1, 4)]
    assert list(pd.l_p) == [R(2, 3), R(2, 4)]
    assert (pd.s, pd.t) == (1, 2)
    assert not pd.degenerate


def test_u11_is_degenerate():
    pd = build_parabolic(1, 1, 1)
    assert list(pd.u) == [R(1, 2)]
    assert not pd.u_k and not pd.l_p
    assert (pd.s, pd.t) == (0, 1)
    assert pd.degenerate


def test_second_case_counts():
    pd = build_parabolic(3, 1, 1)
    assert (pd.s, pd.t) == (2, 1)


@pytest.mark.parametrize("args", [(0, 2, 1), (2, 0, 1), (2, 2, 0), (2, 2, 3), (2.0, 2, 1), (True, 1, 1)])
def test_invalid_parameters(args):
    with pytest.raises(InvalidParabolicError):
        build_parabolic(*args)


def test_instance_count():
    assert len(ALL_KEYS) == 35
    assert list(valid_parameters(2)) == [(1, 1, 1)]


@pytest.mark.parametrize("key", ALL_KEYS)
def test_root_sets_partition_positive_roots(key):
    p, q, p1 = key
    pd = build_parabolic(*key)
    n = p + q
    positive = {R(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    # brute enumeration of the defining inequalities
    u = {R(i, j) for i, j in itertools.combinations(range(1, n + 1), 2) if i <= p1 < j}
    lp = {R(i, j) for i, j in itertools.combinations(range(1, n + 1), 2) if p1 < i <= p < j}
    assert set(pd.u) == u and set(pd.l_p) == lp
    sets = [set(pd.u_k), set(pd.u_p), set(pd.l_p), set(pd.l_k)]
    assert sum(map(len, sets)) == len(positive)
    assert set().union(*sets) == positive
    assert all(r.compact(p) for r in pd.u_k) and not any(r.compact(p) for r in pd.u_p)
    assert len(pd.u_k) == pd.s and len(pd.u_p) == pd.t


def test_structure_constant_examples():
    sc = structure_constants(build_parabolic(2, 2, 1))
    assert sc.N(R(1, 2), R(2, 3)) in (1, -1)
    assert root_sum(R(1, 2), R(2, 3)) == R(1, 3)
    assert sc.N(R(1, 2), R(3, 4)) == 0


@pytest.mark.parametrize("key", ALL_KEYS)
def test_structure_constants_match_matrix_oracle(key):
    pd = build_parabolic(*key)
    sc = structure_constants(pd)
    assert sc.violations() == []
    assert oracle_violations(pd, sc) == []


def test_corrupted_table_is_caught():
    pd = build_parabolic(2, 2, 1)
    sc = structure_constants(pd)
    key = min(sc.table)
    sc.table[key] = -sc.table[key]
    assert oracle_violations(pd, sc)


def test_cartan_action_and_involution():
    pd = build_parabolic(2, 2, 1)
    mr = matrix_oracle(pd)
    h = [3, -1, 2, 5]
    H = mr.cartan(h)
    for a in all_roots(pd.n):
        alpha_h = h[a.i - 1] - h[a.j - 1]
        assert sp_equal(sp_commutator(H, mr.E(a)), sp_scale(mr.E(a), alpha_h))
        # -theta(conj E_a) = E_a^* = E_{-a}
        assert sp_equal(sp_scale(mr.theta(mr.conj(mr.E(a))), -1), mr.E(-a))


def test_jacobi_on_random_triples():
    pd = build_parabolic(2, 2, 1)
    mr = matrix_oracle(pd)
    roots = all_roots(pd.n)
    rng = random.Random(7)
    for _ in range(50):
        a, b, c = (mr.E(rng.choice(roots)) for _ in range(3))
        total = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            term = sp_commutator(x, sp_commutator(y, z))
            for k, v in term.items():
                total[k] = total.get(k, Q2i()) + v
        assert all(not v for v in total.values())
