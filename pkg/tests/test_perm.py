"""Permutation algebra against brute-force oracles and algebraic laws."""
from collections import deque
from itertools import permutations as iter_permutations

from hypothesis import given, strategies as st

from parslit.perm import (
    compose,
    compose_all,
    cycles,
    delete_letter,
    format_cycles,
    format_oneline,
    from_cycles,
    identity,
    insert_letter,
    inverse,
    is_perm,
    ncyc,
    omega,
    parse_cycles,
    parse_oneline,
    perm_rank,
    rotation,
    sign,
    transposition,
    word_length,
)


def perm_strategy(max_n=7):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.permutations(tuple(range(n)))
    ).map(tuple)


def test_compose_convention():
    # (a * b)(i) = a(b(i)): apply the right factor first
    a = (1, 0, 2)
    b = (2, 1, 0)
    assert compose(a, b) == tuple(a[b[i]] for i in range(3))


def test_rotation_and_omega():
    assert rotation(4) == (1, 2, 3, 0)
    assert omega(0) == (0,)
    assert omega(4) == (1, 2, 3, 4, 0)


def test_from_cycles_right_to_left():
    # the cycle (4 1 0) sends 0 to 1, 1 to 4, and 4 back to 0
    a = from_cycles(5, [(4, 1, 0)])
    assert a[0] == 1 and a[1] == 4 and a[4] == 0
    assert a[2] == 2 and a[3] == 3


def test_word_length_against_cayley_graph():
    # distances in the Cayley graph of S_4 on all transpositions
    n = 4
    gens = [transposition(n, i, j) for i in range(n) for j in range(i + 1, n)]
    dist = {identity(n): 0}
    queue = deque([identity(n)])
    while queue:
        a = queue.popleft()
        for t in gens:
            b = compose(t, a)
            if b not in dist:
                dist[b] = dist[a] + 1
                queue.append(b)
    assert len(dist) == 24
    for a, d in dist.items():
        assert word_length(a) == d
        assert sign(a) == (-1) ** d


def test_perm_rank_is_injective_on_s4():
    ranks = {perm_rank(a) for a in iter_permutations(range(4))}
    assert ranks == set(range(24))


@given(perm_strategy())
def test_inverse_composes_to_identity(a):
    assert compose(a, inverse(a)) == identity(len(a))
    assert compose(inverse(a), a) == identity(len(a))


@given(perm_strategy(), st.data())
def test_sign_is_multiplicative(a, data):
    b = tuple(data.draw(st.permutations(tuple(range(len(a))))))
    assert sign(compose(a, b)) == sign(a) * sign(b)


@given(perm_strategy(), st.data())
def test_ncyc_is_conjugation_invariant(a, data):
    g = tuple(data.draw(st.permutations(tuple(range(len(a))))))
    conj = compose_all([g, a, inverse(g)])
    assert ncyc(conj) == ncyc(a)
    assert word_length(conj) == word_length(a)


@given(perm_strategy(), st.data())
def test_delete_is_left_inverse_of_insert(a, data):
    j = data.draw(st.integers(min_value=0, max_value=len(a)))
    assert delete_letter(j, insert_letter(j, a)) == a


@given(perm_strategy())
def test_cycles_round_trip(a):
    assert from_cycles(len(a), [tuple(reversed(c)) for c in cycles(a)]) == a
    assert sum(len(c) for c in cycles(a)) == len(a)
    assert ncyc(a) == len(cycles(a))


@given(perm_strategy())
def test_text_round_trips(a):
    assert parse_oneline(format_oneline(a)) == a
    assert parse_cycles(format_cycles(a), len(a)) == a
    assert parse_cycles(format_cycles(a, drop_fixed=True), len(a)) == a


def test_is_perm_rejects_non_permutations():
    assert is_perm((1, 0, 2))
    assert not is_perm((0, 0, 1))
    assert not is_perm((1, 2, 3))
