"""Fundamental cycles and cell orientation signs."""
import pytest
from hypothesis import given, strategies as st

from parslit.cells import BarCell, to_bar, to_hom
from parslit.complexes import assemble_matrices, generate_basis
from parslit.homology import moduli_homology_direct
from parslit.orientation import (
    OrientationSigns,
    base_cell,
    base_matching,
    build_fundamental_cycle,
    fundamental_cycle_text,
    matching_sign,
    normal_form,
    recompose_normal_form,
    separate,
    spread_out,
    top_of,
    twist_matrices,
    verify_fundamental_cycle,
)
from parslit.perm import transposition, word_length

from cell_fixtures import SIGMA

TYPES_H_LE_3 = [(0, 1), (1, 0), (0, 2), (1, 1), (0, 3)]
TYPES_H_4 = [(2, 0), (1, 2), (0, 4)]

EXPECTED_TERMS = {
    (0, 1): 1, (1, 0): 2, (0, 2): 4, (1, 1): 60,
    (0, 3): 30, (2, 0): 504, (1, 2): 1680, (0, 4): 336,
}


@pytest.mark.parametrize("g,m", TYPES_H_LE_3 + TYPES_H_4)
def test_fundamental_cycle_is_a_cycle(g, m):
    mu = build_fundamental_cycle(g, m)
    assert len(mu) == EXPECTED_TERMS[(g, m)]
    assert all(v in (-1, 1) for v in mu.values())
    verify_fundamental_cycle(mu, 2 * g + m, m)


def test_base_matching_layout():
    assert base_matching(1, 0) == ((1, 3), (2, 4))
    assert base_matching(0, 2) == ((1, 2), (3, 4))
    assert base_matching(2, 1) == ((1, 3), (2, 4), (5, 7), (6, 8), (9, 10))


def test_base_matching_is_normalized_positive():
    for g, m in TYPES_H_LE_3 + TYPES_H_4:
        if 2 * g + m >= 1:
            assert matching_sign(g, m, base_matching(g, m)) == 1


def test_fundamental_cycle_1_0_is_minus_a():
    # the cycle is the difference of the two top cells of type (1, 0)
    mu = build_fundamental_cycle(1, 0)
    assert mu == {SIGMA[2]: 1, SIGMA[1]: -1}


def test_fundamental_cycle_text_is_sorted_and_signed():
    text = fundamental_cycle_text(build_fundamental_cycle(1, 0))
    lines = text.strip().splitlines()
    assert len(lines) == 2
    assert all(line[:3] in ("+1 ", "-1 ") for line in lines)


@given(st.integers(min_value=1, max_value=7).flatmap(
    lambda n: st.permutations(tuple(range(n)))).map(tuple))
def test_normal_form_recomposes(a):
    factors = normal_form(a)
    assert len(factors) == word_length(a)
    assert recompose_normal_form(len(a), factors) == a
    for i, j in factors:
        assert i != j


def test_separate_splits_bar_entries():
    # a 3-cycle bar entry separates into two transpositions
    tau = (2, 0, 1)  # the cycle (2 1 0) on {0, 1, 2}
    bar = BarCell(p=2, taus=(tau,))
    sep = separate(to_hom(bar))
    assert sep.q == 2
    assert all(word_length(t) == 1 for t in sep.taus)


def test_spread_out_fixture():
    # [(2 1) | (2 1)] spreads out to [(4 2) | (3 1)]
    t = transposition(3, 2, 1)
    spread = spread_out(BarCell(p=2, taus=(t, t)))
    assert spread.p == 4
    assert spread.taus == (transposition(5, 4, 2), transposition(5, 3, 1))


def test_top_of_produces_top_cells():
    for c in SIGMA.values():
        top = top_of(c)
        assert top.p == 2 * top.q


def test_orientation_signs_cover_the_basis():
    signs = OrientationSigns(1, 0)
    basis = generate_basis(2, 0)
    for lst in basis.cells.values():
        for c in lst:
            assert signs.eps(c) in (-1, 1)
    # the base cell of the type carries the positive sign
    assert signs.eps(base_cell(1, 0)) == 1


def test_entrywise_twist_preserves_homology():
    basis = generate_basis(2, 0)
    mats = assemble_matrices(basis)
    twisted = twist_matrices(mats, OrientationSigns(1, 0))
    # rescaling by a diagonal sign matrix is an isomorphism of complexes
    plain = {k: str(v) for k, v in moduli_homology_direct(mats).items()}
    other = {k: str(v) for k, v in moduli_homology_direct(twisted).items()}
    assert plain == other


def test_entrywise_twist_is_an_involution():
    basis = generate_basis(2, 0)
    mats = assemble_matrices(basis)
    signs = OrientationSigns(1, 0)
    twice = twist_matrices(twist_matrices(mats, signs), signs)
    assert twice.vertical == mats.vertical
    assert twice.horizontal == mats.horizontal


def test_twist_matrices_rejects_numbered_basis():
    basis = generate_basis(2, 2, numbered=True)
    mats = assemble_matrices(basis)
    with pytest.raises(ValueError):
        twist_matrices(mats, OrientationSigns(0, 2))
