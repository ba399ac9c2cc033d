"""Exact integer linear algebra against dense and sympy oracles."""
import random
from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_form

from parslit.exactlin import (
    HomologyGroup,
    SparseIntMatrix,
    homology_of_complex,
    kernel_basis,
    lll_reduce,
    rank_mod2,
    rank_rational,
    snf,
    solve_in_basis,
)


def random_dense(rng, nrows, ncols, bound=6, density=0.7):
    return [
        [rng.randint(-bound, bound) if rng.random() < density else 0
         for _ in range(ncols)]
        for _ in range(nrows)
    ]


def oracle_divisors(dense):
    mat = sympy.Matrix(dense)
    if mat.rank() == 0:
        return ()
    d = smith_normal_form(mat)
    out = [abs(d[i, i]) for i in range(min(d.shape)) if d[i, i] != 0]
    return tuple(sorted(out, key=abs))


def test_snf_fixtures():
    assert snf(SparseIntMatrix.from_dense([[2, 0], [0, 3]])).divisors == (1, 6)
    assert snf(SparseIntMatrix.from_dense([[2, 4], [4, 2]])).divisors == (2, 6)
    assert snf(SparseIntMatrix(3, 3)).divisors == ()


def test_snf_against_sympy_oracle():
    rng = random.Random(20260823)
    for trial in range(200):
        nrows = rng.randint(1, 6)
        ncols = rng.randint(1, 6)
        dense = random_dense(rng, nrows, ncols)
        got = snf(SparseIntMatrix.from_dense(dense)).divisors
        assert got == oracle_divisors(dense), dense


def test_snf_transforms_are_unimodular():
    rng = random.Random(7)
    for trial in range(50):
        dense = random_dense(rng, rng.randint(1, 5), rng.randint(1, 5))
        a = SparseIntMatrix.from_dense(dense)
        res = snf(a, want_transforms=True)
        u = sympy.Matrix(res.left.to_dense())
        v = sympy.Matrix(res.right.to_dense())
        assert abs(u.det()) == 1 and abs(v.det()) == 1
        d = u * sympy.Matrix(dense if dense else [[]]) * v
        diag = [abs(d[i, i]) for i in range(min(d.shape)) if d[i, i]]
        assert tuple(diag) == res.divisors
        for i in range(d.shape[0]):
            for j in range(d.shape[1]):
                if i != j:
                    assert d[i, j] == 0


def test_ranks_against_oracle():
    rng = random.Random(99)
    for trial in range(100):
        dense = random_dense(rng, rng.randint(1, 7), rng.randint(1, 7))
        a = SparseIntMatrix.from_dense(dense)
        assert rank_rational(a) == sympy.Matrix(dense).rank()
        mod2 = sympy.Matrix([[x % 2 for x in row] for row in dense])
        assert rank_mod2(a) == mod2.rank(iszerofunc=lambda x: x % 2 == 0)


def test_kernel_basis_properties():
    rng = random.Random(5)
    for trial in range(60):
        dense = random_dense(rng, rng.randint(1, 6), rng.randint(1, 6))
        a = SparseIntMatrix.from_dense(dense)
        k = kernel_basis(a)
        assert k.ncols == a.ncols - rank_rational(a)
        assert a.matmul(k).is_zero()
        cols = k.columns()
        for col in cols:
            g = 0
            for v in col.values():
                g = sympy.gcd(g, v)
            assert abs(g) == 1  # primitive columns


def test_solve_in_basis_round_trip():
    rng = random.Random(11)
    for trial in range(60):
        dense = random_dense(rng, rng.randint(2, 6), rng.randint(2, 6))
        k = kernel_basis(SparseIntMatrix.from_dense(dense))
        if k.ncols == 0:
            continue
        x = SparseIntMatrix.from_dense(
            random_dense(rng, k.ncols, 3, bound=4, density=1.0))
        b = k.matmul(x)
        assert solve_in_basis(k, b) == x


def test_lll_reduce_preserves_the_lattice():
    rng = random.Random(3)
    for trial in range(30):
        basis = random_dense(rng, 3, 4, bound=20, density=1.0)
        if sympy.Matrix(basis).rank() < 3:
            continue
        reduced = lll_reduce([row[:] for row in basis])
        # same row span over Z: equal Hermite normal forms
        from sympy.matrices.normalforms import hermite_normal_form

        h1 = hermite_normal_form(sympy.Matrix(basis).T)
        h2 = hermite_normal_form(sympy.Matrix(reduced).T)
        assert h1 == h2


def test_lll_threshold_does_not_change_divisors():
    rng = random.Random(17)
    for trial in range(40):
        dense = random_dense(rng, rng.randint(1, 6), rng.randint(1, 6),
                             bound=30)
        a = SparseIntMatrix.from_dense(dense)
        low = snf(a, lll_threshold_bits=4).divisors
        high = snf(a, lll_threshold_bits=256).divisors
        none = snf(a, lll_threshold_bits=None).divisors
        assert low == high == none


def test_homology_of_standard_complexes():
    # circle: one 0-cell, one 1-cell, zero boundary
    groups = homology_of_complex({0: 1, 1: 1}, {})
    assert str(groups[0]) == "Z" and str(groups[1]) == "Z"
    # real projective plane: d_2 = (2), d_1 = 0
    groups = homology_of_complex(
        {0: 1, 1: 1, 2: 1}, {2: SparseIntMatrix.from_dense([[2]])})
    assert (str(groups[0]), str(groups[1]), str(groups[2])) == ("Z", "Z/2", "0")
    # torus: all boundaries vanish
    groups = homology_of_complex({0: 1, 1: 2, 2: 1}, {})
    assert (str(groups[0]), str(groups[1]), str(groups[2])) == ("Z", "Z + Z", "Z")


def test_homology_group_formatting():
    assert str(HomologyGroup(0)) == "0"
    assert str(HomologyGroup(1, (2, 2))) == "Z + Z/2 + Z/2"


def test_matrix_text_round_trip():
    rng = random.Random(1)
    dense = random_dense(rng, 5, 7)
    a = SparseIntMatrix.from_dense(dense)
    assert SparseIntMatrix.from_text(a.to_text()) == a
