"""Homology pipeline: golden rows for small types and cross-checks."""
import pytest

from parslit.complexes import assemble_matrices, generate_basis
from parslit.homology import (
    check_concentration,
    compute_E1,
    compute_moduli_homology,
    homology_of_pair,
    row_complex,
)

GOLDEN_SMALL = {
    (0, 1): ("Z",),
    (0, 2): ("Z", "Z"),
    (0, 3): ("Z", "Z"),
    (1, 0): ("Z", "Z"),
    (1, 1): ("Z", "Z", "Z/2"),
}


def as_strings(result):
    return tuple(str(gp) for gp in result.as_tuple())


@pytest.mark.parametrize("g,m", sorted(GOLDEN_SMALL))
def test_golden_rows_small(g, m):
    for method in ("spectral", "total"):
        result = compute_moduli_homology(g, m, method=method)
        assert as_strings(result) == GOLDEN_SMALL[(g, m)], method


def test_e1_and_pair_for_2_0():
    basis = generate_basis(2, 0)
    mats = assemble_matrices(basis)
    e1 = compute_E1(mats, check="full")
    assert e1.ranks() == {2: 1, 3: 2, 4: 1}
    dims, diffs = row_complex(mats, e1)
    assert dims == {2: 1, 3: 2, 4: 1}
    # pair homology concentrated in the top two degrees
    pair = homology_of_pair(mats)
    assert {k: str(v) for k, v in pair.items() if str(v) != "0"} == {
        5: "Z", 6: "Z"}


def test_full_concentration_check_passes():
    for h, m in [(2, 0), (2, 2), (3, 1)]:
        mats = assemble_matrices(generate_basis(h, m))
        check_concentration(mats, mode="full")


def test_field_coefficients_satisfy_uct_and_euler():
    for g, m in sorted(GOLDEN_SMALL):
        z = compute_moduli_homology(g, m, coeff="z")
        q = compute_moduli_homology(g, m, coeff="q")
        f2 = compute_moduli_homology(g, m, coeff="f2")
        top = max(z.top_degree(), q.top_degree(), f2.top_degree())
        euler_z = euler_q = euler_f2 = 0
        for k in range(top + 2):
            zk, zk1 = z.group(k), z.group(k - 1) if k else None
            # universal coefficients over Q and F_2
            assert q.group(k).free_rank == zk.free_rank
            t2 = sum(1 for t in zk.torsion if t % 2 == 0)
            t2_prev = (sum(1 for t in zk1.torsion if t % 2 == 0)
                       if zk1 is not None else 0)
            assert f2.group(k).free_rank == zk.free_rank + t2 + t2_prev
            s = -1 if k % 2 else 1
            euler_z += s * zk.free_rank
            euler_q += s * q.group(k).free_rank
            euler_f2 += s * f2.group(k).free_rank
        assert euler_z == euler_q == euler_f2


def test_twisted_equals_plain_for_few_punctures():
    for g, m in [(0, 1), (1, 0), (1, 1)]:
        plain = compute_moduli_homology(g, m, coeff="z")
        twisted = compute_moduli_homology(g, m, coeff="twisted")
        assert plain.groups == twisted.groups


def test_braid_like_types_via_the_twist():
    # permutable types of genus zero with two and three punctures
    for m in (2, 3):
        result = compute_moduli_homology(0, m)
        assert as_strings(result) == ("Z", "Z")


def test_threads_do_not_change_results():
    basis = generate_basis(3, 1)
    mats = assemble_matrices(basis)
    one = compute_moduli_homology(1, 1, basis=basis, mats=mats, threads=1)
    four = compute_moduli_homology(1, 1, basis=basis, mats=mats, threads=4)
    assert one.groups == four.groups
    assert compute_E1(mats, threads=1).kernels == \
           compute_E1(mats, threads=4).kernels


def test_lll_threshold_does_not_change_results():
    for bits in (8, 64, None):
        result = compute_moduli_homology(1, 1, lll_bits=bits)
        assert as_strings(result) == GOLDEN_SMALL[(1, 1)]


def test_invalid_inputs_are_rejected():
    with pytest.raises(ValueError):
        compute_moduli_homology(0, 0)
    with pytest.raises(ValueError):
        compute_moduli_homology(1, 1, coeff="z3")
    with pytest.raises(ValueError):
        compute_moduli_homology(1, 1, method="guess")
