"""
Homology of the moduli spaces of slit surfaces.

The bi-complex has exact columns below the top row q = h, so its spectral
sequence is concentrated in that single row and collapses.  The homology of
the pair in degree p + h is the homology of the row complex formed by the
kernels K_p of the vertical boundary, with the horizontal boundary expressed
in the kernel bases.  The moduli space homology is then read off by duality:

    H_k(moduli) = H^(3h-k)(pair)

which is the cohomology of the row complex at p = 2h - k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import (
    BoundaryMatrices,
    CellBasis,
    assemble_matrices,
    generate_basis,
)
from .exactlin import (
    HomologyGroup,
    SparseIntMatrix,
    homology_of_complex,
    kernel_basis,
    rank_mod2,
    rank_rational,
    snf,
    solve_in_basis,
)

COEFFS = ("z", "q", "f2", "twisted")


@dataclass(frozen=True)
class E1Row:
    """The E^1 page: kernel bases K_p of the vertical boundary at q = h."""

    h: int
    kernels: dict[int, SparseIntMatrix]  # p -> basis of ker d' in Q_{p,h}

    def rank(self, p: int) -> int:
        k = self.kernels.get(p)
        return k.ncols if k is not None else 0

    def ranks(self) -> dict[int, int]:
        return {p: k.ncols for p, k in sorted(self.kernels.items())}


@dataclass(frozen=True)
class ModuliHomology:
    g: int
    m: int
    permutable: bool
    coeff: str
    groups: dict[int, HomologyGroup] = field(default_factory=dict)

    def group(self, k: int) -> HomologyGroup:
        return self.groups.get(k, HomologyGroup(0))

    def top_degree(self) -> int:
        nonzero = [k for k, gp in self.groups.items() if not gp.is_trivial()]
        return max(nonzero) if nonzero else 0

    def as_tuple(self) -> tuple[HomologyGroup, ...]:
        return tuple(self.group(k) for k in range(self.top_degree() + 1))

    def format_record(self) -> str:
        parts = ", ".join(
            '{"k": %d, "free": %d, "torsion": [%s]}'
            % (k, gp.free_rank, ", ".join(str(t) for t in gp.torsion))
            for k, gp in sorted(self.groups.items())
            if not gp.is_trivial() or k <= self.top_degree()
        )
        return (
            '{"g": %d, "m": %d, "n": 1, "permutable": %s, "coeff": "%s", "H": [%s]}'
            % (self.g, self.m, "true" if self.permutable else "false",
               self.coeff, parts)
        )


def check_concentration(mats: BoundaryMatrices, mode: str = "ranks") -> None:
    """Verify the vertical complexes are exact below q = h.

    mode "ranks" checks exactness over the rationals by rank bookkeeping;
    mode "full" additionally requires every vertical elementary divisor to be
    1, which rules out torsion in the column homology.
    """
    basis = mats.basis
    h = basis.h
    qs_by_p: dict[int, list[int]] = {}
    for (p, q) in basis.cells:
        qs_by_p.setdefault(p, []).append(q)
    for p, qs in qs_by_p.items():
        ranks: dict[int, int] = {}
        for q in qs:
            d = mats.vertical.get((p, q))
            if d is None:
                ranks[q] = 0
            elif mode == "full":
                divisors = snf(d).divisors
                if any(t != 1 for t in divisors):
                    raise ValueError(
                        f"vertical boundary at ({p}, {q}) has nontrivial "
                        "elementary divisors"
                    )
                ranks[q] = len(divisors)
            else:
                ranks[q] = rank_rational(d)
        for q in qs:
            if q == h:
                continue
            dim = basis.dim(p, q)
            if dim != ranks.get(q, 0) + ranks.get(q + 1, 0):
                raise ValueError(
                    f"vertical complex not exact at ({p}, {q}): dim {dim}, "
                    f"ranks {ranks.get(q, 0)} + {ranks.get(q + 1, 0)}"
                )


def compute_E1(mats: BoundaryMatrices, check: str = "ranks",
               threads: int = 1) -> E1Row:
    """Kernel bases of the vertical boundary along the top row q = h.

    With threads > 1 the per-column kernels are computed on a thread pool;
    the result is assembled by column index and does not depend on
    scheduling.
    """
    if check:
        check_concentration(mats, mode=check)
    basis = mats.basis
    h = basis.h

    def kernel_at(p: int) -> SparseIntMatrix:
        d = mats.vertical.get((p, h))
        if d is None:
            return SparseIntMatrix.identity(basis.dim(p, h))
        return kernel_basis(d)

    ps = sorted(p for (p, q) in basis.cells if q == h)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(kernel_at, ps))
        kernels = dict(zip(ps, results))
    else:
        kernels = {p: kernel_at(p) for p in ps}
    return E1Row(h=h, kernels=kernels)


def row_complex(mats: BoundaryMatrices,
                e1: E1Row) -> tuple[dict[int, int], dict[int, SparseIntMatrix]]:
    """The E^1 row as a chain complex graded by p.

    Returns (dims, differentials) where differentials[p] expresses the
    horizontal boundary of K_p in the basis K_{p-1}.
    """
    h = e1.h
    dims = {p: k.ncols for p, k in e1.kernels.items()}
    diffs: dict[int, SparseIntMatrix] = {}
    for p in sorted(e1.kernels):
        if p - 1 not in e1.kernels:
            continue
        dh = mats.horizontal.get((p, h))
        if dh is None:
            continue
        image = dh.matmul(e1.kernels[p])
        if image.is_zero():
            continue
        diffs[p] = solve_in_basis(e1.kernels[p - 1], image)
    for p, mat in diffs.items():
        if p + 1 in diffs:
            if not mat.matmul(diffs[p + 1]).is_zero():
                raise ValueError(f"row differential fails d*d = 0 at p = {p + 1}")
    return dims, diffs


def _dualize(dims: dict[int, int], diffs: dict[int, SparseIntMatrix],
             h: int) -> tuple[dict[int, int], dict[int, SparseIntMatrix]]:
    """Regrade the dual (cochain) complex so degree k is H_k of moduli.

    Duality sends H_k(moduli) to the cohomology of the row complex at
    p = 2h - k; the dual complex in degree k is the dual of K_{2h-k} and its
    differential into degree k - 1 is the transpose of diffs[2h - k + 1].
    """
    cdims = {2 * h - p: d for p, d in dims.items()}
    cdiffs = {2 * h - p + 1: mat.transpose() for p, mat in diffs.items()}
    return cdims, cdiffs


def _field_dims(dims: dict[int, int], diffs: dict[int, SparseIntMatrix],
                rank_fn) -> dict[int, HomologyGroup]:
    ranks = {k: rank_fn(mat) for k, mat in diffs.items()}
    out = {}
    for k, dim in sorted(dims.items()):
        free = dim - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if free < 0:
            raise ValueError(f"negative dimension in degree {k}")
        out[k] = HomologyGroup(free_rank=free)
    return out


def _check_field_concentration(mats: BoundaryMatrices, rank_fn) -> None:
    """Exactness of the columns below q = h over the field of rank_fn."""
    basis = mats.basis
    h = basis.h
    qs_by_p: dict[int, list[int]] = {}
    for (p, q) in basis.cells:
        qs_by_p.setdefault(p, []).append(q)
    for p, qs in qs_by_p.items():
        ranks = {}
        for q in qs:
            d = mats.vertical.get((p, q))
            ranks[q] = rank_fn(d) if d is not None else 0
        for q in qs:
            if q == h:
                continue
            if basis.dim(p, q) != ranks.get(q, 0) + ranks.get(q + 1, 0):
                raise ValueError(
                    f"column at p = {p} not exact over the field in degree {q}"
                )
        k = mats.vertical.get((p, h))
        if k is not None and rank_fn(k) != rank_rational(k):
            raise ValueError(
                f"kernel basis at p = {p} does not span over the field"
            )


def homology_of_pair(mats: BoundaryMatrices, coeff: str = "z",
                     check: str = "ranks", threads: int = 1,
                     lll_bits: int | None = 64) -> dict[int, HomologyGroup]:
    """Homology of the relative pair in degrees n = p + h."""
    e1 = compute_E1(mats, check=check, threads=threads)
    dims, diffs = row_complex(mats, e1)
    h = mats.basis.h
    if coeff == "q":
        groups = _field_dims(dims, diffs, rank_rational)
    elif coeff == "f2":
        _check_field_concentration(mats, rank_mod2)
        groups = _field_dims(dims, diffs, rank_mod2)
    else:
        groups = homology_of_complex(dims, diffs, lll_threshold_bits=lll_bits)
    return {p + h: gp for p, gp in groups.items()}


def moduli_from_pair(mats: BoundaryMatrices, coeff: str = "z",
                     check: str = "ranks", threads: int = 1,
                     lll_bits: int | None = 64) -> dict[int, HomologyGroup]:
    """H_k(moduli) via duality from the row complex of the pair."""
    e1 = compute_E1(mats, check=check, threads=threads)
    dims, diffs = row_complex(mats, e1)
    h = mats.basis.h
    cdims, cdiffs = _dualize(dims, diffs, h)
    if coeff == "q":
        groups = _field_dims(cdims, cdiffs, rank_rational)
    elif coeff == "f2":
        _check_field_concentration(mats, rank_mod2)
        groups = _field_dims(cdims, cdiffs, rank_mod2)
    else:
        groups = homology_of_complex(cdims, cdiffs, lll_threshold_bits=lll_bits)
    return {k: gp for k, gp in groups.items() if k >= 0}


def compute_moduli_homology(g: int, m: int, permutable: bool = True,
                            coeff: str = "z", method: str = "spectral",
                            check: str = "ranks",
                            basis: CellBasis | None = None,
                            mats: BoundaryMatrices | None = None,
                            threads: int = 1,
                            lll_bits: int | None = 64) -> ModuliHomology:
    """Integral (or field) homology of the moduli space of type (g, m).

    For the permutable space with m >= 2 the duality readout carries the
    orientation system of the relative manifold; the integral answer is
    obtained from the horizontally sign-twisted boundary matrices.  The
    numbered (non-permutable) pair is orientable and needs no twist.
    """
    if coeff not in COEFFS:
        raise ValueError(f"unknown coefficient choice {coeff!r}")
    h = 2 * g + m
    if h < 1:
        raise ValueError("need 2g + m >= 1")
    twisted = permutable and m >= 2
    if basis is None:
        basis = generate_basis(h, m, numbered=not permutable)
    if mats is None:
        mats = assemble_matrices(basis, twisted=twisted)
    if method == "spectral":
        groups = moduli_from_pair(mats, coeff=coeff, check=check,
                                  threads=threads, lll_bits=lll_bits)
    elif method == "total":
        groups = moduli_homology_direct(mats, coeff=coeff, lll_bits=lll_bits)
    else:
        raise ValueError(f"unknown method {method!r}")
    top = max((k for k, gp in groups.items() if not gp.is_trivial()), default=0)
    groups = {k: gp for k, gp in groups.items() if k <= top}
    return ModuliHomology(g=g, m=m, permutable=permutable, coeff=coeff,
                          groups=groups)


def total_complex(mats: BoundaryMatrices) -> tuple[dict[int, int],
                                                   dict[int, SparseIntMatrix]]:
    """The total complex of the bi-complex, graded by n = p + q.

    The differential is d = d' + (-1)^q d''; the sign makes the squares
    anticommute.
    """
    basis = mats.basis
    offsets: dict[tuple[int, int], int] = {}
    dims: dict[int, int] = {}
    for (p, q) in sorted(basis.cells):
        n = p + q
        offsets[(p, q)] = dims.get(n, 0)
        dims[n] = dims.get(n, 0) + basis.dim(p, q)
    diffs: dict[int, SparseIntMatrix] = {}
    for n in sorted(dims):
        if n - 1 not in dims:
            continue
        t = SparseIntMatrix(dims[n - 1], dims[n])
        for (p, q), off in offsets.items():
            if p + q != n:
                continue
            dv = mats.vertical.get((p, q))
            if dv is not None and (p, q - 1) in offsets:
                roff = offsets[(p, q - 1)]
                for i, j, v in dv.entries():
                    t.add(roff + i, off + j, v)
            dh = mats.horizontal.get((p, q))
            if dh is not None and (p - 1, q) in offsets:
                roff = offsets[(p - 1, q)]
                s = -1 if q % 2 else 1
                for i, j, v in dh.entries():
                    t.add(roff + i, off + j, s * v)
        if not t.is_zero():
            diffs[n] = t
    return dims, diffs


def moduli_homology_direct(mats: BoundaryMatrices, coeff: str = "z",
                           lll_bits: int | None = 64) -> dict[int, HomologyGroup]:
    """H_k(moduli) from the full total complex; an oracle for small h."""
    h = mats.basis.h
    dims, diffs = total_complex(mats)
    # dual complex regraded so that degree k computes H^(3h-k) = H_k(moduli)
    cdims = {3 * h - n: d for n, d in dims.items()}
    cdiffs = {3 * h - n + 1: t.transpose() for n, t in diffs.items()}
    if coeff == "q":
        groups = _field_dims(cdims, cdiffs, rank_rational)
    elif coeff == "f2":
        groups = _field_dims(cdims, cdiffs, rank_mod2)
    else:
        groups = homology_of_complex(cdims, cdiffs, lll_threshold_bits=lll_bits)
    return {k: gp for k, gp in groups.items() if k >= 0}
