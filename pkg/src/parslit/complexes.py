"""
The bi-graded quotient complex of slit cells and its boundary matrices.

Cells are generated by closing the set of top cells (bi-degree (2h, h), all
bar entries transpositions) under interior vertical and horizontal faces,
keeping the non-degenerate ones.  Both faces of a degenerate cell and the
extreme faces (i = 0, q and j = 0, p) vanish in the quotient.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations as iter_permutations

from .cells import (
    Cell,
    HomCell,
    NumberedCell,
    canonical_numbering,
    cell_text,
    is_nondegenerate,
    is_valid_numbering,
    norm,
    numberings,
    parse_cell_text,
    to_hom,
    BarCell,
)
from .exactlin import SparseIntMatrix
from .perm import Perm, compose, delete_letter, from_cycles, ncyc, omega, sign

MAX_H = 6


@dataclass(frozen=True)
class CellBasis:
    """All generating cells of the quotient complex, indexed by bi-degree."""

    h: int
    m: int
    numbered: bool
    cells: dict[tuple[int, int], list[Cell]]
    index: dict[Cell, tuple[int, int, int]] = field(repr=False)

    def dim(self, p: int, q: int) -> int:
        return len(self.cells.get((p, q), ()))

    def total_cells(self) -> int:
        return sum(len(v) for v in self.cells.values())

    def p_range(self, q: int) -> list[int]:
        return sorted(p for (p, qq) in self.cells if qq == q)


@dataclass(frozen=True)
class BoundaryMatrices:
    """Sparse boundaries of the bi-complex.

    vertical[(p, q)] maps bi-degree (p, q) to (p, q - 1); horizontal[(p, q)]
    maps (p, q) to (p - 1, q).  Missing keys denote zero maps.
    """

    basis: CellBasis
    vertical: dict[tuple[int, int], SparseIntMatrix]
    horizontal: dict[tuple[int, int], SparseIntMatrix]


def face_vertical(c: HomCell, i: int) -> HomCell:
    """Drop sigma_i (0 <= i <= q); interior faces have 0 < i < q."""
    q = c.q
    if not 0 <= i <= q:
        raise ValueError(f"vertical face index {i} out of range")
    k = q - i  # position of sigma_i in the (sigma_q, ..., sigma_0) tuple
    return HomCell(sigmas=c.sigmas[:k] + c.sigmas[k + 1:])


def face_horizontal(c: HomCell, j: int) -> HomCell:
    """Delete the letter j from every sigma_i (0 <= j <= p)."""
    return HomCell(sigmas=tuple(delete_letter(j, s) for s in c.sigmas))


def face_vertical_numbered(nc: NumberedCell, i: int) -> NumberedCell:
    return NumberedCell(nu=nc.nu, cell=face_vertical(nc.cell, i))


def face_horizontal_numbered(nc: NumberedCell, j: int) -> NumberedCell:
    nu = nc.nu[:j] + nc.nu[j + 1:]
    return NumberedCell(nu=nu, cell=face_horizontal(nc.cell, j))


def enumerate_matchings(h: int) -> list[tuple[tuple[int, int], ...]]:
    """Perfect matchings of {1, ..., 2h}, each pair as (larger, smaller)."""
    letters = list(range(1, 2 * h + 1))

    def rec(rest: list[int]):
        if not rest:
            yield ()
            return
        a = rest[0]
        for k in range(1, len(rest)):
            b = rest[k]
            tail = rest[1:k] + rest[k + 1:]
            for rem in rec(tail):
                yield ((b, a),) + rem

    return sorted(rec(letters))


def matching_punctures(matching: tuple[tuple[int, int], ...], h: int) -> int:
    """Number of punctures of the top cells built on this matching."""
    n = 2 * h + 1
    sigma_q = compose(from_cycles(n, matching), omega(2 * h))
    return ncyc(sigma_q) - 1


def top_cell(matching: tuple[tuple[int, int], ...], order: tuple[int, ...],
             h: int) -> HomCell:
    """The top cell whose bar entry tau_{k+1} is the pair matching[order[k]]."""
    n = 2 * h + 1
    taus = [from_cycles(n, [matching[order[k]]]) for k in range(h)]
    # bar form lists tau_q first
    return to_hom(BarCell(p=2 * h, taus=tuple(reversed(taus))))


def enumerate_top_cells(h: int, m: int) -> list[HomCell]:
    out = []
    for matching in enumerate_matchings(h):
        if matching_punctures(matching, h) != m:
            continue
        for order in iter_permutations(range(h)):
            out.append(top_cell(matching, order, h))
    return sorted(set(out), key=lambda c: c.sort_key())


def generate_basis(h: int, m: int, numbered: bool = False) -> CellBasis:
    """Close the top cells under interior faces, keeping non-degenerate ones."""
    if h > MAX_H:
        raise ValueError(f"h = {h} exceeds the supported bound {MAX_H}")
    if h < 1 or m < 0:
        raise ValueError("need h >= 1 and m >= 0")
    tops = enumerate_top_cells(h, m)
    seen: set[HomCell] = set(tops)
    queue = deque(tops)
    while queue:
        c = queue.popleft()
        faces = [face_vertical(c, i) for i in range(1, c.q)]
        faces += [face_horizontal(c, j) for j in range(1, c.p)]
        for f in faces:
            if f not in seen and is_nondegenerate(f, h, m):
                seen.add(f)
                queue.append(f)
    grouped: dict[tuple[int, int], list[Cell]] = {}
    for c in seen:
        grouped.setdefault((c.p, c.q), []).append(c)
    cells: dict[tuple[int, int], list[Cell]] = {}
    for key in sorted(grouped):
        chosen = sorted(grouped[key], key=lambda c: c.sort_key())
        if numbered:
            chosen = [nc for c in chosen for nc in numberings(c, m)]
            chosen.sort(key=lambda nc: nc.sort_key())
        cells[key] = chosen
    index = {
        c: (p, q, idx)
        for (p, q), lst in cells.items()
        for idx, c in enumerate(lst)
    }
    return CellBasis(h=h, m=m, numbered=numbered, cells=cells, index=index)


def relabeling_sign(nu_from: tuple[int, ...], nu_to: tuple[int, ...]) -> int:
    """Sign of the puncture relabeling rho with nu_from = rho o nu_to."""
    m = max(nu_to)
    rho = [None] * (m + 1)
    for a, b in zip(nu_to, nu_from):
        if rho[a] is None:
            rho[a] = b
        elif rho[a] != b:
            raise ValueError("numberings are not related by a relabeling")
    if rho[0] != 0 or sorted(rho) != list(range(m + 1)):
        raise ValueError("numberings are not related by a relabeling")
    return sign(tuple(rho))


def assemble_matrices(basis: CellBasis, twisted: bool = False) -> BoundaryMatrices:
    """Boundary matrices of the quotient complex over the given basis.

    With `twisted=True` (unnumbered basis only) each horizontal incidence is
    multiplied by the sign of the puncture relabeling relating the inherited
    numbering of the face to its canonical one; vertical incidences keep the
    numbering of the cell and are untouched.
    """
    if twisted and basis.numbered:
        raise ValueError("the twist applies to the unnumbered basis")
    h, m = basis.h, basis.m
    vertical: dict[tuple[int, int], SparseIntMatrix] = {}
    horizontal: dict[tuple[int, int], SparseIntMatrix] = {}
    for (p, q), lst in basis.cells.items():
        dv = SparseIntMatrix(basis.dim(p, q - 1), len(lst))
        dh = SparseIntMatrix(basis.dim(p - 1, q), len(lst))
        for col, c in enumerate(lst):
            hom = c.cell if basis.numbered else c
            for i in range(1, q):
                f = (face_vertical_numbered(c, i) if basis.numbered
                     else face_vertical(c, i))
                loc = basis.index.get(f)
                if loc is None:
                    continue
                dv.add(loc[2], col, -1 if i % 2 else 1)
            for j in range(1, p):
                f = (face_horizontal_numbered(c, j) if basis.numbered
                     else face_horizontal(c, j))
                fhom = f.cell if basis.numbered else f
                loc = basis.index.get(f)
                if loc is None:
                    if basis.numbered and basis.index.get(fhom) is not None:
                        raise RuntimeError("numbered face missing from basis")
                    continue
                entry = -1 if j % 2 else 1
                if twisted and m >= 2:
                    inherited = canonical_numbering(hom, m)
                    inherited = inherited[:j] + inherited[j + 1:]
                    entry *= relabeling_sign(inherited,
                                             canonical_numbering(fhom, m))
                dh.add(loc[2], col, entry)
        if not dv.is_zero():
            vertical[(p, q)] = dv
        if not dh.is_zero():
            horizontal[(p, q)] = dh
    return BoundaryMatrices(basis=basis, vertical=vertical, horizontal=horizontal)


def basis_to_text(basis: CellBasis) -> str:
    lines = [
        "# parslit-cells v1",
        f"h={basis.h} m={basis.m} numbered={'1' if basis.numbered else '0'}",
    ]
    for key in sorted(basis.cells):
        lines.extend(cell_text(c) for c in basis.cells[key])
    return "\n".join(lines) + "\n"


def basis_from_text(text: str) -> CellBasis:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "# parslit-cells v1":
        raise ValueError("not a parslit cells file")
    head = dict(tok.split("=") for tok in lines[1].split())
    h, m = int(head["h"]), int(head["m"])
    numbered = head["numbered"] == "1"
    cells: dict[tuple[int, int], list[Cell]] = {}
    for ln in lines[2:]:
        c = parse_cell_text(ln)
        if isinstance(c, NumberedCell) != numbered:
            raise ValueError("cell numbering does not match the file header")
        cells.setdefault((c.p, c.q), []).append(c)
    index = {
        c: (p, q, idx)
        for (p, q), lst in cells.items()
        for idx, c in enumerate(lst)
    }
    return CellBasis(h=h, m=m, numbered=numbered, cells=cells, index=index)
