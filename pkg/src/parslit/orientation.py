"""
The fundamental cycle of the slit pair and cell orientations.

The top-dimensional cells of type (g, m) are indexed by ordered tuples of h
disjoint transpositions on {1, ..., 2h}; forgetting the order gives a perfect
matching.  The fundamental cycle assigns each ordered top cell a sign, built
from a base cell by conjugation (horizontally) and slot permutation
(vertically).  Every cell determines a preferred top cell by separating its
bar entries into transpositions and spreading out duplicated letters; its
orientation sign is the coefficient of that top cell in the fundamental
cycle.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations as iter_permutations

from .cells import (
    BarCell,
    HomCell,
    canonical_numbering,
    is_nondegenerate,
    to_bar,
    to_hom,
)
from .complexes import (
    BoundaryMatrices,
    enumerate_matchings,
    face_horizontal,
    face_vertical,
    matching_punctures,
    relabeling_sign,
    top_cell as matching_top_cell,
)
from .exactlin import SparseIntMatrix, kernel_basis
from .perm import (
    Perm,
    compose_all,
    cycles,
    insert_letter,
    ncyc,
    sign,
    transposition,
)

Matching = tuple[tuple[int, int], ...]


def base_matching(g: int, m: int) -> Matching:
    """The base tuple of pairs: g interlocking blocks, then m neighbours."""
    pairs = []
    for i in range(1, g + 1):
        pairs.append((4 * i - 3, 4 * i - 1))
        pairs.append((4 * i - 2, 4 * i))
    for k in range(1, m + 1):
        pairs.append((4 * g + 2 * k - 1, 4 * g + 2 * k))
    return tuple(pairs)


def base_cell(g: int, m: int) -> HomCell:
    """The base top cell T of type (g, m); bar entry tau_k is the kth pair."""
    h = 2 * g + m
    matching = tuple((b, a) for a, b in base_matching(g, m))
    return matching_top_cell(matching, tuple(range(h)), h)


def _canonical_matching(matching: Matching) -> Matching:
    return tuple(sorted(tuple(sorted(p)) for p in matching))


def _vertical_image(cell: HomCell, h: int, m: int):
    for i in range(1, cell.q):
        f = face_vertical(cell, i)
        if is_nondegenerate(f, h, m):
            yield f, -1 if i % 2 else 1


def _horizontal_image(cell: HomCell, h: int, m: int):
    """Horizontal face images, orientation-corrected when punctures permute."""
    inherited = canonical_numbering(cell, m) if m >= 2 else None
    for j in range(1, cell.p):
        f = face_horizontal(cell, j)
        if is_nondegenerate(f, h, m):
            s = -1 if j % 2 else 1
            if m >= 2:
                nu = inherited[:j] + inherited[j + 1:]
                s *= relabeling_sign(nu, canonical_numbering(f, m))
            yield f, s


def _matching_boundary(matching: Matching, h: int, m: int) -> dict[HomCell, int]:
    """Boundary of the signed sum of all slot orderings of one matching."""
    acc: dict[HomCell, int] = {}
    for order in iter_permutations(range(h)):
        cell = matching_top_cell(matching, order, h)
        c0 = sign(order)
        for images in (_vertical_image, _horizontal_image):
            for f, s in images(cell, h, m):
                new = acc.get(f, 0) + c0 * s
                if new:
                    acc[f] = new
                else:
                    acc.pop(f, None)
    return acc


@lru_cache(maxsize=None)
def matching_signs(g: int, m: int) -> dict[Matching, int]:
    """The sign of each genus-correct matching in the fundamental cycle.

    The slot-ordering signs are forced to be sign(order); the remaining
    per-matching signs are pinned down by requiring the total chain to be a
    cycle.  That condition has a one-dimensional solution lattice, and the
    normalization gives the base matching the sign +1.
    """
    h = 2 * g + m
    matchings = [M for M in enumerate_matchings(h)
                 if matching_punctures(M, h) == m]
    face_index: dict[HomCell, int] = {}
    entries = []
    for col, matching in enumerate(matchings):
        for f, v in _matching_boundary(matching, h, m).items():
            row = face_index.setdefault(f, len(face_index))
            entries.append((row, col, v))
    a = SparseIntMatrix.from_entries(len(face_index), len(matchings), entries)
    kernel = kernel_basis(a)
    if kernel.ncols != 1:
        raise ValueError(
            f"fundamental cycle is not unique for type ({g}, {m}): "
            f"kernel rank {kernel.ncols}"
        )
    vec = [kernel.get(i, 0) for i in range(len(matchings))]
    if any(abs(v) != 1 for v in vec):
        raise ValueError("fundamental cycle has non-unit coefficients")
    signs = {_canonical_matching(M): v
             for M, v in zip(matchings, vec)}
    base = _canonical_matching(base_matching(g, m))
    if base not in signs:
        raise ValueError("base matching has the wrong puncture count")
    if signs[base] < 0:
        signs = {k: -v for k, v in signs.items()}
    return signs


def matching_sign(g: int, m: int, matching: Matching) -> int:
    """Sign of one matching in the fundamental cycle of type (g, m)."""
    return matching_signs(g, m)[_canonical_matching(matching)]


def build_fundamental_cycle(g: int, m: int) -> dict[HomCell, int]:
    """The fundamental cycle as a map from ordered top cells to signs.

    Every genus-correct matching contributes all h! slot orderings, each with
    coefficient sign(ordering) times the sign of the matching.
    """
    h = 2 * g + m
    signs = matching_signs(g, m)
    mu: dict[HomCell, int] = {}
    for matching in enumerate_matchings(h):
        s = signs.get(_canonical_matching(matching))
        if s is None:
            continue
        for order in iter_permutations(range(h)):
            cell = matching_top_cell(matching, order, h)
            mu[cell] = s * sign(order)
    return mu


def verify_fundamental_cycle(mu: dict[HomCell, int], h: int, m: int) -> None:
    """Check that both partial boundaries of mu vanish in the quotient.

    The horizontal boundary carries the orientation twist for m >= 2.  Works
    directly on face images, so no full basis is needed.
    """
    for face_images in (_vertical_image, _horizontal_image):
        acc: dict[HomCell, int] = {}
        for cell, coeff in mu.items():
            for f, s in face_images(cell, h, m):
                new = acc.get(f, 0) + coeff * s
                if new:
                    acc[f] = new
                else:
                    acc.pop(f, None)
        if acc:
            raise ValueError("the fundamental chain is not a cycle")


def normal_form(a: Perm) -> list[tuple[int, int]]:
    """Transposition word for a: per-cycle factor lists, smallest cycle last.

    Within a cycle traversed from its minimum as (i_0, i_1, ..., i_l), the
    factors are (i_l, i_{l-1}), ..., (i_1, i_0).  The word multiplies back to
    a when applied leftmost-first.

    >>> normal_form((1, 4, 3, 2, 0))  # the permutation (4 1 0)(3 2)
    [(3, 2), (4, 1), (1, 0)]
    """
    factors: list[tuple[int, int]] = []
    for orbit in sorted(cycles(a), reverse=True):
        for k in range(len(orbit) - 1, 0, -1):
            factors.append((orbit[k], orbit[k - 1]))
    return factors


def recompose_normal_form(n: int, factors: list[tuple[int, int]]) -> Perm:
    """Inverse of `normal_form`: apply the factors leftmost-first."""
    perms = [transposition(n, i, j) for i, j in factors]
    if not perms:
        return tuple(range(n))
    return compose_all(reversed(perms))


def separate(c: HomCell) -> BarCell:
    """Refine each bar entry into its normal form transpositions.

    The leftmost factor of tau_q lands in the highest bar slot; the norm of
    the cell becomes the number of slots.
    """
    bar = to_bar(c)
    taus: list[Perm] = []
    n = c.p + 1
    for tau in bar.taus:  # tau_q first
        for i, j in normal_form(tau):
            taus.append(transposition(n, i, j))
    return BarCell(p=c.p, taus=tuple(taus))


def spread_out(bar: BarCell) -> BarCell:
    """Insert letters until the bar entries are pairwise disjoint.

    In each step the lowest duplicated letter k is located; counting slots
    from the rightmost entry, the slots above its first occurrence are
    relabeled by S_k and the remaining ones by S_{k+1}.
    """
    taus = list(bar.taus)  # tau_q first; slot 1 is the last element
    p = bar.p
    while True:
        positions: dict[int, list[int]] = {}
        for idx, tau in enumerate(taus):
            for letter in range(1, p + 1):
                if tau[letter] != letter:
                    positions.setdefault(letter, []).append(idx)
        dup = sorted(k for k, occ in positions.items() if len(occ) > 1)
        if not dup:
            return BarCell(p=p, taus=tuple(taus))
        k = dup[0]
        first = max(positions[k])  # rightmost slot has the largest list index
        taus = [
            insert_letter(k if idx < first else k + 1, tau)
            for idx, tau in enumerate(taus)
        ]
        p += 1


def top_of(c: HomCell) -> HomCell:
    """The preferred top cell over c, via separation and spreading out."""
    spread = spread_out(separate(c))
    top = to_hom(spread)
    if top.p != 2 * len(spread.taus):
        raise ValueError("spread-out cell is not top-dimensional")
    return top


class OrientationSigns:
    """Memoized cell orientation signs for one surface type.

    Spreading out a cell can produce a top cell with more punctures than the
    cell itself (a 3-cycle bar entry separates into two overlapping
    transpositions whose spread is non-interlocking).  The sign table
    therefore extends over all puncture sectors of the same norm h, each
    sector normalized on its own base matching.
    """

    def __init__(self, g: int, m: int):
        self.g = g
        self.m = m
        self.h = 2 * g + m
        self.mu = build_fundamental_cycle(g, m)
        self._mus: dict[int, dict[HomCell, int]] = {m: self.mu}
        self._cache: dict[HomCell, int] = {}

    def _sector(self, m2: int) -> dict[HomCell, int]:
        mu = self._mus.get(m2)
        if mu is None:
            g2, rest = divmod(self.h - m2, 2)
            if rest or g2 < 0:
                raise ValueError(f"no sector with {m2} punctures at h = {self.h}")
            mu = self._mus[m2] = build_fundamental_cycle(g2, m2)
        return mu

    def eps(self, c: HomCell) -> int:
        s = self._cache.get(c)
        if s is None:
            top = top_of(c)
            s = self._sector(ncyc(top.sigma_q) - 1).get(top)
            if s is None:
                raise ValueError("top cell missing from the fundamental cycle")
            self._cache[c] = s
        return s


def twist_matrices(mats: BoundaryMatrices,
                   signs: OrientationSigns) -> BoundaryMatrices:
    """Multiply every incidence number by eps(cell) * eps(face).

    This rescaling by a diagonal sign change is an isomorphism of complexes;
    it is provided for diagnostics and leaves all homology unchanged.
    """
    basis = mats.basis
    if basis.numbered:
        raise ValueError("orientation signs apply to the unnumbered basis")
    eps_of: dict[tuple[int, int], list[int]] = {}
    for key, lst in basis.cells.items():
        eps_of[key] = [signs.eps(c) for c in lst]

    def rescale(mat: SparseIntMatrix, src: tuple[int, int],
                dst: tuple[int, int]) -> SparseIntMatrix:
        out = SparseIntMatrix(mat.nrows, mat.ncols)
        col_eps = eps_of[src]
        row_eps = eps_of.get(dst)
        for i, j, v in mat.entries():
            out.rows[i][j] = v * col_eps[j] * row_eps[i]
        return out

    vertical = {
        (p, q): rescale(mat, (p, q), (p, q - 1))
        for (p, q), mat in mats.vertical.items()
    }
    horizontal = {
        (p, q): rescale(mat, (p, q), (p - 1, q))
        for (p, q), mat in mats.horizontal.items()
    }
    return BoundaryMatrices(basis=basis, vertical=vertical, horizontal=horizontal)


def fundamental_cycle_text(mu: dict[HomCell, int]) -> str:
    from .cells import cell_text

    lines = []
    for cell in sorted(mu, key=lambda c: c.sort_key()):
        s = mu[cell]
        lines.append(("+1 " if s > 0 else "-1 ") + cell_text(cell))
    return "\n".join(lines) + "\n"
