"""
Cells of the slit-surface bi-complex.

A homogeneous cell of bi-degree (p, q) is a (q+1)-tuple of permutations
(sigma_q, ..., sigma_0) of degree p + 1.  The equivalent bar form is
[tau_q | ... | tau_1] with tau_k = sigma_k * sigma_{k-1}^{-1}.  A numbered
cell additionally carries a puncture labeling nu: {0..p} -> {0..m}.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as iter_permutations

from .perm import (
    Perm,
    compose,
    delete_letter,
    format_oneline,
    inverse,
    ncyc,
    omega,
    parse_oneline,
    word_length,
)


@dataclass(frozen=True, slots=True)
class HomCell:
    """Homogeneous cell (sigma_q, ..., sigma_0), sigma_q first."""

    sigmas: tuple[Perm, ...]

    def __post_init__(self) -> None:
        degrees = {len(s) for s in self.sigmas}
        if len(degrees) != 1:
            raise ValueError("all sigma_i must have equal degree")

    @property
    def p(self) -> int:
        return len(self.sigmas[0]) - 1

    @property
    def q(self) -> int:
        return len(self.sigmas) - 1

    @property
    def sigma_q(self) -> Perm:
        return self.sigmas[0]

    def sort_key(self):
        return (self.p, self.q, self.sigmas)


@dataclass(frozen=True, slots=True)
class BarCell:
    """Bar cell [tau_q | ... | tau_1] of bi-degree (p, q), tau_q first."""

    p: int
    taus: tuple[Perm, ...]

    @property
    def q(self) -> int:
        return len(self.taus)


@dataclass(frozen=True, slots=True)
class NumberedCell:
    """A homogeneous cell with a puncture numbering nu (array over {0..p})."""

    nu: tuple[int, ...]
    cell: HomCell

    @property
    def p(self) -> int:
        return self.cell.p

    @property
    def q(self) -> int:
        return self.cell.q

    def sort_key(self):
        return (self.p, self.q, self.cell.sigmas, self.nu)


Cell = HomCell | NumberedCell


def to_bar(c: HomCell) -> BarCell:
    taus = []
    for k in range(c.q):
        # sigmas[k] is sigma_{q-k}; tau_{q-k} = sigma_{q-k} * sigma_{q-k-1}^{-1}
        taus.append(compose(c.sigmas[k], inverse(c.sigmas[k + 1])))
    return BarCell(p=c.p, taus=tuple(taus))


def to_hom(b: BarCell) -> HomCell:
    sigma = omega(b.p)
    sigmas = [sigma]
    for tau in reversed(b.taus):  # tau_1 first
        sigma = compose(tau, sigma)
        sigmas.append(sigma)
    sigmas.reverse()
    return HomCell(sigmas=tuple(sigmas))


def norm(c: HomCell | BarCell) -> int:
    """Sum of the transposition word lengths of the bar entries."""
    if isinstance(c, BarCell):
        return sum(word_length(t) for t in c.taus)
    total = 0
    for k in range(c.q):
        total += word_length(compose(c.sigmas[k], inverse(c.sigmas[k + 1])))
    return total


def surface_invariants(c: HomCell) -> tuple[int, int]:
    """(genus, punctures) of the glued surface of a non-degenerate cell."""
    punctures = ncyc(c.sigma_q) - 1
    rest = norm(c) - punctures
    if rest < 0 or rest % 2:
        raise ValueError(
            f"invalid cell: norm {norm(c)} and {punctures} punctures "
            "violate the genus parity relation"
        )
    return rest // 2, punctures


def is_nondegenerate(c: HomCell, h: int, m: int) -> bool:
    """Whether c generates the quotient complex for parameters (h, m)."""
    p, q = c.p, c.q
    sig = c.sigmas
    if any(s[p] != 0 for s in sig):
        return False
    if sig[q] != omega(p):
        return False
    if any(sig[i + 1] == sig[i] for i in range(q)):
        return False
    # no letter k < p that every sigma_i merely shifts to k + 1
    for k in range(p):
        if all(s[k] == k + 1 for s in sig):
            return False
    if ncyc(sig[0]) != m + 1:
        return False
    return norm(c) == h


def numbering_orbits(sigma_q: Perm) -> list[tuple[int, ...]]:
    """Orbits of sigma_q sorted by minimum; the orbit of 0 comes first."""
    seen = [False] * len(sigma_q)
    orbits = []
    for i in range(len(sigma_q)):
        if seen[i]:
            continue
        orbit = []
        j = i
        while not seen[j]:
            seen[j] = True
            orbit.append(j)
            j = sigma_q[j]
        orbits.append(tuple(orbit))
    return orbits


def _nu_from_labels(sigma_q: Perm, labels: tuple[int, ...]) -> tuple[int, ...]:
    orbits = numbering_orbits(sigma_q)
    nu = [0] * len(sigma_q)
    for orbit, label in zip(orbits[1:], labels):
        for x in orbit:
            nu[x] = label
    return tuple(nu)


def numberings(c: HomCell, m: int) -> list[NumberedCell]:
    """All valid puncture numberings of c; m! of them when ncyc = m + 1."""
    if ncyc(c.sigma_q) != m + 1:
        raise ValueError("cell has the wrong cycle count for m punctures")
    out = []
    for labels in iter_permutations(range(1, m + 1)):
        out.append(NumberedCell(nu=_nu_from_labels(c.sigma_q, labels), cell=c))
    return out


def canonical_numbering(c: HomCell, m: int) -> tuple[int, ...]:
    """The numbering labeling the non-zero orbits 1..m by increasing minimum."""
    return _nu_from_labels(c.sigma_q, tuple(range(1, m + 1)))


def is_valid_numbering(nu: tuple[int, ...], c: HomCell, m: int) -> bool:
    p = c.p
    if len(nu) != p + 1 or nu[0] != 0 or nu[p] != 0:
        return False
    labels = set()
    for orbit in numbering_orbits(c.sigma_q):
        values = {nu[x] for x in orbit}
        if len(values) != 1:
            return False
        labels.add(values.pop())
    # distinct labels per orbit, jointly covering {0..m}
    return len(labels) == len(numbering_orbits(c.sigma_q)) == m + 1 and labels == set(
        range(m + 1)
    )


def is_nondegenerate_numbered(nc: NumberedCell, h: int, m: int) -> bool:
    return is_nondegenerate(nc.cell, h, m) and is_valid_numbering(nc.nu, nc.cell, m)


def cell_text(c: Cell) -> str:
    """Canonical text form, e.g. `4 2 : 3,4,1,2,0 ; 1,4,3,2,0 ; 1,2,3,4,0`."""
    if isinstance(c, NumberedCell):
        base = cell_text(c.cell)
        return f"{base} | {','.join(str(x) for x in c.nu)}"
    sig = " ; ".join(format_oneline(s) for s in c.sigmas)
    return f"{c.p} {c.q} : {sig}"


def parse_cell_text(line: str) -> Cell:
    head, _, body = line.partition(":")
    p_str, q_str = head.split()
    p, q = int(p_str), int(q_str)
    body, _, nu_part = body.partition("|")
    sigmas = tuple(parse_oneline(tok) for tok in body.split(";"))
    cell = HomCell(sigmas=sigmas)
    if cell.p != p or cell.q != q:
        raise ValueError(f"bi-degree mismatch in cell line: {line!r}")
    if nu_part.strip():
        nu = tuple(int(tok) for tok in nu_part.strip().split(","))
        return NumberedCell(nu=nu, cell=cell)
    return cell
