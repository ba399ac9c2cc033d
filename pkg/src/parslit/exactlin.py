"""
Exact sparse integer linear algebra.

Matrices are stored row-compressed (dict of column -> value per row) with a
column-occupancy index maintained during reductions.  All arithmetic is on
arbitrary-precision integers; Smith normal form reductions optionally invoke
exact LLL size-reduction when coefficients pass a configurable bit barrier.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from heapq import heappush, heappop
from math import gcd

__all__ = [
    "SparseIntMatrix",
    "SnfResult",
    "HomologyGroup",
    "snf",
    "snf_dense_with_transforms",
    "lll_reduce",
    "rank_rational",
    "rank_mod2",
    "kernel_basis",
    "solve_in_basis",
    "homology_of_complex",
]


class SparseIntMatrix:
    """Sparse integer matrix; no zero entry is ever stored."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: list[dict[int, int]] = [dict() for _ in range(nrows)]

    @classmethod
    def from_entries(cls, nrows, ncols, entries) -> "SparseIntMatrix":
        a = cls(nrows, ncols)
        for i, j, v in entries:
            a.add(i, j, v)
        return a

    @classmethod
    def from_dense(cls, dense) -> "SparseIntMatrix":
        a = cls(len(dense), len(dense[0]) if dense else 0)
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                if v:
                    a.rows[i][j] = v
        return a

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        a = cls(n, n)
        for i in range(n):
            a.rows[i][i] = 1
        return a

    def add(self, i: int, j: int, v: int) -> None:
        if not 0 <= i < self.nrows or not 0 <= j < self.ncols:
            raise IndexError(f"entry ({i}, {j}) outside {self.nrows}x{self.ncols}")
        row = self.rows[i]
        new = row.get(j, 0) + v
        if new:
            row[j] = new
        else:
            row.pop(j, None)

    def get(self, i: int, j: int) -> int:
        return self.rows[i].get(j, 0)

    def entries(self):
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                yield i, j, v

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def is_zero(self) -> bool:
        return all(not row for row in self.rows)

    def copy(self) -> "SparseIntMatrix":
        a = SparseIntMatrix(self.nrows, self.ncols)
        a.rows = [dict(row) for row in self.rows]
        return a

    def transpose(self) -> "SparseIntMatrix":
        a = SparseIntMatrix(self.ncols, self.nrows)
        for i, j, v in self.entries():
            a.rows[j][i] = v
        return a

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.ncols)]
        for i, j, v in self.entries():
            cols[j][i] = v
        return cols

    def column_support(self) -> list[set[int]]:
        occ: list[set[int]] = [set() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j in row:
                occ[j].add(i)
        return occ

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matmul")
        out = SparseIntMatrix(self.nrows, other.ncols)
        orows = other.rows
        for i, row in enumerate(self.rows):
            acc: dict[int, int] = {}
            for k, v in row.items():
                for j, w in orows[k].items():
                    new = acc.get(j, 0) + v * w
                    if new:
                        acc[j] = new
                    else:
                        del acc[j]
            out.rows[i] = acc
        return out

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        """Matrix-vector product for a sparse coefficient vector."""
        out: dict[int, int] = {}
        for i, row in enumerate(self.rows):
            s = 0
            for j, v in row.items():
                c = vec.get(j)
                if c:
                    s += v * c
            if s:
                out[i] = s
        return out

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            dense[i][j] = v
        return dense

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseIntMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def to_text(self) -> str:
        lines = ["# parslit-matrix v1", f"rows={self.nrows} cols={self.ncols}"]
        triplets = sorted(((j, i, v) for i, j, v in self.entries()))
        lines.extend(f"{i} {j} {v}" for j, i, v in triplets)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseIntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != "# parslit-matrix v1":
            raise ValueError("not a parslit matrix file")
        head = dict(tok.split("=") for tok in lines[1].split())
        a = cls(int(head["rows"]), int(head["cols"]))
        for ln in lines[2:]:
            i, j, v = ln.split()
            a.add(int(i), int(j), int(v))
        return a


@dataclass(frozen=True)
class SnfResult:
    divisors: tuple[int, ...]
    left: SparseIntMatrix | None = None
    right: SparseIntMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.divisors)


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _nearest_quotient(a: int, b: int) -> int:
    """Integer q minimizing |a - q*b| (b nonzero)."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def _chain_normalize(values: list[int]) -> tuple[int, ...]:
    """Elementary divisors of diag(values), as a divisibility chain."""
    d = [abs(v) for v in values if v]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] // g * d[j]
                    changed = True
    d.sort()
    return tuple(d)


class _Reducer:
    """Shared row/column elimination state over a sparse matrix."""

    def __init__(self, a: SparseIntMatrix, lll_threshold_bits: int | None,
                 lll_delta: Fraction):
        self.rows: dict[int, dict[int, int]] = {
            i: dict(row) for i, row in enumerate(a.rows) if row
        }
        self.cols: dict[int, set[int]] = {}
        for i, row in self.rows.items():
            for j in row:
                self.cols.setdefault(j, set()).add(i)
        self.threshold = (1 << lll_threshold_bits) if lll_threshold_bits else None
        self.delta = lll_delta
        self.oversized = False

    def row_axpy(self, dst: int, src: int, k: int) -> None:
        """row[dst] += k * row[src]."""
        rdst = self.rows.get(dst)
        if rdst is None:
            rdst = self.rows[dst] = {}
        for j, v in self.rows[src].items():
            new = rdst.get(j, 0) + k * v
            if new:
                rdst[j] = new
                self.cols.setdefault(j, set()).add(dst)
                if self.threshold and abs(new) > self.threshold:
                    self.oversized = True
            else:
                del rdst[j]
                self.cols[j].discard(dst)
        if not rdst:
            del self.rows[dst]

    def set_entry(self, i: int, j: int, v: int) -> None:
        row = self.rows.setdefault(i, {})
        if v:
            row[j] = v
            self.cols.setdefault(j, set()).add(i)
        else:
            row.pop(j, None)
            if j in self.cols:
                self.cols[j].discard(i)
        if not row:
            self.rows.pop(i, None)

    def drop_row(self, i: int) -> None:
        for j in self.rows.get(i, ()):
            self.cols[j].discard(i)
        self.rows.pop(i, None)

    def clear_pivot(self, r: int, c: int) -> tuple[int, int]:
        """Unimodular ops making (r, c) the unique entry of its row and column.

        Returns the final pivot position (the pivot may migrate during the
        euclidean passes).
        """
        while True:
            # make the pivot the unique nonzero of column c
            while len(self.cols[c]) > 1:
                r = min(self.cols[c], key=lambda rr: (abs(self.rows[rr][c]), rr))
                v = self.rows[r][c]
                for r2 in sorted(self.cols[c]):
                    if r2 == r:
                        continue
                    q = _nearest_quotient(self.rows[r2][c], v)
                    if q:
                        self.row_axpy(r2, r, -q)
            v = self.rows[r][c]
            others = [j for j in self.rows[r] if j != c]
            if not others:
                return r, c
            # column operations only touch row r here, since column c is clear
            for j in others:
                q = _nearest_quotient(self.rows[r][j], v)
                if q:
                    self.set_entry(r, j, self.rows[r][j] - q * v)
            rem = [j for j in self.rows[r] if j != c]
            if not rem:
                return r, c
            c = min(rem, key=lambda jj: (abs(self.rows[r][jj]), jj))

    def maybe_lll_compress(self, max_cols: int = 48) -> None:
        """Size-reduce the worst active columns when entries pass the barrier."""
        if not self.oversized:
            return
        self.oversized = False
        bad = sorted(
            (j for j, occ in self.cols.items()
             if occ and any(abs(self.rows[i][j]) > self.threshold for i in occ)),
        )[:max_cols]
        if len(bad) < 2:
            return
        support = sorted({i for j in bad for i in self.cols[j]})
        pos = {i: k for k, i in enumerate(support)}
        vecs = []
        for j in bad:
            vec = [0] * len(support)
            for i in self.cols[j]:
                vec[pos[i]] = self.rows[i][j]
            vecs.append(vec)
        try:
            reduced = lll_reduce(vecs, self.delta)
        except ValueError:
            return  # dependent columns; skip compression, correctness unaffected
        for j, vec in zip(bad, reduced):
            for i in sorted(self.cols[j]):
                self.set_entry(i, j, 0)
            for k, v in enumerate(vec):
                if v:
                    self.set_entry(support[k], j, v)


def snf(a: SparseIntMatrix, want_transforms: bool = False,
        lll_threshold_bits: int | None = 64,
        lll_delta: Fraction = Fraction(3, 4)) -> SnfResult:
    """Elementary divisors of a, with optional unimodular transforms.

    >>> snf(SparseIntMatrix.from_dense([[2, 0], [0, 3]])).divisors
    (1, 6)

    The transform-producing path runs a dense reduction and is intended for
    small matrices (verification); the default path is sparse and returns
    divisors only.
    """
    if want_transforms:
        u, d, v = snf_dense_with_transforms(a.to_dense(), a.nrows, a.ncols)
        divisors = tuple(d[i][i] for i in range(min(a.nrows, a.ncols)) if d[i][i])
        return SnfResult(divisors=divisors,
                         left=SparseIntMatrix.from_dense(u),
                         right=SparseIntMatrix.from_dense(v))
    red = _Reducer(a, lll_threshold_bits, lll_delta)
    diag: list[int] = []
    heap: list[tuple[int, int]] = []
    for i, row in red.rows.items():
        heappush(heap, (len(row), i))
    while red.rows:
        i = None
        while heap:
            size, cand = heappop(heap)
            row = red.rows.get(cand)
            if row is None:
                continue
            if len(row) != size:
                heappush(heap, (len(row), cand))
                continue
            i = cand
            break
        if i is None:
            i = min(red.rows)
        row = red.rows[i]
        c = min(row, key=lambda j: (abs(row[j]) != 1, len(red.cols[j]), abs(row[j]), j))
        affected = set(red.cols.get(c, ()))
        r, c = red.clear_pivot(i, c)
        diag.append(red.rows[r][c])
        red.drop_row(r)
        red.maybe_lll_compress()
        for i2 in sorted(affected & set(red.rows)):
            heappush(heap, (len(red.rows[i2]), i2))
    return SnfResult(divisors=_chain_normalize(diag))


def snf_dense_with_transforms(dense, nrows, ncols):
    """Textbook Smith reduction; returns (U, D, V) with U*A*V = D."""
    a = [list(row) for row in dense]
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def row_op(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def col_op(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    n = min(nrows, ncols)
    while t < n:
        # locate a pivot
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = _nearest_quotient(a[i][t], a[t][t])
                    row_op(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = _nearest_quotient(a[t][j], a[t][t])
                    col_op(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done and all(a[i][t] == 0 for i in range(t + 1, nrows)) \
                    and all(a[t][j] == 0 for j in range(t + 1, ncols)):
                # enforce divisibility of the remaining block
                offender = None
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if a[i][j] % a[t][t]:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                row_op(t, offender, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return u, a, v


def lll_reduce(basis: list[list[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """Exact LLL reduction of linearly independent integer column vectors."""
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    b = [list(v) for v in basis]
    n = len(b)
    if n == 0:
        return []

    def gso():
        star: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            vec = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = sum(Fraction(x) * y for x, y in zip(b[i], star[j])) / norms[j]
                vec = [x - mu[i][j] * y for x, y in zip(vec, star[j])]
            nrm = sum(x * x for x in vec)
            if nrm == 0:
                raise ValueError("input vectors are linearly dependent")
            star.append(vec)
            norms.append(nrm)
        return star, mu, norms

    star, mu, norms = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                r = int(mu[k][j] + Fraction(1, 2)) if mu[k][j] > 0 else -int(
                    -mu[k][j] + Fraction(1, 2))
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                star, mu, norms = gso()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            star, mu, norms = gso()
            k = max(k - 1, 1)
    return b


def rank_mod2(a: SparseIntMatrix) -> int:
    """Rank over GF(2) by bitset elimination."""
    pivots: dict[int, int] = {}
    for row in a.rows:
        mask = 0
        for j, v in row.items():
            if v & 1:
                mask |= 1 << j
        while mask:
            low = mask & -mask
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = mask
                break
            mask ^= piv
    return len(pivots)


def rank_rational(a: SparseIntMatrix) -> int:
    """Rank over the rationals by exact integer elimination."""
    rows: dict[int, dict[int, int]] = {}
    for i, row in enumerate(a.rows):
        if row:
            g = 0
            for v in row.values():
                g = gcd(g, v)
            rows[i] = {j: v // g for j, v in row.items()}
    cols: dict[int, set[int]] = {}
    for i, row in rows.items():
        for j in row:
            cols.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        i = min(rows, key=lambda r: (len(rows[r]), r))
        row = rows[i]
        c = min(row, key=lambda j: (len(cols.get(j, ())), abs(row[j]), j))
        v = row[c]
        for i2 in sorted(cols.get(c, ())):
            if i2 == i:
                continue
            row2 = rows[i2]
            w = row2[c]
            # row2 <- v*row2 - w*row  (rank-preserving since v != 0)
            for j, x in row.items():
                new = v * row2.get(j, 0) - w * x
                if new:
                    row2[j] = new
                    cols.setdefault(j, set()).add(i2)
                else:
                    row2.pop(j, None)
                    cols[j].discard(i2)
            for j in [j for j in row2 if j not in row]:
                row2[j] = v * row2[j]
            if row2:
                g = 0
                for x in row2.values():
                    g = gcd(g, x)
                for j in row2:
                    row2[j] //= g
            else:
                del rows[i2]
        for j in row:
            cols[j].discard(i)
        del rows[i]
        rank += 1
    return rank


def kernel_basis(a: SparseIntMatrix) -> SparseIntMatrix:
    """Primitive basis of the integer kernel lattice, as matrix columns."""
    cols = a.columns()
    transform: list[dict[int, int]] = [{j: 1} for j in range(a.ncols)]
    rowocc: dict[int, set[int]] = {}
    for j, col in enumerate(cols):
        for i in col:
            rowocc.setdefault(i, set()).add(j)
    active = set(range(a.ncols))

    def col_axpy(dst: int, src: int, k: int) -> None:
        for i, v in cols[src].items():
            new = cols[dst].get(i, 0) + k * v
            if new:
                cols[dst][i] = new
                rowocc.setdefault(i, set()).add(dst)
            else:
                del cols[dst][i]
                rowocc[i].discard(dst)
        tdst = transform[dst]
        for j, v in transform[src].items():
            new = tdst.get(j, 0) + k * v
            if new:
                tdst[j] = new
            else:
                del tdst[j]

    # rowocc tracks occupancy by *active* columns only
    heap: list[tuple[int, int]] = []
    for i, occ in rowocc.items():
        heappush(heap, (len(occ), i))
    while heap:
        size, i = heappop(heap)
        occ = rowocc.get(i)
        if occ is None or not occ:
            continue
        if len(occ) != size:
            heappush(heap, (len(occ), i))
            continue
        while len(rowocc[i]) > 1:
            occ = sorted(rowocc[i])
            j = min(occ, key=lambda jj: (abs(cols[jj][i]), jj))
            v = cols[j][i]
            for j2 in occ:
                if j2 == j:
                    continue
                q = _nearest_quotient(cols[j2][i], v)
                if q:
                    col_axpy(j2, j, -q)
        (j,) = rowocc.pop(i)
        active.discard(j)
        for i2 in cols[j]:
            s = rowocc.get(i2)
            if s is not None:
                s.discard(j)
                heappush(heap, (len(s), i2))

    kernel_cols = sorted(j for j in active if not cols[j])
    out = SparseIntMatrix(a.ncols, len(kernel_cols))
    for k, j in enumerate(kernel_cols):
        for rowidx, v in transform[j].items():
            out.rows[rowidx][k] = v
    return out


def solve_in_basis(k: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    """Integer solution M of K * M = B for K with independent columns.

    Raises ValueError when some column of B lies outside the integer column
    span of K.
    """
    if k.nrows != b.nrows:
        raise ValueError("row count mismatch")
    cols = k.columns()
    v_transform: list[dict[int, int]] = [{j: 1} for j in range(k.ncols)]
    rowocc: dict[int, set[int]] = {}
    for j, col in enumerate(cols):
        for i in col:
            rowocc.setdefault(i, set()).add(j)
    active = set(range(k.ncols))
    pivots: list[tuple[int, int]] = []

    def col_axpy(dst, src, kk):
        for i, v in cols[src].items():
            new = cols[dst].get(i, 0) + kk * v
            if new:
                cols[dst][i] = new
                rowocc.setdefault(i, set()).add(dst)
            else:
                del cols[dst][i]
                rowocc[i].discard(dst)
        t = v_transform[dst]
        for j, v in v_transform[src].items():
            new = t.get(j, 0) + kk * v
            if new:
                t[j] = new
            else:
                del t[j]

    for i in sorted(rowocc):
        occ = sorted(rowocc.get(i, set()) & active)
        if not occ:
            continue
        while len(occ) > 1:
            j = min(occ, key=lambda jj: (abs(cols[jj][i]), jj))
            v = cols[j][i]
            for j2 in occ:
                if j2 == j:
                    continue
                q = _nearest_quotient(cols[j2][i], v)
                if q:
                    col_axpy(j2, j, -q)
            occ = sorted(rowocc.get(i, set()) & active)
        j = occ[0]
        pivots.append((i, j))
        active.discard(j)

    if any(cols[j] for j in active):
        raise ValueError("K has linearly dependent columns")

    out = SparseIntMatrix(k.ncols, b.ncols)
    bcols = b.columns()
    for col_idx, bcol in enumerate(bcols):
        working: dict[int, Fraction] = {i: Fraction(v) for i, v in bcol.items()}
        y: dict[int, Fraction] = {}
        for i, j in pivots:
            coeff = working.get(i)
            if not coeff:
                continue
            yj = coeff / cols[j][i]
            y[j] = yj
            for i2, v in cols[j].items():
                new = working.get(i2, Fraction(0)) - yj * v
                if new:
                    working[i2] = new
                else:
                    working.pop(i2, None)
        if working:
            raise ValueError("column of B outside the span of K")
        # map back through the unimodular column transform
        m_col: dict[int, Fraction] = {}
        for j, yj in y.items():
            for j0, v in v_transform[j].items():
                new = m_col.get(j0, Fraction(0)) + yj * v
                if new:
                    m_col[j0] = new
                else:
                    m_col.pop(j0, None)
        for j0, v in m_col.items():
            if v.denominator != 1:
                raise ValueError("B is not in the integer span of K")
            out.rows[j0][col_idx] = int(v)
    return out


def homology_of_complex(dims: dict[int, int],
                        mats: dict[int, SparseIntMatrix],
                        with_torsion: bool = True,
                        lll_threshold_bits: int | None = 64) -> dict[int, HomologyGroup]:
    """Homology of a chain complex; mats[k] maps C_k to C_{k-1}.

    Degrees absent from `dims` are zero groups; `mats` entries for boundary
    maps into or out of zero groups may be omitted.
    """
    for k, d in mats.items():
        if d.ncols != dims.get(k, 0) or d.nrows != dims.get(k - 1, 0):
            raise ValueError(f"boundary matrix shape mismatch in degree {k}")
    for k in sorted(mats):
        if k + 1 in mats:
            if not mats[k].matmul(mats[k + 1]).is_zero():
                raise ValueError(f"d_{k} * d_{k + 1} != 0")
    snfs: dict[int, SnfResult] = {}

    def snf_of(k: int) -> SnfResult:
        if k not in snfs:
            d = mats.get(k)
            snfs[k] = (SnfResult(divisors=()) if d is None
                       else snf(d, lll_threshold_bits=lll_threshold_bits))
        return snfs[k]

    out: dict[int, HomologyGroup] = {}
    for k, dim in sorted(dims.items()):
        r_in = snf_of(k + 1) if (k + 1) in mats else SnfResult(divisors=())
        r_out = snf_of(k) if k in mats else SnfResult(divisors=())
        free = dim - r_out.rank - r_in.rank
        if free < 0:
            raise ValueError(f"negative free rank in degree {k}")
        torsion = tuple(t for t in r_in.divisors if t > 1) if with_torsion else ()
        out[k] = HomologyGroup(free_rank=free, torsion=torsion)
    return out
