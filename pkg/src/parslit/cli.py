"""
Command line interface for the slit-surface homology pipeline.

Subcommands cover cell listings, boundary matrices, homology tables, the
fundamental cycle, a vector-graphics renderer for slit pictures, and a
side-by-side comparison against the known result tables.  Bases and
matrices can be cached on disk, keyed by format version and surface type.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from .cells import (
    HomCell,
    cell_text,
    is_nondegenerate,
    ncyc,
    norm,
    parse_cell_text,
    to_bar,
)
from .complexes import (
    MAX_H,
    BoundaryMatrices,
    CellBasis,
    assemble_matrices,
    basis_from_text,
    basis_to_text,
    generate_basis,
)
from .exactlin import SparseIntMatrix
from .homology import (
    COEFFS,
    ModuliHomology,
    compute_E1,
    compute_moduli_homology,
)
from .orientation import (
    build_fundamental_cycle,
    fundamental_cycle_text,
    verify_fundamental_cycle,
)
from .perm import omega

CACHE_ENV = "PARSLIT_CACHE"
CACHE_FORMAT = "v1"
LONG_H = 5

# Known homology rows, H_0 upward, as printed by HomologyGroup.
EXPECTED_HOMOLOGY: dict[tuple[int, int, bool], tuple[str, ...]] = {
    (0, 1, True): ("Z",),
    (0, 2, True): ("Z", "Z"),
    (0, 3, True): ("Z", "Z"),
    (1, 0, True): ("Z", "Z"),
    (1, 1, True): ("Z", "Z", "Z/2"),
    (1, 2, True): ("Z", "Z + Z/2", "Z/2 + Z/2", "Z/2"),
    (2, 0, True): ("Z", "Z/10", "Z/2", "Z + Z/2", "Z/6"),
    (1, 2, False): ("Z", "Z", "Z/2 + Z/2 + Z/2", "Z", "Z"),
    (1, 3, True): ("Z", "Z + Z/2", "Z/2 + Z/2", "Z + Z/2 + Z/2", "Z", "Z"),
    (2, 1, True): ("Z", "Z/10", "Z + Z/2", "Z + Z + Z/2 + Z/2",
                   "Z/6 + Z/6", "Z", "Z"),
}
LONG_KEYS = {(1, 3, True), (2, 1, True)}

# Cell counts N_{p,q}(5, m) for q = 5, 4 and p = 0..10.
EXPECTED_E0_H5 = {
    (1, 5): (0, 0, 1, 240, 6170, 51115, 195264, 394240, 435680, 249480, 57960),
    (1, 4): (0, 0, 0, 216, 7840, 76140, 320880, 694148, 808192, 482328, 115920),
    (3, 5): (0, 0, 0, 0, 640, 12425, 74610, 202825, 278600, 189000, 50400),
    (3, 4): (0, 0, 0, 0, 800, 18500, 122700, 357280, 516880, 365400, 100800),
    (5, 5): (0, 0, 0, 0, 0, 0, 1296, 7735, 16520, 15120, 5040),
    (5, 4): (0, 0, 0, 0, 0, 0, 2160, 13692, 30688, 29232, 10080),
}

# Kernel ranks of the vertical boundary at q = 5 for p = 0..10.
EXPECTED_E1_H5 = {
    1: (0, 0, 1, 60, 650, 2860, 6588, 8708, 6678, 2772, 483),
    3: (0, 0, 0, 0, 70, 700, 2520, 4480, 4270, 2100, 420),
    5: (0, 0, 0, 0, 0, 0, 1, 14, 56, 84, 42),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slit-homology",
        description="Homology of moduli spaces of slit surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--g", type=int, default=None, help="genus")
        sp.add_argument("--m", type=int, default=None, help="punctures")
        sp.add_argument("--h", type=int, default=None, help="h = 2g + m")
        sp.add_argument("--non-permutable", action="store_true",
                        help="use numbered punctures")
        sp.add_argument("--cache", type=str, default=None,
                        help=f"cache directory (default ${CACHE_ENV})")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--lll-bits", type=int, default=64,
                        help="coefficient size that triggers lattice reduction")
        sp.add_argument("--long", action="store_true",
                        help="allow long-running cases (h >= 5)")

    add_common(sub.add_parser("cells", help="generate and count the cells"))
    add_common(sub.add_parser("matrices", help="assemble boundary matrices"))

    sp = sub.add_parser("homology", help="homology of the moduli space")
    add_common(sp)
    sp.add_argument("--coeff", choices=COEFFS + ("all",), default="z")
    sp.add_argument("--method", choices=("spectral", "total", "both"),
                    default="spectral")

    sp = sub.add_parser("fundamental-class", help="fundamental cycle of the pair")
    add_common(sp)
    sp.add_argument("--out", type=str, default=None,
                    help="write the cycle to this file instead of stdout")

    sp = sub.add_parser("render", help="draw the slit picture of a cell")
    sp.add_argument("--cell", required=True,
                    help="cell in text form, e.g. '4 2 : 3,4,1,2,0 ; ... ; 1,2,3,4,0'")
    sp.add_argument("--a", type=str, default=None,
                    help="p+1 comma-separated positive weights for the rows")
    sp.add_argument("--b", type=str, default=None,
                    help="q+1 comma-separated positive weights for the columns")
    sp.add_argument("--out", type=str, default=None,
                    help="output SVG file (default stdout)")

    sp = sub.add_parser("tables", help="compare computed results to the records")
    add_common(sp)
    sp.add_argument("--max-h", type=int, default=4)
    return parser


def resolve_type(args) -> tuple[int, int, int, bool]:
    """(g, m, h, permutable) from the flags, enforcing h = 2g + m."""
    g, m, h = args.g, args.m, args.h
    if m is None:
        if g is not None and h is not None:
            m = h - 2 * g
        else:
            raise SystemExit("error: --m is required (or give both --g and --h)")
    if g is None:
        if h is None:
            raise SystemExit("error: give --g or --h")
        g, rest = divmod(h - m, 2)
        if rest:
            raise SystemExit(f"error: h = {h} and m = {m} need h - m even")
    if h is None:
        h = 2 * g + m
    if h != 2 * g + m:
        raise SystemExit(f"error: inconsistent type: h = {h} != 2g + m = {2 * g + m}")
    if g < 0 or m < 0 or h < 1:
        raise SystemExit("error: need g, m >= 0 and h >= 1")
    if h > MAX_H:
        raise SystemExit(f"error: h = {h} exceeds the supported bound {MAX_H}")
    if h >= LONG_H and not args.long:
        raise SystemExit(f"error: h = {h} is a long-running case; pass --long")
    permutable = not args.non_permutable
    if not permutable and m < 2:
        raise SystemExit("error: --non-permutable needs m >= 2")
    return g, m, h, permutable


def cache_root(flag: str | None) -> Path | None:
    if flag:
        return Path(flag)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


@contextmanager
def cache_lock(directory: Path):
    """One job at a time per cache key, via an exclusive lock file."""
    directory.mkdir(parents=True, exist_ok=True)
    lock = directory / "lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise SystemExit(
            f"error: cache {directory} is locked by another job "
            f"(remove {lock} if it is stale)"
        )
    try:
        os.write(fd, f"{os.getpid()}\n".encode())
        os.close(fd)
        yield directory
    finally:
        lock.unlink(missing_ok=True)


def _check_meta(directory: Path, h: int, m: int, numbered: bool) -> None:
    meta = {"format": f"parslit-cache {CACHE_FORMAT}", "h": h, "m": m,
            "numbered": numbered}
    meta_file = directory / "meta.json"
    if meta_file.exists():
        if json.loads(meta_file.read_text()) != meta:
            raise SystemExit(
                f"error: cache {directory} was written with a different "
                "configuration; refusing to overwrite"
            )
    else:
        meta_file.write_text(json.dumps(meta, sort_keys=True) + "\n")


def cache_dir(root: Path, h: int, m: int, numbered: bool) -> Path:
    kind = "numbered" if numbered else "plain"
    return root / f"{CACHE_FORMAT}-h{h}-m{m}-{kind}"


def load_basis(root: Path | None, h: int, m: int, numbered: bool) -> CellBasis:
    if root is None:
        return generate_basis(h, m, numbered=numbered)
    directory = cache_dir(root, h, m, numbered)
    with cache_lock(directory):
        _check_meta(directory, h, m, numbered)
        cells_file = directory / "cells.txt"
        if cells_file.exists():
            return basis_from_text(cells_file.read_text())
        basis = generate_basis(h, m, numbered=numbered)
        cells_file.write_text(basis_to_text(basis))
        return basis


def load_matrices(root: Path | None, basis: CellBasis,
                  twisted: bool) -> BoundaryMatrices:
    if root is None:
        return assemble_matrices(basis, twisted=twisted)
    directory = cache_dir(root, basis.h, basis.m, basis.numbered)
    prefix = "tw" if twisted else "un"
    with cache_lock(directory):
        _check_meta(directory, basis.h, basis.m, basis.numbered)
        index_file = directory / f"{prefix}-matrices.json"
        if index_file.exists():
            index = json.loads(index_file.read_text())
            mats = {}
            for kind in ("vertical", "horizontal"):
                mats[kind] = {
                    (p, q): SparseIntMatrix.from_text(
                        (directory / f"{prefix}-{kind}-{p}-{q}.txt").read_text()
                    )
                    for p, q in index[kind]
                }
            return BoundaryMatrices(basis=basis, vertical=mats["vertical"],
                                    horizontal=mats["horizontal"])
        mats = assemble_matrices(basis, twisted=twisted)
        index = {"vertical": sorted(mats.vertical),
                 "horizontal": sorted(mats.horizontal)}
        for kind, table in (("vertical", mats.vertical),
                            ("horizontal", mats.horizontal)):
            for (p, q), mat in table.items():
                path = directory / f"{prefix}-{kind}-{p}-{q}.txt"
                path.write_text(mat.to_text())
        index_file.write_text(json.dumps(index) + "\n")
        return mats


def cmd_cells(args) -> int:
    g, m, h, permutable = resolve_type(args)
    basis = load_basis(cache_root(args.cache), h, m, not permutable)
    print(f"cells for h = {h}, m = {m}, "
          f"{'permutable' if permutable else 'numbered'} punctures")
    print(f"{'p':>4} {'q':>4} {'cells':>8}")
    for (p, q) in sorted(basis.cells):
        print(f"{p:>4} {q:>4} {basis.dim(p, q):>8}")
    print(f"total {basis.total_cells()}")
    return 0


def cmd_matrices(args) -> int:
    g, m, h, permutable = resolve_type(args)
    root = cache_root(args.cache)
    basis = load_basis(root, h, m, not permutable)
    twisted = permutable and m >= 2
    mats = load_matrices(root, basis, twisted)
    print(f"boundary matrices for h = {h}, m = {m}"
          + (" (twisted)" if twisted else ""))
    print(f"{'kind':>10} {'p':>4} {'q':>4} {'rows':>8} {'cols':>8} {'nnz':>10}")
    for kind, table in (("vertical", mats.vertical),
                        ("horizontal", mats.horizontal)):
        for (p, q) in sorted(table):
            mat = table[(p, q)]
            print(f"{kind:>10} {p:>4} {q:>4} {mat.nrows:>8} {mat.ncols:>8} "
                  f"{mat.nnz():>10}")
    return 0


def _homology_line(result: ModuliHomology) -> str:
    groups = ", ".join(str(gp) for gp in result.as_tuple())
    return (f"H_*(type ({result.g}, {result.m}), "
            f"{'permutable' if result.permutable else 'numbered'}, "
            f"{result.coeff}) = ({groups})")


def cmd_homology(args) -> int:
    g, m, h, permutable = resolve_type(args)
    root = cache_root(args.cache)
    basis = load_basis(root, h, m, not permutable)
    twisted = permutable and m >= 2
    mats = load_matrices(root, basis, twisted)
    coeffs = list(COEFFS) if args.coeff == "all" else [args.coeff]
    methods = (["spectral", "total"] if args.method == "both"
               else [args.method])
    status = 0
    for coeff in coeffs:
        results = []
        for method in methods:
            result = compute_moduli_homology(
                g, m, permutable=permutable, coeff=coeff, method=method,
                basis=basis, mats=mats, threads=args.threads,
                lll_bits=args.lll_bits,
            )
            results.append(result)
            print(_homology_line(result))
            print(result.format_record())
        if len(results) == 2 and results[0].groups != results[1].groups:
            print(f"mismatch between spectral and total methods for {coeff}",
                  file=sys.stderr)
            status = 1
    return status


def cmd_fundamental(args) -> int:
    g, m, h, permutable = resolve_type(args)
    mu = build_fundamental_cycle(g, m)
    verify_fundamental_cycle(mu, h, m)
    text = fundamental_cycle_text(mu)
    print(f"fundamental cycle of type ({g}, {m}): {len(mu)} terms, "
          "boundary verified")
    if args.out:
        Path(args.out).write_text(text)
        print(f"written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _degeneracy_reason(c: HomCell, h: int, m: int) -> str:
    p, q = c.p, c.q
    sig = c.sigmas
    if any(s[p] != 0 for s in sig):
        return "some sigma_i does not send the top letter to 0"
    if sig[q] != omega(p):
        return "sigma_0 is not the long cycle"
    if any(sig[i + 1] == sig[i] for i in range(q)):
        return "two consecutive sigma_i coincide (a trivial bar entry)"
    for k in range(p):
        if all(s[k] == k + 1 for s in sig):
            return f"letter {k} is merely shifted by every sigma_i"
    return f"the norm of the cell is not {h}"


def _parse_weights(text: str | None, count: int, name: str) -> list[Fraction]:
    if text is None:
        return [Fraction(1)] * count
    weights = [Fraction(tok) for tok in text.split(",")]
    if len(weights) != count:
        raise SystemExit(f"error: {name} needs {count} weights")
    if any(w <= 0 for w in weights):
        raise SystemExit(f"error: {name} weights must be positive")
    return weights


def render_svg(cell: HomCell, a: list[Fraction], b: list[Fraction]) -> str:
    """Deterministic SVG drawing of the parallel slit domain of a cell.

    The plane is divided into p + 1 horizontal bands (weights a, bottom up)
    and q + 1 vertical bands (weights b, right to left).  The slits of the
    bar entry tau_k run from the right edge to the kth vertical line; slits
    forming one pair share a label.
    """
    p, q = cell.p, cell.q
    width, height, margin = 480.0, 320.0, 40.0
    x0, y0 = margin, margin
    x1, y1 = margin + width, margin + height

    total_a = sum(a)
    levels = []  # y coordinate of horizontal level j = 0..p+1, bottom up
    acc = Fraction(0)
    for w in [Fraction(0)] + list(a):
        acc += w
        levels.append(y1 - float(height) * float(acc / total_a))
    total_b = sum(b)
    columns = []  # x coordinate of vertical line k = 0..q+1, right to left
    acc = Fraction(0)
    for w in [Fraction(0)] + list(b):
        acc += w
        columns.append(x1 - float(width) * float(acc / total_b))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{x1 + margin:.2f}" height="{y1 + margin:.2f}" '
        f'viewBox="0 0 {x1 + margin:.2f} {y1 + margin:.2f}">',
        f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{width:.2f}" '
        f'height="{height:.2f}" fill="white" stroke="black" '
        'stroke-width="1.5"/>',
    ]
    # grid pattern: interior horizontal levels and vertical columns
    for j in range(1, p + 1):
        y = levels[j]
        out.append(f'<line x1="{x0:.2f}" y1="{y:.2f}" x2="{x1:.2f}" '
                   f'y2="{y:.2f}" stroke="#cccccc" stroke-width="0.6"/>')
    for k in range(1, q + 1):
        x = columns[k]
        out.append(f'<line x1="{x:.2f}" y1="{y0:.2f}" x2="{x:.2f}" '
                   f'y2="{y1:.2f}" stroke="#cccccc" stroke-width="0.6"/>')
    # numbering of the rectangles of the bottom-up bands
    for j in range(p + 1):
        yc = (levels[j] + levels[j + 1]) / 2.0
        out.append(f'<text x="{x0 - 18.0:.2f}" y="{yc + 4.0:.2f}" '
                   f'font-size="12" font-family="monospace">{j}</text>')
    # slits of the bar entries, pairs sharing a label
    if q > 0:
        bar = to_bar(cell)
        label_index = 0
        for k in range(1, q + 1):
            tau = bar.taus[q - k]  # taus lists tau_q first
            orbits: dict[int, list[int]] = {}
            for letter in range(1, p + 1):
                if tau[letter] != letter:
                    orbits.setdefault(
                        min(_orbit_of(tau, letter)), []).append(letter)
            for key in sorted(orbits):
                label = _pair_label(label_index)
                label_index += 1
                for letter in sorted(orbits[key]):
                    y = levels[letter]
                    x = columns[k]
                    out.append(
                        f'<line x1="{x:.2f}" y1="{y:.2f}" x2="{x1:.2f}" '
                        f'y2="{y:.2f}" stroke="black" stroke-width="2.5"/>'
                    )
                    out.append(
                        f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.0" '
                        'fill="black"/>'
                    )
                    out.append(
                        f'<text x="{x + 5.0:.2f}" y="{y - 5.0:.2f}" '
                        f'font-size="12" font-family="monospace">{label}</text>'
                    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _orbit_of(tau, letter: int) -> list[int]:
    orbit = [letter]
    j = tau[letter]
    while j != letter:
        orbit.append(j)
        j = tau[j]
    return orbit


def _pair_label(index: int) -> str:
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    label = letters[index % 26]
    if index >= 26:
        label += str(index // 26)
    return label


def cmd_render(args) -> int:
    cell = parse_cell_text(args.cell)
    if not isinstance(cell, HomCell):
        cell = cell.cell
    p, q = cell.p, cell.q
    if q > 0:
        h = norm(cell)
        m = ncyc(cell.sigma_q) - 1
        if not is_nondegenerate(cell, h, m):
            raise SystemExit(
                f"error: degenerate cell: {_degeneracy_reason(cell, h, m)}"
            )
    a = _parse_weights(args.a, p + 1, "--a")
    b = _parse_weights(args.b, q + 1, "--b")
    svg = render_svg(cell, a, b)
    if args.out:
        Path(args.out).write_text(svg)
        print(f"written to {args.out}")
    else:
        sys.stdout.write(svg)
    return 0


def cmd_tables(args) -> int:
    max_h = args.max_h
    if max_h >= LONG_H and not args.long:
        raise SystemExit(f"error: --max-h {max_h} needs --long")
    root = cache_root(args.cache)
    failures = 0

    def report(name: str, expected, computed) -> None:
        nonlocal failures
        ok = expected == computed
        if not ok:
            failures += 1
        print(f"[{'pass' if ok else 'FAIL'}] {name}")
        if not ok:
            print(f"       expected {expected}")
            print(f"       computed {computed}")

    def row_order(kv):
        (g, m, permutable), _ = kv
        return (2 * g + m, g, m, not permutable)

    for (g, m, permutable), expected in sorted(EXPECTED_HOMOLOGY.items(),
                                               key=row_order):
        h = 2 * g + m
        if h > max_h:
            continue
        if (g, m, permutable) in LONG_KEYS and not args.long:
            continue
        basis = load_basis(root, h, m, not permutable)
        twisted = permutable and m >= 2
        mats = load_matrices(root, basis, twisted)
        result = compute_moduli_homology(
            g, m, permutable=permutable, basis=basis, mats=mats,
            threads=args.threads, lll_bits=args.lll_bits,
        )
        computed = tuple(str(gp) for gp in result.as_tuple())
        kind = "permutable" if permutable else "numbered"
        report(f"homology of type ({g}, {m}), {kind}", expected, computed)

    if args.long and max_h >= LONG_H:
        for m in (1, 3, 5):
            basis = load_basis(root, 5, m, False)
            for q in (5, 4):
                computed = tuple(basis.dim(p, q) for p in range(11))
                report(f"cell counts h = 5, m = {m}, q = {q}",
                       EXPECTED_E0_H5[(m, q)], computed)
            mats = load_matrices(root, basis, m >= 2)
            e1 = compute_E1(mats, threads=args.threads)
            computed = tuple(e1.rank(p) for p in range(11))
            report(f"kernel ranks h = 5, m = {m}, q = 5",
                   EXPECTED_E1_H5[m], computed)

    print(f"{failures} failures" if failures else "all rows pass")
    return 1 if failures else 0


COMMANDS = {
    "cells": cmd_cells,
    "matrices": cmd_matrices,
    "homology": cmd_homology,
    "fundamental-class": cmd_fundamental,
    "render": cmd_render,
    "tables": cmd_tables,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
