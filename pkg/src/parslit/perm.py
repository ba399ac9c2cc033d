"""
Exact permutation algebra on {0, ..., p}.

A permutation is stored in one-line form as a tuple: `a[i]` is the image of
`i`.  Cycle form exists only for I/O and tests.  A cycle `(i_l ... i_1 i_0)`
sends i_0 to i_1, i_1 to i_2, and so on (letters are applied right to left),
so the rotation `(p ... 1 0)` has one-line form `(1, 2, ..., p, 0)`.

Products compose right to left: `compose(a, b)(i) == a(b(i))`.
"""
from __future__ import annotations

from typing import Iterable, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def rotation(n: int) -> Perm:
    """The n-cycle sending i to i+1 mod n; `rotation(p + 1)` is omega_p."""
    return tuple((i + 1) % n for i in range(n)) if n else ()


def omega(p: int) -> Perm:
    """The long rotation of degree p + 1."""
    return rotation(p + 1)


def transposition(n: int, i: int, j: int) -> Perm:
    word = list(range(n))
    word[i], word[j] = word[j], word[i]
    return tuple(word)


def is_perm(word: Sequence[int]) -> bool:
    n = len(word)
    return sorted(word) == list(range(n))


def compose(a: Perm, b: Perm) -> Perm:
    """The product a * b, applying b first: (a * b)(i) = a(b(i)).

    >>> compose((1, 0, 2), (2, 1, 0))
    (2, 0, 1)
    """
    if len(a) != len(b):
        raise ValueError(f"degree mismatch: {len(a)} != {len(b)}")
    return tuple(a[x] for x in b)


def compose_all(perms: Iterable[Perm]) -> Perm:
    """Product of a sequence, first element leftmost (applied last)."""
    result: Perm | None = None
    for a in perms:
        result = a if result is None else compose(result, a)
    if result is None:
        raise ValueError("empty product has no degree")
    return result


def inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def cycles(a: Perm) -> list[tuple[int, ...]]:
    """Orbits of a, each traversed from its minimum, sorted by minimum.

    The traversal order is (min, a(min), a(a(min)), ...); in the right-to-left
    cycle writing this is the cycle read from its rightmost letter.
    """
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i]:
            continue
        orbit = []
        j = i
        while not seen[j]:
            seen[j] = True
            orbit.append(j)
            j = a[j]
        out.append(tuple(orbit))
    return out


def from_cycles(n: int, cyc: Iterable[Sequence[int]]) -> Perm:
    """Build a permutation of degree n from cycles in right-to-left writing.

    >>> from_cycles(5, [(4, 1, 0)])  # sends 0 to 1, 1 to 4 and 4 to 0
    (1, 4, 2, 3, 0)
    """
    word = list(range(n))
    for c in cyc:
        if len(c) < 2:
            continue
        rev = list(reversed(c))  # traversal order: rev[k] maps to rev[k+1]
        for k, x in enumerate(rev):
            word[x] = rev[(k + 1) % len(rev)]
    return tuple(word)


def ncyc(a: Perm) -> int:
    """Number of cycles, fixed points included."""
    seen = [False] * len(a)
    count = 0
    for i in range(len(a)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = a[j]
    return count


def word_length(a: Perm) -> int:
    """Minimal number of transpositions multiplying to a."""
    return len(a) - ncyc(a)


def sign(a: Perm) -> int:
    return -1 if word_length(a) % 2 else 1


def delete_letter(j: int, a: Perm) -> Perm:
    """Remove the letter j from its cycle and shift the letters above j down.

    This is the simplicial operator D_j of degree S_{p+1} -> S_p.

    >>> delete_letter(1, (1, 2, 0))  # drop 1 from the 3-cycle (2 1 0)
    (1, 0)
    """
    n = len(a)
    if not 0 <= j < n:
        raise ValueError(f"letter {j} out of range for degree {n}")
    if n < 2:
        raise ValueError("cannot delete from a degree-1 permutation")
    word = []
    for x in range(n - 1):
        y = a[x if x < j else x + 1]
        if y == j:
            y = a[j]
        word.append(y if y < j else y - 1)
    return tuple(word)


def insert_letter(j: int, a: Perm) -> Perm:
    """Shift letters >= j up by one and add j as a fixed point.

    This is the simplicial operator S_j of degree S_p -> S_{p+1}; it is a
    section of `delete_letter` and maps transpositions to transpositions.
    """
    n = len(a)
    if not 0 <= j <= n:
        raise ValueError(f"letter {j} out of range for degree {n + 1}")
    word = []
    for x in range(n + 1):
        if x == j:
            word.append(j)
            continue
        y = a[x if x < j else x - 1]
        word.append(y if y < j else y + 1)
    return tuple(word)


def perm_rank(a: Perm) -> int:
    """Lehmer code of a as a single integer in [0, n!).

    Usable as a compact sort/hash key for degrees up to about 20.
    """
    n = len(a)
    rank = 0
    remaining = list(a)
    for i in range(n):
        x = remaining[0]
        smaller = sum(1 for y in remaining[1:] if y < x)
        rank = rank * (n - i) + smaller
        remaining = [y for y in remaining[1:]]
    return rank


def format_oneline(a: Perm) -> str:
    return ",".join(str(x) for x in a)


def parse_oneline(text: str) -> Perm:
    word = tuple(int(tok) for tok in text.strip().split(","))
    if not is_perm(word):
        raise ValueError(f"not a permutation: {text!r}")
    return word


def format_cycles(a: Perm, drop_fixed: bool = False) -> str:
    parts = []
    for orbit in cycles(a):
        if len(orbit) == 1 and drop_fixed:
            continue
        parts.append("(" + " ".join(str(x) for x in reversed(orbit)) + ")")
    return "".join(parts) or "()"


def parse_cycles(text: str, n: int) -> Perm:
    text = text.strip()
    if not text or text == "()":
        return identity(n)
    cyc = []
    for chunk in text.replace(")(", ")|(").split("|"):
        chunk = chunk.strip()
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError(f"malformed cycle text: {text!r}")
        body = chunk[1:-1].replace(",", " ").split()
        cyc.append(tuple(int(tok) for tok in body))
    letters = [x for c in cyc for x in c]
    if len(set(letters)) != len(letters) or any(not 0 <= x < n for x in letters):
        raise ValueError(f"bad cycle letters in {text!r} for degree {n}")
    return from_cycles(n, cyc)
