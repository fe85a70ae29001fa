"""Partitions, pre-diagrams and border strips.

Partitions and pre-diagrams are plain tuples of row lengths, top row first.
The empty partition ``()`` is a valid partition of 0.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, NamedTuple, Sequence

Partition = tuple[int, ...]
PreDiagram = tuple[int, ...]


class BorderStripResult(NamedTuple):
    diagram: Partition
    strip_height: int


class WrapResult(NamedTuple):
    final: PreDiagram
    move_count: int
    is_young: bool


def is_partition(rows: Sequence[int]) -> bool:
    if any(r < 1 for r in rows):
        return False
    return all(rows[i] >= rows[i + 1] for i in range(len(rows) - 1))


def is_prediagram(rows: Sequence[int]) -> bool:
    if not rows:
        return True
    if rows[-1] == 0 or any(r < 0 for r in rows):
        return False
    ascents = sum(1 for i in range(len(rows) - 1) if rows[i + 1] > rows[i])
    return ascents <= 1


def as_partition(rows: Sequence[int]) -> Partition:
    """Validate ``rows`` and return it as a canonical tuple (trailing zeros dropped)."""
    rows = tuple(int(r) for r in rows)
    while rows and rows[-1] == 0:
        rows = rows[:-1]
    if not is_partition(rows):
        raise ValueError(f"not a partition: {rows}")
    return rows


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse-lexicographic order, ``(n,)`` first."""
    if n < 0:
        return
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partitions_list(n: int) -> tuple[Partition, ...]:
    return tuple(partitions(n))


def two_row_partitions(n: int) -> Iterator[tuple[int, int]]:
    """All ``(a, b)`` with ``a >= b >= 0`` and ``a + b = n``, by ascending ``b``."""
    for b in range(n // 2 + 1):
        yield n - b, b


def two_row(a: int, b: int) -> Partition:
    return (a, b) if b > 0 else ((a,) if a > 0 else ())


def conjugate(shape: Partition) -> Partition:
    if not shape:
        return ()
    return tuple(sum(1 for r in shape if r > j) for j in range(shape[0]))


def class_size(cycle_type: Partition) -> int:
    """Number of permutations of the given cycle type: n!/prod(k^m_k m_k!)."""
    n = sum(cycle_type)
    counts = Counter(cycle_type)
    return factorial(n) // prod(k**m * factorial(m) for k, m in counts.items())


def hook_numbers(shape: Sequence[int]) -> tuple[int, ...]:
    """First-column hook numbers ``rows[i] + r - i`` (1-indexed i) of a pre-diagram."""
    r = len(shape)
    return tuple(shape[i] + r - 1 - i for i in range(r))


def content_sum(shape: Sequence[int]) -> int:
    """Sum of box contents ``row - column`` (both 1-indexed)."""
    return sum(i * l - l * (l + 1) // 2 for i, l in enumerate(shape, start=1))


def f_shift(mu: Partition, k: int, i: int) -> PreDiagram:
    """Add a row segment of length ``k`` starting at row ``i`` (1-indexed) of ``mu``."""
    r = len(mu)
    if k < 1:
        raise ValueError("k must be positive")
    if not 1 <= i <= r + k:
        raise ValueError(f"row index {i} outside [1, {r + k}]")
    if i <= r:
        rows = list(mu)
        rows[i - 1] += k
        return tuple(rows)
    return tuple(mu) + (0,) * (i - r - 1) + (k,)


def wrap(shape: Sequence[int]) -> WrapResult:
    """Apply the wrapping moves until none applies.

    A move at ``j`` replaces rows ``(s_j, s_{j+1})`` by ``(s_{j+1} - 1, s_j + 1)``
    and is allowed when ``s_{j+1} >= s_j + 2``. At most one move applies at a time.
    """
    rows = list(shape)
    if not is_prediagram(rows):
        raise ValueError(f"not a pre-diagram: {tuple(shape)}")
    moves = 0
    while True:
        j = next((j for j in range(len(rows) - 1) if rows[j + 1] >= rows[j] + 2), None)
        if j is None:
            break
        rows[j], rows[j + 1] = rows[j + 1] - 1, rows[j] + 1
        moves += 1
    final = tuple(rows)
    is_young = all(final[i] >= final[i + 1] for i in range(len(final) - 1))
    return WrapResult(final, moves, is_young)


def contains(lam: Sequence[int], mu: Sequence[int]) -> bool:
    if len(mu) > len(lam):
        return False
    return all(l >= m for l, m in zip(lam, mu))


def skew_boxes(lam: Sequence[int], mu: Sequence[int]) -> set[tuple[int, int]]:
    """Boxes ``(row, col)`` (1-indexed) of ``lam`` not in ``mu``."""
    boxes = set()
    for i, l in enumerate(lam, start=1):
        m = mu[i - 1] if i <= len(mu) else 0
        boxes.update((i, j) for j in range(m + 1, l + 1))
    return boxes


def skew_height(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Number of distinct rows occupied by ``lam`` minus ``mu``."""
    return sum(1 for i, l in enumerate(lam) if l > (mu[i] if i < len(mu) else 0))


def is_border_strip(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """Edge-connected, non-empty skew shape with no 2x2 block. Corners do not connect."""
    if not contains(lam, mu):
        return False
    boxes = skew_boxes(lam, mu)
    if not boxes:
        return False
    for i, j in boxes:
        if {(i + 1, j), (i, j + 1), (i + 1, j + 1)} <= boxes:
            return False
    start = next(iter(boxes))
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for nb in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if nb in boxes and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(boxes)


def _supersets(mu: Partition, k: int) -> Iterator[Partition]:
    """Partitions containing ``mu`` with exactly ``k`` extra boxes."""
    rows_max = len(mu) + k

    def rec(i: int, prev: int, left: int, acc: tuple[int, ...]) -> Iterator[Partition]:
        m = mu[i] if i < len(mu) else 0
        if i >= rows_max or (m == 0 and left == 0):
            if left == 0:
                yield acc
            return
        for row in range(min(prev, m + left), m - 1, -1):
            if row == 0:
                break
            yield from rec(i + 1, row, left - (row - m), acc + (row,))

    yield from rec(0, mu[0] + k if mu else k, k, ())


def border_strips_direct(mu: Partition, k: int) -> list[BorderStripResult]:
    """Border strips of size ``k`` on ``mu`` by enumerating every superset shape."""
    out = []
    for lam in _supersets(tuple(mu), k):
        if is_border_strip(lam, mu):
            out.append(BorderStripResult(lam, skew_height(lam, mu)))
    return sorted(out, key=lambda r: r.strip_height)


def border_strips(mu: Partition, k: int) -> list[BorderStripResult]:
    """All ``lam`` with ``lam / mu`` a border strip of size ``k``, via the wrapping process.

    Results are ordered by the row holding the strip's lowest box.
    """
    if k < 1:
        raise ValueError("k must be positive")
    mu = tuple(mu)
    out = []
    for i in range(1, len(mu) + k + 1):
        w = wrap(f_shift(mu, k, i))
        if w.is_young:
            out.append(BorderStripResult(w.final, skew_height(w.final, mu)))
    return out
