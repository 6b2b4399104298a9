"""Partitions of a finite cell set.

A partition is stored as a color assignment in canonical form: colors are
numbered 0..rank-1 by first occurrence in cell order, which makes equality
of partitions plain value equality.  The refinement order, join, meet,
quotient partitions and 0/1 partition matrices all live here, along with
the compact text form used by the CLI ("12/45": colors split by "/",
cells within a color split by "," or concatenated when ids are single
characters, singletons omissible).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainMismatch, MalformedPartitionSpec, NotARefinement


def _canonical(colors: Sequence[int]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    out = []
    for c in colors:
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """Canonical color assignment over cells 0..n-1."""

    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.colors != _canonical(self.colors):
            raise ValueError("partition assignment is not in canonical form")

    @staticmethod
    def from_assignment(colors: Iterable[int]) -> "Partition":
        return Partition(_canonical(tuple(colors)))

    @staticmethod
    def from_blocks(blocks: Iterable[Iterable[int]], size: int) -> "Partition":
        colors = [-1] * size
        for k, block in enumerate(blocks):
            for c in block:
                if colors[c] != -1:
                    raise ValueError(f"cell {c} assigned to two blocks")
                colors[c] = k
        if any(c == -1 for c in colors):
            raise ValueError("blocks do not cover the cell set")
        return Partition.from_assignment(colors)

    @staticmethod
    def trivial(size: int) -> "Partition":
        """Finest partition: every cell its own color."""
        return Partition(tuple(range(size)))

    @staticmethod
    def one_color(size: int) -> "Partition":
        return Partition((0,) * size)

    @property
    def size(self) -> int:
        return len(self.colors)

    @property
    def rank(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def __call__(self, cell: int) -> int:
        return self.colors[cell]

    def color_of_set(self, cells: Iterable[int]) -> frozenset[int]:
        """Set of colors occurring in a set of cells."""
        return frozenset(self.colors[c] for c in cells)

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.rank)]
        for c, k in enumerate(self.colors):
            out[k].append(c)
        return tuple(tuple(b) for b in out)


def _check_domain(a: Partition, b: Partition) -> None:
    if a.size != b.size:
        raise DomainMismatch(f"partitions on {a.size} and {b.size} cells")


def refines(a: Partition, b: Partition) -> bool:
    """True iff a <= b: same color under a implies same color under b."""
    _check_domain(a, b)
    seen: dict[int, int] = {}
    for c in range(a.size):
        k = a.colors[c]
        if k in seen:
            if seen[k] != b.colors[c]:
                return False
        else:
            seen[k] = b.colors[c]
    return True


def join(a: Partition, b: Partition) -> Partition:
    """Least upper bound: merge along chains alternating a- and b-colors."""
    _check_domain(a, b)
    parent = list(range(a.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for p in (a, b):
        first: dict[int, int] = {}
        for c in range(p.size):
            k = p.colors[c]
            if k in first:
                union(first[k], c)
            else:
                first[k] = c
    return Partition.from_assignment(find(c) for c in range(a.size))


def meet(a: Partition, b: Partition) -> Partition:
    """Greatest lower bound: nonempty intersections of color pairs."""
    _check_domain(a, b)
    pairs: dict[tuple[int, int], int] = {}
    colors = []
    for c in range(a.size):
        key = (a.colors[c], b.colors[c])
        if key not in pairs:
            pairs[key] = len(pairs)
        colors.append(pairs[key])
    return Partition.from_assignment(colors)


def quotient_partition(b: Partition, a: Partition) -> Partition:
    """The partition b/a on the colors of a, with (b/a) after a equal to b."""
    if not refines(a, b):
        raise NotARefinement("quotient requires the second argument to refine the first")
    image = [-1] * a.rank
    for c in range(a.size):
        image[a.colors[c]] = b.colors[c]
    return Partition.from_assignment(image)


def partition_matrix(a: Partition) -> np.ndarray:
    """0/1 characteristic matrix, cells as rows, colors as columns."""
    m = np.zeros((a.size, a.rank), dtype=np.int64)
    for c, k in enumerate(a.colors):
        m[c, k] = 1
    return m


def compose(outer: Partition, inner: Partition) -> Partition:
    """Apply a partition of inner's colors to get a partition of cells."""
    if outer.size != inner.rank:
        raise DomainMismatch(
            f"outer partition on {outer.size} elements cannot act on {inner.rank} colors"
        )
    return Partition.from_assignment(outer.colors[k] for k in inner.colors)


# ---------------------------------------------------------------------------
# Text form


def format_partition(p: Partition, cell_ids: Sequence[str]) -> str:
    """Render all colors, "/"-separated; concatenate single-char ids."""
    if len(cell_ids) != p.size:
        raise DomainMismatch("cell id list does not match partition size")
    compact = all(len(i) == 1 for i in cell_ids)
    sep = "" if compact else ","
    return "/".join(sep.join(cell_ids[c] for c in block) for block in p.blocks())


def parse_partition(text: str, cell_ids: Sequence[str]) -> Partition:
    """Parse the compact text form; unmentioned cells become singletons."""
    index = {cid: i for i, cid in enumerate(cell_ids)}
    n = len(cell_ids)
    assigned: dict[int, int] = {}
    text = text.strip()
    if text in ("", "-"):
        return Partition.trivial(n)
    for k, token in enumerate(text.split("/")):
        token = token.strip()
        if not token:
            raise MalformedPartitionSpec(f"empty color in spec {text!r}")
        cells = _parse_color_token(token, index)
        for c in cells:
            if c in assigned:
                raise MalformedPartitionSpec(f"cell {cell_ids[c]!r} listed twice")
            assigned[c] = k
    next_color = max(assigned.values()) + 1
    colors = []
    for c in range(n):
        if c in assigned:
            colors.append(assigned[c])
        else:
            colors.append(next_color)
            next_color += 1
    return Partition.from_assignment(colors)


def _parse_color_token(token: str, index: dict[str, int]) -> list[int]:
    if "," in token:
        cells = []
        for piece in token.split(","):
            piece = piece.strip()
            if piece not in index:
                raise MalformedPartitionSpec(f"unknown cell id {piece!r}")
            cells.append(index[piece])
        return cells
    if token in index:
        return [index[token]]
    if all(ch in index for ch in token):
        return [index[ch] for ch in token]
    raise MalformedPartitionSpec(f"cannot resolve color token {token!r}")
