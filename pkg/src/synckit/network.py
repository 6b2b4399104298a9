"""Coupled cell network data model with JSON I/O and DOT export.

A network is a list of typed cells plus an in-adjacency matrix over a
monoid family: rows are receivers, columns are senders (note that many
graph libraries use the transpose).  Parallel edges in a document are
folded with the monoid sum at parse time; the in-memory model only ever
holds the folded matrix.  Cell ids are strings in files and dense
indices internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional, Sequence

from .errors import (
    DuplicateCellId,
    MalformedDocument,
    PartitionDomainMismatch,
    UnknownCell,
    UnknownCellInEdge,
)
from .monoid import MonoidFamily, monoid_by_name
from .partition import Partition

_DOT_SHAPES = ("circle", "box", "diamond", "hexagon", "ellipse", "triangle")


@dataclass(frozen=True)
class Network:
    """Immutable network: typed cells and a folded in-adjacency matrix."""

    cell_ids: tuple[str, ...]
    cell_types: tuple[int, ...]
    adjacency: tuple[tuple[Any, ...], ...]
    monoids: MonoidFamily

    @property
    def n_cells(self) -> int:
        return len(self.cell_ids)

    @property
    def num_types(self) -> int:
        return max(self.cell_types) if self.cell_types else 0

    @cached_property
    def _index(self) -> dict[str, int]:
        return {cid: i for i, cid in enumerate(self.cell_ids)}

    def index_of(self, cell_id: str) -> int:
        try:
            return self._index[cell_id]
        except KeyError:
            raise UnknownCell(f"no cell with id {cell_id!r}") from None

    def check_cell(self, c: int) -> None:
        if not 0 <= c < self.n_cells:
            raise UnknownCell(f"cell index {c} out of range")

    def weight(self, receiver: int, sender: int) -> Any:
        return self.adjacency[receiver][sender]

    def is_zero_weight(self, receiver: int, sender: int) -> bool:
        m = self.monoids.get(self.cell_types[receiver], self.cell_types[sender])
        return m.is_zero_value(self.adjacency[receiver][sender])

    @cached_property
    def in_edges(self) -> tuple[tuple[tuple[int, Any], ...], ...]:
        """Per receiver, the (sender, weight) pairs with nonzero weight."""
        rows = []
        for c in range(self.n_cells):
            rows.append(
                tuple(
                    (d, self.adjacency[c][d])
                    for d in range(self.n_cells)
                    if not self.is_zero_weight(c, d)
                )
            )
        return tuple(rows)

    def type_partition(self) -> Partition:
        return Partition.from_assignment(self.cell_types)

    def subnetwork(self, cells: Sequence[int]) -> "Network":
        """Induced subnetwork on the given cells, kept in the given order."""
        for c in cells:
            self.check_cell(c)
        ids = tuple(self.cell_ids[c] for c in cells)
        types = tuple(self.cell_types[c] for c in cells)
        adj = tuple(tuple(self.adjacency[c][d] for d in cells) for c in cells)
        return Network(ids, types, adj, self.monoids)


def row_color_sum(net: Network, p: Partition, c: int) -> tuple[Any, ...]:
    """Monoid sums of the in-row of cell c, grouped by the colors of p."""
    if p.size != net.n_cells:
        raise PartitionDomainMismatch(
            f"partition on {p.size} cells applied to a {net.n_cells}-cell network"
        )
    net.check_cell(c)
    i = net.cell_types[c]
    sums = [None] * p.rank
    for d in range(net.n_cells):
        m = net.monoids.get(i, net.cell_types[d])
        k = p.colors[d]
        w = net.adjacency[c][d]
        sums[k] = w if sums[k] is None else m.add(sums[k], w)
    return tuple(sums)


# ---------------------------------------------------------------------------
# JSON document format


def parse_network(doc: Any) -> Network:
    """Build a Network from a parsed JSON document, folding parallel edges."""
    if not isinstance(doc, dict):
        raise MalformedDocument("network document must be a JSON object")
    monoid = monoid_by_name(doc.get("monoid", "int-add"))
    cells = doc.get("cells")
    if not isinstance(cells, list) or not cells:
        raise MalformedDocument("document needs a non-empty 'cells' list")

    ids: list[str] = []
    types: list[int] = []
    for entry in cells:
        if not isinstance(entry, dict) or "id" not in entry or "type" not in entry:
            raise MalformedDocument(f"bad cell entry {entry!r}")
        cid = str(entry["id"])
        ctype = entry["type"]
        if not isinstance(ctype, int) or isinstance(ctype, bool) or ctype < 1:
            raise MalformedDocument(f"cell {cid!r} has bad type {ctype!r}")
        if cid in ids:
            raise DuplicateCellId(f"duplicate cell id {cid!r}")
        ids.append(cid)
        types.append(ctype)
    if set(types) != set(range(1, max(types) + 1)):
        raise MalformedDocument("type ids must form a contiguous range starting at 1")

    index = {cid: i for i, cid in enumerate(ids)}
    n = len(ids)
    adj: list[list[Any]] = [
        [monoid.zero(types[c], types[d]) for d in range(n)] for c in range(n)
    ]
    for edge in doc.get("edges", []):
        if not isinstance(edge, dict) or not {"from", "to", "weight"} <= set(edge):
            raise MalformedDocument(f"bad edge entry {edge!r}")
        src, dst = str(edge["from"]), str(edge["to"])
        if src not in index:
            raise UnknownCellInEdge(f"edge references unknown cell {src!r}")
        if dst not in index:
            raise UnknownCellInEdge(f"edge references unknown cell {dst!r}")
        c, d = index[dst], index[src]
        try:
            w = monoid.coerce(edge["weight"])
        except TypeError as exc:
            raise MalformedDocument(str(exc)) from None
        adj[c][d] = monoid.add(adj[c][d], w)

    return Network(
        tuple(ids),
        tuple(types),
        tuple(tuple(row) for row in adj),
        MonoidFamily(monoid),
    )


def network_to_doc(net: Network) -> dict:
    """Serializable document; zero-weight entries are omitted."""
    edges = []
    for c in range(net.n_cells):
        for d, w in net.in_edges[c]:
            w_out: Any = "inf" if w == float("inf") else w
            edges.append({"from": net.cell_ids[d], "to": net.cell_ids[c], "weight": w_out})
    return {
        "monoid": net.monoids.kind,
        "cells": [
            {"id": cid, "type": t} for cid, t in zip(net.cell_ids, net.cell_types)
        ],
        "edges": edges,
    }


def load_network(path: str) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"{path}: {exc}") from None
    return parse_network(doc)


def save_network(net: Network, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(network_to_doc(net), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# DOT export


def _fill_color(k: int, rank: int) -> str:
    # evenly spaced hues, pale enough for black labels
    hue = (k / max(rank, 1)) % 1.0
    return f"{hue:.3f} 0.35 1.000"


def export_dot(net: Network, p: Optional[Partition] = None) -> str:
    """GraphViz digraph: shape by cell type, fill by partition color."""
    if p is not None and p.size != net.n_cells:
        raise PartitionDomainMismatch("partition does not cover the network")
    lines = ["digraph network {", "  rankdir=LR;"]
    for c, cid in enumerate(net.cell_ids):
        shape = _DOT_SHAPES[(net.cell_types[c] - 1) % len(_DOT_SHAPES)]
        attrs = [f"shape={shape}"]
        if p is not None:
            attrs.append("style=filled")
            attrs.append(f'fillcolor="{_fill_color(p.colors[c], p.rank)}"')
        lines.append(f'  "{cid}" [{", ".join(attrs)}];')
    for c in range(net.n_cells):
        for d, w in net.in_edges[c]:
            lines.append(f'  "{net.cell_ids[d]}" -> "{net.cell_ids[c]}" [label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
