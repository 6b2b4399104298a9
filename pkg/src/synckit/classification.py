"""Strong/rooted/weak classification and neighborhood matching/invariance.

A color is strong when its cells share one SCC, rooted when their
in-reachability sets still intersect, and weak when some of its cells
evolve with no common upstream influence at all.  On top of the classes
this module checks the neighborhood color-matching and color-invariance
predicates for the four neighborhood notions (one-step, cumulative,
k-step cumulative, reachability), and produces the join-table and
quotient-class reports used to validate how classes combine.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .connectivity import (
    all_in_reachability,
    cumulative_in,
    cumulative_in_k,
    in_neighborhood,
    rdc_decomposition,
    scc_decomposition,
)
from .errors import EmptyColor, SynckitError
from .network import Network
from .partition import Partition, join, meet, quotient_partition, refines
from .synchrony import (
    BalancedCertificate,
    BalancedLattice,
    cir_balanced,
    enumerate_balanced,
    quotient_network,
)


class ColorClass(enum.Enum):
    STRONG = "strong"
    ROOTED = "rooted"
    WEAK = "weak"


@dataclass(frozen=True)
class NeighborhoodKind:
    """One of the four neighborhood notions; k applies to the k-step kind."""

    name: str
    k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.name not in ("n", "v", "vk", "r"):
            raise SynckitError(f"unknown neighborhood kind {self.name!r}")
        if self.name == "vk":
            if self.k is None or self.k < 1:
                raise SynckitError("k-step neighborhood needs k >= 1")
        elif self.k is not None:
            raise SynckitError(f"kind {self.name!r} takes no k")

    def label(self) -> str:
        return {"n": "in", "v": "cumulative-in", "vk": f"cumulative-in-{self.k}",
                "r": "reach-in"}[self.name]


N_IN = NeighborhoodKind("n")
V_IN = NeighborhoodKind("v")
R_IN = NeighborhoodKind("r")


def v_in_k(k: int) -> NeighborhoodKind:
    return NeighborhoodKind("vk", k)


def neighborhood_sets(net: Network, kind: NeighborhoodKind) -> tuple[frozenset[int], ...]:
    """The chosen neighborhood of every cell."""
    if kind.name == "n":
        return tuple(in_neighborhood(net, c) for c in range(net.n_cells))
    if kind.name == "v":
        return tuple(cumulative_in(net, c) for c in range(net.n_cells))
    if kind.name == "vk":
        assert kind.k is not None
        return tuple(cumulative_in_k(net, c, kind.k) for c in range(net.n_cells))
    return all_in_reachability(net)


def classify_color(net: Network, color: Iterable[int]) -> ColorClass:
    """Class of one color from the intersection of its reachability sets."""
    cells = sorted(set(color))
    if not cells:
        raise EmptyColor("cannot classify an empty color")
    for c in cells:
        net.check_cell(c)
    reach = all_in_reachability(net)
    common = frozenset.intersection(*(reach[c] for c in cells))
    union = frozenset.union(*(reach[c] for c in cells))
    if common == union:
        return ColorClass.STRONG
    if common:
        return ColorClass.ROOTED
    return ColorClass.WEAK


def classify_partition(net: Network, p: Partition) -> ColorClass:
    """Strong if all colors are; weak if any color is; rooted otherwise."""
    classes = [classify_color(net, block) for block in p.blocks()]
    if any(k is ColorClass.WEAK for k in classes):
        return ColorClass.WEAK
    if all(k is ColorClass.STRONG for k in classes):
        return ColorClass.STRONG
    return ColorClass.ROOTED


def is_matched(net: Network, p: Partition, kind: NeighborhoodKind) -> bool:
    """Same-colored cells see the same color set in the chosen neighborhood."""
    hoods = neighborhood_sets(net, kind)
    seen: dict[int, frozenset[int]] = {}
    for c in range(net.n_cells):
        image = p.color_of_set(hoods[c])
        k = p.colors[c]
        if k in seen:
            if seen[k] != image:
                return False
        else:
            seen[k] = image
    return True


def is_invariant(net: Network, cert: BalancedCertificate, kind: NeighborhoodKind) -> bool:
    """Colorwise neighborhoods commute with taking the quotient network."""
    p = cert.partition
    quotient = quotient_network(net, cert)
    hoods_g = neighborhood_sets(net, kind)
    hoods_q = neighborhood_sets(quotient, kind)
    for c in range(net.n_cells):
        if p.color_of_set(hoods_g[c]) != hoods_q[p.colors[c]]:
            return False
    return True


def top_strong(net: Network) -> Partition:
    """Top of the strong sublattice: coarsest balanced below types meet SCCs."""
    return cir_balanced(net, meet(net.type_partition(), scc_decomposition(net)))


def top_nonweak(net: Network, max_cells: Optional[int] = None) -> tuple[Partition, bool]:
    """Candidate top non-weak element plus a validity flag.

    The candidate is the coarsest balanced partition below types meet
    root-dependency classes.  It tops the non-weak elements only when
    every rooted element of the lattice is reach-in matched, so that
    hypothesis is checked by enumeration and reported alongside.
    """
    candidate = cir_balanced(net, meet(net.type_partition(), rdc_decomposition(net)))
    lattice = enumerate_balanced(net, max_cells)
    valid = all(
        is_matched(net, b, R_IN)
        for b in lattice.elements
        if classify_partition(net, b) is ColorClass.ROOTED
    )
    return candidate, valid


# ---------------------------------------------------------------------------
# Reports

_TABLE1 = {
    (ColorClass.STRONG, ColorClass.STRONG): {ColorClass.STRONG},
    (ColorClass.STRONG, ColorClass.ROOTED): {ColorClass.ROOTED, ColorClass.WEAK},
    (ColorClass.STRONG, ColorClass.WEAK): {ColorClass.WEAK},
    (ColorClass.ROOTED, ColorClass.ROOTED): {ColorClass.ROOTED, ColorClass.WEAK},
    (ColorClass.ROOTED, ColorClass.WEAK): {ColorClass.WEAK},
    (ColorClass.WEAK, ColorClass.WEAK): {ColorClass.WEAK},
}

_TABLE2 = {
    (ColorClass.STRONG, ColorClass.STRONG): {ColorClass.STRONG},
    (ColorClass.STRONG, ColorClass.ROOTED): {ColorClass.ROOTED},
    (ColorClass.STRONG, ColorClass.WEAK): {ColorClass.WEAK},
    (ColorClass.ROOTED, ColorClass.ROOTED): {ColorClass.ROOTED},
    (ColorClass.ROOTED, ColorClass.WEAK): {ColorClass.WEAK},
    (ColorClass.WEAK, ColorClass.WEAK): {ColorClass.WEAK},
}


def _pair_key(a: ColorClass, b: ColorClass) -> tuple[ColorClass, ColorClass]:
    order = [ColorClass.STRONG, ColorClass.ROOTED, ColorClass.WEAK]
    return (a, b) if order.index(a) <= order.index(b) else (b, a)


@dataclass(frozen=True)
class JoinEntry:
    left: int
    right: int
    left_class: ColorClass
    right_class: ColorClass
    join_class: ColorClass
    join_in_lattice: int


@dataclass(frozen=True)
class JoinTableReport:
    lattice: BalancedLattice
    entries: tuple[JoinEntry, ...]
    general_violations: tuple[JoinEntry, ...]
    rooted_all_reach_matched: bool
    matched_violations: tuple[JoinEntry, ...]
    nonweak_join_closed: bool

    def to_json(self, cell_ids) -> dict:
        from .partition import format_partition

        def fmt(i: int) -> str:
            return format_partition(self.lattice.elements[i], cell_ids)

        element_class: dict[int, str] = {}
        for e in self.entries:
            element_class[e.left] = e.left_class.value
            element_class[e.right] = e.right_class.value
        return {
            "elements": [
                {"partition": fmt(i), "class": element_class.get(i, "")}
                for i in range(len(self.lattice.elements))
            ],
            "pairs": [
                {
                    "left": fmt(e.left),
                    "right": fmt(e.right),
                    "left_class": e.left_class.value,
                    "right_class": e.right_class.value,
                    "join": fmt(e.join_in_lattice),
                    "join_class": e.join_class.value,
                }
                for e in self.entries
            ],
            "general_table_ok": not self.general_violations,
            "rooted_all_reach_matched": self.rooted_all_reach_matched,
            "matched_table_ok": (
                not self.matched_violations if self.rooted_all_reach_matched else None
            ),
            "nonweak_join_closed": self.nonweak_join_closed,
        }


def join_table_report(net: Network, max_cells: Optional[int] = None) -> JoinTableReport:
    """Join every pair of balanced partitions and record the class algebra."""
    lattice = enumerate_balanced(net, max_cells)
    classes = [classify_partition(net, b) for b in lattice.elements]
    rooted_matched = all(
        is_matched(net, b, R_IN)
        for b, k in zip(lattice.elements, classes)
        if k is ColorClass.ROOTED
    )
    entries = []
    general_bad = []
    matched_bad = []
    nonweak_closed = True
    for i in range(len(lattice.elements)):
        for j in range(i, len(lattice.elements)):
            joined = join(lattice.elements[i], lattice.elements[j])
            jdx = lattice.index_of(joined)
            entry = JoinEntry(i, j, classes[i], classes[j], classes[jdx], jdx)
            entries.append(entry)
            key = _pair_key(classes[i], classes[j])
            if classes[jdx] not in _TABLE1[key]:
                general_bad.append(entry)
            if rooted_matched and classes[jdx] not in _TABLE2[key]:
                matched_bad.append(entry)
            if (
                classes[i] is not ColorClass.WEAK
                and classes[j] is not ColorClass.WEAK
                and classes[jdx] is ColorClass.WEAK
            ):
                nonweak_closed = False
    return JoinTableReport(
        lattice,
        tuple(entries),
        tuple(general_bad),
        rooted_matched,
        tuple(matched_bad),
        nonweak_closed,
    )


@dataclass(frozen=True)
class QuotientClassEntry:
    partition: Partition
    class_in_base: ColorClass
    quotient_partition: Partition
    class_in_quotient: ColorClass


@dataclass(frozen=True)
class QuotientClassReport:
    base_partition: Partition
    precondition_met: bool
    entries: tuple[QuotientClassEntry, ...]
    violations: tuple[QuotientClassEntry, ...]

    def to_json(self, cell_ids, quotient_ids) -> dict:
        from .partition import format_partition

        return {
            "over": format_partition(self.base_partition, cell_ids),
            "reach_invariant": self.precondition_met,
            "entries": [
                {
                    "partition": format_partition(e.partition, cell_ids),
                    "class": e.class_in_base.value,
                    "quotient_partition": format_partition(
                        e.quotient_partition, quotient_ids
                    ),
                    "quotient_class": e.class_in_quotient.value,
                }
                for e in self.entries
            ],
            "table_ok": not self.violations,
        }


_ALLOWED_QUOTIENT = {
    ColorClass.STRONG: {ColorClass.STRONG},
    ColorClass.ROOTED: {ColorClass.STRONG, ColorClass.ROOTED},
    ColorClass.WEAK: {ColorClass.STRONG, ColorClass.ROOTED, ColorClass.WEAK},
}


def quotient_class_report(
    net: Network, cert: BalancedCertificate, max_cells: Optional[int] = None
) -> QuotientClassReport:
    """Compare classes of balanced coarsenings with their quotient classes.

    The class can only get stronger in the quotient when the base
    partition is reach-in invariant; when it is not, the report is still
    emitted but carries no table verdict.
    """
    precondition = is_invariant(net, cert, R_IN)
    quotient = quotient_network(net, cert)
    lattice = enumerate_balanced(net, max_cells)
    entries = []
    violations = []
    for b in lattice.elements:
        if not refines(cert.partition, b):
            continue
        q = quotient_partition(b, cert.partition)
        entry = QuotientClassEntry(
            b,
            classify_partition(net, b),
            q,
            classify_partition(quotient, q),
        )
        entries.append(entry)
        if precondition and entry.class_in_quotient not in _ALLOWED_QUOTIENT[
            entry.class_in_base
        ]:
            violations.append(entry)
    return QuotientClassReport(
        cert.partition, precondition, tuple(entries), tuple(violations)
    )
