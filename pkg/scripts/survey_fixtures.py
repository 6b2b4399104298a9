#!/usr/bin/env python3
"""Survey every fixture network: lattice, classes, tops, table verdicts.

Usage:
    python scripts/survey_fixtures.py [--fixtures DIR] [--max-cells N]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from synckit.classification import (
    ColorClass,
    R_IN,
    classify_partition,
    is_invariant,
    is_matched,
    join_table_report,
    top_nonweak,
    top_strong,
)
from synckit.network import load_network
from synckit.partition import format_partition
from synckit.synchrony import enumerate_balanced, is_balanced


def survey(path: Path, max_cells: int) -> None:
    net = load_network(str(path))
    ids = net.cell_ids
    print(f"== {path.stem} ({net.n_cells} cells, {net.num_types} types)")
    lattice = enumerate_balanced(net, max_cells)
    for b in lattice.elements:
        cert = is_balanced(net, b)
        marks = [classify_partition(net, b).value]
        if is_matched(net, b, R_IN):
            marks.append("reach-matched")
        if is_invariant(net, cert, R_IN):
            marks.append("reach-invariant")
        print(f"   {format_partition(b, ids):<18} {', '.join(marks)}")
    print(f"   top strong:   {format_partition(top_strong(net), ids)}")
    candidate, valid = top_nonweak(net, max_cells)
    print(f"   top non-weak: {format_partition(candidate, ids)} (valid: {valid})")
    table = join_table_report(net, max_cells)
    print(
        f"   join table: general_ok={not table.general_violations} "
        f"strict_applies={table.rooted_all_reach_matched} "
        f"strict_ok={not table.matched_violations} "
        f"nonweak_closed={table.nonweak_join_closed}"
    )
    rr_weak = sum(
        1
        for e in table.entries
        if e.left_class is ColorClass.ROOTED
        and e.right_class is ColorClass.ROOTED
        and e.join_class is ColorClass.WEAK
    )
    if rr_weak:
        print(f"   rooted-join-weak pairs: {rr_weak}")
    print()


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--fixtures",
        default=str(Path(__file__).resolve().parent.parent / "fixtures"),
    )
    parser.add_argument("--max-cells", type=int, default=12)
    args = parser.parse_args()
    for path in sorted(Path(args.fixtures).glob("*.json")):
        survey(path, args.max_cells)


if __name__ == "__main__":
    main()
