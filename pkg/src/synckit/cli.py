"""Command line front end.

Exit codes: 0 on success, 1 when a queried boolean verdict is false,
2 on usage or input errors.  Every subcommand has a JSON output mode
(--format json) with a stable schema; identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import classification as cls
from . import connectivity as conn
from . import dynamics as dyn
from . import synchrony as syn
from .errors import SynckitError
from .network import Network, export_dot, load_network, save_network
from .partition import Partition, format_partition, parse_partition

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2


def _emit(payload: dict, args, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _net(args) -> Network:
    return load_network(args.network)


def _partition(args, net: Network, attr: str = "partition") -> Partition:
    return parse_partition(getattr(args, attr), net.cell_ids)


def _kind(text: str) -> cls.NeighborhoodKind:
    if text == "n":
        return cls.N_IN
    if text == "v":
        return cls.V_IN
    if text == "r":
        return cls.R_IN
    if text.startswith("vk:"):
        return cls.v_in_k(int(text[3:]))
    raise SynckitError(f"unknown neighborhood kind {text!r}; use n, v, vk:<k> or r")


def _fmt(net: Network, p: Partition) -> str:
    return format_partition(p, net.cell_ids)


def _blocks_as_ids(net: Network, p: Partition) -> list[list[str]]:
    return [[net.cell_ids[c] for c in block] for block in p.blocks()]


# ---------------------------------------------------------------------------
# subcommand handlers, each returning an exit code


def cmd_scc(args) -> int:
    net = _net(args)
    p = conn.scc_decomposition(net)
    blocks = _blocks_as_ids(net, p)
    _emit({"sccs": blocks}, args, _fmt(net, p))
    return EXIT_OK


def cmd_condense(args) -> int:
    net = _net(args)
    cond = conn.condensation(net)
    blocks = _blocks_as_ids(net, cond.scc_partition)
    edges = sorted(cond.dag_edges)
    payload = {
        "sccs": blocks,
        "edges": [[s, t] for s, t in edges],
        "roots": sorted(cond.roots),
    }
    if args.format == "dot":
        lines = ["digraph condensation {"]
        for k, block in enumerate(blocks):
            shape = "doublecircle" if k in cond.roots else "circle"
            lines.append(f'  "S{k}" [label="{",".join(block)}", shape={shape}];')
        for s, t in edges:
            lines.append(f'  "S{s}" -> "S{t}";')
        lines.append("}")
        print("\n".join(lines))
        return EXIT_OK
    text = "\n".join(
        [f"S{k}: {{{','.join(b)}}}" for k, b in enumerate(blocks)]
        + [f"S{s} -> S{t}" for s, t in edges]
        + ["roots: " + " ".join(f"S{k}" for k in sorted(cond.roots))]
    )
    _emit(payload, args, text)
    return EXIT_OK


def cmd_roots(args) -> int:
    net = _net(args)
    cond = conn.condensation(net)
    blocks = _blocks_as_ids(net, cond.scc_partition)
    root_blocks = [blocks[k] for k in sorted(cond.roots)]
    _emit(
        {"roots": root_blocks},
        args,
        "\n".join("{" + ",".join(b) + "}" for b in root_blocks),
    )
    return EXIT_OK


def cmd_rdc(args) -> int:
    net = _net(args)
    p = conn.rdc_decomposition(net)
    _emit({"rdcs": _blocks_as_ids(net, p)}, args, _fmt(net, p))
    return EXIT_OK


def cmd_reach(args) -> int:
    net = _net(args)
    c = net.index_of(args.cell)
    if args.k is not None:
        cells = conn.cumulative_in_k(net, c, args.k)
        label = f"cumulative in-neighborhood ({args.k} steps)"
    else:
        cells = conn.in_reachability(net, c)
        label = "in-reachability"
    ids = sorted((net.cell_ids[d] for d in cells), key=net.index_of)
    _emit({"cell": args.cell, "k": args.k, "cells": ids}, args,
          f"{label} of {args.cell}: {{{','.join(ids)}}}")
    return EXIT_OK


def cmd_balanced(args) -> int:
    net = _net(args)
    p = _partition(args, net)
    cert = syn.is_balanced(net, p)
    payload = {"partition": _fmt(net, p), "balanced": cert is not None}
    if cert is not None:
        payload["quotient_matrix"] = [list(row) for row in cert.quotient_matrix]
        _emit(payload, args, "balanced\n" + _matrix_text(cert.quotient_matrix))
        return EXIT_OK
    _emit(payload, args, "not balanced")
    return EXIT_FALSE


def _matrix_text(m) -> str:
    return "\n".join("[" + " ".join(str(v) for v in row) + "]" for row in m)


def cmd_cir(args) -> int:
    net = _net(args)
    p = _partition(args, net)
    result = syn.cir_balanced(net, p)
    _emit({"partition": _fmt(net, p), "cir": _fmt(net, result)}, args, _fmt(net, result))
    return EXIT_OK


def cmd_lattice(args) -> int:
    net = _net(args)
    lattice = syn.enumerate_balanced(net, args.max_cells)
    texts = [_fmt(net, p) for p in lattice.elements]
    if args.dot:
        lines = ["digraph lattice {", "  rankdir=BT;"]
        for t in texts:
            lines.append(f'  "{t}";')
        for i, j in sorted(lattice.cover_edges):
            lines.append(f'  "{texts[i]}" -> "{texts[j]}";')
        lines.append("}")
        print("\n".join(lines))
        return EXIT_OK
    payload = {
        "elements": texts,
        "cover_edges": [[i, j] for i, j in sorted(lattice.cover_edges)],
        "bottom": lattice.bottom,
        "top": lattice.top,
    }
    _emit(payload, args, "\n".join(texts))
    return EXIT_OK


def cmd_quotient(args) -> int:
    net = _net(args)
    p = _partition(args, net)
    cert = syn.is_balanced(net, p)
    if cert is None:
        print("partition is not balanced; no quotient network", file=sys.stderr)
        return EXIT_USAGE
    q = syn.quotient_network(net, cert)
    if args.out:
        save_network(q, args.out)
    from .network import network_to_doc

    _emit(network_to_doc(q), args, export_dot(q).rstrip("\n"))
    return EXIT_OK


def cmd_exo(args) -> int:
    net = _net(args)
    p = _partition(args, net)
    verdict = syn.is_exo_balanced(net, p)
    _emit({"partition": _fmt(net, p), "exo_balanced": verdict}, args,
          "exo-balanced" if verdict else "not exo-balanced")
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_classify(args) -> int:
    net = _net(args)
    p = _partition(args, net)
    per_color = [
        cls.classify_color(net, block).value for block in p.blocks()
    ]
    overall = cls.classify_partition(net, p).value
    blocks = _blocks_as_ids(net, p)
    text = "\n".join(
        f"{{{','.join(b)}}}: {k}" for b, k in zip(blocks, per_color)
    ) + f"\npartition: {overall}"
    _emit(
        {"partition": _fmt(net, p), "colors": per_color, "class": overall},
        args,
        text,
    )
    return EXIT_OK


def cmd_matched(args) -> int:
    net = _net(args)
    p = _partition(args, net)
    kind = _kind(args.kind)
    verdict = cls.is_matched(net, p, kind)
    _emit(
        {"partition": _fmt(net, p), "kind": args.kind, "matched": verdict},
        args,
        f"{kind.label()}-matched: {verdict}",
    )
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_invariant(args) -> int:
    net = _net(args)
    p = _partition(args, net)
    cert = syn.is_balanced(net, p)
    if cert is None:
        print("partition is not balanced; invariance is undefined", file=sys.stderr)
        return EXIT_USAGE
    kind = _kind(args.kind)
    verdict = cls.is_invariant(net, cert, kind)
    _emit(
        {"partition": _fmt(net, p), "kind": args.kind, "invariant": verdict},
        args,
        f"{kind.label()}-invariant: {verdict}",
    )
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_tables(args) -> int:
    net = _net(args)
    if args.quotient:
        p = parse_partition(args.quotient, net.cell_ids)
        cert = syn.is_balanced(net, p)
        if cert is None:
            print("quotient partition is not balanced", file=sys.stderr)
            return EXIT_USAGE
        report = cls.quotient_class_report(net, cert, args.max_cells)
        qnet = syn.quotient_network(net, cert)
        payload = report.to_json(net.cell_ids, qnet.cell_ids)
        lines = [f"over {payload['over']} (reach-invariant: {report.precondition_met})"]
        for e in report.entries:
            lines.append(
                f"{_fmt(net, e.partition)} [{e.class_in_base.value}] -> "
                f"{format_partition(e.quotient_partition, qnet.cell_ids)} "
                f"[{e.class_in_quotient.value}]"
            )
        lines.append(f"table_ok: {not report.violations}")
        _emit(payload, args, "\n".join(lines))
        return EXIT_OK if not report.violations else EXIT_FALSE
    report = cls.join_table_report(net, args.max_cells)
    payload = report.to_json(net.cell_ids)
    ok = not report.general_violations and not report.matched_violations
    strict = (
        str(not report.matched_violations)
        if report.rooted_all_reach_matched
        else "n/a"
    )
    lines = [
        f"elements: {len(report.lattice.elements)}",
        f"general_table_ok: {not report.general_violations}",
        f"rooted_all_reach_matched: {report.rooted_all_reach_matched}",
        f"matched_table_ok: {strict}",
        f"nonweak_join_closed: {report.nonweak_join_closed}",
    ]
    _emit(payload, args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FALSE


def cmd_simulate(args) -> int:
    net = _net(args)
    spec = dyn.sample_admissible(net, args.seed, exo=args.exo)
    if args.x0 == "random":
        import random as _random

        rng = _random.Random(f"simulate:{args.seed}")
        x0 = tuple(rng.uniform(-1.5, 1.5) for _ in range(net.n_cells))
    else:
        values = [float(v) for v in args.x0.split(",")]
        if len(values) != net.n_cells:
            raise SynckitError(
                f"x0 needs {net.n_cells} comma-separated values, got {len(values)}"
            )
        x0 = tuple(values)
    traj = dyn.evolve(net, spec, x0, args.steps, mode=args.mode, dt=args.dt)
    payload = {
        "cells": list(net.cell_ids),
        "mode": traj.mode,
        "times": list(traj.times),
        "states": [list(s) for s in traj.states],
    }
    text = "\n".join(
        f"t={t:g} " + " ".join(f"{v:+.6f}" for v in s)
        for t, s in zip(traj.times, traj.states)
    )
    _emit(payload, args, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    net = _net(args)
    spec = dyn.sample_admissible(net, args.seed, exo=args.exo)
    if args.what in ("invariance", "quotient") and args.partition is None:
        raise SynckitError(f"verify {args.what} needs --partition")
    if args.what in ("locality", "subsystem") and args.cell is None:
        raise SynckitError(f"verify {args.what} needs --cell")
    if args.what == "invariance":
        p = _partition(args, net)
        report = dyn.check_invariance(
            net, spec, p, trials=args.trials, steps=args.steps,
            tol=args.tol, mode=args.mode, dt=args.dt, rng_seed=args.seed,
        )
        _emit(report.to_json(), args,
              f"max spread {report.max_spread:.3e} (tol {report.tol:g}): "
              + ("invariant" if report.invariant else "not invariant"))
        return EXIT_OK if report.invariant else EXIT_FALSE
    if args.what == "locality":
        c = net.index_of(args.cell)
        report = dyn.check_locality(
            net, spec, c, args.k, trials=args.trials, rng_seed=args.seed
        )
        _emit(report.to_json(), args, f"locality agreed: {report.all_agreed}")
        return EXIT_OK if report.all_agreed else EXIT_FALSE
    if args.what == "subsystem":
        c = net.index_of(args.cell)
        report = dyn.check_subsystem(
            net, spec, c, trials=args.trials, steps=args.steps,
            mode=args.mode, dt=args.dt, tol=args.tol, rng_seed=args.seed,
        )
        good = report.exact if args.mode == "discrete" else report.max_deviation <= args.tol
        _emit(report.to_json(), args,
              f"max deviation {report.max_deviation:.3e}: {'ok' if good else 'mismatch'}")
        return EXIT_OK if good else EXIT_FALSE
    # quotient
    p = _partition(args, net)
    cert = syn.is_balanced(net, p)
    if cert is None:
        print("partition is not balanced; no quotient system", file=sys.stderr)
        return EXIT_USAGE
    report = dyn.check_quotient_consistency(
        net, spec, cert, trials=args.trials, steps=args.steps,
        mode=args.mode, dt=args.dt, tol=args.tol, rng_seed=args.seed,
    )
    good = report.exact if args.mode == "discrete" else report.max_deviation <= args.tol
    _emit(report.to_json(), args,
          f"max deviation {report.max_deviation:.3e}: {'ok' if good else 'mismatch'}")
    return EXIT_OK if good else EXIT_FALSE


def cmd_export_dot(args) -> int:
    net = _net(args)
    p = parse_partition(args.partition, net.cell_ids) if args.partition else None
    sys.stdout.write(export_dot(net, p))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synckit",
        description="Synchrony analysis for weighted coupled cell networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, *, partition: bool = False, optional_partition: bool = False):
        p = sub.add_parser(name)
        p.add_argument("--network", required=True, help="path to a network JSON file")
        p.add_argument("--format", choices=["text", "json", "dot"], default="text")
        if partition:
            p.add_argument("--partition", required=True, help="partition spec, e.g. 12/45")
        elif optional_partition:
            p.add_argument("--partition", default=None)
        p.set_defaults(handler=handler)
        return p

    add("scc", cmd_scc)
    add("condense", cmd_condense)
    add("roots", cmd_roots)
    add("rdc", cmd_rdc)
    p = add("reach", cmd_reach)
    p.add_argument("--cell", required=True)
    p.add_argument("--k", type=int, default=None)
    add("balanced", cmd_balanced, partition=True)
    add("cir", cmd_cir, partition=True)
    p = add("lattice", cmd_lattice)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--max-cells", type=int, default=None)
    p = add("quotient", cmd_quotient, partition=True)
    p.add_argument("--out", default=None)
    add("exo", cmd_exo, partition=True)
    add("classify", cmd_classify, partition=True)
    p = add("matched", cmd_matched, partition=True)
    p.add_argument("--kind", required=True)
    p = add("invariant", cmd_invariant, partition=True)
    p.add_argument("--kind", required=True)
    p = add("tables", cmd_tables)
    p.add_argument("--quotient", default=None)
    p.add_argument("--max-cells", type=int, default=None)
    p = add("simulate", cmd_simulate)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--x0", default="random")
    p.add_argument("--mode", choices=["discrete", "rk4"], default="discrete")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--exo", action="store_true")
    p = add("verify", cmd_verify, optional_partition=True)
    p.add_argument("what", choices=["invariance", "locality", "subsystem", "quotient"])
    p.add_argument("--cell", default=None)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--mode", choices=["discrete", "rk4"], default="discrete")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--exo", action="store_true")
    p = add("export-dot", cmd_export_dot, optional_partition=True)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.handler(args)
    except SynckitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
