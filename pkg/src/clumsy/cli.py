"""Command-line front end: ``clumsy <command> ...``.

Exit codes: 0 success / optimal / maximal, 2 bounds only, 1 usage error or
failed verification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bounds import build_report, graph_hash
from .constructions import (
    construct_grid_pattern,
    construct_kn_km,
    construct_qn_q2_layers,
    render_svg,
)
from .copies import enumerate_copies, enumerate_subcubes, export_copy_table, parse_copy_table
from .graph import (
    Graph,
    GraphFormatError,
    HYPERCUBE_CAP,
    GridSpec,
    make_complete,
    make_cycle,
    make_grid_section,
    make_hypercube,
    make_monotonicity_gadget,
    make_path,
    make_turan,
    parse_graph,
    serialize_graph,
)
from .packing import PackingError, check_maximal, check_packing, export_packing, parse_packing
from .solvers import QUANTITIES, Budget, OracleCapExceeded, default_node_budget, oracle_enumerate, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BOUNDS = 2

# the library allows Q_16; the command line stops earlier unless asked
CLI_HYPERCUBE_CAP = 12

FAMILIES = ("complete", "hypercube", "turan", "grid", "cycle", "path", "gadget")
PATTERNS = ("complete", "subcube", "cycle", "path", "block")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    nodes: Optional[int] = None
    seconds: Optional[float] = None
    deterministic: bool = True
    threads: int = 1
    output: str = "json"
    seed: int = 0

    def budget(self) -> Budget:
        return Budget(nodes=self.nodes, seconds=self.seconds)


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", type=int, default=None, help="node budget (default $CLUMSY_NODE_BUDGET)")
    p.add_argument("--seconds", type=float, default=None, help="wall-clock budget")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--nondeterministic", action="store_true",
                   help="allow --threads > 1 (parallel search is not implemented; one worker is used)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the main artifact here instead of stdout")


def _host_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="host graph file (edge-list format)")
    p.add_argument("--family", choices=FAMILIES, help="generated host family")
    p.add_argument("--n", type=int, help="size parameter (vertices, dimension, or section side)")
    p.add_argument("--k", type=int, help="parts (turan), tiling kind (grid), cycle length (gadget)")
    p.add_argument("--variant", choices=("prime", "deleted"), default="prime",
                   help="gadget: G' (prime) or G with an F_0 edge removed (deleted)")
    p.add_argument("--cap", type=int, default=CLI_HYPERCUBE_CAP, help="largest hypercube dimension accepted")


def _pattern_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--pattern", required=required,
                   help=f"one of {', '.join(PATTERNS)}, or a pattern graph file")
    p.add_argument("--d", type=int, help="pattern size: clique order, subcube dimension, "
                                         "cycle length, path vertices, block side")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clumsy", description="Clumsy (minimum maximal) packings of graphs.")
    ap.add_argument("--version", action="version", version=f"clumsy {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a generated graph")
    _host_args(p)
    _common(p)

    p = sub.add_parser("copies", help="enumerate the copies of a pattern")
    _host_args(p)
    _pattern_args(p)
    _common(p)

    p = sub.add_parser("solve", help="exact cl / pp / cov / ex")
    _host_args(p)
    _pattern_args(p)
    p.add_argument("--quantity", choices=QUANTITIES + ("all",), default="cl")
    p.add_argument("--symmetry", action="store_true", help="orbit pruning (K_n and Q_n hosts only)")
    p.add_argument("--oracle", action="store_true", help="exhaustive enumeration instead of search")
    p.add_argument("--packing-out", help="write the cl/pp witness as a packing file")
    _common(p)

    p = sub.add_parser("construct", help="explicit constructions")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--kn", type=int, metavar="N", help="K_N with K_M copies (needs --km)")
    g.add_argument("--hypercube", type=int, metavar="N", help="Q_N with squares")
    g.add_argument("--grid", type=int, choices=(3, 4, 6), metavar="K", help="tiling kind (needs --n)")
    p.add_argument("--km", type=int, metavar="M")
    p.add_argument("--n", type=int)
    p.add_argument("--block", type=int, default=2, help="square-grid block side d")
    p.add_argument("--residue", type=int, choices=(0, 1, 2), help="hypercube layer alignment (default: best)")
    p.add_argument("--completion", choices=("lex", "max_gain"), help="greedy completion order")
    p.add_argument("--packing-out", help="write the packing file here")
    p.add_argument("--graph-out", help="write the host graph file here")
    p.add_argument("--emit-svg", help="render a grid pattern to this SVG file")
    p.add_argument("--cap", type=int, default=CLI_HYPERCUBE_CAP, help="largest hypercube dimension accepted")
    _common(p)

    p = sub.add_parser("verify", help="certify a packing file")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True, help="pattern graph file")
    p.add_argument("--packing", required=True)
    p.add_argument("--copies", help="copy table export the packing refers to (default: enumerate)")
    _common(p)

    p = sub.add_parser("report", help="bounds report for one instance")
    _host_args(p)
    _pattern_args(p)
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--no-constructions", action="store_true")
    _common(p)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--acceptance", action="store_true", required=True)
    p.add_argument("--only", help="comma-separated criterion numbers")
    _common(p)
    return ap


# ---------------------------------------------------------------------------
# input resolution


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def resolve_host(a) -> tuple[Graph, dict]:
    if a.graph:
        return parse_graph(_read(a.graph)), {"graph": a.graph}
    if not a.family:
        raise UsageError("give --graph FILE or --family")
    fam, n, k = a.family, a.n, a.k
    desc = {"family": fam, "n": n, "k": k}
    if fam == "gadget":
        if k is None:
            raise UsageError("gadget needs --k")
        gp, g = make_monotonicity_gadget(k)
        desc["variant"] = a.variant
        return (gp if a.variant == "prime" else g), desc
    if n is None:
        raise UsageError(f"family {fam} needs --n")
    if fam == "complete":
        return make_complete(n), desc
    if fam == "hypercube":
        return make_hypercube(n, cap=min(a.cap, HYPERCUBE_CAP)), desc
    if fam == "turan":
        if k is None:
            raise UsageError("turan needs --k parts")
        return make_turan(n, k)[0], desc
    if fam == "grid":
        if k is None:
            raise UsageError("grid needs --k in {3,4,6}")
        return make_grid_section(GridSpec(k, n)), desc
    if fam == "cycle":
        return make_cycle(n), desc
    if fam == "path":
        return make_path(n), desc
    raise UsageError(f"unknown family {fam}")


def resolve_pattern(a) -> tuple[Graph, dict]:
    kind, d = a.pattern, getattr(a, "d", None)
    if kind not in PATTERNS:
        return parse_graph(_read(kind)), {"pattern": kind}
    if d is None:
        raise UsageError(f"pattern {kind} needs --d")
    desc = {"pattern": kind, "d": d}
    if kind == "complete":
        return make_complete(d), desc
    if kind == "subcube":
        return make_hypercube(d), desc
    if kind == "cycle":
        return make_cycle(d), desc
    if kind == "path":
        return make_path(d), desc
    return make_grid_section(GridSpec(4, d)), desc


def _table(host: Graph, pattern: Graph, a):
    fam = host.family
    if a.pattern == "subcube" and fam and fam[0] == "hypercube":
        return enumerate_subcubes(fam[1], pattern.family[1], host=host)
    return enumerate_copies(host, pattern)


def _config(a, inputs: dict, params: dict) -> RunConfig:
    nodes = a.nodes if a.nodes is not None else default_node_budget()
    threads = a.threads if a.nondeterministic else 1
    return RunConfig(a.command, inputs, params, nodes, a.seconds, not a.nondeterministic, threads, a.format, a.seed)


def _envelope(cfg: RunConfig, hashes: dict, body: dict, timing: dict) -> dict:
    return {
        "tool": {"name": "clumsy", "version": __version__},
        "config": asdict(cfg),
        "input_hashes": hashes,
        "seed": cfg.seed,
        "result": body,
        "timing": timing,
    }


def _emit(text: str, a) -> None:
    if getattr(a, "out", None):
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj: dict, a, text_lines: Optional[Sequence[str]] = None) -> None:
    if a.format == "text" and text_lines is not None:
        _emit("\n".join(text_lines) + "\n", a)
    else:
        _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", a)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(a) -> int:
    host, desc = resolve_host(a)
    _emit(serialize_graph(host, comments=[f"clumsy {__version__} gen {json.dumps(desc, sort_keys=True)}"]), a)
    return EXIT_OK


def cmd_copies(a) -> int:
    host, hd = resolve_host(a)
    pat, pd = resolve_pattern(a)
    _emit(export_copy_table(_table(host, pat, a)), a)
    return EXIT_OK


def cmd_solve(a) -> int:
    host, hd = resolve_host(a)
    pat, pd = resolve_pattern(a)
    cfg = _config(a, {**hd, **pd}, {"quantity": a.quantity, "symmetry": a.symmetry, "oracle": a.oracle})
    t0 = time.monotonic()
    table = _table(host, pat, a)
    t_enum = time.monotonic() - t0
    quantities = QUANTITIES if a.quantity == "all" else (a.quantity,)
    results, timing = {}, {"enumerate_ms": round(t_enum * 1000, 3)}
    code = EXIT_OK
    for q in quantities:
        if a.oracle:
            r = oracle_enumerate(table, q)
        else:
            r = solve(table, q, cfg.budget(), symmetry=a.symmetry)
        results[q] = r.to_json(timing=False)
        timing[f"{q}_ms"] = round(r.elapsed * 1000, 3)
        if not r.optimal:
            code = EXIT_BOUNDS
        if a.packing_out and q in ("cl", "pp"):
            Path(a.packing_out).write_text(export_packing(r.packing(table)))
    body = {"copies": len(table), "edges_G": host.m, "edges_H": pat.m,
            **(results if len(results) > 1 else results[quantities[0]])}
    obj = _envelope(cfg, {"host": graph_hash(host), "pattern": graph_hash(pat)}, body, timing)
    lines = [f"{q} = {res['value']} [{res['status']}] lo={res['lo']} hi={res['hi']} nodes={res['nodes']}"
             for q, res in results.items()]
    _emit_json(obj, a, lines)
    return code


def cmd_construct(a) -> int:
    cfg = _config(a, {}, {k: v for k, v in vars(a).items()
                          if k in ("kn", "km", "hypercube", "grid", "n", "block", "residue", "completion")})
    budget = Budget(nodes=a.nodes, seconds=a.seconds) if (a.nodes or a.seconds) else None
    t0 = time.monotonic()
    if a.kn is not None:
        if a.km is None:
            raise UsageError("--kn needs --km")
        rep = construct_kn_km(a.kn, a.km, budget)
    elif a.hypercube is not None:
        if a.hypercube > min(a.cap, HYPERCUBE_CAP):
            raise UsageError(f"hypercube dimension {a.hypercube} exceeds cap {a.cap} (raise with --cap)")
        rep = construct_qn_q2_layers(a.hypercube, a.residue, budget, completion=a.completion or "max_gain")
    else:
        if a.n is None:
            raise UsageError("--grid needs --n")
        rep = construct_grid_pattern(GridSpec(a.grid, a.n), a.block, budget, completion=a.completion or "lex")
    elapsed = time.monotonic() - t0
    host = rep.packing.table.host
    if a.packing_out:
        Path(a.packing_out).write_text(export_packing(rep.packing))
    if a.graph_out:
        Path(a.graph_out).write_text(serialize_graph(host))
    if a.emit_svg:
        if host.coords is None:
            raise UsageError("--emit-svg needs a planar (grid) construction")
        Path(a.emit_svg).write_text(render_svg(rep.packing))
    body = rep.to_json()
    obj = _envelope(cfg, {"host": graph_hash(host)}, body, {"construct_ms": round(elapsed * 1000, 3)})
    lines = [f"{rep.construction}: size {rep.size} (predicted {rep.predicted_size}), "
             f"boundary_added {rep.boundary_added}, {rep.certificate.kind}"]
    if "central_window_fraction" in rep.details and rep.details["central_window_fraction"] is not None:
        lines.append(f"central window covered fraction {float(rep.details['central_window_fraction']):.4f} "
                     f"(pattern density {rep.details['pattern_density']})")
    _emit_json(obj, a, lines)
    return EXIT_OK if rep.certificate.ok else EXIT_ERROR


def cmd_verify(a) -> int:
    host = parse_graph(_read(a.graph))
    pat = parse_graph(_read(a.pattern))
    table = parse_copy_table(_read(a.copies), host, pat) if a.copies else enumerate_copies(host, pat)
    p = parse_packing(_read(a.packing), table)
    cert = check_packing(p)
    if cert.ok:
        cert = check_maximal(p)
    cfg = _config(a, {"graph": a.graph, "pattern": a.pattern, "packing": a.packing, "copies": a.copies}, {})
    hashes = {"host": graph_hash(host), "pattern": graph_hash(pat),
              "packing": hashlib.sha256(_read(a.packing).encode()).hexdigest()[:16]}
    obj = _envelope(cfg, hashes, {"certificate": cert.to_json(), "members": len(p)}, {})
    _emit_json(obj, a, [f"{cert.kind} {json.dumps(cert.witness, sort_keys=True)}"])
    return EXIT_OK if cert.kind == "maximal" else EXIT_ERROR


def cmd_report(a) -> int:
    host, hd = resolve_host(a)
    pat, pd = resolve_pattern(a)
    cfg = _config(a, {**hd, **pd}, {"symmetry": a.symmetry, "constructions": not a.no_constructions})
    t0 = time.monotonic()
    rep = build_report(host, pat, cfg.budget(), symmetry=a.symmetry, constructions=not a.no_constructions,
                       table=_table(host, pat, a))
    timing = {"report_ms": round((time.monotonic() - t0) * 1000, 3)}
    timing.update({f"{q}_ms": round(r.elapsed * 1000, 3) for q, r in rep.solver.items()})
    obj = _envelope(cfg, {"host": graph_hash(host), "pattern": graph_hash(pat)}, rep.to_json(), timing)
    lines = [f"||G||={rep.edges_G} ||H||={rep.edges_H} copies={rep.copies}",
             f"ex={rep.ex.value if rep.ex else None} eq1_lower={rep.eq1_lower} counting_lower={rep.counting_lower}"]
    lines += [f"{q}={r.value} [{r.status}]" for q, r in rep.solver.items()]
    lines += [f"construction {k}: {v}" for k, v in rep.constructions.items()]
    _emit_json(obj, a, lines)
    return EXIT_OK if all(r.optimal for r in rep.solver.values()) else EXIT_BOUNDS


def cmd_suite(a) -> int:
    from .acceptance import run_all

    only = [int(x) for x in a.only.split(",")] if a.only else None
    results = run_all(only=only, seed=a.seed)
    cfg = _config(a, {}, {"only": only})
    body = {"criteria": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    timing = {f"criterion_{r.number}_s": round(r.seconds, 3) for r in results}
    lines = [r.line() for r in results]
    _emit_json(_envelope(cfg, {}, body, timing), a, lines)
    return EXIT_OK if body["passed"] else EXIT_ERROR


COMMANDS = {
    "gen": cmd_gen,
    "copies": cmd_copies,
    "solve": cmd_solve,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "report": cmd_report,
    "suite": cmd_suite,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return COMMANDS[a.command](a)
    except (UsageError, GraphFormatError, PackingError, OracleCapExceeded, ValueError) as exc:
        print(f"clumsy {a.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
