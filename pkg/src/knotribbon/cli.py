"""Command-line interface: ``knotribbon <command> ...``.

Knot selectors
--------------
* a built-in name (``unknot``, ``trefoil``, ``K0_paper``, ``K1_paper``) or an
  ingested record name; underscores and case are ignored, so ``11n50``
  finds ``11n_50``;
* ``T2_q`` for the (2, q) torus knot;
* inline PD text (``[[1,4,2,5],...]`` or ``X[1,4,2,5] ...``);
* a path to a file holding PD text.

A term may carry an ``N*`` prefix (connected sum of N copies) and a
``:mirror`` suffix, and terms are joined with ``#`` for connected sums:
``2*trefoil#8_20:mirror``.

Exit status
-----------
0 success / all checks pass / ribbon excluded in both directions;
1 a verification check failed; 2 usage error; 3 a selector or PD code could
not be resolved or parsed; 4 ribbon excluded in one direction only;
5 nothing excluded (including stabilization up to ``--m-max``);
6 internal consistency failure while computing invariants.

With ``--json`` every command prints one JSON object carrying
``"schema": "knotribbon/1"`` and ``"command"``.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from .exactalg import AbelianGroup
from .invariants import InvariantError, betti_profile
from .knotstore import InvariantCache, KnotStore, UnknownKnotError, torus_2q
from .obstruct import CobordismContext, ObstructionReport, obstruct_groups, stabilize_groups
from .pdcode import PDCode, PDCodeError, connected_power, connected_sum, mirror, orient, parse_pd, sum_all
from .verify import FAIL, SKIP, run_checks

SCHEMA = "knotribbon/1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_EXCLUDED_ONE = 4
EXIT_NOT_EXCLUDED = 5
EXIT_INTERNAL = 6

_OUTCOME_EXIT = {"excluded_both": EXIT_OK, "excluded_one": EXIT_EXCLUDED_ONE, "not_excluded": EXIT_NOT_EXCLUDED}


class SelectorError(ValueError):
    pass


def resolve(selector: str, store: KnotStore) -> PDCode:
    """Turn a knot selector into a PD code."""
    sel = selector.strip()
    if not sel:
        raise SelectorError("empty selector")
    if "#" in sel:
        return sum_all(resolve(part, store) for part in sel.split("#"))
    m = re.fullmatch(r"(\d+)\s*\*\s*(.+)", sel)
    if m:
        return connected_power(resolve(m.group(2), store), int(m.group(1)))
    if sel.endswith(":mirror"):
        return mirror(resolve(sel[: -len(":mirror")], store))
    if sel.startswith("[") or sel.startswith("X[") or sel.startswith("PD["):
        return parse_pd(sel)
    m = re.fullmatch(r"T2_(\d+)", sel, flags=re.I)
    if m:
        return torus_2q(int(m.group(1))).pd
    try:
        return store.get(sel).pd
    except UnknownKnotError:
        pass
    path = Path(sel)
    if path.is_file():
        return parse_pd(path.read_text(encoding="utf-8"))
    raise SelectorError(f"unknown knot {selector!r}")


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps({"schema": SCHEMA, "command": args.command, **payload}, sort_keys=True))
    else:
        print(text)


def _group_json(g: AbelianGroup) -> dict:
    return {"invariant_factors": list(g.invariant_factors), "free_rank": g.free_rank}


def cmd_inv(args, store, cache) -> int:
    code = resolve(args.knot, store)
    inv = cache.get(code)
    betti = betti_profile(inv.homology)
    payload = {
        "knot": args.knot,
        "crossings": code.n,
        "writhe": orient(code).writhe,
        "determinant": inv.determinant,
        "alexander": inv.alexander.to_json(),
        "homology": _group_json(inv.homology),
        "betti": {str(p): b for p, b in betti.items()},
    }
    text = "\n".join([
        f"knot:        {args.knot}",
        f"crossings:   {code.n}",
        f"writhe:      {payload['writhe']}",
        f"determinant: {inv.determinant}",
        f"alexander:   {inv.alexander}",
        f"H1(cover):   {inv.homology}",
        "betti:       " + (", ".join(f"F_{p}: {b}" for p, b in betti.items()) or "(no odd primes)"),
    ])
    _emit(args, payload, text)
    return EXIT_OK


def _report_text(rep: ObstructionReport) -> list[str]:
    lines = [f"genus: {rep.genus}", f"det(K0) = {rep.det0}, det(K1) = {rep.det1}"]
    for e in rep.entries:
        lines.append(f"  p={e.p}: beta(K0)={e.beta0} beta(K1)={e.beta1}  c0>={e.c0_bound} c2>={e.c2_bound}")
    lines.append(f"c0 >= {rep.c0_bound}" + (f" (p={rep.c0_witness})" if rep.c0_witness else ""))
    lines.append(f"c2 >= {rep.c2_bound}" + (f" (p={rep.c2_witness})" if rep.c2_witness else ""))
    lines.append(f"ribbon K0->K1 excluded by critical-point bound: {rep.ribbon_forward_excluded}")
    lines.append(f"ribbon K1->K0 excluded by critical-point bound: {rep.ribbon_backward_excluded}")
    if rep.gilmer_forward_excluded is not None:
        lines.append(f"ribbon concordance K0->K1 excluded by determinant divisibility: {rep.gilmer_forward_excluded}")
        lines.append(f"ribbon concordance K1->K0 excluded by determinant divisibility: {rep.gilmer_backward_excluded}")
    if rep.optimal is not None:
        lines.append(f"cobordism of this genus is optimal: {rep.optimal}")
    lines.append(f"outcome: {rep.outcome}")
    return lines


def cmd_obstruct(args, store, cache) -> int:
    k0, k1 = resolve(args.k0, store), resolve(args.k1, store)
    ctx = CobordismContext(*args.g4) if args.g4 else None
    rep = obstruct_groups(cache.get(k0).homology, cache.get(k1).homology, args.genus, ctx)
    _emit(args, {"k0": args.k0, "k1": args.k1, "report": rep.to_dict()}, "\n".join(_report_text(rep)))
    return _OUTCOME_EXIT[rep.outcome]


def cmd_stabilize(args, store, cache) -> int:
    groups = [cache.get(resolve(s, store)).homology for s in (args.k0, args.k1, args.j0, args.j1)]
    res = stabilize_groups(*groups, args.genus, args.m_max)
    payload = {
        "minimal_m": res.minimal_m,
        "m_max": res.m_max,
        "sufficient_m": res.sufficient_m,
        "d": res.d,
        "report": res.report.to_dict() if res.report else None,
    }
    if res.excluded:
        lines = [f"minimal m: {res.minimal_m}"] + _report_text(res.report)
    else:
        lines = [f"not excluded for any m <= {res.m_max}"]
    lines.append(f"sufficient m from 2(g+d03+d13+d05+d15)+1: {res.sufficient_m}  ({res.d})")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if res.excluded else EXIT_NOT_EXCLUDED


def cmd_verify_paper(args, store, cache) -> int:
    k0 = resolve(args.k0, store) if args.k0 else None
    k1 = resolve(args.k1, store) if args.k1 else None
    results = list(run_checks(store, k0, k1))
    failed = [r for r in results if r.status == FAIL]
    payload = {"checks": [r.__dict__ for r in results], "failed": len(failed)}
    text = "\n".join(r.line() for r in results)
    skipped = sum(r.status == SKIP for r in results)
    text += f"\n{len(results) - len(failed) - skipped} passed, {len(failed)} failed, {skipped} skipped"
    _emit(args, payload, text)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_ingest(args, store, cache) -> int:
    count = store.ingest_csv(args.path)
    for msg in store.skipped:
        print(msg, file=sys.stderr)
    _emit(args, {"added": count, "skipped": store.skipped}, f"{count} records added")
    return EXIT_OK


def cmd_sum(args, store, cache) -> int:
    code = connected_sum(resolve(args.k1, store), resolve(args.k2, store))
    _emit(args, {"pd": json.loads(str(code))}, str(code))
    return EXIT_OK


def cmd_mirror(args, store, cache) -> int:
    code = mirror(resolve(args.knot, store))
    _emit(args, {"pd": json.loads(str(code)), "writhe": orient(code).writhe}, str(code))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="knotribbon", description="Knot invariants and ribbon-cobordism obstructions.")
    p.add_argument("--home", help="data directory (default $KNOTRIBBON_HOME or ~/.cache/knotribbon)")
    p.add_argument("--cache", help="invariant cache file (default $KNOTRIBBON_CACHE or HOME/cache.json)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    sp = add("inv", cmd_inv, "invariants of one knot")
    sp.add_argument("knot")
    sp.add_argument("--mirror", action="store_true", help="use the mirror image")

    sp = add("obstruct", cmd_obstruct, "ribbon obstructions for a cobordism K0 -> K1")
    sp.add_argument("k0")
    sp.add_argument("k1")
    sp.add_argument("--genus", type=int, default=0)
    sp.add_argument("--g4", type=int, nargs=2, metavar=("G4_K0", "G4_K1"), help="declared 4-genera")

    sp = add("stabilize", cmd_stabilize, "smallest m obstructing K0#mJ0 vs K1#mJ1")
    for name in ("k0", "k1", "j0", "j1"):
        sp.add_argument(name)
    sp.add_argument("--genus", type=int, default=0)
    sp.add_argument("--m-max", type=int, default=64)

    sp = add("verify-paper", cmd_verify_paper, "reproduce the published computations")
    sp.add_argument("--k0", help="substitute selector for K0 (negative controls)")
    sp.add_argument("--k1", help="substitute selector for K1")

    sp = add("ingest", cmd_ingest, "add knots from a name,pd_notation CSV")
    sp.add_argument("path")

    sp = add("sum", cmd_sum, "print the PD code of a connected sum")
    sp.add_argument("k1")
    sp.add_argument("k2")

    sp = add("mirror", cmd_mirror, "print the PD code of the mirror image")
    sp.add_argument("knot")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    home = Path(args.home) if args.home else None
    store = KnotStore(home / "store.json") if home else KnotStore.default()
    if args.cache:
        cache = InvariantCache(args.cache)
    elif home:
        cache = InvariantCache(home / "cache.json")
    else:
        cache = InvariantCache.default()
    if getattr(args, "mirror", False) and args.command == "inv":
        args.knot = f"{args.knot}:mirror"
    try:
        return args.func(args, store, cache)
    except (SelectorError, PDCodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
