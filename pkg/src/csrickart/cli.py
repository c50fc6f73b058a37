"""Command line interface: check, report, summands, submodules, homs, verify, search."""
from __future__ import annotations

import argparse
import json
import sys

from .core import AlgebraError, CarrierTooLarge, FiniteModule, ModuleHom, Submodule, canonical_form
from .homs import iter_homs
from .lattice import direct_summands, submodules
from .properties import ALIASES, PROPERTY_NAMES, Check, Witness, evaluate, property_report
from .specfile import SpecSyntaxError, parse_ring_designator, read_module
from .theorems import THEOREMS, ExpressionError, search_counterexample, verify_theorem


def _module_info(M: FiniteModule) -> dict:
    out = {"name": repr(M), "ring": M.ring.describe(), "orders": list(M.orders), "size": M.size}
    if M.is_abelian_type:
        out["canonical_form"] = list(canonical_form(M))
    return out


def _hom_lines(f: ModuleHom, indent: str = "  ") -> list[str]:
    return [f"{indent}g{j + 1} -> {' '.join(str(v) for v in row)}" for j, row in enumerate(f.matrix)]


def _sub_line(S: Submodule) -> str:
    return repr(S)


def _witness_lines(w: Witness | None, indent: str = "  ") -> list[str]:
    if w is None:
        return []
    lines = []
    if w.note:
        lines.append(f"{indent}{w.note}")
    if w.hom is not None:
        lines.append(f"{indent}witness hom (row j = image of g_j):")
        lines += _hom_lines(w.hom, indent + "  ")
    if w.pair is not None:
        lines.append(f"{indent}summands: {_sub_line(w.pair[0])} and {_sub_line(w.pair[1])}")
    if w.submodule is not None:
        lines.append(f"{indent}submodule: {_sub_line(w.submodule)}")
    if w.summand is not None:
        lines.append(f"{indent}summand: {_sub_line(w.summand)}")
    return lines


def _dump(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


# -- commands ------------------------------------------------------------------

def cmd_check(args) -> int:
    M = read_module(args.module)
    N = read_module(args.relative) if args.relative else None
    c: Check = evaluate(args.property, M, N, verbose=args.verbose)
    if args.json:
        out = {
            "module": _module_info(M),
            "properties": {args.property: c.holds},
            "witnesses": {args.property: c.witness.to_json()} if c.witness is not None else {},
        }
        if N is not None:
            out["relative"] = _module_info(N)
        if args.verbose:
            out["certificates"] = [w.to_json() for w in c.certificates]
        _dump(out)
    else:
        print("true" if c.holds else "false")
        for line in _witness_lines(c.witness):
            print(line)
        if args.verbose:
            for w in c.certificates:
                print("  certificate: " + w.describe())
    return 0 if c.holds else 1


def cmd_report(args) -> int:
    M = read_module(args.file)
    rep = property_report(M, verbose=args.verbose)
    if args.json:
        _dump(rep.to_dict())
    else:
        print(rep.format())
    return 0


def cmd_summands(args) -> int:
    M = read_module(args.file)
    summ = direct_summands(M)
    if args.json:
        _dump({"module": _module_info(M), "summands": [D.generator_coords() for D in summ]})
    else:
        print(f"{len(summ)} direct summands of {M!r}")
        for D in summ:
            print("  " + _sub_line(D))
    return 0


def cmd_submodules(args) -> int:
    M = read_module(args.file)
    subs = submodules(M)
    if args.json:
        _dump({"module": _module_info(M), "submodules": [S.generator_coords() for S in subs]})
    else:
        print(f"{len(subs)} submodules of {M!r}")
        for S in subs:
            print("  " + _sub_line(S))
    return 0


def cmd_homs(args) -> int:
    M, N = read_module(args.source), read_module(args.target)
    homs = list(iter_homs(M, N))
    if args.json:
        _dump({"source": _module_info(M), "target": _module_info(N), "homs": [[list(r) for r in f.matrix] for f in homs]})
    else:
        print(f"{len(homs)} homomorphisms {M!r} -> {N!r}")
        for k, f in enumerate(homs, 1):
            print(f"  #{k}: kernel {f.kernel!r}, image {f.image!r}")
            print("\n".join(_hom_lines(f, "    ")))
    return 0


def cmd_verify(args) -> int:
    ring = parse_ring_designator(args.ring) if args.ring else None
    res = verify_theorem(args.theorem, args.max_order, ring)
    if args.json:
        _dump({
            "theorem": res.theorem,
            "passed": res.passed,
            "instances": res.instances,
            "violations": [list(v) for v in res.violations],
            "notes": res.notes,
        })
    else:
        print(res.summary())
        for inst, why in res.violations:
            print(f"  violation at {inst}: {why}")
        for note in res.notes:
            print(f"  {note}")
    return 0 if res.passed else 1


def cmd_search(args) -> int:
    ring = parse_ring_designator(args.ring) if args.ring else None
    res = search_counterexample(args.hypothesis, args.conclusion, args.max_order, ring)
    if args.json:
        if res is None:
            _dump({"found": False})
        else:
            _dump({
                "found": True,
                "instance": res.instance,
                "modules": {k: _module_info(m) for k, m in res.modules.items()},
                "checks": [
                    {"atom": a, "holds": c.holds, "witness": c.witness.to_json() if c.witness else None}
                    for a, c in res.checks
                ],
            })
        return 0
    if res is None:
        print(f"no counterexample within order {args.max_order}")
        return 0
    print(f"counterexample: {res.instance} (instance {res.examined} in search order)")
    for atom, c in res.checks:
        print(f"  {atom}: {'true' if c.holds else 'false'}")
        for line in _witness_lines(c.witness, "    "):
            print(line)
    return 0


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="csrickart", description="Decide CS-Rickart type properties of finite modules.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide one property")
    c.add_argument("property", choices=list(PROPERTY_NAMES) + list(ALIASES))
    c.add_argument("--module", required=True, help="module file (the source M of the maps)")
    c.add_argument("--relative", help="second module N for relative properties (maps run M -> N)")
    c.add_argument("--json", action="store_true")
    c.add_argument("--verbose", action="store_true", help="also print success certificates")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("report", help="all properties of one module")
    r.add_argument("file")
    r.add_argument("--json", action="store_true")
    r.add_argument("--verbose", action="store_true")
    r.set_defaults(func=cmd_report)

    for name, func, helptext in (
        ("summands", cmd_summands, "list the direct summands"),
        ("submodules", cmd_submodules, "list all submodules"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("file")
        s.add_argument("--json", action="store_true")
        s.set_defaults(func=func)

    h = sub.add_parser("homs", help="enumerate Hom(M, N)")
    h.add_argument("source")
    h.add_argument("target")
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_homs)

    v = sub.add_parser("verify", help="check a theorem on its instance stream")
    v.add_argument("--theorem", required=True, choices=list(THEOREMS))
    v.add_argument("--max-order", type=int)
    v.add_argument("--ring", help="zn:<n>")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="first instance with hypothesis true and conclusion false")
    s.add_argument("--hypothesis", required=True)
    s.add_argument("--conclusion", required=True)
    s.add_argument("--max-order", type=int, required=True)
    s.add_argument("--ring", help="zn:<n>")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_search)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SpecSyntaxError, ExpressionError, AlgebraError, CarrierTooLarge, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
