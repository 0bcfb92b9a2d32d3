"""Command line entry point.

Exit codes: 0 success, 1 a check failed or a verdict is negative, 2 usage,
parse or resource-cap errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import zoo
from .algcore import check_algebra, check_bimodule, check_coalgebra, regular_bimodule
from .entwine import Entwining, check_entwining
from .exactlin import GF, MalformedInputError, QQ
from .fileformat import ParseError, StructureFile, dumps_structure, matrix_to_json, parse_structure
from .fuzz import fuzz
from .galois import (check_beta_bimodule, check_coaction, check_translation_identity,
                     galois_extension)
from .homology import (InvalidEntwiningError, ModuleMismatchError, ResourceCapError,
                       entwined_cohomology, hochschild_cohomology, verify_theorem)

SCHEMA = 1


class UsageError(Exception):
    pass


def _read(path: str, algebra=None) -> StructureFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_structure(text, algebra=algebra)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _bimodule(args, sf: StructureFile):
    if sf.algebra is None:
        raise ParseError(f"{args.file}: no 'algebra'")
    if args.self_:
        return regular_bimodule(sf.algebra)
    if args.bimodule is None:
        if sf.bimodule is not None:
            return sf.bimodule
        raise UsageError("give --bimodule FILE or --self")
    bf = _read(args.bimodule, algebra=sf.algebra)
    if bf.bimodule is None:
        raise ParseError(f"{args.bimodule}: no 'bimodule'")
    return bf.bimodule


def _entwining(sf: StructureFile) -> Entwining:
    if sf.entwining is not None:
        return sf.entwining_structure()
    if sf.coaction is not None:
        ext = galois_extension(sf.comodule_algebra())
        if not ext.is_galois:
            raise InvalidEntwiningError("coaction is not Galois, so it induces no canonical entwining")
        return ext.entwining
    raise ParseError("need an 'entwining' or a Galois 'coaction'")


def _table_line(name: str, dims) -> str:
    return f"{name}: " + " ".join(str(d) for d in dims)


# ----------------------------------------------------------------- commands

def cmd_check(args):
    sf = _read(args.file)
    reports = {}
    if sf.algebra is not None:
        reports["algebra"] = check_algebra(sf.algebra)
    if sf.coalgebra is not None:
        reports["coalgebra"] = check_coalgebra(sf.coalgebra)
    if sf.coaction is not None:
        reports["coaction"] = check_coaction(sf.comodule_algebra())
    if sf.entwining is not None:
        reports["entwining"] = check_entwining(sf.entwining_structure())
    if sf.bimodule is not None:
        reports["bimodule"] = check_bimodule(sf.bimodule)
    ok = all(r.ok for r in reports.values())
    doc = {"command": "check", "ok": ok, "reports": {k: r.to_dict() for k, r in reports.items()}}
    lines = []
    for k, r in reports.items():
        flags = ", ".join(f"{n}={'pass' if v else 'FAIL'}" for n, v in r.flags.items())
        lines.append(f"{k}: {flags}")
        for n, ws in r.witnesses.items():
            if ws:
                lines.append(f"  {n} witnesses: {ws}")
    lines.append("all checks pass" if ok else "some checks FAIL")
    return ok, doc, lines


def cmd_galois(args):
    sf = _read(args.file)
    ca = sf.comodule_algebra()
    ext = galois_extension(ca)
    f = sf.field
    doc = {"command": "galois", "b_dim": ext.b_basis.ncols,
           "b_basis": [[f.format(x) for x in col] for col in ext.b_basis.columns()],
           "aba_dim": ext.aba.dim, "is_galois": ext.is_galois}
    lines = [f"coinvariants B: dim {ext.b_basis.ncols}"]
    lines += [f"  b{i} = {[f.format(x) for x in col]}" for i, col in enumerate(ext.b_basis.columns())]
    lines.append(f"dim A (x)_B A = {ext.aba.dim}, dim A (x) C = {ca.a.dim * ca.c.dim}")
    lines.append(f"is_galois: {ext.is_galois}")
    ok = ext.is_galois
    if ext.is_galois:
        ent = check_entwining(ext.entwining)
        bb = check_beta_bimodule(ext)
        ti = check_translation_identity(ext)
        doc.update(gamma=matrix_to_json(ext.gamma), psi=matrix_to_json(ext.entwining.psi),
                   aba_representatives=ext.aba.representatives,
                   entwining_axioms=ent.to_dict(), beta_bimodule=bb, translation_identity=ti)
        lines.append(f"A (x)_B A basis: classes of A (x) A basis vectors {ext.aba.representatives}")
        lines.append("gamma (columns c_i, quotient coordinates):")
        lines += [f"  {[f.format(x) for x in r]}" for r in ext.gamma.rows]
        lines.append("psi (columns c (x) a, rows a (x) c):")
        lines += [f"  {[f.format(x) for x in r]}" for r in ext.entwining.psi.rows]
        lines.append("canonical psi axioms: " + ", ".join(f"{k}={v}" for k, v in ent.flags.items()))
        lines.append(f"beta bimodule map: {bb}")
        lines.append(f"translation identity: {ti}")
        ok = ent.ok and bb and ti
    doc["ok"] = ok
    return ok, doc, lines


def cmd_cohomology(args):
    sf = _read(args.file)
    e = _entwining(sf)
    m = _bimodule(args, sf)
    t = entwined_cohomology(e, m, args.max_degree)
    doc = {"command": "cohomology", "table_psi": list(t.dims), "ok": True}
    return True, doc, [_table_line("H_psi", t.dims)]


def cmd_hochschild(args):
    sf = _read(args.file)
    m = _bimodule(args, sf)
    t = hochschild_cohomology(sf.algebra, m, args.max_degree)
    doc = {"command": "hochschild", "table_hh": list(t.dims), "ok": True}
    return True, doc, [_table_line("HH", t.dims)]


def cmd_verify(args):
    sf = _read(args.file)
    ext = galois_extension(sf.comodule_algebra())
    if not ext.is_galois:
        doc = {"command": "verify", "is_galois": False, "ok": False}
        return False, doc, ["is_galois: False (the comparison needs a Galois extension)"]
    m = _bimodule(args, sf)
    rep = verify_theorem(ext, m, args.max_degree)
    doc = {"command": "verify", "is_galois": True, **rep.to_dict(), "ok": rep.verified}
    lines = [
        f"dim B = {ext.b_basis.ncols}, flat over B: left={rep.flat_left} right={rep.flat_right}"
        " (flat = projective = free cover splits)",
        _table_line("H_psi(A,M)", rep.table_psi.dims),
        _table_line("HH(B,M)   ", rep.table_hh.dims),
        f"degree 0: {rep.h0_psi} vs {rep.h0_B} -> {'match' if rep.h0_match else 'MISMATCH'}",
    ]
    if rep.tables_match is None:
        lines.append("tables: no verdict (A is not flat over B on either side)")
    else:
        lines.append(f"tables: {'match' if rep.tables_match else 'MISMATCH'}")
    return rep.verified, doc, lines


def cmd_zoo(args):
    if args.name is None:
        return True, {"command": "zoo", "names": list(zoo.ZOO), "ok": True}, list(zoo.ZOO)
    field = GF(args.prime) if args.prime else None
    try:
        ca = zoo.build(args.name, field)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    text = dumps_structure(StructureFile(ca.a.field, ca.a, ca.c, ca.coaction))
    if args.emit:
        Path(args.emit).write_text(text, encoding="utf-8")
        return True, {"command": "zoo", "name": args.name, "path": args.emit, "ok": True}, \
            [f"wrote {args.name} to {args.emit}"]
    return True, None, [text.rstrip("\n")]


def cmd_fuzz(args):
    field = GF(args.prime) if args.prime else QQ
    rep = fuzz(args.dim_a, args.dim_c, args.trials, args.seed, field=field, perturb=args.perturb)
    doc = {"command": "fuzz", **rep.to_dict()}
    lines = [f"fuzz dims=({args.dim_a},{args.dim_c}) trials={args.trials} seed={args.seed} "
             f"field={field} mode={rep.mode}",
             f"galois cases: {rep.galois}"]
    if rep.mode == "perturb":
        lines.append(f"perturbed psi flagged: {rep.flagged}/{args.trials - rep.skipped}"
                     f" (skipped {rep.skipped} without a Galois case)")
    else:
        lines.append(f"findings: {len(rep.findings)}")
        for fnd in rep.findings:
            lines.append(f"  trial {fnd['trial']}: {fnd['property']} fails; shrunk case {fnd['case']}")
            lines.append("  " + json.dumps(fnd["structure"]))
    return rep.ok, doc, lines


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entwined",
                                description="Entwined and Hochschild cohomology of coalgebra-Galois extensions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="print a machine-readable report")
        sp.set_defaults(func=func)
        return sp

    def with_bimodule(sp):
        sp.add_argument("file")
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--bimodule", metavar="FILE")
        g.add_argument("--self", dest="self_", action="store_true", help="use M = A")
        sp.add_argument("--max-degree", type=int, default=3)

    add("check", cmd_check, "axiom reports").add_argument("file")
    add("galois", cmd_galois, "coinvariants, Galois map, gamma and psi").add_argument("file")
    with_bimodule(add("cohomology", cmd_cohomology, "entwined cohomology table"))
    with_bimodule(add("hochschild", cmd_hochschild, "Hochschild cohomology table of the algebra"))
    with_bimodule(add("verify", cmd_verify, "compare entwined and Hochschild cohomology of B"))
    sp = add("zoo", cmd_zoo, "emit a built-in example")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--emit", metavar="PATH")
    sp.add_argument("--prime", type=int, help="build over F_p instead of the default field")
    sp = add("fuzz", cmd_fuzz, "seeded property search")
    sp.add_argument("--dim-a", type=int, required=True)
    sp.add_argument("--dim-c", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--prime", type=int)
    sp.add_argument("--perturb", action="store_true", help="perturb one entry of psi per trial")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "max_degree", 0) < 0:
        print("error: --max-degree must be nonnegative", file=sys.stderr)
        return 2
    try:
        ok, doc, lines = args.func(args)
    except (UsageError, ParseError, MalformedInputError, ModuleMismatchError, ResourceCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidEntwiningError as exc:
        if args.json:
            print(json.dumps({"schema": SCHEMA, "command": args.command, "ok": False, "error": str(exc)}),
                  file=out)
        else:
            print(f"invalid entwining: {exc}", file=out)
        return 1
    if args.json and doc is not None:
        print(json.dumps({"schema": SCHEMA, **doc}, indent=2), file=out)
    else:
        print("\n".join(lines), file=out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
