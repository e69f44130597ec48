"""Command line entry point: ``dblgpd <command> ...``.

JSON reports go to stdout (or ``--output``), a one-line summary to stderr.
Exit codes: 0 ok, 1 mathematical failure, 2 input error, 3 cap or budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra.builders import build, direct_product
from .algebra.group import CapExceeded, FiniteGroup, GroupError, Subgroup, table_violations
from .casestudies import spin_cover_case_study, z2_example_case_study
from .constructions import (
    ConstructionError,
    MatchedTriple,
    SemiQuadruple,
    gamma,
    gamma_predicates,
    quadruple_construct,
)
from .double import (
    DoubleGroupoid,
    DoubleGroupoidError,
    core_diagram,
    eckmann_hilton_check,
    exactness_check,
    fiber_size_check,
    predicate_report,
    verify,
)
from .enumeration import EnumerationTask, enumerate_double_groups
from .groupoid import (
    CocycleData,
    FiniteGroupoid,
    GroupoidError,
    Section,
    decompose_components,
    groupoid_from_cocycle,
)
from .lorentz import LorentzError, iwasawa_decompose, poincare_double_group_check

EXIT_OK, EXIT_MATH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


class MathFailure(Exception):
    def __init__(self, report: dict, message: str):
        super().__init__(message)
        self.report = report


# -- workspace ---------------------------------------------------------------


@dataclass
class Entry:
    kind: str
    value: object
    provenance: str


@dataclass
class Workspace:
    """Loaded values by name, each with where it came from."""

    entries: dict[str, Entry] = field(default_factory=dict)

    def register(self, name: str, entry: Entry) -> Entry:
        self.entries[name] = entry
        return entry

    def load(self, name: str) -> Entry:
        if name in self.entries:
            return self.entries[name]
        path, text = read_source(name)
        data = parse_json(text, path)
        return self.register(name, load_value(data, path))


def bundled(name: str) -> Path | None:
    fname = name if name.endswith(".json") else name + ".json"
    ref = resources.files("dblgpd") / "fixtures" / fname
    return Path(str(ref)) if ref.is_file() else None


def read_source(name: str) -> tuple[str, str]:
    p = Path(name)
    if not p.is_file():
        b = bundled(name)
        if b is None:
            raise InputError(f"no file or bundled fixture named {name!r}")
        p = b
    return str(p), p.read_text()


def parse_json(text: str, where: str) -> dict:
    if not text.strip():
        raise InputError(f"{where} is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    return data


def parse_group(spec) -> FiniteGroup:
    """"cyclic:4", "dihedral:3", "cyclic:2*cyclic:2", "z3_semidirect_klein", or a group JSON object."""
    try:
        if isinstance(spec, dict):
            return FiniteGroup.from_dict(spec)
        if not isinstance(spec, str):
            raise InputError(f"cannot read a group from {spec!r}")
        if "*" in spec:
            parts = [parse_group(s) for s in spec.split("*")]
            g = parts[0]
            for h in parts[1:]:
                g = direct_product(g, h)
            return g
        name, _, args = spec.partition(":")
        return build(name, *(int(a) for a in args.split(",") if a))
    except (GroupError, ValueError, TypeError) as exc:
        raise InputError(f"bad group {spec!r}: {exc}") from None


def _members(g: FiniteGroup, spec) -> Subgroup:
    try:
        return Subgroup(g, spec)
    except (GroupError, TypeError) as exc:
        raise InputError(f"bad subgroup {spec!r}: {exc}") from None


def construct_from_descriptor(d: dict):
    kind = d.get("kind")
    if "group" not in d:
        raise InputError("construction descriptor needs a 'group'")
    g = parse_group(d["group"])
    H = _members(g, d.get("H", [0]))
    K = _members(g, d.get("K", [0]))
    if kind == "gamma":
        t = MatchedTriple.from_group(g, H, K)
        return gamma(t), {"triple_flags": t.flags(), "gamma_predicates": dict(zip(("exclusive", "maximal"), gamma_predicates(t)))}
    if kind == "quadruple":
        q = SemiQuadruple(g, H, K, _members(g, d.get("A", [0])))
        res = quadruple_construct(q)
        return res.dg, {"full_factorization": q.full_factorization, "section_is_double_functor": res.section.check()}
    raise InputError(f"unknown construction kind {kind!r}")


def load_value(data: dict, where: str) -> Entry:
    kind = data.get("kind")
    try:
        if kind == "group" or (kind is None and "mul" in data):
            table = np.asarray(data["mul"])
            if table.ndim != 2 or table.shape[0] != table.shape[1] or data.get("order", len(table)) != len(table):
                raise InputError(f"{where}: group table must be square and match the declared order")
            problems = table_violations(table.astype(np.int64))
            if problems:
                raise MathFailure({"kind": "group", "ok": False, "violations": problems}, "group fails its axioms")
            return Entry("group", FiniteGroup.from_dict(data), where)
        if kind == "groupoid":
            return Entry("groupoid", FiniteGroupoid.from_dict(data, validate=False), where)
        if kind == "double_groupoid":
            return Entry("double_groupoid", DoubleGroupoid.from_dict(data), where)
        if kind in ("gamma", "quadruple"):
            dg, _ = construct_from_descriptor(data)
            return Entry("double_groupoid", dg, f"{where} ({kind} construction)")
        if kind == "cocycle":
            return Entry("cocycle", CocycleData.from_dict(data), where)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (ConstructionError,)):
            raise
        raise InputError(f"{where}: {exc}") from None
    raise InputError(f"{where}: unknown kind {kind!r}")


# -- commands ------------------------------------------------------------------


def cmd_verify(args, ws: Workspace) -> tuple[dict, str]:
    e = ws.load(args.path)
    if e.kind == "group":
        problems = e.value.check()
        rep = {"kind": "group", "order": e.value.order, "ok": not problems, "violations": problems}
    elif e.kind == "groupoid":
        problems = e.value.check()
        rep = {"kind": "groupoid", "ok": not problems, "violations": [str(v) for v in problems]}
    elif e.kind == "cocycle":
        problems = e.value.violations()
        rep = {"kind": "cocycle", "ok": not problems, "violations": [str(v) for v in problems[:5]]}
    else:
        rep = {"kind": "double_groupoid", **verify(e.value).to_dict()}
    if not rep["ok"]:
        raise MathFailure(rep, f"{e.kind} fails its axioms")
    return rep, f"{e.kind} passes all axioms"


def _load_dg(ws: Workspace, name: str) -> DoubleGroupoid:
    e = ws.load(name)
    if e.kind != "double_groupoid":
        raise InputError(f"{name} is a {e.kind}, not a double groupoid")
    rep = verify(e.value)
    if not rep.ok:
        raise MathFailure({"verify": rep.to_dict()}, f"{name} is not a valid double groupoid")
    return e.value


def cmd_construct(args, ws: Workspace) -> tuple[dict, str]:
    path, text = read_source(args.descriptor)
    d = parse_json(text, path)
    dg, extra = construct_from_descriptor(d)
    rep = verify(dg)
    out = {
        "kind": d["kind"],
        "squares": dg.squares,
        "verify": rep.to_dict(),
        "predicates": predicate_report(dg),
        **extra,
        "double_groupoid": dg.to_dict(),
    }
    if not rep.ok:
        raise MathFailure(out, "construction output fails verify")
    pr = out["predicates"]
    flags = ", ".join(k for k in ("slim", "exclusive", "maximal", "vacant") if pr[k])
    return out, f"{d['kind']}: {dg.squares} squares; {flags or 'no predicates hold'}"


def cmd_predicates(args, ws: Workspace) -> tuple[dict, str]:
    dg = _load_dg(ws, args.name)
    rep = predicate_report(dg)
    agree = all(v for k, v in rep.items() if k.endswith("agree") or k.startswith("vacant_iff"))
    if not agree:
        raise MathFailure(rep, "predicate characterizations disagree")
    return rep, ", ".join(f"{k}={rep[k]}" for k in ("slim", "exclusive", "maximal", "vacant"))


def cmd_core_diagram(args, ws: Workspace) -> tuple[dict, str]:
    dg = _load_dg(ws, args.name)
    cd = core_diagram(dg)
    ex = exactness_check(cd)
    out = {
        "summary": cd.summary(),
        "exactness": ex,
        "eckmann_hilton": eckmann_hilton_check(dg),
        "fiber_sizes": fiber_size_check(dg),
    }
    if not (ex["ok"] and out["eckmann_hilton"]["ok"] and out["fiber_sizes"]["ok"]):
        raise MathFailure(out, "core diagram check fails")
    return out, f"core diagram exact; bundle orders {cd.summary()['bundle_orders']}"


def cmd_enumerate(args, ws: Workspace) -> tuple[dict, str]:
    if args.task:
        path, text = read_source(args.task)
        d = parse_json(text, path)
    else:
        d = {}
    h = parse_group(d.get("horizontal", args.horizontal))
    v = parse_group(d.get("vertical", args.vertical))
    core = parse_group(d.get("core", args.core))
    try:
        task = EnumerationTask(
            h,
            v,
            core,
            require_slim=d.get("require_slim", args.slim),
            require_exclusive=d.get("require_exclusive", args.exclusive),
            require_maximal=d.get("require_maximal", args.maximal),
            max_candidates=d.get("max_candidates", args.cap),
            time_budget=d.get("time_budget", args.time_budget),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    res = enumerate_double_groups(task)
    out = res.to_dict(include_tables=not args.no_tables)
    msg = f"{len(res.classes)} isomorphism classes ({res.raw_count} raw)"
    if res.incomplete:
        raise CapExceeded(json.dumps(out, sort_keys=True))
    return out, msg


def cmd_decompose(args, ws: Workspace) -> tuple[dict, str]:
    e = ws.load(args.name)
    if e.kind == "cocycle":
        g = groupoid_from_cocycle(e.value)
    elif e.kind == "groupoid":
        g = e.value
        problems = g.check()
        if problems:
            raise MathFailure({"violations": [str(p) for p in problems]}, "input is not a groupoid")
    else:
        raise InputError(f"{args.name} is a {e.kind}; decompose needs a groupoid or cocycle data")
    s = None
    if args.section:
        path, text = read_source(args.section)
        s = Section.from_dict(g, parse_json(text, path))
    comps = decompose_components(g, s)
    out = {"components": []}
    ok = True
    for block, dec in comps:
        ok = ok and dec.report["ok"]
        out["components"].append({"objects": block, "report": dec.report, "cocycle": dec.data.to_dict()})
    if not ok:
        raise MathFailure(out, "decomposition check fails")
    return out, f"{len(comps)} component(s) decomposed; cocycle identities hold"


def _read_matrix(src: str) -> np.ndarray:
    text = sys.stdin.read() if src == "-" else read_source(src)[1]
    text = text.strip()
    if not text:
        raise InputError("empty matrix input")
    try:
        if text[0] in "[{":
            d = json.loads(text)
            if isinstance(d, dict):
                d = d.get("matrix")
            m = np.asarray(d, dtype=float)
        else:
            m = np.asarray([float(x) for x in text.split()], dtype=float)
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read a 4x4 matrix: {exc}") from None
    if m.size != 16:
        raise InputError(f"expected 16 numbers, got {m.size}")
    return m.reshape(4, 4)


def cmd_lorentz(args, ws: Workspace) -> tuple[dict, str]:
    if args.action == "decompose":
        m = _read_matrix(args.matrix)
        try:
            f = iwasawa_decompose(m)
        except LorentzError as exc:
            raise InputError(str(exc)) from None
        return f.to_dict(), f"k a n residual {f.residual:.2e}"
    rep = poincare_double_group_check(args.samples, args.seed)
    if not rep["ok"]:
        raise MathFailure(rep, "Poincare double group laws fail")
    return rep, f"max residual {rep['max_residual']:.2e} over {rep['samples']} samples"


def cmd_case_study(args, ws: Workspace) -> tuple[dict, str]:
    if args.study == "spin":
        rep = spin_cover_case_study()
        msg = f"|(2T x 2T)/diag center| = {rep['pairs']['full_quotient_order']}"
    elif args.study == "poincare":
        rep = poincare_double_group_check(args.samples, args.seed)
        msg = f"max residual {rep['max_residual']:.2e}"
    else:
        rep = z2_example_case_study()
        msg = f"classes: {rep['classes']}"
    if not rep["ok"]:
        raise MathFailure(rep, f"case study {args.study} fails")
    return rep, msg


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    common.add_argument("--cap", type=int, default=1 << 20, help="candidate cap for searches")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=1000)

    p = argparse.ArgumentParser(prog="dblgpd", description="Finite double groupoids: verify, construct, enumerate.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check the axioms of a group, groupoid or double groupoid file")
    s.add_argument("path")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("construct", parents=[common], help="build gamma or quadruple from a JSON descriptor")
    s.add_argument("descriptor")
    s.set_defaults(fn=cmd_construct)

    s = sub.add_parser("predicates", parents=[common], help="slim / exclusive / maximal / vacant")
    s.add_argument("name")
    s.set_defaults(fn=cmd_predicates)

    s = sub.add_parser("core-diagram", parents=[common], help="core diagram and exactness")
    s.add_argument("name")
    s.set_defaults(fn=cmd_core_diagram)

    s = sub.add_parser("enumerate", parents=[common], help="enumerate double groups over fixed boundary groups")
    s.add_argument("--task", help="JSON task file")
    s.add_argument("--horizontal", default="cyclic:2")
    s.add_argument("--vertical", default="cyclic:2")
    s.add_argument("--core", default="cyclic:1")
    s.add_argument("--slim", action="store_true")
    s.add_argument("--exclusive", action="store_true")
    s.add_argument("--maximal", action="store_true")
    s.add_argument("--time-budget", type=float, default=60.0)
    s.add_argument("--no-tables", action="store_true", help="omit serialized double groups")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("decompose", parents=[common], help="cocycle data of a groupoid via a section")
    s.add_argument("name")
    s.add_argument("--section", help="JSON section file")
    s.set_defaults(fn=cmd_decompose)

    s = sub.add_parser("lorentz", parents=[common], help="Iwasawa factors and Poincare checks")
    s.add_argument("action", choices=["decompose", "check"])
    s.add_argument("matrix", nargs="?", default="-", help="file with 16 numbers or JSON (decompose only)")
    s.set_defaults(fn=cmd_lorentz)

    s = sub.add_parser("case-study", parents=[common], help="spin, poincare or z2-example")
    s.add_argument("study", choices=["spin", "poincare", "z2-example"])
    s.set_defaults(fn=cmd_case_study)
    return p


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    ws = Workspace()
    try:
        report, msg = args.fn(args, ws)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MathFailure as exc:
        _emit(exc.report, args.output)
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    except CapExceeded as exc:
        print(f"cap exceeded: {str(exc)[:200]}", file=sys.stderr)
        return EXIT_CAP
    except (ConstructionError, GroupoidError, DoubleGroupoidError, GroupError) as exc:
        _emit({"ok": False, "error": str(exc)}, args.output)
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    _emit(report, args.output)
    print(msg, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
