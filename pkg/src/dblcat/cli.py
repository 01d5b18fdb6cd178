"""Command line interface.

    dblcat validate DOC        check every law for the structure in DOC
    dblcat pi2 DOC             the monoids pi2(C, a)
    dblcat induce DOC          the (op)indexing a double category induces
    dblcat crossprod DOC       build the crossed product of an indexing
    dblcat framed DOC          framedness; with --classify only the ff/ad morphisms
    dblcat length DOC          the length one test and canonical decompositions
    dblcat evalcheck DOC       the evaluation functor from the crossed product
    dblcat witness DOC         two squares the evaluation functor identifies
    dblcat instance KIND ...   write a document for a built-in instance

Exit status: 0 when the check passes or the answer is yes, 1 on violations
or a no, 2 on unreadable input, bad usage or an exhausted budget.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .core_cat import validate_category
from .crossprod import (build_crossed_product, check_classes, check_eval_injective, check_eval_properties,
                        evaluation_functor, horizontalization_matches)
from .doublecat import validate_double_category
from .errors import BudgetExceeded, DocumentError, DoubleCatError, NotFramed, as_budget
from .framed import absolutely_dense_morphisms, fully_faithful_morphisms, is_framed
from .indexing import INDEXING, OPINDEXING, check_induces, induce_indexing, induce_opindexing, validate_indexing
from .instances import (BASE_CATEGORIES, INSTANCE_KINDS, RESTRICTIONS, InstanceSpec, build_instance,
                        find_noninjectivity_witness, replay_noninjectivity)
from .length import all_squares_canonical, globularly_generated_piece, is_length_one
from .pi2 import pi2_monoid
from .report import _plain
from .serialize import dumps, read_file, serialize
from .twocat import validate_decorated, validate_two_category


class InputError(Exception):
    pass


class Output:
    """Collects `key: value` lines and the machine block."""

    def __init__(self, command, args):
        self.lines = [f"command: {command}"]
        self.machine = {"command": command}
        self.witnesses = args.witnesses

    def put(self, key, value):
        if isinstance(value, bool):
            text = "yes" if value else "no"
        elif isinstance(value, (int, str)):
            text = str(value)
        else:
            text = dumps(_plain(value)).strip()
        self.lines.append(f"{key}: {text}")
        self.machine[key] = _plain(value)

    def report(self, name, rep):
        self.put(f"{name}.ok", rep.ok)
        self.put(f"{name}.violations", len(rep.violations))
        if self.witnesses != "none":
            d = rep.to_dict(witnesses=self.witnesses)
            for v in d.get("violations", []):
                self.lines.append(f"{name}.violation: {v['law']} {dumps(v['witness']).strip()}"
                                  + (f" ({v['detail']})" if v["detail"] else ""))
        for note in rep.notes:
            self.lines.append(f"{name}.note: {note}")
        for k, v in sorted(rep.info.items()):
            if isinstance(v, (int, str, bool)):
                self.put(f"{name}.{k}", v)
        self.machine[name] = rep.to_dict(witnesses=self.witnesses)

    def text(self, machine):
        out = "\n".join(self.lines) + "\n"
        if machine:
            out += "--- machine\n" + dumps(self.machine)
        return out


def _load(path):
    try:
        kind, obj = read_file(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    if kind == "instance_spec":
        try:
            obj = build_instance(obj)
        except ValueError as e:
            raise InputError(str(e)) from None
        kind = "double_category"
    return kind, obj


def _double(path):
    kind, obj = _load(path)
    if kind != "double_category":
        raise InputError(f"{path} holds a {kind}, a double category is needed")
    return obj


def _label(C, f):
    return C.vertical.label(f)


# commands


def cmd_validate(args, out):
    kind, obj = _load(args.document)
    out.put("kind", kind)
    if kind == "category":
        rep = validate_category(obj)
    elif kind == "two_category":
        rep = validate_two_category(obj, args.budget)
    elif kind == "decorated":
        rep = validate_decorated(obj, args.budget)
    elif kind == "indexing":
        rep = validate_indexing(obj)
    else:
        out.put("name", obj.name)
        rep = validate_double_category(obj, args.budget)
    out.report("validate", rep)
    return rep.ok


def cmd_pi2(args, out):
    C = _double(args.document)
    objects = [args.object] if args.object is not None else list(C.vertical.objects)
    for a in objects:
        m = pi2_monoid(C, a)
        out.put(f"pi2[{a}].size", m.size)
        out.put(f"pi2[{a}].unit", m.presentation.unit)
        out.put(f"pi2[{a}].table", m.presentation.table)
        out.put(f"pi2[{a}].squares", list(m.embedding))
    return True


def _induce(C, direction):
    return induce_opindexing(C) if direction == OPINDEXING else induce_indexing(C)


def cmd_induce(args, out):
    C = _double(args.document)
    Phi = _induce(C, args.direction)
    out.put("direction", Phi.direction)
    for f in C.vertical.mors:
        out.put(f"map[{_label(C, f)}]", list(Phi.homs[f]))
    rep = check_induces(C, Phi, args.budget)
    out.report("induces", rep)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize(Phi))
        out.put("written", args.output)
    return rep.ok


def _indexing_from(path, direction):
    kind, obj = _load(path)
    if kind == "indexing":
        return obj, None
    if kind == "double_category":
        return _induce(obj, direction), obj
    raise InputError(f"{path} holds a {kind}, an indexing or double category is needed")


def cmd_crossprod(args, out):
    Phi, _ = _indexing_from(args.document, args.direction)
    q = build_crossed_product(Phi.base, Phi, args.budget)
    D = q.dc
    out.put("direction", Phi.direction)
    out.put("squares", D.known_square_count())
    out.put("nonglobular_classes", len(q.classes))
    out.put("one_step_is_closure", q.one_step_is_closure)
    ok = True
    for name, rep in (("classes", check_classes(q)),
                      ("validate", validate_double_category(D, args.budget)),
                      ("horizontalization", horizontalization_matches(q, args.budget)),
                      ("induces", check_induces(D, Phi, args.budget))):
        out.report(name, rep)
        ok = ok and rep.ok
    d = is_length_one(D, args.budget)
    out.put("length_one", bool(d))
    ok = ok and bool(d)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize(D))
        out.put("written", args.output)
    return ok


def cmd_framed(args, out):
    C = _double(args.document)
    if not args.classify:
        rep = is_framed(C, args.budget)
        out.report("framed", rep)
        return rep.ok
    ff = fully_faithful_morphisms(C, args.budget)
    ad = absolutely_dense_morphisms(C, args.budget)
    out.put("fully_faithful", [_label(C, f) for f in ff])
    out.put("absolutely_dense", [_label(C, f) for f in ad])
    funcs = getattr(C, "funcs", None)
    if funcs is not None:
        V = C.vertical
        inj = [f for f in V.mors if len(set(funcs[f])) == len(funcs[f])]
        sur = [f for f in V.mors if len(set(funcs[f])) == V.target(f) + 1]
        out.put("fully_faithful_are_injections", ff == inj)
        out.put("absolutely_dense_are_surjections", ad == sur)
    return True


def cmd_length(args, out):
    C = _double(args.document)
    gamma = globularly_generated_piece(C, args.budget)
    d = is_length_one(C, args.budget, gamma=gamma)
    out.put("gamma_squares", len(gamma))
    out.put("length_one", bool(d))
    if d.witness is not None and out.witnesses != "none":
        out.put("length_one.witness", d.witness)
    c = all_squares_canonical(C, args.budget, gamma=gamma)
    out.put("all_canonical", bool(c))
    if c.witness is not None and out.witnesses != "none":
        out.put("all_canonical.witness", c.witness)
    return bool(d)


def cmd_evalcheck(args, out):
    C = _double(args.document)
    Phi = _induce(C, args.direction)
    q = build_crossed_product(Phi.base, Phi, args.budget)
    bang = evaluation_functor(q, C, args.budget)
    rep = check_eval_properties(bang, q, C, args.budget)
    out.report("eval", rep)
    out.put("h_star_identity", not any(v.law == "horizontalization-not-identity" for v in rep.violations))
    out.put("full_on_gamma", not any(v.law == "not-full-on-gamma" for v in rep.violations))
    inj = check_eval_injective(bang, q)
    out.put("injective", bool(inj))
    if inj.witness is not None and out.witnesses != "none":
        out.put("injective.witness", inj.witness)
    return rep.ok


def cmd_witness(args, out):
    C = _double(args.document)
    w = find_noninjectivity_witness(C, args.budget)
    out.put("found", w is not None)
    if w is not None:
        out.put("first", w.first)
        out.put("second", w.second)
        out.put("image", w.image)
        out.put("replayed", replay_noninjectivity(C, w))
    return w is not None


def cmd_instance(args, out):
    spec = InstanceSpec(args.kind, n=args.n, m=args.m, apex=args.apex, category=args.category,
                        restriction=args.restriction)
    try:
        C = build_instance(spec)
    except (ValueError, TypeError) as e:
        raise InputError(str(e)) from None
    out.put("name", C.name)
    text = serialize(C) if args.materialize else serialize(spec)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.put("written", args.output)
    else:
        out.lines.append(text.rstrip("\n"))
    return True


COMMANDS = {"validate": cmd_validate, "pi2": cmd_pi2, "induce": cmd_induce, "crossprod": cmd_crossprod,
            "framed": cmd_framed, "length": cmd_length, "evalcheck": cmd_evalcheck, "witness": cmd_witness,
            "instance": cmd_instance}


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="cap on enumeration steps")
    common.add_argument("--witnesses", choices=("none", "first", "all"), default="first")
    common.add_argument("--machine", action="store_true", help="append a JSON block")

    p = argparse.ArgumentParser(prog="dblcat", description="Finite double categories and their crossed products.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "pi2", "induce", "crossprod", "framed", "length", "evalcheck", "witness"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("document")
        if name in ("induce", "crossprod", "evalcheck"):
            sp.add_argument("--direction", choices=(OPINDEXING, INDEXING), default=OPINDEXING)
        if name in ("induce", "crossprod"):
            sp.add_argument("--output", "-o")
        if name == "pi2":
            sp.add_argument("--object", type=int)
        if name == "framed":
            sp.add_argument("--classify", action="store_true",
                            help="list fully faithful and absolutely dense morphisms instead")
    sp = sub.add_parser("instance", parents=[common])
    sp.add_argument("kind", choices=INSTANCE_KINDS)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--apex", type=int)
    sp.add_argument("--category", choices=BASE_CATEGORIES)
    sp.add_argument("--restriction", choices=[r for r in RESTRICTIONS if r])
    sp.add_argument("--materialize", action="store_true", help="write the full tables, not just the spec")
    sp.add_argument("--output", "-o")
    return p


def run_command(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.budget = as_budget(args.budget, args.command)
    out = Output(args.command, args)
    if hasattr(args, "document"):
        out.put("input", args.document)
    try:
        ok = COMMANDS[args.command](args, out)
    except (InputError, DocumentError) as e:
        print(f"error: {e}", file=stderr)
        return 2
    except BudgetExceeded as e:
        out.put("result", "budget-exceeded")
        out.put("steps", e.witness)
        stdout.write(out.text(args.machine))
        print(f"error: {e}", file=stderr)
        return 2
    except NotFramed as e:
        out.put("result", "not-framed")
        out.put("witness", e.witness)
        stdout.write(out.text(args.machine))
        return 1
    except DoubleCatError as e:
        out.put("result", "fail")
        out.put("error", type(e).__name__)
        out.put("message", str(e))
        if e.witness is not None:
            out.put("witness", e.witness)
        stdout.write(out.text(args.machine))
        return 1
    out.put("result", "pass" if ok else "fail")
    stdout.write(out.text(args.machine))
    return 0 if ok else 1


def main(argv=None):
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
