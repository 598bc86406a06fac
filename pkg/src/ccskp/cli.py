"""Command-line front end.

Exit codes are a stable contract: 0 success / relation holds, 1 it does not
hold (or the query answer is negative), 2 malformed input, 3 a resource
bound was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import causality, lts, prooflabels, reach, syntax, theorems

EXIT_OK = 0
EXIT_NO = 1
EXIT_BAD_INPUT = 2
EXIT_RESOURCE = 3


def _ast(p: syntax.Process) -> str:
    t = type(p)
    if t is syntax.Nil:
        return "Nil"
    if t is syntax.Prefix:
        return f"Prefix({p.label}, {_ast(p.body)})"
    if t is syntax.KeyedPrefix:
        return f"KeyedPrefix({p.label}, {p.key}, {_ast(p.body)})"
    if t is syntax.Sum:
        return f"Sum({_ast(p.left)}, {_ast(p.right)})"
    if t is syntax.Par:
        return f"Par({_ast(p.left)}, {_ast(p.right)})"
    return f"Restrict({p.name}, {_ast(p.body)})"


def _parse_proc(text: str) -> syntax.Process:
    try:
        return syntax.parse(text)
    except syntax.ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT) from None


def _parse_label(text: str) -> prooflabels.ProofLabel:
    try:
        lab = prooflabels.parse_label(text)
    except syntax.ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT) from None
    if not prooflabels.is_valid(lab):
        print(f"error: {text} is not a valid proof label", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)
    return lab


def cmd_parse(args) -> int:
    print(_ast(_parse_proc(args.process)))
    return EXIT_OK


def cmd_print(args) -> int:
    print(syntax.pretty_print(_parse_proc(args.process)))
    return EXIT_OK


def cmd_steps(args) -> int:
    p = _parse_proc(args.process)
    steps = []
    if args.dir in (None, "f"):
        steps.extend(lts.forward_steps(p))
    if args.dir in (None, "b"):
        steps.extend(lts.backward_steps(p))
    for i, t in enumerate(steps):
        print(f"{i}: {lts.format_transition(t)}")
    return EXIT_OK


def cmd_check(args) -> int:
    l1 = _parse_label(args.label1)
    l2 = _parse_label(args.label2)
    deriv = causality.CHECKERS[args.relation](l1, l2)
    if deriv is None:
        print(f"{args.relation} does not hold")
        return EXIT_NO
    print(f"{args.relation} holds")
    print(causality.format_derivation(deriv))
    return EXIT_OK


def cmd_graph(args) -> int:
    p = _parse_proc(args.process)
    try:
        g = reach.build_graph(p, state_cap=args.state_cap)
    except reach.StateLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    if args.format == "dot":
        sys.stdout.write(reach.graph_to_dot(g))
    else:
        print(reach.graph_to_json(g))
    return EXIT_OK


def cmd_origin(args) -> int:
    p = _parse_proc(args.process)
    try:
        print(syntax.pretty_print(reach.origin(p, state_cap=args.state_cap)))
    except reach.Unreachable as e:
        print(f"not reachable: {e}", file=sys.stderr)
        return EXIT_NO
    except reach.StateLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def cmd_reachable(args) -> int:
    p = _parse_proc(args.process)
    try:
        ok = reach.is_reachable(p, state_cap=args.state_cap)
    except reach.StateLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    print("reachable" if ok else "not reachable")
    return EXIT_OK if ok else EXIT_NO


def _derive_or_die(proc_text: str, dir_text: str, label_text: str) -> lts.Transition:
    p = _parse_proc(proc_text)
    lab = _parse_label(label_text)
    direction = lts.FORWARD if dir_text.lower() in ("f", "forward") else lts.BACKWARD
    t = lts.derive(p, direction, lab)
    if t is None:
        print(
            f"error: {proc_text} has no {direction} step labelled {label_text}",
            file=sys.stderr,
        )
        raise SystemExit(EXIT_BAD_INPUT)
    return t


def cmd_connected(args) -> int:
    t1 = _derive_or_die(args.process1, args.dir1, args.label1)
    t2 = _derive_or_die(args.process2, args.dir2, args.label2)
    try:
        path = reach.connected(t1, t2, state_cap=args.state_cap)
    except reach.StateLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    if path is None:
        print("not connected")
        return EXIT_NO
    print(f"connected by a path of length {len(path)}")
    for step in path.steps:
        print("  " + lts.format_transition(step))
    return EXIT_OK


def cmd_realise(args) -> int:
    lab = _parse_label(args.label)
    w = theorems.realise(lab)
    print(f"realiser: {syntax.pretty_print(w.realiser)}")
    print(f"step:     {lts.format_transition(w.step)}")
    return EXIT_OK


def _split_names(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _split_keys(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(",") if s.strip())


def cmd_verify(args) -> int:
    corpus_names = _split_names(args.names) if args.names else ("a", "b")
    label_names = _split_names(args.names) if args.names else ("a",)
    keys = _split_keys(args.keys)
    reports: list[theorems.SuiteReport] = []

    def corpus():
        return theorems.default_corpus(corpus_names, args.max_size)

    def labels():
        return prooflabels.enumerate_valid(label_names, keys, args.depth)

    try:
        if args.suite in ("loop", "all"):
            reports.append(theorems.verify_loop_lemma(corpus(), args.state_cap))
        if args.suite in ("validity", "all"):
            reports.append(theorems.verify_label_validity(corpus(), args.state_cap))
        if args.suite in ("thm1", "all"):
            reports.append(theorems.verify_theorem1_corpus(corpus(), args.state_cap))
            reports.append(theorems.verify_connected_witnesses(labels(), args.workers))
        if args.suite in ("thm2", "all"):
            reports.append(theorems.verify_complementarity(labels()))
            reports.append(theorems.verify_relation_algebra(labels()))
            reports.append(theorems.verify_realisation(labels()))
        if args.suite in ("lemmas", "all"):
            reports.append(theorems.verify_origins(corpus(), args.state_cap))
            reports.append(theorems.verify_structural_lemmas(corpus(), args.state_cap))
    except reach.StateLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    scope = (
        f"process corpus: names={','.join(corpus_names)} max_operators={args.max_size}; "
        f"label corpus: names={','.join(label_names)} keys={','.join(map(str, keys))} "
        f"depth={args.depth}"
    )
    print(scope)
    for rep in reports:
        print()
        print(rep.summary())
    failed = [r for r in reports if not r.ok]
    print()
    print(f"suites run: {len(reports)}, failed: {len(failed)}")
    return EXIT_OK if not failed else EXIT_NO


@dataclass
class Session:
    """Interactive stepper state: replaying ``history`` from ``initial``
    always reproduces ``current``."""

    initial: syntax.Process
    current: syntax.Process
    history: list[lts.Transition] = field(default_factory=list)

    def apply(self, t: lts.Transition) -> None:
        self.history.append(t)
        self.current = t.target

    def undo(self) -> lts.Transition:
        undone = lts.reverse(self.history.pop())
        self.current = undone.target
        return undone

    def consistent(self) -> bool:
        at = self.initial
        for t in self.history:
            if t.source != at:
                return False
            at = t.target
        return at == self.current


def cmd_repl(args) -> int:
    session = Session(initial=_parse_proc(args.process), current=_parse_proc(args.process))
    out = sys.stdout

    def show():
        print(f"state: {syntax.pretty_print(session.current)}", file=out)
        fwd = lts.forward_steps(session.current)
        bwd = lts.backward_steps(session.current)
        for i, t in enumerate(fwd):
            print(f"  f {i}: {lts.format_transition(t)}", file=out)
        for i, t in enumerate(bwd):
            print(f"  b {i}: {lts.format_transition(t)}", file=out)
        if not fwd and not bwd:
            print("  (no transitions)", file=out)
        return fwd, bwd

    fwd, bwd = show()
    for line in sys.stdin:
        words = line.split()
        if not words:
            continue
        cmd = words[0]
        if cmd == "quit":
            break
        if cmd == "show":
            fwd, bwd = show()
            continue
        if cmd == "undo":
            if not session.history:
                print("nothing to undo", file=out)
                continue
            undone = session.undo()
            print(f"undid: {lts.format_transition(undone)}", file=out)
            fwd, bwd = show()
            continue
        if cmd in ("f", "b") and len(words) == 2 and words[1].isdigit():
            menu = fwd if cmd == "f" else bwd
            idx = int(words[1])
            if idx >= len(menu):
                print(f"no such transition: {cmd} {idx}", file=out)
                continue
            t = menu[idx]
            session.apply(t)
            print(f"applied: {lts.format_transition(t)}", file=out)
            fwd, bwd = show()
            continue
        print("commands: f N | b N | undo | show | quit", file=out)
    assert session.consistent()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccskp",
        description="Reversible process calculus workbench: proved forward and "
        "backward transitions, reachability, causality relations, and "
        "exhaustive metatheory checks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_cap(p):
        p.add_argument("--state-cap", type=int, default=100_000)

    p = sub.add_parser("parse", help="parse a process and show its syntax tree")
    p.add_argument("process")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("print", help="parse and pretty-print a process")
    p.add_argument("process")
    p.set_defaults(func=cmd_print)

    p = sub.add_parser("steps", help="list the enabled proved transitions")
    p.add_argument("process")
    p.add_argument("--dir", choices=("f", "b"))
    p.set_defaults(func=cmd_steps)

    p = sub.add_parser("check", help="decide a causality relation on two labels")
    p.add_argument("relation", choices=("conn", "dep", "indep"))
    p.add_argument("label1")
    p.add_argument("label2")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="export the combined transition graph")
    p.add_argument("process")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    add_cap(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("origin", help="the unique standard process in the component")
    p.add_argument("process")
    add_cap(p)
    p.set_defaults(func=cmd_origin)

    p = sub.add_parser("reachable", help="is some standard process in the component?")
    p.add_argument("process")
    add_cap(p)
    p.set_defaults(func=cmd_reachable)

    p = sub.add_parser(
        "connected", help="search a combined path between two transitions' sources"
    )
    p.add_argument("process1")
    p.add_argument("dir1", choices=("f", "b", "forward", "backward"))
    p.add_argument("label1")
    p.add_argument("process2")
    p.add_argument("dir2", choices=("f", "b", "forward", "backward"))
    p.add_argument("label2")
    add_cap(p)
    p.set_defaults(func=cmd_connected)

    p = sub.add_parser("realise", help="a standard process firing the given label")
    p.add_argument("label")
    p.set_defaults(func=cmd_realise)

    p = sub.add_parser("verify", help="run an exhaustive verification suite")
    p.add_argument("suite", choices=("loop", "validity", "thm1", "thm2", "lemmas", "all"))
    p.add_argument(
        "--names",
        help="comma-separated names; default a,b for process corpora, a for label corpora",
    )
    p.add_argument("--keys", default="1,2", help="comma-separated keys for label corpora")
    p.add_argument("--depth", type=int, default=3, help="decorator budget for labels")
    p.add_argument("--max-size", type=int, default=4, help="operator budget for processes")
    p.add_argument("--workers", type=int, default=None)
    add_cap(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repl", help="interactive reversible stepper")
    p.add_argument("process")
    p.set_defaults(func=cmd_repl)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
