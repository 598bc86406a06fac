"""Process terms of CCSK, a reversible CCS with keyed prefixes.

A process is an ordinary finite CCS term in which already-executed prefixes
are kept in place, each decorated with a key.  A process without keys is
*standard*.  This module defines the term grammar, the concrete text syntax,
and the basic structural predicates.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache


# ---------------------------------------------------------------------------
# Actions


class Label:
    """An action: input on a name, output on a name, or the silent action."""

    __slots__ = ()

    def __str__(self) -> str:  # pragma: no cover - overridden
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class Input(Label):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Output(Label):
    name: str

    def __str__(self) -> str:
        return "~" + self.name


@dataclass(frozen=True, slots=True)
class Tau(Label):
    def __str__(self) -> str:
        return "tau"


TAU = Tau()


def complement(label: Label) -> Label:
    """Swap input/output polarity.  The silent action has no complement."""
    if type(label) is Input:
        return Output(label.name)
    if type(label) is Output:
        return Input(label.name)
    raise ValueError("tau has no complement")


# ---------------------------------------------------------------------------
# Processes


class Process:
    __slots__ = ()

    def __str__(self) -> str:
        return pretty_print(self)


# Process trees are hashed constantly (memo tables, state sets, graph
# indices); each node caches its hash on first use.


@dataclass(frozen=True, slots=True, eq=True)
class Nil(Process):
    def __hash__(self) -> int:
        return 0x9E3779B9


@dataclass(frozen=True, slots=True, eq=True)
class Prefix(Process):
    label: Label
    body: Process
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((1, self.label, self.body)) or 1
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True, slots=True, eq=True)
class KeyedPrefix(Process):
    label: Label
    key: int
    body: Process
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((2, self.label, self.key, self.body)) or 1
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True, slots=True, eq=True)
class Sum(Process):
    left: Process
    right: Process
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((3, self.left, self.right)) or 1
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True, slots=True, eq=True)
class Par(Process):
    left: Process
    right: Process
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((4, self.left, self.right)) or 1
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True, slots=True, eq=True)
class Restrict(Process):
    name: str
    body: Process
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((5, self.name, self.body)) or 1
            object.__setattr__(self, "_h", h)
        return h


NIL = Nil()


@lru_cache(maxsize=None)
def keys_of(p: Process) -> frozenset[int]:
    """The set of keys decorating prefixes anywhere in ``p``."""
    t = type(p)
    if t is Nil:
        return frozenset()
    if t is Prefix:
        return keys_of(p.body)
    if t is KeyedPrefix:
        return keys_of(p.body) | {p.key}
    if t is Sum or t is Par:
        return keys_of(p.left) | keys_of(p.right)
    if t is Restrict:
        return keys_of(p.body)
    raise TypeError(f"not a process: {p!r}")


def is_std(p: Process) -> bool:
    """True iff ``p`` carries no keys."""
    return not keys_of(p)


@lru_cache(maxsize=None)
def free_names(p: Process) -> frozenset[str]:
    t = type(p)
    if t is Nil:
        return frozenset()
    if t is Prefix or t is KeyedPrefix:
        lab = p.label
        own = frozenset() if type(lab) is Tau else frozenset((lab.name,))
        return own | free_names(p.body)
    if t is Sum or t is Par:
        return free_names(p.left) | free_names(p.right)
    if t is Restrict:
        return free_names(p.body) - {p.name}
    raise TypeError(f"not a process: {p!r}")


def _rename_label(label: Label, env: dict[str, str]) -> Label:
    if type(label) is Input:
        return Input(env.get(label.name, label.name))
    if type(label) is Output:
        return Output(env.get(label.name, label.name))
    return label


def canonicalize(p: Process) -> Process:
    """Rename bound names to a canonical scheme so that alpha-equivalent
    processes map to identical trees.

    Binders are renamed ``n0, n1, ...`` in the order their restrictions are
    met in a pre-order walk, skipping any name free in ``p``.  Free names are
    untouched.
    """
    taken = free_names(p)
    counter = itertools.count()

    def next_name() -> str:
        while True:
            cand = f"n{next(counter)}"
            if cand not in taken:
                return cand

    def walk(q: Process, env: dict[str, str]) -> Process:
        t = type(q)
        if t is Nil:
            return q
        if t is Prefix:
            return Prefix(_rename_label(q.label, env), walk(q.body, env))
        if t is KeyedPrefix:
            return KeyedPrefix(_rename_label(q.label, env), q.key, walk(q.body, env))
        if t is Sum:
            return Sum(walk(q.left, env), walk(q.right, env))
        if t is Par:
            return Par(walk(q.left, env), walk(q.right, env))
        if t is Restrict:
            new = next_name()
            return Restrict(new, walk(q.body, {**env, q.name: new}))
        raise TypeError(f"not a process: {q!r}")

    return walk(p, {})


# ---------------------------------------------------------------------------
# Pretty printer
#
# Binding power, tightest first: restriction, (keyed) prefix, |, +.
# Levels: 0 sum, 1 par, 2 prefix, 3 atom.

def _render(p: Process, level: int) -> str:
    t = type(p)
    if t is Nil:
        return "0"
    if t is Sum:
        s = _render(p.left, 0) + " + " + _render(p.right, 1)
        return s if level <= 0 else "(" + s + ")"
    if t is Par:
        s = _render(p.left, 1) + " | " + _render(p.right, 2)
        return s if level <= 1 else "(" + s + ")"
    if t is Prefix or t is KeyedPrefix:
        act = str(p.label)
        if t is KeyedPrefix:
            act += f"[{p.key}]"
        s = act if type(p.body) is Nil else act + "." + _render(p.body, 2)
        return s if level <= 2 else "(" + s + ")"
    if t is Restrict:
        body = p.body
        if type(body) in (Nil, Restrict):
            return _render(body, 3) + "\\" + p.name
        return "(" + _render(body, 0) + ")\\" + p.name
    raise TypeError(f"not a process: {p!r}")


def pretty_print(p: Process) -> str:
    """Minimal-parentheses text form; ``parse`` round-trips it."""
    return _render(p, 0)


# ---------------------------------------------------------------------------
# Parser
#
#   proc   := sum
#   sum    := par { "+" par }              (left associative)
#   par    := pref { "|" pref }            (left associative)
#   pref   := act [ "[" nat "]" ] [ "." pref ] | atom
#   atom   := ( "0" | "(" proc ")" ) { "\" name }
#   act    := name | "~" name | "tau"


class ParseError(ValueError):
    """Malformed process or proof-label text; carries the offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(r"[a-z][a-z0-9_]*|\d+|[+|~.()\[\]\\]|\S")
_VALID_TOKEN_RE = re.compile(r"[a-z][a-z0-9_]*$|\d+$|[+|~.()\[\]\\]$")


def tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        tok = m.group()
        if not _VALID_TOKEN_RE.match(tok):
            raise ParseError(f"unexpected character {tok!r}", m.start())
        tokens.append((tok, m.start()))
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise ParseError(f"expected {tok!r}, found {self.peek()!r}", self.pos())
        self.take()

    def name(self) -> str:
        tok = self.peek()
        if not tok or not tok[0].isalpha():
            raise ParseError(f"expected a name, found {tok!r}", self.pos())
        if tok == "tau":
            raise ParseError("'tau' is not a name", self.pos())
        return self.take()

    def nat(self) -> int:
        tok = self.peek()
        if not tok.isdigit():
            raise ParseError(f"key must be a natural number, found {tok!r}", self.pos())
        return int(self.take())

    def proc(self) -> Process:
        left = self.par()
        while self.peek() == "+":
            self.take()
            left = Sum(left, self.par())
        return left

    def par(self) -> Process:
        left = self.pref()
        while self.peek() == "|":
            self.take()
            left = Par(left, self.pref())
        return left

    def pref(self) -> Process:
        tok = self.peek()
        if tok == "~" or (tok and tok[0].isalpha()):
            act = self.act()
            key = None
            if self.peek() == "[":
                self.take()
                key = self.nat()
                self.expect("]")
            if self.peek() == ".":
                self.take()
                body = self.pref()
            else:
                body = NIL
            return Prefix(act, body) if key is None else KeyedPrefix(act, key, body)
        return self.atom()

    def act(self) -> Label:
        if self.peek() == "~":
            self.take()
            return Output(self.name())
        if self.peek() == "tau":
            self.take()
            return TAU
        return Input(self.name())

    def atom(self) -> Process:
        tok = self.peek()
        if tok == "0":
            self.take()
            base: Process = NIL
        elif tok == "(":
            self.take()
            base = self.proc()
            self.expect(")")
        else:
            raise ParseError(f"expected a process, found {tok!r}", self.pos())
        while self.peek() == "\\":
            self.take()
            base = Restrict(self.name(), base)
        return base


def parse(text: str) -> Process:
    """Parse the concrete syntax into a process term."""
    p = _Parser(text)
    result = p.proc()
    if p.peek() != "":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return result
