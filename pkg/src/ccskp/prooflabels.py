"""Proof keyed labels: keyed actions decorated with the position in the term
where they fired.

A label is either a decorated keyed action or a decorated synchronization
pair.  The two halves of a pair implicitly sit left and right of the parallel
operator the synchronization crossed, so only their inner decorations are
stored.  The pair constructor is deliberately permissive; ``is_valid`` carves
out the labels the transition rules can actually emit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

from .syntax import TAU, Input, Label, Output, ParseError, Tau, complement


class Decorator(Enum):
    SUM_L = "+L"
    SUM_R = "+R"
    PAR_L = "|L"
    PAR_R = "|R"

    # members are singletons, so the identity hash is sound and much faster
    # than Enum's name-based one on these hot code paths
    __hash__ = object.__hash__

    @property
    def opposite(self) -> "Decorator":
        return _OPPOSITE[self]

    @property
    def is_par(self) -> bool:
        return self in (Decorator.PAR_L, Decorator.PAR_R)

    @property
    def is_sum(self) -> bool:
        return self in (Decorator.SUM_L, Decorator.SUM_R)

    def __str__(self) -> str:
        return self.value


_OPPOSITE = {
    Decorator.SUM_L: Decorator.SUM_R,
    Decorator.SUM_R: Decorator.SUM_L,
    Decorator.PAR_L: Decorator.PAR_R,
    Decorator.PAR_R: Decorator.PAR_L,
}

DECORATORS = (Decorator.SUM_L, Decorator.SUM_R, Decorator.PAR_L, Decorator.PAR_R)


@dataclass(frozen=True, slots=True, eq=True)
class Base:
    """A keyed action under a (possibly empty) string of decorators.

    The head of ``prefix`` is the outermost decorator.
    """

    prefix: tuple[Decorator, ...]
    label: Label
    key: int
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((9, self.prefix, self.label, self.key)) or 1
            object.__setattr__(self, "_h", h)
        return h

    def __str__(self) -> str:
        return format_label(self)


@dataclass(frozen=True, slots=True, eq=True)
class Sync:
    """A synchronization pair under a string of decorators.

    ``left`` and ``right`` carry only their inner decorations; the leading
    left/right parallel markers of the pair are implicit.  Branches are
    syntactically restricted to input/output actions.
    """

    prefix: tuple[Decorator, ...]
    left: Base
    right: Base
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if type(self.left.label) is Tau or type(self.right.label) is Tau:
            raise ValueError("synchronization branches cannot carry tau")

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((10, self.prefix, self.left, self.right)) or 1
            object.__setattr__(self, "_h", h)
        return h

    def __str__(self) -> str:
        return format_label(self)


ProofLabel = Union[Base, Sync]


def head(t: ProofLabel) -> Decorator | None:
    """The outermost decorator, or None when ``t`` is undecorated."""
    return t.prefix[0] if t.prefix else None


def peel(t: ProofLabel) -> ProofLabel:
    """Drop the outermost decorator."""
    if type(t) is Base:
        return Base(t.prefix[1:], t.label, t.key)
    return Sync(t.prefix[1:], t.left, t.right)


def decorate(d: Decorator, t: ProofLabel) -> ProofLabel:
    """Prepend one decorator."""
    if type(t) is Base:
        return Base((d,) + t.prefix, t.label, t.key)
    return Sync((d,) + t.prefix, t.left, t.right)


def total_decorators(t: ProofLabel) -> int:
    if type(t) is Base:
        return len(t.prefix)
    return len(t.prefix) + len(t.left.prefix) + len(t.right.prefix)


def label_of(t: ProofLabel) -> Label:
    """The underlying action.  Synchronization pairs map to the silent one."""
    return t.label if type(t) is Base else TAU


def key_of(t: ProofLabel) -> int:
    """The underlying key; for a pair, the key of its left half."""
    return t.key if type(t) is Base else t.left.key


def is_valid(t: ProofLabel) -> bool:
    """True iff ``t`` lies in the image of the proof-label grammar.

    Every decorated keyed action is grammatical.  A pair is grammatical iff
    its halves carry complementary actions and share one key.  Decorators do
    not affect validity.
    """
    if type(t) is Base:
        return True
    return (
        t.left.key == t.right.key
        and complement(t.left.label) == t.right.label
    )


def _sequences(max_len: int) -> list[tuple[Decorator, ...]]:
    seqs: list[tuple[Decorator, ...]] = []
    for n in range(max_len + 1):
        seqs.extend(itertools.product(DECORATORS, repeat=n))
    return seqs


def enumerate_valid(
    names: Iterable[str], keys: Iterable[int], max_decorators: int
) -> list[ProofLabel]:
    """All valid proof labels over the given names and keys whose total
    decorator count (outer plus branch-inner) does not exceed the bound.

    Deterministic order, no duplicates: decorated actions first, then pairs,
    each grouped by decorator shape.
    """
    names = sorted(set(names))
    keys = sorted(set(keys))
    if not names or not keys:
        raise ValueError("names and keys must be nonempty")
    actions: list[Label] = []
    for n in names:
        actions.append(Input(n))
        actions.append(Output(n))
    actions.append(TAU)

    out: list[ProofLabel] = []
    for seq in _sequences(max_decorators):
        for act in actions:
            for k in keys:
                out.append(Base(seq, act, k))
    for outer in _sequences(max_decorators):
        room = max_decorators - len(outer)
        for left_inner in _sequences(room):
            for right_inner in _sequences(room - len(left_inner)):
                for n in names:
                    for lam in (Input(n), Output(n)):
                        for k in keys:
                            out.append(
                                Sync(
                                    outer,
                                    Base(left_inner, lam, k),
                                    Base(right_inner, complement(lam), k),
                                )
                            )
    return out


# ---------------------------------------------------------------------------
# Text syntax
#
#   label  := decors base | decors sync
#   decors := { ("+L" | "+R" | "|L" | "|R") "." }
#   base   := act "[" nat "]"
#   sync   := "<" "|L" decors base "," "|R" decors base ">"
#   act    := name | "~" name | "tau"


def format_label(t: ProofLabel) -> str:
    decs = "".join(str(d) + "." for d in t.prefix)
    if type(t) is Base:
        return f"{decs}{t.label}[{t.key}]"
    left = format_label(Base(t.left.prefix, t.left.label, t.left.key))
    right = format_label(Base(t.right.prefix, t.right.label, t.right.key))
    return f"{decs}<|L {left}, |R {right}>"


_DEC_RE = re.compile(r"(\+L|\+R|\|L|\|R)\.")
_BASE_RE = re.compile(r"(~?)([a-z][a-z0-9_]*)\[(\d+)\]")
_BY_CODE = {d.value: d for d in DECORATORS}


class _LabelParser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def decors(self) -> tuple[Decorator, ...]:
        out = []
        while True:
            self.skip_ws()
            m = _DEC_RE.match(self.text, self.i)
            if not m:
                return tuple(out)
            out.append(_BY_CODE[m.group(1)])
            self.i = m.end()

    def base(self, prefix: tuple[Decorator, ...]) -> Base:
        self.skip_ws()
        m = _BASE_RE.match(self.text, self.i)
        if not m:
            raise ParseError("expected a keyed action like a[1]", self.i)
        self.i = m.end()
        tilde, name, key = m.groups()
        if name == "tau":
            if tilde:
                raise ParseError("'tau' has no complement", m.start())
            return Base(prefix, TAU, int(key))
        return Base(prefix, Output(name) if tilde else Input(name), int(key))

    def expect(self, s: str) -> None:
        self.skip_ws()
        if not self.text.startswith(s, self.i):
            raise ParseError(f"expected {s!r}", self.i)
        self.i += len(s)

    def label(self) -> ProofLabel:
        prefix = self.decors()
        self.skip_ws()
        if self.i < len(self.text) and self.text[self.i] == "<":
            self.i += 1
            self.expect("|L")
            left = self.base(self.decors())
            self.expect(",")
            self.expect("|R")
            right = self.base(self.decors())
            self.expect(">")
            try:
                return Sync(prefix, left, right)
            except ValueError as e:
                raise ParseError(str(e), self.i) from None
        return self.base(prefix)


def parse_label(text: str) -> ProofLabel:
    """Parse the text form of a proof label."""
    p = _LabelParser(text)
    result = p.label()
    p.skip_ws()
    if p.i != len(text):
        raise ParseError(f"trailing input {text[p.i:]!r}", p.i)
    return result
