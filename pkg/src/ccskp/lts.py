"""Proved forward and backward transitions.

Each transition carries the full derivation that produced it, including the
side-condition evidence (standardness of idle branches, key freshness under
keyed prefixes and parallel, and the restriction filter), so every step can
be re-checked independently of the code that found it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .prooflabels import (
    Base,
    Decorator,
    ProofLabel,
    Sync,
    decorate,
    format_label,
    key_of,
    label_of,
    peel,
)
from .syntax import (
    Input,
    KeyedPrefix,
    Nil,
    Output,
    Par,
    Prefix,
    Process,
    Restrict,
    Sum,
    complement,
    is_std,
    keys_of,
    pretty_print,
)


class Direction(Enum):
    FORWARD = "F"
    BACKWARD = "B"

    __hash__ = object.__hash__

    @property
    def flipped(self) -> "Direction":
        return Direction.BACKWARD if self is Direction.FORWARD else Direction.FORWARD

    def __str__(self) -> str:
        return self.value


FORWARD = Direction.FORWARD
BACKWARD = Direction.BACKWARD


@dataclass(frozen=True, slots=True)
class Derivation:
    """One rule application; ``conditions`` holds re-checkable evidence."""

    rule: str
    premises: tuple["Derivation", ...] = ()
    conditions: tuple[tuple, ...] = ()


@dataclass(frozen=True, slots=True)
class Transition:
    source: Process
    direction: Direction
    label: ProofLabel
    target: Process
    derivation: Derivation = field(compare=False)


class ReversalError(RuntimeError):
    """A derivable transition failed to reverse; this indicates a bug."""


def least_fresh_key(p: Process) -> int:
    ks = keys_of(p)
    k = 0
    while k in ks:
        k += 1
    return k


def _std_cond(p: Process) -> tuple:
    return ("std", p)


def _wrap(
    t: Transition,
    source: Process,
    target: Process,
    label: ProofLabel,
    rule: str,
    conditions: tuple[tuple, ...] = (),
) -> Transition:
    return Transition(
        source, t.direction, label, target, Derivation(rule, (t.derivation,), conditions)
    )


def _sync_pairs(
    lefts: list[Transition], rights: list[Transition], x: Process, y: Process
) -> list[Transition]:
    out = []
    for tl in lefts:
        ll = tl.label
        if type(ll) is not Base or type(ll.label) not in (Input, Output):
            continue
        want = complement(ll.label)
        for tr in rights:
            lr = tr.label
            if type(lr) is not Base or lr.label != want or lr.key != ll.key:
                continue
            out.append(
                Transition(
                    Par(x, y),
                    tl.direction,
                    Sync((), ll, lr),
                    Par(tl.target, tr.target),
                    Derivation("syn", (tl.derivation, tr.derivation)),
                )
            )
    return out


def _steps(p: Process, direction: Direction, fresh: int | None) -> list[Transition]:
    t = type(p)
    forward = direction is FORWARD
    if t is Nil:
        return []
    if t is Prefix:
        if forward and is_std(p.body):
            label = Base((), p.label, fresh)
            return [
                Transition(
                    p,
                    FORWARD,
                    label,
                    KeyedPrefix(p.label, fresh, p.body),
                    Derivation("pref", (), (_std_cond(p.body),)),
                )
            ]
        return []
    if t is KeyedPrefix:
        out = []
        if not forward and is_std(p.body):
            label = Base((), p.label, p.key)
            out.append(
                Transition(
                    p,
                    BACKWARD,
                    label,
                    Prefix(p.label, p.body),
                    Derivation("pref", (), (_std_cond(p.body),)),
                )
            )
        for sub in _steps(p.body, direction, fresh):
            k = key_of(sub.label)
            if k != p.key:
                out.append(
                    _wrap(
                        sub,
                        p,
                        KeyedPrefix(p.label, p.key, sub.target),
                        sub.label,
                        "kpref",
                        (("key_ne", k, p.key),),
                    )
                )
        return out
    if t is Sum:
        out = []
        if is_std(p.right):
            for sub in _steps(p.left, direction, fresh):
                out.append(
                    _wrap(
                        sub,
                        p,
                        Sum(sub.target, p.right),
                        decorate(Decorator.SUM_L, sub.label),
                        "sumL",
                        (_std_cond(p.right),),
                    )
                )
        if is_std(p.left):
            for sub in _steps(p.right, direction, fresh):
                out.append(
                    _wrap(
                        sub,
                        p,
                        Sum(p.left, sub.target),
                        decorate(Decorator.SUM_R, sub.label),
                        "sumR",
                        (_std_cond(p.left),),
                    )
                )
        return out
    if t is Par:
        lefts = _steps(p.left, direction, fresh)
        rights = _steps(p.right, direction, fresh)
        out = []
        rkeys = keys_of(p.right)
        for sub in lefts:
            k = key_of(sub.label)
            if k not in rkeys:
                out.append(
                    _wrap(
                        sub,
                        p,
                        Par(sub.target, p.right),
                        decorate(Decorator.PAR_L, sub.label),
                        "parL",
                        (("key_not_in", k, p.right),),
                    )
                )
        lkeys = keys_of(p.left)
        for sub in rights:
            k = key_of(sub.label)
            if k not in lkeys:
                out.append(
                    _wrap(
                        sub,
                        p,
                        Par(p.left, sub.target),
                        decorate(Decorator.PAR_R, sub.label),
                        "parR",
                        (("key_not_in", k, p.left),),
                    )
                )
        out.extend(_sync_pairs(lefts, rights, p.left, p.right))
        return out
    if t is Restrict:
        out = []
        banned = (Input(p.name), Output(p.name))
        for sub in _steps(p.body, direction, fresh):
            lab = label_of(sub.label)
            if lab not in banned:
                out.append(
                    _wrap(
                        sub,
                        p,
                        Restrict(p.name, sub.target),
                        sub.label,
                        "nu",
                        (("label_clear", lab, p.name),),
                    )
                )
        return out
    raise TypeError(f"not a process: {p!r}")


def forward_steps(p: Process, fresh_key: int | None = None) -> list[Transition]:
    """All forward transitions of ``p``.

    Each firing prefix receives ``fresh_key``; by default that is the least
    natural number absent from the keys of ``p``, which keeps enumeration
    deterministic and transition graphs finite.  The rules themselves accept
    any key; ``derive`` checks arbitrary ones.
    """
    if fresh_key is None:
        fresh_key = least_fresh_key(p)
    return _steps(p, FORWARD, fresh_key)


def backward_steps(p: Process) -> list[Transition]:
    """All backward transitions of ``p``.  Keys are consumed, never created,
    so no fresh-key policy is involved."""
    return _steps(p, BACKWARD, None)


# ---------------------------------------------------------------------------
# Checker


def derive(p: Process, direction: Direction, label: ProofLabel) -> Transition | None:
    """The transition ``p`` makes under ``direction`` with exactly ``label``,
    or None.  The key inside ``label`` is taken as given; only the rules' own
    side conditions constrain it.

    At most one rule matches any (process, direction, label) triple, so the
    result is unique; it is memoized because witness verification asks the
    same questions over and over."""
    tp = type(p)
    if tp is KeyedPrefix:
        if (
            direction is BACKWARD
            and type(label) is Base
            and not label.prefix
            and label.label == p.label
            and label.key == p.key
        ):
            if not is_std(p.body):
                return None
            return Transition(
                p,
                BACKWARD,
                label,
                Prefix(p.label, p.body),
                Derivation("pref", (), (_std_cond(p.body),)),
            )
        if key_of(label) == p.key:
            return None
        sub = derive(p.body, direction, label)
        if sub is None:
            return None
        return _wrap(
            sub,
            p,
            KeyedPrefix(p.label, p.key, sub.target),
            label,
            "kpref",
            (("key_ne", key_of(label), p.key),),
        )
    if tp is Restrict:
        lab = label_of(label)
        if lab in (Input(p.name), Output(p.name)):
            return None
        sub = derive(p.body, direction, label)
        if sub is None:
            return None
        return _wrap(
            sub,
            p,
            Restrict(p.name, sub.target),
            label,
            "nu",
            (("label_clear", lab, p.name),),
        )
    d = label.prefix[0] if label.prefix else None
    if d is not None:
        inner = peel(label)
        if d is Decorator.SUM_L and tp is Sum and is_std(p.right):
            sub = derive(p.left, direction, inner)
            if sub is not None:
                return _wrap(
                    sub, p, Sum(sub.target, p.right), label, "sumL", (_std_cond(p.right),)
                )
        elif d is Decorator.SUM_R and tp is Sum and is_std(p.left):
            sub = derive(p.right, direction, inner)
            if sub is not None:
                return _wrap(
                    sub, p, Sum(p.left, sub.target), label, "sumR", (_std_cond(p.left),)
                )
        elif d is Decorator.PAR_L and tp is Par and key_of(inner) not in keys_of(p.right):
            sub = derive(p.left, direction, inner)
            if sub is not None:
                return _wrap(
                    sub,
                    p,
                    Par(sub.target, p.right),
                    label,
                    "parL",
                    (("key_not_in", key_of(inner), p.right),),
                )
        elif d is Decorator.PAR_R and tp is Par and key_of(inner) not in keys_of(p.left):
            sub = derive(p.right, direction, inner)
            if sub is not None:
                return _wrap(
                    sub,
                    p,
                    Par(p.left, sub.target),
                    label,
                    "parR",
                    (("key_not_in", key_of(inner), p.left),),
                )
        return None
    if type(label) is Sync:
        if tp is not Par:
            return None
        if label.left.key != label.right.key:
            return None
        if complement(label.left.label) != label.right.label:
            return None
        left = derive(p.left, direction, label.left)
        if left is None:
            return None
        right = derive(p.right, direction, label.right)
        if right is None:
            return None
        return Transition(
            p,
            direction,
            label,
            Par(left.target, right.target),
            Derivation("syn", (left.derivation, right.derivation)),
        )
    if direction is FORWARD and tp is Prefix and label.label == p.label and is_std(p.body):
        return Transition(
            p,
            FORWARD,
            label,
            KeyedPrefix(p.label, label.key, p.body),
            Derivation("pref", (), (_std_cond(p.body),)),
        )
    return None


derive = lru_cache(maxsize=1 << 18)(derive)


def reverse(t: Transition) -> Transition:
    """The inverse transition: endpoints swapped, direction flipped, label
    kept.  Re-derived from scratch rather than transformed, so a successful
    reversal is itself checked evidence."""
    r = derive(t.target, t.direction.flipped, t.label)
    if r is None or r.target != t.source:
        raise ReversalError(
            f"cannot reverse {format_transition(t)}; the rules are symmetric, "
            "so this transition was not derivable in the first place"
        )
    return r


# ---------------------------------------------------------------------------
# Independent derivation re-checker


def _check_node(
    node: Derivation,
    source: Process,
    direction: Direction,
    label: ProofLabel,
    target: Process,
) -> bool:
    rule = node.rule
    if rule == "pref":
        if node.premises or type(label) is not Base or label.prefix:
            return False
        if direction is FORWARD:
            ok = (
                type(source) is Prefix
                and source.label == label.label
                and target == KeyedPrefix(source.label, label.key, source.body)
            )
            body = source.body if type(source) is Prefix else None
        else:
            ok = (
                type(source) is KeyedPrefix
                and source.label == label.label
                and source.key == label.key
                and target == Prefix(source.label, source.body)
            )
            body = source.body if type(source) is KeyedPrefix else None
        return ok and node.conditions == (("std", body),) and is_std(body)
    if rule == "kpref":
        if (
            type(source) is not KeyedPrefix
            or type(target) is not KeyedPrefix
            or source.label != target.label
            or source.key != target.key
            or key_of(label) == source.key
        ):
            return False
        if node.conditions != (("key_ne", key_of(label), source.key),):
            return False
        return len(node.premises) == 1 and _check_node(
            node.premises[0], source.body, direction, label, target.body
        )
    if rule in ("sumL", "sumR"):
        want = Decorator.SUM_L if rule == "sumL" else Decorator.SUM_R
        if type(source) is not Sum or type(target) is not Sum:
            return False
        if not label.prefix or label.prefix[0] is not want:
            return False
        if rule == "sumL":
            moving_s, idle_s, moving_t, idle_t = source.left, source.right, target.left, target.right
        else:
            moving_s, idle_s, moving_t, idle_t = source.right, source.left, target.right, target.left
        if idle_s != idle_t or not is_std(idle_s):
            return False
        if node.conditions != (("std", idle_s),):
            return False
        return len(node.premises) == 1 and _check_node(
            node.premises[0], moving_s, direction, peel(label), moving_t
        )
    if rule in ("parL", "parR"):
        want = Decorator.PAR_L if rule == "parL" else Decorator.PAR_R
        if type(source) is not Par or type(target) is not Par:
            return False
        if not label.prefix or label.prefix[0] is not want:
            return False
        if rule == "parL":
            moving_s, idle_s, moving_t, idle_t = source.left, source.right, target.left, target.right
        else:
            moving_s, idle_s, moving_t, idle_t = source.right, source.left, target.right, target.left
        k = key_of(label)
        if idle_s != idle_t or k in keys_of(idle_s):
            return False
        if node.conditions != (("key_not_in", k, idle_s),):
            return False
        return len(node.premises) == 1 and _check_node(
            node.premises[0], moving_s, direction, peel(label), moving_t
        )
    if rule == "syn":
        if (
            type(source) is not Par
            or type(target) is not Par
            or type(label) is not Sync
            or label.prefix
            or node.conditions
            or len(node.premises) != 2
        ):
            return False
        if label.left.key != label.right.key:
            return False
        if complement(label.left.label) != label.right.label:
            return False
        return _check_node(
            node.premises[0], source.left, direction, label.left, target.left
        ) and _check_node(
            node.premises[1], source.right, direction, label.right, target.right
        )
    if rule == "nu":
        if (
            type(source) is not Restrict
            or type(target) is not Restrict
            or source.name != target.name
        ):
            return False
        lab = label_of(label)
        if lab in (Input(source.name), Output(source.name)):
            return False
        if node.conditions != (("label_clear", lab, source.name),):
            return False
        return len(node.premises) == 1 and _check_node(
            node.premises[0], source.body, direction, label, target.body
        )
    return False


def validate_transition(t: Transition) -> bool:
    """Re-check the recorded derivation of ``t`` rule by rule, without
    searching.  This is the independent oracle for transitions."""
    return _check_node(t.derivation, t.source, t.direction, t.label, t.target)


# ---------------------------------------------------------------------------
# Rendering


def format_transition(t: Transition) -> str:
    return (
        f"{pretty_print(t.source)} --[{t.direction}] "
        f"{format_label(t.label)}--> {pretty_print(t.target)}"
    )


def transition_json(t: Transition) -> str:
    return json.dumps(
        {
            "source": pretty_print(t.source),
            "dir": str(t.direction),
            "label": format_label(t.label),
            "target": pretty_print(t.target),
        },
        separators=(",", ":"),
    )
