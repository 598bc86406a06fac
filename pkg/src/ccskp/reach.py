"""Finite combined-transition graphs, reachability, and origins.

States are identified up to alpha-renaming of bound names and up to a
bijective renaming of keys (keys are renumbered by first occurrence).  The
transition rules are equivariant under both, so the quotient keeps exactly
the combined-step structure while making graphs finite and small: the fresh
key a forward step picks is arbitrary, and without the quotient every choice
would spawn its own copy of the state space.

Edges store genuine derivable transitions from the canonical source; their
raw targets are mapped onto canonical states for adjacency.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .lts import (
    Transition,
    backward_steps,
    derive,
    format_label,
    forward_steps,
    least_fresh_key,
)
from .syntax import (
    KeyedPrefix,
    Nil,
    Par,
    Prefix,
    Process,
    Restrict,
    Sum,
    canonicalize,
    is_std,
    keys_of,
    pretty_print,
)


class StateLimitExceeded(RuntimeError):
    """The state cap was hit; results would be incomplete, so none are given."""


class NotInGraph(ValueError):
    """A queried process is not a state of the graph."""


class Unreachable(ValueError):
    """The process has no standard process in its connected component."""


class OriginNotUnique(RuntimeError):
    """Two standard states share a component; this would falsify origin
    uniqueness and indicates a bug."""


def canonical_keys(p: Process) -> Process:
    """Renumber keys 0, 1, 2, ... by first occurrence in a pre-order walk."""
    mapping: dict[int, int] = {}

    def walk(q: Process) -> Process:
        t = type(q)
        if t is Nil:
            return q
        if t is Prefix:
            return Prefix(q.label, walk(q.body))
        if t is KeyedPrefix:
            new = mapping.setdefault(q.key, len(mapping))
            return KeyedPrefix(q.label, new, walk(q.body))
        if t is Sum:
            left = walk(q.left)
            return Sum(left, walk(q.right))
        if t is Par:
            left = walk(q.left)
            return Par(left, walk(q.right))
        if t is Restrict:
            return Restrict(q.name, walk(q.body))
        raise TypeError(f"not a process: {q!r}")

    return walk(p)


@lru_cache(maxsize=1 << 19)
def canonical_state(p: Process) -> Process:
    return canonical_keys(canonicalize(p))


@dataclass(frozen=True, slots=True)
class Path:
    """A composable sequence of combined transitions."""

    source: Process
    target: Process
    steps: tuple[Transition, ...]

    def __len__(self) -> int:
        return len(self.steps)


def empty_path(p: Process) -> Path:
    return Path(p, p, ())


def validate_path(path: Path) -> bool:
    """Re-derive every step and check composability; the path oracle."""
    at = path.source
    for step in path.steps:
        if step.source != at:
            return False
        again = derive(step.source, step.direction, step.label)
        if again is None or again.target != step.target:
            return False
        at = step.target
    return at == path.target


class TransitionGraph:
    """The closure of a root process under combined steps.

    ``states`` are canonical representatives in discovery order; ``edges``
    are the canonically-enumerated forward transitions out of each state
    (backward duals are recovered by :func:`ccskp.lts.reverse`).
    """

    def __init__(
        self,
        root: Process,
        states: tuple[Process, ...],
        edges: tuple[Transition, ...],
        edge_targets: tuple[Process, ...],
    ):
        self.root = root
        self.states = states
        self.edges = edges
        self.edge_targets = edge_targets  # canonical form of each edge's target
        self.state_index = {s: i for i, s in enumerate(states)}
        adj: dict[Process, list[Process]] = {s: [] for s in states}
        for e, tgt in zip(edges, edge_targets):
            adj[e.source].append(tgt)
            adj[tgt].append(e.source)
        self.adjacency = adj

    def __contains__(self, p: Process) -> bool:
        return canonical_state(p) in self.state_index

    def standard_states(self) -> list[Process]:
        return [s for s in self.states if is_std(s)]


def build_graph(root: Process, state_cap: int = 100_000) -> TransitionGraph:
    """Breadth-first closure of ``root`` under forward and backward steps.

    Raises :class:`StateLimitExceeded` past ``state_cap`` states rather than
    truncating silently.
    """
    start = canonical_state(root)
    states: list[Process] = [start]
    seen = {start}
    edges: list[Transition] = []
    edge_targets: list[Process] = []
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in forward_steps(s):
            tgt = canonical_state(t.target)
            if tgt not in seen:
                if len(states) >= state_cap:
                    raise StateLimitExceeded(f"more than {state_cap} states")
                seen.add(tgt)
                states.append(tgt)
                queue.append(tgt)
            edges.append(t)
            edge_targets.append(tgt)
        for t in backward_steps(s):
            tgt = canonical_state(t.target)
            if tgt not in seen:
                if len(states) >= state_cap:
                    raise StateLimitExceeded(f"more than {state_cap} states")
                seen.add(tgt)
                states.append(tgt)
                queue.append(tgt)
    return TransitionGraph(start, tuple(states), tuple(edges), tuple(edge_targets))


def _class_connected(g: TransitionGraph, x: Process, y: Process) -> bool:
    if x == y:
        return True
    seen = {x}
    queue = deque([x])
    while queue:
        s = queue.popleft()
        for nxt in g.adjacency[s]:
            if nxt == y:
                return True
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def _steered_neighbors(cur: Process, goal_keys: frozenset[int]) -> list[Transition]:
    """Combined steps out of ``cur`` for the literal path search.

    Forward firings try the canonical fresh key plus any goal key not yet
    used; that covers every descent to the origin and every forward replay
    towards the goal.
    """
    out = list(backward_steps(cur))
    tried = set()
    for k in sorted({least_fresh_key(cur), *goal_keys - keys_of(cur)}):
        if k in tried:
            continue
        tried.add(k)
        out.extend(forward_steps(cur, fresh_key=k))
    return out


def find_path(g: TransitionGraph, x: Process, y: Process) -> Path | None:
    """A shortest combined path from ``x`` to ``y`` inside ``g``, or None
    when no path exists.

    The path is literal: its steps compose process-for-process, key-for-key.
    Two states of the same graph can still be unjoinable when the component
    has no origin, because a key stuck under a restriction pins different
    key choices in different states.
    """
    if canonical_state(x) not in g.state_index:
        raise NotInGraph(f"{pretty_print(x)} is not a state of this graph")
    if canonical_state(y) not in g.state_index:
        raise NotInGraph(f"{pretty_print(y)} is not a state of this graph")
    if not _class_connected(g, canonical_state(x), canonical_state(y)):
        return None
    if x == y:
        return empty_path(x)
    goal_keys = keys_of(y)
    seen = {x}
    queue: deque[Process] = deque([x])
    parent: dict[Process, Transition] = {}
    found = False
    while queue and not found:
        cur = queue.popleft()
        for t in _steered_neighbors(cur, goal_keys):
            if t.target in seen:
                continue
            seen.add(t.target)
            parent[t.target] = t
            if t.target == y:
                found = True
                break
            queue.append(t.target)
    if not found:
        return None
    steps: list[Transition] = []
    at = y
    while at != x:
        t = parent[at]
        steps.append(t)
        at = t.source
    steps.reverse()
    return Path(x, y, tuple(steps))


def is_reachable(p: Process, state_cap: int = 100_000) -> bool:
    """True iff some standard process lies in ``p``'s component."""
    return bool(build_graph(p, state_cap).standard_states())


def origin(p: Process, state_cap: int = 100_000) -> Process:
    """The unique standard state in ``p``'s component."""
    g = build_graph(p, state_cap)
    std = g.standard_states()
    if not std:
        raise Unreachable(f"{pretty_print(p)} has no standard process in its component")
    if len(std) > 1:
        raise OriginNotUnique(
            f"component of {pretty_print(p)} holds several standard states: "
            + ", ".join(pretty_print(s) for s in std)
        )
    return std[0]


def connected(t1: Transition, t2: Transition, state_cap: int = 100_000) -> Path | None:
    """A combined path between the sources of two transitions, or None.

    Searches the graph rooted at the first transition's source.
    """
    g = build_graph(t1.source, state_cap)
    if canonical_state(t2.source) not in g.state_index:
        return None
    return find_path(g, t1.source, t2.source)


# ---------------------------------------------------------------------------
# Exports


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: TransitionGraph) -> str:
    lines = ["digraph lts {", "  rankdir=LR;"]
    for i, s in enumerate(g.states):
        lines.append(f"  s{i} [label={_dot_quote(pretty_print(s))}];")
    for e, tgt in zip(g.edges, g.edge_targets):
        src_i = g.state_index[e.source]
        tgt_i = g.state_index[tgt]
        lines.append(f"  s{src_i} -> s{tgt_i} [label={_dot_quote(format_label(e.label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: TransitionGraph) -> str:
    return json.dumps(
        {
            "states": [pretty_print(s) for s in g.states],
            "edges": [
                {
                    "src": pretty_print(e.source),
                    "dir": str(e.direction),
                    "label": format_label(e.label),
                    "tgt": pretty_print(tgt),
                }
                for e, tgt in zip(g.edges, g.edge_targets)
            ],
        },
        separators=(",", ":"),
    )
