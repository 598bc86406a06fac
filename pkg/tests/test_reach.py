import pytest

from ccskp.lts import FORWARD, forward_steps
from ccskp.prooflabels import parse_label
from ccskp.reach import (
    NotInGraph,
    StateLimitExceeded,
    Unreachable,
    build_graph,
    canonical_keys,
    canonical_state,
    connected,
    find_path,
    graph_to_dot,
    graph_to_json,
    is_reachable,
    origin,
    validate_path,
)
from ccskp.syntax import parse, pretty_print


def _state_texts(g):
    return [pretty_print(s) for s in g.states]


def test_canonical_keys_first_occurrence():
    assert pretty_print(canonical_keys(parse("m[7] | l[3]"))) == "m[0] | l[1]"
    assert pretty_print(canonical_keys(parse("a[5].b[5]"))) == "a[0].b[0]"


def test_graph_of_two_toggles():
    g = build_graph(parse("m | l"))
    assert _state_texts(g) == ["m | l", "m[0] | l", "m | l[0]", "m[0] | l[1]"]
    assert len(g.edges) == 4


def test_graph_of_nil():
    g = build_graph(parse("0"))
    assert _state_texts(g) == ["0"]
    assert g.edges == ()


def test_graph_contains_handshake_run():
    g = build_graph(parse("a.b | ~b"))
    texts = _state_texts(g)
    assert "a.b | ~b" in texts and "a[0].b | ~b" in texts and "a[0].b[1] | ~b[1]" in texts
    labels = [pretty_print(e.source) + " " + str(e.label) for e in g.edges]
    assert "a[0].b | ~b <|L b[1], |R ~b[1]>" in labels


def test_graph_closure_invariant():
    from ccskp.lts import backward_steps

    g = build_graph(parse("a.b | ~b"))
    for s in g.states:
        for t in forward_steps(s) + backward_steps(s):
            assert canonical_state(t.target) in g.state_index


def test_state_cap():
    with pytest.raises(StateLimitExceeded):
        build_graph(parse("a | a | a | a"), state_cap=3)


def test_find_path_reflexive():
    g = build_graph(parse("m | l"))
    p = find_path(g, g.root, g.root)
    assert p is not None and len(p) == 0 and validate_path(p)


def test_find_path_two_steps():
    g = build_graph(parse("m | l"))
    target = [s for s in g.states if pretty_print(s) == "m[0] | l[1]"][0]
    p = find_path(g, g.root, target)
    assert p is not None and len(p) == 2 and validate_path(p)
    assert p.source == g.root and p.target == target


def test_find_path_requires_graph_membership():
    g = build_graph(parse("m | l"))
    with pytest.raises(NotInGraph):
        find_path(g, g.root, parse("x.y"))


def test_find_path_none_across_disjoint_union():
    from ccskp.reach import TransitionGraph

    g1 = build_graph(parse("a.0"))
    g2 = build_graph(parse("b.0"))
    union = TransitionGraph(
        g1.root,
        g1.states + g2.states,
        g1.edges + g2.edges,
        g1.edge_targets + g2.edge_targets,
    )
    assert find_path(union, g1.root, g2.root) is None


def test_reachable_examples():
    assert is_reachable(parse("m[0] | l"))
    assert not is_reachable(parse("a[1].b[1].0"))
    assert not is_reachable(parse("a[1].b[2] | ~b[2].~a[1]"))


def test_origin_examples():
    assert pretty_print(origin(parse("m[0] | l"))) == "m | l"
    assert pretty_print(origin(parse("a[0].b[1] | 0"))) == "a.b | 0"
    std = parse("a.b + c")
    assert origin(std) == canonical_state(std)
    with pytest.raises(Unreachable):
        origin(parse("a[1].b[1]"))


def test_connected_consecutive_steps():
    from ccskp.lts import derive

    t1 = derive(parse("a.b | ~b"), FORWARD, parse_label("|L.a[0]"))
    t2 = derive(parse("a[0].b | ~b"), FORWARD, parse_label("|L.b[1]"))
    path = connected(t1, t2)
    assert path is not None and len(path) == 1
    assert path.steps[0] == t1


def test_connected_to_self_is_empty():
    t = forward_steps(parse("m | l"))[0]
    path = connected(t, t)
    assert path is not None and len(path) == 0


def test_connected_none_for_distinct_origins():
    ta = forward_steps(parse("a.0"))[0]
    tb = forward_steps(parse("b.0"))[0]
    assert connected(ta, tb) is None


def test_dot_export_shape():
    dot = graph_to_dot(build_graph(parse("m | l")))
    assert dot.count(" -> ") == 4
    assert dot.count("[label=") == 8  # 4 nodes + 4 edges
    assert dot.startswith("digraph lts {") and dot.endswith("}\n")


def test_dot_escapes_restriction_backslash():
    # graph states are alpha-canonical, so the binder prints as n0
    dot = graph_to_dot(build_graph(parse("(a.0)\\b")))
    assert '"(a)\\\\n0"' in dot


def test_json_export():
    assert graph_to_json(build_graph(parse("0"))) == '{"states":["0"],"edges":[]}'
    out = graph_to_json(build_graph(parse("a.0 | ~a.0")))
    assert '"label":"<|L a[0], |R ~a[0]>"' in out


def test_exports_deterministic():
    a = graph_to_dot(build_graph(parse("a.b | ~b")))
    b = graph_to_dot(build_graph(parse("a.b | ~b")))
    assert a == b


def _brute_shortest(x, y, key_universe=4, cap=4000):
    # reference BFS over raw processes allowing every fresh key < key_universe
    from collections import deque

    from ccskp.lts import backward_steps, forward_steps

    if x == y:
        return 0
    seen = {x}
    queue = deque([(x, 0)])
    while queue:
        cur, d = queue.popleft()
        steps = list(backward_steps(cur))
        for k in range(key_universe):
            steps.extend(forward_steps(cur, fresh_key=k))
        for t in steps:
            if t.target in seen:
                continue
            if t.target == y:
                return d + 1
            seen.add(t.target)
            if len(seen) > cap:
                raise RuntimeError("reference search blew up")
            queue.append((t.target, d + 1))
    return None


@pytest.mark.parametrize("root", ["m | l", "a.b | ~b", "a + b.a", "(a.b | ~b)\\b"])
def test_find_path_matches_brute_force_shortest(root):
    g = build_graph(parse(root))
    for target in g.states:
        p = find_path(g, g.root, target)
        ref = _brute_shortest(g.root, target)
        if ref is None:
            assert p is None
        else:
            assert p is not None and len(p) == ref


def test_connected_is_symmetric():
    from ccskp.lts import derive

    t1 = derive(parse("a.b | ~b"), FORWARD, parse_label("|L.a[0]"))
    t2 = derive(parse("a[0].b | ~b"), FORWARD, parse_label("|L.b[1]"))
    assert (connected(t1, t2) is not None) == (connected(t2, t1) is not None)
    ta = forward_steps(parse("a.0"))[0]
    tb = forward_steps(parse("b.0"))[0]
    assert connected(ta, tb) is None and connected(tb, ta) is None


def test_backward_duals_are_reverses_of_stored_edges():
    # every backward step of every state reverses onto a forward transition
    # between graph states with the same label
    from ccskp.lts import backward_steps, reverse

    g = build_graph(parse("a.b | ~b"))
    for s in g.states:
        for b in backward_steps(s):
            f = reverse(b)
            assert f.label == b.label
            assert canonical_state(f.source) in g.state_index
            assert canonical_state(f.target) in g.state_index


def test_origin_uniqueness_guard():
    # two standard states can never share a component; the error path is
    # exercised through a hand-built graph
    from ccskp.reach import TransitionGraph

    g1 = build_graph(parse("a.0"))
    fake = TransitionGraph(g1.root, g1.states + (parse("b.0"),), g1.edges, g1.edge_targets)
    assert len(fake.standard_states()) == 2
