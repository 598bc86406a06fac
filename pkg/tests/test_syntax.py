import pytest
from hypothesis import given, strategies as st

from ccskp.syntax import (
    NIL,
    TAU,
    Input,
    KeyedPrefix,
    Output,
    Par,
    ParseError,
    Prefix,
    Restrict,
    Sum,
    canonicalize,
    complement,
    free_names,
    is_std,
    keys_of,
    parse,
    pretty_print,
)


def test_parse_parallel_of_prefixes():
    assert parse("m | l") == Par(Prefix(Input("m"), NIL), Prefix(Input("l"), NIL))


def test_parse_inactive():
    assert parse("0") == NIL


def test_parse_handshake():
    assert parse("a.b | ~b") == Par(
        Prefix(Input("a"), Prefix(Input("b"), NIL)), Prefix(Output("b"), NIL)
    )


def test_sum_binds_loosest():
    assert parse("a + b | c") == Sum(
        Prefix(Input("a"), NIL), Par(Prefix(Input("b"), NIL), Prefix(Input("c"), NIL))
    )


def test_keyed_prefix_and_tau():
    assert parse("a[1].b") == KeyedPrefix(Input("a"), 1, Prefix(Input("b"), NIL))
    assert parse("tau.0") == Prefix(TAU, NIL)


def test_restriction_binds_atoms():
    assert parse("(a.b)\\a") == Restrict("a", Prefix(Input("a"), Prefix(Input("b"), NIL)))
    assert parse("0\\a\\b") == Restrict("b", Restrict("a", NIL))
    assert parse("a.0\\b") == Prefix(Input("a"), Restrict("b", NIL))


def test_left_associativity():
    abc = parse("a | b | c")
    assert abc == Par(Par(parse("a"), parse("b")), parse("c"))
    assert parse("a + b + c") == Sum(Sum(parse("a"), parse("b")), parse("c"))


@pytest.mark.parametrize(
    "bad",
    ["", "a +", "a[x]", "a[", "(a", "a.b\\", "~tau", "A", "tau[2", "a b", "0\\tau"],
)
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse("a | B")
    assert e.value.pos == 4


def test_pretty_print_examples():
    assert pretty_print(parse("m | l")) == "m | l"
    assert pretty_print(NIL) == "0"
    assert pretty_print(parse("a[1].b")) == "a[1].b"
    assert pretty_print(parse("a + (b + c)")) == "a + (b + c)"
    assert pretty_print(parse("(a + b) | c")) == "(a + b) | c"
    assert pretty_print(parse("a.(b | c)")) == "a.(b | c)"
    assert pretty_print(parse("a.0")) == "a"


def test_keys_of_examples():
    assert keys_of(parse("m[7] | l")) == {7}
    assert keys_of(NIL) == frozenset()
    assert keys_of(parse("a[1].b[2] | ~b[2].~a[1]")) == {1, 2}


def test_is_std_examples():
    assert is_std(parse("m | l"))
    assert not is_std(parse("m[0] | l"))
    assert is_std(NIL)


def test_complement():
    assert complement(Input("a")) == Output("a")
    assert complement(Output("a")) == Input("a")
    with pytest.raises(ValueError):
        complement(TAU)


def test_canonicalize_single_binder():
    assert pretty_print(canonicalize(parse("(a.0)\\a"))) == "(n0)\\n0"
    assert canonicalize(parse("(a.0)\\a")) == canonicalize(parse("(b.0)\\b"))


def test_canonicalize_nested_binders_outer_first():
    p = canonicalize(parse("((a.b)\\a)\\b"))
    assert p == Restrict("n0", Restrict("n1", Prefix(Input("n1"), Prefix(Input("n0"), NIL))))


def test_canonicalize_preserves_free_names():
    p = canonicalize(parse("(a.c)\\a"))
    assert "c" in free_names(p)
    assert free_names(p) == {"c"}


def test_canonicalize_avoids_free_name_capture():
    # a free name already called n0 must not collide with the binder scheme
    p = canonicalize(parse("(a.n0)\\a"))
    assert "n0" in free_names(p)
    assert p == Restrict("n1", Prefix(Input("n1"), Prefix(Input("n0"), NIL)))


_names = st.sampled_from(["a", "b", "c", "n0"])
_labels = st.one_of(_names.map(Input), _names.map(Output), st.just(TAU))
_processes = st.recursive(
    st.just(NIL),
    lambda kids: st.one_of(
        st.builds(Prefix, _labels, kids),
        st.builds(KeyedPrefix, _labels, st.integers(0, 3), kids),
        st.builds(Sum, kids, kids),
        st.builds(Par, kids, kids),
        st.builds(Restrict, _names, kids),
    ),
    max_leaves=8,
)


@given(_processes)
def test_roundtrip(p):
    assert parse(pretty_print(p)) == p


@given(_processes)
def test_keys_decompose(p):
    if isinstance(p, (Sum, Par)):
        assert keys_of(p) == keys_of(p.left) | keys_of(p.right)
    if isinstance(p, KeyedPrefix):
        assert keys_of(p) == {p.key} | keys_of(p.body)
    assert is_std(p) == (not keys_of(p))


def _collect_keys(p):
    if isinstance(p, KeyedPrefix):
        return {p.key} | _collect_keys(p.body)
    if isinstance(p, (Sum, Par)):
        return _collect_keys(p.left) | _collect_keys(p.right)
    if isinstance(p, (Prefix, Restrict)):
        return _collect_keys(p.body)
    return set()


@given(_processes)
def test_keys_of_matches_independent_traversal(p):
    assert set(keys_of(p)) == _collect_keys(p)


@given(_processes)
def test_canonicalize_idempotent_and_invariant(p):
    c = canonicalize(p)
    assert canonicalize(c) == c
    assert keys_of(c) == keys_of(p)
    assert is_std(c) == is_std(p)
    assert free_names(c) == free_names(p)


@given(_processes)
def test_canonical_quotients_alpha_variants(p):
    # renaming every binder through a fixed permutation must not change the
    # canonical form
    perm = {"a": "b", "b": "c", "c": "a", "n0": "n0"}

    def rename(q, env):
        if isinstance(q, Prefix):
            return Prefix(_ren_label(q.label, env), rename(q.body, env))
        if isinstance(q, KeyedPrefix):
            return KeyedPrefix(_ren_label(q.label, env), q.key, rename(q.body, env))
        if isinstance(q, Sum):
            return Sum(rename(q.left, env), rename(q.right, env))
        if isinstance(q, Par):
            return Par(rename(q.left, env), rename(q.right, env))
        if isinstance(q, Restrict):
            new = perm[q.name]
            return Restrict(new, rename(q.body, {**env, q.name: new}))
        return q

    def _ren_label(lab, env):
        if isinstance(lab, Input):
            return Input(env.get(lab.name, lab.name))
        if isinstance(lab, Output):
            return Output(env.get(lab.name, lab.name))
        return lab

    variant = rename(p, {})
    if free_names(variant) == free_names(p):
        assert canonicalize(variant) == canonicalize(p)
