import pytest
from hypothesis import given, strategies as st

from ccskp.prooflabels import (
    DECORATORS,
    Base,
    Decorator,
    Sync,
    decorate,
    enumerate_valid,
    format_label,
    head,
    is_valid,
    key_of,
    label_of,
    parse_label,
    peel,
    total_decorators,
)
from ccskp.syntax import TAU, Input, Output, ParseError, complement


PL, PR, SL, SR = Decorator.PAR_L, Decorator.PAR_R, Decorator.SUM_L, Decorator.SUM_R


def test_decorator_opposites():
    assert SL.opposite is SR and SR.opposite is SL
    assert PL.opposite is PR and PR.opposite is PL


def test_label_of():
    assert label_of(Base((PL,), Input("m"), 4)) == Input("m")
    assert label_of(Sync((), Base((), Input("a"), 5), Base((), Output("a"), 5))) == TAU
    assert label_of(Base((SR, PL), Input("a"), 3)) == Input("a")


def test_key_of():
    assert key_of(Base((PL,), Input("m"), 4)) == 4
    assert key_of(Sync((), Base((), Input("a"), 5), Base((), Output("a"), 5))) == 5
    assert key_of(Base((), TAU, 0)) == 0


def test_is_valid():
    assert is_valid(Base((PL,), Input("m"), 1))
    assert is_valid(Sync((), Base((), Input("a"), 1), Base((), Output("a"), 1)))
    assert not is_valid(Sync((), Base((), Input("a"), 1), Base((), Input("b"), 2)))
    assert not is_valid(Sync((), Base((), Input("a"), 1), Base((), Output("a"), 2)))
    assert not is_valid(Sync((), Base((), Input("a"), 1), Base((), Input("a"), 1)))


def test_sync_branches_reject_tau():
    with pytest.raises(ValueError):
        Sync((), Base((), TAU, 1), Base((), TAU, 1))


def test_enumerate_smallest():
    out = enumerate_valid(["a"], [1], 0)
    texts = [format_label(t) for t in out]
    assert texts == ["a[1]", "~a[1]", "tau[1]", "<|L a[1], |R ~a[1]>", "<|L ~a[1], |R a[1]>"]


def _expected_count(names: int, keys: int, depth: int) -> int:
    # independent count straight off the grammar: decorated actions plus
    # decorated pairs with complementary branches sharing a key
    seqs = [4**n for n in range(depth + 1)]
    bases = sum(seqs) * (2 * names + 1) * keys
    syncs = 0
    for outer in range(depth + 1):
        for il in range(depth + 1 - outer):
            for ir in range(depth + 1 - outer - il):
                syncs += seqs[outer] * seqs[il] * seqs[ir] * (2 * names) * keys
    return bases + syncs


@pytest.mark.parametrize(
    "names,keys,depth",
    [(1, 1, 0), (1, 1, 1), (1, 2, 2), (2, 2, 1), (1, 2, 3)],
)
def test_enumerate_count_against_independent_formula(names, keys, depth):
    out = enumerate_valid([f"x{i}" for i in range(names)], list(range(1, keys + 1)), depth)
    assert len(out) == _expected_count(names, keys, depth)
    assert len(set(out)) == len(out)
    assert all(is_valid(t) for t in out)
    assert all(total_decorators(t) <= depth for t in out)


def test_enumerate_monotone_in_depth():
    sizes = [len(enumerate_valid(["a"], [1], d)) for d in range(3)]
    assert sizes == sorted(sizes)
    assert set(enumerate_valid(["a"], [1], 0)) <= set(enumerate_valid(["a"], [1], 2))


def test_enumerate_no_mismatched_sync():
    for t in enumerate_valid(["a"], [1], 0):
        if isinstance(t, Sync):
            assert t.left.key == t.right.key
            assert complement(t.left.label) == t.right.label


def test_enumerate_deterministic():
    a = enumerate_valid(["a", "b"], [1, 2], 1)
    b = enumerate_valid(["b", "a"], [2, 1], 1)
    assert a == b


@pytest.mark.parametrize(
    "text",
    ["a[1]", "~a[1]", "tau[0]", "|L.m[1]", "+R.|L.a[2]", "<|L a[1], |R ~a[1]>",
     "+L.<|L |R.a[3], |R +L.~a[3]>"],
)
def test_label_text_roundtrip(text):
    assert format_label(parse_label(text)) == text


@pytest.mark.parametrize("bad", ["", "a", "a[1", "~tau[1]", "x[1] y", "<|L tau[1], |R a[1]>"])
def test_label_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_label(bad)


def test_mismatched_sync_parses_but_is_invalid():
    t = parse_label("<|L a[1], |R b[1]>")
    assert isinstance(t, Sync) and not is_valid(t)


_labels = st.one_of(
    st.sampled_from([Input("a"), Output("a"), Input("b")]),
    st.just(TAU),
)
_decs = st.lists(st.sampled_from(DECORATORS), max_size=3).map(tuple)
_bases = st.builds(Base, _decs, _labels, st.integers(0, 3))
_branches = st.builds(Base, _decs, st.sampled_from([Input("a"), Output("b")]), st.integers(0, 3))
_prooflabels = st.one_of(_bases, st.builds(Sync, _decs, _branches, _branches))


@given(_prooflabels, st.sampled_from(DECORATORS))
def test_decorating_preserves_projections_and_validity(t, d):
    decorated = decorate(d, t)
    assert label_of(decorated) == label_of(t)
    assert key_of(decorated) == key_of(t)
    assert is_valid(decorated) == is_valid(t)
    assert head(decorated) is d
    assert peel(decorated) == t


@given(_prooflabels)
def test_projections_total(t):
    label_of(t)
    key_of(t)
    assert format_label(t)
    if total_decorators(t) <= 4 and is_valid(t):
        assert parse_label(format_label(t)) == t
