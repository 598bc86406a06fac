"""Acceptance suite: one test per criterion, each printing a PASS line and
holding its stated time bound.

Scales are fixed here, not tuned at run time: the process corpus is every
term with at most 4 operators over names a, b (canonical keys) plus four
landmark processes; the label corpus is every valid proof label over one
name, keys {1, 2}, decorator budget 3.
"""

import subprocess
import sys
import time

import pytest

from ccskp.cli import main
from ccskp.lts import backward_steps, forward_steps
from ccskp.prooflabels import enumerate_valid
from ccskp.reach import is_reachable
from ccskp.syntax import parse
from ccskp.theorems import (
    default_corpus,
    verify_complementarity,
    verify_connected_witnesses,
    verify_label_validity,
    verify_loop_lemma,
    verify_origins,
    verify_realisation,
    verify_relation_algebra,
    verify_theorem1_corpus,
)

CORPUS_NAMES = ("a", "b")
CORPUS_MAX_OPERATORS = 4
LABEL_NAMES = ("a",)
LABEL_KEYS = (1, 2)
LABEL_DEPTH = 3


@pytest.fixture(scope="module")
def corpus():
    return default_corpus(CORPUS_NAMES, CORPUS_MAX_OPERATORS)


@pytest.fixture(scope="module")
def labels():
    return enumerate_valid(LABEL_NAMES, LABEL_KEYS, LABEL_DEPTH)


def _cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:
        code = e.code
    out = capsys.readouterr().out
    return code, out


def _report(name, ok, detail=""):
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_criterion_01_example_reproduction(capsys):
    t0 = time.monotonic()
    code, out = _cli(capsys, "steps", "m | l")
    assert code == 0 and out.splitlines() == [
        "0: m | l --[F] |L.m[0]--> m[0] | l",
        "1: m | l --[F] |R.l[0]--> m | l[0]",
    ]
    code, out = _cli(capsys, "steps", "m[0] | l", "--dir", "b")
    assert code == 0 and out.splitlines() == ["0: m[0] | l --[B] |L.m[0]--> m | l"]
    code, out = _cli(capsys, "check", "indep", "|L.m[1]", "|R.l[2]")
    assert code == 0 and "P2_L" in out
    code, out = _cli(capsys, "check", "dep", "|L.a[1]", "|L.b[2]")
    assert code == 0 and "P1_L" in out and "A1" in out
    elapsed = time.monotonic() - t0
    _report("criterion 1 (example reproduction)", elapsed < 1.0, f"{elapsed:.2f}s")


def test_criterion_02_loop_lemma(corpus):
    t0 = time.monotonic()
    rep = verify_loop_lemma(corpus)
    elapsed = time.monotonic() - t0
    _report(
        "criterion 2 (loop lemma)",
        rep.ok and elapsed < 60.0,
        f"{rep.checked} steps over {rep.counters['graphs']} graphs in {elapsed:.1f}s",
    )


def test_criterion_03_label_validity(corpus):
    rep = verify_label_validity(corpus)
    _report("criterion 3 (label validity)", rep.ok, f"{rep.checked} labels")


def test_criterion_04_theorem1_forward(corpus):
    t0 = time.monotonic()
    rep = verify_theorem1_corpus(corpus)
    elapsed = time.monotonic() - t0
    _report(
        "criterion 4 (connected transitions have conn labels)",
        rep.ok and elapsed < 60.0,
        f"{rep.checked} transition pairs in {elapsed:.1f}s",
    )


def test_criterion_05_complementarity(labels):
    t0 = time.monotonic()
    rep = verify_complementarity(labels)
    elapsed = time.monotonic() - t0
    ok = rep.ok and elapsed < 60.0 and rep.counters["ordered_pairs"] == len(labels) ** 2
    _report(
        "criterion 5 (complementarity)",
        ok,
        f"{rep.counters['ordered_pairs']} ordered pairs in {elapsed:.1f}s",
    )


def test_criterion_06_theorem1_witnesses(labels):
    rep = verify_connected_witnesses(labels)
    _report(
        "criterion 6 (constructive witnesses)",
        rep.ok,
        f"{rep.counters['conn_pairs']} conn pairs, "
        f"{rep.counters['base_shape_pairs']} base-shaped",
    )


def test_criterion_07_realisation(labels):
    rep = verify_realisation(labels)
    _report("criterion 7 (realisation)", rep.ok, f"{rep.checked} labels")


def test_criterion_08_origins(corpus):
    rep = verify_origins(corpus)
    faulty_seq = parse("a[1].b[1].0")
    faulty_cycle = parse("a[1].b[2] | ~b[2].~a[1]")
    extra = (
        not is_reachable(faulty_seq)
        and not is_reachable(faulty_cycle)
        and forward_steps(faulty_cycle) == []
        and backward_steps(faulty_cycle) == []
    )
    _report(
        "criterion 8 (origins and faulty processes)",
        rep.ok and extra,
        f"{rep.counters['graphs']} graphs, "
        f"{rep.counters['standard_roots']} standard roots",
    )


def test_criterion_09_relation_algebra(labels):
    rep = verify_relation_algebra(labels)
    _report("criterion 9 (symmetry, irreflexivity, reflexivity)", rep.ok)


def _run_cli_bytes(*argv) -> bytes:
    proc = subprocess.run(
        [sys.executable, "-m", "ccskp.cli", *argv],
        capture_output=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stderr.decode()
    return proc.stdout


def test_criterion_10_determinism():
    graph_args = ("graph", "a.b | ~b", "--format", "dot")
    verify_args = ("verify", "thm2", "--names", "a", "--keys", "1,2", "--depth", "2")
    ok = _run_cli_bytes(*graph_args) == _run_cli_bytes(*graph_args) and _run_cli_bytes(
        *verify_args
    ) == _run_cli_bytes(*verify_args)
    _report("criterion 10 (byte-identical outputs)", ok)
