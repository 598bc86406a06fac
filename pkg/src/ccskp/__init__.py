"""Executable semantics for CCSK, a reversible CCS with keyed prefixes and
proved transitions: parsing, forward/backward steps, reachability and
origins, causality relations on proof labels, and exhaustive desk-scale
verification of their metatheory."""

from .causality import (
    CausalDerivation,
    check_conn,
    check_dep,
    check_derivation,
    check_indep,
    format_derivation,
    relation_matrices,
)
from .lts import (
    BACKWARD,
    FORWARD,
    Derivation,
    Direction,
    Transition,
    backward_steps,
    derive,
    format_transition,
    forward_steps,
    reverse,
    validate_transition,
)
from .prooflabels import (
    Base,
    Decorator,
    ProofLabel,
    Sync,
    enumerate_valid,
    format_label,
    is_valid,
    key_of,
    label_of,
    parse_label,
)
from .reach import (
    Path,
    StateLimitExceeded,
    TransitionGraph,
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
from .syntax import (
    NIL,
    TAU,
    Input,
    KeyedPrefix,
    Label,
    Nil,
    Output,
    Par,
    ParseError,
    Prefix,
    Process,
    Restrict,
    Sum,
    Tau,
    canonicalize,
    complement,
    is_std,
    keys_of,
    parse,
    pretty_print,
)
from .theorems import (
    ConnWitness,
    RealisationWitness,
    SuiteReport,
    default_corpus,
    enumerate_processes,
    realise,
    realize_connected,
    realize_connected_base,
    verify_complementarity,
    verify_connected_witnesses,
    verify_label_validity,
    verify_loop_lemma,
    verify_origins,
    verify_realisation,
    verify_relation_algebra,
    verify_structural_lemmas,
    verify_theorem1_corpus,
    verify_theorem1_forward,
)

__all__ = [name for name in dir() if not name.startswith("_")]
