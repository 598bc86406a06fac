"""Connectivity, dependence, and independence on proof labels.

Three mutually structured rule systems decide how two proof labels relate:
``conn`` (the labels can decorate connected transitions), ``dep`` (causally
related), ``indep`` (concurrent).  Deciders return derivation trees; a
separate checker re-validates a derivation without searching.  For exhaustive
sweeps over millions of pairs, ``relation_matrices`` computes all three
relations at once as boolean matrices by a vectorized least-fixpoint; it is
cross-checked against the deciders in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .prooflabels import (
    Base,
    Decorator,
    ProofLabel,
    Sync,
    format_label,
    head,
    key_of,
    peel,
)

CONN = "conn"
DEP = "dep"
INDEP = "indep"


@dataclass(frozen=True, slots=True)
class CausalDerivation:
    relation: str
    rule: str
    left: ProofLabel
    right: ProofLabel
    premises: tuple["CausalDerivation", ...] = ()
    evidence: tuple = ()


def _suffix(d: Decorator) -> str:
    return "L" if d in (Decorator.SUM_L, Decorator.PAR_L) else "R"


def _bare_base(t: ProofLabel) -> bool:
    return type(t) is Base and not t.prefix


def _bare_sync(t: ProofLabel) -> bool:
    return type(t) is Sync and not t.prefix


def check_conn(t1: ProofLabel, t2: ProofLabel) -> CausalDerivation | None:
    """Decide t1 conn t2; rules tried in the canonical order
    A1, A2, C1, C2, P1, P2, S1, S2, S3."""
    if _bare_base(t1):
        return CausalDerivation(CONN, "A1", t1, t2)
    if _bare_base(t2):
        return CausalDerivation(CONN, "A2", t1, t2)
    h1, h2 = head(t1), head(t2)
    if h1 is not None and h2 is not None:
        if h1 is h2:
            sub = check_conn(peel(t1), peel(t2))
            if sub is None:
                return None
            kind = "C1" if h1.is_sum else "P1"
            return CausalDerivation(CONN, f"{kind}_{_suffix(h1)}", t1, t2, (sub,))
        if h1.opposite is h2:
            kind = "C2" if h1.is_sum else "P2"
            return CausalDerivation(CONN, f"{kind}_{_suffix(h1)}", t1, t2)
        return None
    if h1 is not None and h1.is_par and _bare_sync(t2):
        branch = t2.left if h1 is Decorator.PAR_L else t2.right
        sub = check_conn(peel(t1), branch)
        if sub is None:
            return None
        return CausalDerivation(CONN, f"S1_{_suffix(h1)}", t1, t2, (sub,))
    if _bare_sync(t1) and h2 is not None and h2.is_par:
        branch = t1.left if h2 is Decorator.PAR_L else t1.right
        sub = check_conn(branch, peel(t2))
        if sub is None:
            return None
        return CausalDerivation(CONN, f"S2_{_suffix(h2)}", t1, t2, (sub,))
    if _bare_sync(t1) and _bare_sync(t2):
        sub_l = check_conn(t1.left, t2.left)
        if sub_l is None:
            return None
        sub_r = check_conn(t1.right, t2.right)
        if sub_r is None:
            return None
        return CausalDerivation(CONN, "S3", t1, t2, (sub_l, sub_r))
    return None


def check_dep(t1: ProofLabel, t2: ProofLabel) -> CausalDerivation | None:
    """Decide t1 dep t2 (causal relatedness)."""
    if _bare_base(t1):
        return CausalDerivation(DEP, "A1", t1, t2)
    if _bare_base(t2):
        return CausalDerivation(DEP, "A2", t1, t2)
    h1, h2 = head(t1), head(t2)
    if h1 is not None and h2 is not None:
        if h1 is h2:
            sub = check_dep(peel(t1), peel(t2))
            if sub is None:
                return None
            kind = "C1" if h1.is_sum else "P1"
            return CausalDerivation(DEP, f"{kind}_{_suffix(h1)}", t1, t2, (sub,))
        if h1.opposite is h2:
            if h1.is_sum:
                return CausalDerivation(DEP, f"C2_{_suffix(h1)}", t1, t2)
            k1, k2 = key_of(t1), key_of(t2)
            if k1 != k2:
                return None
            return CausalDerivation(
                DEP, f"P2_{_suffix(h1)}", t1, t2, evidence=("key_eq", k1, k2)
            )
        return None
    if h1 is not None and h1.is_par and _bare_sync(t2):
        branch = t2.left if h1 is Decorator.PAR_L else t2.right
        sub = check_dep(peel(t1), branch)
        if sub is None:
            return None
        return CausalDerivation(DEP, f"S1_{_suffix(h1)}", t1, t2, (sub,))
    if _bare_sync(t1) and h2 is not None and h2.is_par:
        branch = t1.left if h2 is Decorator.PAR_L else t1.right
        sub = check_dep(branch, peel(t2))
        if sub is None:
            return None
        return CausalDerivation(DEP, f"S2_{_suffix(h2)}", t1, t2, (sub,))
    if _bare_sync(t1) and _bare_sync(t2):
        dep_l = check_dep(t1.left, t2.left)
        if dep_l is not None:
            conn_r = check_conn(t1.right, t2.right)
            if conn_r is not None:
                return CausalDerivation(DEP, "S3", t1, t2, (dep_l, conn_r))
        conn_l = check_conn(t1.left, t2.left)
        if conn_l is not None:
            dep_r = check_dep(t1.right, t2.right)
            if dep_r is not None:
                return CausalDerivation(DEP, "S3", t1, t2, (conn_l, dep_r))
        return None
    return None


def check_indep(t1: ProofLabel, t2: ProofLabel) -> CausalDerivation | None:
    """Decide t1 indep t2 (concurrency).  There are no axioms for undecorated
    keyed actions, and no rule for opposite sum branches."""
    h1, h2 = head(t1), head(t2)
    if h1 is not None and h2 is not None:
        if h1 is h2:
            sub = check_indep(peel(t1), peel(t2))
            if sub is None:
                return None
            kind = "C1" if h1.is_sum else "P1"
            return CausalDerivation(INDEP, f"{kind}_{_suffix(h1)}", t1, t2, (sub,))
        if h1.opposite is h2 and h1.is_par:
            k1, k2 = key_of(t1), key_of(t2)
            if k1 == k2:
                return None
            return CausalDerivation(
                INDEP, f"P2_{_suffix(h1)}", t1, t2, evidence=("key_ne", k1, k2)
            )
        return None
    if h1 is not None and h1.is_par and _bare_sync(t2):
        branch = t2.left if h1 is Decorator.PAR_L else t2.right
        sub = check_indep(peel(t1), branch)
        if sub is None:
            return None
        return CausalDerivation(INDEP, f"S1_{_suffix(h1)}", t1, t2, (sub,))
    if _bare_sync(t1) and h2 is not None and h2.is_par:
        branch = t1.left if h2 is Decorator.PAR_L else t1.right
        sub = check_indep(branch, peel(t2))
        if sub is None:
            return None
        return CausalDerivation(INDEP, f"S2_{_suffix(h2)}", t1, t2, (sub,))
    if _bare_sync(t1) and _bare_sync(t2):
        sub_l = check_indep(t1.left, t2.left)
        if sub_l is None:
            return None
        sub_r = check_indep(t1.right, t2.right)
        if sub_r is None:
            return None
        return CausalDerivation(INDEP, "S3", t1, t2, (sub_l, sub_r))
    return None


CHECKERS = {CONN: check_conn, DEP: check_dep, INDEP: check_indep}


# ---------------------------------------------------------------------------
# Derivation re-checker


def check_derivation(d: CausalDerivation, t1: ProofLabel, t2: ProofLabel) -> bool:
    """True iff ``d`` is a well-formed derivation concluding that ``t1`` and
    ``t2`` stand in ``d.relation``.  Validates shapes and side conditions
    only; performs no search."""
    if d.left != t1 or d.right != t2:
        return False
    rel, rule = d.relation, d.rule
    if rel not in (CONN, DEP, INDEP):
        return False
    h1, h2 = head(t1), head(t2)
    if rule == "A1":
        return rel in (CONN, DEP) and _bare_base(t1) and not d.premises and not d.evidence
    if rule == "A2":
        return rel in (CONN, DEP) and _bare_base(t2) and not d.premises and not d.evidence
    if rule in ("C1_L", "C1_R", "P1_L", "P1_R"):
        want = {
            "C1_L": Decorator.SUM_L,
            "C1_R": Decorator.SUM_R,
            "P1_L": Decorator.PAR_L,
            "P1_R": Decorator.PAR_R,
        }[rule]
        if h1 is not want or h2 is not want or len(d.premises) != 1 or d.evidence:
            return False
        sub = d.premises[0]
        return sub.relation == rel and check_derivation(sub, peel(t1), peel(t2))
    if rule in ("C2_L", "C2_R"):
        want = Decorator.SUM_L if rule == "C2_L" else Decorator.SUM_R
        return (
            rel in (CONN, DEP)
            and h1 is want
            and h2 is want.opposite
            and not d.premises
            and not d.evidence
        )
    if rule in ("P2_L", "P2_R"):
        want = Decorator.PAR_L if rule == "P2_L" else Decorator.PAR_R
        if h1 is not want or h2 is not want.opposite or d.premises:
            return False
        k1, k2 = key_of(t1), key_of(t2)
        if rel == CONN:
            return not d.evidence
        if rel == DEP:
            return k1 == k2 and d.evidence == ("key_eq", k1, k2)
        return k1 != k2 and d.evidence == ("key_ne", k1, k2)
    if rule in ("S1_L", "S1_R"):
        want = Decorator.PAR_L if rule == "S1_L" else Decorator.PAR_R
        if h1 is not want or not _bare_sync(t2) or len(d.premises) != 1 or d.evidence:
            return False
        branch = t2.left if want is Decorator.PAR_L else t2.right
        sub = d.premises[0]
        return sub.relation == rel and check_derivation(sub, peel(t1), branch)
    if rule in ("S2_L", "S2_R"):
        want = Decorator.PAR_L if rule == "S2_L" else Decorator.PAR_R
        if not _bare_sync(t1) or h2 is not want or len(d.premises) != 1 or d.evidence:
            return False
        branch = t1.left if want is Decorator.PAR_L else t1.right
        sub = d.premises[0]
        return sub.relation == rel and check_derivation(sub, branch, peel(t2))
    if rule == "S3":
        if not (_bare_sync(t1) and _bare_sync(t2)) or len(d.premises) != 2 or d.evidence:
            return False
        p1, p2 = d.premises
        if not check_derivation(p1, t1.left, t2.left):
            return False
        if not check_derivation(p2, t1.right, t2.right):
            return False
        if rel in (CONN, INDEP):
            return p1.relation == rel and p2.relation == rel
        return {p1.relation, p2.relation} == {DEP, CONN}
    return False


def format_derivation(d: CausalDerivation, indent: int = 0) -> str:
    """Indented rule tree, one rule per line, side conditions annotated."""
    note = ""
    if d.evidence:
        kind, k1, k2 = d.evidence
        op = "=" if kind == "key_eq" else "!="
        note = f"  [key {k1} {op} key {k2}]"
    line = (
        "  " * indent
        + f"{d.rule}: {d.relation}({format_label(d.left)}, {format_label(d.right)}){note}"
    )
    parts = [line]
    for sub in d.premises:
        parts.append(format_derivation(sub, indent + 1))
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# Bulk decision
#
# The deciders recurse by peeling one decorator or entering a pair branch, so
# over a finite label universe all three relations are the least fixpoint of
# one monotone operator on boolean matrices.  Iterating that operator with
# numpy decides every ordered pair at once.

_H_BASE = 4
_H_SYNC = 5
_DEC_CODE = {
    Decorator.SUM_L: 0,
    Decorator.SUM_R: 1,
    Decorator.PAR_L: 2,
    Decorator.PAR_R: 3,
}


def _universe(labels) -> tuple[list[ProofLabel], dict[ProofLabel, int]]:
    index: dict[ProofLabel, int] = {}
    order: list[ProofLabel] = []
    stack = list(labels)
    while stack:
        t = stack.pop()
        if t in index:
            continue
        index[t] = len(order)
        order.append(t)
        if t.prefix:
            stack.append(peel(t))
        elif type(t) is Sync:
            stack.append(t.left)
            stack.append(t.right)
    return order, index


def _pair_gather(m, rows, cols, block: int = 512):
    import numpy as np

    n = m.shape[0]
    out = np.zeros((n, n), dtype=bool)
    flat = m.ravel()
    row_ok = rows >= 0
    col_ok = cols >= 0
    safe_cols = np.maximum(cols, 0)
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        idx = np.maximum(rows[i0:i1, None], 0) * n + safe_cols[None, :]
        blk = flat[idx]
        blk &= row_ok[i0:i1, None]
        blk &= col_ok[None, :]
        out[i0:i1] = blk
    return out


def relation_matrices(labels):
    """Boolean matrices (conn, dep, indep) over ``labels``: entry [i, j]
    says whether labels[i] relates to labels[j].

    Decided for all ordered pairs simultaneously; agrees with the one-pair
    deciders (property-tested), but produces no derivations.
    """
    import numpy as np

    labels = list(labels)
    univ, index = _universe(labels)
    n = len(univ)
    headc = np.empty(n, dtype=np.int32)
    tail = np.full(n, -1, dtype=np.int64)
    bl = np.full(n, -1, dtype=np.int64)
    br = np.full(n, -1, dtype=np.int64)
    key = np.empty(n, dtype=np.int64)
    for i, t in enumerate(univ):
        key[i] = key_of(t)
        if t.prefix:
            headc[i] = _DEC_CODE[t.prefix[0]]
            tail[i] = index[peel(t)]
        elif type(t) is Sync:
            headc[i] = _H_SYNC
            bl[i] = index[t.left]
            br[i] = index[t.right]
        else:
            headc[i] = _H_BASE

    h1 = headc[:, None]
    h2 = headc[None, :]
    is_base_pair = (h1 == _H_BASE) | (h2 == _H_BASE)
    same_sum = (h1 == h2) & (h1 <= 1)
    opp_sum = ((h1 ^ 1) == h2) & (h1 <= 1)
    is_par1 = (h1 >= 2) & (h1 <= 3)
    same_par = (h1 == h2) & is_par1
    opp_par = ((h1 ^ 1) == h2) & is_par1
    key_eq = key[:, None] == key[None, :]
    s1l = (h1 == 2) & (h2 == _H_SYNC)
    s1r = (h1 == 3) & (h2 == _H_SYNC)
    s2l = (h1 == _H_SYNC) & (h2 == 2)
    s2r = (h1 == _H_SYNC) & (h2 == 3)
    s3 = (h1 == _H_SYNC) & (h2 == _H_SYNC)
    same_head = same_sum | same_par

    conn = np.zeros((n, n), dtype=bool)
    dep = np.zeros((n, n), dtype=bool)
    indep = np.zeros((n, n), dtype=bool)
    while True:
        conn_tails = _pair_gather(conn, tail, tail)
        dep_tails = _pair_gather(dep, tail, tail)
        indep_tails = _pair_gather(indep, tail, tail)
        conn_bb = _pair_gather(conn, bl, bl)
        conn_rr = _pair_gather(conn, br, br)
        dep_bb = _pair_gather(dep, bl, bl)
        dep_rr = _pair_gather(dep, br, br)
        indep_bb = _pair_gather(indep, bl, bl)
        indep_rr = _pair_gather(indep, br, br)

        new_conn = (
            is_base_pair
            | (same_head & conn_tails)
            | opp_sum
            | opp_par
            | (s1l & _pair_gather(conn, tail, bl))
            | (s1r & _pair_gather(conn, tail, br))
            | (s2l & _pair_gather(conn, bl, tail))
            | (s2r & _pair_gather(conn, br, tail))
            | (s3 & conn_bb & conn_rr)
        )
        new_dep = (
            is_base_pair
            | (same_head & dep_tails)
            | opp_sum
            | (opp_par & key_eq)
            | (s1l & _pair_gather(dep, tail, bl))
            | (s1r & _pair_gather(dep, tail, br))
            | (s2l & _pair_gather(dep, bl, tail))
            | (s2r & _pair_gather(dep, br, tail))
            | (s3 & ((dep_bb & conn_rr) | (conn_bb & dep_rr)))
        )
        new_indep = (
            (same_head & indep_tails)
            | (opp_par & ~key_eq)
            | (s1l & _pair_gather(indep, tail, bl))
            | (s1r & _pair_gather(indep, tail, br))
            | (s2l & _pair_gather(indep, bl, tail))
            | (s2r & _pair_gather(indep, br, tail))
            | (s3 & indep_bb & indep_rr)
        )
        if (
            np.array_equal(new_conn, conn)
            and np.array_equal(new_dep, dep)
            and np.array_equal(new_indep, indep)
        ):
            break
        conn, dep, indep = new_conn, new_dep, new_indep

    ids = np.array([index[t] for t in labels], dtype=np.int64)
    sel = np.ix_(ids, ids)
    return conn[sel], dep[sel], indep[sel]
