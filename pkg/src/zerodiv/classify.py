"""Staircase graphs and the local / PIR recognizers built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import prod

import numpy as np

from . import _search
from .errors import PreconditionError, ZeroDivError
from .functor import decompose, orthogonal_annihilator_witness, side_subgraph_witness
from .relations import ASSOCIATED, relation_partition
from .ring import (
    DEFAULT_IDEAL_CAP,
    FiniteRing,
    ideal_poset_iso,
    is_pir,
    local_data,
    principal_ideals,
)
from .zdgraph import Graph, GraphMap, are_isomorphic, kronecker_product, zeta


def staircase(k: int) -> Graph:
    """SG_k: vertices 0..k, i ~ j iff i + j >= k."""
    if k < 0:
        raise PreconditionError("staircase index must be nonnegative")
    edges = frozenset((i, j) for i in range(k + 1) for j in range(i, k + 1) if i + j >= k)
    return Graph(tuple(str(i) for i in range(k + 1)), edges, tuple(range(k + 1)))


def staircase_loops(k: int) -> int:
    return k + 1 - (k + 1) // 2


@dataclass
class StaircaseReport:
    index: int | None
    witness_map: GraphMap | None  # G -> SG_k
    failure_reason: str | None
    looped: tuple[int, ...]
    degrees: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.index is not None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "map": list(self.witness_map.map) if self.witness_map else None,
            "failure_reason": self.failure_reason,
            "looped": [self.witness_map.source.labels[v] if self.witness_map else v for v in self.looped],
            "degrees": list(self.degrees),
        }


def recognize_staircase(G: Graph) -> StaircaseReport:
    """Index k when G ≅ SG_k; the map sends the vertex of degree i+1 to i."""
    degs, looped = G.degrees, G.looped
    if G.n == 0:
        return StaircaseReport(None, None, "empty graph", looped, degs)
    k = G.n - 1
    problems = []
    if len(looped) != staircase_loops(k):
        problems.append(f"{len(looped)} looped vertices where SG_{k} has {staircase_loops(k)}")
    if sorted(degs) != list(range(1, G.n + 1)):
        clashes = sorted({d for d in degs if degs.count(d) > 1})
        if clashes:
            problems.append(f"degree clash at degrees {clashes}")
        else:
            problems.append(f"degrees {sorted(degs)} are not 1..{G.n}")
    if problems:
        return StaircaseReport(None, None, "; ".join(problems), looped, degs)
    phi = GraphMap(G, staircase(k), tuple(d - 1 for d in degs))
    if not phi.is_isomorphism:
        return StaircaseReport(None, None, "degree order is not an isomorphism onto SG_k", looped, degs)
    return StaircaseReport(k, phi, None, looped, degs)


def _associated_graph(A: FiniteRing):
    R = relation_partition(A, ASSOCIATED)
    return R, zeta(A, R)


# --------------------------------------------------------------------------
# local rings


def _annihilator_condition_fails(A: FiniteRing, a: int, b: int) -> bool:
    Z = A.annihilates
    return bool(((Z[a] | Z[b]) == Z[A.mul[a, b]]).all())


@dataclass
class LocalAnnihilatorReport:
    holds: bool
    witness: tuple[int, int] | None
    is_local: bool

    @property
    def agrees(self) -> bool:
        return self.holds == self.is_local

    def to_dict(self) -> dict:
        return {"holds": self.holds, "witness": list(self.witness) if self.witness else None,
                "is_local": self.is_local, "agrees": self.agrees}


def local_annihilator_witness(A: FiniteRing):
    """(a, b) in D*(A)² with Ann(a) ∪ Ann(b) = Ann(ab), or None.

    Idempotent diagonal pairs are tried first, then all pairs a <= b in id order.
    """
    dstar = [a for a in A.elements if A.zero_divisor_mask[a] and a != A.zero]
    for a in dstar:
        if A.mul[a, a] == a and _annihilator_condition_fails(A, a, a):
            return (a, a)
    Z = A.annihilates
    for i, a in enumerate(dstar):
        rest = np.array(dstar[i:], dtype=np.intp)
        if not len(rest):
            break
        union = Z[a][None, :] | Z[rest]
        bad = (union == Z[A.mul[a, rest]]).all(axis=1)
        if bad.any():
            return (a, int(rest[np.argmax(bad)]))
    return None


def check_local_annihilator(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP) -> LocalAnnihilatorReport:
    if A.order == 1:
        raise PreconditionError("the zero ring is excluded")
    w = local_annihilator_witness(A)
    return LocalAnnihilatorReport(w is None, w, local_data(A, cap).is_local)


@dataclass
class PirLocReport:
    is_local_pir: bool
    staircase_index: int | None
    nilpotency_index: int | None
    consistent: bool
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "is_local_pir": self.is_local_pir,
            "staircase_index": self.staircase_index,
            "nilpotency_index": self.nilpotency_index,
            "consistent": self.consistent,
            "reason": self.reason,
        }


def check_pirloc(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP) -> PirLocReport:
    """Local A is PIR iff ζ(A, ∼) is a staircase, of index the nilpotency index."""
    loc = local_data(A, cap)
    if not loc.is_local:
        raise PreconditionError(f"{A.name} is not local")
    pir = is_pir(A, cap)
    rep = recognize_staircase(_associated_graph(A)[1])
    consistent = pir == rep.ok and (not pir or rep.index == loc.nilpotency_index)
    reason = None
    if not consistent:
        reason = (f"is_pir={pir}, staircase index {rep.index}, "
                  f"nilpotency index {loc.nilpotency_index}: {rep.failure_reason}")
    elif not rep.ok:
        reason = rep.failure_reason
    return PirLocReport(pir, rep.index, loc.nilpotency_index, consistent, reason)


# --------------------------------------------------------------------------
# PIR rings as products of local PIRs


def staircase_tuples(vertices: int):
    """Nonincreasing (k_1, ..., k_n), k_i >= 1, with ∏(k_i + 1) = vertices."""
    def go(rest, cap):
        if rest == 1:
            yield ()
            return
        for d in range(min(rest, cap), 1, -1):
            if rest % d == 0:
                for tail in go(rest // d, d):
                    yield (d - 1,) + tail
    if vertices < 2:
        return
    yield from go(vertices, vertices)


def staircase_product(indices) -> Graph:
    G = staircase(indices[0])
    for k in indices[1:]:
        G = kronecker_product(G, staircase(k))
    return G


def find_staircase_product(G: Graph, node_cap: int = _search.DEFAULT_NODE_CAP):
    """First index tuple (largest first) with G ≅ ∏ SG_{k_i}, or None."""
    for ks in staircase_tuples(G.n):
        if are_isomorphic(G, staircase_product(ks), node_cap) is not None:
            return list(ks)
    return None


@dataclass
class PirProductReport:
    is_pir: bool
    staircase_indices: list | None  # from the graph-side search, largest first
    factor_indices: list | None  # from decomposing the ring, in decomposition order
    forward_ok: bool
    backward_ok: bool
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.forward_ok and self.backward_ok

    def to_dict(self) -> dict:
        return {
            "is_pir": self.is_pir,
            "staircase_indices": self.staircase_indices,
            "factor_indices": self.factor_indices,
            "forward_ok": self.forward_ok,
            "backward_ok": self.backward_ok,
            "reason": self.reason,
        }


def check_pir_product(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP,
                      node_cap: int = _search.DEFAULT_NODE_CAP) -> PirProductReport:
    """A is PIR iff ζ(A, ∼) is a product of staircase graphs; both directions."""
    pir = is_pir(A, cap)
    reason = None
    factor_indices = None
    forward_ok = True
    if pir:
        leaves = decompose(A, ASSOCIATED, node_cap).leaves
        factor_indices = []
        for L in leaves:
            rep = recognize_staircase(_associated_graph(L)[1])
            if not rep.ok:
                forward_ok = False
                reason = f"factor {L.name} is not a staircase: {rep.failure_reason}"
                break
            factor_indices.append(rep.index)
    found = find_staircase_product(_associated_graph(A)[1], node_cap)
    backward_ok = found is None or pir
    if not backward_ok:
        reason = f"graph is a staircase product {found} but the ring is not PIR"
    if pir and found is None:
        forward_ok = False
        reason = reason or "PIR ring whose graph is no staircase product"
    if pir and found is not None and factor_indices is not None and forward_ok:
        if sorted(factor_indices, reverse=True) != found:
            forward_ok = False
            reason = f"factor indices {factor_indices} disagree with graph search {found}"
    return PirProductReport(pir, found, factor_indices, forward_ok, backward_ok, reason)


# --------------------------------------------------------------------------
# lemma suite


@dataclass
class LemmaResult:
    status: str  # "pass", "fail" or "n/a"
    checked: int = 0
    witness: object = None
    note: str | None = None

    def to_dict(self) -> dict:
        out = {"status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class LemmaReport:
    ring: str
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results.values())

    def to_dict(self) -> dict:
        return {"ring": self.ring, "ok": self.ok,
                "lemmas": {k: v.to_dict() for k, v in self.results.items()}}


def _ann_union_strict(A: FiniteRing) -> LemmaResult:
    if A.order == 1 or not np.array_equal(A.zero_divisor_mask, A.nilpotent_mask):
        return LemmaResult("n/a", note="zero-divisors are not all nilpotent")
    dstar = [a for a in A.elements if A.zero_divisor_mask[a] and a != A.zero]
    for a in dstar:
        for b in dstar:
            if _annihilator_condition_fails(A, a, b):
                return LemmaResult("fail", len(dstar) ** 2, [a, b])
    return LemmaResult("pass", len(dstar) ** 2)


def _staircase_iso(A: FiniteRing):
    """(R, reps) with reps[i] a representative of φ(i) for φ: SG_k ≅ ζ(A, ∼), or None."""
    R, G = _associated_graph(A)
    rep = recognize_staircase(G)
    if not rep.ok:
        return None
    inv = rep.witness_map.inverse().map
    return R, [R.representative(inv[i]) for i in range(rep.index + 1)]


def _monotone_neighbourhoods(A: FiniteRing, reps) -> LemmaResult:
    """N(x φ(i)) ⊆ N(x φ(j)) for i <= j and every x; neighbourhoods in ζ(A, ∼)
    are the annihilators, which are unions of classes."""
    Z = A.annihilates
    reps = np.array(reps, dtype=np.intp)
    checked = 0
    for x in A.elements:
        rows = Z[A.mul[x, reps]]
        bad = rows[:-1] & ~rows[1:]
        checked += len(reps) - 1
        if bad.any():
            i = int(np.argwhere(bad)[0][0])
            return LemmaResult("fail", checked, [x, i, i + 1])
    return LemmaResult("pass", checked)


def _powers_of_generator(A: FiniteRing, R, reps) -> LemmaResult:
    """φ(i) = φ(1)^i, and Ann(xφ(i)) = Ann(xφ(j)) with i < j forces xφ(i) = xφ(j) = 0."""
    k = len(reps) - 1
    g = reps[1]
    for i in range(k + 1):
        if not R.related(A.power(g, i), reps[i]):
            return LemmaResult("fail", i, {"power": i})
    Z = A.annihilates
    checked = 0
    reps_arr = np.array(reps, dtype=np.intp)
    for x in A.elements:
        prods = A.mul[x, reps_arr]
        rows = Z[prods]
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                checked += 1
                if np.array_equal(rows[i], rows[j]) and (prods[i] != A.zero or prods[j] != A.zero):
                    return LemmaResult("fail", checked, [x, i, j])
    return LemmaResult("pass", checked)


def check_lemmas(A: FiniteRing, partner: FiniteRing | None = None, cap: int = DEFAULT_IDEAL_CAP,
                 node_cap: int = _search.DEFAULT_NODE_CAP) -> LemmaReport:
    """Per-lemma pass / fail / n/a with witnesses.

    ann_union_strict: Ann(a) ∪ Ann(b) ⊊ Ann(ab) on D*(A) when D(A) = N(A).
    monotone_neighbourhoods: N(xφ(i)) ⊆ N(xφ(j)) for a staircase isomorphism φ.
    staircase_powers: φ(i) = φ(1)^i when A is local with staircase graph.
    local_annihilator: the annihilator condition holds iff A is local.
    side_subgraphs: neighbourhoods of ([0],[1]) and ([1],[0]) in ζ(A)×ζ(B).
    orthogonal_annihilators: a ⊥ b and a ⊥ c imply Ann(b) = Ann(c).
    principal_bijection: ζ(A, ∼) has one vertex per principal ideal.
    """
    report = LemmaReport(A.name)
    res = report.results
    res["ann_union_strict"] = _ann_union_strict(A)

    iso = _staircase_iso(A)
    if iso is None:
        res["monotone_neighbourhoods"] = LemmaResult("n/a", note="no staircase isomorphism")
        res["staircase_powers"] = LemmaResult("n/a", note="no staircase isomorphism")
    else:
        R, reps = iso
        res["monotone_neighbourhoods"] = _monotone_neighbourhoods(A, reps)
        if local_data(A, cap).is_local and len(reps) > 1:
            res["staircase_powers"] = _powers_of_generator(A, R, reps)
        else:
            res["staircase_powers"] = LemmaResult("n/a", note="needs a local ring and k > 0")

    if A.order > 1:
        cla = check_local_annihilator(A, cap)
        res["local_annihilator"] = LemmaResult(
            "pass" if cla.agrees else "fail", 1, list(cla.witness) if cla.witness else None,
            note=f"local={cla.is_local}")
    else:
        res["local_annihilator"] = LemmaResult("n/a", note="zero ring")

    B = partner if partner is not None else A
    side = side_subgraph_witness(A, B, ASSOCIATED, node_cap)
    res["side_subgraphs"] = LemmaResult("pass" if side is None else "fail", 2, side,
                                        note=f"partner {B.name}")

    w = orthogonal_annihilator_witness(A)
    res["orthogonal_annihilators"] = LemmaResult("pass" if w is None else "fail", A.order,
                                                 list(w) if w else None)

    n_vertices = len(_associated_graph(A)[0])
    n_principal = len(principal_ideals(A))
    res["principal_bijection"] = LemmaResult(
        "pass" if n_vertices == n_principal else "fail", 1,
        None if n_vertices == n_principal else [n_vertices, n_principal])
    return report


# --------------------------------------------------------------------------
# ideal posets versus graphs


@dataclass
class PosetGraphComparison:
    poset_iso: bool
    graph_iso: bool
    looped: tuple[int, int]
    loop_discrepancies: list  # element labels looped in one graph only

    def to_dict(self) -> dict:
        return {"poset_iso": self.poset_iso, "graph_iso": self.graph_iso,
                "looped": list(self.looped), "loop_discrepancies": self.loop_discrepancies}


def compare_poset_and_graph(A: FiniteRing, B: FiniteRing, cap: int = DEFAULT_IDEAL_CAP,
                            node_cap: int = _search.DEFAULT_NODE_CAP) -> PosetGraphComparison:
    """Ideal posets may agree while the graphs differ; loop discrepancies are
    listed for element labels the two rings share."""
    RA, GA = _associated_graph(A)
    RB, GB = _associated_graph(B)
    shared = [lab for lab in A.labels if lab in set(B.labels)]
    diff = []
    for lab in shared:
        a, b = A.id(lab), B.id(lab)
        la, lb = bool(A.annihilates[a, a]), bool(B.annihilates[b, b])
        if la != lb:
            diff.append({"element": lab, A.name: la, B.name: lb})
    return PosetGraphComparison(
        ideal_poset_iso(A, B, cap, node_cap) is not None,
        are_isomorphic(GA, GB, node_cap) is not None,
        (len(GA.looped), len(GB.looped)),
        diff,
    )


def classification(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP,
                   node_cap: int = _search.DEFAULT_NODE_CAP) -> dict:
    loc = local_data(A, cap)
    stair = recognize_staircase(_associated_graph(A)[1])
    try:
        lemmas = check_lemmas(A, cap=cap, node_cap=node_cap).to_dict()["lemmas"]
    except ZeroDivError as e:
        lemmas = {"error": str(e)}
    return {
        "ring": A.name,
        "is_local": loc.is_local,
        "is_pir": is_pir(A, cap),
        "staircase": stair.to_dict(),
        "lemmas": lemmas,
    }


def local_products(rings, max_factors: int = 3, order_cap: int = 256):
    """Multisets of at most max_factors rings (catalog order) with product order <= order_cap."""
    out = []
    for n in range(1, max_factors + 1):
        for combo in combinations_with_replacement(range(len(rings)), n):
            if prod(rings[i].order for i in combo) <= order_cap:
                out.append(tuple(rings[i] for i in combo))
    return out
