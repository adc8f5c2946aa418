"""Invariant census over a ring catalog and its pairwise products.

Every row is a ring; every column a named check with status "pass", "fail",
"n/a" or "error". Rows come out in catalog order and carry no timings, so two
runs with the same seed and budgets serialize to identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import _search
from .classify import (
    check_lemmas,
    check_local_annihilator,
    check_pir_product,
    check_pirloc,
    compare_poset_and_graph,
    recognize_staircase,
)
from .errors import BudgetExceeded, ZeroDivError
from .functor import graph_connected_via_zero, product_comparison, search_equalizer_failures
from .relations import (
    ASSOCIATED,
    BLEND_NILPOTENTS,
    BLEND_UNITS,
    EQUALITY,
    EQUIANNIHILATED,
    STRONGLY_ASSOCIATED,
    is_finer,
    is_zero_divisor_relation,
    relation_partition,
    split_merge_partitions,
)
from .ring import DEFAULT_IDEAL_CAP, FiniteRing, build_product, build_zn, local_data, validate_ring
from .zdgraph import connectivity, zeta, zeta_star

BASE_KINDS = (EQUALITY, STRONGLY_ASSOCIATED, ASSOCIATED, EQUIANNIHILATED)
ALL_KINDS = BASE_KINDS + (BLEND_NILPOTENTS, BLEND_UNITS)
PRODUCT_KINDS = (EQUALITY, STRONGLY_ASSOCIATED, ASSOCIATED)


@dataclass
class CensusConfig:
    seed: int = 0
    partitions: int = 50  # random partitions per base relation per ring
    product_order_cap: int = 256
    grid: tuple = tuple((p, k) for p in (2, 3, 5) for k in range(1, 6))
    equalizer_order_cap: int = 0  # 0 skips the hom search
    ideal_cap: int = DEFAULT_IDEAL_CAP
    node_cap: int = _search.DEFAULT_NODE_CAP


@dataclass
class CensusReport:
    config: CensusConfig
    rows: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def failures(self) -> list:
        out = []
        for row in self.rows:
            for name, cell in row["checks"].items():
                if cell["status"] in ("fail", "error"):
                    out.append((row["ring"], name))
        for name, cell in self.extras.items():
            if cell.get("status") in ("fail", "error"):
                out.append(("*", name))
        return out

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        c = self.config
        return {
            "seed": c.seed,
            "config": {
                "partitions": c.partitions,
                "product_order_cap": c.product_order_cap,
                "equalizer_order_cap": c.equalizer_order_cap,
                "ideal_cap": c.ideal_cap,
                "node_cap": c.node_cap,
            },
            "ok": self.ok,
            "failures": [list(f) for f in self.failures],
            "rows": self.rows,
            "extras": self.extras,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False, sort_keys=False) + "\n"


def _cell(ok: bool, **info) -> dict:
    return {"status": "pass" if ok else "fail", **info}


def _guard(fn, *args):
    try:
        return fn(*args)
    except BudgetExceeded:
        raise
    except ZeroDivError as e:
        return {"status": "error", "error": f"{type(e).__name__}: {e}"}


def check_relation_characterization(A: FiniteRing, count: int, seed: int) -> dict:
    """Zero-divisor relation iff finer than the equiannihilated relation, over the
    named relations and seeded random partitions around each base relation."""
    coarsest = relation_partition(A, EQUIANNIHILATED)
    checked = 0
    for i, kind in enumerate(BASE_KINDS):
        R = relation_partition(A, kind)
        for P in [R] + split_merge_partitions(R, count, seed * 7919 + i):
            checked += 1
            ok, w = is_zero_divisor_relation(P)
            if ok != is_finer(P, coarsest):
                return _cell(False, checked=checked, witness=[list(b) for b in P.blocks],
                             zdr_witness=list(w) if w else None)
    for kind in ALL_KINDS:
        checked += 1
        if not is_zero_divisor_relation(relation_partition(A, kind))[0]:
            return _cell(False, checked=checked, witness=kind.name)
    return _cell(True, checked=checked)


def check_connectivity(A: FiniteRing) -> dict:
    diameters = {}
    ok = True
    for kind in BASE_KINDS:
        R = relation_partition(A, kind)
        c = connectivity(zeta_star(A, R))
        diameters[kind.name] = None if c.empty else c.diameter
        ok &= c.empty or (c.connected and c.diameter <= 3)
        ok &= graph_connected_via_zero(A, R)
    return _cell(ok, diameters=diameters)


def check_products(A: FiniteRing, B: FiniteRing, node_cap: int) -> dict:
    flags = {}
    ok = True
    for kind in PRODUCT_KINDS:
        rep = product_comparison(A, B, kind)
        flags[kind.name] = rep.is_iso
        ok &= rep.ok and rep.is_iso
    return _cell(ok, iso=flags)


def ring_checks(A: FiniteRing, cfg: CensusConfig, seed: int) -> dict:
    checks = {}
    v = validate_ring(A)
    checks["validate"] = _cell(v.ok, mode=v.mode,
                               witness=v.failures[0] if v.failures else None)
    if not v.ok:
        return checks
    checks["zdrel"] = _guard(check_relation_characterization, A, cfg.partitions, seed)
    checks["connectivity"] = _guard(check_connectivity, A)
    if A.order > 1:
        def cla():
            r = check_local_annihilator(A, cfg.ideal_cap)
            return _cell(r.agrees, **r.to_dict())
        checks["cla"] = _guard(cla)
    if local_data(A, cfg.ideal_cap).is_local:
        def pirloc():
            r = check_pirloc(A, cfg.ideal_cap)
            return _cell(r.consistent, **r.to_dict())
        checks["pirloc"] = _guard(pirloc)
    else:
        checks["pirloc"] = {"status": "n/a"}

    def pir():
        r = check_pir_product(A, cfg.ideal_cap, cfg.node_cap)
        return _cell(r.ok, **r.to_dict())
    checks["pir"] = _guard(pir)

    def lemmas():
        r = check_lemmas(A, cap=cfg.ideal_cap, node_cap=cfg.node_cap)
        return _cell(r.ok, lemmas={k: x.status for k, x in r.results.items()})
    checks["lemmas"] = _guard(lemmas)
    return checks


def run_census(entries, cfg: CensusConfig | None = None) -> CensusReport:
    """entries: (name, ring-or-exception) pairs in catalog order. Exceptions
    (for instance a spec that failed to load) become error rows."""
    cfg = cfg or CensusConfig()
    report = CensusReport(cfg)
    good = []
    for i, (name, A) in enumerate(entries):
        if isinstance(A, Exception):
            report.rows.append({"ring": name, "order": None,
                                "checks": {"validate": {"status": "error", "error": str(A)}}})
            continue
        checks = ring_checks(A, cfg, cfg.seed + i)
        report.rows.append({"ring": name, "order": A.order, "checks": checks})
        if checks["validate"]["status"] == "pass":
            good.append((name, A))

    offset = len(entries)
    for i, (na, A) in enumerate(good):
        for j in range(i, len(good)):
            nb, B = good[j]
            if A.order * B.order > cfg.product_order_cap:
                continue
            P = build_product([A, B])
            checks = {"product": _guard(check_products, A, B, cfg.node_cap)}
            checks.update(ring_checks(P, cfg, cfg.seed + offset))
            offset += 1
            report.rows.append({"ring": f"{na} x {nb}", "order": P.order, "checks": checks})

    if cfg.grid:
        cases = {}
        ok = True
        for p, k in cfg.grid:
            A = build_zn(p ** k)
            idx = recognize_staircase(_assoc_zeta(A)).index
            cases[f"Z/{p}^{k}"] = idx
            ok &= idx == k
        report.extras["staircase_grid"] = _cell(ok, indices=cases)

    names = {n: A for n, A in good}
    pa, pb = "F2[x,y]/(x^2,y^2)", "F2[x,y]/(xy,x^2-y^2)"
    if pa in names and pb in names:
        cmp = compare_poset_and_graph(names[pa], names[pb], cfg.ideal_cap, cfg.node_cap)
        report.extras["poset_vs_graph"] = _cell(cmp.poset_iso and not cmp.graph_iso, **cmp.to_dict())

    if cfg.equalizer_order_cap:
        s = search_equalizer_failures([A for _, A in good], ASSOCIATED, cfg.equalizer_order_cap)
        d = s.to_dict()
        report.extras["equalizer_search"] = {
            "status": "pass",
            "pairs_examined": d["pairs_examined"],
            "hom_pairs_examined": d["hom_pairs_examined"],
            "skipped_not_functorial": d["skipped_not_functorial"],
            "non_iso": len(d["failures"]),
            "first": d["failures"][0] if d["failures"] else None,
        }
    return report


def _assoc_zeta(A: FiniteRing):
    return zeta(A, relation_partition(A, ASSOCIATED))
