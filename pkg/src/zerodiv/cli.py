"""Command line entry point.

Exit codes: 0 pass, 1 a checked property fails, 2 bad input, 3 budget exhausted.
Reports are JSON on stdout; graphs go to --output (stdout when omitted).
Budget defaults can be overridden with ZERODIV_BUDGETS, e.g.
``ZERODIV_BUDGETS="iso_nodes=100000,ideal_cap=512,hom_order_cap=8"``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import _search, catalog
from .census import CensusConfig, run_census
from .classify import (
    check_lemmas,
    check_local_annihilator,
    check_pir_product,
    check_pirloc,
    recognize_staircase,
)
from .errors import (
    BudgetExceeded,
    NotAnIdealError,
    NotFunctorial,
    NotZeroDivisorRelation,
    PreconditionError,
    RingAxiomError,
    SpecError,
    VerificationError,
)
from .functor import (
    decompose,
    equalizer_comparison,
    localization_comparison,
    product_comparison,
)
from .relations import (
    ASSOCIATED,
    EQUIANNIHILATED,
    is_finer,
    is_zero_divisor_relation,
    functorial_witness,
    parse_kind,
    relation_partition,
)
from .ring import DEFAULT_IDEAL_CAP, FiniteRing, local_data, ring_homs
from .specfile import dumps_spec, load_ring
from .zdgraph import connectivity, export, strip_loops, zeta, zeta_star

BUDGET_ENV = "ZERODIV_BUDGETS"
PROPERTIES = ("zdrel", "connectivity", "product", "equalizer", "functorial",
              "localization", "cla", "staircase", "pir", "lemmas")


@dataclass
class Budgets:
    iso_nodes: int = _search.DEFAULT_NODE_CAP
    ideal_cap: int = DEFAULT_IDEAL_CAP
    hom_order_cap: int = 16

    def update(self, text: str, source: str):
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, sep, value = item.partition("=")
            if not sep or key not in self.__dataclass_fields__:
                raise SpecError(f"{source}: bad budget entry {item!r}")
            try:
                n = int(value)
            except ValueError:
                raise SpecError(f"{source}: budget {key} must be an integer") from None
            if n <= 0:
                raise SpecError(f"{source}: budget {key} must be positive")
            setattr(self, key, n)

    def to_dict(self) -> dict:
        return {"iso_nodes": self.iso_nodes, "ideal_cap": self.ideal_cap,
                "hom_order_cap": self.hom_order_cap}


@dataclass
class RunConfig:
    command: str
    spec_paths: list = field(default_factory=list)
    relation: str = "assoc"
    restrict: str = "all"
    strip_loops: bool = False
    format: str = "json"
    budgets: Budgets = field(default_factory=Budgets)
    seed: int = 0
    output_path: str | None = None
    property: str | None = None
    subset: list | None = None
    catalog_dir: str | None = None
    product_order_cap: int = 256
    partitions: int = 50
    timings: bool = False


def _emit(doc: dict, out=None):
    out = out or sys.stdout
    out.write(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _rings(cfg: RunConfig, count: int | None = None, at_least: int = 1) -> list[FiniteRing]:
    if len(cfg.spec_paths) < at_least:
        raise SpecError(f"{cfg.command} needs at least {at_least} --spec")
    if count is not None and len(cfg.spec_paths) > count:
        raise SpecError(f"{cfg.command} takes at most {count} --spec")
    return [load_ring(p) for p in cfg.spec_paths]


def _kind(cfg: RunConfig, A: FiniteRing):
    return parse_kind(cfg.relation, A.order)


def _report(cfg: RunConfig, doc: dict, started: float) -> dict:
    doc = {"command": cfg.command, "seed": cfg.seed, "budgets": cfg.budgets.to_dict(), **doc}
    doc["timings"] = {"seconds": round(time.perf_counter() - started, 6)} if cfg.timings else {}
    return doc


# --------------------------------------------------------------------------
# commands


def cmd_graph(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    (A,) = _rings(cfg, count=1)
    R = relation_partition(A, _kind(cfg, A))
    try:
        G = zeta_star(A, R) if cfg.restrict == "zero-divisors" else zeta(A, R)
    except NotZeroDivisorRelation as e:
        raise SpecError(str(e)) from e
    if cfg.strip_loops:
        G = strip_loops(G)
    _write_output(export(G, cfg.format), cfg.output_path)
    if cfg.output_path is not None:
        _emit(_report(cfg, {"ring": A.name, "relation": R.kind.name, "vertices": G.n,
                            "edges": len(G.edges), "output": cfg.output_path}, t0))
    return 0


def _check_zdrel(cfg):
    (A,) = _rings(cfg, count=1)
    R = relation_partition(A, _kind(cfg, A))
    ok, w = is_zero_divisor_relation(R)
    finer = is_finer(R, relation_partition(A, EQUIANNIHILATED))
    doc = {"ring": A.name, "relation": R.kind.name, "zero_divisor_relation": ok,
           "finer_than_equiannihilated": finer, "witness": list(w) if w else None}
    return ok and finer == ok, doc


def _check_connectivity(cfg):
    (A,) = _rings(cfg, count=1)
    R = relation_partition(A, _kind(cfg, A))
    c = connectivity(zeta_star(A, R))
    ok = c.empty or (c.connected and c.diameter <= 3)
    return ok, {"ring": A.name, "relation": R.kind.name, "connected": c.connected,
                "diameter": c.diameter, "empty": c.empty}


def _check_product(cfg):
    A, B = _rings(cfg, count=2, at_least=2)
    rep = product_comparison(A, B, _kind(cfg, A))
    return rep.ok and rep.is_iso, rep.to_dict(cfg.timings)


def _pairs_of_homs(A, B):
    homs = list(ring_homs(A, B))
    return homs, [(homs[i], homs[j]) for i in range(len(homs)) for j in range(i + 1, len(homs))]


def _check_equalizer(cfg):
    rings = _rings(cfg, count=2)
    A, B = rings[0], rings[-1]
    cap = cfg.budgets.hom_order_cap
    if max(A.order, B.order) > cap:
        raise BudgetExceeded("hom search ring order", cap)
    kind = _kind(cfg, A)
    homs, pairs = _pairs_of_homs(A, B)
    results, ok, skipped = [], True, 0
    for f, g in pairs:
        try:
            rep = equalizer_comparison(f, g, kind)
        except NotFunctorial:
            skipped += 1
            continue
        ok &= rep.ok
        if not rep.is_iso:
            results.append(rep.to_dict(cfg.timings))
    return ok, {"source": A.name, "target": B.name, "relation": kind.name, "homs": len(homs),
                "pairs": len(pairs), "skipped_not_functorial": skipped,
                "hom_order_cap": cap, "non_iso": results}


def _check_functorial(cfg):
    rings = _rings(cfg, count=2)
    A, B = rings[0], rings[-1]
    if max(A.order, B.order) > cfg.budgets.hom_order_cap:
        raise BudgetExceeded("hom search ring order", cfg.budgets.hom_order_cap)
    RA = relation_partition(A, _kind(cfg, A))
    RB = relation_partition(B, parse_kind(cfg.relation, B.order))
    n = 0
    for f in ring_homs(A, B):
        n += 1
        w = functorial_witness(f, RA, RB)
        if w is not None:
            return False, {"source": A.name, "target": B.name, "relation": RA.kind.name,
                           "homs_checked": n, "map": f.map.tolist(), "witness": list(w)}
    return True, {"source": A.name, "target": B.name, "relation": RA.kind.name,
                  "homs_checked": n, "witness": None}


def _check_localization(cfg):
    (A,) = _rings(cfg, count=1)
    S = cfg.subset if cfg.subset else [a for a in A.elements if A.unit_mask[a]]
    rep = localization_comparison(A, S, _kind(cfg, A))
    return rep.ok, rep.to_dict(cfg.timings)


def _check_cla(cfg):
    (A,) = _rings(cfg, count=1)
    r = check_local_annihilator(A, cfg.budgets.ideal_cap)
    return r.agrees, {"ring": A.name, **r.to_dict()}


def _check_staircase(cfg):
    (A,) = _rings(cfg, count=1)
    R = relation_partition(A, _kind(cfg, A))
    r = recognize_staircase(zeta(A, R))
    return r.ok, {"ring": A.name, "relation": R.kind.name, **r.to_dict()}


def _check_pir(cfg):
    (A,) = _rings(cfg, count=1)
    r = check_pir_product(A, cfg.budgets.ideal_cap, cfg.budgets.iso_nodes)
    doc = {"ring": A.name, **r.to_dict()}
    ok = r.ok
    if local_data(A, cfg.budgets.ideal_cap).is_local:
        loc = check_pirloc(A, cfg.budgets.ideal_cap)
        doc["local"] = loc.to_dict()
        ok &= loc.consistent
    return ok, doc


def _check_lemmas(cfg):
    rings = _rings(cfg, count=2)
    A = rings[0]
    partner = rings[1] if len(rings) > 1 else None
    r = check_lemmas(A, partner, cfg.budgets.ideal_cap, cfg.budgets.iso_nodes)
    return r.ok, r.to_dict()


CHECKS = {
    "zdrel": _check_zdrel,
    "connectivity": _check_connectivity,
    "product": _check_product,
    "equalizer": _check_equalizer,
    "functorial": _check_functorial,
    "localization": _check_localization,
    "cla": _check_cla,
    "staircase": _check_staircase,
    "pir": _check_pir,
    "lemmas": _check_lemmas,
}


def cmd_check(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    ok, doc = CHECKS[cfg.property](cfg)
    doc = _report(cfg, {"property": cfg.property, "pass": bool(ok), **doc}, t0)
    _emit(doc)
    return 0 if ok else 1


def cmd_factor(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    (A,) = _rings(cfg, count=1)
    if cfg.relation != "assoc":
        raise SpecError("factor works with the associated relation only (--relation assoc)")
    d = decompose(A, ASSOCIATED, cfg.budgets.iso_nodes)
    doc = d.to_dict()
    doc["factors"] = [{"order": L.order, "spec": json.loads(dumps_spec(L.origin))} for L in d.leaves]
    if not d.steps:
        doc["pass"] = False
        doc["message"] = "no orthogonal pair (local ring): a ring with no orthogonal pair of " \
                         "nonzero zero-divisors is local and admits no nontrivial split"
        _emit(_report(cfg, doc, t0))
        return 1
    doc["pass"] = True
    _emit(_report(cfg, doc, t0))
    return 0


def _catalog_entries(directory: Path):
    order = {stem: i for i, stem in enumerate(catalog.CATALOG)}
    paths = sorted(directory.glob("*.spec"), key=lambda p: (order.get(p.stem, len(order)), p.name))
    return [_load_entry(p) for p in paths]


def _load_entry(path):
    try:
        A = load_ring(path, validate=False)
        return (A.name, A)
    except (SpecError, RingAxiomError, NotAnIdealError, PreconditionError) as e:
        return (Path(path).stem, e)


def cmd_census(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    if cfg.catalog_dir is not None:
        directory = Path(cfg.catalog_dir)
        if not directory.is_dir():
            raise SpecError(f"catalog directory {directory} not readable")
        entries = _catalog_entries(directory)
    elif cfg.spec_paths:
        entries = []
    else:
        entries = [(A.name, A) for A in catalog.catalog_rings()]
    entries += [_load_entry(p) for p in cfg.spec_paths]
    census_cfg = CensusConfig(
        seed=cfg.seed,
        partitions=cfg.partitions,
        product_order_cap=cfg.product_order_cap,
        ideal_cap=cfg.budgets.ideal_cap,
        node_cap=cfg.budgets.iso_nodes,
    )
    report = run_census(entries, census_cfg)
    text = report.dumps()
    if cfg.timings:
        doc = report.to_dict()
        doc["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
        text = json.dumps(doc, indent=1, ensure_ascii=False) + "\n"
    _write_output(text, cfg.output_path)
    return 0 if report.ok else 1


def cmd_catalog(cfg: RunConfig) -> int:
    written = catalog.export(cfg.output_path or "catalog")
    _emit({"command": "catalog", "written": [str(p) for p in written]})
    return 0


COMMANDS = {
    "graph": cmd_graph,
    "check": cmd_check,
    "factor": cmd_factor,
    "census": cmd_census,
    "catalog": cmd_catalog,
}


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", action="append", default=[], dest="spec_paths",
                        help="ring spec file (repeatable)")
    common.add_argument("--relation", default="assoc",
                        help="eq, sassoc, assoc, equiann, blend-nilp, blend-units or custom:<path>")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", dest="output_path")
    common.add_argument("--budget", action="append", default=[],
                        help="KEY=VALUE override (iso_nodes, ideal_cap, hom_order_cap)")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings to reports")

    p = argparse.ArgumentParser(prog="zerodiv", description="Compressed zero-divisor graphs of finite rings.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", parents=[common], help="emit ζ(A, R)")
    g.add_argument("--restrict", choices=("all", "zero-divisors"), default="all")
    g.add_argument("--strip-loops", action="store_true")
    g.add_argument("--format", choices=("dot", "json"), default="json")

    c = sub.add_parser("check", parents=[common], help="check a property")
    c.add_argument("--property", required=True, choices=PROPERTIES)
    c.add_argument("--subset", type=lambda s: [int(x) for x in s.split(",") if x],
                   help="comma-separated element ids (localization)")

    sub.add_parser("factor", parents=[common], help="split a ring via its graph")

    s = sub.add_parser("census", parents=[common], help="run the invariant census")
    s.add_argument("--catalog", dest="catalog_dir", help="directory of *.spec files")
    s.add_argument("--product-order-cap", type=int, default=256)
    s.add_argument("--partitions", type=int, default=50)

    sub.add_parser("catalog", parents=[common], help="write the built-in catalog to --output")
    return p


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    budgets = Budgets()
    env = os.environ.get(BUDGET_ENV)
    if env:
        budgets.update(env, BUDGET_ENV)
    for b in ns.budget:
        budgets.update(b, "--budget")
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    fields.pop("budget", None)
    return RunConfig(budgets=budgets, **fields)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except BudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 3
    except RingAxiomError as e:
        print(f"invalid ring: {e.axiom} fails, witness {list(e.witness)}", file=sys.stderr)
        return 2
    except (SpecError, NotAnIdealError, PreconditionError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (VerificationError, NotFunctorial, NotZeroDivisorRelation) as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
