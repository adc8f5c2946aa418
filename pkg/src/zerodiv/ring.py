"""Finite commutative rings stored as explicit addition/multiplication tables.

Every element is an integer id in ``range(order)``. Higher-level operations
(ideals, quotients, localizations, homomorphisms) are table lookups and
vectorised scans over these tables.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import _search
from .errors import (
    BudgetExceeded,
    NotAnIdealError,
    PreconditionError,
    RingAxiomError,
)

EXHAUSTIVE_LIMIT = 256
DEFAULT_SAMPLES = 1_000_000
DEFAULT_IDEAL_CAP = 4096

_CHUNK = 1 << 22


def _table(rows) -> np.ndarray:
    arr = np.array(rows, dtype=np.int32)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RingSpec:
    """How a ring was (or should be) built. Mirrors the ring spec file."""

    kind: str  # "Zn" | "Product" | "Presented" | "Table"
    n: int | None = None
    factors: tuple["RingSpec", ...] = ()
    orders: tuple[int, ...] = ()
    one: tuple[int, ...] = ()
    mul: tuple = ()  # structure constants, mul[i][j] = coords of e_i * e_j
    add_table: tuple = ()
    mul_table: tuple = ()
    zero: int | None = None
    one_id: int | None = None
    labels: tuple[str, ...] | None = None
    name: str | None = None


@dataclass(frozen=True, eq=False)
class FiniteRing:
    add: np.ndarray
    mul: np.ndarray
    zero: int
    one: int
    labels: tuple[str, ...]
    origin: RingSpec | None = None
    name: str = ""
    factors: tuple["FiniteRing", ...] = ()

    def __repr__(self):
        return f"FiniteRing({self.name or '?'}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.add)

    @property
    def elements(self) -> range:
        return range(self.order)

    def id(self, label: str) -> int:
        """Element id for a display label."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labelled {label!r} in {self.name}") from None

    def label(self, a: int) -> str:
        return self.labels[a]

    @cached_property
    def neg(self) -> np.ndarray:
        rows, cols = np.nonzero(self.add == self.zero)
        out = np.empty(self.order, dtype=np.int32)
        out[rows] = cols
        out.setflags(write=False)
        return out

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def power(self, a: int, k: int) -> int:
        r = self.one
        for _ in range(k):
            r = int(self.mul[r, a])
        return r

    @cached_property
    def annihilates(self) -> np.ndarray:
        """``annihilates[a, x]`` is True iff ``a * x == 0``."""
        m = self.mul == self.zero
        m.setflags(write=False)
        return m

    @cached_property
    def unit_mask(self) -> np.ndarray:
        return (self.mul == self.one).any(axis=1)

    @cached_property
    def zero_divisor_mask(self) -> np.ndarray:
        nonzero = np.ones(self.order, dtype=bool)
        nonzero[self.zero] = False
        mask = (self.annihilates & nonzero[None, :]).any(axis=1)
        mask[self.zero] = True
        return mask

    @cached_property
    def nilpotent_mask(self) -> np.ndarray:
        # a is nilpotent iff a^(2^m) == 0 once 2^m >= N
        p = np.arange(self.order)
        steps = max(1, math.ceil(math.log2(max(self.order, 2))))
        for _ in range(steps):
            p = self.mul[p, p]
        return p == self.zero

    @cached_property
    def principal_masks(self) -> np.ndarray:
        """Row a is the membership mask of the principal ideal (a)."""
        n = self.order
        m = np.zeros((n, n), dtype=bool)
        m[np.arange(n)[:, None], self.mul] = True
        m.setflags(write=False)
        return m


@dataclass(frozen=True)
class IdealSet:
    ring: FiniteRing
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    def __contains__(self, a):
        return a in self._set

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def _set(self):
        return frozenset(self.members)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.ring.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def is_whole(self) -> bool:
        return len(self.members) == self.ring.order

    def is_zero(self) -> bool:
        return self.members == (self.ring.zero,)

    def __repr__(self):
        shown = ",".join(self.ring.labels[a] for a in self.members[:8])
        more = ",..." if len(self.members) > 8 else ""
        return f"IdealSet({{{shown}{more}}})"


def _ideal_from_mask(A: FiniteRing, mask) -> IdealSet:
    return IdealSet(A, tuple(int(x) for x in np.flatnonzero(mask)))


@dataclass(frozen=True, eq=False)
class RingHom:
    source: FiniteRing
    target: FiniteRing
    map: np.ndarray

    def __call__(self, a):
        return self.map[a]

    def failure(self):
        """First violated homomorphism condition as (condition, witness), or None."""
        f = self.map
        A, B = self.source, self.target
        if len(f) != A.order or (len(f) and (f.min() < 0 or f.max() >= B.order)):
            return ("total", ())
        if f[A.one] != B.one:
            return ("unital", (A.one,))
        for name, opA, opB in (("additive", A.add, B.add), ("multiplicative", A.mul, B.mul)):
            bad = np.argwhere(f[opA] != opB[f[:, None], f[None, :]])
            if len(bad):
                return (name, tuple(int(x) for x in bad[0]))
        return None

    @property
    def is_valid(self) -> bool:
        return self.failure() is None

    @property
    def is_bijective(self) -> bool:
        return len(set(self.map.tolist())) == self.target.order == self.source.order

    def then(self, other: "RingHom") -> "RingHom":
        if other.source is not self.target:
            raise PreconditionError("composition of non-composable homomorphisms")
        return RingHom(self.source, other.target, other.map[self.map])


# --------------------------------------------------------------------------
# construction


def build_zn(n: int) -> FiniteRing:
    if n < 1:
        raise PreconditionError(f"Z/n needs n >= 1, got {n}")
    a = np.arange(n)
    return FiniteRing(
        add=_table((a[:, None] + a[None, :]) % n),
        mul=_table((a[:, None] * a[None, :]) % n),
        zero=0,
        one=1 % n,
        labels=tuple(str(k) for k in range(n)),
        origin=RingSpec("Zn", n=n),
        name=f"Z/{n}",
    )


def build_product(factors: Sequence[FiniteRing]) -> FiniteRing:
    """Direct product; the id of (a_1, ..., a_k) is its mixed-radix value."""
    factors = tuple(factors)
    if not factors:
        raise PreconditionError("product of an empty list of rings")
    add, mul = factors[0].add, factors[0].mul
    for B in factors[1:]:
        nb = B.order
        n = len(add) * nb
        add = (add[:, None, :, None] * nb + B.add[None, :, None, :]).reshape(n, n)
        mul = (mul[:, None, :, None] * nb + B.mul[None, :, None, :]).reshape(n, n)
    orders = [F.order for F in factors]

    def encode(coords):
        r = 0
        for c, d in zip(coords, orders):
            r = r * d + c
        return r

    labels = tuple(
        "(" + ",".join(F.labels[c] for F, c in zip(factors, coords)) + ")"
        for coords in itertools.product(*(range(d) for d in orders))
    )
    return FiniteRing(
        add=_table(add),
        mul=_table(mul),
        zero=encode([F.zero for F in factors]),
        one=encode([F.one for F in factors]),
        labels=labels,
        origin=RingSpec("Product", factors=tuple(F.origin for F in factors)),
        name=" x ".join(F.name or "?" for F in factors),
        factors=factors,
    )


def build_presented(
    orders: Sequence[int],
    one: Sequence[int],
    mul: Sequence,
    labels: Sequence[str] | None = None,
    name: str = "",
) -> FiniteRing:
    """Ring on the additive group Z/d_1 + ... + Z/d_m with bilinear product.

    ``mul[i][j]`` is the coordinate vector of ``e_i * e_j``. Elements are
    coordinate vectors numbered in lexicographic order. The result is fully
    validated; any axiom failure raises RingAxiomError with a witness.
    """
    d = np.array(orders, dtype=np.int64)
    m = len(d)
    if m == 0 or (d < 1).any():
        raise PreconditionError("generator orders must be a nonempty list of positive integers")
    C = np.array(mul, dtype=np.int64).reshape(m, m, m)
    one_v = np.array(one, dtype=np.int64)
    for vec in itertools.chain([one_v], C.reshape(m * m, m)):
        if len(vec) != m or (vec < 0).any() or (vec >= d).any():
            raise RingAxiomError("coordinate range", tuple(int(x) for x in vec))
    if not np.array_equal(C, C.transpose(1, 0, 2)):
        i, j = np.argwhere((C != C.transpose(1, 0, 2)).any(axis=2))[0]
        raise RingAxiomError("symmetric structure constants", (int(i), int(j)))
    # d_i * e_i = 0 must force d_i * (e_i e_j) = 0
    for i in range(m):
        for j in range(m):
            if ((d[i] * C[i, j]) % d).any():
                raise RingAxiomError("well-defined product", (i, j))

    coords = np.array(list(itertools.product(*(range(k) for k in d))), dtype=np.int64)
    weights = np.array([int(np.prod(d[i + 1:])) for i in range(m)], dtype=np.int64)
    ids = lambda v: (v % d) @ weights  # noqa: E731
    add = ids(coords[:, None, :] + coords[None, :, :])
    prod = np.einsum("ai,bj,ijk->abk", coords, coords, C)
    mult = ids(prod)
    if labels is None:
        labels = tuple("(" + ",".join(str(int(x)) for x in c) + ")" for c in coords)
    spec = RingSpec(
        "Presented",
        orders=tuple(int(x) for x in d),
        one=tuple(int(x) for x in one_v),
        mul=tuple(tuple(tuple(int(x) for x in C[i, j]) for j in range(m)) for i in range(m)),
        labels=tuple(labels),
        name=name or None,
    )
    A = FiniteRing(
        add=_table(add), mul=_table(mult), zero=0, one=int(ids(one_v)),
        labels=tuple(labels), origin=spec, name=name,
    )
    report = validate_ring(A)
    if not report.ok:
        axiom, witness = report.failures[0]
        raise RingAxiomError(axiom, witness)
    return A


def build_table(add_table, mul_table, zero: int, one: int, labels=None, name="") -> FiniteRing:
    """Wrap explicit tables. Shape and range are checked; axioms are not."""
    add = np.array(add_table, dtype=np.int64)
    mul = np.array(mul_table, dtype=np.int64)
    n = len(add)
    if n == 0 or add.shape != (n, n) or mul.shape != (n, n):
        raise RingAxiomError("square tables", (n,))
    for t in (add, mul):
        bad = np.argwhere((t < 0) | (t >= n))
        if len(bad):
            raise RingAxiomError("entries in range", tuple(int(x) for x in bad[0]))
    if not (0 <= zero < n and 0 <= one < n):
        raise RingAxiomError("zero/one ids in range", (zero, one))
    labels = tuple(labels) if labels is not None else tuple(str(k) for k in range(n))
    spec = RingSpec(
        "Table", add_table=tuple(map(tuple, add.tolist())), mul_table=tuple(map(tuple, mul.tolist())),
        zero=zero, one_id=one, labels=labels, name=name or None,
    )
    return FiniteRing(_table(add), _table(mul), zero, one, labels, spec, name)


def build_from_spec(spec: RingSpec, validate: bool = True) -> FiniteRing:
    if spec.kind == "Zn":
        if spec.n is None:
            raise PreconditionError("Zn spec needs n")
        A = build_zn(spec.n)
    elif spec.kind == "Product":
        A = build_product([build_from_spec(f, validate) for f in spec.factors])
    elif spec.kind == "Presented":
        return build_presented(spec.orders, spec.one, spec.mul, spec.labels, spec.name or "")
    elif spec.kind == "Table":
        A = build_table(spec.add_table, spec.mul_table, spec.zero, spec.one_id, spec.labels, spec.name or "")
        if validate:
            report = validate_ring(A)
            if not report.ok:
                raise RingAxiomError(*report.failures[0])
        return A
    else:
        raise PreconditionError(f"unknown ring kind {spec.kind!r}")
    if spec.name:
        object.__setattr__(A, "name", spec.name)
    if spec.labels is not None and spec.kind != "Product":
        object.__setattr__(A, "labels", tuple(spec.labels))
    return A


def relabel(A: FiniteRing, name: str) -> FiniteRing:
    """Same ring under a new display name."""
    return FiniteRing(A.add, A.mul, A.zero, A.one, A.labels, A.origin, name, A.factors)


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    mode: str  # "exhaustive" | "sampled"
    samples: int
    failures: list = field(default_factory=list)  # [(axiom, witness), ...]

    def to_dict(self):
        return {
            "ok": self.ok,
            "mode": self.mode,
            "samples": self.samples,
            "failures": [{"axiom": a, "witness": list(w)} for a, w in self.failures],
        }


def _first(mask):
    idx = np.argwhere(mask)
    return tuple(int(x) for x in idx[0]) if len(idx) else None


def validate_ring(
    A: FiniteRing,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> ValidationReport:
    """Check every commutative-ring axiom.

    Exhaustive over all triples when ``A.order <= exhaustive_limit``, otherwise
    over ``samples`` random triples drawn with ``seed``.
    """
    add, mul = np.asarray(A.add), np.asarray(A.mul)
    n = A.order
    failures = []

    def note(axiom, witness):
        if witness is not None:
            failures.append((axiom, witness))

    if add.shape != (n, n) or mul.shape != (n, n):
        return ValidationReport(False, "exhaustive", 0, [("square tables", (n,))])
    for name, t in (("add range", add), ("mul range", mul)):
        note(name, _first((t < 0) | (t >= n)))
    if failures:
        return ValidationReport(False, "exhaustive", 0, failures)

    # pairwise axioms are always exhaustive
    note("additive commutativity", _first(add != add.T))
    note("multiplicative commutativity", _first(mul != mul.T))
    note("additive identity", _first(add[A.zero] != np.arange(n)))
    note("multiplicative identity", _first(mul[A.one] != np.arange(n)))
    note("additive inverses", _first(~(add == A.zero).any(axis=1)))
    if n > 1 and A.zero == A.one:
        failures.append(("zero != one", (A.zero,)))

    checks = (
        ("additive associativity", lambda a, b, c: add[add[a, b], c] != add[a, add[b, c]]),
        ("multiplicative associativity", lambda a, b, c: mul[mul[a, b], c] != mul[a, mul[b, c]]),
        ("distributivity", lambda a, b, c: mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]),
    )
    if n <= exhaustive_limit:
        mode, count = "exhaustive", n ** 3
        step = max(1, _CHUNK // (n * n))
        b = np.arange(n)[None, :, None]
        c = np.arange(n)[None, None, :]
        for axiom, bad in checks:
            for start in range(0, n, step):
                a = np.arange(start, min(n, start + step))[:, None, None]
                hit = _first(bad(a, b, c))
                if hit is not None:
                    failures.append((axiom, (hit[0] + start, hit[1], hit[2])))
                    break
    else:
        mode, count = "sampled", samples
        rng = np.random.default_rng(seed)
        abc = rng.integers(0, n, size=(samples, 3))
        a, b, c = abc[:, 0], abc[:, 1], abc[:, 2]
        for axiom, bad in checks:
            idx = np.flatnonzero(bad(a, b, c))
            if len(idx):
                failures.append((axiom, tuple(int(x) for x in abc[idx[0]])))
    return ValidationReport(not failures, mode, count, failures)


# --------------------------------------------------------------------------
# elements and ideals


@dataclass(frozen=True)
class ElementClasses:
    units: tuple[int, ...]
    zero_divisors: tuple[int, ...]  # includes 0
    nilpotents: tuple[int, ...]
    nonzero_zero_divisors: tuple[int, ...]


def classify_elements(A: FiniteRing) -> ElementClasses:
    as_tuple = lambda m: tuple(int(x) for x in np.flatnonzero(m))  # noqa: E731
    zd = as_tuple(A.zero_divisor_mask)
    return ElementClasses(
        units=as_tuple(A.unit_mask),
        zero_divisors=zd,
        nilpotents=as_tuple(A.nilpotent_mask),
        nonzero_zero_divisors=tuple(a for a in zd if a != A.zero),
    )


def nonzero_zero_divisors(A: FiniteRing) -> tuple[int, ...]:
    """D*(A): zero-divisors other than 0."""
    m = A.zero_divisor_mask.copy()
    m[A.zero] = False
    return tuple(int(x) for x in np.flatnonzero(m))


def annihilator(A: FiniteRing, a: int) -> IdealSet:
    return _ideal_from_mask(A, A.annihilates[a])


def principal_ideal(A: FiniteRing, a: int) -> IdealSet:
    return _ideal_from_mask(A, A.principal_masks[a])


def is_ideal(A: FiniteRing, members) -> bool:
    idx = np.array(sorted(set(int(x) for x in members)), dtype=np.intp)
    if not len(idx) or A.zero not in idx:
        return False
    mask = np.zeros(A.order, dtype=bool)
    mask[idx] = True
    return bool(mask[A.add[np.ix_(idx, idx)]].all() and mask[A.mul[:, idx]].all())


def ideal(A: FiniteRing, members) -> IdealSet:
    """Validated IdealSet from an iterable of element ids."""
    if not is_ideal(A, members):
        raise NotAnIdealError(f"{sorted(set(members))} is not an ideal of {A.name}")
    return IdealSet(A, tuple(sorted(set(int(x) for x in members))))


def additive_closure(A: FiniteRing, mask: np.ndarray) -> np.ndarray:
    """Smallest additive subgroup containing the masked elements (and 0)."""
    mask = mask.copy()
    mask[A.zero] = True
    while True:
        idx = np.flatnonzero(mask)
        new = np.zeros_like(mask)
        new[A.add[np.ix_(idx, idx)]] = True
        if new.sum() == mask.sum():
            return mask
        mask = new


def _sum_mask(A, m1, m2):
    i, j = np.flatnonzero(m1), np.flatnonzero(m2)
    out = np.zeros(A.order, dtype=bool)
    out[A.add[np.ix_(i, j)]] = True
    return out


def _key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


def principal_ideals(A: FiniteRing) -> list[IdealSet]:
    """Distinct principal ideals sorted by (size, members)."""
    seen = {}
    for a in A.elements:
        row = A.principal_masks[a]
        seen.setdefault(_key(row), row)
    ideals = [_ideal_from_mask(A, m) for m in seen.values()]
    return sorted(ideals, key=lambda I: (len(I), I.members))


def all_ideals(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP) -> list[IdealSet]:
    """Every ideal, as sums of principal ideals, sorted by (size, members).

    Raises BudgetExceeded if more than ``cap`` ideals turn up.
    """
    principals = [I.mask for I in principal_ideals(A)]
    found = {_key(m): m for m in principals}
    if len(found) > cap:
        raise BudgetExceeded("ideal count", cap)
    frontier = list(principals)
    while frontier:
        fresh = []
        for I in frontier:
            for P in principals:
                S = _sum_mask(A, I, P)
                k = _key(S)
                if k not in found:
                    found[k] = S
                    fresh.append(S)
                    if len(found) > cap:
                        raise BudgetExceeded("ideal count", cap)
        frontier = fresh
    ideals = [_ideal_from_mask(A, m) for m in found.values()]
    return sorted(ideals, key=lambda I: (len(I), I.members))


@dataclass(frozen=True)
class IdealOps:
    sum: IdealSet
    intersection: IdealSet
    product_is_zero: bool


def _same_ring(I: IdealSet, J: IdealSet):
    if I.ring is not J.ring:
        raise PreconditionError("ideals belong to different rings")


def ideal_ops(I: IdealSet, J: IdealSet) -> IdealOps:
    _same_ring(I, J)
    A = I.ring
    mI, mJ = I.mask, J.mask
    prods = A.mul[np.ix_(I.members, J.members)]
    return IdealOps(
        sum=_ideal_from_mask(A, _sum_mask(A, mI, mJ)),
        intersection=_ideal_from_mask(A, mI & mJ),
        product_is_zero=bool((prods == A.zero).all()),
    )


def ideal_product(I: IdealSet, J: IdealSet) -> IdealSet:
    _same_ring(I, J)
    A = I.ring
    mask = np.zeros(A.order, dtype=bool)
    mask[A.mul[np.ix_(I.members, J.members)]] = True
    return _ideal_from_mask(A, additive_closure(A, mask))


def whole(A: FiniteRing) -> IdealSet:
    return IdealSet(A, tuple(A.elements))


def zero_ideal(A: FiniteRing) -> IdealSet:
    return IdealSet(A, (A.zero,))


# --------------------------------------------------------------------------
# quotients, localizations, products


def quotient_ring(A: FiniteRing, I: IdealSet) -> tuple[FiniteRing, RingHom]:
    if I.ring is not A or not is_ideal(A, I.members):
        raise NotAnIdealError(f"{I} is not an ideal of {A.name}")
    members = np.array(I.members, dtype=np.intp)
    coset_min = A.add[:, members].min(axis=1)
    reps = np.unique(coset_min)
    index = np.full(A.order, -1, dtype=np.int64)
    index[reps] = np.arange(len(reps))
    proj = index[coset_min]
    Q = FiniteRing(
        add=_table(proj[A.add[np.ix_(reps, reps)]]),
        mul=_table(proj[A.mul[np.ix_(reps, reps)]]),
        zero=int(proj[A.zero]),
        one=int(proj[A.one]),
        labels=tuple(f"[{A.labels[r]}]" for r in reps),
        name=f"({A.name})/I{len(I)}",
    )
    object.__setattr__(Q, "origin", _table_spec(Q))
    return Q, RingHom(A, Q, _table(proj))


def _table_spec(A: FiniteRing) -> RingSpec:
    return RingSpec(
        "Table",
        add_table=tuple(map(tuple, A.add.tolist())),
        mul_table=tuple(map(tuple, A.mul.tolist())),
        zero=A.zero, one_id=A.one, labels=A.labels, name=A.name or None,
    )


def is_multiplicatively_closed(A: FiniteRing, S) -> bool:
    idx = np.array(sorted(set(S)), dtype=np.intp)
    mask = np.zeros(A.order, dtype=bool)
    mask[idx] = True
    return bool(mask[A.mul[np.ix_(idx, idx)]].all())


def localize(A: FiniteRing, S) -> tuple[FiniteRing, RingHom]:
    """Ring of fractions a/s (s in S) and the canonical map a -> a/1.

    a/s = b/t iff u(at - bs) = 0 for some u in S; classes are found by
    comparing every formal fraction against the class representatives.
    """
    S = sorted(set(int(s) for s in S))
    if A.one not in S:
        raise PreconditionError("S must contain 1")
    if not is_multiplicatively_closed(A, S):
        raise PreconditionError("S is not multiplicatively closed")
    s_arr = np.array(S, dtype=np.intp)
    # x ~ 0 iff some u in S kills x
    killed = A.annihilates[:, s_arr].any(axis=1)
    neg = A.neg

    rep_a: list[int] = []
    rep_s: list[int] = []
    cls = {}
    for a in A.elements:
        for s in S:
            if rep_a:
                ra = np.array(rep_a)
                rs = np.array(rep_s)
                # a*t - b*s over all representatives b/t
                diff = A.add[A.mul[a, rs], neg[A.mul[ra, s]]]
                hit = np.flatnonzero(killed[diff])
                if len(hit):
                    cls[(a, s)] = int(hit[0])
                    continue
            cls[(a, s)] = len(rep_a)
            rep_a.append(a)
            rep_s.append(s)
    k = len(rep_a)
    add = np.empty((k, k), dtype=np.int64)
    mul = np.empty((k, k), dtype=np.int64)
    for i in range(k):
        a, s = rep_a[i], rep_s[i]
        for j in range(k):
            b, t = rep_a[j], rep_s[j]
            st = int(A.mul[s, t])
            add[i, j] = cls[(int(A.add[A.mul[a, t], A.mul[b, s]]), st)]
            mul[i, j] = cls[(int(A.mul[a, b]), st)]
    labels = tuple(
        A.labels[a] if s == A.one else f"{A.labels[a]}/{A.labels[s]}"
        for a, s in zip(rep_a, rep_s)
    )
    L = FiniteRing(
        add=_table(add), mul=_table(mul),
        zero=cls[(A.zero, A.one)], one=cls[(A.one, A.one)],
        labels=labels, name=f"S^-1({A.name})",
    )
    object.__setattr__(L, "origin", _table_spec(L))
    phi = _table([cls[(a, A.one)] for a in A.elements])
    return L, RingHom(A, L, phi)


def crt_factor(A: FiniteRing, I: IdealSet, J: IdealSet) -> RingHom:
    """Verified isomorphism a -> (a mod I, a mod J) onto A/I x A/J."""
    ops = ideal_ops(I, J)
    if not ops.sum.is_whole():
        raise PreconditionError("I + J != (1)")
    if not ops.intersection.is_zero():
        raise PreconditionError("I and J intersect nontrivially")
    QI, pI = quotient_ring(A, I)
    QJ, pJ = quotient_ring(A, J)
    P = build_product([QI, QJ])
    f = RingHom(A, P, _table(pI.map.astype(np.int64) * QJ.order + pJ.map))
    bad = f.failure()
    if bad is not None or not f.is_bijective:
        raise RingAxiomError("CRT isomorphism", bad[1] if bad else ())
    return f


# --------------------------------------------------------------------------
# local structure


@dataclass(frozen=True)
class LocalData:
    is_local: bool
    maximal_ideals: tuple[IdealSet, ...]
    nilpotency_index: int | None


def maximal_ideals(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP) -> list[IdealSet]:
    proper = [I for I in all_ideals(A, cap) if not I.is_whole()]
    return [
        I for I in proper
        if not any(J is not I and len(J) > len(I) and I._set <= J._set for J in proper)
    ]


def local_data(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP) -> LocalData:
    maxes = maximal_ideals(A, cap)
    if len(maxes) != 1:
        return LocalData(False, tuple(maxes), None)
    m = maxes[0]
    power, k = m, 1
    while not power.is_zero():
        nxt = ideal_product(power, m)
        if nxt.members == power.members:
            # m is not nilpotent; impossible for a finite local ring
            return LocalData(True, (m,), None)
        power, k = nxt, k + 1
    return LocalData(True, (m,), k)


def is_pir(A: FiniteRing, cap: int = DEFAULT_IDEAL_CAP) -> bool:
    principal = {I.members for I in principal_ideals(A)}
    return all(I.members in principal for I in all_ideals(A, cap))


def ideal_poset_iso(A: FiniteRing, B: FiniteRing, cap: int = DEFAULT_IDEAL_CAP,
                    node_cap: int = _search.DEFAULT_NODE_CAP):
    """Inclusion-preserving bijection between the ideal lattices, or None."""
    IA, IB = all_ideals(A, cap), all_ideals(B, cap)
    if len(IA) != len(IB):
        return None
    inc = lambda ids: np.array([[I._set <= J._set for J in ids] for I in ids])  # noqa: E731
    m = _search.find_isomorphism(inc(IA), inc(IB), node_cap)
    if m is None:
        return None
    return {IA[i]: IB[j] for i, j in enumerate(m)}


# --------------------------------------------------------------------------
# homomorphisms and subrings


def identity_hom(A: FiniteRing) -> RingHom:
    return RingHom(A, A, _table(np.arange(A.order)))


def additive_generators(A: FiniteRing) -> list[int]:
    """Greedy additive generating set starting from 1, smallest ids first."""
    gens = [A.one]
    span = additive_closure(A, _onehot(A, [A.one]))
    while not span.all():
        g = int(np.flatnonzero(~span)[0])
        gens.append(g)
        span = additive_closure(A, span | _onehot(A, [g]))
    return gens


def _onehot(A, ids):
    m = np.zeros(A.order, dtype=bool)
    m[list(ids)] = True
    return m


def ring_homs(A: FiniteRing, B: FiniteRing) -> Iterator[RingHom]:
    """All unital ring homomorphisms A -> B, in lexicographic order of generator images."""
    gens = additive_generators(A)
    # spanning tree: element -> (parent, generator index)
    parent = {A.zero: None}
    order = [A.zero]
    for e in order:
        for gi, g in enumerate(gens):
            x = int(A.add[e, g])
            if x not in parent:
                parent[x] = (e, gi)
                order.append(x)
    tree = [(x, *parent[x]) for x in order[1:]]
    A_add = np.asarray(A.add)
    A_mul = np.asarray(A.mul)
    g_arr = np.array(gens)
    for rest in itertools.product(range(B.order), repeat=len(gens) - 1):
        images = (B.one,) + rest
        f = np.empty(A.order, dtype=np.int64)
        f[A.zero] = B.zero
        for x, e, gi in tree:
            f[x] = B.add[f[e], images[gi]]
        if not (f[A_add[:, g_arr]] == B.add[f[:, None], np.array(images)[None, :]]).all():
            continue
        if not (f[A_mul] == B.mul[f[:, None], f[None, :]]).all():
            continue
        yield RingHom(A, B, _table(f))


def subring(A: FiniteRing, members, name: str = "") -> tuple[FiniteRing, RingHom]:
    """Subring on the given ids (renumbered in increasing order) and its inclusion."""
    idx = np.array(sorted(set(int(x) for x in members)), dtype=np.intp)
    mask = _onehot(A, idx)
    if A.one not in idx or A.zero not in idx:
        raise PreconditionError("subring must contain 0 and 1")
    if not (mask[A.add[np.ix_(idx, idx)]].all() and mask[A.mul[np.ix_(idx, idx)]].all()):
        raise PreconditionError("subset not closed under + and *")
    pos = np.full(A.order, -1, dtype=np.int64)
    pos[idx] = np.arange(len(idx))
    S = FiniteRing(
        add=_table(pos[A.add[np.ix_(idx, idx)]]),
        mul=_table(pos[A.mul[np.ix_(idx, idx)]]),
        zero=int(pos[A.zero]), one=int(pos[A.one]),
        labels=tuple(A.labels[i] for i in idx),
        name=name or f"sub({A.name})",
    )
    object.__setattr__(S, "origin", _table_spec(S))
    return S, RingHom(S, A, _table(idx))


def equalizer_ring(f: RingHom, g: RingHom) -> tuple[FiniteRing, RingHom]:
    """The subring ker(f - g) = {a : f(a) = g(a)} with its inclusion."""
    if f.source is not g.source or f.target is not g.target:
        raise PreconditionError("equalizer of maps with different source/target")
    members = np.flatnonzero(f.map == g.map)
    return subring(f.source, members, name=f"Eq({f.source.name})")
