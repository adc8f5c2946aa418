"""Equivalence relations on ring elements, stored as partitions."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import PreconditionError, SpecError
from .ring import FiniteRing, RingHom
from .specfile import validate_partition


class Base(Enum):
    EQUALITY = "eq"
    STRONGLY_ASSOCIATED = "sassoc"
    ASSOCIATED = "assoc"
    EQUIANNIHILATED = "equiann"


class Selector(Enum):
    NILPOTENTS = "nilpotents"
    UNITS = "units"


@dataclass(frozen=True)
class RelationKind:
    """Which relation to compute.

    Exactly one of ``base``, ``blend`` (selector, inside, outside) or
    ``blocks`` (a custom partition) is set.
    """

    base: Base | None = None
    selector: Selector | None = None
    inside: Base | None = None
    outside: Base | None = None
    blocks: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.selector is not None and (self.inside is None or self.outside is None):
            raise PreconditionError("a blend needs inside and outside kinds")

    @property
    def name(self) -> str:
        if self.base is not None:
            return self.base.value
        if self.selector is not None:
            return f"blend({self.selector.value};{self.inside.value};{self.outside.value})"
        return "custom"


EQUALITY = RelationKind(Base.EQUALITY)
STRONGLY_ASSOCIATED = RelationKind(Base.STRONGLY_ASSOCIATED)
ASSOCIATED = RelationKind(Base.ASSOCIATED)
EQUIANNIHILATED = RelationKind(Base.EQUIANNIHILATED)
# associated on nilpotents, strongly associated elsewhere
BLEND_NILPOTENTS = RelationKind(
    selector=Selector.NILPOTENTS, inside=Base.ASSOCIATED, outside=Base.STRONGLY_ASSOCIATED
)
# associated on units, equality elsewhere
BLEND_UNITS = RelationKind(selector=Selector.UNITS, inside=Base.ASSOCIATED, outside=Base.EQUALITY)

SELECTORS = {
    "eq": EQUALITY,
    "sassoc": STRONGLY_ASSOCIATED,
    "assoc": ASSOCIATED,
    "equiann": EQUIANNIHILATED,
    "blend-nilp": BLEND_NILPOTENTS,
    "blend-units": BLEND_UNITS,
}


def custom(blocks) -> RelationKind:
    return RelationKind(blocks=tuple(tuple(sorted(b)) for b in blocks))


def parse_kind(selector: str, order: int | None = None) -> RelationKind:
    """Selector strings: eq, sassoc, assoc, equiann, blend-nilp, blend-units, custom:<path>."""
    if selector in SELECTORS:
        return SELECTORS[selector]
    if selector.startswith("custom:"):
        from .specfile import load_partition

        if order is None:
            raise PreconditionError("custom partitions need the ring order")
        return custom(load_partition(selector[len("custom:"):], order))
    raise SpecError(f"unknown relation {selector!r}; expected one of {sorted(SELECTORS)} or custom:<path>")


@dataclass(frozen=True, eq=False)
class EqRelation:
    ring: FiniteRing
    blocks: tuple[tuple[int, ...], ...]  # sorted by least element
    kind: RelationKind = field(default_factory=lambda: RelationKind(blocks=()))

    @cached_property
    def class_of(self) -> np.ndarray:
        c = np.empty(self.ring.order, dtype=np.int64)
        for i, b in enumerate(self.blocks):
            c[list(b)] = i
        c.setflags(write=False)
        return c

    def representative(self, block: int) -> int:
        return self.blocks[block][0]

    @cached_property
    def representatives(self) -> np.ndarray:
        return np.array([b[0] for b in self.blocks], dtype=np.intp)

    def related(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]

    def block_of(self, a: int) -> tuple[int, ...]:
        return self.blocks[self.class_of[a]]

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return f"EqRelation({self.ring.name}, {self.kind.name}, {len(self.blocks)} blocks)"


def from_labels(A: FiniteRing, keys, kind: RelationKind) -> EqRelation:
    """Partition grouping elements with equal ``keys[a]``."""
    groups: dict = {}
    for a in A.elements:
        groups.setdefault(keys[a], []).append(a)
    blocks = sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])
    return EqRelation(A, tuple(blocks), kind)


def _row_keys(mask: np.ndarray) -> list[bytes]:
    packed = np.packbits(mask, axis=1)
    return [row.tobytes() for row in packed]


def _base_keys(A: FiniteRing, base: Base):
    if base is Base.EQUALITY:
        return list(A.elements)
    if base is Base.ASSOCIATED:
        return _row_keys(A.principal_masks)
    if base is Base.EQUIANNIHILATED:
        return _row_keys(A.annihilates)
    # orbits of the unit group are disjoint, so the least orbit element names the orbit
    units = np.flatnonzero(A.unit_mask)
    return A.mul[units, :].min(axis=0).tolist()


def relation_partition(A: FiniteRing, kind: RelationKind) -> EqRelation:
    if kind.blocks is not None:
        blocks = [list(b) for b in kind.blocks]
        validate_partition(blocks, A.order)
        return EqRelation(A, tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])), kind)
    if kind.base is not None:
        return from_labels(A, _base_keys(A, kind.base), kind)
    subset = A.nilpotent_mask if kind.selector is Selector.NILPOTENTS else A.unit_mask
    inside = _base_keys(A, kind.inside)
    outside = _base_keys(A, kind.outside)
    keys = [(True, inside[a]) if subset[a] else (False, outside[a]) for a in A.elements]
    return from_labels(A, keys, kind)


def _check_same_ring(R1: EqRelation, R2: EqRelation):
    if R1.ring is not R2.ring:
        raise PreconditionError("relations live on different rings")


def zero_divisor_witness(R: EqRelation):
    """(a, a', b, b') with a R a', b R b', ab = 0, a'b' != 0; None if R is zero-divisor.

    For every pair of blocks the block of products must vanish entirely or
    nowhere; the first mixed block pair yields the witness, preferring
    a' = a and then b' = b.
    """
    A = R.ring
    Z = A.annihilates
    cls = R.class_of
    k = len(R.blocks)
    # count zero products per block pair; float matmul is exact at these sizes
    onehot = np.zeros((A.order, k))
    onehot[np.arange(A.order), cls] = 1.0
    zeros = np.rint(onehot.T @ (Z @ onehot)).astype(np.int64)
    sizes = np.array([len(b) for b in R.blocks], dtype=np.int64)
    mixed = (zeros > 0) & (zeros < np.outer(sizes, sizes))
    if not mixed.any():
        return None
    # first zero product (a, b) lying in a mixed block pair
    bad = mixed[cls[:, None], cls[None, :]] & Z
    a, b = (int(x) for x in np.argwhere(bad)[0])
    Ba, Bb = R.block_of(a), R.block_of(b)
    for b2 in Bb:
        if not Z[a, b2]:
            return (a, a, b, int(b2))
    for a2 in Ba:
        if not Z[a2, b]:
            return (a, int(a2), b, b)
    for a2 in Ba:
        for b2 in Bb:
            if not Z[a2, b2]:
                return (a, int(a2), b, int(b2))
    raise AssertionError("mixed block pair without a nonzero product")


def is_zero_divisor_relation(R: EqRelation) -> tuple[bool, tuple | None]:
    w = zero_divisor_witness(R)
    return w is None, w


def is_finer(R1: EqRelation, R2: EqRelation) -> bool:
    """Every block of R1 lies inside a block of R2."""
    _check_same_ring(R1, R2)
    c2 = R2.class_of
    return all(len({int(c2[x]) for x in b}) == 1 for b in R1.blocks)


def functorial_witness(f: RingHom, RA: EqRelation, RB: EqRelation):
    """(a, a', f(a), f(a')) with a RA a' but f(a), f(a') unrelated; None if preserved."""
    if RA.ring is not f.source or RB.ring is not f.target:
        raise PreconditionError("relations do not match the homomorphism's rings")
    cB = RB.class_of
    for b in RA.blocks:
        images = f.map[list(b)]
        first = cB[images[0]]
        off = np.flatnonzero(cB[images] != first)
        if len(off):
            a2 = b[int(off[0])]
            return (b[0], a2, int(images[0]), int(f.map[a2]))
    return None


def check_functorial(f: RingHom, kindA: RelationKind, kindB: RelationKind | None = None):
    """(ok, witness) for 'related elements have related images' under f."""
    RA = relation_partition(f.source, kindA)
    RB = relation_partition(f.target, kindB or kindA)
    w = functorial_witness(f, RA, RB)
    return w is None, w


def split_merge_partitions(R: EqRelation, count: int, seed: int):
    """Seeded random partitions reached from R by split and merge moves.

    Each partition starts from R's blocks and applies between one and three
    moves; a split cuts a block in two, a merge joins two blocks. Pure split
    sequences give refinements of R; merges usually leave it.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        blocks = [list(b) for b in R.blocks]
        for _ in range(int(rng.integers(1, 4))):
            splittable = [i for i, b in enumerate(blocks) if len(b) > 1]
            if splittable and (len(blocks) < 2 or rng.random() < 0.5):
                i = splittable[int(rng.integers(len(splittable)))]
                b = blocks[i]
                perm = rng.permutation(len(b))
                cut = int(rng.integers(1, len(b)))
                blocks[i] = sorted(b[j] for j in perm[:cut])
                blocks.append(sorted(b[j] for j in perm[cut:]))
            elif len(blocks) > 1:
                i, j = sorted(rng.choice(len(blocks), size=2, replace=False).tolist())
                merged = sorted(blocks[i] + blocks[j])
                del blocks[j]
                blocks[i] = merged
        out.append(relation_partition(R.ring, custom(blocks)))
    return out
