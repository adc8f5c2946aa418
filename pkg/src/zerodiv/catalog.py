"""The shipped example rings, as specs.

``CATALOG`` holds the thirteen core rings used throughout the test and census
suites; ``GRID`` holds Z/p^k for p in {2, 3, 5} and k <= 5. ``export`` writes
them as ``<dir>/<stem>.spec`` and ``<dir>/grid/<stem>.spec``.
"""
from __future__ import annotations

import itertools
from pathlib import Path

from .ring import FiniteRing, RingSpec, build_from_spec
from .specfile import write_spec


def presented_labels(orders, basis) -> tuple[str, ...]:
    out = []
    for coords in itertools.product(*(range(d) for d in orders)):
        terms = []
        for k, b in zip(coords, basis):
            if k == 0:
                continue
            if b == "1":
                terms.append(str(k))
            else:
                terms.append(b if k == 1 else f"{k}{b}")
        out.append("+".join(terms) or "0")
    return tuple(out)


def _presented(name, orders, basis, products):
    """``products`` maps basis-name pairs to coordinate vectors; missing pairs are 0."""
    m = len(orders)
    zero = (0,) * m
    unit = lambda i: tuple(int(j == i) for j in range(m))  # noqa: E731
    mul = []
    for i, bi in enumerate(basis):
        row = []
        for j, bj in enumerate(basis):
            if bi == "1":
                row.append(unit(j))
            elif bj == "1":
                row.append(unit(i))
            else:
                row.append(products.get((bi, bj), products.get((bj, bi), zero)))
        mul.append(tuple(row))
    return RingSpec(
        "Presented", orders=tuple(orders), one=unit(0), mul=tuple(mul),
        labels=presented_labels(orders, basis), name=name,
    )


def _zn(n):
    return RingSpec("Zn", n=n, name=f"Z/{n}")


CATALOG: dict[str, RingSpec] = {
    "z2": _zn(2),
    "z3": _zn(3),
    "z4": _zn(4),
    "z6": _zn(6),
    "z8": _zn(8),
    "z12": _zn(12),
    "z27": _zn(27),
    "z30": _zn(30),
    "z4x_2x_x2": _presented("Z/4[x]/(2x,x^2)", (4, 2), ("1", "x"), {}),
    "z4x_2x_x2m2": _presented("Z/4[x]/(2x,x^2-2)", (4, 2), ("1", "x"), {("x", "x"): (2, 0)}),
    "f2xy_x2_xy_y2": _presented("F2[x,y]/(x^2,xy,y^2)", (2, 2, 2), ("1", "x", "y"), {}),
    "f2xy_x2_y2": _presented(
        "F2[x,y]/(x^2,y^2)", (2, 2, 2, 2), ("1", "x", "y", "xy"),
        {("x", "y"): (0, 0, 0, 1)},
    ),
    "f2xy_xy_x2my2": _presented(
        "F2[x,y]/(xy,x^2-y^2)", (2, 2, 2, 2), ("1", "x", "y", "x^2"),
        {("x", "x"): (0, 0, 0, 1), ("y", "y"): (0, 0, 0, 1)},
    ),
}

GRID: dict[str, RingSpec] = {
    f"zp{p}k{k}": RingSpec("Zn", n=p ** k, name=f"Z/{p}^{k}")
    for p in (2, 3, 5) for k in range(1, 6)
}

LOCAL = ("z2", "z3", "z4", "z8", "z27", "z4x_2x_x2", "z4x_2x_x2m2",
         "f2xy_x2_xy_y2", "f2xy_x2_y2", "f2xy_xy_x2my2")


def ring(stem: str) -> FiniteRing:
    spec = CATALOG.get(stem) or GRID[stem]
    return build_from_spec(spec)


def catalog_rings() -> list[FiniteRing]:
    return [build_from_spec(s) for s in CATALOG.values()]


def export(directory) -> list[Path]:
    directory = Path(directory)
    (directory / "grid").mkdir(parents=True, exist_ok=True)
    written = []
    for stem, spec in CATALOG.items():
        write_spec(spec, directory / f"{stem}.spec")
        written.append(directory / f"{stem}.spec")
    for stem, spec in GRID.items():
        write_spec(spec, directory / "grid" / f"{stem}.spec")
        written.append(directory / "grid" / f"{stem}.spec")
    return written
