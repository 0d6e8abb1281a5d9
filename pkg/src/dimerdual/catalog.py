"""Shipped catalog of dimer models.

Hand-written files cover the small classics (including an inconsistent
torus dimer and a genus-2 dimer); the del Pezzo and census families are
synthesized by tools/build_catalog.py and committed alongside them.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass

from .core import DimerModel, validate
from .dimerfile import parse


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    filename: str
    summary: str
    genus: int
    consistent: bool | None  # None: not decided by the LP (genus != 1)
    weak_fano: bool


ENTRIES: dict[str, CatalogEntry] = {}


def _add(name, summary, genus, consistent, weak_fano):
    ENTRIES[name] = CatalogEntry(
        name=name,
        filename=f"{name}.dimer",
        summary=summary,
        genus=genus,
        consistent=consistent,
        weak_fano=weak_fano,
    )


_add("c3", "one vertex, three loops; empty-triangle polygon", 1, True, False)
_add("conifold", "two vertices, two square faces; empty-square polygon", 1, True, False)
_add("p2", "hexagonal torus tiling; reflexive triangle", 1, True, True)
_add("p1xp1", "square torus tiling; reflexive diamond", 1, True, True)
_add("inconsistent", "torus dimer without a consistent grading", 1, False, False)
_add("genus2", "double-torus dimer, one vertex, two pentagons", 2, None, False)
_add("dp1", "synthesized from the 4b polygon sequence", 1, True, True)
_add("dp2", "synthesized from the 5a polygon sequence", 1, True, True)
_add("dp3", "hexagonal reflexive polygon, six-term sequence", 1, True, True)
for _i in range(1, 5):
    _add(f"census_8a_{_i}", "size-8 census: square polygon", 1, True, True)
for _i in range(1, 3):
    _add(f"census_8b_{_i}", "size-8 census: trapezoid polygon", 1, True, True)
_add("census_8c_1", "size-8 census: triangle polygon", 1, True, True)


def names() -> list[str]:
    return list(ENTRIES)


def source(name: str) -> str:
    if name not in ENTRIES:
        raise KeyError(f"unknown catalog dimer {name!r}")
    ref = importlib.resources.files("dimerdual") / "catalog" / "data" / ENTRIES[name].filename
    return ref.read_text()


def load(name: str) -> DimerModel:
    return validate(parse(source(name)))


def available() -> list[str]:
    out = []
    for name in ENTRIES:
        try:
            source(name)
        except FileNotFoundError:
            continue
        out.append(name)
    return out
