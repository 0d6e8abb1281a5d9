#!/usr/bin/env python3
"""Generate the synthesized catalog data files.

The del Pezzo dimers (dp1, dp2, dp3) are built from the staircase
sequence O, O(D_1), O(D_1+D_2), ... on the polygons 4b, 5a, 6a; the
census_8* files are the size-8 census outputs at bound 3.  Hand-written
files (c3, conifold, p2, p1xp1, inconsistent, genus2) are not touched.

Usage: python tools/build_catalog.py [--only dp|8a|8b|8c] [--cache DIR]

--cache DIR reuses pickled CensusResult files (census_<label>.pkl) when
present, writing fresh pickles otherwise, so repeated runs skip the
census recomputation.
"""

from __future__ import annotations

import argparse
import os
import pickle
import sys
import time
import warnings
from dataclasses import replace
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from dimerdual.dimerfile import serialize  # noqa: E402
from dimerdual.synth import census, dimer_from_sequence  # noqa: E402
from dimerdual.toric import enumerate_reflexive, surface_of  # noqa: E402

DATA = REPO / "src" / "dimerdual" / "catalog" / "data"


def staircase(X):
    return [
        tuple(1 if i < j else 0 for i in range(X.k)) for j in range(X.k)
    ]


def write_model(D, name: str) -> None:
    path = DATA / f"{name}.dimer"
    path.write_text(serialize(replace(D, name=name)))
    print(f"wrote {path.relative_to(REPO)}")


def build_dp() -> None:
    polys = enumerate_reflexive()
    for name, label in (("dp1", "4b"), ("dp2", "5a"), ("dp3", "6a")):
        X = surface_of(polys[label])
        D = dimer_from_sequence(X, staircase(X), name=name)
        write_model(D, name)


def build_census(label: str, cache: Path | None) -> None:
    pkl = cache / f"census_{label}.pkl" if cache is not None else None
    res = None
    if pkl is not None and pkl.exists():
        with open(pkl, "rb") as f:
            res = pickle.load(f)
        print(f"loaded cached census for {label}")
    if res is None:
        X = surface_of(enumerate_reflexive()[label])
        t0 = time.time()
        res = census(X, 3, name_prefix=f"census_{label}")
        print(f"census {label}: {time.time() - t0:.1f}s")
        if pkl is not None:
            with open(pkl, "wb") as f:
                pickle.dump(res, f)
    if res.bound_touched:
        print(f"WARNING: census {label} touched the bound", file=sys.stderr)
    print(
        f"{label}: {res.sequence_count} sequences,"
        f" {len(res.dimers)} dimers"
    )
    for D in res.dimers:
        write_model(D, D.name)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", choices=("dp", "8a", "8b", "8c"), default=None)
    ap.add_argument("--cache", type=Path, default=None, metavar="DIR")
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if args.only in (None, "dp"):
            build_dp()
        for label in ("8a", "8b", "8c"):
            if args.only in (None, label):
                build_census(label, args.cache)
    return 0


if __name__ == "__main__":
    sys.exit(main())
