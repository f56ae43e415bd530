#!/usr/bin/env python3
"""Derive and certify the bundled generator-curve and relator data.

The Humphries generating set for genus g is the 2g-chain of curves with
homology classes a1, b1, a1+a2, b2, a2+a3, ..., bg together with one
extra curve of class a2 that meets chain curve 4 once and nothing else.
For genus 2 the extra curve closes off the chain, so the labels b1..b5
read as a plain 5-chain.

Chain curves are realized as pushoffs of the generator edge loops (even
positions) and joint pushoffs of consecutive a-edge pairs (odd
positions); the rounding choices are searched until the whole
intersection table certifies.  Results go to src/mcgsplit/data/ as
versioned JSON.
"""

import argparse
import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mcgsplit import curves as C
from mcgsplit.triangulation import surface_triangulation
from mcgsplit.words import free_reduce

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "mcgsplit" / "data"


def humphries_classes(genus):
    """Stated homology classes of b1..b_{2g+1}, interleaved a/b basis."""
    n = 2 * genus
    out = []
    for i in range(1, 2 * genus + 1):
        v = [0] * n
        if i % 2 == 0:
            v[i - 1] = 1  # b_{i/2}
        else:
            k = (i - 1) // 2  # a_k + a_{k+1}, with a_0 and a_{g+1} read as 0
            if k >= 1:
                v[2 * (k - 1)] = 1
            if k + 1 <= genus:
                v[2 * k] = 1
        out.append(tuple(v))
    extra = [0] * n
    extra[2] = 1  # a2
    out.append(tuple(extra))
    return out


def intersection_table(genus):
    """Chain pattern plus the b_{2g+1} hook at chain curve 4."""
    n = 2 * genus + 1
    t = [[0] * n for _ in range(n)]
    for i in range(2 * genus - 1):
        t[i][i + 1] = t[i + 1][i] = 1
    t[n - 1][3] = t[3][n - 1] = 1
    return [tuple(r) for r in t]


def _edge_candidates(tri, e):
    out = []
    for side in (0, 1):
        w = C.pushoff_edge(tri, e, side)
        if w not in out:
            out.append(w)
    return out


def _path_candidates(tri, want, maxlen=3, cap=40):
    """Pushoff curves with class +-want over short closed edge paths."""
    wanted = (tuple(want), tuple(-x for x in want))
    letters = [s * (e + 1) for e in range(tri.num_edges) for s in (1, -1)]
    out, seen = [], set()
    for length in range(2, maxlen + 1):
        for path in itertools.product(letters, repeat=length):
            cls = [0] * len(want)
            for p in path:
                ec = tri.edge_classes[abs(p) - 1]
                s = 1 if p > 0 else -1
                cls = [c + s * x for c, x in zip(cls, ec)]
            if tuple(cls) not in wanted:
                continue
            for rots in itertools.product((1, -1), repeat=length):
                try:
                    w = C.pushoff_path(tri, path, rots)
                except C.InvalidCurveError:
                    continue
                if w in seen or sum(w) > cap:
                    continue
                seen.add(w)
                if C.is_connected(tri, w) and C.curve_class(tri, w) in wanted:
                    out.append(w)
    return out


def find_generator_curves(genus, verbose=False):
    """Search rounding variants until the full table certifies."""
    tri = surface_triangulation(genus)
    classes = humphries_classes(genus)
    table = intersection_table(genus)
    n = 2 * genus + 1

    candidates = []
    for i in range(1, n):
        if i % 2 == 0:
            candidates.append(_edge_candidates(tri, i - 1))  # b_{i/2} edge
        else:
            k = (i - 1) // 2
            if k == 0:
                candidates.append(_edge_candidates(tri, 0))  # a1 edge
            else:
                candidates.append(_path_candidates(tri, classes[i - 1]))
    candidates.append(_edge_candidates(tri, 2))  # extra curve, a2 edge

    for i, cand in enumerate(candidates):
        cand.sort(key=lambda w: (sum(w), w))
        if verbose:
            print(f"  slot {i + 1}: {len(cand)} candidates")
        if not cand:
            raise RuntimeError(f"no candidate curves for generator {i + 1}")

    icache = {}

    def inter(a, b):
        key = (a, b) if a <= b else (b, a)
        if key not in icache:
            icache[key] = C.geometric_intersection(tri, a, b)
        return icache[key]

    chosen = []

    def backtrack(i):
        if i == n:
            return True
        for w in candidates[i]:
            if all(inter(chosen[j], w) == table[j][i] for j in range(i)):
                chosen.append(w)
                if backtrack(i + 1):
                    return True
                chosen.pop()
        return False

    if not backtrack(0):
        raise RuntimeError(f"no curve family satisfies the genus {genus} table")

    for i, w in enumerate(chosen):
        got = C.curve_class(tri, w)
        want = classes[i]
        assert got in (want, tuple(-x for x in want)), (i, got, want)
    return chosen


def relator_words(genus):
    """Relator list: braid, commutation, chain, hyperelliptic (+ genus 2
    half-twist relators in their classical form)."""
    n = 2 * genus + 1
    table = intersection_table(genus)
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if table[i - 1][j - 1] == 1:
                out.append((f"braid_{i}_{j}", (i, j, i, -j, -i, -j)))
            else:
                out.append((f"commute_{i}_{j}", (i, j, -i, -j)))
    if genus == 2:
        chain = tuple(range(1, 6)) * 6
        out.append(("chain", chain))
        half = (1, 2, 3, 4, 5, 5, 4, 3, 2, 1)
        out.append(("hyperelliptic", half + half))
        out.append(("hyperelliptic_central", half + (1,) + tuple(-x for x in reversed(half)) + (-1,)))
    else:
        even_chain = tuple(range(1, 2 * genus + 1))
        out.append(("chain", even_chain * (4 * genus + 2)))
        iota = even_chain * (2 * genus + 1)
        out.append((
            "hyperelliptic_central",
            iota + (1,) + tuple(-x for x in reversed(iota)) + (-1,),
        ))
    return [(name, free_reduce(word)) for name, word in out]


def build_payload(genus, verbose=False):
    tri = surface_triangulation(genus)
    curves = find_generator_curves(genus, verbose=verbose)
    labels = [f"b{i}" for i in range(1, 2 * genus + 2)]
    payload = {
        "format_version": 1,
        "genus": genus,
        "labels": labels,
        "homology_classes": [list(v) for v in humphries_classes(genus)],
        "intersection_table": [list(r) for r in intersection_table(genus)],
        "curves": [list(w) for w in curves],
        "triangles": [list(t) for t in tri.triangles],
        "relators": [[name, list(word)] for name, word in relator_words(genus)],
        "notes": (
            "b%d is the extra Humphries curve: class a2, meets b4 once and "
            "no other generator. For genus 2 it coincides with the chain end."
            % (2 * genus + 1)
        ),
    }
    return payload


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, nargs="+", default=[2])
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for genus in args.genus:
        print(f"genus {genus}:")
        payload = build_payload(genus, verbose=args.verbose)
        path = DATA_DIR / f"presentation_g{genus}.json"
        path.write_text(json.dumps(payload, indent=1) + "\n")
        print(f"  wrote {path} ({path.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
