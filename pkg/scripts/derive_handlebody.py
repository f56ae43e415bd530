#!/usr/bin/env python3
"""Search for handle-slide words over the bundled cut systems.

A slide for the ordered handle pair (i, j) carries the i-th meridian to
a band sum with the j-th while fixing every other meridian, which is
what lets disc enumeration escape the twist-stabilized cut set.  The
search runs breadth-first over homology-class states, with the letter
alphabet restricted to twists that cannot touch the uninvolved
meridians, and certifies candidates on curve coordinates afterwards.
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from mcgsplit import curvecomplex as cc
from mcgsplit import curves as cv
from mcgsplit import heegaard as hg
from mcgsplit.presentation import DATA_DIR, load_presentation
from mcgsplit.symplectic import pairing
from mcgsplit.triangulation import surface_triangulation


def slide_alphabet(genus, i, j):
    """Letters whose twist curve misses every meridian other than i, j."""
    tri = surface_triangulation(genus)
    table = load_presentation(genus)
    cut = hg.cut_system(genus)
    others = [c for k, c in enumerate(cut.curves) if k not in (i, j)]
    out = []
    for s in range(1, table.num_generators + 1):
        gcur = table.generators.curves[s - 1]
        if all(cv.geometric_intersection(tri, gcur, o) == 0 for o in others):
            out.append(s)
    return out


def pair_candidates(genus, i, j, depth=8, coeff_cap=4, state_cap=400000,
                    want=12, verbose=True):
    """Class-level words sending one meridian class to a band-sum class
    while fixing the other, both directions at once."""
    table = load_presentation(genus)
    classes = table.generators.homology_classes
    tri = surface_triangulation(genus)
    cut = hg.cut_system(genus)
    ci = tuple(cv.curve_class(tri, cut.curves[i]))
    cj = tuple(cv.curve_class(tri, cut.curves[j]))
    letters = slide_alphabet(genus, i, j)

    def neg(v):
        return tuple(-x for x in v)

    def add(u, v, s):
        return tuple(a + s * b for a, b in zip(u, v))

    band_i = {add(ci, cj, 1), add(ci, cj, -1),
              neg(add(ci, cj, 1)), neg(add(ci, cj, -1))}
    band_j = {add(cj, ci, 1), add(cj, ci, -1),
              neg(add(cj, ci, 1)), neg(add(cj, ci, -1))}
    fix_i = {ci, neg(ci)}
    fix_j = {cj, neg(cj)}

    start = (ci, cj)
    seen = {start}
    frontier = [(start, ())]
    found = {(i, j): [], (j, i): []}
    t0 = time.time()
    for _ in range(depth):
        nxt = []
        for (vi, vj), word in frontier:
            for s in letters:
                v = classes[s - 1]
                pi = pairing(vi, v)
                pj = pairing(vj, v)
                if pi == 0 and pj == 0:
                    continue
                for sign in (1, -1):
                    letter = sign * s
                    if word and word[0] == -letter:
                        continue
                    state = (add(vi, v, sign * pi) if pi else vi,
                             add(vj, v, sign * pj) if pj else vj)
                    if state in seen:
                        continue
                    if any(abs(x) > coeff_cap
                           for x in state[0] + state[1]):
                        continue
                    seen.add(state)
                    w2 = (letter,) + word
                    nxt.append((state, w2))
                    if state[0] in band_i and state[1] in fix_j:
                        found[(i, j)].append(w2)
                    if state[1] in band_j and state[0] in fix_i:
                        found[(j, i)].append(w2)
        frontier = nxt
        if len(seen) > state_cap:
            break
        if all(len(v) >= want for v in found.values()):
            break
    if verbose:
        print(f"  pair {i + 1},{j + 1}: alphabet {letters}, "
              f"{len(seen)} states, candidates "
              f"{[len(v) for v in found.values()]} ({time.time() - t0:.1f}s)")
    return found


def certify(genus, word, i, weight_cap=150):
    """The word fixes every meridian but the i-th and carries that one
    to a fresh curve disjoint from the whole cut system."""
    tri = surface_triangulation(genus)
    cut = hg.cut_system(genus)
    for k, c in enumerate(cut.curves):
        img = cc.word_action(genus, word, c)
        if sum(img) > weight_cap:
            return False
        if k != i:
            if not cv.closed_equal(tri, img, c):
                return False
            continue
        if any(cv.geometric_intersection(tri, img, x) != 0
               for x in cut.curves):
            return False
        if any(cv.closed_equal(tri, img, x) for x in cut.curves):
            return False
    return True


def find_slides(genus, verbose=True):
    slides = []
    for i in range(genus - 1):
        found = pair_candidates(genus, i, i + 1, verbose=verbose)
        for (a, b), words in sorted(found.items()):
            words.sort(key=len)
            for w in words:
                if certify(genus, w, a):
                    slides.append({"word": list(w), "moves": a + 1,
                                   "over": b + 1})
                    if verbose:
                        print(f"  slide {a + 1} over {b + 1}: "
                              f"word {list(w)}")
                    break
            else:
                print(f"  warning: no certified slide for "
                      f"{a + 1} over {b + 1}")
    if not slides:
        raise RuntimeError(f"no handle slides certified at genus {genus}")
    return {"slides": slides}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, nargs="+", default=[2, 3, 4])
    args = ap.parse_args()
    for genus in args.genus:
        t0 = time.time()
        print(f"genus {genus}: slide search")
        data = find_slides(genus)
        out = DATA_DIR / f"handlebody_g{genus}.json"
        out.write_text(json.dumps(data, indent=1) + "\n")
        print(f"genus {genus}: wrote {out.name} "
              f"({len(data['slides'])} slides, {time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
