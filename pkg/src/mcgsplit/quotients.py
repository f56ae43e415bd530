"""Systematic search for symmetric-group quotients of the twist presentation.

Candidates send every generator to a permutation of one fixed cycle type,
since the generators are twists on non-separating curves and hence all
conjugate.  The search is stratified by (degree, cycle type): inside a
stratum the first generator is pinned to the canonical representative of
the class and the rest are filled in by backtracking, pruning on the
cheap two-generator relators before the long genus-dependent words.
Surviving assignments are deduplicated up to simultaneous conjugation
and checked against the two extra Torelli words that detect whether the
quotient factors through the symplectic representation.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .presentation import (
    PresentationTable,
    bounding_pair_word,
    load_presentation,
    separating_twist_word,
)
from .words import Word, evaluate

SCHEMA_VERSION = 1

Perm = Tuple[int, ...]
CycleType = Tuple[int, ...]


# -- permutation arithmetic --------------------------------------------------


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose_perm(p: Perm, q: Perm) -> Perm:
    """p then q, matching left-to-right word evaluation."""
    return tuple(q[x] for x in p)


def invert_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def conjugate_perm(p: Perm, s: Perm) -> Perm:
    """s^-1 p s under left-to-right composition."""
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[s[i]] = s[x]
    return tuple(out)


def cycle_type(p: Perm) -> CycleType:
    seen = [False] * len(p)
    lens = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        lens.append(length)
    return tuple(sorted(lens, reverse=True))


def perm_order(p: Perm) -> int:
    import math

    out = 1
    for length in set(cycle_type(p)):
        out = out * length // math.gcd(out, length)
    return out


def enumerate_cycle_types(n: int) -> List[CycleType]:
    """All partitions of n in reverse-lexicographic order."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    out: List[CycleType] = []

    def rec(remaining: int, cap: int, prefix: Tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return out


def canonical_class_representative(ct: CycleType, n: int) -> Perm:
    """Cycles of the given lengths laid out on consecutive points."""
    assert sum(ct) == n
    out = list(range(n))
    start = 0
    for length in ct:
        for i in range(length):
            out[start + i] = start + (i + 1) % length
        start += length
    return tuple(out)


@lru_cache(maxsize=None)
def conjugacy_class(n: int, ct: CycleType) -> Tuple[Perm, ...]:
    return tuple(p for p in itertools.permutations(range(n))
                 if cycle_type(p) == ct)


def subgroup_elements(gens: Sequence[Perm], cap: int = 0) -> frozenset:
    """Closure of the generators under composition; cap 0 means no cap."""
    if not gens:
        return frozenset()
    n = len(gens[0])
    seen = {identity_perm(n)}
    frontier = [identity_perm(n)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose_perm(p, g)
                if q not in seen:
                    if cap and len(seen) >= cap:
                        raise ValueError("subgroup larger than cap")
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return frozenset(seen)


# -- search records -----------------------------------------------------------


@dataclass(frozen=True)
class PermutationImage:
    """Images of the twist generators in one symmetric group."""

    degree: int
    images: Tuple[Perm, ...]
    labels: Tuple[str, ...]

    def __post_init__(self):
        kinds = {cycle_type(p) for p in self.images}
        assert len(kinds) == 1, "generator images must share one cycle type"

    @property
    def common_cycle_type(self) -> CycleType:
        return cycle_type(self.images[0])

    def label_map(self) -> Dict[str, Perm]:
        return dict(zip(self.labels, self.images))

    def evaluate_word(self, word: Word) -> Perm:
        return evaluate(word, self.images, identity_perm(self.degree),
                        compose_perm, invert_perm)


@dataclass(frozen=True)
class SearchConfig:
    genus: int
    degree_range: Tuple[int, int]
    cycle_type_filter: Optional[Tuple[CycleType, ...]] = None
    budget: int = 10000
    dedupe: bool = True
    require_nontrivial: bool = True
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.degree_range
        if lo < 1 or hi < lo:
            raise ValueError("degree range must satisfy 1 <= lo <= hi")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "degree_range": list(self.degree_range),
            "cycle_type_filter": (
                None if self.cycle_type_filter is None
                else [list(ct) for ct in self.cycle_type_filter]),
            "budget": self.budget,
            "dedupe": self.dedupe,
            "require_nontrivial": self.require_nontrivial,
            "seed": self.seed,
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class HomomorphismRecord:
    image: PermutationImage
    relations_pass: bool
    factors_through_sp: bool
    image_order: int
    signature: Tuple[Perm, ...]
    provenance: Dict[str, object] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "degree": self.image.degree,
            "cycle_type": list(self.image.common_cycle_type),
            "images": {label: list(p) for label, p
                       in zip(self.image.labels, self.image.images)},
            "relations_pass": self.relations_pass,
            "factors_through_sp": self.factors_through_sp,
            "image_order": self.image_order,
            "signature": [list(p) for p in self.signature],
            "provenance": self.provenance,
        }


def canonical_signature(image: PermutationImage) -> Tuple[Perm, ...]:
    """Lexicographically minimal simultaneous conjugate of the images."""
    best = None
    for s in itertools.permutations(range(image.degree)):
        cand = tuple(conjugate_perm(p, s) for p in image.images)
        if best is None or cand < best:
            best = cand
    return best


def factors_through_sp(record: HomomorphismRecord, genus: int) -> bool:
    """Quotient factors through the symplectic group iff the separating
    twist word (and for g >= 3 the bounding pair word) dies in the image."""
    assert record.relations_pass
    return _factors_through_sp_image(record.image, genus)


def generated_by_involutions(image: PermutationImage, limit: int = 6) -> bool:
    """Whether the image group is generated by at most `limit` involutions.

    Consistency probe for surviving quotients, exact for the small
    groups this search emits; not used for pruning.
    """
    group = subgroup_elements(image.images)
    n = image.degree
    invs = sorted(p for p in group
                  if p != identity_perm(n)
                  and compose_perm(p, p) == identity_perm(n))
    if not invs:
        return len(group) == 1
    target = len(group)

    def rec(start: int, gens: Tuple[Perm, ...], depth: int) -> bool:
        have = len(subgroup_elements(gens)) if gens else 1
        if have == target:
            return True
        if depth == limit:
            return False
        for i in range(start, len(invs)):
            if rec(i + 1, gens + (invs[i],), depth + 1):
                return True
        return False

    return rec(0, (), 0)


# -- the stratified backtracking search ---------------------------------------


def _relator_schedule(table: PresentationTable):
    """Relators bucketed by the generator index at which they close.

    Two-generator relators check as soon as both images exist, with
    commutations before braids; everything longer waits for the full
    assignment.
    """
    n = table.num_generators
    at_depth: List[List[Tuple[int, str, Word]]] = [[] for _ in range(n + 1)]
    final: List[Tuple[str, Word]] = []
    for rel in table.relators:
        top = max(abs(x) for x in rel.word)
        if rel.name.startswith("commute_"):
            at_depth[top].append((0, rel.name, rel.word))
        elif rel.name.startswith("braid_"):
            at_depth[top].append((1, rel.name, rel.word))
        else:
            final.append((rel.name, rel.word))
    for bucket in at_depth:
        bucket.sort()
    return at_depth, final


def _pair_ok(kind: int, p: Perm, q: Perm) -> bool:
    if kind == 0:
        return compose_perm(p, q) == compose_perm(q, p)
    return (compose_perm(compose_perm(p, q), p)
            == compose_perm(compose_perm(q, p), q))


def search_stratum(table: PresentationTable, degree: int, ct: CycleType,
                   dedupe: bool = True) -> List[PermutationImage]:
    """All surviving assignments in one (degree, cycle type) stratum.

    The first generator is pinned to the canonical class representative;
    output order is the deterministic backtracking order.
    """
    n = table.num_generators
    labels = table.generators.labels
    at_depth, final = _relator_schedule(table)
    first = canonical_class_representative(ct, degree)
    pool = conjugacy_class(degree, ct)
    ident = identity_perm(degree)
    out: List[PermutationImage] = []
    seen_sigs = set()
    chosen: List[Perm] = [first]

    def close_depth(k: int) -> bool:
        for kind, _, word in at_depth[k]:
            i, j = abs(word[0]), abs(word[1])
            if not _pair_ok(kind, chosen[i - 1], chosen[j - 1]):
                return False
        return True

    def rec(k: int):
        if k > n:
            image = PermutationImage(degree, tuple(chosen), labels)
            for _, word in final:
                if image.evaluate_word(word) != ident:
                    return
            if dedupe:
                sig = canonical_signature(image)
                if sig in seen_sigs:
                    return
                seen_sigs.add(sig)
            out.append(image)
            return
        for cand in pool:
            chosen.append(cand)
            if close_depth(k):
                rec(k + 1)
            chosen.pop()

    if close_depth(1):
        rec(2)
    return out


def strata(config: SearchConfig) -> List[Tuple[int, CycleType]]:
    """Deterministic work items: degrees ascending, cycle types in
    reverse-lexicographic order, identity stratum only when degenerate
    images are allowed."""
    lo, hi = config.degree_range
    items = []
    for degree in range(lo, hi + 1):
        for ct in enumerate_cycle_types(degree):
            if config.cycle_type_filter is not None:
                if ct not in config.cycle_type_filter:
                    continue
            if config.require_nontrivial and all(x == 1 for x in ct):
                continue
            items.append((degree, ct))
    return items


def _factors_through_sp_image(image: PermutationImage, genus: int) -> bool:
    ident = identity_perm(image.degree)
    if image.evaluate_word(separating_twist_word(genus)) != ident:
        return False
    if genus >= 3:
        if image.evaluate_word(bounding_pair_word(genus)) != ident:
            return False
    return True


def _record_for(image: PermutationImage, table: PresentationTable,
                config: SearchConfig) -> HomomorphismRecord:
    # double-entry: re-verify every relator on the finished image
    ident = identity_perm(image.degree)
    passes = all(image.evaluate_word(rel.word) == ident
                 for rel in table.relators)
    return HomomorphismRecord(
        image=image,
        relations_pass=passes,
        factors_through_sp=(
            passes and _factors_through_sp_image(image, config.genus)),
        image_order=len(subgroup_elements(image.images)),
        signature=canonical_signature(image),
        provenance={"config": config.digest(),
                    "presentation_version": table.data_version},
    )


def search(config: SearchConfig,
           table: Optional[PresentationTable] = None,
           ) -> Iterator[HomomorphismRecord]:
    """Stream surviving homomorphism records, deterministically.

    Stops after `budget` records; whether the stream was truncated is
    reported by run_search, which wraps this with the JSONL store and
    manifest.
    """
    if table is None:
        table = load_presentation(config.genus)
    assert table.genus == config.genus
    emitted = 0
    for degree, ct in strata(config):
        for image in search_stratum(table, degree, ct, dedupe=config.dedupe):
            if emitted >= config.budget:
                return
            yield _record_for(image, table, config)
            emitted += 1


@dataclass
class RunManifest:
    config: dict
    presentation_version: int
    completed_strata: List[List[object]] = field(default_factory=list)
    records: int = 0
    truncated: bool = False
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "presentation_version": self.presentation_version,
            "completed_strata": self.completed_strata,
            "records": self.records,
            "truncated": self.truncated,
        }


def _stratum_worker(args) -> List[Tuple[Perm, ...]]:
    genus, degree, ct, dedupe = args
    table = load_presentation(genus)
    return [im.images for im in search_stratum(table, degree, ct, dedupe)]


def run_search(config: SearchConfig, jsonl_path: Path,
               manifest_path: Optional[Path] = None,
               table: Optional[PresentationTable] = None,
               workers: int = 1) -> RunManifest:
    """Run the full stratified search with a resumable JSONL store.

    Each stratum is an independent work item; records append to the
    store one JSON object per line and the manifest tracks completed
    strata, so an interrupted run continues where it stopped.  Workers
    share only the immutable presentation and results merge in stratum
    order, so the store is bitwise identical for a fixed config
    whatever the worker count.
    """
    if table is None:
        table = load_presentation(config.genus)
    jsonl_path = Path(jsonl_path)
    manifest_path = Path(manifest_path) if manifest_path else (
        jsonl_path.with_suffix(".manifest.json"))

    manifest = RunManifest(config=config.to_json(),
                           presentation_version=table.data_version)
    resuming = False
    if manifest_path.exists() and jsonl_path.exists():
        prior = json.loads(manifest_path.read_text())
        if prior["config"] == manifest.config and not prior.get("truncated"):
            manifest.completed_strata = prior["completed_strata"]
            manifest.records = prior["records"]
            resuming = True
    done = {(d, tuple(ct)) for d, ct in manifest.completed_strata}
    todo = [s for s in strata(config) if s not in done]
    if config.budget == 0:
        manifest.truncated = True

    def save():
        manifest_path.write_text(json.dumps(manifest.to_json(), indent=1) + "\n")

    def stratum_images(items):
        if workers > 1:
            from multiprocessing import Pool

            with Pool(workers) as pool:
                args = [(config.genus, d, ct, config.dedupe) for d, ct in items]
                for (d, ct), images in zip(items, pool.imap(_stratum_worker, args)):
                    yield d, ct, [PermutationImage(d, ims, table.generators.labels)
                                  for ims in images]
        else:
            for d, ct in items:
                yield d, ct, search_stratum(table, d, ct, dedupe=config.dedupe)

    save()
    with open(jsonl_path, "a" if resuming else "w") as store:
        for degree, ct, images in stratum_images(todo):
            for image in images:
                if manifest.records >= config.budget:
                    manifest.truncated = True
                    save()
                    return manifest
                record = _record_for(image, table, config)
                store.write(json.dumps(record.to_json()) + "\n")
                manifest.records += 1
            manifest.completed_strata.append([degree, list(ct)])
            save()
    save()
    return manifest
