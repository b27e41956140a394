"""Search-based compression of tableaux with the don't-care value.

Two worlds merge when they agree everywhere except one sentence that is true
in one and false in the other.  The merged world carries DC at that sentence.
Unlike prime-implicant covers, merged worlds never overlap: each compressed
weight must stand for a set of mutually exclusive two-valued worlds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .worlds import DC, F, T, Tableau, World, expand_world


def merge_pair(a: World, b: World) -> World | None:
    if len(a) != len(b):
        raise ValueError(f"world lengths differ: {len(a)} != {len(b)}")
    diff = None
    for i, (x, y) in enumerate(zip(a, b)):
        if x == y:
            continue
        if {x, y} != {T, F} or diff is not None:
            return None
        diff = i
    if diff is None:
        return None
    return tuple(a[:diff]) + (DC,) + tuple(a[diff + 1:])


@dataclass(frozen=True)
class CompressionStats:
    worlds_before: int
    worlds_after: int
    merges: int
    passes: int


def compress_with_stats(t: Tableau) -> tuple[Tableau, CompressionStats]:
    """Greedy pairwise merging to a fixpoint.

    Each pass scans pairs (i, j), i < j, in lexicographic order; a world takes
    part in at most one merge per pass and the merged world takes the slot of
    its first member.  Passes repeat until one makes no merge.
    """
    _check_disjoint(t.worlds)
    worlds = list(t.worlds)
    merges = passes = 0
    while True:
        passes += 1
        used = [False] * len(worlds)
        replacement: dict[int, World] = {}
        for i in range(len(worlds)):
            if used[i]:
                continue
            for j in range(i + 1, len(worlds)):
                if used[j]:
                    continue
                m = merge_pair(worlds[i], worlds[j])
                if m is not None:
                    used[i] = used[j] = True
                    replacement[i] = m
                    break
        if not replacement:
            break
        merges += len(replacement)
        worlds = [replacement.get(i, w) for i, w in enumerate(worlds) if not used[i] or i in replacement]
    out = Tableau(t.sentences, tuple(worlds), t.source_count)
    stats = CompressionStats(len(t.worlds), len(worlds), merges, passes)
    return out, stats


def compress_tableau(t: Tableau) -> Tableau:
    return compress_with_stats(t)[0]


def _check_disjoint(worlds) -> None:
    seen: set = set()
    for w in worlds:
        e = expand_world(w)
        if seen & e:
            raise ValueError("tableau worlds have overlapping expansions")
        seen |= e


def verify_equivalence(original: Tableau, compressed: Tableau) -> bool:
    """True iff ``compressed`` partitions exactly the two-valued worlds of ``original``."""
    if tuple(original.sentences) != tuple(compressed.sentences):
        raise ValueError("tableaux have different sentence lists")
    target: set = set()
    for w in original.worlds:
        target |= expand_world(w)
    covered: set = set()
    total = 0
    for w in compressed.worlds:
        e = expand_world(w)
        total += len(e)
        covered |= e
    return total == len(covered) and covered == target
