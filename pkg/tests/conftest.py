from __future__ import annotations

import random
from itertools import combinations

from hypothesis import strategies as st

from arclapcs.arcseq import ArcAnnotatedSequence, Level, delete_positions

EXAMPLE_CNF = "c running example\np cnf 4 3\n1 2 -3 0\n-1 -2 4 0\n2 -3 -4 0\n"
UNSAT_CNF = "p cnf 3 8\n" + "".join(
    f"{a} {b} {c} 0\n" for a in (1, -1) for b in (2, -2) for c in (3, -3)
)


def aas(tokens: str, arcs=()) -> ArcAnnotatedSequence:
    return ArcAnnotatedSequence.from_text(tokens, arcs)


def random_arcs(rng: random.Random, m: int, level: Level) -> set[tuple[int, int]]:
    """A random arc set over 1..m whose level is at most ``level``."""
    if m < 2 or level == Level.PLAIN:
        return set()
    if level == Level.STEM:
        pairs = rng.randint(0, m // 2)
        chosen = sorted(rng.sample(range(1, m + 1), 2 * pairs))
        return {(chosen[i], chosen[-1 - i]) for i in range(pairs)}
    if level == Level.NESTED:
        arcs, stack = set(), []
        for p in range(1, m + 1):
            r = rng.random()
            if r < 0.35:
                stack.append(p)
            elif r < 0.7 and stack:
                arcs.add((stack.pop(), p))
        return arcs
    if level == Level.CROSSING:
        free = list(range(1, m + 1))
        rng.shuffle(free)
        arcs = set()
        while len(free) >= 2 and rng.random() < 0.6:
            i, j = sorted((free.pop(), free.pop()))
            arcs.add((i, j))
        return arcs
    return {tuple(sorted(rng.sample(range(1, m + 1), 2))) for _ in range(rng.randint(0, m))}


def random_sequence(
    rng: random.Random, max_len: int, alphabet: str = "abcd", level: Level = Level.STEM, min_len: int = 0
) -> ArcAnnotatedSequence:
    m = rng.randint(min_len, max_len)
    tokens = tuple(rng.choice(alphabet) for _ in range(m))
    return ArcAnnotatedSequence(tokens, frozenset(random_arcs(rng, m, level)))


def exhaustive_lapcs_length(s1: ArcAnnotatedSequence, s2: ArcAnnotatedSequence) -> int:
    """Largest size for which some subset of s1 and some subset of s2 leave identical residues."""
    for size in range(min(len(s1), len(s2)), 0, -1):
        left = {
            delete_positions(s1, set(range(1, len(s1) + 1)) - set(kept))
            for kept in combinations(range(1, len(s1) + 1), size)
        }
        for kept in combinations(range(1, len(s2) + 1), size):
            if delete_positions(s2, set(range(1, len(s2) + 1)) - set(kept)) in left:
                return size
    return 0


@st.composite
def sequences(draw, max_len: int = 8, alphabet: str = "abc", max_level: Level = Level.UNLIMITED):
    m = draw(st.integers(0, max_len))
    tokens = tuple(draw(st.lists(st.sampled_from(alphabet), min_size=m, max_size=m)))
    level = draw(st.sampled_from([lv for lv in Level if lv <= max_level]))
    seed = draw(st.integers(0, 2**32 - 1))
    return ArcAnnotatedSequence(tokens, frozenset(random_arcs(random.Random(seed), m, level)))

