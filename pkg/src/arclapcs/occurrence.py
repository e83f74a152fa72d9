"""Deciding and witnessing occurrence of one arc-annotated sequence in another.

A pattern occurs in a text when it can be obtained from the text by deleting
bases, deleted bases taking their incident arcs with them. The witness is the
strictly increasing list of kept text positions.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .arcseq import ArcAnnotatedSequence, ParseError, SizeGuardError

BRUTE_FORCE_TEXT_LIMIT = 18

Embedding = tuple[int, ...]


def verify_embedding(
    pattern: ArcAnnotatedSequence, text: ArcAnnotatedSequence, e: Sequence[int]
) -> bool:
    k, m = len(pattern), len(text)
    if len(e) != k:
        return False
    if any(not 1 <= p <= m for p in e):
        return False
    if any(a >= b for a, b in zip(e, e[1:])):
        return False
    if any(text.seq[p - 1] != pattern.seq[t] for t, p in enumerate(e)):
        return False
    # Arcs in both directions: pattern arcs must be present in the text, and
    # every text arc whose endpoints both survive must be a pattern arc.
    text_arcs = text.arc_set()
    if any((e[a.left - 1], e[a.right - 1]) not in text_arcs for a in pattern.arcs):
        return False
    preimage = {p: t for t, p in enumerate(e, start=1)}
    pattern_arcs = pattern.arc_set()
    for a in text.arcs:
        t1 = preimage.get(a.left)
        t2 = preimage.get(a.right)
        if t1 is not None and t2 is not None and (t1, t2) not in pattern_arcs:
            return False
    return True


def brute_force_occurs(
    pattern: ArcAnnotatedSequence, text: ArcAnnotatedSequence
) -> Embedding | None:
    """Try every strictly increasing map, in lexicographic order."""
    if len(text) > BRUTE_FORCE_TEXT_LIMIT:
        raise SizeGuardError(
            f"brute-force occurrence refuses texts longer than {BRUTE_FORCE_TEXT_LIMIT}"
        )
    for e in combinations(range(1, len(text) + 1), len(pattern)):
        if verify_embedding(pattern, text, e):
            return e
    return None


def occurs(pattern: ArcAnnotatedSequence, text: ArcAnnotatedSequence) -> Embedding | None:
    """Lexicographically smallest embedding of ``pattern`` into ``text``, or None."""
    k, m = len(pattern), len(text)
    if k > m:
        return None
    if k == 0:
        return ()
    p_partner = pattern.single_partner()
    t_partner = text.single_partner()
    if p_partner is None or t_partner is None:
        return _generic_search(pattern, text)
    return _single_touch_search(pattern, text, p_partner, t_partner)


def _single_touch_search(pattern, text, p_partner, t_partner) -> Embedding | None:
    # Every base has at most one arc, so all arc constraints are carried as
    # forward obligations: ``required`` pins future pattern positions to text
    # positions, ``forbidden`` bans text positions whose arc would otherwise
    # survive without a pattern counterpart.
    k, m = len(pattern), len(text)
    pseq, tseq = pattern.seq, text.seq
    failed: set = set()
    path: list[int] = []

    def search(t: int, start: int, required: frozenset, forbidden: frozenset) -> bool:
        # t: next pattern position (1-based); start: first usable text position
        if t > k:
            return True
        key = (t, start, required, forbidden)
        if key in failed:
            return False
        req = dict(required)
        if t in req:
            candidates = [req[t]] if req[t] >= start else []
        else:
            candidates = range(start, m - (k - t) + 1)
        token = pseq[t - 1]
        pt = p_partner[t]
        pinned = {target for pos, target in required if pos != t}
        for p in candidates:
            if tseq[p - 1] != token or p in forbidden or p in pinned:
                continue
            tp = t_partner[p]
            new_req = required
            new_forb = forbidden
            if pt > t:
                # Pattern arc opens here: text must offer an arc opening at p.
                if tp <= p:
                    continue
                new_req = required | {(pt, tp)}
            elif not pt and tp > p:
                new_forb = forbidden | {tp}
            # A closing pattern arc was pinned to p when it opened; an unpaired
            # pattern base whose text partner is an earlier image had p banned.
            if pt < t:
                new_req = frozenset(item for item in new_req if item[0] != t)
            new_forb = frozenset(x for x in new_forb if x > p)
            path.append(p)
            if search(t + 1, p + 1, new_req, new_forb):
                return True
            path.pop()
        failed.add(key)
        return False

    if search(1, 1, frozenset(), frozenset()):
        return tuple(path)
    return None


def _generic_search(pattern, text) -> Embedding | None:
    """Plain backtracking for bases with several arcs; checks each new pair against all earlier ones."""
    k, m = len(pattern), len(text)
    p_arcs = pattern.arc_set()
    t_arcs = text.arc_set()
    path: list[int] = []

    def compatible(t: int, p: int) -> bool:
        for u, q in enumerate(path, start=1):
            if ((u, t) in p_arcs) != ((q, p) in t_arcs):
                return False
        return True

    def search(t: int, start: int) -> bool:
        if t > k:
            return True
        for p in range(start, m - (k - t) + 1):
            if text.seq[p - 1] == pattern.seq[t - 1] and compatible(t, p):
                path.append(p)
                if search(t + 1, p + 1):
                    return True
                path.pop()
        return False

    return tuple(path) if search(1, 1) else None


def compose(inner: Sequence[int], outer: Sequence[int]) -> Embedding:
    """Compose A->B and B->C embeddings into A->C."""
    return tuple(outer[p - 1] for p in inner)


def format_embedding(e: Sequence[int]) -> str:
    return ("map: " + " ".join(str(p) for p in e)).rstrip()


def parse_embedding(line: str) -> Embedding:
    key, sep, rest = line.strip().partition(":")
    if not sep or key.strip() != "map":
        raise ParseError(f"expected 'map:' line, got {line.strip()!r}")
    try:
        return tuple(int(x) for x in rest.split())
    except ValueError:
        raise ParseError(f"non-integer position in {line.strip()!r}") from None
