"""Longest arc-preserving common subsequence (LAPCS) solvers.

Three routes to the same quantity:

* ``lapcs_bruteforce`` enumerates subsets of the first sequence (tiny inputs only);
* ``lapcs_parameterized`` enumerates candidate sequences of a fixed length
  with every admissible arc annotation and tests occurrence in both inputs;
* ``lapcs_branch_and_bound`` searches match decisions depth first, pruned by
  the plain LCS of the remaining suffixes.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

from .arcseq import (
    Arc,
    ArcAnnotatedSequence,
    Level,
    SizeGuardError,
    ValidationError,
    keep_positions,
    serialize,
)
from .occurrence import (
    BRUTE_FORCE_TEXT_LIMIT,
    Embedding,
    brute_force_occurs,
    format_embedding,
    occurs,
)

BRUTE_FORCE_LIMIT = 14


@dataclass(frozen=True)
class LapcsSolution:
    common: ArcAnnotatedSequence
    embed1: Embedding
    embed2: Embedding
    optimal: bool

    @property
    def length(self) -> int:
        return len(self.common)

    def to_text(self) -> str:
        return (
            f"length: {self.length}\n"
            f"optimal: {'true' if self.optimal else 'false'}\n"
            + serialize(self.common)
            + format_embedding(self.embed1)
            + "\n"
            + format_embedding(self.embed2)
            + "\n"
        )


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 10_000_000
    time_limit: float = 60.0

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ValidationError("search budget limits must be positive")


class Decision(enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


EMPTY = ArcAnnotatedSequence(())


def _empty_solution(optimal: bool) -> LapcsSolution:
    return LapcsSolution(EMPTY, (), (), optimal)


# -- exhaustive ------------------------------------------------------------


def lapcs_bruteforce(s1: ArcAnnotatedSequence, s2: ArcAnnotatedSequence) -> LapcsSolution:
    if len(s1) > BRUTE_FORCE_LIMIT:
        raise SizeGuardError(f"brute-force LAPCS refuses first sequence longer than {BRUTE_FORCE_LIMIT}")
    find = brute_force_occurs if len(s2) <= BRUTE_FORCE_TEXT_LIMIT else occurs
    m = len(s1)
    for size in range(min(m, len(s2)), 0, -1):
        for kept in combinations(range(1, m + 1), size):
            candidate = keep_positions(s1, kept)
            e2 = find(candidate, s2)
            if e2 is not None:
                return LapcsSolution(candidate, kept, e2, True)
    return _empty_solution(True)


# -- parameterized enumeration ---------------------------------------------


def enumerate_stem_annotations(k: int) -> Iterator[frozenset[Arc]]:
    """All arc sets over 1..k of level at most STEM; there are 2**(k-1) of them."""
    if k < 1:
        raise ValidationError("annotation length must be at least 1")
    for size in range(0, k + 1, 2):
        for chosen in combinations(range(1, k + 1), size):
            half = size // 2
            yield frozenset(Arc(chosen[i], chosen[size - 1 - i]) for i in range(half))


def enumerate_nested_annotations(k: int) -> Iterator[frozenset[Arc]]:
    """All non-crossing arc sets over 1..k in which no base touches two arcs."""

    def rec(lo: int, hi: int) -> Iterator[tuple[Arc, ...]]:
        if lo > hi:
            yield ()
            return
        yield from rec(lo + 1, hi)
        for j in range(lo + 1, hi + 1):
            for inside in rec(lo + 1, j - 1):
                for outside in rec(j + 1, hi):
                    yield (Arc(lo, j),) + inside + outside

    for arcs in rec(1, k):
        yield frozenset(arcs)


def _common_token_sequences(t1: tuple[str, ...], t2: tuple[str, ...], k: int, alphabet):
    """Token sequences of length k over ``alphabet`` that are plain subsequences of both inputs."""

    def advance(seq, start, token):
        for p in range(start, len(seq)):
            if seq[p] == token:
                return p + 1
        return -1

    def rec(prefix, i, j):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for token in alphabet:
            ni = advance(t1, i, token)
            if ni < 0:
                continue
            nj = advance(t2, j, token)
            if nj < 0:
                continue
            prefix.append(token)
            yield from rec(prefix, ni, nj)
            prefix.pop()

    yield from rec([], 0, 0)


def lapcs_parameterized(
    s1: ArcAnnotatedSequence,
    s2: ArcAnnotatedSequence,
    k: int,
    level: Level = Level.STEM,
    prune_prefixes: bool = True,
) -> LapcsSolution | None:
    """Find a common arc-preserving subsequence of length exactly ``k`` at ``level``.

    Candidates are generated over the shared alphabet, each with every
    annotation allowed at ``level``, and tested for occurrence in both
    inputs. With ``prune_prefixes`` the token strings are restricted to plain
    common subsequences before annotations are tried; this skips only
    candidates that cannot occur anyway.
    """
    if k < 0:
        raise ValidationError("k must be non-negative")
    if level not in (Level.STEM, Level.NESTED):
        raise ValidationError("parameterized solver supports STEM or NESTED only")
    if k == 0:
        return _empty_solution(False)
    if k > min(len(s1), len(s2)):
        return None
    alphabet = sorted(set(s1.seq) & set(s2.seq))
    if prune_prefixes:
        token_seqs: Iterator = _common_token_sequences(s1.seq, s2.seq, k, alphabet)
    else:
        token_seqs = product(alphabet, repeat=k)
    annotate = enumerate_stem_annotations if level == Level.STEM else enumerate_nested_annotations
    annotations = list(annotate(k))
    for tokens in token_seqs:
        for arcs in annotations:
            candidate = ArcAnnotatedSequence(tokens, arcs)
            e1 = occurs(candidate, s1)
            if e1 is None:
                continue
            e2 = occurs(candidate, s2)
            if e2 is not None:
                return LapcsSolution(candidate, e1, e2, False)
    return None


# -- branch and bound ------------------------------------------------------


def suffix_lcs_table(t1: tuple[str, ...], t2: tuple[str, ...]) -> list[list[int]]:
    """table[i][j] = LCS length of t1[i:] and t2[j:] (0-based suffixes)."""
    n1, n2 = len(t1), len(t2)
    table = [[0] * (n2 + 1) for _ in range(n1 + 1)]
    for i in range(n1 - 1, -1, -1):
        row, below = table[i], table[i + 1]
        a = t1[i]
        for j in range(n2 - 1, -1, -1):
            if a == t2[j]:
                row[j] = below[j + 1] + 1
            else:
                row[j] = below[j] if below[j] >= row[j + 1] else row[j + 1]
    return table


def lcs_upper_bound(s1: ArcAnnotatedSequence, s2: ArcAnnotatedSequence) -> int:
    """Plain LCS length of the token strings, ignoring arcs."""
    return suffix_lcs_table(s1.seq, s2.seq)[0][0]


class _BudgetExhausted(Exception):
    pass


def lapcs_branch_and_bound(
    s1: ArcAnnotatedSequence,
    s2: ArcAnnotatedSequence,
    budget: SearchBudget | None = None,
    target: int | None = None,
) -> LapcsSolution:
    """Exact LAPCS by depth-first search over matched position pairs.

    Matched pairs are chosen in increasing order in both sequences; a pair
    (i, j) is admissible when every earlier pair (i', j') has an arc to i in
    the first sequence exactly when it has an arc to j in the second. A
    branch is cut as soon as its matched count plus the plain LCS of the
    remaining suffixes cannot beat the incumbent.

    If ``target`` is given the search stops once a solution of that length
    is found (the result is then not flagged optimal unless it also matches
    the LCS bound).
    """
    budget = budget or SearchBudget()
    t1, t2 = s1.seq, s2.seq
    n1, n2 = len(t1), len(t2)
    lcs = suffix_lcs_table(t1, t2)
    upper = lcs[0][0]
    # 1-based partner tables; None means some base has several arcs.
    part1 = s1.single_partner()
    part2 = s2.single_partner()
    single = part1 is not None and part2 is not None
    arcs1, arcs2 = s1.arc_set(), s2.arc_set()

    match1 = [0] * (n1 + 2)  # position in s1 -> matched position in s2
    match2 = [0] * (n2 + 2)
    path: list[tuple[int, int]] = []
    best: list[tuple[int, int]] = []
    best_len = 0
    nodes = 0
    deadline = time.monotonic() + budget.time_limit
    stop_at = upper if target is None else min(upper, target)

    def admissible(i: int, j: int) -> bool:
        if single:
            p1, p2 = part1[i], part2[j]
            m1 = match1[p1] if 0 < p1 < i else 0
            m2 = match2[p2] if 0 < p2 < j else 0
            if m1 or m2:
                return m1 == p2 and m2 == p1
            return True
        for i0, j0 in path:
            if ((i0, i) in arcs1) != ((j0, j) in arcs2):
                return False
        return True

    def children(i: int, j: int) -> Iterator[tuple[int, int]]:
        # i, j: 1-based first positions still available
        depth = len(path)
        for a in range(i, n1 + 1):
            if depth + lcs[a - 1][j - 1] <= best_len:
                return
            tok = t1[a - 1]
            row = lcs[a]
            for b in range(j, n2 + 1):
                if depth + 1 + row[b] <= best_len:
                    # row[b] only shrinks as b grows
                    break
                if t2[b - 1] == tok:
                    yield a, b

    stack = [children(1, 1)]
    complete = True
    try:
        while stack:
            nodes += 1
            if nodes > budget.node_limit:
                raise _BudgetExhausted
            if not nodes & 1023 and time.monotonic() > deadline:
                raise _BudgetExhausted
            try:
                i, j = next(stack[-1])
            except StopIteration:
                stack.pop()
                if path:
                    i0, j0 = path.pop()
                    match1[i0] = 0
                    match2[j0] = 0
                continue
            if not admissible(i, j):
                continue
            path.append((i, j))
            match1[i] = j
            match2[j] = i
            if len(path) > best_len:
                best_len = len(path)
                best = list(path)
                if best_len >= stop_at:
                    break
            stack.append(children(i + 1, j + 1))
    except _BudgetExhausted:
        complete = False
    if best_len >= upper:
        complete = True
    elif target is not None and best_len >= target:
        complete = False
    return _solution_from_pairs(s1, best, complete)


def _solution_from_pairs(s1, pairs, optimal: bool) -> LapcsSolution:
    e1 = tuple(i for i, _ in pairs)
    e2 = tuple(j for _, j in pairs)
    return LapcsSolution(keep_positions(s1, e1), e1, e2, optimal)


def decide_lapcs(
    s1: ArcAnnotatedSequence,
    s2: ArcAnnotatedSequence,
    kprime: int,
    budget: SearchBudget | None = None,
) -> tuple[Decision, LapcsSolution | None]:
    """Is there a common arc-preserving subsequence of length >= kprime?"""
    if kprime <= 0:
        return Decision.YES, _empty_solution(False)
    if kprime > lcs_upper_bound(s1, s2):
        return Decision.NO, None
    sol = lapcs_branch_and_bound(s1, s2, budget, target=kprime)
    if sol.length >= kprime:
        return Decision.YES, sol
    if sol.optimal:
        return Decision.NO, sol
    return Decision.UNKNOWN, sol


def lapcs_length_by_enumeration(
    s1: ArcAnnotatedSequence, s2: ArcAnnotatedSequence, level: Level = Level.STEM
) -> LapcsSolution:
    """Optimal solution via the monotone decision: the largest k the enumeration accepts."""
    best = _empty_solution(True)
    for k in range(1, min(len(s1), len(s2)) + 1):
        found = lapcs_parameterized(s1, s2, k, level)
        if found is None:
            break
        best = found
    return LapcsSolution(best.common, best.embed1, best.embed2, True)


__all__ = [
    "BRUTE_FORCE_LIMIT",
    "Decision",
    "LapcsSolution",
    "SearchBudget",
    "decide_lapcs",
    "enumerate_nested_annotations",
    "enumerate_stem_annotations",
    "lapcs_branch_and_bound",
    "lapcs_bruteforce",
    "lapcs_length_by_enumeration",
    "lapcs_parameterized",
    "lcs_upper_bound",
    "suffix_lcs_table",
]
