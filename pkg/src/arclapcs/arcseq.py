"""Arc-annotated sequences, arc relations and the five structure levels.

Positions are 1-based throughout. A sequence is a tuple of whitespace-free
tokens plus a frozenset of arcs; both are immutable once built.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Raised when a value violates a structural invariant."""


class ParseError(ValueError):
    """Raised for malformed text input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeGuardError(ValueError):
    """Raised when an exhaustive routine is asked to run past its size guard."""


@enum.unique
class Level(enum.IntEnum):
    PLAIN = 0
    STEM = 1
    NESTED = 2
    CROSSING = 3
    UNLIMITED = 4


@dataclass(frozen=True, order=True)
class Arc:
    left: int
    right: int

    def __post_init__(self):
        if not (isinstance(self.left, int) and isinstance(self.right, int)):
            raise ValidationError(f"arc endpoints must be integers: {self!r}")
        if self.left < 1:
            raise ValidationError(f"arc endpoint out of range: {self.left}")
        if self.left >= self.right:
            raise ValidationError(f"arc needs left < right, got ({self.left}, {self.right})")

    def __iter__(self):
        yield self.left
        yield self.right


def crossing(a: Arc, b: Arc) -> bool:
    return a.left < b.left < a.right < b.right or b.left < a.left < b.right < a.right


def embedded(a: Arc, b: Arc) -> bool:
    """True iff ``a`` lies strictly inside ``b``."""
    return b.left < a.left < a.right < b.right


def _check_token(token: str) -> None:
    if not isinstance(token, str) or not token or any(ch.isspace() for ch in token):
        raise ValidationError(f"invalid symbol {token!r}")


@dataclass(frozen=True)
class ArcAnnotatedSequence:
    seq: tuple[str, ...]
    arcs: frozenset[Arc] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        arcs = self.arcs
        if not isinstance(arcs, frozenset) or not all(isinstance(a, Arc) for a in arcs):
            arcs = list(arcs)
            converted = frozenset(a if isinstance(a, Arc) else Arc(*a) for a in arcs)
            if len(converted) != len(arcs):
                raise ValidationError("duplicate arc")
            object.__setattr__(self, "arcs", converted)
        for token in self.seq:
            _check_token(token)
        m = len(self.seq)
        for arc in self.arcs:
            if arc.right > m:
                raise ValidationError(f"arc ({arc.left}, {arc.right}) exceeds length {m}")

    @classmethod
    def from_text(cls, tokens: str, arcs: Iterable[tuple[int, int]] = ()) -> "ArcAnnotatedSequence":
        """Convenience constructor: ``from_text("a b c", [(1, 3)])``."""
        return cls(tuple(tokens.split()), frozenset(Arc(i, j) for i, j in arcs))

    def __len__(self) -> int:
        return len(self.seq)

    def __getitem__(self, position: int) -> str:
        if not 1 <= position <= len(self.seq):
            raise IndexError(position)
        return self.seq[position - 1]

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)

    def arc_set(self) -> set[tuple[int, int]]:
        return {(a.left, a.right) for a in self.arcs}

    def partners(self) -> dict[int, list[int]]:
        """Map each position to the positions it is joined to by an arc."""
        out: dict[int, list[int]] = {}
        for a in self.arcs:
            out.setdefault(a.left, []).append(a.right)
            out.setdefault(a.right, []).append(a.left)
        return out

    def single_partner(self) -> list[int] | None:
        """Per-position arc partner (0 = none), indexed 1..m; None if a base touches two arcs."""
        partner = [0] * (len(self.seq) + 1)
        for a in self.arcs:
            if partner[a.left] or partner[a.right]:
                return None
            partner[a.left] = a.right
            partner[a.right] = a.left
        return partner

    def level(self) -> Level:
        return classify_level(self)

    def __str__(self) -> str:
        return serialize(self)


def classify_level(s: ArcAnnotatedSequence) -> Level:
    """Smallest level of the hierarchy that ``s`` belongs to."""
    if not s.arcs:
        return Level.PLAIN
    touched = Counter()
    for a in s.arcs:
        touched[a.left] += 1
        touched[a.right] += 1
    if max(touched.values()) > 1:
        return Level.UNLIMITED
    arcs = sorted(s.arcs)
    # With single-touch endpoints, arcs are pairwise nested or disjoint iff the
    # bracket word they form is balanced.
    stack: list[int] = []
    closing = {a.right: a.left for a in arcs}
    opening = {a.left for a in arcs}
    for pos in range(1, len(s) + 1):
        if pos in opening:
            stack.append(pos)
        elif pos in closing:
            if not stack or stack[-1] != closing[pos]:
                return Level.CROSSING
            stack.pop()
    rights = [a.right for a in arcs]
    if all(r1 > r2 for r1, r2 in zip(rights, rights[1:])):
        return Level.STEM
    return Level.NESTED


def delete_positions(s: ArcAnnotatedSequence, deleted: Iterable[int]) -> ArcAnnotatedSequence:
    """Remove the given positions; arcs with a deleted endpoint vanish with it."""
    gone = set(deleted)
    m = len(s)
    for p in gone:
        if not (isinstance(p, int) and 1 <= p <= m):
            raise ValidationError(f"position {p!r} out of range 1..{m}")
    if not gone:
        return s
    new_index = [0] * (m + 1)
    tokens = []
    for p in range(1, m + 1):
        if p not in gone:
            tokens.append(s.seq[p - 1])
            new_index[p] = len(tokens)
    arcs = frozenset(
        Arc(new_index[a.left], new_index[a.right])
        for a in s.arcs
        if new_index[a.left] and new_index[a.right]
    )
    return ArcAnnotatedSequence(tuple(tokens), arcs)


def keep_positions(s: ArcAnnotatedSequence, kept: Sequence[int]) -> ArcAnnotatedSequence:
    keep = set(kept)
    return delete_positions(s, [p for p in range(1, len(s) + 1) if p not in keep])


# -- text format -----------------------------------------------------------


def parse_sequence(text: str) -> ArcAnnotatedSequence:
    tokens: tuple[str, ...] | None = None
    arcs: list[tuple[int, tuple[int, int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'seq:' or 'arc:', got {line!r}", lineno)
        key = key.strip()
        if key == "seq":
            if tokens is not None:
                raise ParseError("more than one 'seq:' line", lineno)
            tokens = tuple(rest.split())
        elif key == "arc":
            fields = rest.split()
            if len(fields) != 2:
                raise ParseError(f"'arc:' needs two positions, got {rest.strip()!r}", lineno)
            try:
                i, j = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(f"non-integer arc endpoint in {rest.strip()!r}", lineno) from None
            arcs.append((lineno, (i, j)))
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    if tokens is None:
        raise ParseError("missing 'seq:' line")
    seen: set[tuple[int, int]] = set()
    for lineno, (i, j) in arcs:
        if not 1 <= i < j <= len(tokens):
            raise ParseError(f"arc ({i}, {j}) needs 1 <= i < j <= {len(tokens)}", lineno)
        if (i, j) in seen:
            raise ParseError(f"duplicate arc ({i}, {j})", lineno)
        seen.add((i, j))
    return ArcAnnotatedSequence(tokens, frozenset(Arc(i, j) for i, j in seen))


def serialize(s: ArcAnnotatedSequence) -> str:
    lines = [("seq: " + " ".join(s.seq)).rstrip()]
    lines.extend(f"arc: {a.left} {a.right}" for a in s.sorted_arcs())
    return "\n".join(lines) + "\n"
