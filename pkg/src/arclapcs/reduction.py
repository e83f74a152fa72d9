"""3SAT to LAPCS(STEM, STEM): the snail construction.

Each clause i contributes a pair of clause gadgets (C_i^1, C_i^2) and a pair
of propagation gadgets (P_i^1, P_i^2); the middle pair (S_M^1, S_M^2) keeps
a variable from being both true and false. Long runs of unique padding
symbols (W_i, V_i) pin the components in place.

Token names::

    x3, nx3     variable 3 and its negation
    s1 s2 s3    literal selectors (shared by all clauses)
    y4          the run Q_4 (n + 1 copies)
    w2, v2      padding runs W_2, V_2
    R5.2        R_5^2
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .arcseq import (
    Arc,
    ArcAnnotatedSequence,
    Level,
    ParseError,
    ValidationError,
    classify_level,
    parse_sequence,
    serialize,
)


class CnfError(ValueError):
    """Invalid 3-CNF input; ``errors`` lists every problem found."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class CnfInstance:
    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        errors = validate_cnf(self.n, self.clauses)
        if errors:
            raise CnfError(errors)

    @property
    def q(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.q}"]
        lines.extend(" ".join(str(lit) for lit in c) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"


def validate_cnf(n: int, clauses) -> list[str]:
    errors = []
    if n < 3:
        errors.append(f"need at least 3 variables, got {n}")
    if not clauses:
        errors.append("need at least one clause")
    for idx, clause in enumerate(clauses, start=1):
        if len(clause) != 3:
            errors.append(f"clause {idx} has {len(clause)} literals, expected 3")
        variables = [abs(lit) for lit in clause]
        if any(lit == 0 for lit in clause):
            errors.append(f"clause {idx} contains literal 0")
        if len(set(variables)) != len(variables):
            errors.append(f"clause {idx} repeats a variable: {' '.join(map(str, clause))}")
        for v in variables:
            if v > n:
                errors.append(f"clause {idx} uses variable {v} > n = {n}")
    return errors


def parse_cnf(text: str) -> CnfInstance:
    n = declared_q = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError(f"bad header {line!r}", lineno)
            try:
                n, declared_q = int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno) from None
            continue
        if n is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for field_ in line.split():
            try:
                lit = int(field_)
            except ValueError:
                raise ParseError(f"bad literal {field_!r}", lineno) from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if n is None:
        raise ParseError("missing 'p cnf' header")
    errors = []
    if current:
        errors.append("last clause is not terminated by 0")
    if declared_q != len(clauses):
        errors.append(f"header declares {declared_q} clauses, found {len(clauses)}")
    errors.extend(validate_cnf(n, clauses))
    if errors:
        raise CnfError(errors)
    return CnfInstance(n, tuple(clauses))


# -- tokens and formulas ---------------------------------------------------


def x(k: int) -> str:
    return f"x{k}"


def nx(k: int) -> str:
    return f"nx{k}"


def s(j: int) -> str:
    return f"s{j}"


def y(i: int) -> str:
    return f"y{i}"


def R(i: int, j: int) -> str:
    return f"R{i}.{j}"


def default_padding(n: int, q: int) -> int:
    return 20 * max(q, n) ** 2


def padding_threshold(n: int, q: int) -> int:
    """Smallest padding for which the size argument of the reverse direction goes through."""
    return 6 * q * n + 10 * q + n + 1


def k_prime(n: int, q: int, padding: int | None = None) -> int:
    if padding is None:
        padding = default_padding(n, q)
    return 2 * q * padding + 6 * q * n + 8 * q + n


def expected_lengths(n: int, q: int, padding: int) -> tuple[int, int]:
    return q * (12 * n + 18 + 2 * padding) + 2 * n, q * (16 * n + 13 + 2 * padding) + 2 * n


def chi(occurrence: int, token: str, tokens, start: int = 1) -> int:
    """Global 1-based position of the ``occurrence``-th ``token`` in ``tokens``.

    ``tokens`` is a span whose first element sits at global position ``start``.
    """
    seen = 0
    for offset, t in enumerate(tokens):
        if t == token:
            seen += 1
            if seen == occurrence:
                return start + offset
    raise LookupError(f"fewer than {occurrence} occurrences of {token!r}")


# -- instance --------------------------------------------------------------


@dataclass(frozen=True)
class ReductionInstance:
    cnf: CnfInstance
    s1: ArcAnnotatedSequence
    s2: ArcAnnotatedSequence
    kprime: int
    padding: int
    provenance1: tuple[str, ...]
    provenance2: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.cnf.n

    @property
    def q(self) -> int:
        return self.cnf.q

    @cached_property
    def _spans(self) -> dict[tuple[int, str], tuple[int, int]]:
        spans: dict[tuple[int, str], tuple[int, int]] = {}
        for which, prov in ((1, self.provenance1), (2, self.provenance2)):
            for pos, label in enumerate(prov, start=1):
                lo, _ = spans.get((which, label), (pos, pos))
                spans[(which, label)] = (lo, pos)
        return spans

    def span(self, label: str) -> tuple[int, int]:
        """Inclusive global bounds of a component, e.g. ``span("C_2^1")``."""
        return self._spans[(self._which(label), label)]

    def _which(self, label: str) -> int:
        if label.endswith("^1"):
            return 1
        if label.endswith("^2"):
            return 2
        raise KeyError(f"component label {label!r} must end in ^1 or ^2")

    def sequence(self, which: int) -> ArcAnnotatedSequence:
        return self.s1 if which == 1 else self.s2

    def chi(self, occurrence: int, token: str, label: str) -> int:
        which = self._which(label)
        lo, hi = self._spans[(which, label)]
        return chi(occurrence, token, self.sequence(which).seq[lo - 1 : hi], start=lo)

    def run(self, occurrence: int, token: str, label: str) -> list[int]:
        """Positions of the ``occurrence``-th Q run (n + 1 copies of ``token``) in a component.

        Adjacent runs such as the doubled Q_{q+i} of P_i^1 are told apart by length.
        """
        which = self._which(label)
        lo, hi = self._spans[(which, label)]
        seq = self.sequence(which).seq
        hits = [pos for pos in range(lo, hi + 1) if seq[pos - 1] == token]
        size = self.n + 1
        block = hits[(occurrence - 1) * size : occurrence * size]
        if len(block) != size or block[-1] - block[0] != size - 1:
            raise LookupError(f"no run {occurrence} of {token!r} in {label}")
        return block

    def padding_positions(self, which: int) -> list[int]:
        prov = self.provenance1 if which == 1 else self.provenance2
        return [p for p, label in enumerate(prov, start=1) if label[0] in "WV"]


class _Builder:
    def __init__(self):
        self.tokens: list[str] = []
        self.labels: list[str] = []

    def add(self, label: str, tokens):
        self.tokens.extend(tokens)
        self.labels.extend([label] * len(tokens))


def build_instance(cnf: CnfInstance, padding: int | None = None) -> ReductionInstance:
    n, q = cnf.n, cnf.q
    if padding is None:
        padding = default_padding(n, q)
    if padding < 1:
        raise ValidationError("padding must be at least 1")
    warnings = []
    if padding < padding_threshold(n, q):
        warnings.append(
            f"padding {padding} is below {padding_threshold(n, q)}: the reverse direction "
            "of the reduction is not guaranteed"
        )
    half = (n + 1) // 2

    # role[i][k] = (j, positive) when variable k is the j-th literal of clause i
    role = [
        {abs(lit): (j, lit > 0) for j, lit in enumerate(clause, start=1)} for clause in cnf.clauses
    ]

    def Q(i):
        return [y(i)] * (n + 1)

    def c1(i):
        middle = []
        for k in range(1, n + 1):
            middle.append(x(k))
            if k in role[i - 1]:
                middle.append(s(role[i - 1][k][0]))
            middle.append(nx(k))
        return [R(i, 3), *Q(i), R(i, 2), *Q(i), *middle, *Q(i), R(i, 2), *Q(i), R(i, 1)]

    def p1(i):
        def block(ks):
            return [t for k in ks for t in (nx(k), x(k))]

        qi = q + i
        return [
            *Q(qi), *Q(qi), R(qi, 3),
            *block(range(n, half, -1)), R(qi, 2), *block(range(half, 0, -1)),
            R(qi, 1), *Q(qi), *Q(qi),
        ]

    def c2_block(i, occurrence, k):
        j, positive = role[i - 1].get(k, (0, True))
        if j != occurrence:
            return [x(k), nx(k)]
        return [x(k), nx(k), s(j)] if positive else [s(j), x(k), nx(k)]

    def c2(i):
        def run(occ, ks):
            return [t for k in ks for t in c2_block(i, occ, k)]

        return [
            *run(1, range(1, n + 1)), R(i, 3), *Q(i),
            *run(2, range(1, half + 1)), R(i, 2), *run(2, range(half + 1, n + 1)),
            *Q(i), R(i, 1), *run(3, range(1, n + 1)),
        ]

    def p2(i):
        def block(ks):
            return [t for k in ks for t in (nx(k), x(k))]

        qi = q + i
        return [
            *block(range(n, 0, -1)), R(qi, 1), *Q(qi),
            *block(range(n, half, -1)), R(qi, 2), *block(range(half, 0, -1)),
            *Q(qi), R(qi, 3), *block(range(n, 0, -1)),
        ]

    b1, b2 = _Builder(), _Builder()
    for i in range(q, 0, -1):
        b1.add(f"C_{i}^1", c1(i))
        b2.add(f"C_{i}^2", c2(i))
        b1.add(f"W_{i}", [f"w{i}"] * padding)
        b2.add(f"W_{i}", [f"w{i}"] * padding)
    b1.add("S_M^1", [t for k in range(1, n + 1) for t in (x(k), nx(k))])
    b2.add("S_M^2", [t for k in range(1, n + 1) for t in (nx(k), x(k))])
    for i in range(1, q + 1):
        b1.add(f"V_{i}", [f"v{i}"] * padding)
        b2.add(f"V_{i}", [f"v{i}"] * padding)
        b1.add(f"P_{i}^1", p1(i))
        b2.add(f"P_{i}^2", p2(i))

    plain = ReductionInstance(
        cnf,
        ArcAnnotatedSequence(tuple(b1.tokens)),
        ArcAnnotatedSequence(tuple(b2.tokens)),
        k_prime(n, q, padding),
        padding,
        tuple(b1.labels),
        tuple(b2.labels),
        tuple(warnings),
    )

    arcs1 = []
    for i in range(0, q):
        left = "S_M^1" if i == 0 else f"C_{i}^1"
        right = f"P_{i + 1}^1"
        for k in range(1, n + 1):
            for tok in (x(k), nx(k)):
                arcs1.append(Arc(plain.chi(1, tok, left), plain.chi(1, tok, right)))
    arcs2 = []
    for i in range(1, q + 1):
        left, right = f"C_{i}^2", f"P_{i}^2"
        for j in range(1, 4):
            for k in range(1, n + 1):
                for tok in (x(k), nx(k)):
                    arcs2.append(Arc(plain.chi(j, tok, left), plain.chi(4 - j, tok, right)))
            arcs2.append(Arc(plain.chi(1, R(i, j), left), plain.chi(1, R(q + i, j), right)))

    return ReductionInstance(
        cnf,
        ArcAnnotatedSequence(plain.s1.seq, frozenset(arcs1)),
        ArcAnnotatedSequence(plain.s2.seq, frozenset(arcs2)),
        plain.kprime,
        padding,
        plain.provenance1,
        plain.provenance2,
        plain.warnings,
    )


# -- audit -----------------------------------------------------------------


@dataclass
class AuditReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    counts1: Counter = field(default_factory=Counter)
    counts2: Counter = field(default_factory=Counter)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failed(self) -> list[str]:
        return [name for name, ok, _ in self.checks if not ok]

    def __getitem__(self, name: str) -> bool:
        for check, ok, _ in self.checks:
            if check == name:
                return ok
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [
            f"CHECK {name}: {'PASS' if ok else 'FAIL'}{' ' + detail if detail else ''}"
            for name, ok, detail in self.checks
        ]


def _expect_counts(counts: Counter, expected: dict[str, int]) -> list[str]:
    return [f"{tok}={counts[tok]}!={want}" for tok, want in expected.items() if counts[tok] != want]


def audit(inst: ReductionInstance) -> AuditReport:
    n, q, P = inst.n, inst.q, inst.padding
    report = AuditReport(counts1=Counter(inst.s1.seq), counts2=Counter(inst.s2.seq))
    c1, c2 = report.counts1, report.counts2

    for which, seq in ((1, inst.s1), (2, inst.s2)):
        level = classify_level(seq)
        report.add(f"level_s{which}", level <= Level.STEM, level.name)

    want1, want2 = expected_lengths(n, q, P)
    report.add("length_s1", len(inst.s1) == want1, f"{len(inst.s1)} (expected {want1})")
    report.add("length_s2", len(inst.s2) == want2, f"{len(inst.s2)} (expected {want2})")
    want_k = k_prime(n, q, P)
    report.add("kprime", inst.kprime == want_k, f"{inst.kprime} (expected {want_k})")

    report.add("arcs_p1", len(inst.s1.arcs) == 2 * n * q, f"{len(inst.s1.arcs)} (expected {2 * n * q})")
    report.add(
        "arcs_p2", len(inst.s2.arcs) == q * (6 * n + 3), f"{len(inst.s2.arcs)} (expected {q * (6 * n + 3)})"
    )

    literals1 = {tok: 2 * q + 1 for k in range(1, n + 1) for tok in (x(k), nx(k))}
    literals2 = {tok: 6 * q + 1 for k in range(1, n + 1) for tok in (x(k), nx(k))}
    bad = _expect_counts(c1, literals1)
    report.add("literals_s1", not bad, " ".join(bad) or f"2q+1 = {2 * q + 1} each")
    bad = _expect_counts(c2, literals2)
    report.add("literals_s2", not bad, " ".join(bad) or f"6q+1 = {6 * q + 1} each")

    runs1 = {y(i): 4 * (n + 1) for i in range(1, 2 * q + 1)}
    runs2 = {y(i): 2 * (n + 1) for i in range(1, 2 * q + 1)}
    bad = _expect_counts(c1, runs1)
    report.add("q_runs_s1", not bad, " ".join(bad) or "4 runs of n+1 each")
    bad = _expect_counts(c2, runs2)
    report.add("q_runs_s2", not bad, " ".join(bad) or "2 runs of n+1 each")

    r1 = {}
    r2 = {}
    for i in range(1, q + 1):
        for j in range(1, 4):
            r1[R(i, j)] = 2 if j == 2 else 1
            r1[R(q + i, j)] = 1
            r2[R(i, j)] = r2[R(q + i, j)] = 1
    bad = _expect_counts(c1, r1)
    report.add("r_symbols_s1", not bad, " ".join(bad))
    bad = _expect_counts(c2, r2)
    report.add("r_symbols_s2", not bad, " ".join(bad))

    pads = {f"{c}{i}": P for i in range(1, q + 1) for c in "wv"}
    bad = _expect_counts(c1, pads) + _expect_counts(c2, pads)
    report.add("padding_runs", not bad, " ".join(bad))

    bad = []
    if len(inst.provenance1) != len(inst.s1) or len(inst.provenance2) != len(inst.s2):
        bad.append("provenance length mismatch")
    else:
        for which in (1, 2):
            seq = inst.sequence(which).seq
            for i in range(1, q + 1):
                label = f"C_{i}^{which}"
                lo, hi = inst.span(label)
                local = Counter(seq[lo - 1 : hi])
                for j in range(1, 4):
                    if local[s(j)] != 1:
                        bad.append(f"{label}:{s(j)}={local[s(j)]}")
    report.add("selectors_per_clause", not bad, " ".join(bad))
    return report


# -- files -----------------------------------------------------------------

_META_KEYS = ("kprime", "padding", "n", "q")


def write_instance(inst: ReductionInstance, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "s1.aas").write_text(serialize(inst.s1), encoding="utf-8")
    (out / "s2.aas").write_text(serialize(inst.s2), encoding="utf-8")
    (out / "meta.txt").write_text(
        f"kprime: {inst.kprime}\npadding: {inst.padding}\nn: {inst.n}\nq: {inst.q}\n", encoding="utf-8"
    )
    prov = ["# s1"]
    prov.extend(f"{p} {label}" for p, label in enumerate(inst.provenance1, start=1))
    prov.append("# s2")
    prov.extend(f"{p} {label}" for p, label in enumerate(inst.provenance2, start=1))
    (out / "provenance.txt").write_text("\n".join(prov) + "\n", encoding="utf-8")
    (out / "instance.cnf").write_text(inst.cnf.to_dimacs(), encoding="utf-8")


def read_instance(in_dir: str | Path) -> ReductionInstance:
    d = Path(in_dir)
    s1 = parse_sequence((d / "s1.aas").read_text(encoding="utf-8"))
    s2 = parse_sequence((d / "s2.aas").read_text(encoding="utf-8"))
    cnf = parse_cnf((d / "instance.cnf").read_text(encoding="utf-8"))
    meta = {}
    for lineno, line in enumerate((d / "meta.txt").read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        m = re.fullmatch(r"\s*(\w+):\s*(-?\d+)\s*", line)
        if not m:
            raise ParseError(f"bad metadata line {line!r}", lineno)
        meta[m.group(1)] = int(m.group(2))
    missing = [key for key in _META_KEYS if key not in meta]
    if missing:
        raise ParseError(f"metadata missing {', '.join(missing)}")
    if (meta["n"], meta["q"]) != (cnf.n, cnf.q):
        raise ParseError("metadata n/q disagree with instance.cnf")
    provs: dict[str, list[str]] = {"s1": [], "s2": []}
    current = None
    for lineno, line in enumerate((d / "provenance.txt").read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            current = line[1:].strip()
            if current not in provs:
                raise ParseError(f"unknown provenance section {current!r}", lineno)
            continue
        fields = line.split()
        if current is None or len(fields) != 2 or fields[0] != str(len(provs[current]) + 1):
            raise ParseError(f"bad provenance line {line!r}", lineno)
        provs[current].append(fields[1])
    warnings = ()
    if meta["padding"] < padding_threshold(cnf.n, cnf.q):
        warnings = (f"padding {meta['padding']} is below {padding_threshold(cnf.n, cnf.q)}",)
    return ReductionInstance(
        cnf, s1, s2, meta["kprime"], meta["padding"], tuple(provs["s1"]), tuple(provs["s2"]), warnings
    )
