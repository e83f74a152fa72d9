"""Certificates linking satisfying assignments and long common subsequences.

``build_witness`` turns a satisfying assignment into an explicit common
subsequence of length k' of the two snail sequences; ``extract_assignment``
reads a satisfying assignment back off such a certificate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

from .arcseq import (
    ArcAnnotatedSequence,
    ParseError,
    SizeGuardError,
    ValidationError,
    delete_positions,
    parse_sequence,
    serialize,
)
from .occurrence import Embedding, format_embedding, parse_embedding, verify_embedding
from .reduction import CnfInstance, R, ReductionInstance, AuditReport, nx, s, x, y

SAT_BRUTE_FORCE_LIMIT = 24


class ConstructionError(RuntimeError):
    """The certificate builder produced something that is not a common subsequence."""


class InconsistentCertificate(ValueError):
    """A certificate does not encode a consistent truth assignment."""


@dataclass(frozen=True)
class Assignment:
    values: tuple[bool, ...]  # values[k - 1] is the value of variable k

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> bool:
        return self.values[k - 1]

    def literal(self, lit: int) -> bool:
        return self.values[abs(lit) - 1] == (lit > 0)

    def satisfies(self, cnf: CnfInstance) -> bool:
        if self.n != cnf.n:
            return False
        return all(any(self.literal(lit) for lit in clause) for clause in cnf.clauses)

    def to_text(self) -> str:
        return ",".join(str(k if v else -k) for k, v in enumerate(self.values, start=1))


def parse_assignment(text: str, n: int) -> Assignment:
    """Parse ``"1,-2,3,-4"``; every variable must appear exactly once."""
    values: dict[int, bool] = {}
    for item in text.split(","):
        item = item.strip()
        try:
            lit = int(item)
        except ValueError:
            raise ValidationError(f"bad literal {item!r} in assignment") from None
        k = abs(lit)
        if not 1 <= k <= n:
            raise ValidationError(f"variable {k} out of range 1..{n}")
        if k in values:
            raise ValidationError(f"variable {k} assigned twice")
        values[k] = lit > 0
    missing = [k for k in range(1, n + 1) if k not in values]
    if missing:
        raise ValidationError(f"unassigned variables: {', '.join(map(str, missing))}")
    return Assignment(tuple(values[k] for k in range(1, n + 1)))


def sat_bruteforce(cnf: CnfInstance) -> Assignment | None:
    if cnf.n > SAT_BRUTE_FORCE_LIMIT:
        raise SizeGuardError(f"brute-force SAT refuses more than {SAT_BRUTE_FORCE_LIMIT} variables")
    for values in product((False, True), repeat=cnf.n):
        a = Assignment(values)
        if a.satisfies(cnf):
            return a
    return None


@dataclass(frozen=True)
class WitnessCertificate:
    deleted1: tuple[int, ...]
    deleted2: tuple[int, ...]
    common: ArcAnnotatedSequence
    embed1: Embedding
    embed2: Embedding

    @property
    def length(self) -> int:
        return len(self.common)

    def to_text(self) -> str:
        return "\n".join(
            [
                f"length: {self.length}",
                ("del1: " + " ".join(map(str, self.deleted1))).rstrip(),
                ("del2: " + " ".join(map(str, self.deleted2))).rstrip(),
                serialize(self.common).rstrip("\n"),
                format_embedding(self.embed1),
                format_embedding(self.embed2),
            ]
        ) + "\n"


def parse_certificate(text: str) -> WitnessCertificate:
    length = None
    deleted: dict[str, tuple[int, ...]] = {}
    aas_lines: list[str] = []
    maps: list[Embedding] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"unexpected line {line!r}", lineno)
        key = key.strip()
        try:
            if key == "length":
                length = int(rest)
            elif key in ("del1", "del2"):
                deleted[key] = tuple(int(v) for v in rest.split())
            elif key in ("seq", "arc"):
                aas_lines.append(line)
            elif key == "map":
                maps.append(parse_embedding(line))
            else:
                raise ParseError(f"unknown key {key!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"non-integer value in {line!r}", lineno) from None
    if length is None or set(deleted) != {"del1", "del2"} or len(maps) != 2:
        raise ParseError("certificate needs length, del1, del2, a sequence and two map lines")
    common = parse_sequence("\n".join(aas_lines))
    if length != len(common):
        raise ParseError(f"declared length {length} but sequence has {len(common)} bases")
    return WitnessCertificate(deleted["del1"], deleted["del2"], common, maps[0], maps[1])


def _chosen_literal_index(clause, a: Assignment) -> int:
    true_indices = [j for j, lit in enumerate(clause, start=1) if a.literal(lit)]
    if not true_indices:
        raise ValidationError("assignment does not satisfy the formula")
    return max(true_indices)


def build_witness(inst: ReductionInstance, a: Assignment) -> WitnessCertificate:
    """Deletion sets S_d for both sequences from a satisfying assignment.

    Per variable, the false literal is removed from every clause gadget and
    the true one from every propagation gadget of the first sequence. Per
    clause, the satisfied literal with the largest index j selects which
    selector, Q runs and R symbols go.
    """
    cnf = inst.cnf
    if a.n != cnf.n or not a.satisfies(cnf):
        raise ValidationError("assignment does not satisfy the formula")
    n, q = cnf.n, cnf.q
    chi, run = inst.chi, inst.run
    d1: set[int] = set()
    d2: set[int] = set()

    for k in range(1, n + 1):
        # the literal made false by a, and its complement
        false_tok, true_tok = (nx(k), x(k)) if a[k] else (x(k), nx(k))
        for j in range(1, q + 1):
            d1.add(chi(1, false_tok, f"C_{j}^1"))
            d1.add(chi(1, true_tok, f"P_{j}^1"))
        d1.add(chi(1, false_tok, "S_M^1"))
        d2.add(chi(1, false_tok, "S_M^2"))

    for i, clause in enumerate(cnf.clauses, start=1):
        j = _chosen_literal_index(clause, a)
        C1, P1, C2, P2 = f"C_{i}^1", f"P_{i}^1", f"C_{i}^2", f"P_{i}^2"
        qi = q + i
        if j == 1:
            d1 |= {chi(1, R(i, 3), C1), chi(1, R(i, 2), C1), chi(1, s(2), C1), chi(1, s(3), C1)}
            d1 |= {*run(1, y(i), C1), *run(2, y(i), C1)}
            d1 |= {chi(1, R(qi, 2), P1), chi(1, R(qi, 1), P1), *run(3, y(qi), P1), *run(4, y(qi), P1)}
            d2 |= {chi(1, R(i, 3), C2), chi(1, s(2), C2), chi(1, s(3), C2)}
            d2 |= {chi(1, R(qi, 1), P2), chi(1, R(qi, 2), P2)}
            c_gone, p_gone, c_split, p_split = (2, 3), (1, 2), 1, 3
        elif j == 2:
            d1 |= {chi(1, R(i, 2), C1), chi(1, s(1), C1), chi(1, s(3), C1), chi(2, R(i, 2), C1)}
            d1 |= {*run(2, y(i), C1), *run(3, y(i), C1)}
            d1 |= {chi(1, R(qi, 3), P1), chi(1, R(qi, 1), P1), *run(2, y(qi), P1), *run(3, y(qi), P1)}
            d2 |= {chi(1, R(i, 2), C2), chi(1, s(1), C2), chi(1, s(3), C2)}
            d2 |= {chi(1, R(qi, 1), P2), chi(1, R(qi, 3), P2)}
            c_gone, p_gone, c_split, p_split = (1, 3), (1, 3), 2, 2
        else:
            d1 |= {chi(1, s(1), C1), chi(1, s(2), C1), chi(2, R(i, 2), C1), chi(1, R(i, 1), C1)}
            d1 |= {*run(3, y(i), C1), *run(4, y(i), C1)}
            d1 |= {chi(1, R(qi, 3), P1), chi(1, R(qi, 2), P1), *run(1, y(qi), P1), *run(2, y(qi), P1)}
            d2 |= {chi(1, R(i, 1), C2), chi(1, s(1), C2), chi(1, s(2), C2)}
            d2 |= {chi(1, R(qi, 2), P2), chi(1, R(qi, 3), P2)}
            c_gone, p_gone, c_split, p_split = (1, 2), (2, 3), 3, 1
        for k in range(1, n + 1):
            for tok in (x(k), nx(k)):
                d2 |= {chi(occ, tok, C2) for occ in c_gone}
                d2 |= {chi(occ, tok, P2) for occ in p_gone}
            false_tok, true_tok = (nx(k), x(k)) if a[k] else (x(k), nx(k))
            d2.add(chi(c_split, false_tok, C2))
            d2.add(chi(p_split, true_tok, P2))

    common1 = delete_positions(inst.s1, d1)
    common2 = delete_positions(inst.s2, d2)
    if common1 != common2:
        raise ConstructionError("the two deletion sets leave different subsequences")
    cert = WitnessCertificate(
        tuple(sorted(d1)),
        tuple(sorted(d2)),
        common1,
        _kept(len(inst.s1), d1),
        _kept(len(inst.s2), d2),
    )
    if cert.length != inst.kprime:
        raise ConstructionError(f"certificate length {cert.length} != k' = {inst.kprime}")
    return cert


def _kept(m: int, deleted) -> tuple[int, ...]:
    gone = set(deleted)
    return tuple(p for p in range(1, m + 1) if p not in gone)


def extract_assignment(inst: ReductionInstance, cert: WitnessCertificate) -> Assignment:
    """Read the assignment off a certificate's surviving selectors and middle gadget."""
    cnf = inst.cnf
    gone = set(cert.deleted1)
    forced: dict[int, bool] = {}
    for i, clause in enumerate(cnf.clauses, start=1):
        conserved = [j for j in range(1, 4) if inst.chi(1, s(j), f"C_{i}^1") not in gone]
        if not conserved:
            raise InconsistentCertificate(f"clause {i}: no selector symbol conserved")
        for j in conserved:
            lit = clause[j - 1]
            value = lit > 0
            if forced.get(abs(lit), value) != value:
                raise InconsistentCertificate(f"variable {abs(lit)} forced both true and false")
            forced[abs(lit)] = value
    values = []
    for k in range(1, cnf.n + 1):
        if k in forced:
            values.append(forced[k])
            continue
        pos_kept = inst.chi(1, x(k), "S_M^1") not in gone
        neg_kept = inst.chi(1, nx(k), "S_M^1") not in gone
        if pos_kept == neg_kept:
            raise InconsistentCertificate(f"variable {k}: middle gadget does not fix a value")
        values.append(pos_kept)
    return Assignment(tuple(values))


def verify_witness(inst: ReductionInstance, cert: WitnessCertificate) -> AuditReport:
    """Re-check a certificate against an instance; one entry per property."""
    report = AuditReport()
    n, q = inst.n, inst.q
    kept = {}
    for which, deleted, embed in ((1, cert.deleted1, cert.embed1), (2, cert.deleted2, cert.embed2)):
        seq = inst.sequence(which)
        try:
            residue = delete_positions(seq, deleted)
        except ValidationError as exc:
            report.add(f"kept_spell_s{which}", False, str(exc))
            kept[which] = set()
            continue
        kept[which] = set(_kept(len(seq), deleted))
        same = residue == cert.common and tuple(sorted(kept[which])) == tuple(embed)
        report.add(f"kept_spell_s{which}", same, "" if same else "kept positions do not spell the common sequence")
    for which, embed in ((1, cert.embed1), (2, cert.embed2)):
        ok = verify_embedding(cert.common, inst.sequence(which), embed)
        report.add(f"embedding_s{which}", ok)
    report.add("length", cert.length == inst.kprime, f"{cert.length} (k' = {inst.kprime})")

    lost = [p for w in (1, 2) for p in inst.padding_positions(w) if p not in kept[w]]
    report.add("padding_conserved", not lost, f"{len(lost)} padding symbols deleted" if lost else "")

    intact = [
        f"s{w}:({a.left},{a.right})"
        for w in (1, 2)
        for a in inst.sequence(w).sorted_arcs()
        if a.left in kept[w] and a.right in kept[w]
    ]
    report.add("arcs_broken", not intact, " ".join(intact[:5]))

    mixed = []
    for k in range(1, n + 1):
        choices = set()
        for label in ["S_M^1"] + [f"C_{i}^1" for i in range(1, q + 1)]:
            has_pos = inst.chi(1, x(k), label) in kept[1]
            has_neg = inst.chi(1, nx(k), label) in kept[1]
            choices.add((has_pos, has_neg))
        if len(choices) != 1 or choices.pop() not in ((True, False), (False, True)):
            mixed.append(f"x{k}")
    report.add("literal_uniformity", not mixed, " ".join(mixed))

    counts = Counter(cert.common.seq)
    off = []
    for k in range(1, n + 1):
        if counts[x(k)] + counts[nx(k)] != 2 * q + 1:
            off.append(f"x{k}")
    for i in range(1, 2 * q + 1):
        if counts[y(i)] != 2 * (n + 1):
            off.append(y(i))
    if sum(counts[s(j)] for j in range(1, 4)) != q:
        off.append("selectors")
    for i in range(1, q + 1):
        lower = [j for j in range(1, 4) if counts[R(i, j)]]
        upper = [j for j in range(1, 4) if counts[R(q + i, j)]]
        multiplicities = [counts[R(i, j)] for j in lower] + [counts[R(q + i, j)] for j in upper]
        if len(lower) != 2 or len(upper) != 1 or set(lower + upper) != {1, 2, 3} or max(multiplicities) != 1:
            off.append(f"R_clause{i}")
    report.add("composition", not off, " ".join(off))

    try:
        a = extract_assignment(inst, cert)
        report.add("extraction", a.satisfies(inst.cnf), a.to_text())
    except InconsistentCertificate as exc:
        report.add("extraction", False, str(exc))
    return report
