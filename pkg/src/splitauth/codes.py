"""Splitting authentication codes and their encoding-matrix text format.

An authentication code here is a family of encoding rules over u source
states and a fixed message universe.  Under rule e, source s may be sent as
any message in the cell e(s); cells of one rule are pairwise disjoint, so an
accepted message decodes to a unique source.  When every cell has the same
size c the code is c-splitting.  Rules with varying cell sizes are accepted
everywhere they are meaningful (validation, bounds, game evaluation); only
the constructors insist on uniformity, because they build codes from designs.

The correspondence with splitting designs is mechanical: a block with u
sub-blocks *is* an encoding rule once each sub-block is assigned to a source.
`design_to_code` assigns sources in canonical sub-block order (ascending least
point) after verifying the design, and `code_to_design` forgets the source
labels again.  Composing the two is the same as canonicalizing.

Encoding-matrix file format (mirrors the usual tabular presentation):

    messages 1 2 3 4 5 6 7 8 9      (optional; otherwise the union of cells)
          s_1    s_2
    e_1   {1,2}  {3,5}
    e_2   {2,3}  {4,6}

'#' starts a comment; blank lines are ignored.  The column header names the
sources s_1..s_u; each following row is an optional row label plus exactly u
brace-delimited cells of comma-separated integer message labels.  Labels map
to dense messages 0..v-1 in increasing order and are recorded on the code.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .designs import SplittingDesign, canonicalize, verify_splitting_design
from .errors import InputError, ParseError, StructureError, UnverifiedDesignError

Rule = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AuthCode:
    """Encoding rules over dense messages 0..num_messages-1.

    `rules[e][s]` is the sorted cell of messages rule e allows for source s.
    Cells of one rule are pairwise disjoint and nonempty; every rule spans the
    same number of sources.  `message_labels` maps dense message i to its
    display label and must be strictly increasing.
    """

    num_messages: int
    rules: tuple[Rule, ...]
    message_labels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        normal = tuple(
            tuple(tuple(sorted(cell)) for cell in rule) for rule in self.rules
        )
        object.__setattr__(self, "rules", normal)
        if not self.message_labels:
            object.__setattr__(self, "message_labels", tuple(range(self.num_messages)))
        self._validate()

    def _validate(self) -> None:
        if not isinstance(self.num_messages, int) or self.num_messages < 1:
            raise StructureError(f"message count must be positive, got {self.num_messages!r}")
        if not self.rules:
            raise StructureError("code has no encoding rules")
        if len(self.message_labels) != self.num_messages:
            raise StructureError(
                f"label map covers {len(self.message_labels)} messages, expected {self.num_messages}"
            )
        if any(
            self.message_labels[i] >= self.message_labels[i + 1]
            for i in range(self.num_messages - 1)
        ):
            raise StructureError("message labels must be strictly increasing")
        u = len(self.rules[0])
        if u < 1:
            raise StructureError("rules need at least one source")
        for ei, rule in enumerate(self.rules):
            if len(rule) != u:
                raise StructureError(f"rule {ei} has {len(rule)} cells, expected {u}")
            seen: set[int] = set()
            for si, cell in enumerate(rule):
                if not cell:
                    raise StructureError(f"rule {ei} cell {si} is empty")
                for m in cell:
                    if not isinstance(m, int) or not 0 <= m < self.num_messages:
                        raise StructureError(f"rule {ei} holds out-of-range message {m!r}")
                    if m in seen:
                        raise StructureError(
                            f"rule {ei} repeats message {m}: cells must be disjoint"
                        )
                    seen.add(m)

    @property
    def num_sources(self) -> int:
        return len(self.rules[0])

    @property
    def num_rules(self) -> int:
        return len(self.rules)

    @property
    def splitting_number(self) -> int | None:
        """Common cell size c when the code is c-splitting, else None."""
        sizes = {len(cell) for rule in self.rules for cell in rule}
        return sizes.pop() if len(sizes) == 1 else None

    def label_of(self, message: int) -> int:
        return self.message_labels[message]


def _check_rule(code: AuthCode, rule: int) -> Rule:
    if not isinstance(rule, int) or not 0 <= rule < code.num_rules:
        raise InputError(f"rule index {rule!r} is outside 0..{code.num_rules - 1}")
    return code.rules[rule]


def _check_message(code: AuthCode, message: int) -> int:
    if not isinstance(message, int) or not 0 <= message < code.num_messages:
        raise InputError(f"message {message!r} is outside 0..{code.num_messages - 1}")
    return message


def encode(code: AuthCode, rule: int, source: int, split: int) -> int:
    """Message sent for `source` under `rule` with the given splitting choice.

    `split` indexes the sorted cell, so it ranges over 0..len(cell)-1 (0..c-1
    for a c-splitting code).
    """
    cells = _check_rule(code, rule)
    if not isinstance(source, int) or not 0 <= source < code.num_sources:
        raise InputError(f"source index {source!r} is outside 0..{code.num_sources - 1}")
    cell = cells[source]
    if not isinstance(split, int) or not 0 <= split < len(cell):
        raise InputError(f"split index {split!r} is outside 0..{len(cell) - 1}")
    return cell[split]


def decode(code: AuthCode, rule: int, message: int) -> int | None:
    """Source whose cell contains `message` under `rule`; None means reject.

    Reject is a first-class verdict, not an error: it is how the receiver
    treats a message outside every cell of the active rule.
    """
    cells = _check_rule(code, rule)
    _check_message(code, message)
    for source, cell in enumerate(cells):
        if message in cell:
            return source
    return None


def valid_messages(code: AuthCode, rule: int) -> frozenset[int]:
    """All messages the receiver accepts under `rule`."""
    return frozenset(m for cell in _check_rule(code, rule) for m in cell)


def source_trace(code: AuthCode, rule: int, messages: Iterable[int]) -> frozenset[int]:
    """Sources a set of observed messages pins down under `rule`.

    Messages outside every cell contribute nothing (the empty trace for a
    rejected singleton is how callers see that nothing was learned).
    """
    cells = _check_rule(code, rule)
    observed = frozenset(_check_message(code, m) for m in messages)
    return frozenset(
        source for source, cell in enumerate(cells) if observed.intersection(cell)
    )


def design_to_code(design: SplittingDesign, t: int) -> AuthCode:
    """Encoding rule per block: source s_j gets the j-th sub-block in canonical order.

    The design must verify as a splitting t-design with coverage 1 and t >= 2;
    otherwise UnverifiedDesignError carries the failing report.  Block order is
    preserved, so rule i corresponds to block i.
    """
    if not isinstance(t, int) or t < 2:
        raise InputError(f"code construction needs strength t >= 2, got {t!r}")
    report = verify_splitting_design(design, t, 1)
    if not report.passed:
        raise UnverifiedDesignError(
            f"design is not a splitting {t}-design with coverage 1: "
            f"subset {report.counterexample[0]} is covered {report.counterexample[1]} times",
            report,
        )
    rules = tuple(
        tuple(sorted(block, key=lambda sub: sub[0])) for block in design.blocks
    )
    return AuthCode(
        num_messages=design.v, rules=rules, message_labels=design.labels
    )


def code_to_design(code: AuthCode) -> SplittingDesign:
    """Forget source assignment: one block per rule, cells become sub-blocks.

    Requires uniform cell sizes (sub-blocks of one design share their size).
    The result is returned in canonical form.
    """
    if code.splitting_number is None:
        raise StructureError(
            "cells vary in size; only a c-splitting code forms a design"
        )
    return canonicalize(
        SplittingDesign(v=code.num_messages, blocks=code.rules, labels=code.message_labels)
    )


def canonical_form(code: AuthCode) -> AuthCode:
    """Normal form for comparing codes that differ only in presentation.

    Cells of each rule are ordered by least message (re-assigning sources,
    which the construction fixes arbitrarily anyway) and rules sort
    lexicographically.  The deception game only sees each rule's family of
    cells, so this preserves every security figure.  Idempotent.
    """
    rules = tuple(
        sorted(tuple(sorted(rule, key=lambda cell: cell[0])) for rule in code.rules)
    )
    return AuthCode(
        num_messages=code.num_messages, rules=rules, message_labels=code.message_labels
    )


# ---------------------------------------------------------------------------
# Encoding-matrix text format.
# ---------------------------------------------------------------------------

_CELL_RE = re.compile(r"\{([^{}]*)\}")
_SOURCE_RE = re.compile(r"s_(\d+)$")


def parse_matrix(text: str) -> AuthCode:
    """Parse the encoding-matrix format into an AuthCode."""
    declared: list[int] | None = None
    num_sources: int | None = None
    rows: list[list[list[int]]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("messages"):
            if declared is not None:
                raise ParseError("duplicate messages line", lineno)
            if num_sources is not None:
                raise ParseError("messages line must precede the column header", lineno)
            try:
                declared = [int(tok) for tok in line.split()[1:]]
            except ValueError:
                raise ParseError("messages line holds a non-integer", lineno)
            if len(set(declared)) != len(declared):
                raise ParseError("messages line repeats a label", lineno)
            if not declared:
                raise ParseError("messages line declares no labels", lineno)
            continue
        if num_sources is None:
            names = line.split()
            expected = [f"s_{k}" for k in range(1, len(names) + 1)]
            if names != expected:
                raise ParseError(
                    f"column header must read {' '.join(expected[:3])} ... in order", lineno
                )
            num_sources = len(names)
            continue
        cells = _CELL_RE.findall(line)
        if len(cells) != num_sources:
            raise ParseError(
                f"row has {len(cells)} cells, header names {num_sources} sources", lineno
            )
        prefix = line[: line.index("{")].strip()
        if prefix and (len(prefix.split()) != 1 or "}" in prefix):
            raise ParseError(f"unexpected text {prefix!r} before the first cell", lineno)
        row: list[list[int]] = []
        seen: set[int] = set()
        for col, body in enumerate(cells, 1):
            items = [piece.strip() for piece in body.split(",")]
            if items == [""]:
                raise ParseError("cell is empty", lineno, col)
            try:
                labels = [int(piece) for piece in items]
            except ValueError:
                raise ParseError("cell holds a non-integer", lineno, col)
            if len(set(labels)) != len(labels):
                raise ParseError("cell repeats a label", lineno, col)
            overlap = seen.intersection(labels)
            if overlap:
                raise ParseError(
                    f"label {sorted(overlap)[0]} appears in two cells of one rule", lineno, col
                )
            seen.update(labels)
            row.append(labels)
        rows.append(row)

    if num_sources is None:
        raise ParseError("file has no column header line")
    if not rows:
        raise ParseError("file declares no encoding rules")

    used = {x for row in rows for cell in row for x in cell}
    if declared is not None:
        universe = sorted(declared)
        stray = sorted(used.difference(universe))
        if stray:
            raise ParseError(f"cell label {stray[0]} is missing from the messages line")
    else:
        universe = sorted(used)

    dense = {label: i for i, label in enumerate(universe)}
    rules = tuple(
        tuple(tuple(sorted(dense[x] for x in cell)) for cell in row) for row in rows
    )
    return AuthCode(
        num_messages=len(universe), rules=rules, message_labels=tuple(universe)
    )


def format_matrix(code: AuthCode) -> str:
    """Render an AuthCode as an aligned encoding matrix (lossless round trip)."""
    labels = code.message_labels
    celltexts = [
        ["{" + ",".join(str(labels[m]) for m in cell) + "}" for cell in rule]
        for rule in code.rules
    ]
    names = [f"s_{k}" for k in range(1, code.num_sources + 1)]
    rowtags = [f"e_{k}" for k in range(1, code.num_rules + 1)]
    tagwidth = max(len(tag) for tag in rowtags)
    widths = [
        max(len(names[s]), max(len(row[s]) for row in celltexts))
        for s in range(code.num_sources)
    ]
    lines = ["messages " + " ".join(str(x) for x in labels)]
    header = " " * tagwidth + "  " + "  ".join(
        names[s].ljust(widths[s]) for s in range(code.num_sources)
    )
    lines.append(header.rstrip())
    for tag, row in zip(rowtags, celltexts):
        line = tag.ljust(tagwidth) + "  " + "  ".join(
            row[s].ljust(widths[s]) for s in range(code.num_sources)
        )
        lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def load_matrix(path: str | Path) -> AuthCode:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def store_matrix(code: AuthCode, path: str | Path) -> None:
    Path(path).write_text(format_matrix(code), encoding="utf-8")
